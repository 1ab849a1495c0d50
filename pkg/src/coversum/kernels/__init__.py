"""Kernel engine selection.

The compiled extension is preferred when present; set COVERSUM_PURE_PYTHON=1
to force the pure-Python implementations. Both engines implement identical
algorithms with identical tie-breaking, so results never depend on which
one is loaded.
"""

import os

from . import pure as _pure

if os.environ.get("COVERSUM_PURE_PYTHON"):
    _impl = _pure
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

ENGINE = _impl.ENGINE
lcs_length = _impl.lcs_length
lcs_match_mask = _impl.lcs_match_mask
min_cover_dp = _impl.min_cover_dp


def engines():
    """Return the available engine modules keyed by name (for benchmarks)."""
    found = {"python": _pure}
    try:
        from . import _speedups
        found["c"] = _speedups
    except ImportError:
        pass
    return found

"""Pure-Python kernels.

These are the reference implementations of the hot inner loops. The
compiled twin in _speedups.pyx follows the exact same iteration order and
tie-breaking, so both engines produce identical results on identical
inputs; only the speed differs.
"""

ENGINE = "python"

_INF = 1 << 30


def lcs_length(a, b):
    """Length of a longest common subsequence of two int sequences."""
    m, n = len(a), len(b)
    if m == 0 or n == 0:
        return 0
    if n > m:  # keep the rolling row short
        a, b = b, a
        m, n = n, m
    prev = [0] * (n + 1)
    cur = [0] * (n + 1)
    for i in range(1, m + 1):
        ai = a[i - 1]
        for j in range(1, n + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                up = prev[j]
                left = cur[j - 1]
                cur[j] = up if up >= left else left
        prev, cur = cur, prev
    return prev[n]


def lcs_match_mask(ref, cand):
    """Positions in ``ref`` matched by one canonical LCS against ``cand``.

    Traceback rule (fixed so both engines agree): on equal tokens take the
    diagonal; otherwise move up when dp[i-1][j] >= dp[i][j-1], else left.
    Returns ascending position indices.
    """
    m, n = len(ref), len(cand)
    if m == 0 or n == 0:
        return []
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        ri = ref[i - 1]
        row = dp[i]
        up = dp[i - 1]
        for j in range(1, n + 1):
            if ri == cand[j - 1]:
                row[j] = up[j - 1] + 1
            else:
                a = up[j]
                b = row[j - 1]
                row[j] = a if a >= b else b
    matched = []
    i, j = m, n
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1]:
            matched.append(i - 1)
            i -= 1
            j -= 1
        elif dp[i - 1][j] >= dp[i][j - 1]:
            i -= 1
        else:
            j -= 1
    matched.reverse()
    return matched


def min_cover_dp(masks, n_units):
    """Minimum-cardinality cover of ``n_units`` bits by the given bitmasks.

    Bottom-up over reachable covered-subsets: from each state, the lowest
    uncovered unit must be covered next, so only masks containing it are
    tried (ascending index; strict improvement wins ties). Returns the
    selected mask indices in ascending order.

    Caller guarantees every unit is covered by at least one mask and
    n_units is small enough for a 2**n_units table.
    """
    if n_units == 0:
        return []
    if n_units >= 26:
        raise ValueError("dp table too large; use branch-and-bound")
    full = (1 << n_units) - 1
    size = full + 1
    covering = [[] for _ in range(n_units)]
    for s, mask in enumerate(masks):
        bit = 0
        rem = mask
        while rem:
            if rem & 1:
                covering[bit].append(s)
            rem >>= 1
            bit += 1
    for unit in range(n_units):
        if not covering[unit]:
            raise ValueError(f"unit {unit} is covered by no sentence")
    dist = [_INF] * size
    parent = [0] * size
    choice = [-1] * size
    dist[0] = 0
    for state in range(size - 1):
        d = dist[state]
        if d == _INF:
            continue
        lowest = (~state & full)
        lowest = (lowest & -lowest).bit_length() - 1
        nd = d + 1
        for s in covering[lowest]:
            new = state | masks[s]
            if nd < dist[new]:
                dist[new] = nd
                parent[new] = state
                choice[new] = s
    selection = []
    state = full
    while state:
        selection.append(choice[state])
        state = parent[state]
    selection.sort()
    return selection

"""Summary construction: greedy cover heuristics, an exact minimum set
cover solver, and a relevance/redundancy knapsack optimizer.

All solvers are deterministic: score ties always go to the lowest sentence
index, and search orders are fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels
from .errors import UnknownMetricError, ZeroBudgetError
from .model import CoverageInstance, Summary, utility

__all__ = [
    "GreedyOptions",
    "SolverLimits",
    "SentenceScoreVector",
    "score_sentences",
    "greedy_cover",
    "exact_min_cover",
    "mcdonald_summarize",
    "truncate_to_words",
]

METRICS = ("size", "size_distinct", "tfidf")


@dataclass(frozen=True)
class GreedyOptions:
    """Knobs of the greedy selector.

    metric: size (uncovered token occurrences), size_distinct (uncovered
    distinct units) or tfidf. update rescores against the uncovered set
    after every pick; normalize divides scores by sentence word count;
    threshold stops selection once the picked sentences total that many
    words (otherwise selection runs to full coverage).
    """

    metric: str = "size_distinct"
    update: bool = True
    normalize: bool = False
    threshold: int | None = None
    smooth_idf: bool = False

    def __post_init__(self):
        if self.metric not in METRICS:
            raise UnknownMetricError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.threshold is not None and self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")


@dataclass(frozen=True)
class SolverLimits:
    """Resource caps for the exact solver.

    The subset-table strategy is used while 2**|reduced universe| fits in
    max_memo_entries; branch-and-bound handles larger instances and gives
    up (returning its best cover, flagged non-optimal) after max_nodes
    search nodes.
    """

    max_memo_entries: int = 1 << 20
    max_nodes: int = 2_000_000


@dataclass(frozen=True)
class SentenceScoreVector:
    scores: tuple
    tfidf: dict | None = None  # unit index -> tf*idf, when metric == "tfidf"


def _tfidf_table(instance: CoverageInstance, smooth: bool) -> dict:
    n = instance.n_sentences
    tf: dict = {}
    df: dict = {}
    for seq in instance.sentence_unit_seqs:
        for u in seq:
            tf[u] = tf.get(u, 0) + 1
        for u in set(seq):
            df[u] = df.get(u, 0) + 1
    table = {}
    for u, freq in tf.items():
        ratio = n / df[u]
        idf = math.log(1.0 + ratio) if smooth else math.log(ratio)
        table[u] = freq * idf
    return table


def score_sentences(
    instance: CoverageInstance,
    metric: str,
    covered: Iterable[int] = (),
    smooth_idf: bool = False,
) -> SentenceScoreVector:
    """Score every sentence against the not-yet-covered units.

    size counts uncovered token occurrences, size_distinct counts
    uncovered distinct units, tfidf sums tf*idf over uncovered distinct
    units where tf is the unit's frequency over the whole instance and
    idf = ln(sentences / sentences-containing-it). A unit present in
    every sentence therefore contributes nothing unless smooth_idf is on
    (which uses ln(1 + ratio) instead).
    """
    if metric not in METRICS:
        raise UnknownMetricError(f"metric must be one of {METRICS}, got {metric!r}")
    covered = set(covered)
    if metric == "size":
        scores = tuple(
            float(sum(1 for u in seq if u not in covered))
            for seq in instance.sentence_unit_seqs
        )
        return SentenceScoreVector(scores)
    if metric == "size_distinct":
        scores = tuple(
            float(len(cover - covered)) for cover in instance.cover_sets
        )
        return SentenceScoreVector(scores)
    table = _tfidf_table(instance, smooth_idf)
    scores = tuple(
        sum(table[u] for u in cover - covered) for cover in instance.cover_sets
    )
    return SentenceScoreVector(scores, tfidf=table)


def _argmax(scores: Sequence[float], candidates: Iterable[int]) -> tuple[int, float]:
    """Highest score wins; ties go to the lowest index."""
    best_i = -1
    best = -math.inf
    for i in candidates:
        if scores[i] > best:
            best = scores[i]
            best_i = i
    return best_i, best


def _summary_from_picks(
    instance: CoverageInstance, picks: Sequence[int], tag: str, optimal: bool | None = None
) -> Summary:
    ordered = sorted(picks)
    selected = tuple(instance.sentence_keys[i] for i in ordered)
    size = sum(instance.sentence_sizes[i] for i in ordered)
    summary = Summary(selected, size, 0.0, tag, optimal)
    return Summary(selected, size, utility(summary, instance), tag, optimal)


def greedy_cover(instance: CoverageInstance, opts: GreedyOptions | None = None) -> Summary:
    """Iteratively select the best-scoring sentence.

    Without a threshold the loop runs until every unit is covered (a
    distinct-gain fallback guards the degenerate case of an all-zero
    score round, so completeness always holds). With a threshold the loop
    runs until the selected sentences total at least that many words,
    switching to static scores once coverage gains hit zero.
    """
    opts = opts or GreedyOptions()
    n = instance.n_sentences
    all_units = frozenset(range(len(instance.universe)))
    word_counts = instance.sentence_word_counts
    table = _tfidf_table(instance, opts.smooth_idf) if opts.metric == "tfidf" else None

    def round_scores(covered):
        if opts.metric == "size":
            return [sum(1 for u in seq if u not in covered)
                    for seq in instance.sentence_unit_seqs]
        if opts.metric == "size_distinct":
            return [len(cover - covered) for cover in instance.cover_sets]
        return [sum(table[u] for u in cover - covered)
                for cover in instance.cover_sets]

    def adjusted(raw):
        if not opts.normalize:
            return raw
        return [s / word_counts[i] for i, s in enumerate(raw)]

    static_adj = adjusted(round_scores(frozenset()))
    covered: set = set()
    picks: list = []
    remaining = list(range(n))
    words = 0

    while remaining:
        if opts.threshold is not None:
            if words >= opts.threshold:
                break
        elif covered >= all_units:
            break
        if opts.update:
            scores = adjusted(round_scores(covered))
        else:
            scores = static_adj
        best_i, best = _argmax(scores, remaining)
        if best <= 0:
            if opts.threshold is not None:
                # Coverage gains are exhausted but the word budget is not:
                # keep filling by static score.
                best_i, _ = _argmax(static_adj, remaining)
            else:
                # Zero scores with uncovered units (possible under tfidf
                # when remaining idf weights vanish): fall back to
                # distinct coverage gain to finish the cover.
                gains = [len(instance.cover_sets[i] - covered) for i in range(n)]
                best_i, best_gain = _argmax(gains, remaining)
                if best_gain <= 0:
                    break
        picks.append(best_i)
        remaining.remove(best_i)
        covered |= instance.cover_sets[best_i]
        words += word_counts[best_i]

    flags = [opts.metric]
    if opts.update:
        flags.append("update")
    if opts.normalize:
        flags.append("normalize")
    if opts.threshold is not None:
        flags.append(f"threshold={opts.threshold}")
    tag = "greedy[{}] picks={}".format(",".join(flags), ",".join(map(str, picks)))
    return _summary_from_picks(instance, picks, tag)


def _reduce_cover_problem(cover_sets: Sequence[frozenset]):
    """Set-cover preprocessing: essential sentences, unit and sentence dominance.

    Returns (forced sentence indices, remaining sentence indices, residual
    unit set per remaining sentence, residual units). Iterates to a
    fixpoint; every step preserves the minimum cover cardinality and at
    least one optimal selection.
    """
    n = len(cover_sets)
    active = [i for i in range(n) if cover_sets[i]]
    residual = {i: set(cover_sets[i]) for i in active}
    uncovered = set().union(*cover_sets) if cover_sets else set()
    forced: list = []

    changed = True
    while changed and uncovered:
        changed = False

        # Essential sentences: sole coverer of some unit.
        coverers: dict = {u: [] for u in uncovered}
        for i in active:
            for u in residual[i]:
                coverers[u].append(i)
        essential = sorted({cov[0] for cov in coverers.values() if len(cov) == 1})
        if essential:
            for i in essential:
                forced.append(i)
                uncovered -= set(cover_sets[i])
            active = [i for i in active if i not in set(essential)]
            for i in active:
                residual[i] &= uncovered
            active = [i for i in active if residual[i]]
            changed = True
            continue

        # Unit dominance: if every sentence covering v also covers u,
        # covering v covers u for free, so u can be dropped.
        sigs = {u: frozenset(coverers[u]) for u in uncovered}
        keep = set()
        by_size = sorted(uncovered, key=lambda u: (len(sigs[u]), u))
        kept_sigs: list = []
        for u in by_size:
            sig = sigs[u]
            if any(k < sig for k in kept_sigs) or sig in kept_sigs:
                continue
            keep.add(u)
            kept_sigs.append(sig)
        if keep != uncovered:
            uncovered = keep
            for i in active:
                residual[i] &= uncovered
            active = [i for i in active if residual[i]]
            changed = True
            continue

        # Sentence dominance: drop a sentence whose residual units are a
        # subset of another's (on equal sets the lower index survives).
        drop = set()
        for i in active:
            ri = residual[i]
            for j in active:
                if j == i or j in drop:
                    continue
                rj = residual[j]
                if ri < rj or (ri == rj and j < i):
                    drop.add(i)
                    break
        if drop:
            active = [i for i in active if i not in drop]
            changed = True

    return forced, active, residual, uncovered


def _greedy_upper_bound(active, residual, uncovered):
    """Deterministic distinct-gain greedy cover of the residual problem."""
    covered: set = set()
    picks = []
    remaining = list(active)
    while covered < uncovered and remaining:
        best_i = remaining[0]
        best = -1
        for i in remaining:
            gain = len(residual[i] - covered)
            if gain > best:
                best = gain
                best_i = i
        picks.append(best_i)
        remaining.remove(best_i)
        covered |= residual[best_i]
    return picks


def _min_cover_bnb(active, residual, uncovered, limits: SolverLimits):
    """Branch-and-bound over big-int bitmasks. Returns (picks, optimal)."""
    units = sorted(uncovered)
    bit = {u: k for k, u in enumerate(units)}
    full = (1 << len(units)) - 1
    masks = {i: sum(1 << bit[u] for u in residual[i]) for i in active}
    covering = {u: [i for i in active if u in residual[i]] for u in units}

    best = _greedy_upper_bound(active, residual, uncovered)
    best_len = len(best)
    nodes = 0
    memo: dict = {}
    capped = False

    def lower_bound(missing: int) -> int:
        width = 0
        for i in active:
            c = (masks[i] & missing).bit_count()
            if c > width:
                width = c
        if width == 0:
            return 1 << 30
        return -(-missing.bit_count() // width)

    def search(covered_mask: int, chosen: list):
        nonlocal best, best_len, nodes, capped
        if covered_mask == full:
            if len(chosen) < best_len:
                best = list(chosen)
                best_len = len(chosen)
            return
        if nodes >= limits.max_nodes:
            capped = True
            return
        nodes += 1
        if len(chosen) + 1 >= best_len:
            return
        missing = full & ~covered_mask
        seen = memo.get(covered_mask)
        if seen is not None and seen <= len(chosen):
            return
        if len(memo) < limits.max_memo_entries:
            memo[covered_mask] = len(chosen)
        if len(chosen) + lower_bound(missing) >= best_len:
            return
        # Branch on the hardest unit: fewest covering sentences.
        pick_u = -1
        pick_cnt = 1 << 30
        for u in units:
            if missing & (1 << bit[u]):
                cnt = len(covering[u])
                if cnt < pick_cnt:
                    pick_cnt = cnt
                    pick_u = u
        for i in covering[pick_u]:
            chosen.append(i)
            search(covered_mask | masks[i], chosen)
            chosen.pop()
            if capped:
                return

    if full:
        search(0, [])
    else:
        best, best_len = [], 0
    return sorted(best), not capped


def exact_min_cover(instance: CoverageInstance, limits: SolverLimits | None = None) -> Summary:
    """Minimum-cardinality sentence selection covering every unit.

    Preprocessing (essential sentences, unit/sentence dominance) shrinks
    the problem; the residual is solved by a subset-table sweep when it
    fits limits.max_memo_entries, otherwise by branch-and-bound. When the
    branch-and-bound node cap is hit the best cover found so far is
    returned with optimal=False.
    """
    limits = limits or SolverLimits()
    forced, active, residual, uncovered = _reduce_cover_problem(instance.cover_sets)

    optimal = True
    picks = list(forced)
    if uncovered:
        n_units = len(uncovered)
        if n_units < 26 and (1 << n_units) <= limits.max_memo_entries:
            units = sorted(uncovered)
            bit = {u: k for k, u in enumerate(units)}
            masks = [sum(1 << bit[u] for u in residual[i]) for i in active]
            chosen = kernels.min_cover_dp(masks, n_units)
            picks.extend(active[c] for c in chosen)
            strategy = "dp"
        else:
            chosen, optimal = _min_cover_bnb(active, residual, uncovered, limits)
            picks.extend(chosen)
            strategy = "bnb"
    else:
        strategy = "reduced"

    tag = f"exact[{strategy},optimal={str(optimal).lower()}]"
    return _summary_from_picks(instance, picks, tag, optimal=optimal)


def _cosine(counts_a: dict, counts_b: dict) -> float:
    if len(counts_b) < len(counts_a):
        counts_a, counts_b = counts_b, counts_a
    dot = sum(c * counts_b.get(u, 0) for u, c in counts_a.items())
    if dot == 0:
        return 0.0
    na = math.sqrt(sum(c * c for c in counts_a.values()))
    nb = math.sqrt(sum(c * c for c in counts_b.values()))
    return dot / (na * nb)


def mcdonald_summarize(
    instance: CoverageInstance,
    budget: int,
    lambda_redundancy: float = 1.0,
    smooth_idf: bool = False,
) -> Summary:
    """Relevance-minus-redundancy selection under a word budget.

    Relevance is the static tf*idf sentence score plus a lead prior
    1/(1 + sentence index); redundancy between two sentences is the
    cosine of their unit count vectors. Solved as a 0-1 knapsack sweep
    where a sentence's redundancy is charged against the set already in
    the candidate solution, which makes the method approximate. The
    reported utility is the knapsack objective, not the coverage utility.
    """
    if budget < 1:
        raise ZeroBudgetError(f"word budget must be >= 1, got {budget}")
    n = instance.n_sentences
    tfidf = score_sentences(instance, "tfidf", (), smooth_idf).scores
    relevance = [
        tfidf[i] + 1.0 / (1.0 + instance.sentence_keys[i][1]) for i in range(n)
    ]
    counts = []
    for seq in instance.sentence_unit_seqs:
        c: dict = {}
        for u in seq:
            c[u] = c.get(u, 0) + 1
        counts.append(c)

    # table[w]: best (value, selection) using total word count <= w.
    table: list = [(0.0, ())] * (budget + 1)
    words = instance.sentence_word_counts
    for s in range(n):
        size = words[s]
        if size > budget:
            continue
        for w in range(budget, size - 1, -1):
            value, sel = table[w - size]
            penalty = sum(_cosine(counts[j], counts[s]) for j in sel)
            new_value = value + relevance[s] - lambda_redundancy * penalty
            if new_value > table[w][0]:
                table[w] = (new_value, sel + (s,))

    best_value, best_sel = 0.0, ()
    for w in range(budget + 1):
        if table[w][0] > best_value:
            best_value, best_sel = table[w]

    ordered = sorted(best_sel)
    selected = tuple(instance.sentence_keys[i] for i in ordered)
    size = sum(words[i] for i in ordered)
    tag = "mcdonald[lambda={:g}] picks={}".format(
        lambda_redundancy, ",".join(map(str, best_sel))
    )
    return Summary(selected, size, best_value, tag)


def truncate_to_words(text: str, limit: int) -> str:
    """First ``limit`` whitespace-separated words; shorter text is unchanged."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    words = text.split()
    if len(words) <= limit:
        return text
    return " ".join(words[:limit])

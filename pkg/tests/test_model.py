import itertools

import pytest

from conftest import doc_from, instance_from_sets
from coversum.errors import EmptyDocumentError, ZeroBudgetError
from coversum.model import (
    Summary,
    ThoughtUnitScheme,
    WeightPolicy,
    build_instance,
    ts_score,
    utility,
)


def summary_of(instance, positions):
    keys = tuple(instance.sentence_keys[i] for i in sorted(positions))
    s = Summary(keys, 0, 0.0, "test")
    return s


class TestBuildInstance:
    def test_containment_covers(self):
        inst = instance_from_sets([{"a", "b"}, {"b", "c"}])
        assert inst.universe == ("a", "b", "c")
        assert inst.cover_sets == (frozenset({0, 1}), frozenset({1, 2}))

    def test_stopword_scheme(self):
        inst = build_instance(doc_from(["the cat"]),
                              scheme=ThoughtUnitScheme.WORDS_MINUS_STOPWORDS)
        assert inst.universe == ("cat",)

    def test_stems_scheme(self):
        inst = build_instance(doc_from(["running runs"]),
                              scheme=ThoughtUnitScheme.STEMS)
        assert inst.universe == ("run",)

    def test_consensus_weight_is_mean(self):
        d1 = doc_from(["flood flood hit town", "new levee"], "d1")
        d2 = doc_from(["flood warning"], "d2")
        inst = build_instance([d1, d2], weighting=WeightPolicy.FREQUENCY)
        idx = inst.universe.index("flood")
        # d1 frequency 2, d2 frequency 1 -> mean 1.5
        assert inst.weights[idx] == pytest.approx(1.5)
        # unit unique to one document keeps its own weight
        idx_w = inst.universe.index("warning")
        assert inst.weights[idx_w] == pytest.approx(1.0)

    def test_position_weight(self):
        inst = build_instance(doc_from(["late word", "word early"]),
                              weighting=WeightPolicy.POSITION)
        idx = inst.universe.index("word")
        assert inst.weights[idx] == pytest.approx(1.0)  # best sentence index 0
        idx2 = inst.universe.index("early")
        assert inst.weights[idx2] == pytest.approx(0.5)

    def test_empty_document_rejected(self):
        with pytest.raises(EmptyDocumentError):
            build_instance(doc_from(["the of and"]),
                           scheme=ThoughtUnitScheme.WORDS_MINUS_STOPWORDS)

    def test_zero_budget_rejected(self):
        with pytest.raises(ZeroBudgetError):
            build_instance(doc_from(["a b"]), budget=0)

    def test_budget_unit_sentences(self):
        inst = build_instance(doc_from(["a b c", "d e"]), budget=1,
                              budget_unit="sentences")
        assert inst.sentence_sizes == (1, 1)
        assert inst.sentence_word_counts == (3, 2)

    def test_every_unit_covered(self):
        inst = instance_from_sets([{"a"}, {"b", "c"}, {"a", "c"}])
        covered = set()
        for cover in inst.cover_sets:
            covered |= cover
        assert covered == set(range(len(inst.universe)))

    def test_permutation_stable(self):
        sents = ["alpha beta", "beta gamma", "gamma delta"]
        inst = build_instance(doc_from(sents), weighting=WeightPolicy.FREQUENCY)
        inst_rev = build_instance(doc_from(list(reversed(sents))),
                                  weighting=WeightPolicy.FREQUENCY)
        assert inst.universe == inst_rev.universe
        assert inst.weights == inst_rev.weights
        assert inst.cover_sets == tuple(reversed(inst_rev.cover_sets))


class TestTsScore:
    def test_covered_unit(self):
        inst = instance_from_sets([{"a", "b"}, {"c"}])
        s = summary_of(inst, [0])
        assert ts_score(inst.universe.index("a"), s, inst) == 1.0

    def test_uncovered_unit(self):
        inst = instance_from_sets([{"a", "b"}, {"c"}])
        s = summary_of(inst, [0])
        assert ts_score(inst.universe.index("c"), s, inst) == 0.0

    def test_max_of_degrees(self):
        inst = instance_from_sets([{"a"}, {"a", "b"}])
        fractional = inst.sentence_covers[0].copy()
        fractional[0] = 0.4
        object.__setattr__(inst, "sentence_covers",
                           (fractional, {0: 0.9, 1: 1.0}))
        object.__setattr__(inst, "_cover_sets",
                           (frozenset({0}), frozenset({0, 1})))
        s = summary_of(inst, [0, 1])
        assert ts_score(0, s, inst) == 0.9

    def test_out_of_range(self):
        inst = instance_from_sets([{"a"}])
        with pytest.raises(IndexError):
            ts_score(5, summary_of(inst, [0]), inst)


class TestUtility:
    def test_empty_summary(self):
        inst = instance_from_sets([{"a", "b"}])
        assert utility(Summary((), 0, 0.0, "t"), inst) == 0.0

    def test_full_coverage_uniform(self):
        inst = instance_from_sets([{"a", "b", "c"}, {"d", "e"}])
        assert utility(summary_of(inst, [0, 1]), inst) == 5.0

    def test_weighted_partial(self):
        # weights a:2, b:1, c:1; select the sentence covering {a, b}
        inst = build_instance(doc_from(["a a b", "c"]),
                              weighting=WeightPolicy.FREQUENCY)
        assert utility(summary_of(inst, [0]), inst) == pytest.approx(3.0)

    def test_monotone_in_selection(self):
        inst = instance_from_sets([{"a", "b"}, {"b", "c"}, {"d"}, {"a", "d"}])
        positions = range(inst.n_sentences)
        for r in range(len(list(positions)) + 1):
            for combo in itertools.combinations(range(inst.n_sentences), r):
                base = utility(summary_of(inst, combo), inst)
                for extra in range(inst.n_sentences):
                    if extra in combo:
                        continue
                    grown = utility(summary_of(inst, combo + (extra,)), inst)
                    assert grown >= base - 1e-12

    def test_submodular_boolean_uniform(self):
        sets = [{"a", "b"}, {"b", "c"}, {"c", "d", "e"}, {"a", "e"}, {"f"}]
        inst = instance_from_sets(sets)
        n = inst.n_sentences

        def gain(selection, x):
            with_x = utility(summary_of(inst, selection + (x,)), inst)
            return with_x - utility(summary_of(inst, selection), inst)

        for t_mask in range(1 << n):
            t_set = tuple(i for i in range(n) if t_mask >> i & 1)
            for s_mask in range(1 << n):
                if s_mask & t_mask != s_mask:
                    continue  # S must be a subset of T
                s_set = tuple(i for i in range(n) if s_mask >> i & 1)
                for x in range(n):
                    if x in t_set:
                        continue
                    assert gain(s_set, x) >= gain(t_set, x) - 1e-12

    def test_weight_scaling_preserves_argmax(self):
        inst = build_instance(doc_from(["a a b", "b c", "c d d"]),
                              weighting=WeightPolicy.FREQUENCY)
        lam = 3.7
        scaled = build_instance(doc_from(["a a b", "b c", "c d d"]),
                                weighting=WeightPolicy.FREQUENCY)
        object.__setattr__(scaled, "weights",
                           tuple(w * lam for w in scaled.weights))
        n = inst.n_sentences
        combos = [tuple(i for i in range(n) if m >> i & 1) for m in range(1 << n)]
        base = [utility(summary_of(inst, c), inst) for c in combos]
        big = [utility(summary_of(scaled, c), scaled) for c in combos]
        for u1, u2 in zip(base, big):
            assert u2 == pytest.approx(lam * u1)
        best1 = {i for i, u in enumerate(base) if u == pytest.approx(max(base))}
        best2 = {i for i, u in enumerate(big) if u == pytest.approx(max(big))}
        assert best1 == best2

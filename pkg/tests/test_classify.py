from itertools import product

import numpy as np
import pytest

from analogykit.classify import (Decision, DecisionConfig, LabeledDataset,
                                 WeightMatrix, decide, evaluate,
                                 learn_weight_matrix, rank_triples,
                                 solve_class_equation, weighted_ad)
from analogykit.core import vector_ad
from analogykit.datasets import random_binary_table
from analogykit.errors import ValidationError


class TestClassEquation:
    def test_first_two_equal(self):
        assert solve_class_equation("w0", "w0", "w1") == "w1"

    def test_first_and_third_equal(self):
        assert solve_class_equation("w1", "w0", "w1") == "w0"

    def test_all_equal(self):
        assert solve_class_equation("w2", "w2", "w2") == "w2"

    def test_unsolvable(self):
        assert solve_class_equation("w0", "w1", "w2") is None
        assert solve_class_equation("w0", "w1", "w1") is None

    def test_pattern_table_exhaustive(self):
        # retained patterns over three classes are exactly those whose
        # first class matches the second or the third
        for ci, cj, ck in product("xyz", repeat=3):
            sol = solve_class_equation(ci, cj, ck)
            assert (sol is not None) == (ci == cj or ci == ck)


class TestWeightMatrix:
    def test_two_item_spot_value(self):
        ds = LabeledDataset.from_labels([[0], [1]], ["i", "j"])
        w = learn_weight_matrix(ds)
        i, j = ds.class_code("i"), ds.class_code("j")
        assert w.w[0, i, j] == pytest.approx(1 / 96, abs=1e-12)
        assert w.numerators[i, j, 0] == 1
        assert w.scale == 6 * 2 ** 4

    def test_uniform_single_class(self):
        ds = LabeledDataset.from_labels([[1, 0]] * 3, ["only"] * 3)
        w = learn_weight_matrix(ds)
        assert w.w[0, 0, 0] == pytest.approx(1 / 6, abs=1e-12)
        assert w.w[1, 0, 0] == pytest.approx(1 / 6, abs=1e-12)

    def test_absent_class_pair_is_zero(self):
        ds = LabeledDataset.from_labels(
            [[0], [1]], ["i", "j"], classes=("i", "j", "ghost"))
        w = learn_weight_matrix(ds)
        g = ds.class_code("ghost")
        assert (w.w[:, g, :] == 0).all()
        assert (w.w[:, :, g] == 0).all()

    def test_counts_formula_randomized(self):
        rng = np.random.default_rng(0)
        ds = random_binary_table(12, 4, 3, seed=5)
        w = learn_weight_matrix(ds)
        m = ds.size
        for k in range(ds.dim):
            for i in range(3):
                for j in range(3):
                    n1i = int(ds.items[ds.labels == i, k].sum())
                    n0i = int((ds.labels == i).sum()) - n1i
                    n1j = int(ds.items[ds.labels == j, k].sum())
                    n0j = int((ds.labels == j).sum()) - n1j
                    want = ((n0i ** 2 + n1i ** 2) * (n0j ** 2 + n1j ** 2)
                            + 2 * n0i * n0j * n1i * n1j) / (6 * m ** 4)
                    assert w.w[k, i, j] == pytest.approx(want, abs=1e-12)

    def test_weights_nonnegative(self):
        ds = random_binary_table(9, 5, 2, seed=6)
        assert (learn_weight_matrix(ds).w >= 0).all()


class TestWeightedAd:
    def test_unit_weights_match_plain(self):
        rng = np.random.default_rng(1)
        w = WeightMatrix(w=np.ones((4, 2, 2)), classes=("x", "y"))
        for _ in range(30):
            a, b, c, x = rng.integers(0, 2, size=(4, 4))
            assert weighted_ad(a, b, c, x, w, "x", "y") == vector_ad(a, b, c, x)

    def test_zero_weights(self):
        w = WeightMatrix(w=np.zeros((3, 2, 2)), classes=("x", "y"))
        assert weighted_ad([0, 1, 1], [1, 0, 1], [1, 1, 0], [0, 0, 0],
                           w, "x", "x") == 0

    def test_mixed_weights(self):
        wmat = np.zeros((2, 2, 2))
        wmat[0, :, :] = 0.5
        wmat[1, :, :] = 2.0
        w = WeightMatrix(w=wmat, classes=("x", "y"))
        # per-bit dissimilarities (2, 1) -> 0.5 * 2 + 2 * 1
        assert weighted_ad([0, 0], [1, 0], [1, 0], [0, 1], w, "x", "y") \
            == pytest.approx(3.0)


# Worked five-item example: items a, b with class w0; c, d with w1; e
# with w2.  Dissimilarities to the query are injected via a stub.
FIXTURE_ADS = {
    (1, 0, 3): 0,   # (b, a, d) -> w1
    (1, 3, 4): 1,   # unsolvable
    (2, 3, 4): 1,   # (c, d, e) -> w2
    (0, 1, 3): 1,   # (a, b, d) -> w1
    (2, 0, 4): 2,   # unsolvable
    (3, 2, 4): 2,   # (d, c, e) -> w2
    (3, 1, 2): 2,   # (d, b, c) -> w0
    (0, 2, 4): 2,   # unsolvable
    (0, 2, 2): 3,   # unsolvable
    (0, 1, 4): 3,   # (a, b, e) -> w2
    (1, 0, 4): 3,   # (b, a, e) -> w2
    (1, 2, 3): 3,   # unsolvable
    (2, 2, 2): 4,   # (c, c, c) -> w1
    (0, 0, 2): 4,   # (a, a, c) -> w1
}


@pytest.fixture()
def fixture_ds():
    return LabeledDataset.from_labels(
        np.zeros((5, 3), dtype=int),
        ["w0", "w0", "w1", "w1", "w2"],
        classes=("w0", "w1", "w2"))


def fixture_ad(u, v, w):
    return float(FIXTURE_ADS.get((u, v, w), 99))


class TestRankTriples:
    def test_candidate_count_before_filter(self):
        ds = random_binary_table(5, 3, 1, seed=7)
        ranked = rank_triples(ds, np.zeros(3, dtype=int), DecisionConfig(k=1))
        # one class: every canonical triple solvable
        assert len(ranked) == 5 * 5 * 6 // 2 == 75

    def test_filter_keeps_table_patterns(self):
        ds = random_binary_table(6, 3, 3, seed=8)
        ranked = rank_triples(ds, np.zeros(3, dtype=int), DecisionConfig(k=1))
        kept = {t for t, _, _ in ranked}
        for u in range(6):
            for v in range(6):
                for w in range(v, 6):
                    cu, cv, cw = (ds.classes[ds.labels[i]] for i in (u, v, w))
                    solvable = solve_class_equation(cu, cv, cw) is not None
                    assert ((u, v, w) in kept) == solvable

    def test_two_items_two_classes(self):
        ds = LabeledDataset.from_labels([[0], [1]], ["x", "y"])
        ranked = rank_triples(ds, [0], DecisionConfig(k=1))
        kept = {t for t, _, _ in ranked}
        # of the six canonical triples, (0,1,1) and (1,0,0) have class
        # patterns (x,y,y) / (y,x,x) with no solution
        assert kept == {(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1)}

    def test_fixture_ordering_and_classes(self, fixture_ds):
        ranked = rank_triples(fixture_ds, np.zeros(3, dtype=int),
                              DecisionConfig(k=1), ad_fn=fixture_ad)
        head = ranked[:9]
        assert [e[1] for e in head] == [0, 1, 1, 2, 2, 3, 3, 4, 4]
        by_value = {}
        for triple, val, cls in head:
            by_value.setdefault(val, []).append((triple, cls))
        assert by_value[0] == [((1, 0, 3), "w1")]
        assert sorted(by_value[1]) == [((0, 1, 3), "w1"), ((2, 3, 4), "w2")]
        assert sorted(by_value[2]) == [((3, 1, 2), "w0"), ((3, 2, 4), "w2")]
        assert sorted(by_value[3]) == [((0, 1, 4), "w2"), ((1, 0, 4), "w2")]
        assert sorted(by_value[4]) == [((0, 0, 2), "w1"), ((2, 2, 2), "w1")]
        assert all(val == 99 for _, val, _ in ranked[9:])

    def test_single_class_dataset(self):
        ds = random_binary_table(4, 2, 1, seed=9)
        ranked = rank_triples(ds, np.zeros(2, dtype=int), DecisionConfig(k=1))
        assert len(ranked) == 4 * 4 * 5 // 2
        assert all(cls == ds.classes[0] for _, _, cls in ranked)


class TestDecide:
    def test_fixture_k_table(self, fixture_ds):
        ranked = rank_triples(fixture_ds, np.zeros(3, dtype=int),
                              DecisionConfig(k=1), ad_fn=fixture_ad)[:9]
        expected = {1: ("w1", 1), 2: ("w1", 3), 3: ("w1", 3),
                    4: (None, 5), 5: (None, 5), 6: ("w2", 7), 7: ("w2", 7)}
        for k, (label, k_prime) in expected.items():
            d = decide(ranked, k)
            assert d.label == label, k
            assert d.k_prime == k_prime, k
            assert sum(d.votes.values()) == d.k_prime

    def test_empty_ranking_rejects(self):
        d = decide([], k=3)
        assert d.rejected and d.k_prime == 0 and d.support == ()

    def test_fewer_entries_than_k(self):
        ranked = [((0, 0, 0), 1.0, "x"), ((0, 0, 1), 2.0, "x")]
        d = decide(ranked, k=10)
        assert d.label == "x" and d.k_prime == 2

    def test_fallback_min_ad(self):
        ranked = [((0, 0, 0), 1.0, "x"), ((0, 0, 1), 2.0, "y"),
                  ((0, 1, 1), 4.0, "x"), ((1, 1, 1), 4.0, "y")]
        assert decide(ranked, k=4).rejected
        d = decide(ranked, k=4, tie_policy="fallback_min_ad")
        assert d.label == "x"  # 5.0 < 6.0

    def test_rejects_bad_policy(self):
        with pytest.raises(ValidationError):
            decide([], 1, tie_policy="nope")


class TestConfig:
    def test_weighted_fadana_conflict(self):
        with pytest.raises(ValidationError):
            DecisionConfig(weighted=True, search_mode="fadana")

    def test_bad_fraction(self):
        with pytest.raises(ValidationError):
            DecisionConfig(search_mode="fadana", base_fraction=0.0)


class TestEvaluate:
    def test_train_equals_test_is_perfect(self):
        ds = random_binary_table(8, 5, 2, seed=10)
        rep = evaluate(ds, ds, DecisionConfig(k=1))
        assert rep.accuracy == 1.0
        assert rep.rejects == 0

    def test_empty_test_set(self):
        ds = random_binary_table(5, 4, 2, seed=11)
        empty = LabeledDataset(items=np.zeros((0, 4), dtype=int),
                               labels=np.zeros(0, dtype=int),
                               classes=ds.classes)
        rep = evaluate(ds, empty, DecisionConfig(k=1))
        assert rep.undefined_accuracy
        assert rep.accuracy is None

    def test_confusion_totals(self):
        train = random_binary_table(10, 6, 3, seed=12)
        test = random_binary_table(15, 6, 3, seed=13)
        rep = evaluate(train, test, DecisionConfig(k=5))
        assert sum(rep.confusion.values()) == rep.total == 15
        assert rep.correct == sum(
            n for (true, pred), n in rep.confusion.items() if true == pred)

    def test_matches_rank_and_decide(self):
        rng = np.random.default_rng(14)
        for weighted in (False, True):
            for tie in ("reject", "fallback_min_ad"):
                if weighted and tie == "fallback_min_ad":
                    continue
                train = random_binary_table(8, 4, 3, seed=15)
                queries = rng.integers(0, 2, size=(10, 4))
                test = LabeledDataset.from_labels(
                    queries, [train.classes[0]] * 10, classes=train.classes)
                cfg = DecisionConfig(k=3, weighted=weighted, tie_policy=tie)
                rep = evaluate(train, test, cfg)
                w = learn_weight_matrix(train) if weighted else None
                for idx in range(10):
                    ranked = rank_triples(train, queries[idx], cfg, weights=w)
                    d = decide(ranked, cfg.k, cfg.tie_policy,
                               class_order=train.classes)
                    assert rep.rows[idx][2] == d.label
                    assert rep.rows[idx][3] == d.k_prime

    def test_fadana_mode_agrees_with_exhaustive(self):
        train = random_binary_table(9, 5, 2, seed=16)
        rng = np.random.default_rng(17)
        queries = rng.integers(0, 2, size=(8, 5))
        test = LabeledDataset.from_labels(
            queries, [train.classes[0]] * 8, classes=train.classes)
        rep_ex = evaluate(train, test, DecisionConfig(k=3))
        rep_fd = evaluate(train, test,
                          DecisionConfig(k=3, search_mode="fadana",
                                         base_fraction=0.3))
        for row_ex, row_fd in zip(rep_ex.rows, rep_fd.rows):
            assert row_ex[1:4] == row_fd[1:4]
        assert rep_fd.mean_ad_evaluations is not None

    def test_equal_weights_degenerate_to_plain(self):
        train = random_binary_table(8, 5, 2, seed=18)
        rng = np.random.default_rng(19)
        queries = rng.integers(0, 2, size=(12, 5))
        # dyadic weight: uniform scaling stays exact in float64, so
        # value ties (and hence the ordering) survive the rescaling
        uniform = WeightMatrix(w=np.full((5, 2, 2), 0.75),
                               classes=train.classes)
        cfg = DecisionConfig(k=4, weighted=True)
        plain_cfg = DecisionConfig(k=4)
        for q in queries:
            wapc = rank_triples(train, q, cfg, weights=uniform)
            apc = rank_triples(train, q, plain_cfg)
            assert [e[0] for e in wapc] == [e[0] for e in apc]
            d_w = decide(wapc, 4)
            d_p = decide(apc, 4)
            assert d_w.label == d_p.label and d_w.k_prime == d_p.k_prime

    def test_zero_head_makes_weighting_irrelevant(self):
        # when the first k retained triples all have zero dissimilarity
        # under both rules, the two decisions coincide
        items = np.array([[0, 1]] * 6 + [[1, 0]] * 2)
        labels = ["p"] * 6 + ["q"] * 2
        train = LabeledDataset.from_labels(items, labels)
        query = np.array([0, 1])
        k = 3
        apc = rank_triples(train, query, DecisionConfig(k=k))
        w = learn_weight_matrix(train)
        wapc = rank_triples(train, query, DecisionConfig(k=k, weighted=True),
                            weights=w)
        assert all(val == 0 for _, val, _ in apc[:k])
        assert all(val == 0 for _, val, _ in wapc[:k])
        assert decide(apc, k).label == decide(wapc, k).label

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgvs.errors import InvalidInputError, InvalidParameterError
from cgvs.metrics import iou, mae, pr_fscore, roc_auc, weighted_fscore
from oracles import dense_weighted_fscore, mann_whitney_auc


def random_fixations(r, shape, count):
    h, w = shape
    flat = r.choice(h * w, size=count, replace=False)
    return [(int(i % w), int(i // w)) for i in flat]


class TestAUC:
    def test_mann_whitney_oracle(self, rng):
        for _ in range(50):
            sal = np.round(rng.random((8, 8)), 1)  # coarse values force ties
            fix = random_fixations(rng, (8, 8), 5)
            assert roc_auc(sal, fix).summary == pytest.approx(mann_whitney_auc(sal, fix), abs=1e-12)

    def test_perfect_and_constant(self, rng):
        fix = random_fixations(rng, (8, 8), 5)
        sal = np.zeros((8, 8))
        for x, y in fix:
            sal[y, x] = 1.0
        assert roc_auc(sal, fix).summary == 1.0
        assert roc_auc(np.full((8, 8), 0.3), fix).summary == 0.5

    def test_curve_shape(self, rng):
        sal = rng.random((10, 10))
        rep = roc_auc(sal, random_fixations(rng, (10, 10), 7))
        thr, fpr, tpr = rep.samples.T
        assert np.isinf(thr[0]) and (np.diff(thr) < 0).all()
        assert (np.diff(fpr) >= 0).all() and (np.diff(tpr) >= 0).all()
        assert fpr[-1] == 1.0 and tpr[-1] == 1.0

    def test_duplicates_count_once(self):
        sal = np.arange(16, dtype=float).reshape(4, 4) / 15
        assert roc_auc(sal, [(1, 1), (1, 1), (2, 3)]).summary == roc_auc(sal, [(1, 1), (2, 3)]).summary

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            roc_auc(np.zeros((4, 4)), [])
        with pytest.raises(InvalidInputError):
            roc_auc(np.zeros((4, 4)), [(4, 0)])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_rank_invariance(self, seed):
        r = np.random.default_rng(seed)
        sal = r.random((12, 12))
        fix = random_fixations(r, (12, 12), 6)
        a = roc_auc(sal, fix).summary
        b = roc_auc(sal**3 * 0.5 + 0.1, fix).summary
        assert abs(a - b) < 1e-9


class TestPR:
    def test_identity(self, rng):
        gt = rng.random((16, 16)) < 0.3
        rep = pr_fscore(gt.astype(float), gt)
        k = np.searchsorted(rep.samples[:, 0], 0.5)
        assert rep.samples[k, 1] == 1.0 and rep.samples[k, 2] == 1.0 and rep.f_scores[k] == 1.0
        assert rep.summary == 1.0

    def test_complement(self, rng):
        gt = rng.random((16, 16)) < 0.3
        rep = pr_fscore(1.0 - gt, gt)
        p = gt.mean()
        assert rep.summary == pytest.approx(1.3 * p / (0.3 * p + 1.0), abs=1e-12)

    def test_monotone_recall(self, rng):
        rep = pr_fscore(rng.random((20, 20)), rng.random((20, 20)) < 0.2)
        assert rep.samples.shape == (256, 3)
        assert (np.diff(rep.samples[:, 2]) <= 0).all()
        assert ((rep.samples[:, 1:] >= 0) & (rep.samples[:, 1:] <= 1)).all()

    def test_empty_gt(self):
        with pytest.raises(InvalidInputError):
            pr_fscore(np.zeros((4, 4)), np.zeros((4, 4), bool))


class TestWeightedF:
    def test_perfect_and_zero(self, rng):
        gt = np.zeros((16, 16), bool)
        gt[4:12, 5:11] = True
        assert weighted_fscore(gt.astype(float), gt) == pytest.approx(1.0, abs=1e-12)
        assert weighted_fscore(np.zeros((16, 16)), gt) == pytest.approx(0.0, abs=1e-12)

    def test_checkerboard_dense_oracle(self):
        gt = np.zeros((16, 16), bool)
        gt[4:12, 4:12] = True
        board = ((np.indices((16, 16)).sum(axis=0)) % 2).astype(float)
        assert weighted_fscore(board, gt) == pytest.approx(dense_weighted_fscore(board, gt), abs=1e-6)

    def test_random_dense_oracle(self, rng):
        for _ in range(5):
            gt = np.zeros((16, 16), bool)
            y, x = rng.integers(1, 8, 2)
            gt[y : y + rng.integers(3, 8), x : x + rng.integers(3, 8)] = True
            sal = rng.random((16, 16))
            assert weighted_fscore(sal, gt) == pytest.approx(dense_weighted_fscore(sal, gt), abs=1e-6)

    def test_unweighted_is_soft_f1(self, rng):
        gt = rng.random((16, 16)) < 0.3
        sal = rng.random((16, 16))
        tp = sal[gt].sum()
        p, r = tp / sal.sum(), tp / gt.sum()
        assert weighted_fscore(sal, gt, weighted=False) == pytest.approx(2 * p * r / (p + r), rel=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_range(self, seed):
        r = np.random.default_rng(seed)
        gt = r.random((12, 12)) < 0.4
        if not gt.any():
            gt[0, 0] = True
        v = weighted_fscore(r.random((12, 12)), gt)
        assert 0.0 <= v <= 1.0


class TestMAE:
    def test_identities(self, rng):
        gt = rng.random((9, 9)) < 0.5
        assert mae(gt.astype(float), gt) == 0.0
        assert mae(1.0 - gt, gt) == 1.0
        assert mae(np.full((9, 9), 0.5), gt) == 0.5

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31 - 1))
    def test_symmetric_and_bounded(self, seed):
        r = np.random.default_rng(seed)
        a, b = r.random((7, 7)), r.random((7, 7))
        assert mae(a, b) == mae(b, a)
        assert 0.0 <= mae(a, b) <= 1.0

    def test_shape_mismatch(self):
        with pytest.raises(InvalidParameterError):
            mae(np.zeros((3, 3)), np.zeros((3, 4)))


def test_iou():
    a = np.zeros((4, 4), bool)
    b = a.copy()
    assert iou(a, b) == 1.0
    a[:2] = True
    b[1:3] = True
    assert iou(a, b) == pytest.approx(4 / 12)

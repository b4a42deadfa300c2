import numpy as np
import pytest

from sswpt.classify import (affinity, classify, default_sigma, fundamental, harmonic_index,
                            normalized_laplacian, residual_matrix)
from sswpt.ridges import IFCurve

L = 1024
t = np.arange(L) / L


def g1(t=t):
    return 60 * (1 + 0.02 * np.pi * np.cos(2 * np.pi * t))


def g2(t=t):
    return 90 * (1 + 0.05 * np.pi * np.cos(4 * np.pi * t + 0.3))


def test_exact_multiple_has_zero_residual():
    R = residual_matrix([g1(), 2 * g1()])
    assert R[0, 1] == pytest.approx(0, abs=1e-14)
    assert R[1, 0] == pytest.approx(0, abs=1e-14)
    assert np.all(np.diag(R) == 0)


def test_identical_curves():
    assert np.allclose(residual_matrix([g1(), g1(), g1()]), 0, atol=1e-14)


def test_different_modes_separate(ex1_dec):
    R = ex1_dec.classification.residual_matrix
    members = [ex1_dec.classification.members(k) for k in range(2)]
    intra = max(R[i, j] for m in members for i in m for j in m if i != j)
    inter = min(R[i, j] for i in members[0] for j in members[1])
    assert inter >= 10 * intra


def test_gap_columns_are_excluded():
    a = IFCurve(g1(), np.ones(L))
    vals = 2 * g1()
    vals[100:120] = 500.0
    gaps = np.zeros(L, dtype=bool)
    gaps[100:120] = True
    b = IFCurve(vals, np.ones(L), gaps=gaps)
    assert residual_matrix([a, b])[0, 1] == pytest.approx(0, abs=1e-14)


def test_residual_needs_two_curves():
    with pytest.raises(ValueError):
        residual_matrix([g1()])


def test_one_mode_harmonics():
    c = classify([g1(), 2 * g1(), 3 * g1()])
    assert c.K == 1
    assert c.assignment.tolist() == [0, 0, 0]


def test_example1_partition(ex1_dec):
    c = ex1_dec.classification
    assert c.K == 2
    assert sorted(map(sorted, (c.members(0), c.members(1)))) == [[0], [1, 2, 3, 4, 5, 6]]
    assert np.all(np.diff(c.eigenvalues) <= 1e-12)
    assert c.meta["laplacian"] == "symmetric"


def test_annual_and_semiannual_group_together():
    # seasonal harmonics (12, 24, 36 cycles) of one wobbling annual IF plus a slow trend
    annual = 1.0 + 0.05 * np.sin(2 * np.pi * t)
    trend = 0.5 + 0.4 * np.exp(-3 * t)
    c = classify([12 * annual, 24 * annual, 36 * annual, trend])
    assert c.K == 2
    assert c.assignment[0] == c.assignment[1] == c.assignment[2] != c.assignment[3]


def test_balanced_classes_need_an_explicit_sigma():
    # the median bandwidth lands on a between-class residual when classes are
    # balanced, so the default sees one class; a small sigma splits them
    annual = 1.0 + 0.05 * np.sin(2 * np.pi * t)
    trend = 0.5 + 0.4 * np.exp(-3 * t)
    curves = [12 * annual, 24 * annual, trend, 2 * trend]
    assert classify(curves).K == 1
    c = classify(curves, sigma=1e-3)
    assert c.K == 2
    assert c.assignment.tolist() == [1, 1, 0, 0]


def test_common_scaling_leaves_residuals_unchanged():
    curves = [g1(), 2 * g1(), g2(), 3 * g2()]
    R = residual_matrix(curves)
    R2 = residual_matrix([4.25 * c for c in curves])
    np.testing.assert_allclose(R2, R, rtol=1e-12, atol=1e-15)
    assert np.array_equal(classify(curves).assignment, classify([4.25 * c for c in curves]).assignment)


def test_permutation_equivariance():
    curves = [g1(), 2 * g1(), g2(), 3 * g2(), 3 * g1()]
    base = classify(curves)
    perm = [3, 0, 4, 2, 1]
    other = classify([curves[i] for i in perm])
    # same partition, labels tied to mean frequency so they agree too
    assert other.assignment.tolist() == base.assignment[perm].tolist()


def test_affinity_and_laplacian():
    R = np.array([[0, 1.0], [2.0, 0]])
    A = affinity(R, 1.0)
    np.testing.assert_allclose(A, A.T)
    assert A[0, 1] == pytest.approx(np.exp(-0.5) + np.exp(-2))
    assert A[0, 0] == pytest.approx(2.0)
    Lap = normalized_laplacian(A)
    assert np.linalg.eigvalsh(Lap).min() >= -1e-12
    assert default_sigma(np.array([[0, 1, 3], [2, 0, 5], [4, 6, 0]])) == 3.5


def test_bad_sigma():
    with pytest.raises(ValueError):
        classify([g1(), 2 * g1()], sigma=-1.0)


def test_fundamental_two_and_three():
    est = fundamental([2 * g1(), 3 * g1()])
    assert est.objective[0] > 0
    assert est.objective[1] == pytest.approx(0, abs=1e-20)
    assert est.n0 == 2
    np.testing.assert_allclose(est.fundamental.values, g1(), rtol=1e-14)


def test_fundamental_single_curve():
    est = fundamental([g1()])
    assert est.n0 == 1 and est.confidence == "low"
    np.testing.assert_array_equal(est.fundamental.values, g1())


def test_fundamental_already_present():
    est = fundamental([g1(), 2 * g1(), 3 * g1()])
    assert est.n0 == 1 and est.confidence == "high"
    assert est.reference == 0


def test_fundamental_errors():
    with pytest.raises(ValueError):
        fundamental([g1()], M=0)
    with pytest.raises(ValueError):
        fundamental([g1(), -g1()])


def test_harmonic_index():
    est = fundamental([2 * g1(), 5 * g1()])
    assert est.n0 == 2
    assert harmonic_index(5 * g1(), est) == 5

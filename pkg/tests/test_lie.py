import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from skewtor.connections import phikt_build
from skewtor.families import brackets_to_tensor
from skewtor.lie import (
    Connection,
    FrameError,
    LieFrame,
    codifferential_3form,
    covariant_derivative,
    curvature,
    exterior_derivative,
    jacobi_check,
    levi_civita,
    ricci_scalar,
    square_norm,
)
from skewtor.scalar import Scalar
from skewtor.structures import fundamental_of
from skewtor.tensor import MetricData, SlotError, Tensor, alternate, reorder

from test_tensor import random_tensor

QUADRIC = Scalar.var("l1") ** 2 + Scalar.var("l2") ** 2 - Scalar.var("l3") ** 2 - Scalar.var("l4") ** 2


def abelian(n=4):
    return LieFrame(Tensor.zeros(n, 1, 2), MetricData.diagonal([1, -1] * (n // 2)))


def ratio(p, q):
    c = p.sorted_terms()[0][1] / q.sorted_terms()[0][1]
    return c if p == q * Scalar.const(c) else None


def test_jacobi_examples(spec4):
    assert jacobi_check(abelian())
    assert jacobi_check(spec4.frame())
    base = {(1, 2): {3: 1}, (1, 3): {2: 1}, (2, 3): {1: 1}}
    m = MetricData.diagonal([1, 1, 1])
    assert jacobi_check(LieFrame(brackets_to_tensor(3, base), m))
    bent = dict(base)
    bent[(1, 2)] = {3: 1, 1: 1}
    assert not jacobi_check(LieFrame(brackets_to_tensor(3, bent), m))


def test_frame_rejects_non_antisymmetric_constants():
    c = Tensor.zeros(2, 1, 2)
    c.comps[0, 0, 1] = Scalar.const(1)
    with pytest.raises(FrameError, match=r"\(1, 2, 1\)"):
        LieFrame(c, MetricData.diagonal([1, 1]))


def test_levi_civita_abelian_is_zero():
    assert levi_civita(abelian()).gamma.is_zero()


def test_levi_civita_5d_component(spec5):
    f = spec5.bind({"l1": 0, "l2": 0, "l3": 0, "l4": 0, "m1": 1, "m2": 0}).frame()
    lc = levi_civita(f)
    # 2 g(nabla_1 X2, X5) = g([X1,X2],X5) = 2 and g55 = 1
    assert lc.gamma.at(5, 1, 2) == Scalar.const(1)
    eta = Tensor([0, 0, 0, 0, 1], 0, 1)
    assert covariant_derivative(lc, eta).at(1, 2) == Scalar.const(-1)


def test_levi_civita_is_torsion_free_and_metric(all_specs):
    for spec in all_specs:
        f = spec.frame()
        lc = levi_civita(f)
        assert lc.torsion().is_zero(), spec.name
        assert covariant_derivative(lc, f.metric.lower).is_zero(), spec.name


def test_covariant_derivative_of_zero_and_frame_mismatch(spec4):
    lc = levi_civita(spec4.frame())
    assert covariant_derivative(lc, Tensor.zeros(4, 1, 2)).is_zero()
    with pytest.raises(FrameError):
        covariant_derivative(lc, Tensor.zeros(3, 0, 1))


def test_covariant_derivative_leibniz_on_contraction(spec4):
    # nabla(w(v)) = (nabla w)(v) + w(nabla v) = 0 for invariant scalars
    lc = levi_civita(spec4.frame())
    rng = random.Random(2)
    v, w = random_tensor(4, 1, 0, rng), random_tensor(4, 0, 1, rng)
    dv, dw = covariant_derivative(lc, v).comps, covariant_derivative(lc, w).comps
    total = np.einsum("ia,a->i", dw, v.comps) + np.einsum("ai,a->i", dv, w.comps)
    assert all(x.is_zero() for x in total)


def test_curvature_symmetries_and_bianchi(all_specs):
    for spec in all_specs:
        f = spec.frame()
        R = curvature(levi_civita(f))
        assert (R + reorder(R, "yxzw", "xyzw")).is_zero()
        assert (R + reorder(R, "xywz", "xyzw")).is_zero()
        bianchi = R + reorder(R, "yzxw", "xyzw") + reorder(R, "zxyw", "xyzw")
        assert bianchi.is_zero(), spec.name


def test_curvature_abelian_is_zero():
    assert curvature(levi_civita(abelian())).is_zero()


def test_curvature_upper_lowers_to_default(spec4):
    f = spec4.frame()
    lc = levi_civita(f)
    up = curvature(lc, upper=True)
    low = Tensor(np.einsum("lijk,lw->ijkw", up.comps, f.metric.lower.comps), 0, 4)
    assert low == curvature(lc)


def test_scalar_curvature_4d(spec4):
    f = spec4.frame()
    rho, tau = ricci_scalar(curvature(levi_civita(f)), f.metric)
    assert ratio(tau, QUADRIC) not in (None, 0)
    assert tau.subs({"l1": 1, "l2": 0, "l3": 1, "l4": 0}).is_zero()
    assert (rho - reorder(rho, "yx", "xy")).is_zero()


def test_ricci_of_zero():
    m = MetricData.diagonal([1, -1, 1])
    rho, tau = ricci_scalar(Tensor.zeros(3, 0, 4), m)
    assert rho.is_zero() and tau.is_zero()
    with pytest.raises(SlotError):
        ricci_scalar(Tensor.zeros(3, 0, 3), m)


def test_exterior_derivative_examples(spec4, spec5):
    assert exterior_derivative(abelian(), alternate(random_tensor(4, 0, 2, random.Random(1)))).is_zero()
    f = spec5.bind({"l1": 0, "l2": 0, "l3": 0, "l4": 0, "m1": 1, "m2": 0}).frame()
    d_eta = exterior_derivative(f, Tensor([0, 0, 0, 0, 1], 0, 1))
    assert d_eta.at(1, 2) == Scalar.const(-2)
    with pytest.raises(SlotError):
        exterior_derivative(f, MetricData.diagonal([1] * 5).lower)


@pytest.mark.parametrize("degree", [1, 2])
def test_d_squared_vanishes(spec4, spec5, degree):
    rng = random.Random(degree)
    for spec in (spec4, spec5):
        f = spec.frame()
        w = alternate(random_tensor(f.dim, 0, degree, rng, symbolic=True))
        dw = exterior_derivative(f, w)
        assert exterior_derivative(f, dw).is_zero()


def test_d_is_skew(spec4):
    f = spec4.frame()
    w = alternate(random_tensor(4, 0, 2, random.Random(4), symbolic=True))
    from skewtor.tensor import is_skew
    assert is_skew(exterior_derivative(f, w))


def test_codifferential_examples(spec5):
    f = abelian()
    lc = levi_civita(f)
    assert codifferential_3form(f, lc, Tensor.zeros(4, 0, 3)).is_zero()
    omega = alternate(random_tensor(4, 0, 3, random.Random(8)))
    assert codifferential_3form(f, lc, omega).is_zero()
    f5 = spec5.frame()
    tp = phikt_build(f5, spec5.structure)
    assert codifferential_3form(f5, levi_civita(f5), tp.T3).is_zero()


def test_square_norm_examples(spec4, spec5):
    m = MetricData.diagonal([1, 1, -1, -1])
    assert square_norm(m, Tensor.zeros(4, 0, 3)).is_zero()
    f = spec4.frame()
    n2 = square_norm(f.metric, fundamental_of(levi_civita(f), spec4.structure.J))
    assert ratio(n2, QUADRIC) not in (None, 0)
    f5 = spec5.frame()
    n5 = square_norm(f5.metric, fundamental_of(levi_civita(f5), spec5.structure.phi))
    assert n5.subs({"m1": 1, "m2": 1}).is_zero()


def _change_basis(m: MetricData, S: Tensor, P):
    """Components of g and S in the basis e'_a = sum_i P[i][a] e_i."""
    Pa = np.array(P, dtype=object)
    g = Pa.T.dot(np.array(m.g, dtype=object)).dot(Pa)
    S2 = np.einsum("ijk,ia,jb,kc->abc", S.comps, Pa, Pa, Pa)
    return MetricData.from_matrix(g.tolist()), Tensor(S2, 0, 3)


def test_square_norm_basis_invariance():
    rng = random.Random(12)
    m = MetricData.diagonal([1, 1, -1, -1])
    S = random_tensor(4, 0, 3, rng, symbolic=True)
    base = square_norm(m, S)
    flip = [[Fraction(-1 if i == j == 1 else int(i == j)) for j in range(4)] for i in range(4)]
    assert square_norm(*_change_basis(m, S, flip)) == base
    scale = [[Fraction(3, 2) * int(i == j) for j in range(4)] for i in range(4)]
    assert square_norm(*_change_basis(m, S, scale)) == base


def test_connection_rejects_wrong_shape(spec4):
    with pytest.raises(FrameError):
        Connection(spec4.frame(), Tensor.zeros(4, 0, 3))

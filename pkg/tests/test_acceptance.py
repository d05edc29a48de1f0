"""Acceptance suite: one test per criterion, numbered 1 to 11.

Every comparison is exact (rational arithmetic, polynomial identity);
there is no floating-point tolerance anywhere.  Three criteria are known to
fail against the implementation and are recorded in the decisions ledger:
2 and 3 (R' is not Kaehler at (1,0,1,0)), the T125 sign in 6, and the
unconditional rho(K) = rho in 8.  They are left failing on purpose.
"""
import itertools
import random

import numpy as np
import pytest

from skewtor.connections import (
    KTCurvatureData,
    is_natural,
    kaehler_tensor_check,
    kt_build,
    kt_curvature_equivalence,
    kt_perturbation_form,
    naturality_residuals,
    phi_curvature_checks,
    phikt_build,
    phkt_build,
    w133_checks,
)
from skewtor.families import BUILTIN
from skewtor.lie import (
    covariant_derivative,
    curvature,
    exterior_derivative,
    levi_civita,
    square_norm,
)
from skewtor.scalar import Scalar, parse_scalar
from skewtor.structures import classify, fundamental_of, validate_structure
from skewtor.tensor import Tensor, alternate, exact_rank, is_skew, raise_lower, reorder
from skewtor.verify import proportional_to_power, verify

from test_tensor import random_tensor

SEED = 1
N_POINTS = 30
DESIGNATED = {(1, 0, 1, 0): True, (1, 0, 0, 0): False}
L = ("l1", "l2", "l3", "l4")

# values as printed for the two example families
PRINTED_4D_TORSION = {(1, 3, 4): "l1", (2, 3, 4): "l2", (1, 2, 3): "-l3", (1, 2, 4): "-l4"}
PRINTED_5D_TORSION = {(1, 2, 5): "2*m1", (3, 4, 5): "2*m1", (2, 3, 5): "2*m2", (4, 1, 5): "2*m2"}


def point4(values):
    return dict(zip(L, values))


def norden_conditions(d, J, p):
    dp = d.subs(p)
    q = sum(Scalar.const(s) * Scalar.const(p[k]) ** 2 for s, k in zip((1, 1, -1, -1), L))
    return {
        "isotropic Kaehler": dp.norm_nabla_J.is_zero(),
        "scalar flat": dp.tau.is_zero(),
        "R' Kaehler": kaehler_tensor_check(dp.R_kt, J),
        "quadric": q.is_zero(),
    }


def test_criterion_01_kt_torsion_table(spec4):
    T = kt_build(spec4.frame(), spec4.structure).T3
    for idx in itertools.combinations(range(1, 5), 3):
        want = parse_scalar(PRINTED_4D_TORSION.get(idx, "0"))
        assert T.at(*idx) == want, idx
    assert is_skew(T)


def test_criterion_02_norden_equivalences(spec4):
    (res,) = verify(spec4, "S2-equivalences", seed=SEED, n_points=N_POINTS)
    d = KTCurvatureData.build(spec4.frame(), spec4.structure)
    designated = {p: norden_conditions(d, spec4.structure.J, point4(p)) for p in DESIGNATED}
    for p, want in DESIGNATED.items():
        assert set(designated[p].values()) == {want}, (p, designated[p])
    assert res.status != "failed", res.witness


def test_criterion_03_kt_curvature_equivalence(spec4):
    (res,) = verify(spec4, "S2-thm21", seed=SEED, n_points=N_POINTS)
    d = KTCurvatureData.build(spec4.frame(), spec4.structure)
    for p in DESIGNATED:
        flags = kt_curvature_equivalence(d.subs(point4(p)))
        assert len(set(flags.values())) == 1, (p, flags)
    assert res.status != "failed", res.witness


def test_criterion_04_scalar_curvature_relations(spec4):
    (res,) = verify(spec4, "S2-scalar-props", seed=SEED, n_points=N_POINTS)
    assert res.status == "holds-at-points", res.witness
    counts = res.details["triggers"]
    print(f"trigger counts: {counts}")
    assert counts["kaehler"] > 0 and counts["parallel"] > 0


def test_criterion_05_naturality(spec4, spec5, flat8):
    for spec, build in ((spec4, kt_build), (spec5, phikt_build), (flat8, phkt_build)):
        tp = build(spec.frame(), spec.structure)
        res = naturality_residuals(tp.conn, spec.structure)
        bad = [k for k, r in res.items() if not r.is_zero()]
        assert not bad, (spec.name, bad)


def test_criterion_06_contact_suite(spec5):
    f, s = spec5.frame(), spec5.structure
    lc = levi_civita(f)
    problems = []
    if not classify(f, lc, s)["F7"]:
        problems.append("not F7")
    tp = phikt_build(f, s, lc)
    if not covariant_derivative(tp.conn, tp.T3).is_zero():
        problems.append("DT != 0")
    norm = square_norm(f.metric, fundamental_of(lc, s.phi))
    m1, m2 = Scalar.var("m1"), Scalar.var("m2")
    if proportional_to_power(norm, m1 * m1 - m2 * m2) is None:
        problems.append(f"|nabla phi|^2 = {norm} is not c (m1^2 - m2^2)^k")
    zl = {k: 0 for k in L}
    if not norm.subs({**zl, "m1": 1, "m2": 1}).is_zero():
        problems.append("not isotropic at (1,1)")
    if norm.subs({**zl, "m1": 1, "m2": 0}).is_zero():
        problems.append("isotropic at (1,0)")
    for idx, text in PRINTED_5D_TORSION.items():
        got = tp.T3.at(*idx)
        if got != parse_scalar(text):
            problems.append(f"T{''.join(map(str, idx))} = {got}, expected {text}")
    assert not problems, problems


def test_criterion_07_phikt_two_routes(spec5):
    tp = phikt_build(spec5.frame(), spec5.structure)
    assert tp.conn.gamma == tp.extra["explicit"].gamma


def test_criterion_08_f7_curvature(spec5):
    pc = phi_curvature_checks(spec5.frame(), spec5.structure)
    assert pc["phi_kaehler"] == pc["kaehler_form_residual"].is_zero()
    (res,) = verify(spec5, "S3-K-theorems", seed=SEED, n_points=20)
    assert res.status != "failed", res.witness
    assert pc["parallel"]
    assert pc["ricci_residual"].is_zero(), f"rho(K) - rho has entry {pc['ricci_residual'].first_nonzero()}"
    assert pc["tau_residual"].is_zero(), f"tau(K) - tau = {pc['tau_residual']}"


def test_criterion_09_flat_hyper_suite(flat8):
    f, s = flat8.frame(), flat8.structure
    assert validate_structure(f, s).passed
    lc = levi_civita(f)
    assert all(fundamental_of(lc, J).is_zero() for J in s.Js)
    tp = phkt_build(f, s, lc)
    assert tp.conn.gamma == lc.gamma == tp.extra["D1"].gamma
    out = w133_checks(f, s, tp)
    assert out["identity_residual"].is_zero() and out["kr_residual"].is_zero()
    assert out["strong"] and out["lc_parallel"] and out["flat"]
    assert all(out["consequences"].values()), out["consequences"]
    # mutation: the checkers must see a perturbed curvature tensor
    rng = random.Random(SEED)
    for _ in range(5):
        R = Tensor.zeros(8, 0, 4)
        for _ in range(3):
            idx = tuple(rng.randrange(8) for _ in range(4))
            R.comps[idx] = R.comps[idx] + Scalar.const(rng.randint(1, 9))
        mutated = w133_checks(f, s, tp, R=R)
        assert not mutated["identity_residual"].is_zero()
        assert not mutated["kr_residual"].is_zero()


def test_criterion_10_uniqueness_perturbation(spec4):
    f = spec4.bind(point4((2, -1, 3, 5))).frame()
    s = spec4.structure
    lc = levi_civita(f)
    tp = kt_build(f, s, lc)
    P = kt_perturbation_form(fundamental_of(lc, s.J), s.J)
    flat = lambda t: [v.constant_value() for v in t.comps.flat]
    assert is_skew(P) and not P.is_zero()
    assert exact_rank([flat(P), flat(tp.T3)]) == 2
    rng = random.Random(SEED)
    amounts = set()
    while len(amounts) < 5:
        a = Scalar.const(rng.randint(-20, 20)) / rng.randint(1, 7)
        if not a.is_zero():
            amounts.add(a.format())
    from skewtor.connections import connection_from_torsion
    for a in sorted(amounts):
        conn = connection_from_torsion(lc, tp.T3 + P * parse_scalar(a))
        assert not naturality_residuals(conn, s)["DJ"].is_zero(), a


def test_criterion_11_engine_properties():
    rng = random.Random(SEED)
    for name, build in BUILTIN.items():
        spec = build()
        f = spec.frame()
        lc = levi_civita(f)
        assert lc.torsion().is_zero(), name
        assert covariant_derivative(lc, f.metric.lower).is_zero(), name
        R = curvature(lc)
        assert (R + reorder(R, "yzxw", "xyzw") + reorder(R, "zxyw", "xyzw")).is_zero(), name
        for degree in (1, 2):
            w = alternate(random_tensor(f.dim, 0, degree, rng, symbolic=True))
            assert exterior_derivative(f, exterior_derivative(f, w)).is_zero(), (name, degree)
        t = random_tensor(f.dim, 1, 1, rng, symbolic=True)
        low = raise_lower(t, 0, "lower", f.metric, position=0)
        assert raise_lower(low, 0, "raise", f.metric, position=0) == t, name
        kind = spec.structure.kind
        tp = {"norden": kt_build, "contact": phikt_build, "hyper": phkt_build}[kind](f, spec.structure, lc)
        assert is_skew(tp.T3), name
        assert is_natural(tp.conn, spec.structure), name

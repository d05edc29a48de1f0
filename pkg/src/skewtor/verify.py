"""Theorem registry: every in-scope statement as an executable check.

Each entry returns a :class:`VerificationResult`.  Identities are first
checked in normal form over the free parameters; equivalences are then
sampled at fixed-seed rational points on both sides of their condition.
"""

from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .connections import (
    ClassViolation,
    KTCurvatureData,
    connection_from_torsion,
    is_natural,
    kaehler_tensor_check,
    kt_build,
    kt_curvature_equivalence,
    natural_skew_kernel_dim,
    naturality_residuals,
    phi_curvature_checks,
    phikt_build,
    phkt_build,
    scalar_relation_checks,
    skew_basis,
    w133_checks,
)
from .families import BUILTIN, ManifoldSpec
from .lie import LieFrame, covariant_derivative, levi_civita, square_norm
from .scalar import Scalar
from .structures import ContactBStructure, HyperStructure, NordenStructure, classify, fundamental_of
from .tensor import Tensor

STATUSES = ("proved-symbolically", "holds-at-points", "failed", "vacuous")
DEFAULT_SEED = 1
DEFAULT_POINTS = 20


@dataclass
class VerificationResult:
    theorem_id: str
    statement: str
    status: str
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    elapsed: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "failed" and not self.witness:
            raise ValueError(f"{self.theorem_id}: a failed result needs a witness")

    @property
    def failed(self) -> bool:
        return self.status == "failed"

    def to_dict(self) -> dict:
        # timing is left out so that reports are reproducible byte for byte
        return {
            "id": self.theorem_id,
            "statement": self.statement,
            "status": self.status,
            "witness": exact(self.witness),
            "details": exact(self.details),
            "seed": self.seed,
        }


def exact(v):
    """Recursively turn Scalars and Fractions into canonical strings."""
    if isinstance(v, Scalar):
        return v.format()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): exact(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [exact(x) for x in v]
    return v


class _Fail(Exception):
    def __init__(self, witness: dict):
        super().__init__(witness)
        self.witness = witness


# -- sampling ------------------------------------------------------------------

def rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def nonzero_rational(rng: random.Random) -> Fraction:
    while True:
        q = rational(rng)
        if q:
            return q


def generic_points(rng: random.Random, names, n: int) -> list:
    return [{p: rational(rng) for p in names} for _ in range(n)]


def quadric_points(rng: random.Random, n: int) -> list:
    """Points with l1^2 + l2^2 = l3^2 + l4^2, by a rational rotation of (l1, l2)."""
    out = []
    for _ in range(n):
        a, b, t = rational(rng), rational(rng), rational(rng)
        c, s = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        out.append({"l1": a, "l2": b, "l3": c * a - s * b, "l4": s * a + c * b})
    return out


def mu_line_points(rng: random.Random, n: int) -> list:
    """Points of the 5D family with m1 = m2 or m1 = -m2 (alternating)."""
    out = []
    for k in range(n):
        p = {f"l{i}": rational(rng) for i in range(1, 5)}
        p["m2"] = rational(rng)
        p["m1"] = p["m2"] if k % 2 == 0 else -p["m2"]
        out.append(p)
    return out


def _point_str(p: dict) -> dict:
    return {k: str(v) for k, v in p.items()}


def _witness(name: str, t, point: dict | None = None) -> dict | None:
    """Witness for a nonzero residual tensor or scalar, or None when it vanishes."""
    if isinstance(t, Scalar):
        if t.is_zero():
            return None
        w = {"residual": name, "value": t.format()}
    else:
        hit = t.first_nonzero()
        if hit is None:
            return None
        w = {"residual": name, "component": [i + 1 for i in hit[0]], "value": hit[1].format()}
    if point is not None:
        w["point"] = _point_str(point)
    return w


def _check_zero(residuals: dict, point: dict | None = None):
    for name, t in residuals.items():
        w = _witness(name, t, point)
        if w is not None:
            raise _Fail(w)


# -- run context ---------------------------------------------------------------

@dataclass
class _Run:
    spec: ManifoldSpec
    rng: random.Random
    n_points: int
    _frame: LieFrame | None = None

    @property
    def frame(self) -> LieFrame:
        if self._frame is None:
            self._frame = self.spec.frame()
        return self._frame

    @property
    def free(self) -> tuple:
        return self.spec.free_params

    @property
    def symbolic_status(self) -> str:
        """Status for an identity checked in normal form over the unbound parameters."""
        return "holds-at-points" if self.spec.bindings else "proved-symbolically"

    def is_family(self, name: str) -> bool:
        return self.spec.same_geometry(BUILTIN[name]())

    def special(self, names) -> bool:
        """True when every parameter in ``names`` is free, so family samplers apply."""
        return all(n in self.free for n in names)

    def generic(self, n: int | None = None) -> list:
        return generic_points(self.rng, self.free, self.n_points if n is None else n)

    def zero_point(self) -> dict:
        return {p: Fraction(0) for p in self.free}

    def restrict(self, points) -> list:
        """Drop bound names from sampled points; a fully bound spec gets the empty point."""
        out = [{k: v for k, v in p.items() if k in self.free} for p in points]
        return out if self.free else [{}]


def _vacuous(reason: str, **details):
    return "vacuous", None, {"reason": reason, **details}


def _kind_guard(run: _Run, cls, label: str):
    if not isinstance(run.spec.structure, cls):
        return _vacuous(f"needs a {label} structure")
    return None


def _family_guard(run: _Run, family: str):
    if not run.is_family(family):
        return _vacuous(f"stated for the {family} family only")
    return None


# -- Norden, KT ------------------------------------------------------------------

def _q4():
    l1, l2, l3, l4 = (Scalar.var(f"l{i}") for i in range(1, 5))
    return l1 * l1 + l2 * l2 - l3 * l3 - l4 * l4


DESIGNATED_4D = (
    {"l1": 1, "l2": 0, "l3": 1, "l4": 0},
    {"l1": 1, "l2": 0, "l3": 0, "l4": 0},
)


def expected_kt_torsion_4d() -> Tensor:
    from .tensor import alternate
    l1, l2, l3, l4 = (Scalar.var(f"l{i}") for i in range(1, 5))
    t = Tensor.zeros(4, 0, 3)
    table = {(0, 2, 3): l1, (1, 2, 3): l2, (0, 1, 2): -l3, (0, 1, 3): -l4}
    for idx, v in table.items():
        t.comps[idx] = v
    return alternate(t) * 6


def independent_components(T: Tensor) -> dict:
    """Nonzero T_ijk with i < j < k, keyed by the 1-based label string."""
    import itertools
    out = {}
    for i, j, k in itertools.combinations(range(T.dim), 3):
        v = T[i, j, k]
        if not v.is_zero():
            out[f"{i + 1}{j + 1}{k + 1}"] = v
    return out


def _s2_kt_torsion(run: _Run):
    guard = _family_guard(run, "norden4d")
    if guard:
        return guard
    tp = kt_build(run.frame, run.spec.structure)
    expected = expected_kt_torsion_4d().subs(run.spec.bindings)
    table = independent_components(tp.T3)
    hit = (tp.T3 - expected).first_nonzero()
    if hit is not None:
        idx = hit[0]
        raise _Fail({"component": [i + 1 for i in idx], "computed": tp.T3[idx].format(),
                     "expected": expected[idx].format()})
    return run.symbolic_status, None, {"torsion": table}


def _norden_points(run: _Run, family: bool) -> list:
    """Sample points for Norden equivalences: zero, designated, quadric, generic."""
    pts = [run.zero_point()]
    if family and not run.spec.bindings:
        pts += [{k: Fraction(v) for k, v in p.items()} for p in DESIGNATED_4D]
        pts += quadric_points(run.rng, run.n_points)
    pts += run.generic()
    return run.restrict(pts)


def _s2_equivalences(run: _Run):
    guard = _family_guard(run, "norden4d")
    if guard:
        return guard
    d = KTCurvatureData.build(run.frame, run.spec.structure)
    q = _q4().subs(run.spec.bindings)
    J = run.spec.structure.J
    on = off = 0
    for p in _norden_points(run, True):
        dp = d.subs(p)
        conds = {
            "isotropic Kaehler": dp.norm_nabla_J.is_zero(),
            "scalar flat": dp.tau.is_zero(),
            "R' Kaehler": kaehler_tensor_check(dp.R_kt, J),
            "quadric": q.subs(p).is_zero(),
        }
        if conds["quadric"]:
            on += 1
        else:
            off += 1
        if len(set(conds.values())) > 1:
            raise _Fail({"point": _point_str({**run.spec.bindings, **p}), "conditions": conds})
    return "holds-at-points", None, {
        "points on the quadric": on,
        "points off the quadric": off,
        "|nabla J|^2": d.norm_nabla_J,
        "tau": d.tau,
        "quadric": q,
    }


def _kt_data(run: _Run):
    f, s = run.frame, run.spec.structure
    try:
        return KTCurvatureData.build(f, s)
    except ClassViolation as exc:
        return exc


def _s2_thm21(run: _Run):
    guard = _kind_guard(run, NordenStructure, "Norden")
    if guard:
        return guard
    d = _kt_data(run)
    if isinstance(d, ClassViolation):
        return _vacuous(f"no KT-connection: {d}")
    flags = kt_curvature_equivalence(d)
    if all(flags.values()):
        return run.symbolic_status, None, {"symbolic": flags}
    family = run.is_family("norden4d")
    pts = _norden_points(run, family)
    for p in pts:
        b = kt_curvature_equivalence(d.subs(p))
        if len(set(b.values())) > 1:
            raise _Fail({"point": _point_str({**run.spec.bindings, **p}), "conditions": b})
    return "holds-at-points", None, {"symbolic": flags, "points": len(pts)}


def _s2_scalar_props(run: _Run):
    guard = _kind_guard(run, NordenStructure, "Norden")
    if guard:
        return guard
    d = _kt_data(run)
    if isinstance(d, ClassViolation):
        return _vacuous(f"no KT-connection: {d}")
    pts = _norden_points(run, run.is_family("norden4d"))
    counts = {"points": len(pts), "kaehler": 0, "parallel": 0, "both": 0}
    for p in pts:
        r = scalar_relation_checks(d.subs(p))
        counts["kaehler"] += r["kaehler"]
        counts["parallel"] += r["parallel"]
        counts["both"] += r["kaehler"] and r["parallel"]
        if not r["ok"]:
            full = {**run.spec.bindings, **p}
            for branch, name in (("kaehler", "kaehler_relation"), ("parallel", "parallel_relation")):
                if r[branch] and not r[name].is_zero():
                    raise _Fail({"point": _point_str(full), "branch": branch, "residual": r[name].format()})
            raise _Fail({"point": _point_str(full), "branch": "both", "residual": r["norm"].format()})
    status = "holds-at-points" if counts["kaehler"] or counts["parallel"] else "vacuous"
    return status, None, {"triggers": counts}


# -- contact, phiKT --------------------------------------------------------------

def _s3_class(run: _Run):
    guard = _family_guard(run, "contact5d")
    if guard:
        return guard
    f, s = run.frame, run.spec.structure
    flags = classify(f, levi_civita(f), s)
    if not flags["F7"]:
        from .structures import class_conditions
        for k, r in enumerate(class_conditions(f, levi_civita(f), s)["F7"]):
            w = _witness(f"F7 condition {k + 1}", r)
            if w:
                raise _Fail(w)
    for p in run.restrict(run.generic()):
        fp = f.subs(p)
        if not classify(fp, levi_civita(fp), s)["F7"]:
            raise _Fail({"point": _point_str(p), "class": "F7"})
    return run.symbolic_status, None, {"classes": flags}


PRINTED_5D_TORSION = {(1, 2, 5): "2*m1", (3, 4, 5): "2*m1", (2, 3, 5): "2*m2", (4, 1, 5): "2*m2"}


def _s3_torsion(run: _Run):
    guard = _family_guard(run, "contact5d")
    if guard:
        return guard
    from .scalar import parse_scalar
    tp = phikt_build(run.frame, run.spec.structure)
    table = independent_components(tp.T3)
    for idx, text in PRINTED_5D_TORSION.items():
        want = parse_scalar(text).subs(run.spec.bindings)
        got = tp.T3.at(*idx)
        if got != want:
            raise _Fail({"component": list(idx), "computed": got.format(), "expected": want.format(),
                         "torsion": {k: v.format() for k, v in table.items()}})
    return run.symbolic_status, None, {"torsion": table}


def _s3_parallel(run: _Run):
    guard = _family_guard(run, "contact5d")
    if guard:
        return guard
    tp = phikt_build(run.frame, run.spec.structure)
    _check_zero({"D T": covariant_derivative(tp.conn, tp.T3)})
    return run.symbolic_status, None, {}


def proportional_to_power(p: Scalar, base: Scalar):
    """(c, k) with p = c * base^k, c a nonzero rational and k >= 1, else None."""
    if p.is_zero() or base.is_zero() or base.is_constant():
        return None
    power, k = base, 1
    while power.degree() <= p.degree():
        if power.degree() == p.degree():
            c = p.sorted_terms()[0][1] / power.sorted_terms()[0][1]
            if p == power * Scalar.const(c):
                return c, k
        power, k = power * base, k + 1
    return None


def _s3_isotropic(run: _Run):
    guard = _family_guard(run, "contact5d")
    if guard:
        return guard
    f, s = run.frame, run.spec.structure
    norm = square_norm(f.metric, fundamental_of(levi_civita(f), s.phi))
    m1, m2 = Scalar.var("m1"), Scalar.var("m2")
    cond = (m1 * m1 - m2 * m2).subs(run.spec.bindings)
    details = {"|nabla phi|^2": norm}
    status = "holds-at-points"
    if not run.spec.bindings:
        hit = proportional_to_power(norm, cond)
        if hit is None:
            raise _Fail({"residual": "|nabla phi|^2 / (m1^2 - m2^2)^k", "value": norm.format()})
        details["factor"], details["power"] = hit
        status = "proved-symbolically"
    pts = []
    if run.special(("m1", "m2")):
        zero_l = {f"l{i}": Fraction(0) for i in range(1, 5)}
        pts += [{**zero_l, "m1": Fraction(1), "m2": Fraction(1)},
                {**zero_l, "m1": Fraction(1), "m2": Fraction(0)}]
        pts += mu_line_points(run.rng, run.n_points)
    pts += run.generic()
    on = off = 0
    for p in run.restrict(pts):
        iso, c = norm.subs(p).is_zero(), cond.subs(p).is_zero()
        on, off = on + c, off + (not c)
        if iso != c:
            raise _Fail({"point": _point_str({**run.spec.bindings, **p}), "isotropic": iso, "m1 = +-m2": c})
    details.update({"points with m1 = +-m2": on, "points off": off})
    return status, None, details


def _s3_k_theorems(run: _Run):
    guard = _kind_guard(run, ContactBStructure, "contact B-metric")
    if guard:
        return guard
    f, s = run.frame, run.spec.structure
    try:
        pc = phi_curvature_checks(f, s)
    except ClassViolation as exc:
        return _vacuous(f"not F7: {exc}")
    keys = ("K", "R", "kaehler_form_residual", "parallel_form_residual", "ricci_residual", "tau_residual")

    def at(p):
        sub = {k: pc[k].subs(p) for k in keys}
        sub["phi_kaehler"] = kaehler_tensor_check(sub["K"], s.phi)
        sub["parallel"] = pc["parallel"] or _parallel_at(f, s, p)
        return sub

    symbolic_form = pc["kaehler_form_residual"].is_zero()
    if pc["phi_kaehler"] != symbolic_form:
        raise _Fail(_witness("K - closed form", pc["kaehler_form_residual"]) or {"residual": "phi-Kaehler"})
    pts = [run.zero_point()]
    if run.special(("m1", "m2")):
        pts += [{**p, "m1": Fraction(0), "m2": Fraction(0)} for p in run.generic()]
    pts += run.generic()
    counts = {"points": 0, "phi-kaehler": 0, "phi-kaehler and DT = 0": 0}
    for p in run.restrict(pts):
        sub = at(p)
        counts["points"] += 1
        full = {**run.spec.bindings, **p}
        if sub["phi_kaehler"] != sub["kaehler_form_residual"].is_zero():
            raise _Fail({"point": _point_str(full), "phi-kaehler": sub["phi_kaehler"],
                         "closed form holds": sub["kaehler_form_residual"].is_zero()})
        if sub["phi_kaehler"]:
            counts["phi-kaehler"] += 1
            if sub["parallel"]:
                counts["phi-kaehler and DT = 0"] += 1
                _check_zero({"K - parallel closed form": sub["parallel_form_residual"],
                             "rho(K) - rho": sub["ricci_residual"],
                             "tau(K) - tau": sub["tau_residual"]}, full)
    details = {
        "triggers": counts,
        "symbolic": {"phi-kaehler": pc["phi_kaehler"], "closed form": symbolic_form,
                     "DT = 0": pc["parallel"],
                     "rho(K) = rho": pc["ricci_residual"].is_zero(),
                     "tau(K) - tau": pc["tau_residual"]},
    }
    if pc["phi_kaehler"] and symbolic_form:
        return run.symbolic_status, None, details
    return "holds-at-points", None, details


def _parallel_at(f: LieFrame, s, p: dict) -> bool:
    fp = f.subs(p)
    tp = phikt_build(fp, s)
    return covariant_derivative(tp.conn, tp.T3).is_zero()


# -- hyper, pHKT -----------------------------------------------------------------

def _conditional(run: _Run, premise: Callable, claim: Callable, label: str):
    """Check ``claim`` wherever ``premise`` holds: symbolically, else at points.

    ``premise(frame) -> bool`` and ``claim(frame) -> dict`` of residuals;
    raises _Fail on a nonzero residual, returns (status, witness, details).
    """
    f = run.frame
    if premise(f):
        details = claim(f) or {}
        return run.symbolic_status, None, details
    pts = run.restrict([run.zero_point()] + run.generic())
    triggers = 0
    for p in pts:
        fp = f.subs(p)
        if premise(fp):
            triggers += 1
            try:
                claim(fp)
            except _Fail as exc:
                exc.witness["point"] = _point_str({**run.spec.bindings, **p})
                raise
    if not triggers:
        return _vacuous(f"{label} holds at none of {len(pts)} sampled points")
    return "holds-at-points", None, {"triggers": triggers, "points": len(pts)}


@functools.lru_cache(maxsize=16)
def _classes(f: LieFrame, s) -> dict:
    return classify(f, levi_civita(f), s)


@functools.lru_cache(maxsize=16)
def _w133_data(f: LieFrame, s) -> dict:
    return w133_checks(f, s)


def _s4_g1(run: _Run):
    guard = _kind_guard(run, HyperStructure, "hypercomplex")
    if guard:
        return guard
    s = run.spec.structure

    def premise(f):
        c = _classes(f, s)
        return c["W3(J2)"] and c["W3(J3)"]

    def claim(f):
        from .structures import class_conditions
        _check_zero({"G1(J1)": class_conditions(f, levi_civita(f), s)["G1(J1)"][0]})
        return {"classes": _classes(f, s)}

    return _conditional(run, premise, claim, "W3(J2) and W3(J3)")


def _w133(s):
    return lambda f: _classes(f, s)["W133"]


def _s4_curv_identity(run: _Run):
    guard = _kind_guard(run, HyperStructure, "hypercomplex")
    if guard:
        return guard
    s = run.spec.structure

    def claim(f):
        w = _w133_data(f, s)
        _check_zero({"curvature identity": w["identity_residual"], "K-R relation": w["kr_residual"]})
        return {}

    return _conditional(run, _w133(s), claim, "W133")


def uniqueness_perturbation(f: LieFrame, s, tp, amounts, P: Tensor | None = None) -> dict:
    """Shift the torsion by a * P for each amount; pairs [a, naturality broken].

    Without ``P`` a fixed generic 3-form is used (sum of k * e^{abc} over the
    basis), which is what a structure with F = 0 calls for.
    """
    lc = levi_civita(f)
    if P is None:
        P = Tensor.zeros(f.dim, 0, 3)
        for k, B in enumerate(skew_basis(f.dim), start=1):
            P = P + B * k
    out = []
    for a in amounts:
        conn = connection_from_torsion(lc, tp.T3 + P * a)
        out.append([a, not is_natural(conn, s)])
    return out


def _s4_unique(run: _Run):
    guard = _kind_guard(run, HyperStructure, "hypercomplex")
    if guard:
        return guard
    s = run.spec.structure
    amounts = []
    while len(amounts) < 5:
        a = nonzero_rational(run.rng)
        if a not in amounts:
            amounts.append(a)

    def claim(f):
        tp = phkt_build(f, s)
        _check_zero({k: v for k, v in naturality_residuals(tp.conn, s).items()})
        kernel = natural_skew_kernel_dim(f, s)
        broken = uniqueness_perturbation(f, s, tp, amounts)
        if kernel or not all(b for _, b in broken):
            raise _Fail({"residual": "natural skew perturbations", "kernel dimension": kernel,
                         "breaks naturality": broken})
        return {"kernel dimension": kernel, "breaks naturality": broken}

    return _conditional(run, _w133(s), claim, "W133")


def _s4_equiv(run: _Run):
    guard = _kind_guard(run, HyperStructure, "hypercomplex")
    if guard:
        return guard
    s = run.spec.structure

    def claim(f):
        w = _w133_data(f, s)
        flags = {"strong": w["strong"], "lc_parallel": w["lc_parallel"], "flat": w["flat"]}
        if not w["equivalent"]:
            raise _Fail({"residual": "strong / parallel / flat", "flags": flags})
        return {"flags": flags}

    return _conditional(run, _w133(s), claim, "W133")


def _s4_flat(run: _Run):
    guard = _kind_guard(run, HyperStructure, "hypercomplex")
    if guard:
        return guard
    s = run.spec.structure

    def premise(f):
        if not _classes(f, s)["W133"]:
            return False
        w = _w133_data(f, s)
        return w["strong"] or w["flat"]

    def claim(f):
        cons = _w133_data(f, s)["consequences"]
        bad = [k for k, v in cons.items() if not v]
        if bad:
            raise _Fail({"residual": bad[0], "consequences": cons})
        return {"consequences": cons}

    return _conditional(run, premise, claim, "W133 with D strong or flat")


# -- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    theorem_id: str
    statement: str
    run: Callable


REGISTRY = {e.theorem_id: e for e in (
    Entry("S2-KT-torsion",
          "KT torsion of norden4d: T134 = l1, T234 = l2, T123 = -l3, T124 = -l4, all other T_ijk (i<j<k) zero",
          _s2_kt_torsion),
    Entry("S2-equivalences",
          "norden4d: |nabla J|^2 = 0 <=> tau = 0 <=> R' is a Kaehler tensor <=> l1^2 + l2^2 - l3^2 - l4^2 = 0",
          _s2_equivalences),
    Entry("S2-thm21",
          "W3 Norden: R' Kaehler <=> 12R' = 12R + 2g(T(x,y),T(z,w)) - g(T(y,z),T(x,w)) - g(T(z,x),T(y,w))"
          " <=> cyclic_{x,y,z} g(P(x,y),P(z,w)) = 0, P(x,y) = (nabla_x J)Jy + (nabla_Jx J)y",
          _s2_thm21),
    Entry("S2-scalar-props",
          "W3 Norden: R' Kaehler => 3|nabla J|^2 = 8(tau' - tau); nabla'T = 0 => |nabla J|^2 = 8(tau - tau');"
          " both => |nabla J|^2 = 0",
          _s2_scalar_props),
    Entry("S3-class",
          "contact5d with its bracket table lies in F7",
          _s3_class),
    Entry("S3-torsion",
          "phiKT torsion of contact5d: T125 = T345 = 2 m1, T235 = T415 = 2 m2",
          _s3_torsion),
    Entry("S3-parallel",
          "phiKT connection D of contact5d satisfies D T = 0",
          _s3_parallel),
    Entry("S3-isotropic",
          "contact5d: |nabla phi|^2 = 0 <=> m1 = +-m2",
          _s3_isotropic),
    Entry("S3-K-theorems",
          "F7: K phi-Kaehler <=> K = R + 1/3{2a(x,y)a(z,w) - a(y,z)a(x,w) - a(z,x)a(y,w)} + eta-terms,"
          " a = nabla eta; K phi-Kaehler and D T = 0 => K = R + 1/3{2a(x,y)a(z,w) + a(x,z)a(y,w)"
          " - a(x,w)a(y,z)}, rho(K) = rho, tau(K) = tau",
          _s3_k_theorems),
    Entry("S4-G1",
          "(H,G): W3(J2) and W3(J3) => F1(x,x,z) = F1(J1x,J1x,z) (class G1 for J1)",
          _s4_g1),
    Entry("S4-curv-identity",
          "W133: R(x,y,z,w) + sum_a R(x,y,J_a z,J_a w) = sum_a {A_a(x,z,y,w) - A_a(y,z,x,w)}"
          " and K = R + A1/4 + cyclic_{x,y,z} A1/4, A_a(x,y,z,w) = g((nabla_x J_a)y, (nabla_z J_a)w)",
          _s4_curv_identity),
    Entry("S4-unique",
          "W133: D is natural and no other natural connection has skew torsion"
          " (every skew shift of T breaks DJ_a = 0)",
          _s4_unique),
    Entry("S4-equiv",
          "W133: dT = 0 <=> nabla T = 0 <=> K = 0",
          _s4_equiv),
    Entry("S4-flat",
          "W133 with D strong or flat: R = 0, |nabla J_a|^2 = 0 (a = 1,2,3), |T|^2 = 0",
          _s4_flat),
)}


def theorem_ids() -> list:
    return list(REGISTRY)


def verify(spec: ManifoldSpec, theorem_id: str = "all", seed: int = DEFAULT_SEED,
           n_points: int = DEFAULT_POINTS) -> list:
    """Run one registry entry, or all of them in registry order."""
    if theorem_id == "all":
        entries = list(REGISTRY.values())
    elif theorem_id in REGISTRY:
        entries = [REGISTRY[theorem_id]]
    else:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {', '.join(REGISTRY)}")

    issues = spec.validation_issues()
    if issues:
        axiom, where = issues[0]
        witness = {"axiom": axiom, "component": list(where) if where else None}
        return [VerificationResult(e.theorem_id, e.statement, "failed", witness,
                                   {"reason": "spec fails validation"}, seed) for e in entries]

    frame = spec.frame()
    results = []
    for e in entries:
        start = time.perf_counter()
        run = _Run(spec, random.Random(f"{seed}/{e.theorem_id}"), n_points, frame)
        try:
            status, witness, details = e.run(run)
        except _Fail as exc:
            status, witness, details = "failed", exc.witness, {}
        results.append(VerificationResult(e.theorem_id, e.statement, status, witness, details, seed,
                                          time.perf_counter() - start))
    return results

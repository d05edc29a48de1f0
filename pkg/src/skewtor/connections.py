"""Natural connections with totally skew-symmetric torsion.

Three constructions: the KT-connection of a quasi-Kähler Norden manifold,
the phiKT-connection of an F3+F7 contact B-metric manifold, and the
pHKT-connection of a W133 (H,G)-manifold.  Alongside them sit the curvature
identities those connections are known to satisfy, each exposed as residual
tensors so callers can test them identically or at parameter points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lie import (
    Connection,
    LieFrame,
    codifferential_3form,
    covariant_derivative,
    curvature,
    exterior_derivative,
    levi_civita,
    ricci_scalar,
    square_norm,
)
from .scalar import Scalar
from .structures import (
    ContactBStructure,
    HyperStructure,
    NordenStructure,
    StructureError,
    class_conditions,
    fundamental_of,
    nabla_covector,
    nabla_endomorphism,
    nabla_vector,
)
from .tensor import Tensor, apply_endomorphism, cyclic_sum, einsum, is_skew, raise_lower, reorder


class ClassViolation(StructureError):
    """The manifold is outside the class on which a connection is defined."""


def _lower_last(t12: Tensor, f: LieFrame) -> Tensor:
    """(1,2) ``[k, x, y]`` -> (0,3) ``(x, y, z) -> g(t(x, y), z)``."""
    return raise_lower(t12, 0, "lower", f.metric)


@dataclass(frozen=True, eq=False)
class TorsionPack:
    T3: Tensor
    T12: Tensor
    conn: Connection
    extra: dict = field(default_factory=dict)

    @classmethod
    def of(cls, conn: Connection, extra: dict | None = None) -> "TorsionPack":
        T12 = conn.torsion()
        return cls(_lower_last(T12, conn.frame), T12, conn, extra or {})

    def invariant_residuals(self) -> dict:
        f = self.conn.frame
        return {
            "T3 skew": self.T3 - _alt(self.T3),
            "T3 = g(T12, .)": self.T3 - _lower_last(self.T12, f),
            "T12 = torsion(conn)": self.T12 - self.conn.torsion(),
        }


def _alt(t: Tensor) -> Tensor:
    from .tensor import alternate
    return alternate(t)


def connection_from_torsion(lc: Connection, T3: Tensor, name: str = "") -> Connection:
    """g(D_x y - nabla_x y, z) = T(x, y, z) / 2."""
    return lc.shifted(T3 / 2, name)


def _require(f: LieFrame, lc: Connection, s, cls_name: str):
    res = class_conditions(f, lc, s)[cls_name]
    for r in res:
        hit = r.first_nonzero()
        if hit is not None:
            idx = tuple(i + 1 for i in hit[0])
            raise ClassViolation(f"manifold is not in class {cls_name}: residual {idx} = {hit[1]}")


# -- KT ------------------------------------------------------------------------

def kt_torsion(F: Tensor, J: Tensor) -> Tensor:
    """T(x,y,z) = -1/2 {F(x,y,Jz) + F(y,z,Jx) + F(z,x,Jy)}."""
    return cyclic_sum(apply_endomorphism(F, 2, J)) * Scalar.const(-1) / 2


def kt_build(f: LieFrame, s: NordenStructure, lc: Connection | None = None) -> TorsionPack:
    lc = lc or levi_civita(f)
    _require(f, lc, s, "W3")
    T3 = kt_torsion(fundamental_of(lc, s.J), s.J)
    return TorsionPack.of(connection_from_torsion(lc, T3, "KT"))


# -- phiKT -----------------------------------------------------------------------

def phikt_torsion(F: Tensor, s: ContactBStructure) -> Tensor:
    """T = -1/2 cyclic{F(x,y,phi z) - 3 eta(x) F(y, phi z, xi)}."""
    a = apply_endomorphism(F, 2, s.phi)
    b = einsum("x,yab,az,b->xyz", s.eta, F, s.phi, s.xi, up=0, down=3)
    return cyclic_sum(a - b * 3) * Scalar.const(-1) / 2


def phikt_explicit(f: LieFrame, s: ContactBStructure, lc: Connection | None = None) -> Connection:
    """D_x y from nabla, nabla phi, nabla xi and nabla eta directly.

    D_x y = nabla_x y + 1/4 {2 (nabla_x phi) phi y - (nabla_y phi) phi x
            + (nabla_{phi y} phi) x + 3 eta(x) nabla_y xi - 4 eta(y) nabla_x xi
            + 2 (nabla_x eta)(y) xi}
    """
    lc = lc or levi_civita(f)
    dphi = nabla_endomorphism(lc, s.phi).comps      # [k, i, b]
    dxi = nabla_vector(lc, s.xi).comps              # [k, i]
    deta = nabla_covector(lc, s.eta).comps          # [x, y]
    phi, eta, xi = s.phi.comps, s.eta.comps, s.xi.comps
    corr = (
        2 * np.einsum("kxa,ay->kxy", dphi, phi)
        - np.einsum("kya,ax->kxy", dphi, phi)
        + np.einsum("by,kbx->kxy", phi, dphi)
        + 3 * np.einsum("x,ky->kxy", eta, dxi)
        - 4 * np.einsum("y,kx->kxy", eta, dxi)
        + 2 * np.einsum("xy,k->kxy", deta, xi)
    )
    return Connection(f, lc.gamma + Tensor(corr, 1, 2) / 4, "phiKT-explicit")


def f7_torsion(f: LieFrame, s: ContactBStructure, lc: Connection | None = None) -> Tensor:
    """Lowered 2{eta(x) nabla_y xi - eta(y) nabla_x xi + (nabla_x eta)(y) xi}."""
    lc = lc or levi_civita(f)
    dxi = nabla_vector(lc, s.xi).comps
    deta = nabla_covector(lc, s.eta).comps
    eta, xi = s.eta.comps, s.xi.comps
    t12 = 2 * (np.einsum("x,ky->kxy", eta, dxi) - np.einsum("y,kx->kxy", eta, dxi)
               + np.einsum("xy,k->kxy", deta, xi))
    return _lower_last(Tensor(t12, 1, 2), f)


def phikt_build(f: LieFrame, s: ContactBStructure, lc: Connection | None = None) -> TorsionPack:
    """phiKT-connection; ``extra["explicit"]`` holds the independently built route."""
    lc = lc or levi_civita(f)
    _require(f, lc, s, "F3+F7")
    T3 = phikt_torsion(fundamental_of(lc, s.phi), s)
    conn = connection_from_torsion(lc, T3, "phiKT")
    return TorsionPack.of(conn, {"explicit": phikt_explicit(f, s, lc)})


# -- pHKT ------------------------------------------------------------------------

def phkt_build(f: LieFrame, s: HyperStructure, lc: Connection | None = None) -> TorsionPack:
    """pHKT-connection D, with the KT-connections D1, D2, D3 in ``extra``.

    g(D_x y, z) = g(nabla_x y, z) + 1/2 F1(x, y, J1 z); D1 is given by the same
    formula and D2, D3 by g(nabla_x y, z) - 1/4 cyclic F_a(x, y, J_a z).
    """
    lc = lc or levi_civita(f)
    _require(f, lc, s, "W133")
    Fs = [fundamental_of(lc, J) for J in s.Js]
    shift1 = apply_endomorphism(Fs[0], 2, s.J1) / 2
    D = lc.shifted(shift1, "pHKT")
    extra = {"D1": lc.shifted(shift1, "D1")}
    for a in (1, 2):
        shift = cyclic_sum(apply_endomorphism(Fs[a], 2, s.Js[a])) * Scalar.const(-1) / 4
        extra[f"D{a + 1}"] = lc.shifted(shift, f"D{a + 1}")
    return TorsionPack.of(D, extra)


# -- naturality ------------------------------------------------------------------

def naturality_residuals(conn: Connection, s) -> dict:
    g = conn.frame.metric.lower
    out = {f"D{name}": covariant_derivative(conn, t) for name, t in s.operators().items()}
    out["Dg"] = covariant_derivative(conn, g)
    return out


def is_natural(conn: Connection, s) -> bool:
    return all(r.is_zero() for r in naturality_residuals(conn, s).values())


# -- curvature -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CurvatureReport:
    R4: Tensor
    ricci: Tensor
    tau: Scalar
    flags: dict = field(default_factory=dict)


def connection_curvature(tp: TorsionPack | Connection) -> CurvatureReport:
    conn = tp.conn if isinstance(tp, TorsionPack) else tp
    R4 = curvature(conn)
    rho, tau = ricci_scalar(R4, conn.frame.metric)
    flags = {
        "flat": R4.is_zero(),
        "antisymmetric in (x,y)": (R4 + reorder(R4, "yxzw", "xyzw")).is_zero(),
    }
    return CurvatureReport(R4, rho, tau, flags)


def kaehler_residuals(L: Tensor, op: Tensor) -> dict:
    """Residuals of the four Kähler-tensor identities of ``L`` w.r.t. ``op``."""
    return {
        "L(x,y,z,w) = -L(y,x,z,w)": L + reorder(L, "yxzw", "xyzw"),
        "L(x,y,z,w) = -L(x,y,w,z)": L + reorder(L, "xywz", "xyzw"),
        "cyclic L(x,y,z,w) = 0": cyclic_sum(L),
        "L(x,y,Jz,Jw) = -L(x,y,z,w)": apply_endomorphism(apply_endomorphism(L, 2, op), 3, op) + L,
    }


def kaehler_tensor_check(L: Tensor, op: Tensor) -> bool:
    return all(r.is_zero() for r in kaehler_residuals(L, op).values())


def torsion_pairing(tp: TorsionPack) -> Tensor:
    """(x, y, z, w) -> g(T(x, y), T(z, w))."""
    return einsum("xyb,bzw->xyzw", tp.T3, tp.T12, up=0, down=4)


# -- KT curvature identities ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class KTCurvatureData:
    """Everything the KT curvature statements need, computed once."""

    frame: LieFrame
    structure: NordenStructure
    lc: Connection
    tp: TorsionPack
    F: Tensor
    R: Tensor
    R_kt: Tensor
    tau: Scalar
    tau_kt: Scalar
    norm_nabla_J: Scalar

    @classmethod
    def build(cls, f: LieFrame, s: NordenStructure) -> "KTCurvatureData":
        lc = levi_civita(f)
        tp = kt_build(f, s, lc)
        R = curvature(lc)
        Rk = curvature(tp.conn)
        F = fundamental_of(lc, s.J)
        _, tau = ricci_scalar(R, f.metric)
        _, tau_k = ricci_scalar(Rk, f.metric)
        return cls(f, s, lc, tp, F, R, Rk, tau, tau_k, square_norm(f.metric, F))

    def subs(self, point) -> "KTCurvatureData":
        f = self.frame.subs(point)
        lc = Connection(f, self.lc.gamma.subs(point), self.lc.name)
        conn = Connection(f, self.tp.conn.gamma.subs(point), self.tp.conn.name)
        tp = TorsionPack(self.tp.T3.subs(point), self.tp.T12.subs(point), conn)
        return KTCurvatureData(f, self.structure, lc, tp, self.F.subs(point), self.R.subs(point),
                               self.R_kt.subs(point), self.tau.subs(point), self.tau_kt.subs(point),
                               self.norm_nabla_J.subs(point))


def kt_residual_ii(d: KTCurvatureData) -> Tensor:
    """12R' - 12R - 2g(T(x,y),T(z,w)) + g(T(y,z),T(x,w)) + g(T(z,x),T(y,w))."""
    TT = torsion_pairing(d.tp)
    return (d.R_kt * 12 - d.R * 12 - TT * 2
            + reorder(TT, "yzxw", "xyzw") + reorder(TT, "zxyw", "xyzw"))


def kt_residual_iii(d: KTCurvatureData) -> Tensor:
    """cyclic_{x,y,z} g(P(x,y), P(z,w)) with P(x,y) = (nabla_x J)Jy + (nabla_{Jx} J)y."""
    DJ = nabla_endomorphism(d.lc, d.structure.J).comps    # [a, i, b]
    J = d.structure.J.comps
    P = np.einsum("axb,by->axy", DJ, J) + np.einsum("ix,aiy->axy", J, DJ)
    PP = np.einsum("axy,ab,bzw->xyzw", P, d.frame.metric.lower.comps, P)
    return cyclic_sum(Tensor(PP, 0, 4))


def kt_curvature_equivalence(d: KTCurvatureData) -> dict:
    """The three equivalent conditions on the KT curvature, as booleans."""
    return {
        "R' is Kaehler": kaehler_tensor_check(d.R_kt, d.structure.J),
        "R' = R + torsion terms": kt_residual_ii(d).is_zero(),
        "cyclic nabla J condition": kt_residual_iii(d).is_zero(),
    }


def kt_torsion_parallel(d: KTCurvatureData) -> bool:
    return covariant_derivative(d.tp.conn, d.tp.T3).is_zero()


def scalar_relation_checks(d: KTCurvatureData) -> dict:
    """Scalar curvature relations under their hypotheses.

    ``kaehler`` / ``parallel`` record whether each hypothesis holds;
    ``kaehler_relation`` / ``parallel_relation`` are the residuals
    3|nabla J|^2 - 8(tau' - tau) and |nabla J|^2 - 8(tau - tau'), which must
    vanish whenever the matching hypothesis holds.
    """
    kaehler = kaehler_tensor_check(d.R_kt, d.structure.J)
    parallel = kt_torsion_parallel(d)
    n2 = d.norm_nabla_J
    r1 = n2 * 3 - (d.tau_kt - d.tau) * 8
    r2 = n2 - (d.tau - d.tau_kt) * 8
    out = {
        "kaehler": kaehler,
        "parallel": parallel,
        "kaehler_relation": r1,
        "parallel_relation": r2,
        "norm": n2,
    }
    out["ok"] = ((not kaehler or r1.is_zero()) and (not parallel or r2.is_zero())
                 and (not (kaehler and parallel) or n2.is_zero()))
    return out


# -- F7 curvature --------------------------------------------------------------------

def _eta_terms(f: LieFrame, lc: Connection, s: ContactBStructure):
    a = nabla_covector(lc, s.eta)                    # a[x, y] = (nabla_x eta) y
    dxi = nabla_vector(lc, s.xi)                      # [k, i]
    b = einsum("ky,kl,lw->yw", dxi, f.metric.lower, dxi, up=0, down=2)  # g(nabla_y xi, nabla_w xi)
    return a, b


def f7_kaehler_form(f: LieFrame, lc: Connection, s: ContactBStructure, R: Tensor) -> Tensor:
    """R + 1/3{2a(x,y)a(z,w) - a(y,z)a(x,w) - a(z,x)a(y,w)} + eta-quadratic terms in g(nabla xi, nabla xi)."""
    a, b = _eta_terms(f, lc, s)
    A, B, eta = a.comps, b.comps, s.eta.comps
    cub = (2 * np.einsum("xy,zw->xyzw", A, A) - np.einsum("yz,xw->xyzw", A, A)
           - np.einsum("zx,yw->xyzw", A, A))
    quad = (np.einsum("x,z,yw->xyzw", eta, eta, B) - np.einsum("x,w,yz->xyzw", eta, eta, B)
            - np.einsum("y,z,xw->xyzw", eta, eta, B) + np.einsum("y,w,xz->xyzw", eta, eta, B))
    return R + Tensor(cub, 0, 4) / 3 + Tensor(quad, 0, 4)


def f7_parallel_form(f: LieFrame, lc: Connection, s: ContactBStructure, R: Tensor) -> Tensor:
    """R + 1/3{2a(x,y)a(z,w) + a(x,z)a(y,w) - a(x,w)a(y,z)}."""
    a, _ = _eta_terms(f, lc, s)
    A = a.comps
    cub = (2 * np.einsum("xy,zw->xyzw", A, A) + np.einsum("xz,yw->xyzw", A, A)
           - np.einsum("xw,yz->xyzw", A, A))
    return R + Tensor(cub, 0, 4) / 3


def phi_curvature_checks(f: LieFrame, s: ContactBStructure, tp: TorsionPack | None = None) -> dict:
    lc = levi_civita(f)
    _require(f, lc, s, "F7")
    tp = tp or phikt_build(f, s, lc)
    R = curvature(lc)
    K = curvature(tp.conn)
    rho, tau = ricci_scalar(R, f.metric)
    rho_k, tau_k = ricci_scalar(K, f.metric)
    parallel = covariant_derivative(tp.conn, tp.T3).is_zero()
    return {
        "K": K,
        "R": R,
        "phi_kaehler": kaehler_tensor_check(K, s.phi),
        "kaehler_form_residual": K - f7_kaehler_form(f, lc, s, R),
        "parallel": parallel,
        "parallel_form_residual": K - f7_parallel_form(f, lc, s, R),
        "ricci_residual": rho_k - rho,
        "tau_residual": tau_k - tau,
    }


# -- W133 ------------------------------------------------------------------------

def a_tensors(f: LieFrame, lc: Connection, s: HyperStructure) -> tuple:
    """A_a(x,y,z,w) = g((nabla_x J_a) y, (nabla_z J_a) w)."""
    out = []
    for J in s.Js:
        F = fundamental_of(lc, J)
        out.append(einsum("xya,ab,zwb->xyzw", F, f.metric.upper, F, up=0, down=4))
    return tuple(out)


def hyper_curvature_identity_residual(R: Tensor, s: HyperStructure, A: tuple) -> Tensor:
    """R + sum_a R(x,y,J_a z,J_a w) - sum_a {A_a(x,z,y,w) - A_a(y,z,x,w)}."""
    lhs = R
    for J in s.Js:
        lhs = lhs + apply_endomorphism(apply_endomorphism(R, 2, J), 3, J)
    rhs = Tensor.zeros(R.dim, 0, 4)
    for Aa in A:
        rhs = rhs + reorder(Aa, "xzyw", "xyzw") - reorder(Aa, "yzxw", "xyzw")
    return lhs - rhs


def kr_relation_residual(K: Tensor, R: Tensor, A1: Tensor) -> Tensor:
    """K - R - 1/4 A1 - 1/4 cyclic_{x,y,z} A1."""
    return K - R - A1 / 4 - cyclic_sum(A1) / 4


def w133_checks(f: LieFrame, s: HyperStructure, tp: TorsionPack | None = None,
                R: Tensor | None = None) -> dict:
    """Curvature statements on a W133 manifold.

    ``R`` may be supplied to test the identities against a replacement
    curvature tensor (used to exercise the checkers with perturbed input).
    """
    lc = levi_civita(f)
    _require(f, lc, s, "W133")
    tp = tp or phkt_build(f, s, lc)
    R = curvature(lc) if R is None else R
    K = curvature(tp.conn)
    A = a_tensors(f, lc, s)
    strong = exterior_derivative(f, tp.T3).is_zero()
    lc_parallel = covariant_derivative(lc, tp.T3).is_zero()
    flat = K.is_zero()
    out = {
        "A": A,
        "identity_residual": hyper_curvature_identity_residual(R, s, A),
        "kr_residual": kr_relation_residual(K, R, A[0]),
        "strong": strong,
        "lc_parallel": lc_parallel,
        "flat": flat,
        "equivalent": strong == lc_parallel == flat,
    }
    if strong or flat:
        out["consequences"] = {
            "R = 0": R.is_zero(),
            **{f"|nabla J{k}|^2 = 0": square_norm(f.metric, fundamental_of(lc, J)).is_zero()
               for k, J in enumerate(s.Js, start=1)},
            "|T|^2 = 0": square_norm(f.metric, tp.T3).is_zero(),
        }
    return out


# -- torsion flags ---------------------------------------------------------------

def torsion_analysis(f: LieFrame, lc: Connection, tp: TorsionPack) -> dict:
    return {
        "parallel_own": covariant_derivative(tp.conn, tp.T3).is_zero(),
        "parallel_lc": covariant_derivative(lc, tp.T3).is_zero(),
        "strong": exterior_derivative(f, tp.T3).is_zero(),
        "coclosed": codifferential_3form(f, lc, tp.T3).is_zero(),
        "isotropic": square_norm(f.metric, tp.T3).is_zero(),
    }


def torsion_is_skew(tp: TorsionPack) -> bool:
    return is_skew(tp.T3)


# -- uniqueness ------------------------------------------------------------------

def skew_basis(dim: int) -> list:
    """Unit 3-forms e^{abc}, a < b < c, as (0,3) tensors."""
    import itertools
    from .tensor import _perm_sign
    out = []
    for triple in itertools.combinations(range(dim), 3):
        arr = np.zeros((dim,) * 3, dtype=int).astype(object)
        for perm in itertools.permutations(range(3)):
            arr[tuple(triple[p] for p in perm)] = _perm_sign(perm)
        out.append(Tensor(arr, 0, 3))
    return out


def naturality_defect(P: Tensor, s, f: LieFrame) -> list:
    """Change in D(structure) when D is shifted by the raised 3-form P / 2.

    With P_x y = P(x, y, .)^sharp this is [P_x, op] for endomorphisms, P_x xi
    for the Reeb vector and -eta(P_x .) for the contact form.  A skew P keeps
    metric compatibility, so D + P/2 stays natural exactly when all vanish.
    """
    Px = raise_lower(P, 2, "raise", f.metric, position=0).comps   # [k, x, y]
    parts = []
    for t in s.operators().values():
        if t.valence == (1, 1):
            J = t.comps
            parts.append(Tensor(np.einsum("kxa,ay->kxy", Px, J)
                                - np.einsum("ka,axy->kxy", J, Px), 1, 2))
        elif t.valence == (1, 0):
            parts.append(Tensor(np.einsum("kxa,a->kx", Px, t.comps), 1, 1))
        else:
            parts.append(Tensor(-np.einsum("k,kxy->xy", t.comps, Px), 0, 2))
    return parts


def natural_skew_kernel_dim(f: LieFrame, s) -> int:
    """Dimension of the space of 3-forms P keeping D + P/2 natural.

    Zero means a natural connection with skew torsion, if it exists, is unique.
    """
    from .tensor import exact_rank
    basis = skew_basis(f.dim)
    columns = []
    for B in basis:
        col = []
        for part in naturality_defect(B, s, f):
            col.extend(v.constant_value() for v in part.comps.flat)
        columns.append(col)
    rows = [list(r) for r in zip(*columns)]
    return len(basis) - exact_rank(rows)


def perturbation_breaks_naturality(lc: Connection, tp: TorsionPack, P: Tensor, s, amount) -> bool:
    """True when T + amount * P no longer gives a natural connection."""
    conn = connection_from_torsion(lc, tp.T3 + P * amount)
    return not is_natural(conn, s)


def kt_perturbation_form(F: Tensor, J: Tensor) -> Tensor:
    """An F-built 3-form independent of the KT torsion: Alt of F(Jx, y, Jz)."""
    from .tensor import alternate
    return alternate(apply_endomorphism(apply_endomorphism(F, 0, J), 2, J))

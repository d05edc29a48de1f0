"""Independent sympy recomputation of the Levi-Civita, curvature and torsion data.

The oracle only shares the input data (structure constants, metric and the
structure endomorphisms) with the engine; every formula is recomputed with
plain loops over sympy expressions.
"""
import itertools

import pytest
import sympy as sp

from skewtor.connections import kt_build, phikt_build
from skewtor.lie import curvature, levi_civita, ricci_scalar, square_norm
from skewtor.structures import fundamental_of


def to_sympy(x):
    return sp.expand(sp.sympify(str(x).replace("^", "**")))


class Oracle:
    def __init__(self, spec):
        f = spec.frame()
        self.n = n = f.dim
        self.c = [[[to_sympy(f.c.comps[k, i, j]) for j in range(n)] for i in range(n)] for k in range(n)]
        self.g = sp.Matrix(n, n, lambda i, j: to_sympy(spec.metric.g[i][j]))
        self.gi = self.g.inv()
        # koszul: 2 g(nabla_i e_j, e_l) = c_ijl - c_jli + c_lij with c_abl = g([e_a,e_b], e_l)
        cl = lambda a, b, l: sum(self.c[k][a][b] * self.g[k, l] for k in range(n))
        low = lambda i, j, l: sp.Rational(1, 2) * (cl(i, j, l) - cl(j, l, i) + cl(l, i, j))
        self.gamma = [[[sp.expand(sum(self.gi[k, l] * low(i, j, l) for l in range(n)))
                        for j in range(n)] for i in range(n)] for k in range(n)]

    def curvature(self, G):
        n = self.n
        R = {}
        for i, j, k, w in itertools.product(range(n), repeat=4):
            v = 0
            for l in range(n):
                up = sum(G[m][j][k] * G[l][i][m] - G[m][i][k] * G[l][j][m] for m in range(n))
                up -= sum(self.c[m][i][j] * G[l][m][k] for m in range(n))
                v += up * self.g[l, w]
            R[i, j, k, w] = sp.expand(v)
        return R

    def scalar(self, R):
        n = self.n
        rho = {(y, z): sum(self.gi[i, j] * R[i, y, z, j] for i in range(n) for j in range(n))
               for y in range(n) for z in range(n)}
        return sp.expand(sum(self.gi[y, z] * rho[y, z] for y in range(n) for z in range(n)))

    def nabla_op(self, A):
        """(nabla_x A)^b_y as [x][b][y]."""
        n = self.n
        return [[[sp.expand(sum(self.gamma[b][x][a] * A[a, y] - A[b, a] * self.gamma[a][x][y]
                                for a in range(n)))
                  for y in range(n)] for b in range(n)] for x in range(n)]

    def fundamental(self, A):
        n, DA = self.n, self.nabla_op(A)
        return {(x, y, z): sp.expand(sum(DA[x][b][y] * self.g[b, z] for b in range(n)))
                for x, y, z in itertools.product(range(n), repeat=3)}

    def with_torsion(self, T):
        """Gamma of nabla + 1/2 T raised in the last slot."""
        n = self.n
        return [[[sp.expand(self.gamma[k][i][j]
                            + sp.Rational(1, 2) * sum(self.gi[k, l] * T[i, j, l] for l in range(n)))
                  for j in range(n)] for i in range(n)] for k in range(n)]

    def norm(self, S):
        n = self.n
        idx = list(itertools.product(range(n), repeat=3))
        return sp.expand(sum(self.gi[a, x] * self.gi[b, y] * self.gi[c, z] * S[a, b, c] * S[x, y, z]
                             for a, b, c in idx for x, y, z in idx if S[a, b, c] != 0 and S[x, y, z] != 0))


def op_matrix(t):
    n = t.dim
    return sp.Matrix(n, n, lambda i, j: to_sympy(t.comps[i, j]))


def assert_same_3(engine, oracle, n):
    for idx in itertools.product(range(n), repeat=3):
        assert sp.expand(to_sympy(engine.comps[idx]) - oracle[idx]) == 0, idx


@pytest.fixture(scope="module")
def o4(spec4):
    return Oracle(spec4)


@pytest.fixture(scope="module")
def o5(spec5):
    return Oracle(spec5)


def kt_oracle(o, J):
    F = o.fundamental(J)
    n = o.n
    FJ = {(x, y, z): sum(F[x, y, a] * J[a, z] for a in range(n)) for x, y, z in F}
    return {(x, y, z): sp.expand(-sp.Rational(1, 2) * (FJ[x, y, z] + FJ[y, z, x] + FJ[z, x, y]))
            for x, y, z in F}


def test_levi_civita_matches(spec4, spec5, o4, o5):
    for spec, o in ((spec4, o4), (spec5, o5)):
        G = levi_civita(spec.frame()).gamma
        table = {(k, i, j): o.gamma[k][i][j] for k, i, j in itertools.product(range(o.n), repeat=3)}
        assert_same_3(G, table, o.n)


def test_curvature_and_scalar_match(spec4, spec5, o4, o5):
    for spec, o in ((spec4, o4), (spec5, o5)):
        f = spec.frame()
        R = curvature(levi_civita(f))
        Ro = o.curvature(o.gamma)
        for idx in itertools.product(range(o.n), repeat=4):
            assert sp.expand(to_sympy(R.comps[idx]) - Ro[idx]) == 0, idx
        assert sp.expand(to_sympy(ricci_scalar(R, f.metric)[1]) - o.scalar(Ro)) == 0


def test_4d_scalar_values(spec4, o4):
    l1, l2, l3, l4 = sp.symbols("l1 l2 l3 l4")
    q = l1**2 + l2**2 - l3**2 - l4**2
    J = op_matrix(spec4.structure.J)
    T = kt_oracle(o4, J)
    tau = o4.scalar(o4.curvature(o4.gamma))
    tau_kt = o4.scalar(o4.curvature(o4.with_torsion(T)))
    norm = o4.norm(o4.fundamental(J))
    assert sp.expand(tau + sp.Rational(5, 2) * q) == 0
    assert sp.expand(tau_kt + 4 * q) == 0
    assert sp.expand(norm + 4 * q) == 0
    assert sp.expand(3 * norm - 8 * (tau_kt - tau)) == 0
    f = spec4.frame()
    lc = levi_civita(f)
    assert sp.expand(to_sympy(square_norm(f.metric, fundamental_of(lc, spec4.structure.J))) - norm) == 0


def test_kt_torsion_matches(spec4, o4):
    T = kt_oracle(o4, op_matrix(spec4.structure.J))
    assert_same_3(kt_build(spec4.frame(), spec4.structure).T3, T, 4)


def test_kt_curvature_fails_first_bianchi_off_zero(spec4, o4):
    """Independent confirmation that R' is not Kaehler-type for generic lambda."""
    T = kt_oracle(o4, op_matrix(spec4.structure.J))
    Rk = o4.curvature(o4.with_torsion(T))
    point = dict(zip(sp.symbols("l1 l2 l3 l4"), (1, 0, 1, 0)))
    cyc = lambda x, y, z, w: Rk[x, y, z, w] + Rk[y, z, x, w] + Rk[z, x, y, w]
    values = {cyc(*idx).subs(point) for idx in itertools.product(range(4), repeat=4)}
    assert values - {0}
    zero = dict(zip(sp.symbols("l1 l2 l3 l4"), (0, 0, 0, 0)))
    assert all(cyc(*idx).subs(zero) == 0 for idx in itertools.product(range(4), repeat=4))


def test_phikt_torsion_matches(spec5, o5):
    phi = op_matrix(spec5.structure.phi)
    xi = [to_sympy(v) for v in spec5.structure.xi.comps]
    eta = [to_sympy(v) for v in spec5.structure.eta.comps]
    F = o5.fundamental(phi)
    n = 5
    Fp = lambda x, y, z: sum(F[x, y, a] * phi[a, z] for a in range(n))
    Fx = lambda y, z: sum(F[y, a, b] * phi[a, z] * xi[b] for a in range(n) for b in range(n))
    term = lambda x, y, z: Fp(x, y, z) - 3 * eta[x] * Fx(y, z)
    T = {(x, y, z): sp.expand(-sp.Rational(1, 2) * (term(x, y, z) + term(y, z, x) + term(z, x, y)))
         for x, y, z in F}
    assert_same_3(phikt_build(spec5.frame(), spec5.structure).T3, T, n)
    m1 = sp.Symbol("m1")
    assert T[0, 1, 4] == -2 * m1

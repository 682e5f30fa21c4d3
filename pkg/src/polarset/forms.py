"""Symplectic and Hermitian forms, polar spaces and line classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom
from .geom import GeometryError, Subspace, matmul
from .gf import FieldSpec, embed, project


class FormError(ValueError):
    pass


@dataclass(eq=False)
class SesquiForm:
    """``f(x, y) = x^T G conj(y)`` with ``conj(y) = y^conj_exp`` (identity if 0)."""

    F: FieldSpec
    gram: np.ndarray
    conj_exp: int
    kind: str  # "symplectic" | "hermitian"

    def __post_init__(self):
        self.gram = np.asarray(self.gram, dtype=np.int64)
        G = self.gram
        F = self.F
        if G.shape[0] != G.shape[1]:
            raise FormError("Gram matrix must be square")
        if self.kind == "symplectic":
            if self.conj_exp:
                raise FormError("a symplectic form is bilinear")
            if np.any(np.diag(G) != 0) or not np.array_equal(G.T, F.neg(G)):
                raise FormError("Gram matrix is not alternating")
        elif self.kind == "hermitian":
            s = round(F.q**0.5)
            if s * s != F.q or self.conj_exp != s:
                raise FormError("a Hermitian form lives over GF(q^2) with conjugation x -> x^q")
            if not np.array_equal(F.pow(G, s).T, G):
                raise FormError("Gram matrix is not Hermitian")
        else:
            raise FormError(f"unknown form kind {self.kind!r}")
        if geom.rank(F, G) != G.shape[0]:
            raise FormError("degenerate form")

    @property
    def dim(self) -> int:
        """Vector-space dimension."""
        return self.gram.shape[0]

    @property
    def sub_q(self) -> int:
        """q for Hermitian forms over GF(q^2); field order for symplectic ones."""
        return self.conj_exp if self.conj_exp else self.F.q

    def conj(self, X):
        X = np.asarray(X, dtype=np.int64)
        return self.F.pow(X, self.conj_exp) if self.conj_exp else X

    def left(self, X):
        """Rows X G, ready for pairing with conj(Y)."""
        return matmul(self.F, np.atleast_2d(X), self.gram)

    def eval(self, P, Q):
        P = np.asarray(P, dtype=np.int64)
        Q = np.asarray(Q, dtype=np.int64)
        v = matmul(self.F, matmul(self.F, P, self.gram), self.conj(Q))
        return int(v) if np.ndim(v) == 0 else v

    def values(self, X, Y):
        """Matrix of f(X[i], Y[j])."""
        return matmul(self.F, self.left(X), self.conj(np.atleast_2d(Y)).T)

    def diag(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        return self.F.sum(self.F.mul(self.left(X), self.conj(X)), axis=1)

    def is_absolute(self, X):
        if self.kind == "symplectic":
            return np.ones(np.atleast_2d(X).shape[0], dtype=bool)
        return self.diag(X) == 0

    def perp(self, P) -> Subspace:
        """Polar hyperplane of the point P."""
        coeffs = matmul(self.F, self.gram, self.conj(np.asarray(P, dtype=np.int64)))
        return geom.hyperplane(self.F, coeffs)

    def perp_of(self, S: Subspace) -> Subspace:
        coeffs = matmul(self.F, self.conj(S.basis), self.gram.T)
        return Subspace(self.F, geom.rref(self.F, geom.nullspace(self.F, coeffs))[0])

    def scaled(self, c) -> SesquiForm:
        return SesquiForm(self.F, self.F.mul(self.gram, c), self.conj_exp, self.kind)


def symplectic(F: FieldSpec, gram) -> SesquiForm:
    return SesquiForm(F, gram, 0, "symplectic")


def hermitian(F: FieldSpec, gram) -> SesquiForm:
    return SesquiForm(F, gram, round(F.q**0.5), "hermitian")


def antidiagonal_symplectic(F: FieldSpec, m: int) -> SesquiForm:
    """x1 y_m + x2 y_{m-1} + ... - x_m y_1."""
    G = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        G[i, m - 1 - i] = 1 if i < m // 2 else int(F.neg(1))
    return symplectic(F, G)


def paired_symplectic(F: FieldSpec, m: int) -> SesquiForm:
    """x1 y2 - x2 y1 + x3 y4 - x4 y3 + ..."""
    G = np.zeros((m, m), dtype=np.int64)
    for i in range(0, m, 2):
        G[i, i + 1] = 1
        G[i + 1, i] = int(F.neg(1))
    return symplectic(F, G)


def split_symplectic(F: FieldSpec, m: int) -> SesquiForm:
    """sum over j of x_j y_{n+j} - x_{n+j} y_j with n = m/2."""
    n = m // 2
    G = np.zeros((m, m), dtype=np.int64)
    for j in range(n):
        G[j, n + j] = 1
        G[n + j, j] = int(F.neg(1))
    return symplectic(F, G)


def find_iota(F2: FieldSpec) -> int:
    """Smallest nonzero i in GF(q^2) with i + i^q = 0 (i = 1 in characteristic 2)."""
    q = round(F2.q**0.5)
    if F2.p == 2:
        return 1
    els = F2.nonzero()
    ok = F2.add(els, F2.pow(els, q)) == 0
    return int(els[ok][0])


def hermitian_extension(form: SesquiForm, F2: FieldSpec) -> SesquiForm:
    """The Hermitian form over GF(q^2) whose restriction to GF(q)^m is the symplectic form."""
    G = embed(form.gram, form.F, F2)
    return hermitian(F2, F2.mul(G, find_iota(F2)))


class PolarSpace:
    """Points and Witt index of a non-degenerate form."""

    def __init__(self, form: SesquiForm):
        self.form = form
        self._rank = None

    @property
    def F(self):
        return self.form.F

    @property
    def n(self) -> int:
        """Ambient projective dimension."""
        return self.form.dim - 1

    def points(self):
        P = geom.all_points(self.n, self.F)
        return P[self.form.is_absolute(P)]

    def expected_point_count(self) -> int:
        if self.form.kind == "symplectic":
            return geom.n_points(self.n, self.F.q)
        return hermitian_point_count(self.n, self.form.sub_q)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = witt_index(self.form)
        return self._rank

    def __repr__(self):
        q = self.form.sub_q
        if self.form.kind == "symplectic":
            return f"W({self.n},{q})"
        return f"H({self.n},{q}^2)"


def hermitian_point_count(n: int, q: int) -> int:
    return (q ** (n + 1) + (-1) ** n) * (q**n - (-1) ** n) // (q * q - 1)


def witt_index(form: SesquiForm) -> int:
    """Greedy extension of a totally isotropic subspace; all maximal ones share one dimension."""
    F = form.F
    basis = np.zeros((0, form.dim), dtype=np.int64)
    while True:
        if basis.shape[0]:
            space = form.perp_of(Subspace.span(F, basis))
            cand = space.points()
            cand = cand[~Subspace.span(F, basis).contains(cand)]
        else:
            cand = geom.all_points(form.dim - 1, F)
        cand = cand[form.is_absolute(cand)] if cand.shape[0] else cand
        if cand.shape[0] == 0:
            return basis.shape[0]
        basis = np.concatenate([basis, cand[:1]])


def line_type(form: SesquiForm, L: Subspace) -> str:
    """Classify a line by its number of absolute points (Hermitian forms)."""
    if form.kind != "hermitian":
        raise FormError("line_type classifies lines of Hermitian varieties")
    if L.dim != 1:
        raise GeometryError("line_type needs a line")
    k = int(form.is_absolute(L.points()).sum())
    q = form.sub_q
    if k == 1:
        return "tangent"
    if k == q + 1:
        return "secant"
    if k == q * q + 1:
        return "generator"
    if k == 0:
        # impossible for a non-degenerate Hermitian form on a line
        raise FormError("line without absolute points")
    raise FormError(f"line with {k} absolute points")


def line_type_from_gram(form: SesquiForm, P, Q) -> str:
    """Same classification from the 2x2 Gram matrix of <P, Q>."""
    F = form.F
    hpp = form.eval(P, P)
    hqq = form.eval(Q, Q)
    hpq = form.eval(P, Q)
    hqp = form.eval(Q, P)
    if hpp == hqq == hpq == 0:
        return "generator"
    det = int(F.sub(F.mul(hpp, hqq), F.mul(hpq, hqp)))
    return "secant" if det else "tangent"


def restrict_to_baer(form: SesquiForm, sigma: geom.BaerMap) -> SesquiForm:
    """Alternating form over the Baer subfield induced on a subgeometry of absolute points."""
    if form.kind != "hermitian":
        raise FormError("restrict_to_baer needs a Hermitian form")
    F = form.F
    pts = sigma.points()
    bad = ~form.is_absolute(pts)
    if bad.any():
        raise FormError(f"subgeometry point {pts[bad][0].tolist()} is not on the variety")
    M = sigma.M
    A = matmul(F, matmul(F, M.T, form.gram), form.conj(M))
    nz = A[A != 0]
    B = F.div(A, nz[0])
    try:
        Bs = project(B, F, sigma.sub)
    except ValueError as exc:
        raise FormError("induced form is not defined over the subfield") from exc
    return symplectic(sigma.sub, Bs)


# -- symplectic bases ---------------------------------------------------------------


def _B(F, G, x, y):
    return int(matmul(F, matmul(F, x, G), y))


def symplectic_basis(form: SesquiForm, first=None, rng=None):
    """Rows (e_1, ..., e_n, f_1, ..., f_n) with f(e_i, f_j) = delta_ij, others 0.

    ``first`` fixes e_n; ``rng`` randomises the remaining choices.
    """
    if form.kind != "symplectic":
        raise FormError("symplectic_basis needs an alternating form")
    F, G = form.F, form.gram
    m = form.dim
    n = m // 2
    W = np.eye(m, dtype=np.int64)
    es, fs = [], []
    for step in range(n):
        cands = _vectors(F, W, rng)
        if step == 0 and first is not None:
            e = np.asarray(first, dtype=np.int64)
        else:
            e = next(cands)
        for f in cands:
            val = _B(F, G, e, f)
            if val:
                break
        else:
            raise FormError("vector in the radical")
        f = F.mul(f, F.inv(val))
        es.append(e)
        fs.append(f)
        # project W onto <e, f>^perp
        be = matmul(F, W, matmul(F, G, e))
        bf = matmul(F, W, matmul(F, G, f))
        W = F.add(F.sub(W, F.mul(bf[:, None], e[None, :])), F.mul(be[:, None], f[None, :]))
        W = geom.rref(F, W)[0]
    # e_n should be the fixed vector
    es = es[::-1]
    fs = fs[::-1]
    return np.array(es + fs, dtype=np.int64)


def _vectors(F, W, rng):
    """Nonzero vectors of the row space of W: all in order, or random forever."""
    if rng is None:
        for c in geom.all_points(W.shape[0] - 1, F):
            yield matmul(F, c, W)
        return
    while True:
        c = rng.integers(0, F.q, size=W.shape[0])
        if np.any(c):
            yield matmul(F, c, W)


def isometry(src: SesquiForm, dst: SesquiForm, first_src=None, first_dst=None, rng=None):
    """Matrix T (column action) with dst(Tx, Ty) = src(x, y).

    Optionally maps the vector ``first_src`` to ``first_dst``.
    """
    F = src.F
    Bs = symplectic_basis(src, first=first_src, rng=rng)
    Bd = symplectic_basis(dst, first=first_dst, rng=None)
    # T maps the src basis (rows of Bs) to the dst basis (rows of Bd): T Bs^T = Bd^T
    return matmul(F, Bd.T, geom.inverse(F, Bs.T))

"""Points, subspaces and Baer subgeometries of PG(n, q).

Points are rows of field encodings, normalised so the first nonzero
coordinate is 1.  Normalised rows are ordered lexicographically, which is the
order of :func:`point_index`; :func:`all_points` returns exactly that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .gf import FieldSpec, embed, field_of_order

MAX_POINTS = 10**7


class GeometryError(ValueError):
    pass


class ResourceError(GeometryError):
    pass


def n_points(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dim subspaces of an n-dim vector space over GF(q)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def normalize(F: FieldSpec, V):
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    nz = V != 0
    if not nz.any(axis=1).all():
        raise GeometryError("zero vector is not a projective point")
    lead = np.take_along_axis(V, nz.argmax(axis=1)[:, None], axis=1)
    return F.mul(V, F.inv(lead))


def point_index(F: FieldSpec, P):
    """Rank of normalised points in lexicographic order."""
    P = np.atleast_2d(np.asarray(P, dtype=np.int64))
    m = P.shape[1]
    Q = F.q
    j = (P != 0).argmax(axis=1)
    weights = np.array([Q ** (m - 1 - i) for i in range(m)], dtype=np.int64)
    suffix = (P * weights).sum(axis=1) % (Q ** (m - 1 - j))  # drops the leading 1
    offset = (Q ** (m - 1 - j) - 1) // (Q - 1)
    return offset + suffix


def points_from_index(F: FieldSpec, m: int, idx):
    idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
    Q = F.q
    out = np.zeros((idx.size, m), dtype=np.int64)
    sizes = [Q ** (m - 1 - j) for j in range(m)]
    offsets = [(s - 1) // (Q - 1) for s in sizes]
    for j in range(m):
        mask = (idx >= offsets[j]) & (idx < offsets[j] + sizes[j])
        if not mask.any():
            continue
        t = idx[mask] - offsets[j]
        out[mask, j] = 1
        L = m - 1 - j
        for i in range(L):
            out[mask, j + 1 + i] = (t // Q ** (L - 1 - i)) % Q
    return out


def _tuples(Q: int, L: int):
    """All length-L tuples over range(Q), big-endian lexicographic."""
    t = np.arange(Q**L, dtype=np.int64)
    return np.stack([(t // Q ** (L - 1 - i)) % Q for i in range(L)], axis=1) if L else np.zeros((1, 0), dtype=np.int64)


def all_points(n: int, F: FieldSpec):
    """Every point of PG(n, F) once, in lexicographic order."""
    total = n_points(n, F.q)
    if total > MAX_POINTS:
        raise ResourceError(f"PG({n},{F.q}) has {total} points (guard {MAX_POINTS})")
    m = n + 1
    blocks = []
    for j in range(m - 1, -1, -1):
        tail = _tuples(F.q, m - 1 - j)
        block = np.zeros((tail.shape[0], m), dtype=np.int64)
        block[:, j] = 1
        block[:, j + 1 :] = tail
        blocks.append(block)
    return np.concatenate(blocks)


def sort_points(F: FieldSpec, P):
    P = normalize(F, P)
    idx = point_index(F, P)
    _, first = np.unique(idx, return_index=True)
    return P[first]


# -- linear algebra ------------------------------------------------------------


def rref(F: FieldSpec, M):
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim == 1:
        M = M[None, :]
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        s = r + nz[0]
        if s != r:
            M[[r, s]] = M[[s, r]]
        M[r] = F.mul(M[r], F.inv(M[r, c]))
        others = np.nonzero(M[:, c])[0]
        for o in others:
            if o != r:
                M[o] = F.sub(M[o], F.mul(M[o, c], M[r]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(F: FieldSpec, M) -> int:
    return len(rref(F, M)[1])


def nullspace(F: FieldSpec, M):
    """Basis (rows) of {x : M x = 0}."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    R, piv = rref(F, M)
    n = M.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = F.neg(R[i, f])
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def inverse(F: FieldSpec, M):
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise GeometryError("singular matrix")
    return R[:, n:]


def matmul(F: FieldSpec, A, B):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    a2 = np.atleast_2d(A)
    b2 = B if B.ndim == 2 else B[:, None]
    out = kernels.matmul(F, a2, b2)
    if B.ndim == 1:
        out = out[:, 0]
    if A.ndim == 1:
        out = out[0]
    return out


def apply(F: FieldSpec, M, P):
    """Column action P -> M P on rows of P, normalised."""
    return normalize(F, matmul(F, np.atleast_2d(P), np.asarray(M).T))


# -- subspaces -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    F: FieldSpec
    basis: np.ndarray  # RREF, full rank

    @classmethod
    def span(cls, F: FieldSpec, vectors):
        R, _ = rref(F, np.atleast_2d(vectors))
        if R.shape[0] == 0:
            raise GeometryError("span of zero vectors")
        return cls(F, R)

    @property
    def dim(self) -> int:
        """Projective dimension."""
        return self.basis.shape[0] - 1

    @property
    def ambient(self) -> int:
        return self.basis.shape[1] - 1

    def __eq__(self, other):
        return isinstance(other, Subspace) and other.F is self.F and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash(self.basis.tobytes())

    def points(self):
        r = self.basis.shape[0]
        coeffs = all_points(r - 1, self.F) if r > 1 else np.ones((1, 1), dtype=np.int64)
        return sort_points(self.F, matmul(self.F, coeffs, self.basis))

    def contains(self, P):
        """Membership mask for rows of P (rank test by reduction)."""
        P = np.atleast_2d(np.asarray(P, dtype=np.int64)).copy()
        _, piv = rref(self.F, self.basis)
        for row, c in zip(self.basis, piv):
            P = self.F.sub(P, self.F.mul(P[:, c, None], row[None, :]))
        return ~P.any(axis=1)

    def contains_subspace(self, other: Subspace) -> bool:
        return bool(self.contains(other.basis).all())

    def meet(self, other: Subspace):
        """Intersection, or None when trivial."""
        F = self.F
        A, B = self.basis, other.basis
        ker = nullspace(F, np.concatenate([A, B]).T)
        if ker.shape[0] == 0:
            return None
        vecs = matmul(F, ker[:, : A.shape[0]], A)
        return Subspace.span(F, vecs)


def line_through(F: FieldSpec, P, Q) -> Subspace:
    S = Subspace.span(F, np.stack([np.asarray(P), np.asarray(Q)]))
    if S.basis.shape[0] != 2:
        raise GeometryError("line_through needs two distinct points")
    return S


def points_on(S: Subspace):
    return S.points()


def hyperplane(F: FieldSpec, coeffs) -> Subspace:
    """Points x with sum(coeffs[i] * x[i]) = 0."""
    return Subspace(F, rref(F, nullspace(F, np.atleast_2d(coeffs)))[0])


def enumerate_subspaces(F: FieldSpec, m: int, r: int):
    """All r-dim subspaces of F^m as an (N, r, m) array of RREF bases."""
    total = gaussian_binomial(m, r, F.q)
    if total * r * m > 5 * MAX_POINTS:
        raise ResourceError(f"{total} subspaces requested")
    out = []
    for piv in itertools.combinations(range(m), r):
        free = [(i, c) for i, p in enumerate(piv) for c in range(p + 1, m) if c not in piv]
        vals = _tuples(F.q, len(free))
        block = np.zeros((vals.shape[0], r, m), dtype=np.int64)
        for i, p in enumerate(piv):
            block[:, i, p] = 1
        for t, (i, c) in enumerate(free):
            block[:, i, c] = vals[:, t]
        out.append(block)
    return np.concatenate(out)


def line_points(F: FieldSpec, lines):
    """(N, 2, m) line bases -> (N, Q+1, m) normalised points, order u+t*v then v."""
    lines = np.asarray(lines, dtype=np.int64)
    u, v = lines[:, 0, :], lines[:, 1, :]
    t = F.elements()
    pts = F.add(u[:, None, :], F.mul(t[None, :, None], v[:, None, :]))
    pts = np.concatenate([pts, v[:, None, :]], axis=1)
    N, K, m = pts.shape
    return normalize(F, pts.reshape(N * K, m)).reshape(N, K, m)


def in_general_position(F: FieldSpec, frame) -> tuple[int, ...] | None:
    """None if every m-subset of the frame is independent, else a dependent subset."""
    frame = np.asarray(frame, dtype=np.int64)
    m = frame.shape[1]
    for sub in itertools.combinations(range(frame.shape[0]), min(m, frame.shape[0])):
        if rank(F, frame[list(sub)]) < len(sub):
            return sub
    return None


# -- Baer subgeometries ------------------------------------------------------------


@dataclass(eq=False)
class BaerMap:
    """Image of PG(n, sub) under the collineation with matrix ``M``."""

    F: FieldSpec
    sub: FieldSpec
    M: np.ndarray
    frame: np.ndarray | None = None
    _Minv: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.M = np.asarray(self.M, dtype=np.int64)
        if self._Minv is None:
            self._Minv = inverse(self.F, self.M)

    @property
    def n(self) -> int:
        return self.M.shape[0] - 1

    def coords_of(self, P):
        """Normalised subgeometry coordinates (as big-field encodings) of points."""
        return normalize(self.F, matmul(self.F, np.atleast_2d(P), self._Minv.T))

    def points(self):
        base = embed(all_points(self.n, self.sub), self.sub, self.F)
        return sort_points(self.F, matmul(self.F, base, self.M.T))

    def contains(self, P):
        X = self.coords_of(P)
        return self.F.in_subfield(X, self.sub.k).all(axis=1)

    def involution(self, P):
        """The Baer involution x -> M conj(M^-1 x); fixes the subgeometry pointwise."""
        X = matmul(self.F, np.atleast_2d(P), self._Minv.T)
        X = self.F.pow(X, self.sub.q)
        return normalize(self.F, matmul(self.F, X, self.M.T))


def baer_subgeometry(F: FieldSpec, frame, sub: FieldSpec | None = None) -> BaerMap:
    """The Baer subgeometry through n+2 points in general position."""
    frame = normalize(F, frame)
    m = frame.shape[1]
    if frame.shape[0] != m + 1:
        raise GeometryError(f"a frame of PG({m - 1}, q) has {m + 1} points")
    if sub is None:
        s = round(F.q**0.5)
        if s * s != F.q:
            raise GeometryError(f"GF({F.q}) has no Baer subfield")
        sub = field_of_order(s)
    bad = in_general_position(F, frame)
    if bad is not None:
        raise GeometryError(f"frame points {bad} are dependent")
    B = frame[:m].T  # columns = first m points
    lam = matmul(F, inverse(F, B), frame[m])
    M = F.mul(B, lam[None, :])
    return BaerMap(F, sub, M, frame=frame)


def canonical_baer(F: FieldSpec, n: int, sub: FieldSpec) -> BaerMap:
    return BaerMap(F, sub, np.eye(n + 1, dtype=np.int64))

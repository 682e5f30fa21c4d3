"""Twisted cubic of PG(3,q) and the orbit construction of partial ovoids of W(3,q).

Throughout, ``beta`` is the alternating form x1 y4 + x2 y3 - x3 y2 - x4 y1 and
matrices act on column vectors.  The construction needs q an odd square with
q not divisible by 3; ``eps`` is sqrt(q) mod 3 written as +1 or -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import geom, kernels
from .forms import antidiagonal_symplectic
from .geom import Subspace, normalize
from .gf import FieldSpec, embed, field_of_order, make_field, project
from .pointset import PointSet


class UnsupportedParameter(ValueError):
    pass


class ConsistencyError(RuntimeError):
    """A construction produced something its defining property rules out."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def _check_char(F: FieldSpec):
    if F.p == 3:
        raise UnsupportedParameter(f"q={F.q}: the cubic needs 3 to be invertible")


def cubic_points(F: FieldSpec, ts):
    """Rows (1, -3t, t^2, t^3)."""
    ts = np.asarray(ts, dtype=np.int64)
    return np.stack(
        [np.ones_like(ts), F.mul(F.from_int(-3), ts), F.pow(ts, 2), F.pow(ts, 3)], axis=1
    )


U4 = np.array([0, 0, 0, 1], dtype=np.int64)


@dataclass(eq=False)
class TwistedCubic:
    """The q+1 points P_t (t in field order) followed by U4 (parameter ``None``)."""

    F: FieldSpec

    def __post_init__(self):
        _check_char(self.F)

    @cached_property
    def points(self):
        return np.concatenate([cubic_points(self.F, self.F.elements()), U4[None]])

    def __len__(self):
        return self.F.q + 1

    def point(self, t):
        return U4.copy() if t is None else cubic_points(self.F, [t])[0]

    def param(self, P):
        """Parameter of a cubic point, ``None`` for U4; KeyError if P is not on the cubic."""
        P = normalize(self.F, np.atleast_2d(P))[0]
        if P[0] == 0:
            if np.array_equal(P, U4):
                return None
        elif np.array_equal(P, self.point(int(self.F.div(P[1], self.F.from_int(-3))))):
            return int(self.F.div(P[1], self.F.from_int(-3)))
        raise KeyError(f"{P.tolist()} is not on the twisted cubic")

    def contains(self, P):
        codes = geom.point_index(self.F, self.points)
        return np.isin(geom.point_index(self.F, normalize(self.F, P)), codes)

    def as_pointset(self) -> PointSet:
        return PointSet(self.F, self.points, {"construction": "twisted-cubic", "q": self.F.q})


def build_cubic(q: int) -> TwistedCubic:
    return TwistedCubic(field_of_order(q))


def beta(F: FieldSpec):
    return antidiagonal_symplectic(F, 4)


def J_matrix(F: FieldSpec):
    return beta(F).gram


def osculating_plane(F: FieldSpec, t) -> Subspace:
    """t^3 X1 + t^2 X2 + 3t X3 - X4 = 0, or X1 = 0 for t = None."""
    if t is None:
        return geom.hyperplane(F, [1, 0, 0, 0])
    return geom.hyperplane(
        F, [int(F.pow(t, 3)), int(F.pow(t, 2)), int(F.mul(F.from_int(3), t)), int(F.neg(1))]
    )


def tangent_at(F: FieldSpec, t) -> Subspace:
    if t is None:
        return Subspace.span(F, [[0, 0, 0, 1], [0, 0, 1, 0]])
    d = [0, int(F.from_int(-3)), int(F.mul(F.from_int(2), t)), int(F.mul(F.from_int(3), F.pow(t, 2)))]
    return Subspace.span(F, [cubic_points(F, [t])[0], d])


# -- the group of the cubic ----------------------------------------------------------


def cubic_matrices(F: FieldSpec, a, b, c, d):
    """Stack of the 4x4 matrices M_{a,b,c,d} (broadcast over the inputs)."""
    a, b, c, d = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (a, b, c, d)))
    mul, add, neg = F.mul, F.add, F.neg
    k2, k3, k6 = F.from_int(2), F.from_int(3), F.from_int(6)
    inv3 = F.inv(k3)
    sq = lambda x: F.pow(x, 2)
    cu = lambda x: F.pow(x, 3)
    ab = mul(a, b)
    rows = [
        [cu(a), neg(mul(sq(a), b)), mul(k3, mul(a, sq(b))), cu(b)],
        [
            neg(mul(k3, mul(sq(a), c))),
            add(mul(sq(a), d), mul(k2, mul(ab, c))),
            neg(add(mul(k3, mul(sq(b), c)), mul(k6, mul(ab, d)))),
            neg(mul(k3, mul(sq(b), d))),
        ],
        [
            mul(a, sq(c)),
            mul(inv3, neg(add(mul(b, sq(c)), mul(k2, mul(a, mul(c, d)))))),
            add(mul(a, sq(d)), mul(k2, mul(b, mul(c, d)))),
            mul(b, sq(d)),
        ],
        [cu(c), neg(mul(sq(c), d)), mul(k3, mul(c, sq(d))), cu(d)],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def apply_all(F: FieldSpec, Ms, v):
    """Normalised images M v for a stack of matrices and one column vector."""
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros(Ms.shape[:-1], dtype=np.int64)
    for j in range(v.shape[0]):
        out = F.add(out, F.mul(Ms[..., j], v[j]))
    return normalize(F, out)


def _sqrt_q(q: int) -> int:
    s = round(q**0.5)
    if s * s != q or q % 2 == 0:
        raise UnsupportedParameter(f"q={q} is not an odd square")
    if q % 3 == 0:
        raise UnsupportedParameter(f"q={q} is divisible by 3")
    return s


def epsilon(q: int) -> int:
    s = _sqrt_q(q)
    return 1 if s % 3 == 1 else -1


@dataclass(eq=False)
class CubicGroup:
    """Projective group elements, one normalised (a,b,c,d) per element."""

    F: FieldSpec
    params: np.ndarray  # (N, 4)

    @cached_property
    def matrices(self):
        a, b, c, d = self.params.T
        return cubic_matrices(self.F, a, b, c, d)

    def __len__(self):
        return self.params.shape[0]


def group_G(eps: int, q: int) -> CubicGroup:
    """The subgroup of the cubic's group fixing C_eps.

    Projective elements correspond to points (a:b:c:d) of PG(3,q) with
    ad - bc != 0, since M_{la,lb,lc,ld} = l^3 M_{a,b,c,d}.  For eps = +1 the
    entries range over the subfield of order sqrt(q); for eps = -1 every point
    of PG(3,q) is tested against ab^s = cd^s and a^(s+1) + b^(s+1) = c^(s+1) + d^(s+1).
    """
    s = _sqrt_q(q)
    if epsilon(q) != eps:
        raise UnsupportedParameter(f"sqrt(q)={s} is not {eps} mod 3")
    F = field_of_order(q)
    if eps == 1:
        sub = make_field(F.p, F.k // 2)
        P = embed(geom.all_points(3, sub), sub, F)
    else:
        P = geom.all_points(3, F)
        a, b, c, d = P.T
        c1 = F.sub(F.mul(a, F.pow(b, s)), F.mul(c, F.pow(d, s)))
        n = lambda x: F.pow(x, s + 1)
        c2 = F.sub(F.add(n(a), n(b)), F.add(n(c), n(d)))
        P = P[(c1 == 0) & (c2 == 0)]
    a, b, c, d = P.T
    P = P[F.sub(F.mul(a, d), F.mul(b, c)) != 0]
    return CubicGroup(F, P)


def find_base_point(eps: int, q: int):
    """(x, U1 + x U4) with x the smallest valid non-cube outside the subfield."""
    s = _sqrt_q(q)
    if epsilon(q) != eps:
        raise UnsupportedParameter(f"sqrt(q)={s} is not {eps} mod 3")
    F = field_of_order(q)
    x = F.nonzero()
    ok = ~F.in_subfield(x, F.k // 2) & (F.pow(x, (q - 1) // 3) != 1)
    if eps == -1:
        ok &= F.pow(x, s + 1) != 1
    cands = x[ok]
    if cands.size == 0:  # pragma: no cover - excluded by counting
        raise ConsistencyError(f"no admissible base point in GF({q})")
    x0 = int(cands[0])
    return x0, np.array([1, 0, 0, x0], dtype=np.int64)


def orbit_O(eps: int, q: int) -> PointSet:
    G = group_G(eps, q)
    F = G.F
    x, R = find_base_point(eps, q)
    imgs = apply_all(F, G.matrices, R)
    O = PointSet(F, imgs, {"construction": "cubic-orbit", "q": q, "eps": eps, "x": x})
    s = round(q**0.5)
    want = s * (q - 1) // 3
    if len(O) != want:
        raise ConsistencyError(f"orbit has {len(O)} points, expected {want}")
    stab = int((geom.point_index(F, imgs) == geom.point_index(F, R[None])[0]).sum())
    if stab != 3:
        raise ConsistencyError(f"stabiliser of the base point has order {stab}, expected 3")
    return O


def w3_size(q: int) -> int:
    s = round(q**0.5)
    return (s**3 + 3 * q - s + 3) // 3


def build_w3_partial_ovoid(q: int) -> PointSet:
    """Orbit union twisted cubic, verified to be a partial ovoid of W(3,q)."""
    eps = epsilon(q)
    O = orbit_O(eps, q)
    C = build_cubic(q)
    S = O.union(C.as_pointset(), construction="w3-cubic")
    S.provenance.pop("q", None)
    S.provenance.update(q=q, eps=eps)
    B = beta(S.F)
    i, j = kernels.pair_zero_scan(S.F, B.left(S.points), S.points)
    if i >= 0:
        raise ConsistencyError(
            "two perpendicular points", witness=(S.points[i].tolist(), S.points[j].tolist())
        )
    if len(S) != w3_size(q):
        raise ConsistencyError(f"size {len(S)} differs from {w3_size(q)}")
    return S


# -- the subgeometry Lambda_eps --------------------------------------------------------


def sub_cubic_params(eps: int, F: FieldSpec):
    """Parameters of C_eps; ``None`` stands for U4."""
    s = round(F.q**0.5)
    t = F.elements()
    if eps == 1:
        return [int(v) for v in t[F.in_subfield(t, F.k // 2)]] + [None]
    return [int(v) for v in t[F.pow(t, s + 1) == 1]]


def sub_cubic(eps: int, F: FieldSpec):
    return np.stack([TwistedCubic(F).point(t) for t in sub_cubic_params(eps, F)])


def lambda_baer(eps: int, F: FieldSpec) -> geom.BaerMap:
    """Baer subgeometry through five points of C_eps."""
    return geom.baer_subgeometry(F, sub_cubic(eps, F)[:5])


def lambda_points(eps: int, F: FieldSpec):
    """Points of Lambda_eps written out directly.

    eps = +1: the canonical subgeometry.  eps = -1: (a, -3b, b^s, a^s) for
    a, b in GF(q), s = sqrt(q).
    """
    s = round(F.q**0.5)
    if eps == 1:
        sub = make_field(F.p, F.k // 2)
        return geom.canonical_baer(F, 3, sub).points()
    ab = geom._tuples(F.q, 2)[1:]
    a, b = ab.T
    P = np.stack([a, F.mul(F.from_int(-3), b), F.pow(b, s), F.pow(a, s)], axis=1)
    return geom.sort_points(F, np.unique(normalize(F, P), axis=0))


def sub_osculating_planes(eps: int, F: FieldSpec):
    return [osculating_plane(F, t) for t in sub_cubic_params(eps, F)]


def extenders(S: PointSet, candidates) -> np.ndarray:
    """Candidates outside S that are non-perpendicular to every member."""
    F = S.F
    cand = np.asarray(candidates, dtype=np.int64)
    cand = cand[~S.contains(cand)]
    B = beta(F)
    cover = kernels.cover_scan(F, B.left(cand), S.points)
    return cand[cover < 0]


def extend_by_point(q: int, S: PointSet | None = None):
    """First point of Lambda_eps (lexicographic) that keeps the set a partial ovoid."""
    S = build_w3_partial_ovoid(q) if S is None else S
    eps = epsilon(q)
    found = extenders(S, lambda_points(eps, S.F))
    if found.shape[0] == 0:
        raise ConsistencyError("no point of the subgeometry extends the set")
    return found[0]


# -- chords ---------------------------------------------------------------------------


REAL, IMAGINARY, TANGENT = "real", "imaginary", "tangent"


@dataclass(eq=False)
class ChordAtlas:
    """Which chord or tangent of the cubic passes through each point off it.

    ``real`` holds parameter pairs (s, t) over GF(q) (``None`` for U4),
    ``imaginary`` holds t in GF(q^2) minus GF(q) up to t ~ t^q, ``tangent`` holds
    the parameter of the point of contact.  ``label[i]`` and ``key[i]`` describe
    ``points[i]``; ``hits[i]`` counts how many of these lines pass through it.
    """

    cubic: TwistedCubic
    lines: dict
    points: np.ndarray
    label: list
    key: list
    hits: np.ndarray

    @property
    def F(self):
        return self.cubic.F

    def count(self, kind):
        return len(self.lines[kind])

    def axis(self, kind, key) -> Subspace:
        return beta(self.F).perp_of(self.lines[kind][key])


def _rational_points_of_imaginary_chord(F: FieldSpec, F2: FieldSpec, t2: int):
    """Points Tr(alpha P_t) for alpha in GF(q^2): the GF(q)-points of <P_t, P_t^q>."""
    Pt = cubic_points(F2, [t2])[0]
    alphas = F2.nonzero()
    V = F2.mul(alphas[:, None], Pt[None, :])
    T = F2.add(V, F2.pow(V, F.q))
    T = T[np.any(T != 0, axis=1)]
    return np.unique(normalize(F, project(T, F2, F)), axis=0)


def chord_atlas(q: int) -> ChordAtlas:
    C = build_cubic(q)
    F = C.F
    F2 = field_of_order(q * q)
    params = [int(t) for t in F.elements()] + [None]
    lines = {REAL: {}, IMAGINARY: {}, TANGENT: {}}
    for i, s in enumerate(params):
        lines[TANGENT][s] = tangent_at(F, s)
        for t in params[i + 1 :]:
            lines[REAL][(s, t)] = geom.line_through(F, C.point(s), C.point(t))
    t2 = F2.elements()
    t2 = t2[~F2.in_subfield(t2, F2.k // 2)]
    for t in t2:
        tq = int(F2.pow(t, q))
        if tq < t:
            continue
        pts = _rational_points_of_imaginary_chord(F, F2, int(t))
        if pts.shape[0] != q + 1:
            raise ConsistencyError(f"imaginary chord with {pts.shape[0]} rational points")
        lines[IMAGINARY][int(t)] = Subspace.span(F, pts[:2])
    allp = geom.all_points(3, F)
    off = allp[~C.contains(allp)]
    codes = geom.point_index(F, off)
    pos = {int(c): i for i, c in enumerate(codes)}
    label = [None] * len(off)
    key = [None] * len(off)
    hits = np.zeros(len(off), dtype=np.int64)
    for kind in (REAL, IMAGINARY, TANGENT):
        for k, L in lines[kind].items():
            for c in geom.point_index(F, L.points()):
                i = pos.get(int(c))
                if i is None:
                    continue
                hits[i] += 1
                label[i], key[i] = kind, k
    return ChordAtlas(C, lines, off, label, key, hits)


def axis_osculating_planes(atlas: ChordAtlas, kind, key):
    """Parameters t whose osculating plane contains the axis of the given chord."""
    A = atlas.axis(kind, key)
    F = atlas.F
    params = [int(t) for t in F.elements()] + [None]
    return [t for t in params if osculating_plane(F, t).contains_subspace(A)]


def axis_osculating_planes_ext(atlas: ChordAtlas, kind, key):
    """As :func:`axis_osculating_planes`, but over GF(q^2): parameters t in
    GF(q^2) (or None) whose osculating plane of the extended cubic contains the
    axis.  Imaginary axes lie in the planes at their two conjugate points."""
    A = atlas.axis(kind, key)
    F = atlas.F
    F2 = field_of_order(F.q * F.q)
    A2 = Subspace.span(F2, embed(A.basis, F, F2))
    params = [int(t) for t in F2.elements()] + [None]
    return [t for t in params if osculating_plane(F2, t).contains_subspace(A2)]

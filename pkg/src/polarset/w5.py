"""Partial ovoids of W(5,q): the norm-one orbit and the even-q cone construction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import geom, kernels
from .cubic import ConsistencyError, UnsupportedParameter
from .forms import SesquiForm, antidiagonal_symplectic, paired_symplectic, symplectic
from .geom import Subspace, normalize
from .gf import (
    FieldSpec,
    absolute_trace,
    embed,
    field_of_order,
    project,
    sqrt_char2_array,
)
from .pointset import PointSet
from .verify import VerificationReport, is_maximal_partial_ovoid


class PgvModel:
    """PG(5,q) realised inside PG(5,q^3) as the vectors (a, a^q, a^q^2, b^q^2, b^q, b).

    Standard coordinates write a and b in the basis 1, t, t^2 of GF(q^3) over
    GF(q), where t is the primitive element of GF(q^3).
    """

    def __init__(self, q: int):
        self.q = q
        self.F = field_of_order(q)
        self.F3 = field_of_order(q**3)
        F3 = self.F3
        t = F3.generator_enc
        self.basis = np.array([1, t, int(F3.pow(t, 2))], dtype=np.int64)
        # element of GF(q^3) -> its three coordinates over GF(q)
        c = geom._tuples(q, 3)
        vals = self._combine(c)
        if np.unique(vals).size != q**3:
            raise ConsistencyError("1, t, t^2 is not a basis")
        self._coords = np.empty((q**3, 3), dtype=np.int64)
        self._coords[vals] = c

    def _combine(self, c):
        F, F3 = self.F, self.F3
        e = embed(c, F, F3)
        return F3.sum(F3.mul(e, self.basis[None, :]), axis=1)

    def coords(self, a):
        return self._coords[np.asarray(a, dtype=np.int64)]

    def element(self, c):
        return self._combine(np.atleast_2d(c))

    def to_std(self, a, b):
        """Rows of GF(q)^6 for pairs (a, b) of GF(q^3)."""
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        return np.concatenate([self.coords(a), self.coords(b)], axis=1)

    def from_std(self, X):
        X = np.atleast_2d(X)
        return self.element(X[:, :3]), self.element(X[:, 3:])

    def big_vector(self, a, b):
        """The vectors (a, a^q, a^q^2, b^q^2, b^q, b) over GF(q^3)."""
        F3, q = self.F3, self.q
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        return np.stack(
            [a, F3.pow(a, q), F3.pow(a, q * q), F3.pow(b, q * q), F3.pow(b, q), b], axis=1
        )

    def pairing(self, a, b, a2, b2):
        """T(a b') - T(a' b), the alternating form in (a, b) terms."""
        F3 = self.F3
        return F3.sub(F3.trace(F3.mul(a, b2), self.F.k), F3.trace(F3.mul(a2, b), self.F.k))

    @cached_property
    def form(self) -> SesquiForm:
        """The induced symplectic form on standard coordinates."""
        E = np.eye(6, dtype=np.int64)
        a, b = self.from_std(E)
        G = self.pairing(a[:, None], b[:, None], a[None, :], b[None, :])
        return symplectic(self.F, project(G, self.F3, self.F))

    @cached_property
    def big_form(self) -> SesquiForm:
        return antidiagonal_symplectic(self.F3, 6)

    def points(self):
        return geom.all_points(5, self.F)

    def n_points(self) -> int:
        return geom.n_points(5, self.q)

    def pi_planes(self):
        """The planes {P_(a,0)} and {P_(0,b)}."""
        z = np.zeros(3, dtype=np.int64)
        e = np.eye(3, dtype=np.int64)
        pi1 = Subspace.span(self.F, np.concatenate([e, np.tile(z, (3, 1))], axis=1))
        pi2 = Subspace.span(self.F, np.concatenate([np.tile(z, (3, 1)), e], axis=1))
        return pi1, pi2


class NormOneGroup:
    """The cyclic group of x in GF(q^3) with N(x) = 1 acting as (a, b) -> (xa, b/x)."""

    def __init__(self, model: PgvModel):
        self.model = model
        F3 = model.F3
        x = F3.nonzero()
        self.elements = x[F3.norm(x, model.F.k) == 1]

    def __len__(self):
        return self.elements.size

    def order_of(self, x) -> int:
        F3 = self.model.F3
        n = len(self)
        return min(d for d in range(1, n + 1) if n % d == 0 and F3.pow(x, d) == 1)

    def generator(self) -> int:
        n = len(self)
        for x in self.elements:
            if self.order_of(int(x)) == n:
                return int(x)
        raise ConsistencyError("norm-one group is not cyclic")

    def matrix(self, x):
        """6x6 matrix over GF(q) of D_x in standard coordinates (column action)."""
        M = self.model
        F3 = M.F3
        a, b = M.from_std(np.eye(6, dtype=np.int64))
        img = M.to_std(F3.mul(a, x), F3.mul(b, F3.inv(x)))
        return img.T

    def act(self, x, a, b):
        F3 = self.model.F3
        return F3.mul(a, x), F3.mul(b, F3.inv(x))


def orbit_size(q: int) -> int:
    return q * q + q + 1


def build_orbit_ovoid(q: int, c: int = 1, model: PgvModel | None = None) -> PointSet:
    """The orbit of P_(1,c): points P_(x, c/x) for N(x) = 1."""
    model = PgvModel(q) if model is None else model
    F, F3 = model.F, model.F3
    if not 0 < c < q:
        raise ValueError("c must be a nonzero element of GF(q)")
    K = NormOneGroup(model)
    x = K.elements
    cb = int(embed(c, F, F3))
    P = model.to_std(x, F3.mul(cb, F3.inv(x)))
    S = PointSet(F, P, {"construction": "w5-orbit", "q": q, "c": c})
    if len(S) != orbit_size(q):
        raise ConsistencyError(f"orbit has {len(S)} points, expected {orbit_size(q)}")
    G = model.form
    i, j = kernels.pair_zero_scan(F, G.left(S.points), S.points)
    if i >= 0:
        raise ConsistencyError("orbit is not a partial ovoid", witness=(S.points[i].tolist(), S.points[j].tolist()))
    return S


def k_orbits(model: PgvModel, points):
    """Partition rows of ``points`` into orbits of the norm-one group; returns labels."""
    F = model.F
    K = NormOneGroup(model)
    g = K.generator()
    D = K.matrix(g)
    codes = geom.point_index(F, points)
    pos = {int(c): i for i, c in enumerate(codes)}
    labels = np.full(len(points), -1, dtype=np.int64)
    nxt = 0
    images = normalize(F, geom.matmul(F, points, D.T))
    img_idx = np.array([pos.get(int(c), -1) for c in geom.point_index(F, images)])
    for start in range(len(points)):
        if labels[start] >= 0:
            continue
        i = start
        while labels[i] < 0:
            labels[i] = nxt
            i = img_idx[i]
            if i < 0:
                raise ConsistencyError("point set is not closed under the group")
        nxt += 1
    return labels


def verify_orbit_maximality(q: int, c: int = 1) -> VerificationReport:
    model = PgvModel(q)
    S = build_orbit_ovoid(q, c, model)
    rep = is_maximal_partial_ovoid(S, model.form)
    pts = model.points()
    outside = pts[~S.contains(pts)]
    labels = k_orbits(model, outside)
    sizes = np.bincount(labels)
    rep.predicate = "w5-orbit-maximality"
    rep.params.update(c=c)
    rep.counts.update(
        k_orbits=int(sizes.size),
        k_orbit_sizes={int(s): int(n) for s, n in zip(*np.unique(sizes, return_counts=True))},
    )
    return rep


# -- even q ---------------------------------------------------------------------------


def find_delta(q: int) -> int:
    """Smallest delta with X^2 + X + delta irreducible over GF(q), q even."""
    F = field_of_order(q)
    if F.p != 2:
        raise UnsupportedParameter(f"q={q} is odd")
    els = F.elements()
    return int(els[absolute_trace(F, els) == 1][0])


def _quadric(F, X, u, v, w, z, delta):
    """X_u X_v + X_w^2 + X_w X_z + delta X_z^2 (0-based columns)."""
    return F.add(
        F.add(F.mul(X[:, u], X[:, v]), F.pow(X[:, w], 2)),
        F.add(F.mul(X[:, w], X[:, z]), F.mul(delta, F.pow(X[:, z], 2))),
    )


@dataclass(eq=False)
class EvenW5Config:
    q: int
    F: FieldSpec
    delta1: int
    delta2: int
    form: SesquiForm
    delta_spaces: tuple
    sigma: Subspace
    E1: np.ndarray
    E2: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    A: np.ndarray

    def A_param(self):
        """A written out: (1, n, sqrt n, 0, c, d) with n = c^2 + cd + delta2 d^2, plus U2."""
        F = self.F
        cd = geom._tuples(self.q, 2)
        c, d = cd.T
        n = F.add(F.add(F.pow(c, 2), F.mul(c, d)), F.mul(self.delta2, F.pow(d, 2)))
        z = np.zeros_like(c)
        P = np.stack([np.ones_like(c), n, sqrt_char2_array(F, n), z, c, d], axis=1)
        return geom.sort_points(F, np.concatenate([P, [[0, 1, 0, 0, 0, 0]]]))


def _cone(F, vertex_basis, base_points):
    pts = [Subspace.span(F, np.concatenate([vertex_basis, b[None]])).points() for b in base_points]
    return geom.sort_points(F, np.concatenate(pts))


def _intersect(F, A, B):
    return A[np.isin(geom.point_index(F, A), geom.point_index(F, B))]


def even_w5_config(q: int, delta1: int | None = None, delta2: int | None = None) -> EvenW5Config:
    F = field_of_order(q)
    if F.p != 2:
        raise UnsupportedParameter(f"q={q} is odd")
    d1 = find_delta(q) if delta1 is None else delta1
    d2 = find_delta(q) if delta2 is None else delta2
    form = paired_symplectic(F, 6)
    pts = geom.all_points(5, F)
    D1 = pts[(pts[:, 4] == 0) & (pts[:, 5] == 0)]
    D2 = pts[(pts[:, 2] == 0) & (pts[:, 3] == 0)]
    E1 = D1[_quadric(F, D1, 0, 1, 2, 3, d1) == 0]
    E2 = D2[_quadric(F, D2, 0, 1, 4, 5, d2) == 0]
    e = np.eye(6, dtype=np.int64)
    sigma = Subspace.span(F, e[:3])
    conic = E1[sigma.contains(E1)]
    P1 = _cone(F, e[[2]], E2)
    delta1_perp = form.perp_of(Subspace.span(F, e[:4]))
    P2 = _cone(F, delta1_perp.basis, conic)
    A = _intersect(F, P1, P2)
    return EvenW5Config(
        q, F, d1, d2, form,
        (Subspace.span(F, e[:4]), Subspace.span(F, e[[0, 1, 4, 5]])),
        sigma, E1, E2, P1, P2, A,
    )


def even_size(q: int) -> int:
    return 2 * q * q - q + 1


def build_even_w5(q: int, cfg: EvenW5Config | None = None) -> PointSet:
    cfg = even_w5_config(q) if cfg is None else cfg
    F = cfg.F
    for name, P in (("E1", cfg.E1), ("E2", cfg.E2), ("A", cfg.A)):
        if len(P) != q * q + 1:
            raise ConsistencyError(f"|{name}| = {len(P)}, expected {q * q + 1}")
    if not np.array_equal(cfg.A, cfg.A_param()):
        raise ConsistencyError("cone intersection differs from its parametrisation")
    E1_off = cfg.E1[~cfg.sigma.contains(cfg.E1)]
    S = PointSet(
        F,
        np.concatenate([cfg.A, E1_off]),
        {"construction": "w5-even", "q": q, "delta1": cfg.delta1, "delta2": cfg.delta2},
    )
    if len(S) != even_size(q):
        raise ConsistencyError(f"size {len(S)}, expected {even_size(q)}")
    i, j = kernels.pair_zero_scan(F, cfg.form.left(S.points), S.points)
    if i >= 0:
        raise ConsistencyError("not a partial ovoid", witness=(S.points[i].tolist(), S.points[j].tolist()))
    return S

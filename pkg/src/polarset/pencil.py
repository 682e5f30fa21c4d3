"""A pencil of Hermitian varieties of PG(2n-1,q^2) and tangent-sets built from it.

Member i is the variety

    sum_j (X_j X_{n+j}^q - X_j^q X_{n+j}) + (xi_i^q - xi_i) X_{2n}^{q+1} = 0,

whose Gram matrix is made Hermitian by the factor iota (iota^q = -iota).  Pi is
the hyperplane X_{2n} = 0.  Sigma_i is the image of the canonical subgeometry
PG(2n-1,q) under the shift tau_i: X_n -> X_n + xi_i X_{2n}; it lies on member i,
and the member's form restricts to a symplectic form W_i on it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import geom, kernels
from .cubic import ConsistencyError, beta
from .forms import SesquiForm, find_iota, hermitian, isometry, restrict_to_baer
from .geom import normalize
from .gf import FieldSpec, embed, field_of_order, project
from .pointset import PointSet
from .verify import VerificationReport, is_maximal_tangent_set, is_tangent_set
from .w5 import find_delta


class PlacementError(RuntimeError):
    pass


TRACE_REQUIREMENTS = {
    "avoid_pi": 0,
    "exactly_one": 1,
    "tangent_point": 1,
    "secant_conic": None,  # q + 1
}


@dataclass(eq=False)
class PencilConfig:
    n: int
    q: int
    F: FieldSpec  # GF(q)
    F2: FieldSpec  # GF(q^2)
    iota: int
    xis: tuple

    @property
    def m(self) -> int:
        return 2 * self.n

    def alphas(self):
        """iota (xi^q - xi) for each xi, as GF(q^2) encodings."""
        F2 = self.F2
        xi = np.array(self.xis, dtype=np.int64)
        return F2.mul(self.iota, F2.sub(F2.pow(xi, self.q), xi))

    def pi_contains(self, P):
        return np.atleast_2d(P)[:, -1] == 0


def make_config(n: int, q: int) -> PencilConfig:
    if n not in (2, 3, 4):
        raise ValueError("n must be 2, 3 or 4")
    F = field_of_order(q)
    F2 = field_of_order(q * q)
    iota = find_iota(F2)
    els = F2.elements()
    vals = F2.mul(iota, F2.sub(F2.pow(els, q), els))
    xis, seen = [], set()
    for x, v in zip(els, vals):
        if int(v) not in seen:
            seen.add(int(v))
            xis.append(int(x))
    cfg = PencilConfig(n, q, F, F2, iota, tuple(xis))
    img = {int(v) for v in cfg.alphas()}
    if len(xis) != q or xis[0] != 0 or img != {int(v) for v in embed(F.elements(), F, F2)}:
        raise ConsistencyError("xi values do not realise every element of GF(q)")
    return cfg


def member_gram(cfg: PencilConfig, xi: int):
    F2, n = cfg.F2, cfg.n
    S = np.zeros((cfg.m, cfg.m), dtype=np.int64)
    for j in range(n):
        S[j, n + j] = 1
        S[n + j, j] = int(F2.neg(1))
    S[-1, -1] = F2.add(S[-1, -1], F2.sub(F2.pow(xi, cfg.q), xi))
    return F2.mul(S, cfg.iota)


def shift_matrix(cfg: PencilConfig, xi: int, sign: int = 1):
    """Column-action matrix of X_n -> X_n + sign * xi X_{2n}."""
    F2 = cfg.F2
    T = np.eye(cfg.m, dtype=np.int64)
    T[cfg.n - 1, -1] = xi if sign > 0 else int(F2.neg(xi))
    return T


def elation(cfg: PencilConfig, a):
    """Matrix of the elation group with parameters a_1..a_{2n-1} in GF(q) (GF(q^2) encodings)."""
    n, m, F2 = cfg.n, cfg.m, cfg.F2
    a = np.asarray(a, dtype=np.int64)
    E = np.eye(m, dtype=np.int64)
    E[: m - 1, -1] = a
    E[n - 1, : n - 1] = F2.neg(a[n : 2 * n - 1])
    E[n - 1, n : 2 * n - 1] = a[: n - 1]
    return E


@dataclass(eq=False)
class PencilMember:
    cfg: PencilConfig
    i: int  # 1-based
    form: SesquiForm
    tau: np.ndarray
    sign: int

    @property
    def xi(self):
        return self.cfg.xis[self.i - 1]

    @cached_property
    def baer(self) -> geom.BaerMap:
        return geom.BaerMap(self.cfg.F2, self.cfg.F, self.tau)

    @cached_property
    def sigma(self):
        return self.baer.points()

    def sigma_listed(self):
        """Sigma_i written out: (a_1..a_n + xi..a_{2n-1}, 1) for all a, and (a, 0) for a != 0."""
        cfg = self.cfg
        F2 = cfg.F2
        sub = embed(geom._tuples(cfg.q, cfg.m - 1), cfg.F, F2)
        aff = np.concatenate([sub, np.ones((sub.shape[0], 1), dtype=np.int64)], axis=1)
        aff[:, cfg.n - 1] = F2.add(aff[:, cfg.n - 1], self.xi)
        inf = np.concatenate([sub[1:], np.zeros((sub.shape[0] - 1, 1), dtype=np.int64)], axis=1)
        return geom.sort_points(F2, np.concatenate([aff, inf]))

    @cached_property
    def W(self) -> SesquiForm:
        """Symplectic form on subgeometry coordinates."""
        return restrict_to_baer(self.form, self.baer)

    def to_sigma(self, P):
        """Subgeometry coordinates (GF(q) rows) -> points of Sigma_i."""
        cfg = self.cfg
        X = embed(np.atleast_2d(P), cfg.F, cfg.F2)
        return normalize(cfg.F2, geom.matmul(cfg.F2, X, self.tau.T))

    def from_sigma(self, P):
        cfg = self.cfg
        return project(self.baer.coords_of(P), cfg.F2, cfg.F)


def _hermitian_points(form: SesquiForm, pts):
    return pts[form.is_absolute(pts)]


def _maps_onto(F2, T, src: SesquiForm, dst: SesquiForm) -> bool:
    """Column action of T sends the variety of src onto that of dst: T^T G_dst conj(T) = c G_src."""
    A = geom.matmul(F2, geom.matmul(F2, T.T, dst.gram), dst.conj(T))
    i, j = np.argwhere(src.gram != 0)[0]
    if A[i, j] == 0:
        return False
    c = F2.div(A[i, j], src.gram[i, j])
    return bool(np.array_equal(A, F2.mul(src.gram, c)))


def build_member(cfg: PencilConfig, i: int, ambient=None) -> PencilMember:
    """Member i (1-based); the shift direction is the one carrying member 1 onto it.

    The choice is made on Gram matrices; when ``ambient`` points are supplied the
    image of the point set is compared as well.
    """
    if not 1 <= i <= cfg.q:
        raise ValueError(f"member index {i} outside 1..{cfg.q}")
    F2 = cfg.F2
    xi = cfg.xis[i - 1]
    form = hermitian(F2, member_gram(cfg, xi))
    if i == 1:
        return PencilMember(cfg, 1, form, np.eye(cfg.m, dtype=np.int64), 1)
    H1 = hermitian(F2, member_gram(cfg, cfg.xis[0]))
    for sign in (1, -1):
        T = shift_matrix(cfg, xi, sign)
        if not _maps_onto(F2, T, H1, form):
            continue
        if ambient is not None:
            img = geom.point_index(F2, geom.apply(F2, T, _hermitian_points(H1, ambient)))
            if not np.array_equal(np.sort(img), np.sort(geom.point_index(F2, _hermitian_points(form, ambient)))):
                raise ConsistencyError(f"shift maps member 1 onto a different point set than member {i}")
        return PencilMember(cfg, i, form, T, sign)
    raise ConsistencyError(f"neither shift direction maps member 1 onto member {i}")


@dataclass(eq=False)
class Pencil:
    cfg: PencilConfig
    members: list = field(default_factory=list)

    @property
    def H1(self) -> SesquiForm:
        return self.members[0].form


def build_pencil(cfg: PencilConfig, point_check_limit: int = 10**5) -> Pencil:
    """All q members; shifts are also checked point by point in small spaces."""
    small = geom.n_points(cfg.m - 1, cfg.q**2) <= point_check_limit
    pts = geom.all_points(cfg.m - 1, cfg.F2) if small else None
    return Pencil(cfg, [build_member(cfg, i, pts) for i in range(1, cfg.q + 1)])


# -- seeds ------------------------------------------------------------------------------


def default_w3_ovoid(q: int) -> tuple[PointSet, SesquiForm]:
    """Elliptic quadric ovoid (1, a, b, a^2 + ab + delta b^2) and U4 of W(3,q), q even.

    The form is x1 y4 + x2 y3 + x3 y2 + x4 y1, the polar form of the quadric.
    """
    F = field_of_order(q)
    if F.p != 2:
        raise ValueError(f"W(3,{q}) has no ovoid for odd q")
    d = find_delta(q)
    ab = geom._tuples(q, 2)
    a, b = ab.T
    c = F.add(F.add(F.pow(a, 2), F.mul(a, b)), F.mul(d, F.pow(b, 2)))
    P = np.stack([np.ones_like(a), a, b, c], axis=1)
    P = np.concatenate([P, [[0, 0, 0, 1]]])
    return PointSet(F, P, {"construction": "w3-ovoid", "q": q, "delta": d}), beta(F)


def is_ovoid(S: PointSet, form: SesquiForm) -> bool:
    """Every totally isotropic line meets S in exactly one point (W(3,q))."""
    F = form.F
    lines = geom.enumerate_subspaces(F, form.dim, 2)
    iso = F.sum(F.mul(form.left(lines[:, 0]), form.conj(lines[:, 1])), axis=1) == 0
    pts = geom.line_points(F, lines[iso])
    codes = geom.point_index(F, pts.reshape(-1, form.dim)).reshape(pts.shape[:2])
    hits = np.isin(codes, S.codes()).sum(axis=1)
    return bool((hits == 1).all())


def required_trace(req: str, q: int) -> int:
    if req not in TRACE_REQUIREMENTS:
        raise ValueError(f"unknown trace requirement {req!r}")
    y = TRACE_REQUIREMENTS[req]
    return q + 1 if y is None else y


def place_seed(
    cfg: PencilConfig,
    seed: PointSet,
    seed_form: SesquiForm,
    trace_req: str = "exactly_one",
    rng_seed: int = 0,
    budget: int = 10_000,
) -> PointSet:
    """Map a partial ovoid of ``seed_form`` into Sigma_1 with a prescribed trace on Pi.

    Pi is the polar hyperplane of U_n for W_1, so an isometry sending a point u to
    U_n sends u^perp onto Pi; the trace is then |seed meet u^perp|.  Candidate
    points u are tried in a random order drawn from ``rng_seed``.
    """
    F = cfg.F
    if seed.F is not F or seed_form.dim != cfg.m:
        raise ValueError("seed lives in a different space")
    want = required_trace(trace_req, cfg.q)
    _verify_seed(seed, seed_form)
    rng = np.random.default_rng(rng_seed)
    W1 = build_member(cfg, 1).W
    pts = geom.all_points(cfg.m - 1, F)
    order = rng.permutation(len(pts))
    A = seed_form.left(seed.points)
    un = np.zeros(cfg.m, dtype=np.int64)
    un[cfg.n - 1] = 1
    for attempt, k in enumerate(order[:budget]):
        u = pts[k]
        y = int((geom.matmul(F, A, u) == 0).sum())
        if y != want:
            continue
        T = isometry(seed_form, W1, first_src=u, first_dst=un, rng=rng)
        P = normalize(F, geom.matmul(F, seed.points, T.T))
        O1 = PointSet(
            cfg.F2,
            embed(P, F, cfg.F2),
            {**seed.provenance, "placement": trace_req, "rng_seed": rng_seed, "attempts": attempt + 1},
        )
        if int(cfg.pi_contains(O1.points).sum()) != want:  # pragma: no cover - isometry guarantees it
            raise ConsistencyError("placed seed has the wrong trace on Pi")
        return O1
    raise PlacementError(f"no placement with trace {trace_req} ({want} points) within {budget} attempts")


# -- tangent-sets -------------------------------------------------------------------------


@dataclass(eq=False)
class TangentSet:
    cfg: PencilConfig
    points: PointSet
    parts: list
    x: int
    y: int
    form: SesquiForm  # H_1

    def __len__(self):
        return len(self.points)


def size_law(x: int, y: int, q: int) -> int:
    return x * q + y


def assemble_tangent_set(pencil: Pencil, O1: PointSet, check_maximal: bool | None = None) -> TangentSet:
    """Union of the images of O1 under the shifts; verified to be a tangent-set of H_1.

    With ``check_maximal=None`` maximality is checked exactly when it is
    expected: n = 2, q even and O1 an ovoid (q^2 + 1 points).
    """
    cfg = pencil.cfg
    if check_maximal is None:
        check_maximal = cfg.n == 2 and cfg.q % 2 == 0 and len(O1) == cfg.q**2 + 1
    F2 = cfg.F2
    on_pi = cfg.pi_contains(O1.points)
    x, y = int((~on_pi).sum()), int(on_pi.sum())
    parts = [PointSet(F2, geom.apply(F2, M.tau, O1.points)) for M in pencil.members]
    for M, Oi in zip(pencil.members, parts):
        if not M.baer.contains(Oi.points).all():
            raise ConsistencyError(f"O_{M.i} leaves Sigma_{M.i}")
        if not np.array_equal(np.sort(Oi.codes()[cfg.pi_contains(Oi.points)]), np.sort(O1.codes()[on_pi])):
            raise ConsistencyError("traces on Pi differ")
    T = PointSet(F2, np.concatenate([p.points for p in parts]), {**O1.provenance, "construction": "tangent-set", "n": cfg.n, "q": cfg.q, "x": x, "y": y})
    if len(T) != size_law(x, y, cfg.q):
        raise ConsistencyError(f"|T| = {len(T)}, expected {size_law(x, y, cfg.q)}")
    H1 = pencil.H1
    rep = is_tangent_set(T, H1)
    if not rep.passed:
        raise ConsistencyError("not a tangent-set", witness=rep.witness)
    if check_maximal:
        rep = is_maximal_tangent_set(T, H1)
        if not rep.passed:
            raise ConsistencyError("tangent-set is not maximal", witness=rep.witness)
    return TangentSet(cfg, T, parts, x, y, H1)


# -- lemma checks ---------------------------------------------------------------------


def _codes_in(F, P, codes):
    return np.isin(geom.point_index(F, P.reshape(-1, P.shape[-1])), codes).reshape(P.shape[:-1])


def tangent_line_scan(pencil: Pencil):
    """Every tangent or contained line of H_1 meets the union of the Sigma_i in 0, 1 or q+1
    points; with q+1 the line lies in one Sigma_k and on member k.  Returns (ok, witness, counts)."""
    cfg = pencil.cfg
    F2, q, m = cfg.F2, cfg.q, cfg.m
    sig_codes = [geom.point_index(F2, M.sigma) for M in pencil.members]
    union = np.unique(np.concatenate(sig_codes))
    lines = geom.enumerate_subspaces(F2, m, 2)
    stats = {"lines": len(lines), "tangent": 0, "contained": 0}
    H1 = pencil.H1
    step = 20000
    for lo in range(0, len(lines), step):
        L = geom.line_points(F2, lines[lo : lo + step])
        n_abs = H1.is_absolute(L.reshape(-1, m)).reshape(L.shape[:2]).sum(axis=1)
        keep = (n_abs == 1) | (n_abs == q * q + 1)
        stats["tangent"] += int((n_abs == 1).sum())
        stats["contained"] += int((n_abs == q * q + 1).sum())
        L = L[keep]
        hits = _codes_in(F2, L, union).sum(axis=1)
        bad = ~np.isin(hits, (0, 1, q + 1))
        if bad.any():
            return False, {"line": L[bad][0].tolist(), "hits": int(hits[bad][0])}, stats
        for Lk in L[hits == q + 1]:
            ok = False
            for M, codes in zip(pencil.members, sig_codes):
                if _codes_in(F2, Lk, codes).sum() == q + 1 and M.form.is_absolute(Lk).all():
                    ok = True
                    break
            if not ok:
                return False, {"line": Lk.tolist(), "reason": "no single subgeometry"}, stats
    return True, None, stats


def hermcur_check(pencil: Pencil):
    """For n = 2: the points of Pi on tangent lines of H_1 through (0, a + xi_i, 0, 1)
    are the zeros of iota^2 y^(q+1) + iota alpha (x^q z - x z^q), alpha = iota (xi_i^q - xi_i)."""
    cfg = pencil.cfg
    if cfg.n != 2:
        raise ValueError("the curve identity concerns n = 2")
    F2, q = cfg.F2, cfg.q
    H1 = pencil.H1
    pi = geom.all_points(2, F2)
    R = np.concatenate([pi, np.zeros((len(pi), 1), dtype=np.int64)], axis=1)
    x, y, z = pi.T
    checked = 0
    for M in pencil.members[1:]:
        alpha = int(F2.mul(cfg.iota, F2.sub(F2.pow(M.xi, q), M.xi)))
        curve = F2.add(
            F2.mul(F2.pow(cfg.iota, 2), F2.pow(y, q + 1)),
            F2.mul(F2.mul(cfg.iota, alpha), F2.sub(F2.mul(F2.pow(x, q), z), F2.mul(x, F2.pow(z, q)))),
        ) == 0
        for a in embed(cfg.F.elements(), cfg.F, F2):
            P = np.array([0, F2.add(a, M.xi), 0, 1], dtype=np.int64)
            dP = int(H1.diag(P)[0])
            dR = H1.diag(R)
            h = H1.values(P[None], R)[0]
            tangent = F2.mul(dP, dR) == F2.pow(h, q + 1)
            checked += 1
            if not np.array_equal(tangent, curve):
                return False, {"member": M.i, "point": P.tolist()}, {"points": checked}
            if int(curve.sum()) != q**3 + 1:
                return False, {"member": M.i, "curve_points": int(curve.sum())}, {"points": checked}
    return True, None, {"points": checked}


def lemma_checks(cfg: PencilConfig, pencil: Pencil | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    pencil = build_pencil(cfg) if pencil is None else pencil
    ok, witness, counts = tangent_line_scan(pencil)
    if ok and cfg.n == 2:
        ok, witness, c2 = hermcur_check(pencil)
        counts.update(curve_points_checked=c2["points"])
    return VerificationReport(
        "pencil-lemmas", {"n": cfg.n, "q": cfg.q}, ok, witness, counts, (time.perf_counter() - t0) * 1e3
    )


def preserves(F2: FieldSpec, M, form: SesquiForm) -> bool:
    """M^T G conj(M) = G, the exact isometry condition."""
    lhs = geom.matmul(F2, geom.matmul(F2, M.T, form.gram), form.conj(M))
    return bool(np.array_equal(lhs, form.gram))


def tangent_set_T_meets_H1(ts: TangentSet) -> bool:
    """T meet H_1 equals O_1."""
    on = ts.points.points[ts.form.is_absolute(ts.points.points)]
    return np.array_equal(np.sort(geom.point_index(ts.cfg.F2, on)), np.sort(ts.parts[0].codes()))


def _verify_seed(seed: PointSet, form: SesquiForm):
    i, j = kernels.pair_zero_scan(form.F, form.left(seed.points), seed.points)
    if i >= 0:
        raise ConsistencyError("seed is not a partial ovoid", witness=(seed.points[i].tolist(), seed.points[j].tolist()))

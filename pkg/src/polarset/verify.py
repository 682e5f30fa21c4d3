"""Brute-force oracles for partial ovoids and tangent-sets, plus max-clique search.

Every predicate re-derives perpendicularity from the Gram matrix; nothing is
taken from construction metadata.  Two absolute points of a polar space are
collinear in it exactly when they are perpendicular, so the partial-ovoid test
is a pairwise form evaluation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import geom, kernels
from .forms import PolarSpace, SesquiForm, line_type
from .pointset import PointSet


class PreconditionError(ValueError):
    pass


@dataclass
class VerificationReport:
    predicate: str
    params: dict
    passed: bool
    witness: dict | None = None
    counts: dict = field(default_factory=dict)
    millis: float = 0.0

    def __bool__(self):
        return self.passed

    @property
    def outcome(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {
            "predicate": self.predicate,
            "params": self.params,
            "outcome": self.outcome,
            "counts": self.counts,
            "millis": round(self.millis, 3),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _params(S: PointSet, form: SesquiForm) -> dict:
    return {"space": repr(PolarSpace(form)), "q": form.sub_q, "n": form.dim - 1, "size": len(S)}


def _pt(P):
    return [int(x) for x in P]


def _check_absolute(S: PointSet, form: SesquiForm):
    bad = ~form.is_absolute(S.points)
    if bad.any():
        raise PreconditionError(f"point {_pt(S.points[bad][0])} is not absolute")


def is_partial_ovoid(S: PointSet, form: SesquiForm) -> VerificationReport:
    t0 = time.perf_counter()
    _check_absolute(S, form)
    A = form.left(S.points)
    C = form.conj(S.points)
    i, j = kernels.pair_zero_scan(form.F, A, C)
    witness = None
    if i >= 0:
        witness = {"pair": [_pt(S.points[i]), _pt(S.points[j])]}
    n = len(S)
    return VerificationReport(
        "partial-ovoid",
        _params(S, form),
        i < 0,
        witness,
        {"size": n, "pairs": n * (n - 1) // 2},
        (time.perf_counter() - t0) * 1e3,
    )


def is_maximal_partial_ovoid(S: PointSet, form: SesquiForm, universe=None) -> VerificationReport:
    """Every absolute point outside S is perpendicular to some member."""
    t0 = time.perf_counter()
    _check_absolute(S, form)
    pts = PolarSpace(form).points() if universe is None else np.asarray(universe)
    outside = pts[~S.contains(pts)]
    cover = kernels.cover_scan(form.F, form.left(outside), form.conj(S.points))
    missing = np.nonzero(cover < 0)[0]
    witness = None
    if missing.size:
        witness = {"extending_point": _pt(outside[missing[0]])}
    return VerificationReport(
        "maximality",
        _params(S, form),
        missing.size == 0,
        witness,
        {"size": len(S), "scanned": int(outside.shape[0]), "uncovered": int(missing.size)},
        (time.perf_counter() - t0) * 1e3,
    )


def _require_hermitian(form):
    if form.kind != "hermitian":
        raise PreconditionError("tangent-sets live in Hermitian spaces")


def is_tangent_set(T: PointSet, form: SesquiForm, method: str = "gram") -> VerificationReport:
    """No line through two members is tangent to or contained in the variety.

    ``method="gram"`` tests the 2x2 Gram determinant of each pair (the line is
    secant iff it is nonzero); ``method="count"`` counts absolute points on the
    joining line instead.
    """
    t0 = time.perf_counter()
    _require_hermitian(form)
    F = form.F
    P = T.points
    witness = None
    if method == "gram":
        i, j = kernels.tangent_pair_scan(F, form.left(P), form.conj(P), form.diag(P), form.sub_q + 1)
        if i >= 0:
            witness = {"pair": [_pt(P[i]), _pt(P[j])]}
    elif method == "count":
        for i in range(len(P)):
            for j in range(i + 1, len(P)):
                kind = line_type(form, geom.line_through(F, P[i], P[j]))
                if kind != "secant":
                    witness = {"pair": [_pt(P[i]), _pt(P[j])], "line": kind}
                    break
            if witness:
                break
    else:
        raise ValueError(f"unknown method {method!r}")
    n = len(T)
    return VerificationReport(
        "tangent-set",
        {**_params(T, form), "method": method},
        witness is None,
        witness,
        {"size": n, "pairs": n * (n - 1) // 2},
        (time.perf_counter() - t0) * 1e3,
    )


def is_maximal_tangent_set(T: PointSet, form: SesquiForm) -> VerificationReport:
    """Every point outside T shares a tangent or contained line with a member."""
    t0 = time.perf_counter()
    _require_hermitian(form)
    F = form.F
    pts = geom.all_points(form.dim - 1, F)
    outside = pts[~T.contains(pts)]
    cover = kernels.tangent_cover_scan(
        F, form.left(outside), form.diag(outside), form.conj(T.points), form.diag(T.points), form.sub_q + 1
    )
    missing = np.nonzero(cover < 0)[0]
    witness = {"extending_point": _pt(outside[missing[0]])} if missing.size else None
    return VerificationReport(
        "maximal-tangent-set",
        _params(T, form),
        missing.size == 0,
        witness,
        {"size": len(T), "scanned": int(outside.shape[0]), "uncovered": int(missing.size)},
        (time.perf_counter() - t0) * 1e3,
    )


# -- clique search -------------------------------------------------------------------


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchResult:
    size: int
    points: PointSet
    optimal: bool
    nodes: int

    def to_json(self):
        return {"size": self.size, "optimal": self.optimal, "nodes": self.nodes}


def _color_sort(R: int, adj):
    order, colors = [], []
    U = R
    k = 0
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~adj[v]
            Q &= ~low
            U &= ~low
            order.append(v)
            colors.append(k)
    return order, colors


def max_clique(adj, budget: int = 10**7, target: int | None = None, forced=()):
    """Branch and bound with greedy-colouring bounds over int bitsets.

    Returns ``(clique, optimal, nodes)``; ``optimal`` is False if the node
    budget ran out or the search stopped at ``target``.
    """
    n = len(adj)
    best: list[int] = []
    nodes = 0
    R0 = (1 << n) - 1
    base = list(forced)
    for v in base:
        R0 &= adj[v]
    stop_at = target

    def expand(R, clique):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded
        order, colors = _color_sort(R, adj)
        for idx in range(len(order) - 1, -1, -1):
            if len(clique) + colors[idx] <= len(best):
                return
            v = order[idx]
            newR = R & adj[v]
            clique.append(v)
            if newR:
                expand(newR, clique)
            elif len(clique) > len(best):
                best = list(clique)
                if stop_at is not None and len(best) >= stop_at:
                    raise StopIteration
            clique.pop()
            R &= ~(1 << v)

    optimal = True
    try:
        if R0:
            expand(R0, list(base))
        elif len(base) > len(best):
            best = list(base)
    except BudgetExceeded:
        optimal = False
    except StopIteration:
        optimal = False
    return best, optimal, nodes


def max_partial_ovoid_search(
    form: SesquiForm,
    budget: int = 10**7,
    target: int | None = None,
    use_symmetry: bool = False,
    exact_limit: int = 5000,
) -> SearchResult:
    """Largest set of pairwise non-perpendicular absolute points.

    Vertices are ordered by descending degree, ties by point encoding.  With
    ``use_symmetry`` (symplectic spaces only) the search fixes one point and
    one neighbour of it; the symplectic group is transitive on pairs of
    non-perpendicular points, so this loses no optimum.  A search stopped at
    ``target`` reports ``optimal=False`` unless the target equals the bound
    it reached.
    """
    F = form.F
    pts = PolarSpace(form).points()
    if pts.shape[0] > exact_limit:
        raise PreconditionError(f"{pts.shape[0]} points exceed the exact-search limit {exact_limit}")
    H = form.values(pts, pts) != 0
    np.fill_diagonal(H, False)
    deg = H.sum(axis=1)
    order = np.lexsort((np.arange(len(pts)), -deg))
    H = H[np.ix_(order, order)]
    pts = pts[order]
    weights = 1 << np.arange(len(pts), dtype=object)
    adj = [int(weights[row].sum()) if row.any() else 0 for row in H]
    forced = ()
    if use_symmetry:
        if form.kind != "symplectic":
            raise PreconditionError("symmetry reduction assumes a symplectic space")
        nb = int(np.nonzero(H[0])[0][0])
        forced = (0, nb)
    clique, optimal, nodes = max_clique(adj, budget=budget, target=target, forced=forced)
    S = PointSet(F, pts[clique], {"construction": "clique-search", "space": repr(PolarSpace(form))})
    return SearchResult(len(clique), S, optimal, nodes)

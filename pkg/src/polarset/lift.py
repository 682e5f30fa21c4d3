"""Cone lift of a tangent-set of H(2n-1,q^2) to a partial ovoid of H(2n,q^2)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cubic import ConsistencyError
from .forms import SesquiForm, hermitian
from .geom import normalize
from .pointset import PointSet
from .verify import is_maximal_partial_ovoid, is_partial_ovoid, is_tangent_set


@dataclass(eq=False)
class LiftFrame:
    """H(2n,q^2) with Gram diag(G, g); the apex is the last unit point, its polar is X_{2n+1} = 0."""

    base: SesquiForm
    form: SesquiForm
    g: int

    @property
    def F(self):
        return self.form.F

    @property
    def apex(self):
        P = np.zeros(self.form.dim, dtype=np.int64)
        P[-1] = 1
        return P

    def embed_points(self, P):
        P = np.atleast_2d(P)
        return np.concatenate([P, np.zeros((P.shape[0], 1), dtype=np.int64)], axis=1)


def make_frame(base: SesquiForm, g: int = 1) -> LiftFrame:
    F = base.F
    if g == 0 or not F.in_subfield(g, F.k // 2):
        raise ValueError("g must be a nonzero element of the subfield")
    m = base.dim
    G = np.zeros((m + 1, m + 1), dtype=np.int64)
    G[:m, :m] = base.gram
    G[m, m] = g
    return LiftFrame(base, hermitian(F, G), g)


def line_points_on_variety(frame: LiftFrame, R):
    """Absolute points of the line <apex, R> for R in the apex's polar hyperplane."""
    F = frame.F
    R = frame.embed_points(R)[0]
    if frame.form.is_absolute(R)[0]:
        return R[None]
    lam = F.elements()
    pts = F.add(R[None, :], F.mul(lam[:, None], frame.apex[None, :]))
    return normalize(F, pts[frame.form.is_absolute(pts)])


def cone_lift(frame: LiftFrame, T: PointSet, check_maximal: bool = False, verify_input: bool = True) -> PointSet:
    F = frame.F
    q = frame.form.sub_q
    if verify_input:
        rep = is_tangent_set(T, frame.base)
        if not rep.passed:
            raise ConsistencyError("input is not a tangent-set", witness=rep.witness)
    on_h = frame.base.is_absolute(T.points)
    parts = []
    for R, absolute in zip(T.points, on_h):
        pts = line_points_on_variety(frame, R)
        want = 1 if absolute else q + 1
        if len(pts) != want:
            raise ConsistencyError(f"line through {R.tolist()} meets the variety in {len(pts)} points")
        parts.append(pts)
    O = PointSet(
        F,
        np.concatenate(parts),
        {**T.provenance, "construction": "cone-lift", "source_digest": T.digest(), "g": frame.g},
    )
    expected = (q + 1) * int((~on_h).sum()) + int(on_h.sum())
    if len(O) != expected:
        raise ConsistencyError(f"lift has {len(O)} points, expected {expected}")
    rep = is_partial_ovoid(O, frame.form)
    if not rep.passed:
        raise ConsistencyError("lift is not a partial ovoid", witness=rep.witness)
    if check_maximal:
        rep = is_maximal_partial_ovoid(O, frame.form)
        if not rep.passed:
            raise ConsistencyError("lift is not maximal", witness=rep.witness)
    return O


def size_law(x: int, y: int, q: int) -> int:
    return x * q * q + y


def lifted_size(x: int, y: int, q: int) -> int:
    """The two-step count: the tangent-set has xq + y points, of which the x + y
    seed points lie on the variety and keep one point each."""
    t = x * q + y
    on = x + y
    return (q + 1) * (t - on) + on

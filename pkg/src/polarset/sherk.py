"""Sherk surfaces of PG(1,q^3) and pencils of them.

A surface S(alpha, beta, gamma, delta) with alpha, delta in GF(q) and
beta, gamma in GF(q^3) is the set of x in GF(q^3) with

    alpha N(x) + T(beta^(q^2) x^(q+1)) + T(gamma x) + delta = 0,

together with the point at infinity when alpha = 0 (the leading coefficient of
the cubic vanishes).  N and T are the norm and trace down to GF(q).  The point
at infinity is encoded as the integer q^3.  All coefficients are stored as
GF(q^3) encodings.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cache

import numpy as np

from .gf import FieldSpec, embed, field_of_order
from .verify import VerificationReport


class SherkError(ValueError):
    pass


@cache
def _fields(q: int):
    return field_of_order(q), field_of_order(q**3)


@dataclass(frozen=True)
class SherkSurface:
    q: int
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        F, F3 = _fields(self.q)
        if not (self.alpha or self.beta or self.gamma or self.delta):
            raise SherkError("all coefficients are zero")
        for name in ("alpha", "delta"):
            v = getattr(self, name)
            if not F3.in_subfield(v, F.k):
                raise SherkError(f"{name} must lie in GF({self.q})")

    @classmethod
    def from_base(cls, q, alpha, beta, gamma, delta):
        """alpha and delta given as GF(q) encodings."""
        F, F3 = _fields(q)
        return cls(q, int(embed(alpha, F, F3)), beta, gamma, int(embed(delta, F, F3)))

    @property
    def F3(self) -> FieldSpec:
        return _fields(self.q)[1]

    @property
    def inf(self) -> int:
        return self.q**3

    def values(self, x=None):
        """The defining polynomial at finite points (all of GF(q^3) by default)."""
        F3 = self.F3
        k = _fields(self.q)[0].k
        x = F3.elements() if x is None else np.asarray(x, dtype=np.int64)
        q = self.q
        t1 = F3.mul(self.alpha, F3.norm(x, k))
        t2 = F3.trace(F3.mul(F3.pow(self.beta, q * q), F3.pow(x, q + 1)), k)
        t3 = F3.trace(F3.mul(self.gamma, x), k)
        return F3.add(F3.add(t1, t2), F3.add(t3, self.delta))

    def points(self) -> frozenset:
        x = self.F3.elements()
        pts = {int(v) for v in x[self.values(x) == 0]}
        if self.alpha == 0:
            pts.add(self.inf)
        return frozenset(pts)

    def __len__(self):
        return len(self.points())

    def coeffs(self):
        return np.array([self.alpha, self.beta, self.gamma, self.delta], dtype=np.int64)

    def combine(self, other: SherkSurface, lam: int, mu: int) -> SherkSurface:
        """lam S1 + mu S2, coefficient-wise (lam, mu in GF(q), as GF(q^3) encodings)."""
        F3 = self.F3
        c = F3.add(F3.mul(lam, self.coeffs()), F3.mul(mu, other.coeffs()))
        return SherkSurface(self.q, *(int(v) for v in c))

    def proportional(self, other: SherkSurface) -> bool:
        F3 = self.F3
        a, b = self.coeffs(), other.coeffs()
        i = int(np.nonzero(a)[0][0])
        if b[i] == 0:
            return False
        r = F3.div(b[i], a[i])
        return bool(np.array_equal(F3.mul(r, a), b)) and bool(F3.in_subfield(r, _fields(self.q)[0].k))


def sherk_points(S: SherkSurface) -> frozenset:
    return S.points()


def legal_sizes(q: int):
    return {1, q * q - q + 1, q * q + 1, q * q + q + 1}


@dataclass(frozen=True)
class SherkPencil:
    S1: SherkSurface
    S2: SherkSurface
    members: tuple

    @property
    def q(self):
        return self.S1.q


def pencil(S1: SherkSurface, S2: SherkSurface) -> SherkPencil:
    """The q+1 surfaces S1 + lam S2 (lam in GF(q)) and S2."""
    if S1.proportional(S2):
        raise SherkError("the generators are proportional")
    F, F3 = _fields(S1.q)
    lams = embed(F.elements(), F, F3)
    members = tuple(S1.combine(S2, 1, int(lam)) for lam in lams) + (S2,)
    return SherkPencil(S1, S2, members)


def base_locus(P: SherkPencil) -> frozenset:
    out = P.members[0].points()
    for S in P.members[1:]:
        out &= S.points()
    return out


# -- the base-locus lemma ---------------------------------------------------------------


def _cube_roots(F3: FieldSpec, k: int, v: int):
    """c in GF(q)^* with c^3 = v (as GF(q^3) encodings)."""
    c = F3.nonzero()
    c = c[F3.in_subfield(c, k)]
    return c[F3.pow(c, 3) == v]


def hypotheses(q: int, beta: int, gamma: int, reading: str = "all"):
    """Which of the three sufficient conditions hold for (beta, gamma).

    The third condition names a cube root c of N(beta).  When q = 1 mod 3 there
    are three of them; ``reading="all"`` asks gamma beta != -c^2 for every root,
    ``reading="any"`` for at least one.
    """
    F, F3 = _fields(q)
    k = F.k
    h1 = F3.mul(beta, gamma) == 0
    nb = int(F3.norm(beta, k))
    roots = _cube_roots(F3, k, nb) if nb else np.zeros(0, dtype=np.int64)
    h2 = roots.size == 0
    gb = int(F3.mul(gamma, beta))
    ok = gb != F3.neg(F3.pow(roots, 2))
    if roots.size == 0:
        h3 = False
    elif reading == "all":
        h3 = bool(ok.all())
    elif reading == "any":
        h3 = bool(ok.any())
    else:
        raise ValueError(f"unknown reading {reading!r}")
    return bool(h1), bool(h2), h3


def lemma_sherk_scan(q: int, reading: str = "all") -> VerificationReport:
    """For every (beta, gamma) != (0, 0) meeting a hypothesis, the pencil of
    S(1,0,0,-1) and S(0,beta,gamma,0) has a nonempty base locus."""
    if q > 4:
        raise SherkError("the scan is exhaustive; q <= 4 only")
    t0 = time.perf_counter()
    F, F3 = _fields(q)
    k = F.k
    x = F3.elements()
    one = 1
    # f0[b, g, x] = T(b^q^2 x^(q+1)) + T(g x); members: S(0,b,g,0) and S(1, l b, l g, -1)
    B = F3.trace(F3.mul(F3.pow(x, q * q)[:, None], F3.pow(x, q + 1)[None, :]), k)
    C = F3.trace(F3.mul(x[:, None], x[None, :]), k)
    Nm1 = F3.sub(F3.norm(x, k), one)
    lams = embed(F.elements(), F, F3)
    checked = qualifying = 0
    witness = None
    for b in x:
        f0 = F3.add(B[b][None, :], C)  # (gamma, x)
        in_all = f0 == 0  # member S(0,b,g,0) at finite points
        for lam in lams:
            in_all &= F3.add(Nm1[None, :], F3.mul(lam, f0)) == 0
        # infinity lies on S(0,...) only, never on S(1,...)
        nonempty = in_all.any(axis=1)
        for g in x:
            if b == 0 and g == 0:
                continue
            checked += 1
            if not any(hypotheses(q, int(b), int(g), reading)):
                continue
            qualifying += 1
            if not nonempty[g] and witness is None:
                witness = {"beta": int(b), "gamma": int(g)}
    return VerificationReport(
        "sherk-base-locus",
        {"q": q, "reading": reading},
        witness is None,
        witness,
        {"pairs": checked, "qualifying": qualifying},
        (time.perf_counter() - t0) * 1e3,
    )


def all_surfaces(q: int):
    """Every coefficient tuple (alpha, beta, gamma, delta) != 0 as an int array."""
    F, F3 = _fields(q)
    sub = embed(F.elements(), F, F3)
    big = F3.elements()
    g = np.stack(np.meshgrid(sub, big, big, sub, indexing="ij"), axis=-1).reshape(-1, 4)
    return g[np.any(g != 0, axis=1)]


def surface_sizes(q: int, coeffs=None):
    """Sizes |S| for many coefficient tuples at once."""
    F, F3 = _fields(q)
    k = F.k
    coeffs = all_surfaces(q) if coeffs is None else np.asarray(coeffs)
    x = F3.elements()
    N = F3.norm(x, k)
    xq1 = F3.pow(x, q + 1)
    a, b, g, d = coeffs.T
    vals = F3.add(
        F3.add(F3.mul(a[:, None], N[None, :]), F3.trace(F3.mul(F3.pow(b, q * q)[:, None], xq1[None, :]), k)),
        F3.add(F3.trace(F3.mul(g[:, None], x[None, :]), k), d[:, None]),
    )
    return (vals == 0).sum(axis=1) + (a == 0)

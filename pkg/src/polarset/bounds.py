"""Known lower and upper bounds on partial ovoid sizes, evaluated exactly.

Every value is computed in integer arithmetic.  Bounds containing an
irrational square root are floored and flagged ``floored=True``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import asdict, dataclass

SPACES = ("W(3,q)", "W(5,q)", "W(7,q)", "H(4,q^2)", "H(6,q^2)", "H(8,q^2)")


@dataclass(frozen=True)
class BoundEntry:
    space: str
    kind: str  # "lower" | "upper"
    formula: str
    condition: str
    value: int
    source: str  # "construction" for sizes built by this package, else "literature"
    floored: bool = False

    def to_json(self):
        return asdict(self)


def _factor(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise ValueError("q must be a prime power")
            return p, k
    raise ValueError("q must be a prime power")


def _isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


def _even_power(q):
    _, k = _factor(q)
    return k % 2 == 0


def _odd_square_not3(q):
    p, k = _factor(q)
    return p not in (2, 3) and k % 2 == 0


def _w3_cubic(q):
    s = math.isqrt(q)
    num = s**3 + 3 * q - s + 3
    if num % 3:
        raise ArithmeticError(f"{num} is not divisible by 3")
    return num // 3


def _w5_upper(q):
    """(q sqrt(5q^4+6q^3+7q^2+6q+1) - q^3 - q^2 - q + 2) / 2, floored."""
    R = 5 * q**4 + 6 * q**3 + 7 * q**2 + 6 * q + 1
    root = math.isqrt(q * q * R)
    exact = root * root == q * q * R
    return (root - (q**3 + q**2 + q - 2)) // 2, not exact or (root - (q**3 + q**2 + q - 2)) % 2 != 0


def _w7_upper(q):
    """q^4 - q^3 - q (sqrt q - 1)(q - sqrt q + 1) + 3 = A - sqrt(q) (q^2 + 2q), floored."""
    A = q**4 - q**3 + 2 * q**2 + q + 3
    sq = q * (q * q + 2 * q) ** 2
    r = math.isqrt(sq)
    ceil_root = r if r * r == sq else r + 1
    return A - ceil_root, r * r != sq


def _h4_lift_cubic(q):
    s = math.isqrt(q)
    num = s**7 + 3 * q**3 - s**5 + 3 * q**2
    if num % 3:
        raise ArithmeticError(f"{num} is not divisible by 3")
    return num // 3


@dataclass(frozen=True)
class _Row:
    space: str
    kind: str
    formula: str
    condition: str
    applies: Callable[[int], bool]
    value: Callable[[int], int]
    source: str
    irrational: bool = False


def _p(q):
    return _factor(q)[0]


ROWS = (
    _Row("W(3,q)", "lower", "q^2+1", "q even", lambda q: q % 2 == 0, lambda q: q * q + 1, "literature"),
    _Row("W(3,q)", "upper", "q^2+1", "q even", lambda q: q % 2 == 0, lambda q: q * q + 1, "literature"),
    _Row("W(3,q)", "lower", "(q^(3/2)+3q-q^(1/2)+3)/3", "q an odd square, 3 does not divide q",
         _odd_square_not3, _w3_cubic, "construction"),
    _Row("W(3,q)", "lower", "2q+1", "q odd, q an odd power of p or a power of 3",
         lambda q: q % 2 == 1 and (not _even_power(q) or _p(q) == 3), lambda q: 2 * q + 1, "literature"),
    _Row("W(3,q)", "upper", "q^2-q+1", "q odd", lambda q: q % 2 == 1, lambda q: q * q - q + 1, "literature"),
    _Row("W(5,q)", "lower", "2q^2-q+1", "q even", lambda q: q % 2 == 0, lambda q: 2 * q * q - q + 1, "construction"),
    _Row("W(5,q)", "lower", "q^2+q+1", "q odd", lambda q: q % 2 == 1, lambda q: q * q + q + 1, "construction"),
    _Row("W(5,q)", "lower", "7", "q = 2", lambda q: q == 2, lambda q: 7, "literature"),
    _Row("W(5,q)", "upper", "(q sqrt(5q^4+6q^3+7q^2+6q+1)-q^3-q^2-q+2)/2", "all q",
         lambda q: True, lambda q: _w5_upper(q)[0], "literature", irrational=True),
    _Row("W(5,q)", "upper", "7", "q = 2", lambda q: q == 2, lambda q: 7, "literature"),
    _Row("W(7,q)", "lower", "q^3+1", "all q", lambda q: True, lambda q: q**3 + 1, "literature"),
    _Row("W(7,q)", "upper", "q^4-q^3-q(sqrt q-1)(q-sqrt q+1)+3", "q > 2",
         lambda q: q > 2, lambda q: _w7_upper(q)[0], "literature", irrational=True),
    _Row("W(7,q)", "upper", "9", "q = 2", lambda q: q == 2, lambda q: 9, "literature"),
    _Row("H(4,q^2)", "lower", "q^4+1", "q even", lambda q: q % 2 == 0, lambda q: q**4 + 1, "construction"),
    _Row("H(4,q^2)", "lower", "q^4+1", "q a power of 3", lambda q: _p(q) == 3, lambda q: q**4 + 1, "literature"),
    _Row("H(4,q^2)", "lower", "(q^(7/2)+3q^3-q^(5/2)+3q^2)/3", "q an odd square, 3 does not divide q",
         _odd_square_not3, _h4_lift_cubic, "construction"),
    _Row("H(4,q^2)", "lower", "2q^3+q^2+1", "q an odd power of p, p not 2 or 3",
         lambda q: _p(q) not in (2, 3) and not _even_power(q), lambda q: 2 * q**3 + q * q + 1, "literature"),
    _Row("H(4,q^2)", "upper", "q^5-q^4+q^3+1", "all q", lambda q: True, lambda q: q**5 - q**4 + q**3 + 1, "literature"),
    _Row("H(6,q^2)", "lower", "2q^4-q^3+1", "q even", lambda q: q % 2 == 0, lambda q: 2 * q**4 - q**3 + 1, "construction"),
    _Row("H(6,q^2)", "lower", "q^4+q^3+1", "q odd", lambda q: q % 2 == 1, lambda q: q**4 + q**3 + 1, "construction"),
    _Row("H(6,q^2)", "upper", "q^7-q^6+q^5-q^3+2", "all q", lambda q: True,
         lambda q: q**7 - q**6 + q**5 - q**3 + 2, "literature"),
    _Row("H(8,q^2)", "lower", "q^5+1", "all q", lambda q: True, lambda q: q**5 + 1, "construction"),
    _Row("H(8,q^2)", "upper", "q^9-q^8+q^7-q^5-q^3+q^2+1", "all q", lambda q: True,
         lambda q: q**9 - q**8 + q**7 - q**5 - q**3 + q**2 + 1, "literature"),
)


def _normalize_space(space: str) -> str:
    s = space.replace(" ", "")
    for name in SPACES:
        if s in (name, name.split(",")[0] + ")", name.replace("(", "").split(",")[0]):
            return name
    raise ValueError(f"unknown space {space!r}; choose from {SPACES}")


def _floored(row: _Row, q: int) -> bool:
    if not row.irrational:
        return False
    if row.space == "W(5,q)":
        return _w5_upper(q)[1]
    return _w7_upper(q)[1]


def evaluate(space: str, q: int) -> list[BoundEntry]:
    """Every table row for ``space`` whose condition holds at q."""
    _factor(q)
    name = _normalize_space(space)
    out = []
    for row in ROWS:
        if row.space != name or not row.applies(q):
            continue
        out.append(BoundEntry(name, row.kind, row.formula, row.condition, row.value(q), row.source, _floored(row, q)))
    return out


def best(space: str, q: int, kind: str) -> int | None:
    vals = [e.value for e in evaluate(space, q) if e.kind == kind]
    if not vals:
        return None
    return max(vals) if kind == "lower" else min(vals)


def construction_sizes(q: int) -> dict:
    """Sizes of every set built in this package at q, keyed by construction name.

    Entries whose construction does not apply at q are omitted.
    """
    out = {}
    odd_sq = _odd_square_not3(q)
    if odd_sq:
        out["w3-cubic"] = _w3_cubic(q)
        out["tangent-set H(3) from w3-cubic"] = q * _w3_cubic(q)
        out["lift H(4) from w3-cubic"] = _h4_lift_cubic(q)
    out["w5-orbit"] = q * q + q + 1
    out["tangent-set H(5) from w5-orbit"] = q**3 + q * q + 1
    out["lift H(6) from w5-orbit"] = q**4 + q**3 + 1
    out["tangent-set H(7) from q^3+1 seed"] = q**4 + 1
    out["lift H(8) from q^3+1 seed"] = q**5 + 1
    if q % 2 == 0:
        out["w3-ovoid"] = q * q + 1
        out["w5-even"] = 2 * q * q - q + 1
        out["tangent-set H(3) tangent point"] = q**3 + 1
        out["tangent-set H(3) secant conic"] = q**3 - q * q + q + 1
        out["lift H(4) tangent point"] = q**4 + 1
        out["lift H(4) secant conic"] = q**4 - q**3 + q + 1
        out["tangent-set H(5) from w5-even"] = 2 * q**3 - q * q + 1
        out["lift H(6) from w5-even"] = 2 * q**4 - q**3 + 1
    return out


def format_table(q: int) -> str:
    lines = [f"bounds at q = {q}"]
    width = max(len(s) for s in SPACES)
    for space in SPACES:
        for e in evaluate(space, q):
            flag = " (floored)" if e.floored else ""
            lines.append(f"{space:<{width}}  {e.kind:<5}  {e.value:>12}{flag}  {e.formula}  [{e.condition}; {e.source}]")
    return "\n".join(lines)

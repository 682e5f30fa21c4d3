"""Finite fields GF(p^k) with integer encodings and vectorised table arithmetic.

An element is encoded as ``enc = sum(c[i] * p**i)`` where ``c`` are the
coefficients of its residue polynomial modulo the Conway polynomial.  All
arithmetic works on plain ints or numpy integer arrays of encodings, backed by
exp/log/Zech tables of a primitive element.  Enumeration order is ascending
encoding everywhere.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .conway import load_table

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)
MAX_ORDER = 2**20


class FieldConfigError(ValueError):
    """Unsupported (p, k) or missing Conway table entry."""


class FieldDomainError(ValueError):
    """Operation undefined for the given argument or field."""


class FieldSpec:
    """The field GF(p^k) defined by a monic irreducible ``modulus``.

    Instances built through :func:`make_field` are canonical (Conway modulus)
    and cached, so two fields with equal ``(p, k)`` are the same object.
    """

    def __init__(self, p: int, k: int, modulus, canonical: bool = True):
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldConfigError(f"modulus for GF({p}^{k}) must be monic of degree {k}")
        if p**k > MAX_ORDER:
            raise FieldConfigError(f"GF({p}^{k}) exceeds 2^20 elements")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.canonical = canonical
        self._pows = np.array([p**i for i in range(k)], dtype=np.int64)
        self.digits = (np.arange(self.q, dtype=np.int64)[:, None] // self._pows) % p
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _mul_poly(self, a, b):
        p, k, m = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for i in range(k + 1):
                    prod[d - k + i] = (prod[d - k + i] - c * m[i]) % p
        return prod[:k]

    def _enc(self, coeffs):
        return int(sum(c * int(w) for c, w in zip(coeffs, self._pows)))

    def _cycle(self, gen):
        """Powers of ``gen`` until they return to 1; encodings in order."""
        one = [1] + [0] * (self.k - 1)
        seq = [1]
        cur = one
        g = [int(d) for d in self.digits[gen]]
        for _ in range(self.q):
            cur = self._mul_poly(cur, g)
            if cur == one:
                return seq
            seq.append(self._enc(cur))
        return seq

    def _build_tables(self):
        q = self.q
        if q == 2:
            exp = [1]
        else:
            # X is primitive for a Conway modulus; a foreign modulus may need a search.
            exp = None
            x_enc = self.p if self.k > 1 else (-self.modulus[0]) % self.p
            for gen in [x_enc] + [g for g in range(2, q) if g != x_enc]:
                seq = self._cycle(gen)
                if len(seq) == q - 1 and len(set(seq)) == q - 1:
                    exp = seq
                    self.generator_enc = gen
                    break
            if exp is None:
                raise FieldConfigError(
                    f"modulus {self.modulus} is reducible over GF({self.p})"
                )
        if q == 2:
            self.generator_enc = 1
        qm1 = q - 1
        self.qm1 = qm1
        e = np.array(exp, dtype=np.int64)
        self.exp = np.concatenate([e, e])
        log = np.full(q, -1, dtype=np.int64)
        log[e] = np.arange(qm1, dtype=np.int64)
        self.log = log
        if self.p == 2:
            self.zech = np.zeros(qm1, dtype=np.int64)
        else:
            s = self._add_digits(np.ones(qm1, dtype=np.int64), e)
            self.zech = np.where(s == 0, -1, log[s])

    def _add_digits(self, a, b):
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self._pows

    # -- vectorised arithmetic on encodings ----------------------------------

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        la = self.log[a]
        lb = self.log[b]
        z = self.zech[(lb - la) % self.qm1]
        out = np.where(z < 0, 0, self.exp[(la + z) % self.qm1])
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return np.where(a == 0, 0, self.exp[(self.log[a] + self.qm1 // 2) % self.qm1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % self.qm1]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % self.qm1]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if e < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        out = self.exp[(self.log[a] * (e % self.qm1)) % self.qm1]
        return np.where(a == 0, 0, out)

    def frob(self, a, i: int = 1):
        """x -> x^(p^i)."""
        return self.pow(a, self.p ** (i % self.k))

    def sum(self, arr, axis=None):
        arr = np.asarray(arr, dtype=np.int64)
        if axis is None:
            arr = arr.reshape(-1)
            axis = 0
        arr = np.moveaxis(arr, axis, 0)
        acc = np.zeros(arr.shape[1:], dtype=np.int64)
        for row in arr:
            acc = self.add(acc, row)
        return acc

    def prod(self, arr, axis=None):
        arr = np.asarray(arr, dtype=np.int64)
        if axis is None:
            arr = arr.reshape(-1)
            axis = 0
        arr = np.moveaxis(arr, axis, 0)
        acc = np.ones(arr.shape[1:], dtype=np.int64)
        for row in arr:
            acc = self.mul(acc, row)
        return acc

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return int(n) % self.p

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self):
        return np.arange(1, self.q, dtype=np.int64)

    def generator(self) -> FieldElem:
        return FieldElem(self, self.generator_enc)

    def __call__(self, enc) -> FieldElem:
        if isinstance(enc, FieldElem):
            return enc
        enc = int(enc)
        if not 0 <= enc < self.q:
            raise FieldDomainError(f"encoding {enc} out of range for GF({self.q})")
        return FieldElem(self, enc)

    def subfield_order(self, d: int) -> int:
        if self.k % d:
            raise FieldDomainError(f"GF({self.p}^{d}) is not a subfield of GF({self.q})")
        return self.p**d

    def norm(self, a, d: int):
        """Relative norm to GF(p^d), as encodings of this field."""
        s = self.subfield_order(d)
        return self.pow(a, (self.q - 1) // (s - 1))

    def trace(self, a, d: int):
        """Relative trace to GF(p^d), as encodings of this field."""
        s = self.subfield_order(d)
        a = np.asarray(a, dtype=np.int64)
        acc = a
        cur = a
        for _ in range(self.k // d - 1):
            cur = self.pow(cur, s)
            acc = self.add(acc, cur)
        return acc

    def in_subfield(self, a, d: int):
        s = self.subfield_order(d)
        a = np.asarray(a, dtype=np.int64)
        return self.pow(a, s) == a

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class FieldElem:
    field: FieldSpec
    enc: int

    @property
    def coeffs(self):
        return tuple(int(c) for c in self.field.digits[self.enc])

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise FieldDomainError("elements of different fields")
            return other.enc
        return self.field.from_int(other)

    def __add__(self, other):
        return FieldElem(self.field, int(self.field.add(self.enc, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, int(self.field.sub(self.enc, self._other(other))))

    def __rsub__(self, other):
        return FieldElem(self.field, int(self.field.sub(self._other(other), self.enc)))

    def __neg__(self):
        return FieldElem(self.field, int(self.field.neg(self.enc)))

    def __mul__(self, other):
        return FieldElem(self.field, int(self.field.mul(self.enc, self._other(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, int(self.field.div(self.enc, self._other(other))))

    def __pow__(self, e: int):
        return FieldElem(self.field, int(self.field.pow(self.enc, e)))

    def inverse(self):
        return FieldElem(self.field, int(self.field.inv(self.enc)))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return other.field is self.field and other.enc == self.enc
        if isinstance(other, int):
            return self.enc == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.enc))

    def __bool__(self):
        return self.enc != 0

    def __int__(self):
        return self.enc

    def __repr__(self):
        return f"{self.field!r}({self.enc})"


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Canonical GF(p^k) from the built-in Conway table (one shared instance per order)."""
    return _make_field(int(p), int(k))


@functools.cache
def _make_field(p: int, k: int) -> FieldSpec:
    if p not in SUPPORTED_PRIMES:
        raise FieldConfigError(f"characteristic {p} not supported (use one of {SUPPORTED_PRIMES})")
    if k < 1:
        raise FieldConfigError("extension degree must be >= 1")
    if p**k > MAX_ORDER:
        raise FieldConfigError(f"GF({p}^{k}) exceeds 2^20 elements")
    table = load_table()
    if (p, k) not in table:
        raise FieldConfigError(f"no Conway polynomial for (p={p}, k={k}) in the built-in table")
    return FieldSpec(p, k, table[(p, k)], canonical=True)


def field_of_order(q: int) -> FieldSpec:
    for p in SUPPORTED_PRIMES:
        k = round(math.log(q, p))
        if k >= 1 and p**k == q:
            return make_field(p, k)
    raise FieldConfigError(f"{q} is not a supported prime power")


def make_foreign_field(p: int, k: int, modulus) -> FieldSpec:
    """Field from an arbitrary monic irreducible modulus (no subfield embeddings)."""
    table = load_table()
    if table.get((p, k)) == tuple(int(c) % p for c in modulus):
        return make_field(p, k)
    warnings.warn(
        f"modulus {tuple(modulus)} for GF({p}^{k}) differs from the Conway table; "
        "subfield embeddings are disabled",
        stacklevel=2,
    )
    return FieldSpec(p, k, modulus, canonical=False)


# -- towers ------------------------------------------------------------------


@functools.cache
def _embedding(sub: FieldSpec, big: FieldSpec) -> np.ndarray:
    if not (sub.canonical and big.canonical):
        raise FieldDomainError("subfield embeddings need canonical (Conway) fields")
    if sub.p != big.p or big.k % sub.k:
        raise FieldDomainError(f"{sub!r} does not embed in {big!r}")
    r = (big.q - 1) // (sub.q - 1)
    emb = np.zeros(sub.q, dtype=np.int64)
    nz = sub.nonzero()
    emb[nz] = big.exp[(sub.log[nz] * r) % big.qm1]
    # image of the subfield generator must be a root of the subfield's modulus
    root = int(emb[sub.generator_enc])
    acc = 0
    for i, c in enumerate(sub.modulus):
        acc = int(big.add(acc, big.mul(int(emb[c]), big.pow(root, i))))
    if acc != 0:
        raise FieldDomainError(f"incompatible moduli for {sub!r} -> {big!r}")
    return emb


@functools.cache
def _projection(sub: FieldSpec, big: FieldSpec) -> np.ndarray:
    emb = _embedding(sub, big)
    proj = np.full(big.q, -1, dtype=np.int64)
    proj[emb] = np.arange(sub.q, dtype=np.int64)
    return proj


class FieldTower:
    """A chain of canonical fields, each a subfield of the next."""

    def __init__(self, levels):
        self.levels = tuple(levels)
        for a, b in zip(self.levels, self.levels[1:]):
            _embedding(a, b)

    def embed_array(self, a, sub: FieldSpec, big: FieldSpec):
        return _embedding(sub, big)[np.asarray(a, dtype=np.int64)]

    def project_array(self, a, big: FieldSpec, sub: FieldSpec):
        out = _projection(sub, big)[np.asarray(a, dtype=np.int64)]
        if np.any(out < 0):
            raise FieldDomainError(f"element not in the subfield {sub!r}")
        return out

    def embed(self, x: FieldElem, big: FieldSpec) -> FieldElem:
        return FieldElem(big, int(_embedding(x.field, big)[x.enc]))

    def project(self, y: FieldElem, sub: FieldSpec) -> FieldElem:
        return FieldElem(sub, int(self.project_array(y.enc, y.field, sub)))


def embed(a, sub: FieldSpec, big: FieldSpec):
    """Embed encodings of ``sub`` into ``big``."""
    return _embedding(sub, big)[np.asarray(a, dtype=np.int64)]


def project(a, big: FieldSpec, sub: FieldSpec):
    """Inverse of :func:`embed`; raises if an element lies outside ``sub``."""
    out = _projection(sub, big)[np.asarray(a, dtype=np.int64)]
    if np.any(out < 0):
        raise FieldDomainError(f"element not in the subfield {sub!r}")
    return out


# -- element-level helpers ------------------------------------------------------


def frobenius(x: FieldElem, i: int) -> FieldElem:
    return FieldElem(x.field, int(x.field.frob(x.enc, i)))


def rel_norm(x: FieldElem, sub: FieldSpec) -> FieldElem:
    F = x.field
    if F.k % sub.k:
        raise FieldDomainError(f"{sub!r} is not a subfield of {F!r}")
    return FieldElem(sub, int(project(F.norm(x.enc, sub.k), F, sub)))


def rel_trace(x: FieldElem, sub: FieldSpec) -> FieldElem:
    F = x.field
    if F.k % sub.k:
        raise FieldDomainError(f"{sub!r} is not a subfield of {F!r}")
    return FieldElem(sub, int(project(F.trace(x.enc, sub.k), F, sub)))


def char2_sqrt(x: FieldElem) -> FieldElem:
    F = x.field
    if F.p != 2:
        raise FieldDomainError("char2_sqrt needs characteristic 2")
    return FieldElem(F, int(F.pow(x.enc, 2 ** (F.k - 1))))


def sqrt_char2_array(F: FieldSpec, a):
    if F.p != 2:
        raise FieldDomainError("char2_sqrt needs characteristic 2")
    return F.pow(a, 2 ** (F.k - 1))


def is_cube(x: FieldElem) -> bool:
    if x.enc == 0:
        raise FieldDomainError("is_cube is undefined at 0")
    F = x.field
    g = math.gcd(3, F.q - 1)
    return int(F.pow(x.enc, (F.q - 1) // g)) == 1


def absolute_trace(F: FieldSpec, a):
    """Trace to the prime field, as a prime-field integer array."""
    return F.trace(a, 1)

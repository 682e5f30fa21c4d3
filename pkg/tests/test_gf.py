"""Finite-field arithmetic checked against a plain-Python polynomial oracle."""


import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarset.conway import CONWAY
from polarset.gf import (
    FieldConfigError,
    FieldDomainError,
    FieldTower,
    char2_sqrt,
    embed,
    field_of_order,
    frobenius,
    is_cube,
    make_field,
    make_foreign_field,
    project,
    rel_norm,
    rel_trace,
)

# -- independent polynomial oracle --------------------------------------------------


def digits(enc, p, k):
    return [(enc // p**i) % p for i in range(k)]


def undigits(c, p):
    return sum(int(x) * p**i for i, x in enumerate(c))


def poly_mulmod(a, b, f, p):
    k = len(f) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * f[i]) % p
    return prod[:k]


def oracle_mul(a, b, F):
    return undigits(poly_mulmod(digits(a, F.p, F.k), digits(b, F.p, F.k), F.modulus, F.p), F.p)


def oracle_add(a, b, F):
    return undigits([(x + y) % F.p for x, y in zip(digits(a, F.p, F.k), digits(b, F.p, F.k))], F.p)


def x_power(e, f, p):
    """X^e mod f by square and multiply."""
    k = len(f) - 1
    one = [1] + [0] * (k - 1)
    x = ([0, 1] + [0] * k)[:k] if k > 1 else [(-f[0]) % p]
    out = one
    while e:
        if e & 1:
            out = poly_mulmod(out, x, f, p)
        x = poly_mulmod(x, x, f, p)
        e >>= 1
    return out


def prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


SMALL = [(p, k) for (p, k) in CONWAY if p**k <= 2**12]


@pytest.mark.parametrize("p,k", SMALL)
def test_conway_modulus_is_primitive(p, k):
    # X has order exactly p^k - 1, which forces irreducibility
    f = CONWAY[(p, k)]
    n = p**k - 1
    one = [1] + [0] * (k - 1)
    assert x_power(n, f, p) == one
    for r in prime_factors(n):
        assert x_power(n // r, f, p) != one


@pytest.mark.parametrize("p,k", [(p, k) for (p, k) in SMALL if k > 1])
def test_conway_compatibility(p, k):
    # X^((p^k-1)/(p^d-1)) is a root of the Conway polynomial of every subfield
    f = CONWAY[(p, k)]
    for d in range(1, k):
        if k % d:
            continue
        g = CONWAY[(p, d)]
        r = x_power((p**k - 1) // (p**d - 1), f, p)
        acc = [0] * k
        power = [1] + [0] * (k - 1)
        for c in g:
            acc = [(a + c * b) % p for a, b in zip(acc, power)]
            power = poly_mulmod(power, r, f, p)
        assert acc == [0] * k, (p, k, d)


def test_known_moduli():
    assert make_field(5, 2).modulus == (2, 4, 1)
    assert make_field(2, 1).q == 2


def test_field_errors():
    with pytest.raises(FieldConfigError):
        make_field(2, 21)
    with pytest.raises(FieldConfigError):
        make_field(17, 1)
    with pytest.raises(FieldConfigError):
        field_of_order(6)


def test_canonical_identity():
    assert make_field(2) is make_field(2, 1) is field_of_order(2)
    assert make_field(5, 2) is field_of_order(25)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81])
def test_arithmetic_matches_oracle(q):
    F = field_of_order(q)
    a, b = np.meshgrid(F.elements(), F.elements(), indexing="ij")
    a, b = a.ravel(), b.ravel()
    if a.size > 2000:
        sel = np.random.default_rng(q).choice(a.size, 2000, replace=False)
        a, b = a[sel], b[sel]
    mul = F.mul(a, b)
    add = F.add(a, b)
    for x, y, m, s in zip(a, b, mul, add):
        assert m == oracle_mul(int(x), int(y), F)
        assert s == oracle_add(int(x), int(y), F)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    e = F.elements()
    a, b, c = (x.ravel() for x in np.meshgrid(e, e, e, indexing="ij"))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    nz = F.nonzero()
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(e, F.neg(e)) == 0)


@pytest.mark.parametrize("q", [16, 27, 25, 49, 81])
def test_field_axioms_sampled(q):
    F = field_of_order(q)
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, q, size=(3, 5000))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))


@given(st.sampled_from([4, 8, 9, 16, 25, 27, 49, 64, 121, 125]), st.data())
def test_pow_matches_repeated_mul(q, data):
    F = field_of_order(q)
    a = data.draw(st.integers(0, q - 1))
    e = data.draw(st.integers(0, 3 * q))
    acc = 1
    for _ in range(e):
        acc = int(F.mul(acc, a))
    assert int(F.pow(a, e)) == acc


@given(st.sampled_from([(2, 1, 4), (2, 2, 4), (2, 1, 3), (3, 1, 2), (3, 2, 4), (5, 1, 2), (7, 1, 3), (2, 2, 6)]), st.data())
def test_embedding_is_homomorphism(spec, data):
    p, d, k = spec
    sub, big = make_field(p, d), make_field(p, k)
    x = data.draw(st.integers(0, sub.q - 1))
    y = data.draw(st.integers(0, sub.q - 1))
    ex, ey = embed(x, sub, big), embed(y, sub, big)
    assert embed(sub.add(x, y), sub, big) == big.add(ex, ey)
    assert embed(sub.mul(x, y), sub, big) == big.mul(ex, ey)
    assert embed(1, sub, big) == 1
    assert project(ex, big, sub) == x


@pytest.mark.parametrize("s,q", [(5, 25), (7, 49), (2, 4), (3, 9), (4, 16), (2, 8), (3, 27), (5, 125)])
def test_embed_project_round_trip(s, q):
    sub, big = field_of_order(s), field_of_order(q)
    e = sub.elements()
    img = embed(e, sub, big)
    assert len(set(img.tolist())) == s
    assert np.array_equal(project(img, big, sub), e)
    outside = np.setdiff1d(big.elements(), img)
    with pytest.raises(FieldDomainError):
        project(outside[:1], big, sub)
    assert set(img.tolist()) == set(np.nonzero(big.in_subfield(big.elements(), sub.k))[0].tolist())


def test_tower():
    T = FieldTower([make_field(5), make_field(5, 2), make_field(5, 4)])
    x = make_field(5, 2)(7)
    y = T.embed(x, make_field(5, 4))
    assert T.project(y, make_field(5, 2)) == x


def test_frobenius():
    F8 = field_of_order(8)
    for a in F8.elements():
        x = F8(a)
        assert frobenius(frobenius(frobenius(x, 1), 1), 1) == x
    assert frobenius(F8(0), 2).enc == 0
    F9 = field_of_order(9)
    g = F9.generator()
    assert frobenius(g, 1) == g**3
    # fixed field of x -> x^p is the prime field
    fixed = [a for a in F9.elements() if F9.frob(a, 1) == a]
    assert len(fixed) == 3


@pytest.mark.parametrize("q,k", [(2, 3), (3, 3), (2, 2), (3, 2), (5, 3), (4, 3)])
def test_norm_trace_algebra(q, k):
    F = field_of_order(q)
    B = field_of_order(q**k)
    e = B.elements()
    N, T = B.norm(e, F.k), B.trace(e, F.k)
    assert B.in_subfield(N, F.k).all() and B.in_subfield(T, F.k).all()
    a, b = (x.ravel() for x in np.meshgrid(e, e, indexing="ij"))
    if a.size > 20000:
        sel = np.random.default_rng(1).choice(a.size, 20000, replace=False)
        a, b = a[sel], b[sel]
    assert np.array_equal(B.norm(B.mul(a, b), F.k), B.mul(B.norm(a, F.k), B.norm(b, F.k)))
    assert np.array_equal(B.trace(B.add(a, b), F.k), B.add(B.trace(a, F.k), B.trace(b, F.k)))
    lam = embed(F.elements(), F, B)
    for c in lam:
        assert np.array_equal(B.trace(B.mul(c, e), F.k), B.mul(c, T))


def test_norm_one_count():
    F = field_of_order(3)
    B = field_of_order(27)
    assert int((B.norm(B.elements(), F.k) == 1).sum()) == 13


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_trace_norm_identity(q):
    F = field_of_order(q)
    B = field_of_order(q**3)
    x = B.nonzero()
    x = x[B.norm(x, F.k) == 1]
    lhs = B.trace(B.sub(B.pow(x, q + 1), x), F.k)
    rhs = B.norm(B.sub(1, x), F.k)
    assert np.array_equal(lhs, rhs)


def test_rel_norm_trace_elements():
    F = field_of_order(2)
    B = field_of_order(8)
    assert rel_norm(B(1), F).enc == 1
    assert rel_trace(B(0), F).enc == 0
    with pytest.raises(FieldDomainError):
        rel_norm(B(3), field_of_order(4))


def test_char2_sqrt():
    F4 = field_of_order(4)
    w = F4.generator()
    assert char2_sqrt(w) == w * w
    F16 = field_of_order(16)
    for a in F16.elements():
        r = char2_sqrt(F16(a))
        assert r * r == F16(a)
    with pytest.raises(FieldDomainError):
        char2_sqrt(field_of_order(9)(1))


def test_is_cube():
    F = field_of_order(25)
    non = [a for a in F.nonzero() if not is_cube(F(a))]
    assert len(non) == 16
    assert is_cube(F(1))
    F8 = field_of_order(8)
    assert all(is_cube(F8(a)) for a in F8.nonzero())
    with pytest.raises(FieldDomainError):
        is_cube(F(0))
    # dual route: cubes by enumeration
    cubes = {int(v) for v in F.pow(F.nonzero(), 3)}
    assert set(non) == set(F.nonzero().tolist()) - cubes


def test_foreign_modulus_warns():
    with pytest.warns(UserWarning):
        F = make_foreign_field(3, 2, (1, 0, 1))
    assert not F.canonical
    with pytest.raises(FieldDomainError):
        embed(1, make_field(3), F)


def test_elem_ops():
    F = field_of_order(9)
    x, y = F(4), F(7)
    assert (x + y) - y == x
    assert (x * y) / y == x
    assert x * x.inverse() == F(1)
    assert -x + x == F(0)
    assert int(x**0) == 1
    with pytest.raises(FieldDomainError):
        F(9)

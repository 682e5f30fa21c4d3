import numpy as np
import pytest

from polarset import geom
from polarset.cubic import beta, build_cubic
from polarset.forms import (
    FormError,
    PolarSpace,
    SesquiForm,
    antidiagonal_symplectic,
    hermitian,
    hermitian_point_count,
    isometry,
    line_type,
    line_type_from_gram,
    paired_symplectic,
    split_symplectic,
    symplectic,
    witt_index,
)
from polarset.geom import Subspace
from polarset.gf import field_of_order
from polarset.pencil import build_member, make_config


def std_hermitian(n, q):
    F2 = field_of_order(q * q)
    return hermitian(F2, np.eye(n + 1, dtype=np.int64))


def test_beta_on_cubic_is_cube_of_difference():
    F = field_of_order(7)
    C = build_cubic(7)
    B = beta(F)
    for s in F.elements():
        for t in F.elements():
            want = int(F.pow(F.sub(t, s), 3))
            assert B.eval(C.point(int(s)), C.point(int(t))) == want
    assert B.eval(C.point(0), C.point(2)) == 1


@pytest.mark.parametrize("make", [antidiagonal_symplectic, paired_symplectic, split_symplectic])
def test_symplectic_is_alternating(make):
    F = field_of_order(5)
    f = make(F, 6)
    P = geom.all_points(5, F)
    assert np.all(f.diag(P) == 0)
    V = f.values(P[:40], P[:40])
    assert np.array_equal(V.T, F.neg(V))


def test_bad_grams_rejected():
    F = field_of_order(3)
    with pytest.raises(FormError):
        symplectic(F, np.eye(4, dtype=np.int64))
    with pytest.raises(FormError):
        symplectic(F, np.zeros((4, 4), dtype=np.int64))
    with pytest.raises(FormError):
        hermitian(field_of_order(9), [[0, 3], [3, 0]])  # 3 is not fixed by conjugation in this gram
    with pytest.raises(FormError):
        SesquiForm(F, np.eye(2, dtype=np.int64), 0, "orthogonal")


def test_pencil_h1_contains_u1():
    cfg = make_config(2, 3)
    H1 = build_member(cfg, 1).form
    assert H1.eval([1, 0, 0, 0], [1, 0, 0, 0]) == 0


@pytest.mark.parametrize("n,count", [(3, 45), (4, 165), (5, 693), (6, 2709), (8, 43605)])
def test_hermitian_point_count_q2(n, count):
    assert hermitian_point_count(n, 2) == count
    H = PolarSpace(std_hermitian(n, 2))
    assert len(H.points()) == count == H.expected_point_count()


@pytest.mark.parametrize("n,q", [(3, 3), (2, 4), (4, 3)])
def test_hermitian_point_count_other(n, q):
    H = PolarSpace(std_hermitian(n, q))
    assert len(H.points()) == hermitian_point_count(n, q)


def test_line_census_h34():
    f = std_hermitian(3, 2)
    F = f.F
    lines = geom.enumerate_subspaces(F, 4, 2)
    counts = {"tangent": 0, "secant": 0, "generator": 0}
    for b in lines:
        t = line_type(f, Subspace(F, b))
        assert t == line_type_from_gram(f, b[0], b[1])
        counts[t] += 1
    assert sum(counts.values()) == 357
    q = 2
    # every tangent line has one point of H, which lies on q^2 - q of them
    assert counts["tangent"] == 45 * (q * q - q)
    # generators: (q + 1)(q^3 + 1) for H(3, q^2)
    assert counts["generator"] == (q + 1) * (q**3 + 1)


def test_explicit_line_types():
    f = std_hermitian(3, 2)
    F = f.F
    pts = PolarSpace(f).points()
    P = pts[0]
    perp = pts[(f.values(P[None], pts)[0] == 0)]
    Q = next(R for R in perp if not np.array_equal(R, P))
    assert line_type(f, geom.line_through(F, P, Q)) == "generator"
    plane = f.perp(P).points()
    tangent = [R for R in plane if not f.is_absolute(R)[0]]
    assert line_type(f, geom.line_through(F, P, tangent[0])) == "tangent"
    with pytest.raises(FormError):
        line_type(beta(field_of_order(3)), geom.line_through(field_of_order(3), [1, 0, 0, 0], [0, 1, 0, 0]))


@pytest.mark.parametrize("n", [3, 4])
def test_perpendicular_iff_common_generator(n):
    f = std_hermitian(n, 2)
    F = f.F
    pts = PolarSpace(f).points()
    lines = geom.enumerate_subspaces(F, n + 1, 2)
    L = geom.line_points(F, lines)
    on = f.is_absolute(L.reshape(-1, n + 1)).reshape(L.shape[:2]).all(axis=1)
    idx = {int(c): i for i, c in enumerate(geom.point_index(F, pts))}
    share = np.zeros((len(pts), len(pts)), dtype=bool)
    for gen in L[on]:
        ii = [idx[int(c)] for c in geom.point_index(F, gen)]
        share[np.ix_(ii, ii)] = True
    perp = f.values(pts, pts) == 0
    assert np.array_equal(share, perp)


@pytest.mark.parametrize("q", [2, 3])
def test_symplectic_perp_contains_generators(q):
    F = field_of_order(q)
    f = antidiagonal_symplectic(F, 4)
    lines = geom.enumerate_subspaces(F, 4, 2)
    iso = [b for b in lines if f.eval(b[0], b[1]) == 0]
    assert len(iso) == (q + 1) * (q * q + 1)
    for P in geom.all_points(3, F)[:8]:
        H = f.perp(P)
        through = [b for b in iso if Subspace(F, b).contains(P[None])[0]]
        assert len(through) == q + 1
        assert all(H.contains_subspace(Subspace(F, b)) for b in through)


def test_witt_index():
    assert witt_index(antidiagonal_symplectic(field_of_order(2), 6)) == 3
    assert witt_index(std_hermitian(3, 2)) == 2
    assert witt_index(std_hermitian(4, 2)) == 2
    assert PolarSpace(std_hermitian(5, 2)).rank == 3


@pytest.mark.parametrize("q", [2, 3])
def test_restrict_to_baer(q):
    cfg = make_config(2, q)
    for i in range(1, q + 1):
        M = build_member(cfg, i)
        W = M.W
        F = cfg.F
        assert W.kind == "symplectic" and W.dim == 4 and geom.rank(F, W.gram) == 4
        lines = geom.enumerate_subspaces(F, 4, 2)
        gens = [b for b in lines if W.eval(b[0], b[1]) == 0]
        assert len(gens) == (q + 1) * (q * q + 1)
        for b in gens:
            ext = geom.Subspace.span(cfg.F2, M.to_sigma(b))
            assert M.form.is_absolute(ext.points()).all()


def test_isometry_maps_forms():
    F = field_of_order(3)
    src = paired_symplectic(F, 6)
    dst = antidiagonal_symplectic(F, 6)
    T = isometry(src, dst, rng=np.random.default_rng(0))
    P = geom.all_points(5, F)[::7]
    lhs = dst.values(geom.matmul(F, P, T.T), geom.matmul(F, P, T.T))
    assert np.array_equal(lhs, src.values(P, P))

import itertools

import numpy as np
import pytest

from polarset import geom
from polarset.cubic import (
    IMAGINARY,
    REAL,
    TANGENT,
    J_matrix,
    UnsupportedParameter,
    apply_all,
    axis_osculating_planes,
    axis_osculating_planes_ext,
    beta,
    build_cubic,
    build_w3_partial_ovoid,
    chord_atlas,
    cubic_matrices,
    epsilon,
    extend_by_point,
    extenders,
    find_base_point,
    group_G,
    lambda_baer,
    lambda_points,
    orbit_O,
    osculating_plane,
    sub_cubic,
    sub_osculating_planes,
    tangent_at,
    w3_size,
)
from polarset.gf import field_of_order, is_cube
from polarset.verify import is_partial_ovoid


def test_cubic_q7_is_an_arc():
    C = build_cubic(7)
    F = C.F
    P = C.points
    assert len(P) == 8
    for tri in itertools.combinations(range(8), 3):
        assert geom.rank(F, P[list(tri)]) == 3
    for quad in itertools.combinations(range(8), 4):
        assert geom.rank(F, P[list(quad)]) == 4


def test_cubic_params():
    C = build_cubic(25)
    assert len(C.points) == 26
    for t in [0, 3, 17, None]:
        assert C.param(C.point(t)) == t
    with pytest.raises(KeyError):
        C.param([0, 1, 0, 0])
    with pytest.raises(UnsupportedParameter):
        build_cubic(9)


def test_osculating_planes_and_tangents_q7():
    F = field_of_order(7)
    C = build_cubic(7)
    B = beta(F)
    assert np.array_equal(osculating_plane(F, 0).basis, geom.hyperplane(F, [0, 0, 0, 1]).basis)
    assert np.array_equal(tangent_at(F, 0).basis, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert np.array_equal(tangent_at(F, None).basis, [[0, 0, 1, 0], [0, 0, 0, 1]])
    assert np.array_equal(osculating_plane(F, None).basis, geom.hyperplane(F, [1, 0, 0, 0]).basis)
    for t in [int(v) for v in F.elements()] + [None]:
        pi = osculating_plane(F, t)
        on = pi.contains(C.points)
        assert on.sum() == 1 and C.param(C.points[on][0]) == t
        T = tangent_at(F, t)
        assert pi.contains_subspace(T)
        assert B.eval(T.basis[0], T.basis[1]) == 0


@pytest.mark.parametrize("eps,q,order", [(-1, 25, 120), (1, 49, 336)])
def test_group_order_and_identity(eps, q, order):
    G = group_G(eps, q)
    F = G.F
    assert len(G) == order
    M = G.matrices
    J = J_matrix(F)
    a, b, c, d = G.params.T
    det3 = F.pow(F.sub(F.mul(a, d), F.mul(b, c)), 3)
    for Mi, k in zip(M, det3):
        lhs = geom.matmul(F, geom.matmul(F, Mi.T, J), Mi)
        assert np.array_equal(lhs, F.mul(J, k))


@pytest.mark.parametrize("eps,q", [(-1, 25), (1, 49)])
def test_group_preserves_cubic_and_sub_cubic(eps, q):
    G = group_G(eps, q)
    F = G.F
    C = build_cubic(q)
    codes = np.sort(geom.point_index(F, C.points))
    sub_codes = np.sort(geom.point_index(F, sub_cubic(eps, F)))
    for P in C.points[:6]:
        imgs = apply_all(F, G.matrices, P)
        assert np.isin(geom.point_index(F, imgs), codes).all()
    for P in sub_cubic(eps, F):
        imgs = apply_all(F, G.matrices, P)
        assert np.isin(geom.point_index(F, imgs), sub_codes).all()


def test_cubic_matrices_full_group_q7():
    # M_{a,b,c,d} maps the cubic to itself for every invertible (a,b,c,d) over GF(7)
    F = field_of_order(7)
    C = build_cubic(7)
    codes = geom.point_index(F, C.points)
    P = geom.all_points(3, F)
    a, b, c, d = P.T
    P = P[F.sub(F.mul(a, d), F.mul(b, c)) != 0]
    Ms = cubic_matrices(F, *P.T)
    J = J_matrix(F)
    for t in range(8):
        imgs = apply_all(F, Ms, C.points[t])
        assert np.isin(geom.point_index(F, imgs), codes).all()
    det3 = F.pow(F.sub(F.mul(P[:, 0], P[:, 3]), F.mul(P[:, 1], P[:, 2])), 3)
    for Mi, k in zip(Ms[::17], det3[::17]):
        assert np.array_equal(geom.matmul(F, geom.matmul(F, Mi.T, J), Mi), F.mul(J, k))


def test_epsilon():
    assert epsilon(25) == -1 and epsilon(49) == 1
    with pytest.raises(UnsupportedParameter):
        epsilon(9)
    with pytest.raises(UnsupportedParameter):
        epsilon(16)
    with pytest.raises(UnsupportedParameter):
        group_G(1, 25)


@pytest.mark.parametrize("eps,q", [(-1, 25), (1, 49)])
def test_base_point(eps, q):
    F = field_of_order(q)
    x, R = find_base_point(eps, q)
    assert not is_cube(F(x))
    assert not F.in_subfield(x, F.k // 2)
    if eps == -1:
        assert F.pow(x, round(q**0.5) + 1) != 1
    # smallest admissible encoding
    for y in range(1, x):
        ok = is_cube(F(y)) or F.in_subfield(y, F.k // 2) or (eps == -1 and F.pow(y, 6) == 1)
        assert ok
    assert np.array_equal(R, [1, 0, 0, x])


@pytest.mark.parametrize("eps,q,size", [(-1, 25, 40), (1, 49, 112)])
def test_orbit(eps, q, size):
    O = orbit_O(eps, q)
    assert len(O) == size
    assert is_partial_ovoid(O, beta(O.F)).passed


@pytest.mark.parametrize("q,size", [(25, 66), (49, 162)])
def test_w3_partial_ovoid(q, size):
    S = build_w3_partial_ovoid(q)
    assert len(S) == size == w3_size(q)
    assert is_partial_ovoid(S, beta(S.F)).passed
    assert S.provenance["construction"] == "w3-cubic"


def test_cubic_alone_is_partial_ovoid():
    C = build_cubic(7).as_pointset()
    assert is_partial_ovoid(C, beta(C.F)).passed


def test_lambda_minus_one_two_routes_agree():
    F = field_of_order(25)
    frame = lambda_baer(-1, F)
    listed = lambda_points(-1, F)
    assert len(listed) == 156
    assert np.array_equal(np.sort(geom.point_index(F, frame.points())), np.sort(geom.point_index(F, listed)))
    assert frame.contains(sub_cubic(-1, F)).all()


@pytest.mark.parametrize("eps,q", [(-1, 25), (1, 49)])
def test_lambda_is_group_invariant(eps, q):
    G = group_G(eps, q)
    F = G.F
    L = lambda_points(eps, F)
    codes = np.sort(geom.point_index(F, L))
    for P in L[:: max(1, len(L) // 25)]:
        imgs = apply_all(F, G.matrices, P)
        assert np.isin(geom.point_index(F, imgs), codes).all()


@pytest.mark.parametrize("eps,q,n_ext", [(-1, 25, 40), (1, 49, 112)])
def test_extenders_are_off_osculating_planes(eps, q, n_ext):
    S = build_w3_partial_ovoid(q)
    F = S.F
    L = lambda_points(eps, F)
    ext = extenders(S, L)
    assert len(ext) == n_ext
    planes = sub_osculating_planes(eps, F)
    on_plane = np.zeros(len(L), dtype=bool)
    for pi in planes:
        on_plane |= pi.contains(L)
    off = L[~on_plane & ~S.contains(L)]
    assert np.array_equal(np.sort(geom.point_index(F, ext)), np.sort(geom.point_index(F, off)))


def test_extend_by_point_q25():
    S = build_w3_partial_ovoid(25)
    N = extend_by_point(25, S)
    assert N not in S
    T = S.with_points(list(S.points) + [N])
    assert len(T) == 67
    assert is_partial_ovoid(T, beta(S.F)).passed


def test_chord_atlas_q7():
    a = chord_atlas(7)
    q = 7
    assert a.count(REAL) == q * (q + 1) // 2
    assert a.count(IMAGINARY) == q * (q - 1) // 2
    assert a.count(TANGENT) == q + 1
    assert len(a.points) == (q**3 + q**2 + q + 1) - (q + 1)
    assert np.all(a.hits == 1)
    assert all(lbl is not None for lbl in a.label)


def test_axes_in_osculating_planes_q7():
    a = chord_atlas(7)
    F = a.F
    F2 = field_of_order(49)
    for key in a.lines[REAL]:
        assert sorted(axis_osculating_planes(a, REAL, key), key=str) == sorted(key, key=str)
    for key in a.lines[IMAGINARY]:
        assert axis_osculating_planes(a, IMAGINARY, key) == []
        ts = axis_osculating_planes_ext(a, IMAGINARY, key)
        assert sorted(ts) == sorted([key, int(F2.pow(key, F.q))])

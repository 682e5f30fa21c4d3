import numpy as np
import pytest

from polarset import geom
from polarset.cubic import ConsistencyError
from polarset.lift import (
    cone_lift,
    lifted_size,
    line_points_on_variety,
    make_frame,
    size_law,
)
from polarset.pencil import (
    assemble_tangent_set,
    build_pencil,
    default_w3_ovoid,
    make_config,
    place_seed,
)
from polarset.pointset import PointSet
from polarset.verify import is_maximal_partial_ovoid, is_partial_ovoid


def tangent_set(req):
    S, form = default_w3_ovoid(2)
    cfg = make_config(2, 2)
    return assemble_tangent_set(build_pencil(cfg), place_seed(cfg, S, form, req))


def test_frame():
    ts = tangent_set("tangent_point")
    fr = make_frame(ts.form)
    F = fr.F
    assert not fr.form.is_absolute(fr.apex)[0]
    pts = geom.all_points(4, F)
    on_perp = pts[pts[:, -1] == 0]
    absolute = on_perp[fr.form.is_absolute(on_perp)]
    base_pts = geom.all_points(3, F)
    assert np.array_equal(absolute, fr.embed_points(base_pts[ts.form.is_absolute(base_pts)]))
    with pytest.raises(ValueError):
        make_frame(ts.form, 0)
    with pytest.raises(ValueError):
        make_frame(ts.form, 2)  # outside GF(2)


@pytest.mark.parametrize("req,size,on_h", [("tangent_point", 17, 5), ("secant_conic", 11, 5)])
def test_lift_h44(req, size, on_h):
    ts = tangent_set(req)
    assert int(ts.form.is_absolute(ts.points.points).sum()) == on_h
    fr = make_frame(ts.form)
    O = cone_lift(fr, ts.points, check_maximal=True)
    assert len(O) == size
    assert len(O) == lifted_size(ts.x, ts.y, 2) == size_law(ts.x, ts.y, 2)
    assert is_partial_ovoid(O, fr.form).passed
    assert is_maximal_partial_ovoid(O, fr.form).passed
    # seed points on the variety are kept as they are
    kept = fr.embed_points(ts.points.points[ts.form.is_absolute(ts.points.points)])
    assert O.contains(kept).all()
    assert O.provenance["source_digest"] == ts.points.digest()


def test_lifted_lines_are_secant():
    ts = tangent_set("tangent_point")
    fr = make_frame(ts.form)
    for R in ts.points.points:
        n = len(line_points_on_variety(fr, R))
        assert n == (1 if ts.form.is_absolute(R)[0] else 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_size_laws_agree(q):
    for x in range(3 * q * q):
        for y in range(q + 2):
            assert lifted_size(x, y, q) == size_law(x, y, q)


def test_size_law_examples():
    assert size_law(4, 1, 2) == 17
    assert size_law(6, 1, 2) == 25
    assert size_law(2 * 4 - 2, 1, 2) == 25


def test_lift_rejects_non_tangent_set():
    ts = tangent_set("tangent_point")
    F = ts.cfg.F2
    # a whole generator line of H_1 is far from a tangent-set
    pts = geom.all_points(3, F)
    on = pts[ts.form.is_absolute(pts)]
    P = on[0]
    Q = next(R for R in on[1:] if ts.form.values(P, R)[0, 0] == 0)
    L = geom.line_through(F, P, Q).points()
    with pytest.raises(ConsistencyError):
        cone_lift(make_frame(ts.form), PointSet(F, L))

"""Curve arithmetic, window decomposition, and the builtin curves."""

import itertools

import pytest

from catshor.ecc import (
    POINT_AT_ZERO,
    SECP256K1,
    TOY_CURVE,
    CurveParams,
    dlog_postprocess,
    ec_add,
    ec_neg,
    generic_case_ok,
    on_curve,
    scalar_mul,
    scalar_windows,
    synthetic_curve,
    window_values,
)


def _all_points(curve):
    pts = [None]
    for x in range(curve.p):
        for y in range(curve.p):
            if on_curve((x, y), curve):
                pts.append((x, y))
    return pts


def test_toy_curve_basics():
    assert TOY_CURVE.n_bits == 5
    assert on_curve(TOY_CURVE.g, TOY_CURVE)
    assert scalar_mul(TOY_CURVE.r, TOY_CURVE.g, TOY_CURVE) is None
    # r is prime, so every multiple below r is distinct
    pts = {scalar_mul(k, TOY_CURVE.g, TOY_CURVE) for k in range(TOY_CURVE.r)}
    assert len(pts) == TOY_CURVE.r


def test_toy_group_order():
    # the toy generator generates the entire curve group
    assert len(_all_points(TOY_CURVE)) == TOY_CURVE.r


def test_group_laws_exhaustive():
    curve = TOY_CURVE
    pts = _all_points(curve)
    for p1 in pts:
        assert ec_add(p1, None, curve) == p1
        assert ec_add(None, p1, curve) == p1
        assert ec_add(p1, ec_neg(p1, curve), curve) is None
        for p2 in pts:
            s = ec_add(p1, p2, curve)
            assert on_curve(s, curve)
            assert s == ec_add(p2, p1, curve)
    # associativity on a sample of triples
    for p1, p2, p3 in itertools.islice(itertools.product(pts, repeat=3), 0, 6859, 37):
        left = ec_add(ec_add(p1, p2, curve), p3, curve)
        right = ec_add(p1, ec_add(p2, p3, curve), curve)
        assert left == right


def test_scalar_mul_matches_repeated_addition():
    curve = TOY_CURVE
    acc = None
    for k in range(2 * curve.r):
        assert scalar_mul(k, curve.g, curve) == acc
        acc = ec_add(acc, curve.g, curve)
    assert scalar_mul(-3, curve.g, curve) == scalar_mul(curve.r - 3, curve.g, curve)


def test_dlog_postprocess():
    r = TOY_CURVE.r
    for l in range(1, r):
        for y1 in range(1, r):
            # the measured pair saturates y1*l + y2 = 0 mod r
            y2 = (-y1 * l) % r
            assert dlog_postprocess(y1, y2, r) == l


def test_secp256k1_constants():
    c = SECP256K1
    assert c.p.bit_length() == 256 and c.r.bit_length() == 256
    assert on_curve(c.g, c)
    assert ec_add(c.g, c.g, c) == scalar_mul(2, c.g, c)
    g3 = ec_add(scalar_mul(2, c.g, c), c.g, c)
    assert g3 == scalar_mul(3, c.g, c)
    assert on_curve(g3, c)


@pytest.mark.parametrize("n", [8, 10, 16])
def test_synthetic_curve(n):
    curve = synthetic_curve(n)
    assert curve.p.bit_length() == n
    assert curve.a == 2
    assert on_curve(curve.g, curve)
    assert curve.g[0] == 2
    # deterministic and cached
    assert synthetic_curve(n) is curve


def test_point_at_zero_not_on_table_curves():
    # the all-zero table encoding must never collide with a real point
    for curve in (TOY_CURVE, SECP256K1, synthetic_curve(8), synthetic_curve(16)):
        assert not on_curve(POINT_AT_ZERO, curve)


# ---------------------------------------------------------------------------
# window decomposition


def test_scalar_windows_cover_exactly():
    specs = scalar_windows(10, 3, TOY_CURVE.g, TOY_CURVE)
    assert [s.width for s in specs] == [3, 3, 3, 1]
    assert [s.shift for s in specs] == [0, 3, 6, 9]
    specs = scalar_windows(8, 4, TOY_CURVE.g, TOY_CURVE)
    assert [(s.width, s.shift) for s in specs] == [(4, 0), (4, 4)]


def test_window_values_recompose():
    specs = scalar_windows(10, 3, TOY_CURVE.g, TOY_CURVE)
    for k in (0, 1, 513, 1023):
        vals = window_values(k, specs)
        assert sum(v << s.shift for v, s in zip(vals, specs)) == k


def test_window_point_identity():
    # the signed-window trick: the point added for value i is
    # (i - 2^(width-1)) * 2^shift * base; the centre i = 2^(width-1) is
    # exceptional and loads the offset point instead of the neutral element
    curve = TOY_CURVE
    for spec in scalar_windows(10, 3, curve.g, curve):
        half = 1 << (spec.width - 1)
        for i in range(1 << spec.width):
            if spec.is_exceptional(i):
                assert i == half
                assert spec.window_point(i) == spec.offset_point
            else:
                expected = scalar_mul((i - half) << spec.shift, curve.g, curve)
                assert spec.window_point(i) == expected


def test_windowed_walk_equals_scalar_mul():
    # summing window points lands at (k - offset) * base; the constant
    # offset sum is what scalar_mul_offset later removes
    curve = TOY_CURVE
    n_e, w_e = 5, 3
    specs = scalar_windows(n_e, w_e, curve.g, curve)
    offset = sum(1 << (s.shift + s.width - 1) for s in specs)
    assert offset == 20
    for k in range(1 << n_e):
        acc = None
        slip = 0  # exceptional centres load the offset point, not neutral
        for spec, v in zip(specs, window_values(k, specs)):
            acc = ec_add(acc, spec.window_point(v), curve)
            if spec.is_exceptional(v):
                slip += 1 << (spec.shift + spec.width - 1)
        assert acc == scalar_mul(k - offset + slip, curve.g, curve)


def test_table_points_layout():
    curve = TOY_CURVE
    spec = scalar_windows(6, 3, curve.g, curve)[0]
    pts = spec.table_points()
    assert len(pts) == 4  # magnitudes only: 2^(w-1) entries
    for m in range(1, 4):
        assert pts[m] == scalar_mul(m, curve.g, curve)
    assert pts[0] == scalar_mul(4, curve.g, curve)  # entry 0 is magnitude 2^(w-1)
    assert spec.magnitude_point(0) == pts[0]


def test_generic_case_predicate():
    curve = TOY_CURVE
    g = curve.g
    g2 = scalar_mul(2, g, curve)
    assert generic_case_ok(g2, g, curve)
    assert not generic_case_ok(None, g, curve)
    assert not generic_case_ok(g, None, curve)
    assert not generic_case_ok(g, g, curve)  # equal abscissae (doubling)
    assert not generic_case_ok(ec_neg(g, curve), g, curve)  # cancellation
    # result abscissa colliding with the table point is excluded
    for q in _all_points(curve):
        for t in _all_points(curve):
            if generic_case_ok(q, t, curve):
                r = ec_add(q, t, curve)
                assert r is not None and r[0] != 0 and r[0] != t[0] != q[0]


def test_curve_params_frozen():
    with pytest.raises(AttributeError):
        TOY_CURVE.p = 19
    assert CurveParams(p=5, a=1, b=1).n_bits == 3

"""Metric construction from potentials: block structure, jets, errors."""

import numpy as np
import pytest

from kahlersym.expressions import parse
from kahlersym.metrics import (
    MetricError,
    fundamental_two_form,
    metric_from_potential,
    two_form_closedness,
)
from kahlersym.tensor_algebra import standard_complex_structure

from helpers import central_difference, rel_err


def test_flat_metric_is_exactly_identity():
    pot = parse("absq(1)+absq(2)", 2)
    m = metric_from_potential(pot, [0.3, -0.7, 1.1, 0.2], 2)
    assert np.array_equal(m.g, np.eye(4))
    assert np.array_equal(m.dg, np.zeros((4, 4, 4)))
    assert np.array_equal(m.ddg, np.zeros((4, 4, 4, 4)))
    assert np.array_equal(m.dddg, np.zeros((4, 4, 4, 4, 4)))


def test_scaled_flat_metric():
    pot = parse("3*absq(1)", 1)
    m = metric_from_potential(pot, [0.5, -0.2], 1)
    assert np.array_equal(m.g, 3 * np.eye(2))


def test_hermitian_block_structure():
    """g must have the form [[A, B], [-B, A]] with A symmetric, B skew."""
    pot = parse("log(1+rsq) + 0.2*absq(1)*absq(2)", 2)
    rng = np.random.default_rng(7)
    for _ in range(4):
        point = rng.uniform(-0.5, 0.5, size=4)
        m = metric_from_potential(pot, point, 2)
        a = m.g[:2, :2]
        b = m.g[:2, 2:]
        assert np.allclose(m.g[2:, 2:], a, atol=1e-15)
        assert np.allclose(m.g[2:, :2], -b, atol=1e-15)
        assert np.allclose(a, a.T, atol=1e-15)
        assert np.allclose(b, -b.T, atol=1e-15)
        # equivalently J^T g J = g
        j = m.J
        assert np.allclose(j.T @ m.g @ j, m.g, atol=1e-15)


def test_metric_is_symmetric_and_positive():
    pot = parse("-log(1-rsq)", 2)
    m = metric_from_potential(pot, [0.1, 0.2, -0.1, 0.15], 2)
    assert np.allclose(m.g, m.g.T, atol=1e-15)
    assert np.all(np.linalg.eigvalsh(m.g) > 0)


def test_fs_metric_value_at_origin():
    # at z=0 the Fubini-Study potential log(1+|z|^2) gives g = I/2... no:
    # H = 2*I there, so g = I with our quarter normalisation. Check that,
    # and check the conformal factor at a nonzero point for n=1.
    pot = parse("log(1+absq(1))", 1)
    m0 = metric_from_potential(pot, [0.0, 0.0], 1)
    assert np.allclose(m0.g, np.eye(2), atol=1e-15)
    r2 = 0.3**2 + 0.4**2
    m1 = metric_from_potential(pot, [0.3, 0.4], 1)
    assert np.allclose(m1.g, np.eye(2) / (1 + r2) ** 2, atol=1e-14)


def test_metric_derivatives_match_finite_differences():
    pot = parse("log(1+rsq)", 2)
    base = np.array([0.2, -0.3, 0.4, 0.1])

    def g_at(p):
        return metric_from_potential(pot, p, 2, depth=0).g

    def dg_at(p):
        return metric_from_potential(pot, p, 2, depth=1).dg

    def ddg_at(p):
        return metric_from_potential(pot, p, 2, depth=2).ddg

    m = metric_from_potential(pot, base, 2)
    for c in range(4):
        fd = central_difference(g_at, base, c)
        assert rel_err(m.dg[c], fd) < 1e-9
        fd2 = central_difference(dg_at, base, c)
        assert rel_err(m.ddg[c], fd2) < 1e-8
        fd3 = central_difference(ddg_at, base, c)
        assert rel_err(m.dddg[c], fd3) < 1e-7


def test_derivative_axes_are_symmetric():
    pot = parse("exp(absq(1)) + absq(2)^2", 2)
    m = metric_from_potential(pot, [0.3, 0.1, -0.2, 0.4], 2)
    assert np.allclose(m.ddg, np.swapaxes(m.ddg, 0, 1), atol=1e-15)
    for perm in [(1, 0, 2), (2, 1, 0), (0, 2, 1)]:
        assert np.allclose(m.dddg, np.transpose(m.dddg, perm + (3, 4)), atol=1e-15)


def test_depth_limits_populated_fields():
    pot = parse("absq(1)", 1)
    m0 = metric_from_potential(pot, [0.0, 0.0], 1, depth=0)
    assert m0.dg is None and m0.ddg is None and m0.dddg is None
    m1 = metric_from_potential(pot, [0.0, 0.0], 1, depth=1)
    assert m1.dg is not None and m1.ddg is None
    m2 = metric_from_potential(pot, [0.0, 0.0], 1, depth=2)
    assert m2.ddg is not None and m2.dddg is None
    with pytest.raises(ValueError, match="depth"):
        metric_from_potential(pot, [0.0, 0.0], 1, depth=4)


def test_point_shape_validation():
    pot = parse("absq(1)", 1)
    with pytest.raises(ValueError, match="length 2n"):
        metric_from_potential(pot, [0.0, 0.0, 0.0], 1)


def test_non_positive_potential_raises():
    pot = parse("-absq(1)", 1)
    with pytest.raises(MetricError, match="smallest eigenvalue"):
        metric_from_potential(pot, [0.1, 0.1], 1)


def test_hyperbolic_potential_outside_ball_raises():
    pot = parse("-log(1-rsq)", 1)
    # inside the unit ball this is fine
    metric_from_potential(pot, [0.3, 0.2], 1)
    # a saddle-type potential on part of the chart
    saddle = parse("absq(1) + x1^3*10", 1)
    with pytest.raises(MetricError):
        metric_from_potential(saddle, [-2.0, 0.0], 1)


def test_fundamental_two_form_skew_and_compatible():
    pot = parse("log(1+rsq)", 2)
    m = metric_from_potential(pot, [0.2, 0.1, -0.3, 0.25], 2)
    omega = fundamental_two_form(m)
    assert np.allclose(omega, -omega.T, atol=1e-15)
    # omega(Ju, Jv) = omega(u, v)
    assert np.allclose(m.J.T @ omega @ m.J, omega, atol=1e-15)


def test_two_form_closed_on_zoo_potentials():
    sources = [
        ("absq(1)+absq(2)", 2),
        ("log(1+rsq)", 2),
        ("-log(1-rsq)", 2),
        ("log(1+absq(1)) + 2*log(1+absq(2))", 2),
        ("absq(1)+absq(2)+0.1*absq(1)*absq(2)", 2),
    ]
    rng = np.random.default_rng(11)
    for source, n in sources:
        pot = parse(source, n)
        for _ in range(3):
            point = rng.uniform(-0.3, 0.3, size=2 * n)
            m = metric_from_potential(pot, point, n, depth=1)
            assert two_form_closedness(m) < 1e-13


def test_two_form_closedness_needs_derivatives():
    pot = parse("absq(1)", 1)
    m = metric_from_potential(pot, [0.0, 0.0], 1, depth=0)
    with pytest.raises(ValueError, match="first derivatives"):
        two_form_closedness(m)


def test_standard_complex_structure_squares_to_minus_identity():
    for n in (1, 2, 3):
        j = standard_complex_structure(n)
        assert np.array_equal(j @ j, -np.eye(2 * n))

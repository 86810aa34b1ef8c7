"""Curvature-derived symmetry tensors and the two falsification experiments.

All (0,4)-tensors here use slot order (u, v, x, y): the first pair feeds
the bilinear form, the last pair spans the plane whose endomorphism acts
by derivation.  With A an endomorphism attached to (x, y),

    T(u, v; x, y) = -S(A u, v) - S(u, A v),

which gives R.S for A = R(x,y), the Tachibana-Ricci tensor Q(g,S) for
the metric wedge A = x wedge_g y, and its complex variant Qc(g,S) for
the complex wedge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .curvature import CurvatureBundle, christoffel, curvature_bundle, parallel_transport
from .expressions import Expr
from .metrics import metric_from_potential
from .tensor_algebra import (
    ABS_FLOOR,
    hermitian_violation,
    max_norm,
    NonHermitianMetric,
    wedge_c_matrix,
    wedge_g_matrix,
)


def _endo_family_dot_bilinear(a: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Derivation action for a whole family a[d,c,x,y] of endomorphisms."""
    return -np.einsum("miab,mj->ijab", a, s) - np.einsum("mjab,im->ijab", a, s)


def r_dot_s(bundle: CurvatureBundle) -> np.ndarray:
    """(R(x,y) . S)(u, v) in slot order (u, v, x, y)."""
    family = np.einsum("dabc->dcab", bundle.r13)
    return _endo_family_dot_bilinear(family, bundle.ricci)


def _wedge_family(g: np.ndarray) -> np.ndarray:
    m = g.shape[0]
    eye = np.eye(m)
    return np.einsum("bc,da->dcab", g, eye) - np.einsum("ac,db->dcab", g, eye)


def tachibana_ricci(g: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Q(g,S): the derivation action of metric wedges on the Ricci tensor."""
    return _endo_family_dot_bilinear(_wedge_family(np.asarray(g, float)),
                                     np.asarray(s, float))


def _complex_wedge_family(g: np.ndarray, j: np.ndarray) -> np.ndarray:
    gj = g @ j
    rotated = np.einsum("cb,da->dcab", gj, j) - np.einsum("ca,db->dcab", gj, j)
    spin = -2.0 * np.einsum("ab,dc->dcab", j.T @ g, j)
    return _wedge_family(g) + rotated + spin


def complex_tachibana_ricci(g: np.ndarray, s: np.ndarray, j: np.ndarray,
                            tol: float = 1e-8) -> np.ndarray:
    """Qc(g,S): derivation action of complex wedges; needs g Hermitian."""
    g = np.asarray(g, float)
    j = np.asarray(j, float)
    if hermitian_violation(g, j) > tol:
        raise NonHermitianMetric("metric is not Hermitian w.r.t. the complex structure")
    return _endo_family_dot_bilinear(_complex_wedge_family(g, j), np.asarray(s, float))


def quad_eval(t: np.ndarray, u, v, x, y) -> float:
    return float(np.einsum("ijab,i,j,a,b->", t, u, v, x, y))


def holomorphic_first_slot_check(qc: np.ndarray, j: np.ndarray,
                                 scale: float | None = None) -> float:
    """Max violation of Qc(x, Jx; ., .) = 0, relative to the tensor scale.

    Vanishing for every x is equivalent to the (u,v)-symmetrised form of
    Qc contracted with J being zero, which is what gets measured.  Pass a
    larger reference ``scale`` when qc itself is expected to be roundoff.
    """
    contracted = np.einsum("imab,mk->ikab", qc, j)
    sym = 0.5 * (contracted + np.einsum("kiab->ikab", contracted))
    reference = max_norm(qc) if scale is None else max(scale, max_norm(qc))
    return max_norm(sym) / max(reference, ABS_FLOOR)


# -- Deszcz quotient -----------------------------------------------------------


@dataclass(frozen=True)
class DeszczSample:
    """One evaluation of the quotient (R.S)/(Q(g,S)) on a direction and plane."""

    numerator: float
    denominator: float
    defined: bool
    value: float | None
    threshold: float  # the absolute bound the denominator was tested against


def dependence_scale(q: np.ndarray, g: np.ndarray, s: np.ndarray) -> float:
    """Reference magnitude for 'Q(g,S) depends on this plane' tests.

    The floor ||g|| * ||S|| keeps roundoff noise in an identically zero
    Q(g,S) (Einstein points) from counting as curvature dependence.
    """
    return max(max_norm(q), max_norm(g) * max_norm(s), ABS_FLOOR)


def deszcz_sample(rs: np.ndarray, q: np.ndarray, v, x, y, scale: float,
                  threshold: float = 1e-8) -> DeszczSample:
    num = quad_eval(rs, v, v, x, y)
    den = quad_eval(q, v, v, x, y)
    bound = threshold * scale
    defined = abs(den) > bound
    return DeszczSample(num, den, defined, num / den if defined else None, bound)


def deszcz_L(bundle: CurvatureBundle, v, x, y, threshold: float = 1e-8) -> DeszczSample:
    """Deszcz Ricci quotient at one point, direction and plane.

    Defined only where |Q(g,S)(v,v;x,y)| clears the dependence threshold.
    """
    rs = r_dot_s(bundle)
    q = tachibana_ricci(bundle.metric.g, bundle.ricci)
    scale = dependence_scale(q, bundle.metric.g, bundle.ricci)
    return deszcz_sample(rs, q, v, x, y, scale, threshold)


# -- experiments ----------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentResult:
    ladder: tuple[float, ...]
    defects: tuple[float, ...]
    measured: float  # extrapolated leading coefficient
    predicted: float
    abs_error: float
    rel_error: float
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return np.isfinite(self.measured)


def _extrapolate_to_zero(xs, ys) -> float:
    """Neville polynomial extrapolation of y(x) to x = 0."""
    xs = [float(x) for x in xs]
    table = [float(y) for y in ys]
    k = len(table)
    for level in range(1, k):
        for i in range(k - level):
            x0, x1 = xs[i], xs[i + level]
            table[i] = (x1 * table[i] - x0 * table[i + 1]) / (x1 - x0)
    return table[0]


DEFAULT_EPS_LADDER = (1e-2, 5e-3, 2.5e-3)
DEFAULT_H_LADDER = (0.02, 0.01)


def rotation_experiment(g, s, j, v, x, y, ladder=DEFAULT_EPS_LADDER,
                        tol: float = 1e-8) -> ExperimentResult:
    """First-order response of S(v,v) to a holomorphic plane rotation.

    For an orthonormal pair (x, y) the perturbed vector is
    v'' = v + eps (x wedge_g y) v + eps (Jx wedge_g Jy) v; the slope of
    S(v'', v'') - S(v, v) in eps converges to -Qc(g,S)(v, v; x, y).
    """
    g = np.asarray(g, float)
    s = np.asarray(s, float)
    j = np.asarray(j, float)
    v = np.asarray(v, float)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    gram = np.array([[x @ g @ x, x @ g @ y], [y @ g @ x, y @ g @ y]])
    if max_norm(gram - np.eye(2)) > tol:
        raise ValueError("plane basis must be g-orthonormal")
    rot = wedge_g_matrix(g, x, y) + wedge_g_matrix(g, j @ x, j @ y)
    base = float(v @ s @ v)
    defects = []
    for eps in ladder:
        w = v + eps * (rot @ v)
        defects.append(float(w @ s @ w) - base)
    slopes = [d / eps for d, eps in zip(defects, ladder)]
    measured = _extrapolate_to_zero(ladder, slopes)
    qc_vvxy = -2.0 * float((wedge_c_matrix(g, j, x, y) @ v) @ s @ v)
    predicted = -qc_vvxy
    abs_err = abs(measured - predicted)
    rel_err = abs_err / max(abs(predicted), ABS_FLOOR)
    return ExperimentResult(tuple(ladder), tuple(defects), measured, predicted,
                            abs_err, rel_err)


def parallelogram_loop(point, axis_a: int, axis_b: int, h: float):
    """Closed coordinate parallelogram based at ``point``: +a, +b, -a, -b."""
    p = np.asarray(point, float)
    m = p.shape[0]
    ea = np.eye(m)[axis_a]
    eb = np.eye(m)[axis_b]
    return [p, p + h * ea, p + h * ea + h * eb, p + h * eb, p]


def transport_experiment(potential: Expr, n: int, point, v, axis_a: int, axis_b: int,
                         ladder=DEFAULT_H_LADDER, steps: int = 32,
                         bundle: CurvatureBundle | None = None) -> ExperimentResult:
    """Quadratic response of S(v,v) to transport around a coordinate square.

    Transporting v around the loop (+a, +b, -a, -b) of side h returns
    v_h = v - h^2 R(d_a, d_b) v + O(h^3), so the h^2 coefficient of
    S(v_h, v_h) - S(v, v) converges to +(R.S)(v, v; d_a, d_b).  The
    defect vectors (v - v_h)/h^2 are kept in ``details`` for the vector-
    level holonomy check.
    """
    point = np.asarray(point, float)
    v = np.asarray(v, float)
    if bundle is None:
        bundle = curvature_bundle(metric_from_potential(potential, point, n))
    s = bundle.ricci
    base = float(v @ s @ v)
    defects = []
    vector_defects = []
    transported = []
    for h in ladder:
        vh = parallel_transport(potential, n, parallelogram_loop(point, axis_a, axis_b, h),
                                v, steps=steps)
        defects.append(float(vh @ s @ vh) - base)
        vector_defects.append((v - vh) / h**2)
        transported.append(vh)
    coeffs = [d / h**2 for d, h in zip(defects, ladder)]
    measured = _extrapolate_to_zero(ladder, coeffs)
    rs = r_dot_s(bundle)
    ea = np.eye(2 * n)[axis_a]
    eb = np.eye(2 * n)[axis_b]
    predicted = quad_eval(rs, v, v, ea, eb)
    abs_err = abs(measured - predicted)
    rel_err = abs_err / max(abs(predicted), ABS_FLOOR)
    details = {
        "vector_defects": [w.tolist() for w in vector_defects],
        "vector_predicted": (bundle.r13[:, axis_a, axis_b, :] @ v).tolist(),
        "transported": [w.tolist() for w in transported],
    }
    return ExperimentResult(tuple(ladder), tuple(defects), measured, predicted,
                            abs_err, rel_err, details)

"""Mode finding: the chart-dependent and the invariant point estimate.

The argmax of a chart density depends on the chart it is expressed in; the
argmax of the intrinsic density does not. Both are located by the same
derivative-free engine: a coarse scan over interior points of a search
coordinate, golden-section refinement of each local maximum, a parabolic
polish, and explicit probing of the domain boundaries, where the densities
of interest routinely diverge.

Boundary behaviour is classified from density values at shrinking arc-length
offsets: growth toward the boundary at a persistent ratio marks a divergent
boundary mode (its value is ``math.inf``), growth with ratio tending to 1 a
finite boundary maximum. A density that is constant to within the tie
tolerance everywhere is reported as flat — a distinguished result, since
returning one arbitrary argmax would be misleading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .density import (
    BetaParams,
    ChartDensity,
    IntrinsicDensity,
    beta_chart_density,
    beta_intrinsic_density,
)
from .manifold import (
    Chart,
    ManifoldModel,
    arclength_chart,
    chart_canonical_offset,
    chart_from_canonical_offset,
    interior_grid,
    naive_offset,
)

_SCAN_POINTS = 1024
_BOUNDARY_EPS = 1e-6        # arc-length offset of the innermost boundary probe
_GOLDEN_TOL = 1e-10
_POLISH_H = 1e-5
_TIE_REL = 1e-9             # relative density window for reporting co-modes
_FLAT_REL = 1e-9
_DIVERGENCE_RATIO = 1e-4    # probe growth beyond 1 + this flags divergence

_INV_PHI = 0.5 * (math.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class ModeResult:
    """A located maximizer (or the flat / boundary-divergent verdict).

    ``all_modes`` lists every canonical point whose density ties the global
    maximum within tolerance, sorted ascending; it is empty only for a flat
    density, where ``canonical_point`` and ``chart_point`` are NaN.
    """

    canonical_point: float
    chart_point: float
    density_value: float
    at_boundary: bool
    all_modes: tuple[float, ...]
    flat: bool = False


def _golden_max(f, a: float, b: float, tol: float) -> float:
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)


def _parabolic_polish(f, x: float, lo: float, hi: float) -> float:
    """One quadratic-vertex step; beats the flat-top noise plateau of pure
    value comparisons near a smooth maximum."""
    h = _POLISH_H * max(1.0, abs(x))
    xm, xp = x - h, x + h
    if xm <= lo or xp >= hi:
        return x
    fm, f0, fp = f(xm), f(x), f(xp)
    if not all(map(math.isfinite, (fm, f0, fp))):
        return x
    denom = fm - 2.0 * f0 + fp
    if denom >= 0.0:
        return x
    shift = 0.5 * h * (fm - fp) / denom
    if abs(shift) > h:
        return x
    return x + shift


def _boundary_candidate(eval_canonical, model: ManifoldModel, s_chart: Chart,
                        at_lo: bool) -> tuple[float, float] | None:
    """(canonical point, density value) if the density peaks at this boundary."""
    dom = model.canonical_domain
    theta_b = dom.lo if at_lo else dom.hi
    if not math.isfinite(theta_b):
        return None
    s_end = s_chart.domain.lo if at_lo else s_chart.domain.hi
    if not math.isfinite(s_end):
        return None

    vals = []
    for k in (1.0, 2.0, 4.0):
        sc = k * _BOUNDARY_EPS if at_lo else -k * _BOUNDARY_EPS
        theta, co = chart_canonical_offset(s_chart, s_end + sc, sc)
        vals.append(eval_canonical(theta, co))
    v1, v2, v4 = vals
    if any(math.isinf(v) for v in vals):
        return theta_b, math.inf
    if not (v1 > v2 > v4 > 0.0):
        return None
    if v1 / v2 > 1.0 + _DIVERGENCE_RATIO and v2 / v4 > 1.0 + _DIVERGENCE_RATIO:
        return theta_b, math.inf
    return theta_b, 2.0 * v1 - v2


def _numeric_mode(eval_canonical, model: ManifoldModel, search_chart: Chart,
                  report_chart: Chart) -> ModeResult:
    sdom = search_chart.domain

    def obj(x: float) -> float:
        theta, co = chart_canonical_offset(search_chart, x, naive_offset(sdom, x))
        return eval_canonical(theta, co)

    grid = interior_grid(sdom, _SCAN_POINTS)
    vals = [obj(x) for x in grid]

    s_chart = arclength_chart(model)
    boundary = [c for c in (_boundary_candidate(eval_canonical, model, s_chart, True),
                            _boundary_candidate(eval_canonical, model, s_chart, False))
                if c is not None]

    if not boundary and all(map(math.isfinite, vals)):
        vmax, vmin = max(vals), min(vals)
        if vmax - vmin <= _FLAT_REL * max(abs(vmax), 1e-300):
            return ModeResult(
                canonical_point=math.nan,
                chart_point=math.nan,
                density_value=0.5 * (vmax + vmin),
                at_boundary=False,
                all_modes=(),
                flat=True,
            )

    # refine every interior local maximum of the scan
    candidates: list[tuple[float, float]] = list(boundary)
    n = len(grid)
    for i in range(n):
        v = vals[i]
        if not math.isfinite(v):
            continue
        left = vals[i - 1] if i > 0 else -math.inf
        right = vals[i + 1] if i < n - 1 else -math.inf
        if v < left or v < right:
            continue
        lo = grid[i - 1] if i > 0 else grid[0]
        hi = grid[i + 1] if i < n - 1 else grid[-1]
        if hi <= lo:
            continue
        tol = _GOLDEN_TOL * max(1.0, abs(lo), abs(hi))
        x_star = _golden_max(obj, lo, hi, tol)
        x_star = _parabolic_polish(obj, x_star, sdom.lo, sdom.hi)
        theta_star, _ = chart_canonical_offset(search_chart, x_star, naive_offset(sdom, x_star))
        candidates.append((theta_star, obj(x_star)))

    if not candidates:
        raise ArithmeticError(
            "mode search found no usable density values on the scan grid")

    # cluster refinements of the same peak
    candidates.sort()
    merged: list[tuple[float, float]] = []
    for theta, v in candidates:
        if merged and abs(theta - merged[-1][0]) < 1e-7:
            if v > merged[-1][1]:
                merged[-1] = (theta, v)
        else:
            merged.append((theta, v))

    best = max(v for _, v in merged)
    if math.isinf(best):
        modes = [(theta, v) for theta, v in merged if math.isinf(v)]
    else:
        cut = best - _TIE_REL * abs(best)
        modes = [(theta, v) for theta, v in merged if v >= cut]

    boundary_points = {theta for theta, _ in boundary}
    all_modes = tuple(sorted(theta for theta, _ in modes))
    canonical_point = all_modes[0]
    try:
        chart_point, _ = chart_from_canonical_offset(
            report_chart, canonical_point,
            naive_offset(report_chart.canonical_domain, canonical_point))
    except (ZeroDivisionError, OverflowError, ValueError):
        chart_point = math.inf
    return ModeResult(
        canonical_point=canonical_point,
        chart_point=chart_point,
        density_value=best,
        at_boundary=any(theta in boundary_points for theta, _ in modes),
        all_modes=all_modes,
    )


def map_estimate(rho: ChartDensity, search_chart: Chart | None = None) -> ModeResult:
    """Argmax of the chart density over its own chart: chart-dependent by design."""
    if search_chart is None:
        search_chart = arclength_chart(rho.model)

    def eval_canonical(theta: float, co: float) -> float:
        x, xc = chart_from_canonical_offset(rho.chart, theta, co)
        return rho.value_offset(x, xc)

    return _numeric_mode(eval_canonical, rho.model, search_chart, rho.chart)


def mapi_estimate(p: IntrinsicDensity, report_chart: Chart,
                  search_chart: Chart | None = None) -> ModeResult:
    """Argmax of the intrinsic density: the same point whatever chart the
    search runs in, reported in ``report_chart`` coordinates."""
    if search_chart is None:
        search_chart = arclength_chart(p.model)
    return _numeric_mode(p.value_offset, p.model, search_chart, report_chart)


def beta_mode_analytic(params: BetaParams, intrinsic: bool) -> ModeResult:
    """Closed-form mode structure of a Beta density.

    With effective exponents ``(a, b)`` — shifted by one half for the
    intrinsic form — the density is proportional to
    ``theta**a (1-theta)**b``: an interior mode at ``a/(a+b)`` when both are
    positive, boundary or bimodal behaviour otherwise, flat when both vanish.
    """
    shift = 0.5 if intrinsic else 1.0
    a = params.alpha - shift
    b = params.beta - shift
    density = beta_intrinsic_density(params) if intrinsic else beta_chart_density(params)

    if a == 0.0 and b == 0.0:
        return ModeResult(
            canonical_point=math.nan,
            chart_point=math.nan,
            density_value=math.exp(-params.log_norm),
            at_boundary=False,
            all_modes=(),
            flat=True,
        )
    if a > 0.0 and b > 0.0:
        theta = a / (a + b)
        return ModeResult(
            canonical_point=theta,
            chart_point=theta,
            density_value=density.value(theta),
            at_boundary=False,
            all_modes=(theta,),
        )
    if a < 0.0 and b < 0.0:
        return ModeResult(0.0, 0.0, math.inf, True, (0.0, 1.0))
    if a < 0.0:
        return ModeResult(0.0, 0.0, math.inf, True, (0.0,))
    if b < 0.0:
        return ModeResult(1.0, 1.0, math.inf, True, (1.0,))
    # one exponent is exactly zero, the other positive: finite boundary mode
    theta = 0.0 if a == 0.0 else 1.0
    return ModeResult(theta, theta, math.exp(-params.log_norm), True, (theta,))

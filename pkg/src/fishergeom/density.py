"""Intrinsic densities, chart densities, and the conversions between them.

A chart density ``rho`` is a density with respect to the Lebesgue measure of
one particular coordinate; the intrinsic density ``p`` is the density with
respect to the Riemannian volume measure and does not depend on any chart.
They are related pointwise by ``rho = p * sqrt(G_chart)``, and chart
densities move between charts by the usual change-of-variables rule with the
absolute Jacobian.

Densities are carried as evaluation functions plus metadata, never as
sample arrays; grids appear only at the emit layer. Every density holds two
evaluators: the public single-argument ``value`` defined on the domain
closure (endpoint evaluation returns the one-sided limit, ``math.inf`` when
the density diverges there), and ``value_offset(x, xc)`` following the
quadrature module's exact-offset convention. All Beta arithmetic runs
through log-gamma and ``exp`` so large shape parameters cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .manifold import (
    Chart,
    DomainError,
    Interval,
    ManifoldModel,
    bernoulli_model,
    chart_canonical_offset,
    chart_d_canonical_offset,
    chart_from_canonical_offset,
    identity_chart,
    model_fisher_metric_offset,
    naive_offset,
    verify_offset,
)
from .quadrature import (
    QuadratureConfig,
    QuadratureConvergenceError,
    integrate_chart,
    integrate_manifold,
)


class ChartModelMismatchError(ValueError):
    """A chart was combined with a density living on a different model."""


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of a Beta density; both must be positive."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha!r}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta!r}")

    @property
    def log_norm(self) -> float:
        """``log B(alpha, beta)`` via log-gamma."""
        return math.lgamma(self.alpha) + math.lgamma(self.beta) - math.lgamma(self.alpha + self.beta)


@dataclass(frozen=True)
class ChartDensity:
    """A density over one chart coordinate (the integration form)."""

    model: ManifoldModel
    chart: Chart
    value: Callable[[float], float]
    label: str
    value_offset: Callable[[float, float], float] = field(default=None, repr=False)

    def __post_init__(self):
        if self.chart.model_name != self.model.name:
            raise ChartModelMismatchError(
                f"chart '{self.chart.name}' belongs to model '{self.chart.model_name}', "
                f"not '{self.model.name}'"
            )
        if self.value_offset is None:
            fn = self.value
            object.__setattr__(self, "value_offset", lambda x, xc: fn(x))


@dataclass(frozen=True)
class IntrinsicDensity:
    """A density with respect to the Riemannian measure; chart-free."""

    model: ManifoldModel
    value: Callable[[float], float]
    label: str
    value_offset: Callable[[float, float], float] = field(default=None, repr=False)

    def __post_init__(self):
        if self.value_offset is None:
            fn = self.value
            object.__setattr__(self, "value_offset", lambda x, xc: fn(x))


def _split_offsets(x: float, co: float, interval: Interval) -> tuple[float, float]:
    """Distances of ``x`` to both interval endpoints given its signed offset.

    The near side comes from ``co`` exactly; the far side is the naive
    subtraction, which is well conditioned there.
    """
    co = verify_offset(interval, x, co)
    lo_off = co if co > 0 else (x - interval.lo if math.isfinite(interval.lo) else math.inf)
    hi_off = -co if co < 0 else (interval.hi - x if math.isfinite(interval.hi) else math.inf)
    return lo_off, hi_off


def _power_pair_core(a_exp: float, b_exp: float, log_norm: float):
    """Evaluator for ``lo**a * hi**b / exp(log_norm)`` on the unit interval.

    ``lo`` and ``hi`` are the distances to 0 and 1. Exact zeros are endpoint
    evaluations and return the one-sided limit (0, the finite value, or inf).
    """
    unit = Interval(0.0, 1.0)

    def core(theta: float, co: float) -> float:
        lo_off, hi_off = _split_offsets(theta, co, unit)
        if lo_off <= 0.0:
            if a_exp > 0.0:
                return 0.0
            if a_exp == 0.0:
                return math.exp(b_exp * math.log(hi_off) - log_norm)
            return math.inf
        if hi_off <= 0.0:
            if b_exp > 0.0:
                return 0.0
            if b_exp == 0.0:
                return math.exp(a_exp * math.log(lo_off) - log_norm)
            return math.inf
        return math.exp(a_exp * math.log(lo_off) + b_exp * math.log(hi_off) - log_norm)

    return core


def beta_chart_density(params: BetaParams) -> ChartDensity:
    """The Beta pdf as a chart density on the coin family, theta chart.

    ``rho(theta) = theta**(alpha-1) (1-theta)**(beta-1) / B(alpha, beta)``.
    """
    model = bernoulli_model()
    chart = identity_chart(model)
    core = _power_pair_core(params.alpha - 1.0, params.beta - 1.0, params.log_norm)

    def value(theta: float) -> float:
        model.require_in_closure(theta)
        return core(theta, naive_offset(chart.domain, theta))

    return ChartDensity(
        model=model,
        chart=chart,
        value=value,
        label=f"Beta({params.alpha:g},{params.beta:g})",
        value_offset=core,
    )


def beta_intrinsic_density(params: BetaParams) -> IntrinsicDensity:
    """Closed form of the intrinsic Beta density on the coin family.

    Dividing the Beta pdf by ``sqrt(G)`` shifts both exponents by one half:
    ``p(theta) = theta**(alpha-0.5) (1-theta)**(beta-0.5) / B(alpha, beta)``.
    """
    model = bernoulli_model()
    core = _power_pair_core(params.alpha - 0.5, params.beta - 0.5, params.log_norm)

    def value(theta: float) -> float:
        model.require_in_closure(theta)
        return core(theta, naive_offset(model.canonical_domain, theta))

    return IntrinsicDensity(
        model=model,
        value=value,
        label=f"Beta({params.alpha:g},{params.beta:g}) intrinsic",
        value_offset=core,
    )


def _guard(core):
    """Map arithmetic blow-ups at sub-ulp limit-region points to ``inf``.

    Composed evaluators can be driven closer to a boundary than their
    intermediate quantities can represent (underflowed offsets, divergent
    metric); the quadrature zero-weights non-finite values there, and the
    public closure evaluators never reach this path.
    """

    def guarded(x: float, xc: float) -> float:
        try:
            return core(x, xc)
        except (ZeroDivisionError, OverflowError, ValueError):
            return math.inf

    return guarded


def _endpoint_limit(fn: Callable[[float], float], interval: Interval, at_lo: bool) -> float:
    """One-sided limit of ``fn`` at a finite endpoint, by geometric probing.

    Classifies by the ratio of values at offsets shrinking by 4x: persistent
    growth means divergence (``inf``), persistent decay means 0, otherwise
    the Richardson-extrapolated value for a linear approach is returned.
    """
    if interval.finite:
        scale = interval.hi - interval.lo
    else:
        scale = max(1.0, abs(interval.lo if at_lo else interval.hi))
    x0 = interval.lo if at_lo else interval.hi
    direction = 1.0 if at_lo else -1.0
    vals = [fn(x0 + direction * scale * 1e-5 * 4.0 ** -j) for j in range(4)]
    if any(math.isinf(v) for v in vals):
        return math.inf
    if all(abs(v) < 1e-300 for v in vals):
        return 0.0
    if vals[-2] == 0.0:
        return vals[-1]
    r = vals[-1] / vals[-2]
    if r > 1.0 + 1e-4:
        return math.inf
    if 0.0 <= r < 1.0 - 1e-4:
        return 0.0
    return (4.0 * vals[-1] - vals[-2]) / 3.0


def _closure_value(core, interval: Interval):
    """Public single-argument evaluator over the closure of ``interval``."""

    def value(x: float) -> float:
        if not interval.in_closure(x):
            raise DomainError(
                f"coordinate {x!r} is outside the closure of [{interval.lo}, {interval.hi}]"
            )
        if x == interval.lo and math.isfinite(interval.lo):
            return _endpoint_limit(lambda t: core(t, naive_offset(interval, t)), interval, True)
        if x == interval.hi and math.isfinite(interval.hi):
            return _endpoint_limit(lambda t: core(t, naive_offset(interval, t)), interval, False)
        return core(x, naive_offset(interval, x))

    return value


def intrinsic_from_chart(rho: ChartDensity) -> IntrinsicDensity:
    """Recover the chart-free density: ``p = rho / sqrt(G_chart)``.

    The result is the same whichever chart ``rho`` was expressed in; that is
    the point of the construction.
    """
    model, chart = rho.model, rho.chart

    @_guard
    def core(theta: float, co: float) -> float:
        co = verify_offset(model.canonical_domain, theta, co)
        x, xc = chart_from_canonical_offset(chart, theta, co)
        d = chart_d_canonical_offset(chart, x, xc)
        g = model_fisher_metric_offset(model, theta, co) * d * d
        return rho.value_offset(x, xc) / math.sqrt(g)

    return IntrinsicDensity(
        model=model,
        value=_closure_value(core, model.canonical_domain),
        label=rho.label,
        value_offset=core,
    )


def chart_from_intrinsic(p: IntrinsicDensity, chart: Chart) -> ChartDensity:
    """Express an intrinsic density for integration in ``chart``:
    ``rho(x) = p(theta(x)) * sqrt(G_chart(x))``."""
    if chart.model_name != p.model.name:
        raise ChartModelMismatchError(
            f"chart '{chart.name}' belongs to model '{chart.model_name}', not '{p.model.name}'"
        )
    model = p.model

    @_guard
    def core(x: float, xc: float) -> float:
        xc = verify_offset(chart.domain, x, xc)
        theta, co = chart_canonical_offset(chart, x, xc)
        d = chart_d_canonical_offset(chart, x, xc)
        g = model_fisher_metric_offset(model, theta, co) * d * d
        return p.value_offset(theta, co) * math.sqrt(g)

    return ChartDensity(
        model=model,
        chart=chart,
        value=_closure_value(core, chart.domain),
        label=p.label,
        value_offset=core,
    )


def pushforward(rho: ChartDensity, target: Chart) -> ChartDensity:
    """Re-express a chart density in another chart of the same model.

    Change of variables with the absolute Jacobian:
    ``rho_target(y) = rho_source(x(y)) * |dx/dy|``; the total mass is
    preserved. Pushing a density to its own chart returns it unchanged.
    """
    if target.model_name != rho.model.name:
        raise ChartModelMismatchError(
            f"chart '{target.name}' belongs to model '{target.model_name}', "
            f"not '{rho.model.name}'"
        )
    if target.name == rho.chart.name:
        return rho
    source = rho.chart

    @_guard
    def core(y: float, yc: float) -> float:
        yc = verify_offset(target.domain, y, yc)
        theta, co = chart_canonical_offset(target, y, yc)
        x, xc = chart_from_canonical_offset(source, theta, co)
        jac = chart_d_canonical_offset(target, y, yc) / chart_d_canonical_offset(source, x, xc)
        return rho.value_offset(x, xc) * abs(jac)

    return ChartDensity(
        model=rho.model,
        chart=target,
        value=_closure_value(core, target.domain),
        label=rho.label,
        value_offset=core,
    )


def normalization_check(d: ChartDensity | IntrinsicDensity,
                        cfg: QuadratureConfig | None = None) -> float:
    """Numerically computed total mass of a density.

    The caller compares against 1; nothing is renormalized here, so tests
    can feed deliberately broken densities through. Non-convergent
    quadrature raises with the achieved error estimate attached.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if isinstance(d, ChartDensity):
        res = integrate_chart(d.value_offset, d.chart.domain, cfg)
    else:
        res = integrate_manifold(d.value_offset, d.model, None, cfg)
    if not res.converged:
        raise QuadratureConvergenceError(
            f"normalization integral for '{d.label}' did not converge", res
        )
    return res.value

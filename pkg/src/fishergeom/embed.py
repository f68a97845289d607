"""Planar embedding of the coin family and density-curve sampling.

The coin family with its Fisher metric is isometric to the quarter circle of
radius 2: ``e(theta) = (2 sqrt(theta), 2 sqrt(1 - theta))``, with theta = 0
at (0, 2) and theta = 1 at (2, 0). Curve length along the embedding equals
the Fisher-Rao distance, which the tests verify against fine polylines.

``sample_curve`` tabulates a density over a chart grid carrying *both* the
chart density and the intrinsic density per row (plus the embedded
coordinates), which is exactly the data needed to plot the two side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .density import ChartDensity, IntrinsicDensity, chart_from_intrinsic, intrinsic_from_chart, pushforward
from .manifold import Chart, DomainError, chart_canonical_offset, interior_grid, naive_offset


@dataclass(frozen=True)
class EmbeddedPoint:
    x: float
    y: float


def embed_bernoulli(theta: float) -> EmbeddedPoint:
    """Embed a coin-family point on the radius-2 quarter circle."""
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta!r}")
    return EmbeddedPoint(2.0 * math.sqrt(theta), 2.0 * math.sqrt(1.0 - theta))


@dataclass(frozen=True)
class CurveRow:
    chart_coord: float
    canonical_coord: float
    rho: float
    p: float
    embed_x: float
    embed_y: float


@dataclass(frozen=True)
class DensityCurve:
    model_name: str
    chart_name: str
    label: str
    samples: int
    rows: tuple[CurveRow, ...]


def sample_curve(d: ChartDensity | IntrinsicDensity, chart: Chart, n: int) -> DensityCurve:
    """Tabulate a density over ``n`` interior grid points of ``chart``.

    Rows are strictly increasing in the chart coordinate and hold the chart
    density, the intrinsic density, and the embedded point (NaN off the coin
    family, which is the only embedded model).
    """
    if n < 2:
        raise ValueError("a curve needs at least 2 samples")
    if isinstance(d, ChartDensity):
        p = intrinsic_from_chart(d)
        rho = d if d.chart.name == chart.name else pushforward(d, chart)
    else:
        p = d
        rho = chart_from_intrinsic(d, chart)
    model = p.model
    embeddable = model.name == "bernoulli"

    rows = []
    for x in interior_grid(chart.domain, n):
        xc = naive_offset(chart.domain, x)
        theta, co = chart_canonical_offset(chart, x, xc)
        if embeddable:
            pt = embed_bernoulli(theta)
            ex, ey = pt.x, pt.y
        else:
            ex, ey = math.nan, math.nan
        rows.append(CurveRow(
            chart_coord=x,
            canonical_coord=theta,
            rho=rho.value_offset(x, xc),
            p=p.value_offset(theta, co),
            embed_x=ex,
            embed_y=ey,
        ))
    return DensityCurve(
        model_name=model.name,
        chart_name=chart.name,
        label=d.label,
        samples=n,
        rows=tuple(rows),
    )

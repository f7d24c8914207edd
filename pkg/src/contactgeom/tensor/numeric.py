"""Finite-difference curvature from metric samples, for cross-checking.

Everything stays in ``Fraction`` so the only error is the truncation error
of second-order central differences (O(h²) with h = 2^-20).
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import PoleAtPoint
from .field import TensorField
from .geometry import Geometry, gauss_inverse

STEP = Fraction(1, 2**20)

Matrix = list[list[Fraction]]


def sample_metric(g: TensorField, point: Sequence[Fraction]) -> Matrix:
    coords = g.chart.coordinates
    p = dict(zip(coords, point))
    n = g.dimension
    return [[g[i, j].evaluate(p) for j in range(n)] for i in range(n)]


def _shift(point: Sequence[Fraction], k: int, delta: Fraction) -> list[Fraction]:
    q = list(point)
    q[k] += delta
    return q


def fd_christoffel(g: TensorField, point: Sequence[Fraction], h: Fraction = STEP) -> list:
    """Γ[h][i][j] at ``point`` from central differences of the metric."""
    n = g.dimension
    gm = sample_metric(g, point)
    ginv, _ = gauss_inverse(gm, Fraction(0), Fraction(1))
    dg = []  # dg[c][a][b] = ∂_c g_ab
    for c in range(n):
        plus = sample_metric(g, _shift(point, c, h))
        minus = sample_metric(g, _shift(point, c, -h))
        dg.append([[(plus[a][b] - minus[a][b]) / (2 * h) for b in range(n)] for a in range(n)])
    first = [[[(dg[i][t][j] + dg[j][t][i] - dg[t][i][j]) / 2 for j in range(n)] for i in range(n)] for t in range(n)]
    return [
        [[sum((ginv[m][t] * first[t][i][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        for m in range(n)
    ]


def fd_riemann(g: TensorField, point: Sequence[Fraction], h: Fraction = STEP) -> dict:
    """R[h, k, j, i] at ``point`` using a nested stencil for ∂Γ."""
    n = g.dimension
    G = fd_christoffel(g, point, h)
    dG = []  # dG[k][a][b][c] = ∂_k Γ^a_bc
    for k in range(n):
        plus = fd_christoffel(g, _shift(point, k, h), h)
        minus = fd_christoffel(g, _shift(point, k, -h), h)
        dG.append([[[(plus[a][b][c] - minus[a][b][c]) / (2 * h) for c in range(n)] for b in range(n)] for a in range(n)])
    out = {}
    for a in range(n):
        for k in range(n):
            for j in range(n):
                for i in range(n):
                    v = dG[k][a][j][i] - dG[j][a][k][i]
                    for m in range(n):
                        v += G[a][k][m] * G[m][j][i] - G[a][j][m] * G[m][k][i]
                    out[a, k, j, i] = v
    return out


def random_points(
    geometry: Geometry, count: int, seed: int = 0, spread: int = 3
) -> list[dict[str, Fraction]]:
    """Rational points where the metric and its curvature have no pole."""
    rng = random.Random(seed)
    coords = geometry.chart.coordinates
    points: list[dict[str, Fraction]] = []
    while len(points) < count:
        p = {c: Fraction(rng.randint(-spread * 8, spread * 8), rng.randint(1, 8)) for c in coords}
        try:
            for comp in geometry.riemann.components.flat:
                comp.evaluate(p)
            if sample_metric_det(geometry.metric, [p[c] for c in coords]) == 0:
                continue
        except PoleAtPoint:
            continue
        points.append(p)
    return points


def sample_metric_det(g: TensorField, point: Sequence[Fraction]) -> Fraction:
    try:
        _, det = gauss_inverse(sample_metric(g, point), Fraction(0), Fraction(1))
    except ZeroDivisionError:
        return Fraction(0)
    return det


def curvature_crosscheck(geometry: Geometry, points: Sequence[Mapping[str, Fraction]]) -> float:
    """Largest relative error |fd - exact| / max(|exact|, 1) over all components and points."""
    coords = geometry.chart.coordinates
    worst = Fraction(0)
    for p in points:
        fd = fd_riemann(geometry.metric, [Fraction(p[c]) for c in coords])
        for idx, approx in fd.items():
            exact = geometry.riemann[idx].evaluate(p)
            err = abs(approx - exact) / max(abs(exact), Fraction(1))
            worst = max(worst, err)
    return float(worst)

"""Levi-Civita geometry of a metric on one chart, computed exactly.

Curvature convention: R(X, Y) = [∇_X, ∇_Y] - ∇_[X,Y], with components

    R(∂_k, ∂_j) ∂_i = R^h_{kji} ∂_h      stored as riemann[h, k, j, i]

and Ric(Y, Z) = trace(X ↦ R(X, Y)Z), i.e. Ric_{ji} = R^k_{kji}.
Covariant derivatives append the direction as the *last* covariant slot.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TypeVar, Union

import numpy as np

from ..errors import ChartMismatch, DegenerateMetric, SlotMismatch
from ..symbolic import RationalFunction
from .field import Chart, TensorField, einsum

T = TypeVar("T")


# ---------------------------------------------------------------------------
# Linear algebra over an exact field (RationalFunction or Fraction entries)

def gauss_inverse(matrix: Sequence[Sequence[T]], zero: T, one: T) -> tuple[list[list[T]], T]:
    """Gauss-Jordan inverse with determinant.  Raises ZeroDivisionError if singular."""
    n = len(matrix)
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    det = one
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv_p = one / p
        a[col] = [v * inv_p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a], det


def _metric_matrix(g: TensorField) -> list[list[RationalFunction]]:
    if g.valence != (0, 2):
        raise SlotMismatch(f"a metric is a (0,2) tensor, got valence {g.valence}")
    if not g.is_symmetric():
        raise DegenerateMetric("metric is not symmetric")
    n = g.dimension
    return [[g[i, j] for j in range(n)] for i in range(n)]


def metric_determinant(g: TensorField) -> RationalFunction:
    rows = _metric_matrix(g)
    try:
        _, det = gauss_inverse(rows, g.chart.zero(), g.chart.one())
    except ZeroDivisionError:
        return g.chart.zero()
    return det


def metric_inverse(g: "TensorField | Geometry") -> TensorField:
    if isinstance(g, Geometry):
        return g.inverse
    rows = _metric_matrix(g)
    try:
        inv, _ = gauss_inverse(rows, g.chart.zero(), g.chart.one())
    except ZeroDivisionError:
        raise DegenerateMetric("metric determinant vanishes identically") from None
    return TensorField._wrap(g.chart, (2, 0), np.array(inv, dtype=object))


# ---------------------------------------------------------------------------
# Connection and curvature

@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """Christoffel symbols Γ^h_{ij}, stored as gamma[h, i, j]."""

    chart: Chart
    gamma: np.ndarray

    def __getitem__(self, idx) -> RationalFunction:
        return self.gamma[idx]

    def as_array(self) -> np.ndarray:
        return self.gamma

    def is_symmetric(self) -> bool:
        return all(
            self.gamma[h, i, j] == self.gamma[h, j, i]
            for h, i, j in np.ndindex(*self.gamma.shape)
        )


def _christoffel(g: TensorField, ginv: TensorField) -> ConnectionCoefficients:
    chart = g.chart
    n = chart.dimension
    coords = chart.coordinates
    dg = [[[g[a, b].diff(coords[c]) for c in range(n)] for b in range(n)] for a in range(n)]
    # first kind: Γ_{t,ij} = ½(∂_i g_tj + ∂_j g_ti - ∂_t g_ij)
    first = np.empty((n, n, n), dtype=object)
    half = Fraction(1, 2)
    for t in range(n):
        for i in range(n):
            for j in range(i, n):
                v = (dg[t][j][i] + dg[t][i][j] - dg[i][j][t]) * half
                first[t, i, j] = first[t, j, i] = v
    gamma = np.empty((n, n, n), dtype=object)
    zero = chart.zero()
    for h in range(n):
        for i in range(n):
            for j in range(i, n):
                v = zero
                for t in range(n):
                    if not ginv[h, t].is_zero() and not first[t, i, j].is_zero():
                        v = v + ginv[h, t] * first[t, i, j]
                gamma[h, i, j] = gamma[h, j, i] = v
    gamma.flags.writeable = False
    return ConnectionCoefficients(chart, gamma)


def christoffel(g: "TensorField | Geometry") -> ConnectionCoefficients:
    if isinstance(g, Geometry):
        return g.connection
    return _christoffel(g, metric_inverse(g))


def _riemann(conn: ConnectionCoefficients) -> TensorField:
    chart = conn.chart
    n = chart.dimension
    coords = chart.coordinates
    G = conn.gamma
    dG = np.empty((n, n, n, n), dtype=object)  # dG[k, h, j, i] = ∂_k Γ^h_{ji}
    for k in range(n):
        for h, j, i in np.ndindex(n, n, n):
            dG[k, h, j, i] = G[h, j, i].diff(coords[k])
    zero = chart.zero()
    R = np.empty((n,) * 4, dtype=object)
    for h, k, j, i in np.ndindex(n, n, n, n):
        if j == k:
            R[h, k, j, i] = zero
            continue
        if j < k:
            R[h, k, j, i] = -R[h, j, k, i]
            continue
        v = dG[k, h, j, i] - dG[j, h, k, i]
        for m in range(n):
            a, b = G[h, k, m], G[m, j, i]
            if not a.is_zero() and not b.is_zero():
                v = v + a * b
            a, b = G[h, j, m], G[m, k, i]
            if not a.is_zero() and not b.is_zero():
                v = v - a * b
        R[h, k, j, i] = v
    return TensorField._wrap(chart, (1, 3), R)


def riemann(g: "TensorField | Geometry") -> TensorField:
    if isinstance(g, Geometry):
        return g.riemann
    return _riemann(christoffel(g))


def _ricci(R: TensorField) -> TensorField:
    n = R.dimension
    zero = R.chart.zero()
    ric = np.empty((n, n), dtype=object)
    for j in range(n):
        for i in range(n):
            v = zero
            for k in range(n):
                v = v + R[k, k, j, i]
            ric[j, i] = v
    return TensorField._wrap(R.chart, (0, 2), ric)


def ricci(g: "TensorField | Geometry") -> TensorField:
    if isinstance(g, Geometry):
        return g.ricci
    return _ricci(riemann(g))


def _full_trace(b: TensorField, ginv: TensorField) -> RationalFunction:
    return einsum("ij,ij->", ginv, b, valence=(0, 0)).value()


def scalar_curvature(g: "TensorField | Geometry") -> RationalFunction:
    if isinstance(g, Geometry):
        return g.scalar
    geo = Geometry.from_metric(g)
    return geo.scalar


@dataclass(frozen=True, eq=False)
class Geometry:
    """Everything derived from a metric, computed once at construction."""

    metric: TensorField
    inverse: TensorField
    connection: ConnectionCoefficients
    riemann: TensorField
    ricci: TensorField
    scalar: RationalFunction

    @classmethod
    def from_metric(cls, g: TensorField) -> "Geometry":
        ginv = metric_inverse(g)
        conn = _christoffel(g, ginv)
        R = _riemann(conn)
        ric = _ricci(R)
        return cls(g, ginv, conn, R, ric, _full_trace(ric, ginv))

    @property
    def chart(self) -> Chart:
        return self.metric.chart

    @property
    def ricci_operator(self) -> TensorField:
        """Q with g(QX, Y) = Ric(X, Y), as a (1,1) tensor."""
        return einsum("ik,kj->ij", self.inverse, self.ricci, valence=(1, 1))


MetricLike = Union[TensorField, Geometry]


def _geometry(g: MetricLike) -> Geometry:
    return g if isinstance(g, Geometry) else Geometry.from_metric(g)


def _connection(g: "MetricLike | ConnectionCoefficients") -> ConnectionCoefficients:
    if isinstance(g, ConnectionCoefficients):
        return g
    return christoffel(g)


# ---------------------------------------------------------------------------
# Derivatives

def _as_tensor(t: "TensorField | RationalFunction", chart: Chart) -> TensorField:
    if isinstance(t, RationalFunction):
        return TensorField.scalar(chart, t)
    return t


def covariant_derivative(
    t: "TensorField | RationalFunction", g: "MetricLike | ConnectionCoefficients"
) -> TensorField:
    """∇T with the direction as the new last covariant slot."""
    conn = _connection(g)
    chart = conn.chart
    t = _as_tensor(t, chart)
    if t.chart != chart:
        raise ChartMismatch(f"{t.chart.coordinates} vs {chart.coordinates}")
    p, q = t.valence
    n = chart.dimension
    G = conn.gamma
    coords = chart.coordinates
    comps = t.components
    out = np.empty((n,) * (t.rank + 1), dtype=object)
    for idx in np.ndindex(*comps.shape):
        for k in range(n):
            v = comps[idx].diff(coords[k])
            for s in range(p):
                for m in range(n):
                    gam = G[idx[s], k, m]
                    if gam.is_zero():
                        continue
                    src = idx[:s] + (m,) + idx[s + 1:]
                    c = comps[src]
                    if not c.is_zero():
                        v = v + gam * c
            for s in range(p, p + q):
                for m in range(n):
                    gam = G[m, k, idx[s]]
                    if gam.is_zero():
                        continue
                    src = idx[:s] + (m,) + idx[s + 1:]
                    c = comps[src]
                    if not c.is_zero():
                        v = v - gam * c
            out[idx + (k,)] = v
    return TensorField._wrap(chart, (p, q + 1), out)


def directional_covariant(nabla_t: TensorField, direction: TensorField) -> TensorField:
    """Contract the direction slot of ∇T with a vector: ∇_X T."""
    if direction.valence != (1, 0):
        raise SlotMismatch("direction must be a vector field")
    p, q = nabla_t.valence
    if q < 1:
        raise SlotMismatch("no direction slot to contract")
    arr = np.tensordot(nabla_t.components, direction.components, axes=([nabla_t.rank - 1], [0]))
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        out = np.empty((), dtype=object)
        out[()] = arr[()]
        arr = out
    return TensorField._wrap(nabla_t.chart, (p, q - 1), arr.copy())


def lie_derivative(t: "TensorField | RationalFunction", v: TensorField) -> "TensorField | RationalFunction":
    """Coordinate Lie derivative L_V T for any valence (scalars give V(f))."""
    if v.valence != (1, 0):
        raise SlotMismatch("the Lie derivative is taken along a vector field")
    chart = v.chart
    coords = chart.coordinates
    n = chart.dimension
    if isinstance(t, RationalFunction):
        if t.variables != chart.coordinates:
            raise ChartMismatch(f"{t.variables} vs {chart.coordinates}")
        out = chart.zero()
        for m in range(n):
            if not v[m].is_zero():
                out = out + v[m] * t.diff(coords[m])
        return out
    if t.chart != chart:
        raise ChartMismatch(f"{t.chart.coordinates} vs {chart.coordinates}")
    p, q = t.valence
    dV = [[v[a].diff(coords[m]) for m in range(n)] for a in range(n)]  # dV[a][m] = ∂_m V^a
    comps = t.components
    dT = [t.diff(c).components for c in coords]
    out = np.empty(comps.shape, dtype=object)
    for idx in np.ndindex(*comps.shape):
        val = chart.zero()
        for m in range(n):
            if not v[m].is_zero():
                val = val + v[m] * dT[m][idx]
        for s in range(p):
            for m in range(n):
                d = dV[idx[s]][m]
                if d.is_zero():
                    continue
                c = comps[idx[:s] + (m,) + idx[s + 1:]]
                if not c.is_zero():
                    val = val - c * d
        for s in range(p, p + q):
            for m in range(n):
                d = dV[m][idx[s]]
                if d.is_zero():
                    continue
                c = comps[idx[:s] + (m,) + idx[s + 1:]]
                if not c.is_zero():
                    val = val + c * d
        out[idx] = val
    return TensorField._wrap(chart, (p, q), out)


def lie_connection_variation(v: TensorField, g: MetricLike) -> TensorField:
    """L_V Γ^h_{ij} = ½ g^{ht}(∇_j(L_V g)_{it} + ∇_i(L_V g)_{jt} - ∇_t(L_V g)_{ij}).

    Returned as a (1,2) tensor indexed [h, i, j].
    """
    geo = _geometry(g)
    if v.chart != geo.chart:
        raise ChartMismatch(f"{v.chart.coordinates} vs {geo.chart.coordinates}")
    lg = lie_derivative(geo.metric, v)
    nlg = covariant_derivative(lg, geo.connection)  # nlg[a, b, c] = ∇_c (L_V g)_{ab}
    n = geo.chart.dimension
    bracket = np.empty((n, n, n), dtype=object)  # bracket[t, i, j]
    for t, i, j in np.ndindex(n, n, n):
        bracket[t, i, j] = nlg[i, t, j] + nlg[j, t, i] - nlg[i, j, t]
    b = TensorField._wrap(geo.chart, (0, 3), bracket)
    return einsum("ht,tij->hij", geo.inverse, b, valence=(1, 2)) * Fraction(1, 2)


def gradient(f: RationalFunction, g: MetricLike) -> TensorField:
    ginv = metric_inverse(g)
    chart = ginv.chart
    df = TensorField.covector(chart, [f.diff(c) for c in chart.coordinates])
    return einsum("ij,j->i", ginv, df, valence=(1, 0))


def hessian(f: RationalFunction, g: "MetricLike | ConnectionCoefficients") -> TensorField:
    """Hess f = ∇df, symmetric (0,2)."""
    conn = _connection(g)
    chart = conn.chart
    df = TensorField.covector(chart, [f.diff(c) for c in chart.coordinates])
    return covariant_derivative(df, conn)


# ---------------------------------------------------------------------------
# Index gymnastics

def raise_index(t: TensorField, slot: int, g: MetricLike) -> TensorField:
    """Raise covariant ``slot``; the new index becomes the last contravariant slot."""
    p, q = t.valence
    if not (p <= slot < t.rank):
        raise SlotMismatch(f"slot {slot} is not covariant in valence {t.valence}")
    ginv = metric_inverse(g)
    arr = np.tensordot(ginv.components, t.components, axes=([1], [slot]))
    arr = np.asarray(arr, dtype=object)
    # tensordot puts the new index first: move it behind the other contravariant ones
    order = list(range(1, p + 1)) + [0] + list(range(p + 1, t.rank))
    return TensorField._wrap(t.chart, (p + 1, q - 1), np.transpose(arr, order).copy())


def lower_index(t: TensorField, slot: int, g: MetricLike) -> TensorField:
    """Lower contravariant ``slot``; the new index becomes the first covariant slot."""
    p, q = t.valence
    if not (0 <= slot < p):
        raise SlotMismatch(f"slot {slot} is not contravariant in valence {t.valence}")
    metric = g.metric if isinstance(g, Geometry) else g
    arr = np.tensordot(metric.components, t.components, axes=([1], [slot]))
    arr = np.asarray(arr, dtype=object)
    rest_up = [i for i in range(p) if i != slot]
    # after tensordot: [new, remaining slots of t in order]
    remaining = [i for i in range(t.rank) if i != slot]
    pos = {s: k + 1 for k, s in enumerate(remaining)}
    order = [pos[s] for s in rest_up] + [0] + [pos[s] for s in range(p, t.rank)]
    return TensorField._wrap(t.chart, (p - 1, q + 1), np.transpose(arr, order).copy())


def raise_lower(t: TensorField, slot: int, direction: str, g: MetricLike) -> TensorField:
    if direction == "raise":
        return raise_index(t, slot, g)
    if direction == "lower":
        return lower_index(t, slot, g)
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


def norm_squared(b: TensorField, g: MetricLike) -> RationalFunction:
    """b^{ij} b_{ij} for a (0,2) tensor."""
    ginv = metric_inverse(g)
    return einsum("ia,jb,ab,ij->", ginv, ginv, b, b, valence=(0, 0)).value()


def metric_trace(b: TensorField, g: MetricLike) -> RationalFunction:
    return _full_trace(b, metric_inverse(g))

"""Charts and dense tensor fields with rational-function components.

Index layout: a tensor of valence (p, q) stores its p contravariant indices
first, then its q covariant ones.  A (1,1) tensor ``A[i, j]`` therefore acts
on vectors as ``(AX)^i = A^i_j X^j``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from ..errors import ChartMismatch, SlotMismatch, UnknownVariable
from ..symbolic import RationalFunction, parse_expression

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class Chart:
    coordinates: tuple[str, ...]

    def __post_init__(self) -> None:
        coords = tuple(self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if not coords:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        for c in coords:
            if not isinstance(c, str) or not _IDENT.fullmatch(c):
                raise ValueError(f"invalid coordinate name {c!r}")

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    def index(self, name: str) -> int:
        try:
            return self.coordinates.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a coordinate of {self.coordinates}") from None

    def coordinate(self, name: str) -> RationalFunction:
        return RationalFunction.variable(self.coordinates, name)

    def constant(self, c: int | Fraction) -> RationalFunction:
        return RationalFunction.constant(self.coordinates, c)

    def zero(self) -> RationalFunction:
        return self.constant(0)

    def one(self) -> RationalFunction:
        return self.constant(1)

    def parse(self, text: str) -> RationalFunction:
        return parse_expression(text, self.coordinates)

    def coerce(self, value: object) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.variables != self.coordinates:
                raise ChartMismatch(f"component over {value.variables}, chart is {self.coordinates}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return self.constant(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact component")

    def point(self, values: Mapping[str, object] | Sequence[object]) -> dict[str, Fraction]:
        """Build a full coordinate assignment from a mapping or a sequence."""
        if isinstance(values, Mapping):
            missing = [c for c in self.coordinates if c not in values]
            extra = [k for k in values if k not in self.coordinates]
            if missing or extra:
                raise UnknownVariable(f"point must assign exactly {self.coordinates}")
            return {c: Fraction(values[c]) for c in self.coordinates}
        values = list(values)
        if len(values) != self.dimension:
            raise ValueError(f"point needs {self.dimension} coordinates")
        return {c: Fraction(v) for c, v in zip(self.coordinates, values)}


def _readonly(arr: object) -> np.ndarray:
    if not isinstance(arr, np.ndarray):
        # arithmetic on 0-d object arrays hands back the bare element
        box = np.empty((), dtype=object)
        box[()] = arr
        arr = box
    arr.flags.writeable = False
    return arr


class TensorField:
    __slots__ = ("chart", "valence", "components")

    def __init__(self, chart: Chart, valence: tuple[int, int], components: object):
        p, q = valence
        if p < 0 or q < 0:
            raise ValueError("valence entries must be non-negative")
        self.chart = chart
        self.valence = (int(p), int(q))
        shape = (chart.dimension,) * (p + q)
        raw = np.asarray(components, dtype=object)
        if raw.shape != shape:
            raise ValueError(f"components have shape {raw.shape}, expected {shape}")
        arr = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            arr[idx] = chart.coerce(raw[idx])
        self.components = _readonly(arr)

    @classmethod
    def _wrap(cls, chart: Chart, valence: tuple[int, int], arr: np.ndarray) -> "TensorField":
        # trusted: arr already holds RationalFunctions over chart
        t = cls.__new__(cls)
        t.chart = chart
        t.valence = valence
        t.components = _readonly(arr)
        return t

    @classmethod
    def from_function(
        cls, chart: Chart, valence: tuple[int, int], fn: Callable[..., object]
    ) -> "TensorField":
        rank = sum(valence)
        arr = np.empty((chart.dimension,) * rank, dtype=object)
        for idx in np.ndindex(*arr.shape):
            arr[idx] = chart.coerce(fn(*idx))
        return cls._wrap(chart, tuple(valence), arr)

    @classmethod
    def zeros(cls, chart: Chart, valence: tuple[int, int]) -> "TensorField":
        zero = chart.zero()
        return cls.from_function(chart, valence, lambda *idx: zero)

    @classmethod
    def identity(cls, chart: Chart) -> "TensorField":
        one, zero = chart.one(), chart.zero()
        return cls.from_function(chart, (1, 1), lambda i, j: one if i == j else zero)

    @classmethod
    def vector(cls, chart: Chart, comps: Sequence[object]) -> "TensorField":
        return cls(chart, (1, 0), list(comps))

    @classmethod
    def covector(cls, chart: Chart, comps: Sequence[object]) -> "TensorField":
        return cls(chart, (0, 1), list(comps))

    @classmethod
    def scalar(cls, chart: Chart, value: object) -> "TensorField":
        arr = np.empty((), dtype=object)
        arr[()] = chart.coerce(value)
        return cls._wrap(chart, (0, 0), arr)

    @classmethod
    def coordinate_basis(cls, chart: Chart, i: int) -> "TensorField":
        one, zero = chart.one(), chart.zero()
        return cls.from_function(chart, (1, 0), lambda a: one if a == i else zero)

    # -- basic access -----------------------------------------------------

    @property
    def rank(self) -> int:
        return self.valence[0] + self.valence[1]

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    def __getitem__(self, idx) -> RationalFunction:
        return self.components[idx]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return np.ndindex(*self.components.shape)

    def value(self) -> RationalFunction:
        """The single component of a rank-0 tensor."""
        if self.rank:
            raise SlotMismatch("value() needs a rank-0 tensor")
        return self.components[()]

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> "TensorField":
        arr = np.empty(self.components.shape, dtype=object)
        for idx in self.indices():
            arr[idx] = fn(self.components[idx])
        return TensorField._wrap(self.chart, self.valence, arr)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components.flat)

    def nonzero_count(self) -> int:
        return sum(1 for c in self.components.flat if not c.is_zero())

    def evaluate(self, point: Mapping[str, Fraction]) -> np.ndarray:
        out = np.empty(self.components.shape, dtype=object)
        for idx in self.indices():
            out[idx] = self.components[idx].evaluate(point)
        return out

    def diff(self, var: str) -> "TensorField":
        self.chart.index(var)
        return self.map(lambda c: c.diff(var))

    # -- algebra ----------------------------------------------------------

    def _check_same(self, other: "TensorField") -> None:
        if not isinstance(other, TensorField):
            raise TypeError(f"expected TensorField, got {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart.coordinates} vs {other.chart.coordinates}")
        if other.valence != self.valence:
            raise SlotMismatch(f"valence {self.valence} vs {other.valence}")

    def __add__(self, other: "TensorField") -> "TensorField":
        self._check_same(other)
        return TensorField._wrap(self.chart, self.valence, self.components + other.components)

    def __sub__(self, other: "TensorField") -> "TensorField":
        self._check_same(other)
        return TensorField._wrap(self.chart, self.valence, self.components - other.components)

    def __neg__(self) -> "TensorField":
        return self.map(lambda c: -c)

    def __mul__(self, scalar: object) -> "TensorField":
        if isinstance(scalar, TensorField):
            return NotImplemented
        s = self.chart.coerce(scalar)
        return self.map(lambda c: c * s)

    __rmul__ = __mul__

    def __truediv__(self, scalar: object) -> "TensorField":
        s = self.chart.coerce(scalar)
        inv = s.inverse()
        return self.map(lambda c: c * inv)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorField):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.valence == other.valence
            and all(a == b for a, b in zip(self.components.flat, other.components.flat))
        )

    def __hash__(self) -> int:
        return hash((self.chart, self.valence, tuple(self.components.flat)))

    def transpose(self, order: Sequence[int]) -> "TensorField":
        """Permute slots; contravariant slots must stay in the first block."""
        p = self.valence[0]
        order = list(order)
        if sorted(order) != list(range(self.rank)):
            raise SlotMismatch(f"{order} is not a permutation of {self.rank} slots")
        if sorted(order[:p]) != list(range(p)):
            raise SlotMismatch("a permutation may not mix contravariant and covariant slots")
        arr = np.transpose(self.components, order).copy()
        return TensorField._wrap(self.chart, self.valence, arr)

    def symmetrize(self) -> "TensorField":
        """(T + T^t)/2 for a rank-2 tensor of homogeneous valence."""
        if self.valence not in ((0, 2), (2, 0)):
            raise SlotMismatch("symmetrize needs a (0,2) or (2,0) tensor")
        return (self + self.transpose([1, 0])) * Fraction(1, 2)

    def is_symmetric(self) -> bool:
        if self.valence not in ((0, 2), (2, 0)):
            raise SlotMismatch("symmetry test needs a (0,2) or (2,0) tensor")
        return self == self.transpose([1, 0])

    def __repr__(self) -> str:
        return f"TensorField(valence={self.valence}, chart={self.chart.coordinates}, nonzero={self.nonzero_count()})"

    def pretty(self) -> str:
        """One line per nonzero component, indices named by coordinate."""
        names = self.chart.coordinates
        lines = []
        p = self.valence[0]
        for idx in self.indices():
            c = self.components[idx]
            if c.is_zero():
                continue
            up = "".join(names[i] for i in idx[:p])
            down = "".join(names[i] for i in idx[p:])
            label = (f"^{up}" if up else "") + (f"_{down}" if down else "")
            lines.append(f"[{label}] {c}" if label else str(c))
        return "\n".join(lines) if lines else "0"


# ---------------------------------------------------------------------------
# Structural operations

def einsum(spec: str, *tensors: TensorField, valence: tuple[int, int]) -> TensorField:
    """Contract component arrays with ``numpy.einsum`` and wrap the result.

    The caller states the valence of the output; index bookkeeping is the
    caller's responsibility.
    """
    chart = tensors[0].chart
    for t in tensors[1:]:
        if t.chart != chart:
            raise ChartMismatch(f"{chart.coordinates} vs {t.chart.coordinates}")
    arr = np.einsum(spec, *(t.components for t in tensors))
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    zero = chart.zero()
    for idx in np.ndindex(*arr.shape):
        v = arr[idx]
        out[idx] = v if isinstance(v, RationalFunction) else zero + v
    if out.ndim != sum(valence):
        raise SlotMismatch(f"einsum produced rank {out.ndim}, valence {valence} declared")
    return TensorField._wrap(chart, tuple(valence), out)


def tensor_product(a: TensorField, b: TensorField) -> TensorField:
    """a ⊗ b, contravariant slots (a's then b's) ahead of covariant ones."""
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart.coordinates} vs {b.chart.coordinates}")
    pa, qa = a.valence
    pb, qb = b.valence
    outer = np.multiply.outer(a.components, b.components)
    ra = a.rank
    order = (
        list(range(pa))
        + list(range(ra, ra + pb))
        + list(range(pa, ra))
        + list(range(ra + pb, ra + pb + qb))
    )
    arr = np.transpose(np.asarray(outer, dtype=object), order).copy()
    return TensorField._wrap(a.chart, (pa + pb, qa + qb), arr)


def contract(t: TensorField, slot_a: int, slot_b: int) -> TensorField:
    """Trace over one contravariant and one covariant slot."""
    p, q = t.valence
    if not (0 <= slot_a < t.rank and 0 <= slot_b < t.rank) or slot_a == slot_b:
        raise SlotMismatch(f"invalid slots ({slot_a}, {slot_b}) for rank {t.rank}")
    up, down = sorted((slot_a, slot_b))
    if not (up < p <= down):
        raise SlotMismatch("contraction needs one contravariant and one covariant slot")
    n = t.dimension
    rest = [s for s in range(t.rank) if s not in (up, down)]
    out = np.empty((n,) * len(rest), dtype=object)
    zero = t.chart.zero()
    for idx in np.ndindex(*out.shape):
        total = zero
        for k in range(n):
            full = [0] * t.rank
            for s, v in zip(rest, idx):
                full[s] = v
            full[up] = full[down] = k
            total = total + t.components[tuple(full)]
        out[idx] = total
    return TensorField._wrap(t.chart, (p - 1, q - 1), out)


def trace(a: TensorField) -> RationalFunction:
    if a.valence != (1, 1):
        raise SlotMismatch("trace needs a (1,1) tensor")
    return contract(a, 0, 1).value()


def compose(a: TensorField, b: TensorField) -> TensorField:
    """(1,1) ∘ (1,1)."""
    if a.valence != (1, 1) or b.valence != (1, 1):
        raise SlotMismatch("compose needs two (1,1) tensors")
    return einsum("ij,jk->ik", a, b, valence=(1, 1))


def apply(a: TensorField, v: TensorField) -> TensorField:
    """A(X) for a (1,1) tensor A and a vector field X."""
    if a.valence != (1, 1) or v.valence != (1, 0):
        raise SlotMismatch("apply needs a (1,1) tensor and a vector")
    return einsum("ij,j->i", a, v, valence=(1, 0))


def pair(form: TensorField, v: TensorField) -> RationalFunction:
    """ω(X) for a 1-form ω and a vector X."""
    if form.valence != (0, 1) or v.valence != (1, 0):
        raise SlotMismatch("pair needs a 1-form and a vector")
    return einsum("i,i->", form, v, valence=(0, 0)).value()


def bilinear(b: TensorField, x: TensorField, y: TensorField) -> RationalFunction:
    """b(X, Y) for a (0,2) tensor b."""
    if b.valence != (0, 2):
        raise SlotMismatch("bilinear needs a (0,2) tensor")
    return einsum("ij,i,j->", b, x, y, valence=(0, 0)).value()


def antisymmetric_part(b: TensorField) -> TensorField:
    if b.valence != (0, 2):
        raise SlotMismatch("needs a (0,2) tensor")
    return (b - b.transpose([1, 0])) * Fraction(1, 2)


"""Tensor fields on a single chart and their Levi-Civita calculus."""
from .field import (
    Chart,
    TensorField,
    antisymmetric_part,
    apply,
    bilinear,
    compose,
    contract,
    einsum,
    pair,
    tensor_product,
    trace,
)
from .geometry import (
    ConnectionCoefficients,
    Geometry,
    christoffel,
    covariant_derivative,
    directional_covariant,
    gauss_inverse,
    gradient,
    hessian,
    lie_connection_variation,
    lie_derivative,
    lower_index,
    metric_determinant,
    metric_inverse,
    metric_trace,
    norm_squared,
    raise_index,
    raise_lower,
    ricci,
    riemann,
    scalar_curvature,
)

__all__ = [name for name in dir() if not name.startswith("_")]

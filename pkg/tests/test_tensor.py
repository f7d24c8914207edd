import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from contactgeom.errors import ChartMismatch, DegenerateMetric, SlotMismatch
from contactgeom.tensor import (
    Chart,
    Geometry,
    TensorField,
    contract,
    covariant_derivative,
    einsum,
    gradient,
    hessian,
    lie_connection_variation,
    lie_derivative,
    lower_index,
    metric_determinant,
    metric_inverse,
    raise_index,
    tensor_product,
)
from contactgeom.contact import compute_ell, compute_h
from contactgeom.tensor.numeric import curvature_crosscheck, random_points

from structures import CHART, example, flat_contact, hyperbolic, twisted

FLAT = TensorField(CHART, (0, 2), TensorField.identity(CHART).components)
COORDS = CHART.coordinates


def random_polynomial_field(rng: random.Random) -> TensorField:
    def poly() -> str:
        terms = []
        for _ in range(rng.randint(1, 3)):
            c = rng.randint(-3, 3)
            mono = "*".join(v + "^" + str(rng.randint(1, 2)) for v in COORDS if rng.random() < 0.5) or "1"
            terms.append(f"({c})*{mono}")
        return " + ".join(terms)

    return TensorField.vector(CHART, [poly() for _ in COORDS])


RANDOM_FIELDS = [random_polynomial_field(random.Random(seed)) for seed in range(5)]


# -- metric inverse ----------------------------------------------------------

def test_inverse_of_identity():
    assert metric_inverse(FLAT).components.tolist() == TensorField.identity(CHART).components.tolist()


def test_example_inverse_and_determinant():
    g = example(1).g
    inv = metric_inverse(g)
    expected = TensorField(CHART, (2, 0), [["4", "0", "4*y"], ["0", "4", "0"], ["4*y", "0", "4*y^2+4"]])
    assert inv == expected
    assert metric_determinant(g) == CHART.constant(Fraction(1, 64))
    assert einsum("ij,jk->ik", inv, g, valence=(1, 1)) == TensorField.identity(CHART)


def test_degenerate_and_nonsymmetric_metrics():
    with pytest.raises(DegenerateMetric):
        metric_inverse(TensorField(CHART, (0, 2), [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]))
    with pytest.raises(DegenerateMetric):
        metric_inverse(TensorField(CHART, (0, 2), [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]]))


# -- connection and curvature --------------------------------------------------

STRUCTURES = {
    "example+": lambda: example(1),
    "example-": lambda: example(-1),
    "twisted": lambda: twisted(1),
    "hyperbolic-": lambda: hyperbolic(-1),
    "flat_contact": flat_contact,
}


@pytest.fixture(params=sorted(STRUCTURES), scope="module")
def geo(request) -> Geometry:
    return STRUCTURES[request.param]().geometry


def test_flat_metrics_have_no_curvature():
    g = Geometry.from_metric(TensorField(CHART, (0, 2), [["2", "0", "0"], ["0", "-3", "0"], ["0", "0", "5"]]))
    assert all(c.is_zero() for c in g.connection.gamma.flat)
    assert g.riemann.is_zero() and g.ricci.is_zero() and g.scalar.is_zero()


def test_christoffel_symmetric(geo):
    assert geo.connection.is_symmetric()


def test_metric_compatible(geo):
    assert covariant_derivative(geo.metric, geo.connection).is_zero()


def test_riemann_symmetries(geo):
    R = geo.riemann
    lowered = einsum("ha,akji->hkji", geo.metric, R, valence=(0, 4))
    assert (R + R.transpose([0, 2, 1, 3])).is_zero()
    assert (lowered + lowered.transpose([3, 1, 2, 0])).is_zero()
    # first Bianchi: R^h_{kji} + R^h_{jik} + R^h_{ikj} = 0
    assert (R + R.transpose([0, 3, 1, 2]) + R.transpose([0, 2, 3, 1])).is_zero()
    # pair symmetry R_{hkji} = R_{jihk}
    assert (lowered - lowered.transpose([2, 3, 0, 1])).is_zero()


def test_ricci_symmetric(geo):
    assert geo.ricci.is_symmetric()


def test_second_bianchi_contracted(geo):
    # g^{ac} ∇_c R_{ab} = ½ ∂_b r
    nric = covariant_derivative(geo.ricci, geo.connection)
    div = einsum("ac,abc->b", geo.inverse, nric, valence=(0, 1))
    dr = TensorField.covector(CHART, [geo.scalar.diff(c) / 2 for c in COORDS])
    assert div == dr


def test_golden_ricci(eps):
    s = example(eps)
    assert s.geometry.ricci == s.g * (-2 * eps) + tensor_product(s.eta, s.eta) * 4
    assert s.geometry.scalar == CHART.constant(-2 * eps)


def test_sasakian_curvature_along_reeb(eps):
    s = example(eps)
    ell = compute_ell(s)
    assert ell == TensorField.identity(CHART) - tensor_product(s.xi, s.eta)


def _sympy_ricci(g: TensorField) -> sympy.Matrix:
    syms = sympy.symbols(COORDS)
    G = sympy.Matrix(3, 3, lambda i, j: sympy.sympify(str(g[i, j]).replace("^", "**")))
    Ginv = G.inv()
    gam = [[[sum(Ginv[h, m] * (sympy.diff(G[m, i], syms[j]) + sympy.diff(G[m, j], syms[i]) - sympy.diff(G[i, j], syms[m]))
                 for m in range(3)) / 2 for j in range(3)] for i in range(3)] for h in range(3)]
    ric = sympy.zeros(3, 3)
    for j in range(3):
        for i in range(3):
            v = 0
            for k in range(3):
                v += sympy.diff(gam[k][j][i], syms[k]) - sympy.diff(gam[k][k][i], syms[j])
                for m in range(3):
                    v += gam[k][k][m] * gam[m][j][i] - gam[k][j][m] * gam[m][k][i]
            ric[j, i] = v
    return ric


@pytest.mark.parametrize("name", ["twisted", "hyperbolic-", "flat_contact"])
def test_ricci_against_sympy(name):
    s = STRUCTURES[name]()
    oracle = _sympy_ricci(s.g)
    for i in range(3):
        for j in range(3):
            ours = sympy.sympify(str(s.geometry.ricci[i, j]).replace("^", "**"))
            assert sympy.simplify(ours - oracle[i, j]) == 0


def test_curvature_finite_differences(geo):
    points = random_points(geo, 10, seed=3)
    assert curvature_crosscheck(geo, points) <= 1e-6


# -- covariant and Lie derivatives ----------------------------------------------

def test_nabla_constant_scalar():
    g = example(1).geometry
    assert covariant_derivative(CHART.one(), g.connection).is_zero()


def test_nabla_reeb_is_minus_eps_phi(eps):
    s = example(eps)
    nxi = covariant_derivative(s.xi, s.geometry.connection)
    assert nxi == s.phi * -eps


def test_reeb_is_killing_and_preserves_phi(eps):
    s = example(eps)
    assert lie_derivative(s.g, s.xi).is_zero()
    assert lie_derivative(s.phi, s.xi).is_zero()
    assert compute_h(s).is_zero()


def test_lie_of_scalar_is_directional_derivative():
    v = RANDOM_FIELDS[0]
    f = CHART.parse("x^2*y - z/3")
    expected = sum((v[i] * f.diff(c) for i, c in enumerate(COORDS)), CHART.zero())
    assert lie_derivative(f, v) == expected


def test_lie_chart_and_slot_errors():
    other = Chart(("u", "v", "w"))
    with pytest.raises(ChartMismatch):
        lie_derivative(example(1).g, TensorField.vector(other, [1, 0, 0]))
    with pytest.raises(SlotMismatch):
        lie_derivative(example(1).g, example(1).eta)


@pytest.mark.parametrize("index", range(5))
def test_lie_metric_matches_covariant_form(index):
    s = example(1)
    v = RANDOM_FIELDS[index]
    vflat = lower_index(v, 0, s.geometry)
    nv = covariant_derivative(vflat, s.geometry.connection)  # [j, i] = ∇_i V_j
    assert lie_derivative(s.g, v) == nv + nv.transpose([1, 0])


def _lie_gamma_oracle(v: TensorField, geo: Geometry) -> np.ndarray:
    G = geo.connection.gamma
    n = 3
    out = np.empty((n, n, n), dtype=object)
    for h, i, j in np.ndindex(n, n, n):
        val = v[h].diff(COORDS[i]).diff(COORDS[j])
        for m in range(n):
            val = val + v[m] * G[h, i, j].diff(COORDS[m])
            val = val - G[m, i, j] * v[h].diff(COORDS[m])
            val = val + G[h, m, j] * v[m].diff(COORDS[i])
            val = val + G[h, i, m] * v[m].diff(COORDS[j])
        out[h, i, j] = val
    return out


def test_lie_connection_on_flat_is_second_partials():
    geo = Geometry.from_metric(FLAT)
    for v in RANDOM_FIELDS:
        S = lie_connection_variation(v, geo)
        for h, i, j in S.indices():
            assert S[h, i, j] == v[h].diff(COORDS[i]).diff(COORDS[j])


@pytest.mark.parametrize("index", range(5))
def test_lie_connection_coordinate_oracle(index):
    geo = example(1).geometry
    v = RANDOM_FIELDS[index]
    S = lie_connection_variation(v, geo)
    oracle = _lie_gamma_oracle(v, geo)
    assert all(S[idx] == oracle[idx] for idx in S.indices())


def test_lie_connection_killing_vanishes(eps):
    s = example(eps)
    assert lie_connection_variation(s.xi, s.geometry).is_zero()


@pytest.mark.parametrize("index", range(5))
def test_commutation_formula(index):
    geo = example(1).geometry
    v = RANDOM_FIELDS[index]
    S = lie_connection_variation(v, geo)
    nS = covariant_derivative(S, geo.connection)  # [h, i, j, k] = ∇_k S^h_{ij}
    lhs = lie_derivative(geo.riemann, v)
    # (𝔏_V R)^h_{kji} = ∇_k S^h_{ji} − ∇_j S^h_{ki}
    expected = np.empty((3,) * 4, dtype=object)
    for h, k, j, i in np.ndindex(3, 3, 3, 3):
        expected[h, k, j, i] = nS[h, j, i, k] - nS[h, k, i, j]
    assert not lhs.is_zero()
    assert all(lhs[idx] == expected[idx] for idx in lhs.indices())


# -- gradient, Hessian, index gymnastics ----------------------------------------

def test_gradient_and_hessian_on_flat():
    c = CHART.constant(5)
    assert gradient(c, FLAT).is_zero() and hessian(c, FLAT).is_zero()
    x = CHART.coordinate("x")
    assert gradient(x, FLAT) == TensorField.vector(CHART, [1, 0, 0])
    assert hessian(x, FLAT).is_zero()
    assert hessian(x * x, FLAT) == TensorField(CHART, (0, 2), [[2, 0, 0], [0, 0, 0], [0, 0, 0]])


def test_hessian_symmetric(geo):
    f = CHART.parse("x^2*y + z")
    assert hessian(f, geo.connection).is_symmetric()


def test_raise_lower_round_trip(geo):
    v = RANDOM_FIELDS[1]
    assert raise_index(lower_index(v, 0, geo), 0, geo) == v
    # the raised index lands in front of the remaining covariant one
    assert lower_index(raise_index(geo.ricci, 0, geo), 0, geo) == geo.ricci
    op = raise_index(geo.ricci, 0, geo)
    assert raise_index(lower_index(op, 0, geo), 0, geo) == op


def test_raise_index_slot_errors(geo):
    with pytest.raises(SlotMismatch):
        raise_index(RANDOM_FIELDS[0], 0, geo)
    with pytest.raises(SlotMismatch):
        lower_index(geo.metric, 0, geo)


def test_contract_delta_gives_dimension():
    assert contract(TensorField.identity(CHART), 0, 1).value() == CHART.constant(3)


def test_tr_h_squared_vanishes_on_example(eps):
    s = example(eps)
    h = compute_h(s)
    assert contract(einsum("ab,bc->ac", h, h, valence=(1, 1)), 0, 1).value().is_zero()

"""Contact pseudo-metric structures (φ, ξ, η, g, ε) and their identities.

Every check is an exact residual: a tensor (or scalar) that must vanish
identically.  Reports keep the residual of each failed check so callers
can print it.
"""
from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .errors import (
    ChartMismatch,
    ConsistencyError,
    DegenerateMetric,
    InvariantViolation,
    NotContact,
    SlotMismatch,
    ZeroParameter,
)
from .symbolic import RationalFunction
from .tensor import (
    Chart,
    Geometry,
    TensorField,
    compose,
    covariant_derivative,
    einsum,
    lie_derivative,
    tensor_product,
    trace,
)

Residual = Union[TensorField, RationalFunction, None]


@dataclass(frozen=True, eq=False)
class ContactStructure:
    """(φ, ξ, η, g, ε) on one chart of dimension 2n+1.

    Construction checks shapes, a symmetric nondegenerate metric and
    g(ξ, ξ) = ε.  The remaining axioms are reported by
    :func:`verify_structure` so that broken inputs can still be examined.
    ``validate=False`` skips the g(ξ, ξ) = ε test as well.
    """

    chart: Chart
    phi: TensorField
    xi: TensorField
    eta: TensorField
    g: TensorField
    epsilon: int
    validate: InitVar[bool] = True
    geometry: Geometry = field(init=False, repr=False)

    def __post_init__(self, validate: bool) -> None:
        if self.epsilon not in (1, -1):
            raise InvariantViolation(f"epsilon must be +1 or -1, got {self.epsilon}", "ε=±1")
        if self.chart.dimension % 2 != 1:
            raise InvariantViolation(
                f"contact structures live in odd dimension, got {self.chart.dimension}", "dim=2n+1"
            )
        for name, t, valence in (
            ("phi", self.phi, (1, 1)),
            ("xi", self.xi, (1, 0)),
            ("eta", self.eta, (0, 1)),
            ("g", self.g, (0, 2)),
        ):
            if t.chart != self.chart:
                raise ChartMismatch(f"{name} is on chart {t.chart.coordinates}, expected {self.chart.coordinates}")
            if t.valence != valence:
                raise SlotMismatch(f"{name} must have valence {valence}, got {t.valence}")
        if not self.g.is_symmetric():
            raise InvariantViolation("metric is not symmetric", "g symmetric", self.g - self.g.transpose([1, 0]))
        try:
            geo = Geometry.from_metric(self.g)
        except DegenerateMetric as exc:
            raise InvariantViolation(str(exc), "g nondegenerate") from None
        object.__setattr__(self, "geometry", geo)
        if validate:
            res = _g_xi_xi(self) - self.epsilon
            if not res.is_zero():
                raise InvariantViolation(
                    f"g(ξ,ξ) = {_g_xi_xi(self)} does not match declared ε = {self.epsilon}", "g(ξ,ξ)=ε", res
                )

    @property
    def n(self) -> int:
        return (self.chart.dimension - 1) // 2

    @property
    def ricci_operator(self) -> TensorField:
        return self.geometry.ricci_operator

    def replace(self, **changes) -> "ContactStructure":
        fields = dict(chart=self.chart, phi=self.phi, xi=self.xi, eta=self.eta, g=self.g, epsilon=self.epsilon)
        fields.update(changes)
        return ContactStructure(**fields)

    def same_as(self, other: "ContactStructure") -> bool:
        return (
            self.chart == other.chart
            and self.epsilon == other.epsilon
            and self.phi == other.phi
            and self.xi == other.xi
            and self.eta == other.eta
            and self.g == other.g
        )


def _g_xi_xi(s: ContactStructure) -> RationalFunction:
    return einsum("ij,i,j->", s.g, s.xi, s.xi, valence=(0, 0)).value()


# ---------------------------------------------------------------------------
# Reports

@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    residual: Residual = None


def check(name: str, residual: Union[TensorField, RationalFunction]) -> Check:
    holds = residual.is_zero()
    return Check(name, holds, None if holds else residual)


@dataclass(frozen=True)
class StructureReport:
    checks: tuple[Check, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.checks]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate identity names in report: {names}")
        object.__setattr__(self, "checks", tuple(sorted(self.checks, key=lambda c: c.name)))

    @classmethod
    def of(cls, checks: Iterable[Check]) -> "StructureReport":
        return cls(tuple(checks))

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.holds]

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __add__(self, other: "StructureReport") -> "StructureReport":
        return StructureReport(self.checks + other.checks)


# ---------------------------------------------------------------------------
# Small tensor helpers

def _identity(s: ContactStructure) -> TensorField:
    return TensorField.identity(s.chart)


def _xi_eta(s: ContactStructure) -> TensorField:
    """The (1,1) tensor X ↦ η(X)ξ."""
    return tensor_product(s.xi, s.eta)


def _lower(s: ContactStructure, a: TensorField) -> TensorField:
    """(X, Y) ↦ g(AX, Y) for a (1,1) tensor A, as a (0,2) tensor [X, Y]."""
    return einsum("ai,aj->ij", a, s.g, valence=(0, 2))


def d_eta(s: ContactStructure) -> TensorField:
    """dη(X, Y) = ½(X η(Y) - Y η(X) - η([X, Y]))."""
    coords = s.chart.coordinates
    half = Fraction(1, 2)
    return TensorField.from_function(
        s.chart, (0, 2), lambda i, j: (s.eta[j].diff(coords[i]) - s.eta[i].diff(coords[j])) * half
    )


def fundamental_two_form(s: ContactStructure) -> TensorField:
    """Φ(X, Y) = g(X, φY)."""
    return einsum("ia,aj->ij", s.g, s.phi, valence=(0, 2))


def pfaffian(m: list[list[RationalFunction]]) -> RationalFunction:
    """Pfaffian of an antisymmetric matrix by expansion along the first row."""
    size = len(m)
    if size == 0:
        raise ValueError("empty matrix")
    if size % 2:
        return m[0][0] * 0
    if size == 2:
        return m[0][1]
    total = m[0][0] * 0
    for j in range(1, size):
        if m[0][j].is_zero():
            continue
        keep = [k for k in range(1, size) if k != j]
        minor = [[m[a][b] for b in keep] for a in keep]
        term = m[0][j] * pfaffian(minor)
        total = total + term if j % 2 == 1 else total - term
    return total


def contact_volume(s: ContactStructure) -> RationalFunction:
    """A nonzero multiple of the coefficient of η∧(dη)^n.

    It is the Pfaffian of dη bordered by η, which vanishes exactly when
    dη is degenerate on the kernel of η.
    """
    n = s.chart.dimension
    de = d_eta(s)
    zero = s.chart.zero()
    border = [[zero] + [s.eta[j] for j in range(n)]]
    for i in range(n):
        border.append([-s.eta[i]] + [de[i, j] for j in range(n)])
    return pfaffian(border)


# ---------------------------------------------------------------------------
# Axioms

def verify_structure(s: ContactStructure) -> StructureReport:
    """Algebraic axioms of an almost contact pseudo-metric structure."""
    eps = s.epsilon
    ident = _identity(s)
    phi_phi = compose(s.phi, s.phi)
    g_phi_phi = einsum("ai,bj,ab->ij", s.phi, s.phi, s.g, valence=(0, 2))
    eta_eta = tensor_product(s.eta, s.eta)
    g_phi = _lower(s, s.phi)
    g_xi = einsum("ia,a->i", s.g, s.xi, valence=(0, 1))
    return StructureReport.of([
        check("η(ξ)=1", einsum("i,i->", s.eta, s.xi, valence=(0, 0)).value() - 1),
        check("φ²=−I+η⊗ξ", phi_phi + ident - _xi_eta(s)),
        check("φξ=0", einsum("ij,j->i", s.phi, s.xi, valence=(1, 0))),
        check("η∘φ=0", einsum("a,ai->i", s.eta, s.phi, valence=(0, 1))),
        check("g(φX,φY)=g(X,Y)−εη(X)η(Y)", g_phi_phi - s.g + eta_eta * eps),
        check("g(φX,Y)=−g(X,φY)", g_phi + g_phi.transpose([1, 0])),
        check("η=εg(ξ,·)", s.eta - g_xi * eps),
        check("g(ξ,ξ)=ε", _g_xi_xi(s) - eps),
    ])


def verify_contact_condition(s: ContactStructure) -> StructureReport:
    vol = contact_volume(s)
    return StructureReport.of([
        check("g(X,φY)=dη(X,Y)", fundamental_two_form(s) - d_eta(s)),
        Check("η∧(dη)ⁿ≠0", not vol.is_zero()),
    ])


def is_contact(s: ContactStructure) -> bool:
    return verify_structure(s).ok and verify_contact_condition(s).ok


# ---------------------------------------------------------------------------
# Structure tensors h and ℓ

def compute_h(s: ContactStructure) -> TensorField:
    """h = ½ 𝔏_ξ φ."""
    return lie_derivative(s.phi, s.xi) * Fraction(1, 2)


def compute_ell(s: ContactStructure) -> TensorField:
    """ℓX = R(X, ξ)ξ."""
    return einsum("hkji,j,i->hk", s.geometry.riemann, s.xi, s.xi, valence=(1, 1))


def ricci_xi_xi(s: ContactStructure) -> RationalFunction:
    return einsum("ij,i,j->", s.geometry.ricci, s.xi, s.xi, valence=(0, 0)).value()


def nabla_xi(s: ContactStructure) -> TensorField:
    """X ↦ ∇_X ξ as a (1,1) tensor."""
    return covariant_derivative(s.xi, s.geometry.connection)


def nabla_phi(s: ContactStructure) -> TensorField:
    """∇φ indexed [i, j, k] = ((∇_k φ) ∂_j)^i."""
    return covariant_derivative(s.phi, s.geometry.connection)


def r_xi(s: ContactStructure) -> TensorField:
    """(X, Y) ↦ R(X, Y)ξ, indexed [h, k, j]."""
    return einsum("hkji,i->hkj", s.geometry.riemann, s.xi, valence=(1, 2))


def _self_adjoint(s: ContactStructure, a: TensorField) -> TensorField:
    low = _lower(s, a)
    return low - low.transpose([1, 0])


def contact_identities(s: ContactStructure) -> StructureReport:
    """Identities satisfied by every contact pseudo-metric structure."""
    eps, n = s.epsilon, s.n
    h = compute_h(s)
    ell = compute_ell(s)
    h_phi = compose(h, s.phi)
    phi_h = compose(s.phi, h)
    nphi = nabla_phi(s)
    return StructureReport.of([
        check("tr h=0", trace(h)),
        check("tr(hφ)=0", trace(h_phi)),
        check("η∘h=0", einsum("a,ai->i", s.eta, h, valence=(0, 1))),
        check("hξ=0", einsum("ij,j->i", h, s.xi, valence=(1, 0))),
        check("ℓξ=0", einsum("ij,j->i", ell, s.xi, valence=(1, 0))),
        check("hφ=−φh", h_phi + phi_h),
        check("h self-adjoint", _self_adjoint(s, h)),
        check("ℓ self-adjoint", _self_adjoint(s, ell)),
        check("∇_ξφ=0", einsum("ijk,k->ij", nphi, s.xi, valence=(1, 1))),
        check("∇_Xξ=−εφX−φhX", nabla_xi(s) + s.phi * eps + phi_h),
        check("Ric(ξ,ξ)=2n−tr h²", ricci_xi_xi(s) - 2 * n + trace(compose(h, h))),
    ])


def k_contact_identities(s: ContactStructure) -> StructureReport:
    eps, n = s.epsilon, s.n
    Q = s.ricci_operator
    nQ = covariant_derivative(Q, s.geometry.connection)  # [i, j, k] = ((∇_k Q) ∂_j)^i
    q_phi = compose(Q, s.phi)
    phi_q = compose(s.phi, Q)
    return StructureReport.of([
        check("ξ Killing", lie_derivative(s.g, s.xi)),
        check("Qξ=2nεξ", einsum("ij,j->i", Q, s.xi, valence=(1, 0)) - s.xi * (2 * n * eps)),
        check("∇_Xξ=−εφX", nabla_xi(s) + s.phi * eps),
        check("(∇_XQ)ξ=−2nφX+εQφX", einsum("ijk,j->ik", nQ, s.xi, valence=(1, 1)) + s.phi * (2 * n) - q_phi * eps),
        check("(∇_ξQ)X=ε(Qφ−φQ)X", einsum("ijk,k->ij", nQ, s.xi, valence=(1, 1)) - (q_phi - phi_q) * eps),
    ])


def normality_tensor(s: ContactStructure) -> TensorField:
    """[φ, φ] + 2dη⊗ξ, indexed [i, j, k] for the pair (∂_j, ∂_k)."""
    coords = s.chart.coordinates
    n = s.chart.dimension
    phi = s.phi
    dphi = [phi.diff(c) for c in coords]  # dphi[l][i, k] = ∂_l φ^i_k
    de = d_eta(s)
    out = np.empty((n, n, n), dtype=object)
    for i, j, k in np.ndindex(n, n, n):
        v = de[j, k] * 2 * s.xi[i]
        for l in range(n):
            v = v + phi[l, j] * dphi[l][i, k] - phi[l, k] * dphi[l][i, j]
            v = v + phi[i, l] * (dphi[k][l, j] - dphi[j][l, k])
        out[i, j, k] = v
    return TensorField._wrap(s.chart, (1, 2), out)


def sasakian_identities(s: ContactStructure) -> StructureReport:
    eps = s.epsilon
    ident = _identity(s)
    Q = s.ricci_operator
    # (∇_X φ)Y with X = ∂_k, Y = ∂_j, stored [i, j, k]
    target = TensorField.from_function(
        s.chart, (1, 2), lambda i, j, k: s.g[k, j] * s.xi[i] - s.eta[j] * ident[i, k] * eps
    )
    rxi_target = TensorField.from_function(
        s.chart, (1, 2), lambda h, k, j: s.eta[j] * ident[h, k] - s.eta[k] * ident[h, j]
    )
    return StructureReport.of([
        check("[φ,φ]+2dη⊗ξ=0", normality_tensor(s)),
        check("(∇_Xφ)Y=g(X,Y)ξ−εη(Y)X", nabla_phi(s) - target),
        check("R(X,Y)ξ=η(Y)X−η(X)Y", r_xi(s) - rxi_target),
        check("Qφ=φQ", compose(Q, s.phi) - compose(s.phi, Q)),
    ])


# ---------------------------------------------------------------------------
# (κ, μ)-nullity

class _Indeterminate:
    """μ when h ≡ 0: the nullity equation does not involve it."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Indeterminate"

    __str__ = __repr__

    def __reduce__(self):
        return (_Indeterminate, ())


INDETERMINATE = _Indeterminate()


@dataclass(frozen=True)
class KappaMu:
    kappa: Fraction
    mu: Union[Fraction, _Indeterminate]

    @property
    def mu_value(self) -> Fraction:
        """μ for formulas where h ≡ 0 makes it irrelevant."""
        return Fraction(0) if self.mu is INDETERMINATE else self.mu


def nullity_target(s: ContactStructure, kappa: Fraction, mu: Fraction, h: TensorField | None = None) -> TensorField:
    """εκ(η(Y)X − η(X)Y) + εμ(η(Y)hX − η(X)hY), indexed [h, k, j]."""
    if h is None:
        h = compute_h(s)
    eps = s.epsilon
    ident = _identity(s)
    ek, em = eps * kappa, eps * mu
    return TensorField.from_function(
        s.chart,
        (1, 2),
        lambda a, k, j: (s.eta[j] * ident[a, k] - s.eta[k] * ident[a, j]) * ek
        + (s.eta[j] * h[a, k] - s.eta[k] * h[a, j]) * em,
    )


def detect_kappa_mu(s: ContactStructure, h: TensorField | None = None) -> KappaMu | None:
    """Constant (κ, μ) with R(X,Y)ξ in nullity form, or None."""
    eps, n = s.epsilon, s.n
    if h is None:
        h = compute_h(s)
    ell = compute_ell(s)
    kappa_rf = trace(ell) * Fraction(eps, 2 * n)
    if not kappa_rf.is_constant():
        return None
    kappa = kappa_rf.constant_value()
    # ℓ - εκ(I - η⊗ξ) = εμ h
    rest = ell - (_identity(s) - _xi_eta(s)) * (eps * kappa)
    if h.is_zero():
        if not rest.is_zero():
            return None
        mu: Fraction | _Indeterminate = INDETERMINATE
    else:
        idx = next(i for i in h.indices() if not h[i].is_zero())
        mu_rf = rest[idx] / h[idx] * eps
        if not mu_rf.is_constant():
            return None
        mu = mu_rf.constant_value()
    km = KappaMu(kappa, mu)
    if not (r_xi(s) - nullity_target(s, kappa, km.mu_value, h)).is_zero():
        return None
    return km


def kappa_mu_identities(s: ContactStructure, km: KappaMu) -> StructureReport:
    """Consequences of the nullity condition; the Ricci formulas need εκ < 1."""
    eps, n = s.epsilon, s.n
    kappa, mu = km.kappa, km.mu_value
    h = compute_h(s)
    ident = _identity(s)
    Q = s.ricci_operator
    phi2 = compose(s.phi, s.phi)
    nh = covariant_derivative(h, s.geometry.connection)
    checks = [
        check("R(X,Y)ξ nullity form", r_xi(s) - nullity_target(s, kappa, mu, h)),
        check("h²=(εκ−1)φ²", compose(h, h) - phi2 * (eps * kappa - 1)),
        check("Qξ=2nκξ", einsum("ij,j->i", Q, s.xi, valence=(1, 0)) - s.xi * (2 * n * kappa)),
        check("∇_ξh=−εμφh", einsum("ijk,k->ij", nh, s.xi, valence=(1, 1)) + compose(s.phi, h) * (eps * mu)),
    ]
    if eps * kappa < 1:
        q_formula = (
            ident * (eps * (2 * (n - 1) - n * mu))
            + h * (2 * (n - 1) + mu)
            + _xi_eta(s) * (2 * (1 - n) * eps + 2 * n * kappa + n * eps * mu)
        )
        r_formula = 2 * n * (kappa - 2 * eps) + 2 * n * n * eps * (2 - mu)
        checks += [
            check("Q (κ,μ) formula", Q - q_formula),
            check("r (κ,μ) formula", s.geometry.scalar - r_formula),
        ]
    return StructureReport.of(checks)


# ---------------------------------------------------------------------------
# η-Einstein

@dataclass(frozen=True)
class EtaEinstein:
    a: RationalFunction
    b: RationalFunction

    @property
    def constant(self) -> bool:
        return self.a.is_constant() and self.b.is_constant()


def detect_eta_einstein(s: ContactStructure) -> EtaEinstein | None:
    """Ric = a g + b η⊗η, solved from Ric(ξ,ξ) = εa + b and r = (2n+1)a + εb."""
    eps, n = s.epsilon, s.n
    geo = s.geometry
    rho = ricci_xi_xi(s)
    a = (geo.scalar - rho * eps) * Fraction(1, 2 * n)
    b = rho - a * eps
    residual = geo.ricci - s.g * a - tensor_product(s.eta, s.eta) * b
    if not residual.is_zero():
        return None
    return EtaEinstein(a, b)


# ---------------------------------------------------------------------------
# Classification

@dataclass(frozen=True)
class ClassificationResult:
    is_contact: bool
    is_K_contact: bool
    is_sasakian: bool
    eta_einstein: tuple[Fraction, Fraction] | None
    eta_einstein_nonconstant: bool
    kappa_mu: KappaMu | None
    d_fixed: bool

    def __post_init__(self) -> None:
        if self.is_sasakian and not self.is_K_contact:
            raise ConsistencyError("Sasakian but not K-contact")
        if self.is_K_contact and not self.is_contact:
            raise ConsistencyError("K-contact but not contact")

    def to_dict(self) -> dict:
        return {
            "contact": self.is_contact,
            "K_contact": self.is_K_contact,
            "sasakian": self.is_sasakian,
            "eta_einstein": None if self.eta_einstein is None else
            {"a": str(self.eta_einstein[0]), "b": str(self.eta_einstein[1])},
            "eta_einstein_nonconstant": self.eta_einstein_nonconstant,
            "kappa_mu": None if self.kappa_mu is None else
            {"kappa": str(self.kappa_mu.kappa), "mu": str(self.kappa_mu.mu)},
            "d_fixed": self.d_fixed,
        }


def classify(s: ContactStructure) -> ClassificationResult:
    report = verify_structure(s) + verify_contact_condition(s)
    if not report.ok:
        raise NotContact("not a contact pseudo-metric structure; failed: " + ", ".join(c.name for c in report.failed()))
    h = compute_h(s)
    k_contact = h.is_zero()
    sas = sasakian_identities(s)
    normal = sas["[φ,φ]+2dη⊗ξ=0"].holds
    covariant = sas["(∇_Xφ)Y=g(X,Y)ξ−εη(Y)X"].holds
    curvature = sas["R(X,Y)ξ=η(Y)X−η(X)Y"].holds
    if not normal == covariant == curvature:
        raise ConsistencyError(
            f"Sasakian criteria disagree: normality={normal}, covariant={covariant}, curvature={curvature}"
        )
    if normal and not k_contact:
        raise ConsistencyError("normal structure with h ≠ 0")
    ee = detect_eta_einstein(s)
    coeffs = None
    nonconstant = False
    if ee is not None:
        if ee.constant:
            coeffs = (ee.a.constant_value(), ee.b.constant_value())
        else:
            nonconstant = True
    km = detect_kappa_mu(s, h)
    d_fixed = k_contact and coeffs is not None and coeffs[0] == -2 * s.epsilon
    return ClassificationResult(
        is_contact=True,
        is_K_contact=k_contact,
        is_sasakian=normal,
        eta_einstein=coeffs,
        eta_einstein_nonconstant=nonconstant,
        kappa_mu=km,
        d_fixed=d_fixed,
    )


def full_identity_report(s: ContactStructure, classification: ClassificationResult | None = None) -> StructureReport:
    """Every identity that applies to ``s`` given its class."""
    report = verify_structure(s) + verify_contact_condition(s)
    if not report.ok:
        return report
    if classification is None:
        classification = classify(s)
    report = report + contact_identities(s)
    if classification.is_K_contact:
        report = report + k_contact_identities(s)
    if classification.is_sasakian:
        report = report + sasakian_identities(s)
    if classification.kappa_mu is not None:
        report = report + kappa_mu_identities(s, classification.kappa_mu)
    return report


# ---------------------------------------------------------------------------
# D-homothetic deformation

def d_homothetic_deform(s: ContactStructure, t: Fraction | int) -> ContactStructure:
    """η̃ = tη, ξ̃ = ξ/t, φ̃ = φ, g̃ = tg + εt(t−1)η⊗η."""
    t = Fraction(t)
    if t == 0:
        raise ZeroParameter("the deformation parameter t must be nonzero")
    eps = s.epsilon
    g_new = s.g * t + tensor_product(s.eta, s.eta) * (eps * t * (t - 1))
    return s.replace(eta=s.eta * t, xi=s.xi / t, g=g_new)


def predicted_deformed_eta_einstein(a: Fraction, epsilon: int, n: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """(ã, b̃) after deforming a K-contact η-Einstein structure by t."""
    a_new = (a - 2 * epsilon * t + 2 * epsilon) / t
    return a_new, 2 * n - epsilon * a_new

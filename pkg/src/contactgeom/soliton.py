"""η-Ricci soliton residuals and theorem checks on concrete structures.

A soliton is (g, V, λ, μ) with 𝔏_V g + 2Ric + 2λg + 2μ η⊗η = 0; the
gradient form replaces ½𝔏_V g by Hess f.  Every theorem check re-verifies
its hypotheses and reports ``hypothesis_not_met`` instead of raising.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .contact import (
    Check,
    ContactStructure,
    INDETERMINATE,
    KappaMu,
    check,
    classify,
    compute_h,
    detect_eta_einstein,
    detect_kappa_mu,
    is_contact,
    r_xi,
)
from .errors import NotContact, SlotMismatch
from .symbolic import RationalFunction
from .tensor import (
    Chart,
    TensorField,
    compose,
    gradient,
    hessian,
    lie_derivative,
    norm_squared,
    tensor_product,
)

VERIFIED = "verified"
HYPOTHESIS_NOT_MET = "hypothesis_not_met"
VIOLATION = "violation"


@dataclass(frozen=True)
class SolitonData:
    """Potential (vector field or function) with the constants λ and μ.

    On (κ,μ) structures the second constant is called τ in reports.
    """

    lam: Fraction
    mu: Fraction
    vector: Optional[TensorField] = None
    potential: Optional[RationalFunction] = None

    def __post_init__(self) -> None:
        if (self.vector is None) == (self.potential is None):
            raise ValueError("exactly one of vector or potential must be given")
        if self.vector is not None and self.vector.valence != (1, 0):
            raise SlotMismatch("the potential vector field must have valence (1,0)")
        object.__setattr__(self, "lam", Fraction(self.lam))
        object.__setattr__(self, "mu", Fraction(self.mu))

    @property
    def is_gradient(self) -> bool:
        return self.potential is not None

    def with_constants(self, lam: Fraction, mu: Fraction) -> "SolitonData":
        return SolitonData(lam, mu, self.vector, self.potential)


def soliton_class(lam: Fraction) -> str:
    if lam < 0:
        return "shrinking"
    if lam == 0:
        return "steady"
    return "expanding"


@dataclass(frozen=True)
class SolitonVerdict:
    is_soliton: bool
    residual: TensorField
    soliton_class: str
    potential_is_killing: bool
    lie_phi_vanishes: bool


def potential_vector(s: ContactStructure, d: SolitonData) -> TensorField:
    """V itself, or Df for a gradient soliton."""
    if d.vector is not None:
        return d.vector
    return gradient(d.potential, s.geometry)


def _verdict(s: ContactStructure, d: SolitonData, residual: TensorField, v: TensorField) -> SolitonVerdict:
    return SolitonVerdict(
        is_soliton=residual.is_zero(),
        residual=residual,
        soliton_class=soliton_class(d.lam),
        potential_is_killing=lie_derivative(s.g, v).is_zero(),
        lie_phi_vanishes=lie_derivative(s.phi, v).is_zero(),
    )


def _einstein_part(s: ContactStructure, lam: Fraction, mu: Fraction) -> TensorField:
    """Ric + λg + μ η⊗η."""
    return s.geometry.ricci + s.g * lam + tensor_product(s.eta, s.eta) * mu


def soliton_residual(s: ContactStructure, d: SolitonData) -> SolitonVerdict:
    v = potential_vector(s, d)
    residual = lie_derivative(s.g, v) + _einstein_part(s, d.lam, d.mu) * 2
    return _verdict(s, d, residual, v)


def gradient_soliton_residual(s: ContactStructure, d: SolitonData) -> SolitonVerdict:
    if d.potential is None:
        raise ValueError("a gradient soliton needs a potential function")
    residual = hessian(d.potential, s.geometry.connection) + _einstein_part(s, d.lam, d.mu)
    return _verdict(s, d, residual, gradient(d.potential, s.geometry))


def is_soliton(s: ContactStructure, d: SolitonData) -> bool:
    if d.is_gradient:
        return gradient_soliton_residual(s, d).is_soliton
    return soliton_residual(s, d).is_soliton


# ---------------------------------------------------------------------------
# Result reports

@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    hypotheses: tuple[Check, ...]
    conclusions: tuple[Check, ...]
    quantities: dict = field(default_factory=dict)
    note: str = ""

    @property
    def overall(self) -> str:
        if not all(c.holds for c in self.hypotheses):
            return HYPOTHESIS_NOT_MET
        if all(c.holds for c in self.conclusions):
            return VERIFIED
        return VIOLATION


def _flag(name: str, holds: bool) -> Check:
    return Check(name, holds)


def _scalar(s: ContactStructure, name: str, value: Fraction | RationalFunction) -> Check:
    """A scalar equation written as value = 0."""
    if not isinstance(value, RationalFunction):
        value = s.chart.constant(Fraction(value))
    return check(name, value)


def _classify_or_none(s: ContactStructure):
    try:
        return classify(s)
    except NotContact:
        return None


def _report(theorem: str, hyps: list[Check], concl: list[Check], **kw) -> TheoremReport:
    # conclusions are only meaningful once the hypotheses hold
    if not all(h.holds for h in hyps):
        concl = []
    return TheoremReport(theorem, tuple(hyps), tuple(concl), **kw)


def sasakian_soliton_coefficients(n: int, epsilon: int, lam: Fraction, mu: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """Closed-form (a, b, r) for a soliton on a Sasakian structure."""
    eps = epsilon
    lam, mu = Fraction(lam), Fraction(mu)
    a = n * eps + (mu * eps - lam) / 2
    b = Fraction(n, 2) * (eps + 1) + lam / 4 * (eps + 1) + Fraction(eps - 3, 4) * mu
    r = Fraction(1, 4) * eps * (lam - mu + 8 * n * n + (4 * mu + 6) * n) + Fraction(1, 4) * (
        -lam + mu - 4 * lam * n + 2 * n
    )
    return a, b, r


def verify_theorem_1(s: ContactStructure, d: SolitonData) -> TheoremReport:
    cls = _classify_or_none(s)
    soliton = soliton_residual(s, d)
    hyps = [_flag("Sasakian", bool(cls and cls.is_sasakian)), _flag("η-Ricci soliton", soliton.is_soliton)]
    a, b, r = sasakian_soliton_coefficients(s.n, s.epsilon, d.lam, d.mu)
    predicted = s.g * a + tensor_product(s.eta, s.eta) * b
    concl = [
        check("Ric=ag+bη⊗η (closed form)", s.geometry.ricci - predicted),
        _scalar(s, "r (closed form)", s.geometry.scalar - r),
    ]
    return _report("sasakian_closed_form", hyps, concl, quantities={"a": a, "b": b, "r": r})


def verify_lemma_3(
    s: ContactStructure, lam: Fraction, mu: Fraction, potential: Optional[SolitonData] = None
) -> TheoremReport:
    """|Ric|² + λr + μ(εa + b) = 0 on an η-Einstein structure carrying a soliton.

    Without a supplied potential, soliton existence cannot be checked; the
    identity is then evaluated and a failure means no soliton with these
    constants exists, which is reported as an unmet hypothesis.
    """
    lam, mu = Fraction(lam), Fraction(mu)
    eps, n = s.epsilon, s.n
    contact = is_contact(s)
    ee = detect_eta_einstein(s) if contact else None
    constant = ee is not None and ee.constant
    hyps = [_flag("contact", contact), _flag("η-Einstein with constant a, b", constant)]
    if not constant:
        return _report("ricci_norm_identity", hyps, [])
    a, b = ee.a.constant_value(), ee.b.constant_value()
    geo = s.geometry
    ric_sq = norm_squared(geo.ricci, geo)
    rest = geo.scalar * lam + (eps * a + b) * mu
    total = ric_sq + rest
    identity = _scalar(s, "|Ric|²+λr+μ(εa+b)=0", total)
    quantities = {
        "a": a,
        "b": b,
        "|Ric|^2": ric_sq,
        "lambda*r+mu*(eps*a+b)": rest,
        "sum": total,
        "factor(-lambda+mu+2n+4)": -lam + mu + 2 * n + 4,
        "factor(lambda+mu+2n)": lam + mu + 2 * n,
    }
    if potential is not None:
        d = potential.with_constants(lam, mu)
        hyps.append(_flag("η-Ricci soliton", is_soliton(s, d)))
        return _report("ricci_norm_identity", hyps, [identity], quantities=quantities)
    note = "soliton existence not checked (no potential supplied)"
    if not identity.holds:
        hyps.append(_flag("η-Ricci soliton with these constants can exist", False))
        note = "identity fails, so no η-Ricci soliton with these constants exists"
    return TheoremReport("ricci_norm_identity", tuple(hyps), (identity,), quantities, note)


def verify_theorem_2(s: ContactStructure, d: SolitonData) -> TheoremReport:
    cls = _classify_or_none(s)
    soliton = soliton_residual(s, d)
    n = s.n
    hyps = [_flag("Sasakian", bool(cls and cls.is_sasakian)), _flag("η-Ricci soliton", soliton.is_soliton)]
    if s.epsilon == -1:
        concl = [
            _flag("V Killing", soliton.potential_is_killing),
            _scalar(s, "λ−μ=2n", d.lam - d.mu - 2 * n),
        ]
        return _report("timelike_killing", hyps, concl)
    hyps.append(_flag("V not Killing", not soliton.potential_is_killing))
    target = s.g * -2 + tensor_product(s.eta, s.eta) * (2 * (n + 1))
    v = potential_vector(s, d)
    concl = [
        check("Ric=−2g+2(n+1)η⊗η", s.geometry.ricci - target),
        _flag("D-homothetically fixed", bool(cls and cls.d_fixed)),
        check("𝔏_Vφ=0", lie_derivative(s.phi, v)),
        _scalar(s, "λ−μ=2n+4", d.lam - d.mu - 2 * n - 4),
    ]
    return _report("spacelike_non_killing", hyps, concl)


def verify_proposition_gradient(s: ContactStructure, d: SolitonData) -> TheoremReport:
    cls = _classify_or_none(s)
    hyps = [_flag("K-contact", bool(cls and cls.is_K_contact))]
    if d.potential is None:
        hyps.append(_flag("gradient potential supplied", False))
        return _report("gradient_k_contact", hyps, [])
    hyps.append(_flag("gradient η-Ricci soliton", gradient_soliton_residual(s, d).is_soliton))
    target = s.g * -d.lam - tensor_product(s.eta, s.eta) * d.mu
    concl = [
        check("Ric=−λg−μη⊗η", s.geometry.ricci - target),
        _scalar(s, "−ελ−μ=2n", -s.epsilon * d.lam - d.mu - 2 * s.n),
    ]
    return _report("gradient_k_contact", hyps, concl)


def verify_theorem_3(s: ContactStructure, d: SolitonData) -> TheoremReport:
    contact = is_contact(s)
    v = potential_vector(s, d)
    f = sum((s.eta[i] * v[i] for i in range(s.chart.dimension)), s.chart.zero())
    Q = s.ricci_operator
    hyps = [
        _flag("contact", contact),
        check("V=fξ with f=η(V)", v - s.xi * f),
        check("Qφ=φQ", compose(Q, s.phi) - compose(s.phi, Q)),
        _flag("η-Ricci soliton", soliton_residual(s, d).is_soliton),
    ]
    target = s.g * -d.lam - tensor_product(s.eta, s.eta) * d.mu
    concl = [
        check("K-contact (ξ Killing)", lie_derivative(s.g, s.xi)),
        check("h=0", compute_h(s)),
        check("Ric=−λg−μη⊗η", s.geometry.ricci - target),
        _scalar(s, "−ελ−μ=2n", -s.epsilon * d.lam - d.mu - 2 * s.n),
    ]
    return _report("reeb_direction_potential", hyps, concl, quantities={"f": f})


def nullity_constraint_residual(n, kappa, mu, tau, epsilon):
    """εκ(−2+μ) − (nμ + μ + τ); works on numbers and rational functions alike."""
    return epsilon * kappa * (mu - 2) - (n * mu + mu + tau)


def verify_kappa_mu_results(s: ContactStructure, d: SolitonData) -> TheoremReport:
    eps, n = s.epsilon, s.n
    contact = is_contact(s)
    km: KappaMu | None = detect_kappa_mu(s) if contact else None
    hyps = [
        _flag("contact", contact),
        _flag("(κ,μ)-nullity", km is not None),
        _flag("εκ<1", km is not None and eps * km.kappa < 1),
        _flag("gradient η-Ricci soliton", d.is_gradient and gradient_soliton_residual(s, d).is_soliton),
    ]
    quantities: dict = {"lambda": d.lam, "tau": d.mu}
    if km is None or not all(h.holds for h in hyps):
        if km is not None:
            quantities.update(kappa=km.kappa, mu=km.mu)
        return _report("kappa_mu_gradient", hyps, [], quantities=quantities)
    kappa, mu, tau = km.kappa, km.mu, d.mu
    assert mu is not INDETERMINATE  # h ≡ 0 forces εκ = 1
    quantities.update(kappa=kappa, mu=mu)
    branch_1 = mu == 0 and tau == -2 * eps * kappa
    branch_2 = (
        mu == 2 - 2 * n
        and tau == 2 * n * (Fraction(-1, n) + n - eps * kappa)
        and (s.geometry.ricci + s.g * d.lam + tensor_product(s.eta, s.eta) * tau).is_zero()
    )
    concl = [
        _scalar(s, "εκ(−2+μ)=nμ+μ+τ", nullity_constraint_residual(n, kappa, mu, tau, eps)),
        _flag("(μ,τ) in a branch of the alternative", branch_1 or branch_2),
    ]
    if tau == 0:
        concl.append(check("R(X,Y)ξ=0", r_xi(s)))
    return _report("kappa_mu_gradient", hyps, concl, quantities=quantities)


def kappa_mu_branch_identities(ns=(1, 2, 3), symbolic_n: bool = True) -> list[Check]:
    """Both branches of the (κ,μ) alternative against the scalar constraint.

    κ and ε are indeterminates; n is substituted, and also kept symbolic
    when ``symbolic_n`` is set.
    """
    chart = Chart(("n", "kappa", "eps"))
    kappa, eps = chart.coordinate("kappa"), chart.coordinate("eps")
    values = [(str(k), chart.constant(k)) for k in ns]
    if symbolic_n:
        values.append(("n", chart.coordinate("n")))
    checks = []
    for label, n in values:
        mu1, tau1 = chart.zero(), -2 * eps * kappa
        mu2 = 2 - 2 * n
        tau2 = 2 * n * (-1 / n + n - eps * kappa)
        checks.append(check(f"branch μ=0 (n={label})", nullity_constraint_residual(n, kappa, mu1, tau1, eps)))
        checks.append(check(f"branch μ=2−2n (n={label})", nullity_constraint_residual(n, kappa, mu2, tau2, eps)))
    return checks


# ---------------------------------------------------------------------------
# The built-in three-dimensional example

def example_vector_coefficients(epsilon: int, lam: Fraction, mu: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    eps = epsilon
    lam, mu = Fraction(lam), Fraction(mu)
    return (
        2 - 6 * eps + (eps - 1) * lam + (1 - 2 * eps) * mu,
        2 * eps - lam,
        -(2 + eps * lam + mu),
    )


def example_structure(epsilon: int) -> ContactStructure:
    """ξ = 2∂z, η = ½(−y dx + dz), g = εη⊗η + ¼(dx² + dy²) on ℝ³."""
    chart = Chart(("x", "y", "z"))
    eta = TensorField.covector(chart, ["-1/2*y", "0", "1/2"])
    flat = TensorField(chart, (0, 2), [["1/4", "0", "0"], ["0", "1/4", "0"], ["0", "0", "0"]])
    g = tensor_product(eta, eta) * epsilon + flat
    # columns are the images of ∂x, ∂y, ∂z
    phi = TensorField(chart, (1, 1), [["0", "1", "0"], ["-1", "0", "0"], ["0", "y", "0"]])
    xi = TensorField.vector(chart, ["0", "0", "2"])
    return ContactStructure(chart, phi, xi, eta, g, epsilon)


def builtin_example(epsilon: int, lam: Fraction, mu: Fraction) -> tuple[ContactStructure, SolitonData]:
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    s = example_structure(epsilon)
    cx, cy, cz = example_vector_coefficients(epsilon, lam, mu)
    x, y, z = (s.chart.coordinate(c) for c in s.chart.coordinates)
    v = TensorField.vector(s.chart, [x * cx, y * cy, z * cz])
    return s, SolitonData(Fraction(lam), Fraction(mu), vector=v)


def applicable_theorems(s: ContactStructure, d: Optional[SolitonData]) -> list[TheoremReport]:
    """Every theorem check that can be run for the given inputs."""
    reports = []
    if d is None:
        return reports
    if d.is_gradient:
        reports.append(verify_proposition_gradient(s, d))
        reports.append(verify_kappa_mu_results(s, d))
    reports.append(verify_theorem_1(s, d))
    reports.append(verify_theorem_2(s, d))
    reports.append(verify_lemma_3(s, d.lam, d.mu, potential=d))
    if not d.is_gradient:
        reports.append(verify_theorem_3(s, d))
    return sorted(reports, key=lambda r: r.theorem)


__all__ = [
    "HYPOTHESIS_NOT_MET",
    "SolitonData",
    "SolitonVerdict",
    "TheoremReport",
    "VERIFIED",
    "VIOLATION",
    "applicable_theorems",
    "builtin_example",
    "example_structure",
    "example_vector_coefficients",
    "gradient_soliton_residual",
    "nullity_constraint_residual",
    "potential_vector",
    "soliton_class",
    "soliton_residual",
    "sasakian_soliton_coefficients",
    "kappa_mu_branch_identities",
    "verify_kappa_mu_results",
    "verify_lemma_3",
    "verify_proposition_gradient",
    "verify_theorem_1",
    "verify_theorem_2",
    "verify_theorem_3",
]

"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run."""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from contactgeom.contact import (
    classify,
    compute_ell,
    compute_h,
    d_homothetic_deform,
    k_contact_identities,
    nabla_phi,
    nabla_xi,
    ricci_xi_xi,
)
from contactgeom.soliton import (
    builtin_example,
    soliton_residual,
    sasakian_soliton_coefficients,
    kappa_mu_branch_identities,
    verify_lemma_3,
    verify_theorem_1,
)
from contactgeom.tensor import (
    TensorField,
    apply,
    compose,
    covariant_derivative,
    einsum,
    lie_connection_variation,
    lie_derivative,
    lower_index,
    tensor_product,
    trace,
)
from contactgeom.tensor.numeric import curvature_crosscheck, random_points

from structures import CHART, example

RESULTS: dict[int, str] = {}
SOLITON_PAIRS = [(6, 0), (7, 1), (5, -1)]


@contextmanager
def criterion(number: int, title: str, budget: float | None = None):
    """Time the block, record one line, and fail the test when the block or the budget fails."""
    start = time.perf_counter()
    outcome = {"ok": False, "detail": ""}
    try:
        yield outcome
    finally:
        elapsed = time.perf_counter() - start
        ok = outcome["ok"] and (budget is None or elapsed < budget)
        limit = f" (budget {budget:g} s)" if budget is not None else ""
        detail = f"  {outcome['detail']}" if outcome["detail"] else ""
        RESULTS[number] = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  [{elapsed:.2f} s{limit}]{detail}"
    assert ok, RESULTS[number]


def test_criterion_1_golden_ricci():
    with criterion(1, "Example Ricci equals −2εg + 4η⊗η for ε = ±1, exact", 5) as out:
        residuals = []
        for eps in (1, -1):
            s = example(eps)
            residuals.append(s.geometry.ricci - (s.g * (-2 * eps) + tensor_product(s.eta, s.eta) * 4))
        out["ok"] = all(r.is_zero() for r in residuals)


def test_criterion_2_soliton_verification():
    with criterion(2, "Example solitons: λ−μ=6 yes (non-Killing, 𝔏_Vφ=0), λ−μ≠6 no, ε=−1 Killing V=0", 10) as out:
        ok = True
        for lam, mu in SOLITON_PAIRS:
            v = soliton_residual(*builtin_example(1, lam, mu))
            ok &= v.is_soliton and not v.potential_is_killing and v.lie_phi_vanishes
        for lam, mu in [(1, 0), (0, 0), (6, 1), (8, 1)]:
            ok &= not soliton_residual(*builtin_example(1, lam, mu)).is_soliton
        s, d = builtin_example(-1, -2, -4)
        v = soliton_residual(s, d)
        ok &= d.vector.is_zero() and v.is_soliton and v.potential_is_killing
        out["ok"] = ok


def test_criterion_3_closed_forms():
    with criterion(3, "closed-form (a, b, r) match the computed Ricci on every verified soliton") as out:
        ok = sasakian_soliton_coefficients(1, 1, Fraction(6), Fraction(0)) == (-2, 4, -2)
        cases = [(1, lam, mu) for lam, mu in SOLITON_PAIRS] + [(-1, -2, -4)]
        for eps, lam, mu in cases:
            s, d = builtin_example(eps, lam, mu)
            report = verify_theorem_1(s, d)
            ok &= report.overall == "verified"
            a, b, r = sasakian_soliton_coefficients(1, eps, Fraction(lam), Fraction(mu))
            ok &= (s.geometry.ricci - s.g * a - tensor_product(s.eta, s.eta) * b).is_zero()
            ok &= s.geometry.scalar == CHART.constant(r)
        out["ok"] = ok


def test_criterion_4_ricci_norm_identity():
    with criterion(4, "|Ric|² = 12, λr + μ(εa+b) = −12, sum 0 for each λ−μ=6 pair") as out:
        ok = True
        values = []
        for lam, mu in SOLITON_PAIRS:
            s, d = builtin_example(1, lam, mu)
            q = verify_lemma_3(s, lam, mu, potential=d).quantities
            ok &= (q["a"], q["b"]) == (-2, 4)
            ok &= q["|Ric|^2"] == CHART.constant(12)
            ok &= q["lambda*r+mu*(eps*a+b)"] == CHART.constant(-12)
            ok &= q["sum"].is_zero()
            values.append(str(q["|Ric|^2"]))
        out["ok"] = ok
        out["detail"] = f"|Ric|² = {', '.join(values)}"


def _identity_suite(eps: int) -> dict[str, bool]:
    s = example(eps)
    n = s.n
    h = compute_h(s)
    ell = compute_ell(s)
    phi = s.phi
    Q = s.ricci_operator
    checks = {
        "tr h = 0": trace(h).is_zero(),
        "tr(hφ) = 0": trace(compose(h, phi)).is_zero(),
        "hφ + φh = 0": (compose(h, phi) + compose(phi, h)).is_zero(),
        "hξ = 0": apply(h, s.xi).is_zero(),
        "ℓξ = 0": apply(ell, s.xi).is_zero(),
        "∇_ξφ = 0": einsum("ijk,k->ij", nabla_phi(s), s.xi, valence=(1, 1)).is_zero(),
        "∇_Xξ = −εφX − φhX": (nabla_xi(s) + phi * eps + compose(phi, h)).is_zero(),
        "Ric(ξ,ξ) = 2n − tr h²": ricci_xi_xi(s) == CHART.constant(2 * n) - trace(compose(h, h)),
        "Qξ = 2nεξ": apply(Q, s.xi) == s.xi * (2 * n * eps),
        "Qφ = φQ": compose(Q, phi) == compose(phi, Q),
    }
    # (∇_XQ)ξ = −2nφX + εQφX and (∇_ξQ)X = ε(Qφ − φQ)X
    nQ = covariant_derivative(Q, s.geometry.connection)  # [i, j, k] = ((∇_k Q)∂_j)^i
    along_reeb = einsum("ijk,j->ik", nQ, s.xi, valence=(1, 1))
    reeb_direction = einsum("ijk,k->ij", nQ, s.xi, valence=(1, 1))
    checks["(∇_XQ)ξ = −2nφX + εQφX"] = along_reeb == phi * (-2 * n) + compose(Q, phi) * eps
    checks["(∇_ξQ)X = ε(Qφ − φQ)X"] = reeb_direction == (compose(Q, phi) - compose(phi, Q)) * eps
    # the packaged suites must agree with the direct computation
    checks["packaged K-contact suite"] = k_contact_identities(s).ok
    return checks


def test_criterion_5_identity_suite():
    with criterion(5, "structure-tensor, K-contact and Ricci-operator identities, exact on the Example, ε = ±1", 30) as out:
        failed = [f"ε={eps}: {name}" for eps in (1, -1) for name, ok in _identity_suite(eps).items() if not ok]
        out["ok"] = not failed
        out["detail"] = "; ".join(failed)


def test_criterion_6_d_homothetic_fixedness():
    with criterion(6, "deformed Example (t = 2, 3, 1/2) stays Sasakian with ã = −2ε") as out:
        ok = True
        for eps in (1, -1):
            for t in (Fraction(2), Fraction(3), Fraction(1, 2)):
                c = classify(d_homothetic_deform(example(eps), t))
                ok &= c.is_sasakian and c.eta_einstein is not None and c.eta_einstein[0] == -2 * eps
        out["ok"] = ok


def test_criterion_7_branch_algebra():
    with criterion(7, "both (κ,μ) branches satisfy the scalar constraint for n = 1, 2, 3 and symbolic n") as out:
        checks = kappa_mu_branch_identities(ns=(1, 2, 3), symbolic_n=True)
        out["ok"] = len(checks) == 8 and all(c.holds for c in checks)


def _random_field(seed: int) -> TensorField:
    rng = random.Random(seed)
    comps = []
    for _ in CHART.coordinates:
        terms = [
            f"({rng.randint(-3, 3)})*" + "*".join(f"{v}^{rng.randint(1, 2)}" for v in CHART.coordinates if rng.random() < 0.5)
            for _ in range(rng.randint(1, 3))
        ]
        comps.append(" + ".join(t.rstrip("*") or "1" for t in terms))
    return TensorField.vector(CHART, comps)


def test_criterion_8_property_suites():
    with criterion(8, "connection/curvature invariants, Lie vs covariant forms, commutation formula, FD cross-check", 60) as out:
        s = example(1)
        geo = s.geometry
        R = geo.riemann
        lowered = einsum("ha,akji->hkji", geo.metric, R, valence=(0, 4))
        checks = {
            "Christoffel symmetry": geo.connection.is_symmetric(),
            "∇g = 0": covariant_derivative(geo.metric, geo.connection).is_zero(),
            "Riemann antisymmetry": (R + R.transpose([0, 2, 1, 3])).is_zero()
            and (lowered + lowered.transpose([3, 1, 2, 0])).is_zero(),
            "first Bianchi": (R + R.transpose([0, 3, 1, 2]) + R.transpose([0, 2, 3, 1])).is_zero(),
            "Ricci symmetry": geo.ricci.is_symmetric(),
        }
        fields = [_random_field(seed) for seed in range(100, 105)]
        lie_ok = comm_ok = True
        for v in fields:
            nv = covariant_derivative(lower_index(v, 0, geo), geo.connection)
            lie_ok &= lie_derivative(s.g, v) == nv + nv.transpose([1, 0])
            S = lie_connection_variation(v, geo)
            nS = covariant_derivative(S, geo.connection)
            lhs = lie_derivative(R, v)
            for h, k, j, i in np.ndindex(3, 3, 3, 3):
                if lhs[h, k, j, i] != nS[h, j, i, k] - nS[h, k, i, j]:
                    comm_ok = False
        checks["𝔏_Vg = ∇_iV_j + ∇_jV_i (5 random V)"] = lie_ok
        checks["𝔏_V R commutation formula (5 random V)"] = comm_ok
        error = curvature_crosscheck(geo, random_points(geo, 10, seed=11))
        checks["finite-difference curvature ≤ 1e−6"] = error <= 1e-6
        failed = [name for name, ok in checks.items() if not ok]
        out["ok"] = not failed
        out["detail"] = f"max FD relative error {error:.1e}" + ("; failed: " + ", ".join(failed) if failed else "")

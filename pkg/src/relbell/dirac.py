"""Four-spinor cross-checks of the center-of-mass spin operator.

The two-detector correlation modules work entirely in 2x2 land. This
module rebuilds the same spin operator inside the first-quantized
free-particle theory, in the Dirac-Pauli representation with
hbar = c = 1, and verifies the operator identities that tie the two
pictures together:

* the projected spin a . S has the doubly degenerate spectrum
  +- |lambda_a| predicted by the alpha map, and commutes with H;
* the displayed simultaneous eigenstates of H and a . S check out;
* the Heisenberg spin derivative is a precession, i [H, s] = omega x s;
* the even part Omega of the precession frequency rebuilds the
  Hamiltonian through H = beta^-2 Omega . S;
* for a massless particle the Hamiltonian is velocity dot momentum with
  an even velocity operator;
* the invariant W0^2 - W.W is the expected Casimir multiple of the
  identity.

Each check returns a :class:`CheckReport` carrying named residuals; a
check whose residual exceeds tolerance raises the matching error with
the report attached, so callers can still serialize what failed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EigenstateResidual,
    IdentityMismatch,
    NullContext,
    PrecessionMismatch,
    SpectrumMismatch,
    ZeroHelicity,
)
from .kinematics import check_unit, decompose, orthonormal_triad
from .linalg import ID2, PAULI, commutator, herm_eig, max_abs, pauli_dot
from .observables import helicity_basis

ID4 = np.eye(4, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

#: Dirac-Pauli representation. GAMMA0 is the parity matrix diag(1, -1)
#: blocks; ALPHA are the velocity matrices gamma0 gamma^k.
GAMMA0 = np.block([[ID2, _Z2], [_Z2, -ID2]])
GAMMA = tuple(np.block([[_Z2, sk], [-sk, _Z2]]) for sk in PAULI)
ALPHA = tuple(np.block([[_Z2, sk], [sk, _Z2]]) for sk in PAULI)
#: Chirality matrix with the sign convention -i gamma0 gamma1 gamma2 gamma3,
#: fixed so that the free precession frequency below is omega = -2 gamma5 p.
GAMMA5 = np.block([[_Z2, -ID2], [-ID2, _Z2]])
#: Spin matrices s_k = diag(sigma_k, sigma_k) / 2.
SPIN = tuple(np.block([[sk, _Z2], [_Z2, sk]]) / 2.0 for sk in PAULI)

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_j, _i, _k] = -1.0


@dataclass(frozen=True, eq=False)
class DiracContext:
    """Momentum, mass and derived kinematics of one free particle."""

    p: np.ndarray
    m: float
    p0: float

    @property
    def p_mag(self) -> float:
        return float(np.linalg.norm(self.p))

    @property
    def beta(self) -> np.ndarray:
        """Velocity vector p / p0."""
        return self.p / self.p0

    @property
    def n(self) -> np.ndarray | None:
        """Momentum direction, or None for a particle at rest."""
        return self.p / self.p_mag if self.p_mag > 0.0 else None


@dataclass(frozen=True, eq=False)
class DiracOperatorSet:
    """The 4x4 operator family of one free particle.

    S is the center-of-mass spin W H^-1; Omega is the even part of the
    precession frequency (None at zero momentum, where no motion axis
    exists).
    """

    ctx: DiracContext
    H: np.ndarray
    Lambda: np.ndarray
    Pi_plus: np.ndarray
    Pi_minus: np.ndarray
    s: tuple
    W0: np.ndarray
    W: tuple
    S: tuple
    Omega: tuple | None


@dataclass(frozen=True)
class CheckRecord:
    """One named residual with its tolerance."""

    check: str
    max_residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class CheckReport:
    """The residual records of one identity check."""

    name: str
    records: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def max_residual(self) -> float:
        return max(r.max_residual for r in self.records)

    def as_dicts(self) -> list:
        return [r.as_dict() for r in self.records]


def _record(check: str, residual: float, tol: float) -> CheckRecord:
    return CheckRecord(check=check, max_residual=float(residual),
                       tolerance=float(tol), passed=residual <= tol)


def _finish(name: str, records, error_cls) -> CheckReport:
    report = CheckReport(name=name, records=tuple(records))
    if not report.passed:
        failing = ", ".join(f"{r.check}={r.max_residual:.3e}" for r in records if not r.passed)
        raise error_cls(f"{name} exceeded tolerance: {failing}", report=report)
    return report


def build_context(p, m: float) -> DiracOperatorSet:
    """Assemble the operator family for momentum p and mass m >= 0.

    Raises NullContext when both vanish. At p = 0 the spin S coincides
    with s exactly; in general S = W H^-1 with W0 = p . s and
    W_k = (s_k H + H s_k) / 2.
    """
    p = np.asarray(p, dtype=float).reshape(3)
    m = float(m)
    if m < 0.0:
        raise ValueError(f"mass must be non-negative, got {m!r}")
    p_mag = float(np.linalg.norm(p))
    if p_mag == 0.0 and m == 0.0:
        raise NullContext("momentum and mass are both zero")
    p0 = math.hypot(p_mag, m)
    ctx = DiracContext(p=p, m=m, p0=p0)

    H = sum(p[k] * ALPHA[k] for k in range(3)) + m * GAMMA0
    Lambda = H / p0
    Pi_plus = (ID4 + Lambda) / 2.0
    Pi_minus = (ID4 - Lambda) / 2.0
    W0 = sum(p[k] * SPIN[k] for k in range(3))
    W = tuple((SPIN[k] @ H + H @ SPIN[k]) / 2.0 for k in range(3))
    # H^-1 = H / (p^2 + m^2) for the free Hamiltonian.
    S = tuple(W[k] @ H / (p0 * p0) for k in range(3))

    Omega = None
    if p_mag > 0.0:
        n = p / p_mag
        gamma_n = sum(n[k] * GAMMA[k] for k in range(3))
        even_part = (p_mag**2 / p0**2) * (ID4 + (m / p_mag) * gamma_n)
        Omega = tuple(even_part @ (-2.0 * p[k] * GAMMA5) for k in range(3))
    return DiracOperatorSet(ctx=ctx, H=H, Lambda=Lambda, Pi_plus=Pi_plus,
                            Pi_minus=Pi_minus, s=SPIN, W0=W0, W=W, S=S, Omega=Omega)


def projected_spin(ops: DiracOperatorSet, a) -> np.ndarray:
    """The 4x4 projection a . S."""
    a = check_unit(a, "analyzer axis")
    return sum(a[k] * ops.S[k] for k in range(3))


def spin_spectrum_check(ops: DiracOperatorSet, a, eig_tol: float = 1e-10,
                        comm_tol: float = 1e-12) -> CheckReport:
    """Spectrum of a . S against the alpha-map closed form.

    The four eigenvalues must be {-l, -l, +l, +l} with
    l = sqrt(1 + (beta . a)^2 - beta^2) / 2 and beta = p / p0, and a . S
    must commute with H.
    """
    a = check_unit(a, "analyzer axis")
    a_s = projected_spin(ops, a)
    eigenvalues, _ = herm_eig(a_s)
    beta = ops.ctx.beta
    ba = float(np.dot(beta, a))
    lam = 0.5 * math.sqrt(1.0 + ba * ba - float(np.dot(beta, beta)))
    expected = np.array([-lam, -lam, lam, lam])
    records = [
        _record("spin_spectrum.eigenvalues", max_abs(eigenvalues - expected), eig_tol),
        _record("spin_spectrum.commutes_with_hamiltonian",
                max_abs(commutator(a_s, ops.H)), comm_tol),
    ]
    return _finish("spin_spectrum", records, SpectrumMismatch)


def eigenstates(ops: DiracOperatorSet, a):
    """Normalized simultaneous eigenstates of H (energy +p0) and a . S.

    Built from the helicity two-spinors w+- along n = p/|p| and the
    transverse unit vector t along the orthogonal part of a:

        upper = sqrt(p0 + m) (c1 w+- +- c2 w-+)
        lower = sqrt(p0 - m) (+- c1 w+- - c2 w-+)

    with c1 = |lambda_a| + (a . n)/2 and c2 = m (a . t) / (2 p0). The
    formula needs the relative phase of w- fixed against t, which is done
    here by taking w- = (t . sigma) w+. Returns (psi_plus, psi_minus)
    for the a . S eigenvalues +|lambda_a| and -|lambda_a|. Requires
    m > 0 and |p| > 0.
    """
    a = check_unit(a, "analyzer axis")
    ctx = ops.ctx
    if ctx.m <= 0.0 or ctx.p_mag == 0.0:
        raise ValueError("eigenstate construction needs m > 0 and |p| > 0")
    n = ctx.n
    a_par, a_perp = decompose(a, n)
    perp_len = float(np.linalg.norm(a_perp))
    if perp_len > 1e-13:
        t = a_perp / perp_len
    else:
        t = orthonormal_triad(n)[0]
    w_plus, _ = helicity_basis(n)
    w_minus = pauli_dot(t) @ w_plus

    beta = ctx.beta
    ba = float(np.dot(beta, a))
    lam = 0.5 * math.sqrt(1.0 + ba * ba - float(np.dot(beta, beta)))
    c1 = lam + 0.5 * float(np.dot(a, n))
    c2 = ctx.m * float(np.dot(a, t)) / (2.0 * ctx.p0)
    if c1 * c1 + c2 * c2 < 1e-24:
        # a antiparallel to n: the formula collapses; build for -a and swap.
        psi_minus, psi_plus = eigenstates(ops, -a)
        return psi_plus, psi_minus

    up = math.sqrt(ctx.p0 + ctx.m)
    # sqrt(p0 - m) via |p| / sqrt(p0 + m), exact identity, no cancellation.
    low = ctx.p_mag / up

    def assemble(upper, lower):
        psi = np.concatenate([up * upper, low * lower])
        return psi / np.linalg.norm(psi)

    psi_plus = assemble(c1 * w_plus + c2 * w_minus, c1 * w_plus - c2 * w_minus)
    psi_minus = assemble(c1 * w_minus - c2 * w_plus, -c1 * w_minus - c2 * w_plus)
    return psi_plus, psi_minus


def eigenstate_check(ops: DiracOperatorSet, a, tol: float = 1e-10) -> CheckReport:
    """Residuals of the constructed eigenstates under H and a . S."""
    a = check_unit(a, "analyzer axis")
    psi_plus, psi_minus = eigenstates(ops, a)
    a_s = projected_spin(ops, a)
    ctx = ops.ctx
    beta = ctx.beta
    ba = float(np.dot(beta, a))
    lam = 0.5 * math.sqrt(1.0 + ba * ba - float(np.dot(beta, beta)))
    energy = max(
        max_abs(ops.H @ psi_plus - ctx.p0 * psi_plus),
        max_abs(ops.H @ psi_minus - ctx.p0 * psi_minus),
    )
    spin = max(
        max_abs(a_s @ psi_plus - lam * psi_plus),
        max_abs(a_s @ psi_minus + lam * psi_minus),
    )
    records = [
        _record("eigenstate.energy", energy, tol),
        _record("eigenstate.spin_projection", spin, tol),
    ]
    return _finish("eigenstate", records, EigenstateResidual)


def precession_frequency(ops: DiracOperatorSet) -> tuple:
    """The matrix-valued precession frequency omega = -2 gamma5 p."""
    return tuple(-2.0 * ops.ctx.p[k] * GAMMA5 for k in range(3))


def precession_check(ops: DiracOperatorSet, tol: float = 1e-12) -> CheckReport:
    """Heisenberg equation of the spin: i [H, s_k] = (omega x s)_k.

    For a massless particle omega additionally commutes with H, so the
    precession frequency is then a constant of the motion; that residual
    is reported as a second record in the massless case.
    """
    omega = precession_frequency(ops)
    residual = 0.0
    for k in range(3):
        lhs = 1.0j * commutator(ops.H, ops.s[k])
        rhs = sum(_EPS[k, l, mm] * (omega[l] @ ops.s[mm])
                  for l in range(3) for mm in range(3))
        residual = max(residual, max_abs(lhs - rhs))
    records = [_record("precession.heisenberg_vs_cross", residual, tol)]
    if ops.ctx.m == 0.0:
        conserved = max(max_abs(commutator(omega[k], ops.H)) for k in range(3))
        records.append(_record("precession.omega_commutes_with_hamiltonian", conserved, tol))
    return _finish("precession", records, PrecessionMismatch)


def hamiltonian_identity_check(ops: DiracOperatorSet, subspace_tol: float = 1e-10,
                               full_tol: float = 1e-10,
                               even_tol: float = 1e-12) -> CheckReport:
    """The Hamiltonian rebuilt from spin and precession: H = beta^-2 Omega . S.

    Omega is the even part of omega. The residual is reported on the full
    space and restricted to each energy-sign subspace separately, plus
    the evenness of Omega itself. Requires m > 0 and |p| > 0.
    """
    ctx = ops.ctx
    if ctx.m <= 0.0 or ctx.p_mag == 0.0 or ops.Omega is None:
        raise ValueError("Hamiltonian identity needs m > 0 and |p| > 0")
    beta2 = float(np.dot(ctx.beta, ctx.beta))
    rebuilt = sum(ops.Omega[k] @ ops.S[k] for k in range(3)) / beta2
    diff = rebuilt - ops.H
    even = max(max_abs(ops.Pi_plus @ ops.Omega[k] @ ops.Pi_minus) for k in range(3))
    records = [
        _record("hamiltonian_identity.full_space", max_abs(diff), full_tol),
        _record("hamiltonian_identity.positive_subspace",
                max_abs(ops.Pi_plus @ diff @ ops.Pi_plus), subspace_tol),
        _record("hamiltonian_identity.negative_subspace",
                max_abs(ops.Pi_minus @ diff @ ops.Pi_minus), subspace_tol),
        _record("hamiltonian_identity.omega_even", even, even_tol),
    ]
    return _finish("hamiltonian_identity", records, IdentityMismatch)


def spin_form_agreement_check(ops: DiracOperatorSet, ratio_tol: float = 1e-12,
                              explicit_tol: float = 1e-11) -> CheckReport:
    """Agreement of three expressions for the spin S.

    The stored W H^-1 form is compared against the energy-sign projector
    form Pi+ s Pi+ + Pi- s Pi- and against the explicit decomposition

        S = (m^2/p0^2) s + (p^2/p0^2)(n . s) n + i m/(2 p0^2) p x gamma.
    """
    ctx = ops.ctx
    projector = tuple(
        ops.Pi_plus @ ops.s[k] @ ops.Pi_plus + ops.Pi_minus @ ops.s[k] @ ops.Pi_minus
        for k in range(3)
    )
    n_s = sum(ctx.p[k] * ops.s[k] for k in range(3)) / ctx.p_mag if ctx.p_mag > 0.0 \
        else np.zeros((4, 4), dtype=complex)
    explicit = []
    for k in range(3):
        term = (ctx.m**2 / ctx.p0**2) * ops.s[k]
        if ctx.p_mag > 0.0:
            term = term + (ctx.p_mag**2 / ctx.p0**2) * n_s * ctx.n[k]
        cross = sum(_EPS[k, l, mm] * ctx.p[l] * GAMMA[mm]
                    for l in range(3) for mm in range(3))
        term = term + 1.0j * ctx.m / (2.0 * ctx.p0**2) * cross
        explicit.append(term)
    records = [
        _record("spin_forms.projector_vs_ratio",
                max(max_abs(projector[k] - ops.S[k]) for k in range(3)), ratio_tol),
        _record("spin_forms.explicit_vs_ratio",
                max(max_abs(explicit[k] - ops.S[k]) for k in range(3)), explicit_tol),
        _record("spin_forms.explicit_vs_projector",
                max(max_abs(explicit[k] - projector[k]) for k in range(3)), explicit_tol),
    ]
    return _finish("spin_forms", records, IdentityMismatch)


def casimir_check(ops: DiracOperatorSet, tol: float = 1e-10) -> CheckReport:
    """W0^2 - W . W = -(3/4) m^2, the spin-1/2 invariant."""
    value = ops.W0 @ ops.W0 - sum(ops.W[k] @ ops.W[k] for k in range(3))
    expected = -0.75 * ops.ctx.m**2 * ID4
    records = [_record("casimir.invariant", max_abs(value - expected), tol)]
    return _finish("casimir", records, IdentityMismatch)


def evenness_check(ops: DiracOperatorSet, tol: float = 1e-12) -> CheckReport:
    """S (and Omega, when defined) must not mix the energy signs."""
    records = [_record(
        "evenness.spin",
        max(max_abs(ops.Pi_plus @ ops.S[k] @ ops.Pi_minus) for k in range(3)),
        tol,
    )]
    if ops.Omega is not None:
        records.append(_record(
            "evenness.omega",
            max(max_abs(ops.Pi_plus @ ops.Omega[k] @ ops.Pi_minus) for k in range(3)),
            tol,
        ))
    return _finish("evenness", records, IdentityMismatch)


def massless_even_velocity_check(p, tol: float = 1e-12) -> CheckReport:
    """For m = 0 the Hamiltonian is c . p with an even velocity operator.

    c is the velocity component along the motion, (v . p) p / p^2 with
    v the velocity matrices; each c_k must commute with the energy sign,
    and c . p must rebuild H exactly.
    """
    p = np.asarray(p, dtype=float).reshape(3)
    if float(np.linalg.norm(p)) == 0.0:
        raise NullContext("massless check needs nonzero momentum")
    ops = build_context(p, 0.0)
    p2 = float(np.dot(p, p))
    v_dot_p = sum(p[k] * ALPHA[k] for k in range(3))
    c = tuple(v_dot_p * (p[k] / p2) for k in range(3))
    rebuilt = sum(c[k] * p[k] for k in range(3))
    even = max(max_abs(ops.Pi_plus @ c[k] @ ops.Pi_minus) for k in range(3))
    records = [
        _record("massless_velocity.hamiltonian", max_abs(rebuilt - ops.H), tol),
        _record("massless_velocity.even", even, tol),
    ]
    return _finish("massless_velocity", records, IdentityMismatch)


@dataclass(frozen=True)
class KineticQuantities:
    """Rigid-rotator reading of a massless helicity eigenstate.

    A massless particle of helicity lambda and momentum p behaves like a
    mass m_k = |p| circling at radius r = |lambda|/|p| with moment of
    inertia I = lambda^2/|p| and angular velocity omega = |p|/|lambda|,
    so that I omega^2 = m_k and I = m_k r^2.
    """

    kinetic_mass: float
    moment_of_inertia: float
    gyration_radius: float
    angular_velocity: float


def kinetic_quantities(lam: float, p_mag: float) -> KineticQuantities:
    """The rotator quantities for helicity lam and momentum magnitude p_mag.

    lam must be a nonzero half-integer (ZeroHelicity otherwise); for
    lam = +-1/2 the angular velocity is 2 p_mag, the magnitude of the
    free Dirac precession frequency.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ZeroHelicity("kinetic quantities are undefined at zero helicity")
    if abs(2.0 * lam - round(2.0 * lam)) > 1e-12:
        raise ValueError(f"helicity must be a half-integer, got {lam!r}")
    if not p_mag > 0.0:
        raise ValueError(f"momentum magnitude must be positive, got {p_mag!r}")
    radius = abs(lam) / p_mag
    quantities = KineticQuantities(
        kinetic_mass=p_mag,
        moment_of_inertia=lam * lam / p_mag,
        gyration_radius=radius,
        angular_velocity=p_mag / abs(lam),
    )
    drift = abs(quantities.moment_of_inertia - quantities.kinetic_mass * radius * radius)
    if drift > 1e-14:
        raise ArithmeticError(f"I != m r^2 by {drift:.3e}")
    return quantities


def com_uncertainty_bound(lam: float, p2_mean: float) -> float:
    """Lower bound |lambda| / (2 <p^2>) on the transverse position spread
    of the center of mass.

    Equals <r^2> / (2 |lambda|) when the gyration radius satisfies
    <r^2> = lambda^2 / <p^2>. Zero helicity gives a vanishing bound.
    """
    lam = float(lam)
    if abs(2.0 * lam - round(2.0 * lam)) > 1e-12:
        raise ValueError(f"helicity must be a half-integer, got {lam!r}")
    if not p2_mean > 0.0:
        raise ValueError(f"<p^2> must be positive, got {p2_mean!r}")
    return abs(lam) / (2.0 * p2_mean)

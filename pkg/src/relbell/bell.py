"""CHSH combinations of singlet correlations and their dependence on the
pair velocity.

For detector settings (a, a') and (b, b') the CHSH combination is

    c = E(a, b) + E(a, b') + E(a', b) - E(a', b'),

with E the singlet correlation from :mod:`relbell.observables`. At rest
the standard coplanar settings reach the quantum bound |c| = 2 sqrt(2).
For a moving pair the bound survives only when every axis stays
orthogonal to the motion; otherwise the deformation of the analyzer axes
suppresses |c|, and an apparatus calibrated at rest will underreport the
correlation. The scan helpers in this module tabulate that suppression
over velocity grids; ``maximize_chsh`` searches for the best settings at
a fixed velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateObservable, EmptyGrid
from .kinematics import BeamVelocity, alpha_norm, check_unit
from .observables import DEGENERACY_THRESHOLD, eprb_closed_form

# Correctly rounded 1/sqrt(2); 1.0/math.sqrt(2.0) is one ulp low and the
# rest-frame CHSH combination would then miss -2*sqrt(2) by an ulp too.
_SQ2 = math.sqrt(0.5)


@dataclass(frozen=True, eq=False)
class ChshSettings:
    """The four analyzer axes of a CHSH run (all unit 3-vectors)."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    @classmethod
    def of(cls, a, a_prime, b, b_prime) -> "ChshSettings":
        return cls(
            a=check_unit(a, "a"),
            a_prime=check_unit(a_prime, "a_prime"),
            b=check_unit(b, "b"),
            b_prime=check_unit(b_prime, "b_prime"),
        )

    def labeled(self):
        return (("a", self.a), ("a_prime", self.a_prime),
                ("b", self.b), ("b_prime", self.b_prime))


#: Coplanar settings that reach -2 sqrt(2) for a pair at rest.
STANDARD_SETTINGS = ChshSettings(
    a=np.array([_SQ2, _SQ2, 0.0]),
    a_prime=np.array([-_SQ2, _SQ2, 0.0]),
    b=np.array([0.0, 1.0, 0.0]),
    b_prime=np.array([1.0, 0.0, 0.0]),
)


def chsh_value(settings: ChshSettings, beta, correlation=None) -> float:
    """The CHSH combination at velocity beta.

    ``correlation`` may swap in an alternative correlation function with
    the signature of ``eprb_closed_form`` (the matrix-oracle route is the
    intended substitute). Raises DegenerateObservable naming the first
    collapsed setting when |beta| = 1 makes an axis degenerate.
    """
    bv = BeamVelocity.of(beta)
    for label, axis in settings.labeled():
        if alpha_norm(axis, bv) <= DEGENERACY_THRESHOLD:
            raise DegenerateObservable(f"setting {label} degenerate at |beta| = {bv.magnitude!r}")
    corr = eprb_closed_form if correlation is None else correlation
    return math.fsum([
        corr(settings.a, settings.b, bv),
        corr(settings.a, settings.b_prime, bv),
        corr(settings.a_prime, settings.b, bv),
        -corr(settings.a_prime, settings.b_prime, bv),
    ])


@dataclass(frozen=True, eq=False)
class ScanTable:
    """A rectangular table of values over a coordinate grid.

    ``values`` has shape grid-shape + (len(columns),). Grid points where
    the value is undefined (a degenerate observable) are listed in
    ``gaps`` and hold NaN; every value off that list is finite. The table
    serializes to CSV with one row per grid point, leading ``#`` metadata
    lines, and shortest round-trip float formatting, so identical inputs
    reproduce identical bytes.
    """

    axes: tuple
    coords: tuple
    columns: tuple
    values: np.ndarray
    gaps: tuple = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        expected = tuple(len(c) for c in self.coords) + (len(self.columns),)
        if tuple(self.values.shape) != expected:
            raise ValueError(f"values shape {self.values.shape} != grid shape {expected}")
        gapset = set(self.gaps)
        for idx in np.ndindex(*self.values.shape[:-1]):
            if idx not in gapset and not np.all(np.isfinite(self.values[idx])):
                raise ValueError(f"non-finite value at grid point {idx} not marked as a gap")

    def to_csv(self) -> str:
        lines = [f"# {key}={self.metadata[key]}" for key in sorted(self.metadata)]
        lines.append(",".join(self.axes + self.columns))
        gapset = set(self.gaps)
        for idx in np.ndindex(*self.values.shape[:-1]):
            cells = [repr(float(self.coords[d][i])) for d, i in enumerate(idx)]
            if idx in gapset:
                cells.extend("degenerate" for _ in self.columns)
            else:
                cells.extend(repr(float(v)) for v in self.values[idx])
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _settings_metadata(settings: ChshSettings) -> dict:
    return {
        label: ",".join(repr(float(x)) for x in axis)
        for label, axis in settings.labeled()
    }


def scan_beta_phi(settings: ChshSettings, beta_grid, phi_grid) -> ScanTable:
    """CHSH values on a grid of speeds and in-plane motion azimuths.

    The velocity is beta (cos phi, sin phi, 0): motion in the plane of
    the standard settings, the worst case for the suppression. Speeds
    must lie in [0, 1]; points that land on a degenerate axis (possible
    only at beta = 1) become gaps.
    """
    beta_grid = np.asarray(beta_grid, dtype=float).reshape(-1)
    phi_grid = np.asarray(phi_grid, dtype=float).reshape(-1)
    if beta_grid.size == 0 or phi_grid.size == 0:
        raise EmptyGrid("scan_beta_phi needs at least one speed and one azimuth")
    if np.any(beta_grid < 0.0) or np.any(beta_grid > 1.0):
        raise ValueError("speeds must lie in [0, 1]")
    values = np.empty((beta_grid.size, phi_grid.size, 1))
    gaps = []
    for i, b in enumerate(beta_grid):
        for k, phi in enumerate(phi_grid):
            beta = np.array([b * math.cos(phi), b * math.sin(phi), 0.0])
            try:
                values[i, k, 0] = chsh_value(settings, beta)
            except DegenerateObservable:
                values[i, k, 0] = math.nan
                gaps.append((i, k))
    meta = _settings_metadata(settings)
    meta["beta_parametrization"] = "beta*(cos(phi),sin(phi),0)"
    return ScanTable(
        axes=("beta", "phi"), coords=(beta_grid, phi_grid), columns=("chsh",),
        values=values, gaps=tuple(gaps), metadata=meta,
    )


def scan_theta_phi(settings: ChshSettings, beta_mag: float, theta_grid, phi_grid) -> ScanTable:
    """CHSH values over all motion directions at a fixed speed.

    The velocity direction is (cos phi sin theta, sin phi sin theta,
    cos theta); theta = 0 points out of the settings plane, where the
    rest-frame value survives.
    """
    theta_grid = np.asarray(theta_grid, dtype=float).reshape(-1)
    phi_grid = np.asarray(phi_grid, dtype=float).reshape(-1)
    if theta_grid.size == 0 or phi_grid.size == 0:
        raise EmptyGrid("scan_theta_phi needs at least one polar and one azimuthal angle")
    if not (0.0 <= beta_mag <= 1.0):
        raise ValueError(f"speed must lie in [0, 1], got {beta_mag!r}")
    values = np.empty((theta_grid.size, phi_grid.size, 1))
    gaps = []
    for i, th in enumerate(theta_grid):
        for k, phi in enumerate(phi_grid):
            beta = beta_mag * np.array(
                [math.cos(phi) * math.sin(th), math.sin(phi) * math.sin(th), math.cos(th)]
            )
            try:
                values[i, k, 0] = chsh_value(settings, beta)
            except DegenerateObservable:
                values[i, k, 0] = math.nan
                gaps.append((i, k))
    meta = _settings_metadata(settings)
    meta["beta_magnitude"] = repr(float(beta_mag))
    meta["beta_parametrization"] = "beta*(cos(phi)sin(theta),sin(phi)sin(theta),cos(theta))"
    return ScanTable(
        axes=("theta", "phi"), coords=(theta_grid, phi_grid), columns=("chsh",),
        values=values, gaps=tuple(gaps), metadata=meta,
    )


def proper_time_comparison(beta_grid) -> ScanTable:
    """Velocity dependence of the correlation next to that of proper time.

    For orthogonal analyzer axes both tilted 45 degrees toward the beam,
    the singlet correlation is -beta^2/(2 - beta^2): zero at rest, -1 at
    light speed. The second column holds sqrt(1 - beta^2) - 1, the
    fractional defect of proper time against lab time, for a like-by-like
    comparison of the two relativistic distortions. The correlation
    defect dominates at every intermediate speed.
    """
    beta_grid = np.asarray(beta_grid, dtype=float).reshape(-1)
    if beta_grid.size == 0:
        raise EmptyGrid("proper_time_comparison needs at least one speed")
    if np.any(beta_grid < 0.0) or np.any(beta_grid > 1.0):
        raise ValueError("speeds must lie in [0, 1]")
    values = np.empty((beta_grid.size, 2))
    for i, b in enumerate(beta_grid):
        b2 = b * b
        values[i, 0] = -b2 / (2.0 - b2)
        values[i, 1] = math.sqrt(1.0 - b2) - 1.0
    return ScanTable(
        axes=("beta",), coords=(beta_grid,), columns=("correlation", "proper_time"),
        values=values,
        metadata={
            "correlation": "orthogonal axes at 45 degrees to the beam",
            "proper_time": "sqrt(1-beta^2)-1",
        },
    )


def _angles_of(settings: ChshSettings) -> np.ndarray:
    out = []
    for _, axis in settings.labeled():
        out.append(math.acos(max(-1.0, min(1.0, axis[2]))))
        out.append(math.atan2(axis[1], axis[0]) % (2.0 * math.pi))
    return np.array(out)


def _settings_of(angles) -> ChshSettings:
    axes = []
    for k in range(4):
        th, phi = angles[2 * k], angles[2 * k + 1]
        axes.append(np.array([
            math.sin(th) * math.cos(phi),
            math.sin(th) * math.sin(phi),
            math.cos(th),
        ]))
    return ChshSettings(a=axes[0], a_prime=axes[1], b=axes[2], b_prime=axes[3])


def maximize_chsh(beta, restarts: int = 8, tol: float = 1e-9, seed: int = 0,
                  initial: ChshSettings | None = None, trace: list | None = None):
    """Search for settings maximizing |c| at a fixed velocity.

    Deterministic multi-start search over the eight spherical angles of
    the four axes: a cyclic 12-point per-angle grid sweep, then
    coordinate descent with step halving until the step falls below
    ``tol``. The first start is ``initial`` when given, then the standard
    settings, then seeded random angle vectors, ``restarts`` starts in
    total. Within a start every accepted value is an improvement, so the
    result is never below the best coarse-grid value. ``trace``, when
    supplied, collects (start_index, stage, value) tuples with stage in
    "coarse" or "refine" for each accepted state. Returns (settings, |c|).

    Degenerate corners score zero during the search and cannot win.
    This is an exploratory tool: it reports the best settings found, not
    a certified global optimum.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    bv = BeamVelocity.of(beta)

    def objective(angles) -> float:
        try:
            return abs(chsh_value(_settings_of(angles), bv))
        except DegenerateObservable:
            return 0.0

    starts = []
    if initial is not None:
        starts.append(_angles_of(initial))
    starts.append(_angles_of(STANDARD_SETTINGS))
    rng = np.random.default_rng(seed)
    while len(starts) < restarts:
        starts.append(rng.uniform(0.0, 2.0 * math.pi, size=8))
    starts = starts[:restarts]

    theta_grid = np.linspace(0.0, math.pi, 12)
    phi_grid = np.linspace(0.0, 2.0 * math.pi, 13)[:12]
    coarse_step = math.pi / 11.0

    best_angles, best_value = None, -1.0
    for index, start in enumerate(starts):
        angles = np.array(start, dtype=float)
        value = objective(angles)
        if trace is not None:
            trace.append((index, "coarse", value))
        # Cyclic coarse grid sweeps until a full pass stalls.
        improved = True
        while improved:
            improved = False
            for k in range(8):
                grid = theta_grid if k % 2 == 0 else phi_grid
                for candidate in grid:
                    trial = angles.copy()
                    trial[k] = candidate
                    trial_value = objective(trial)
                    if trial_value > value:
                        angles, value = trial, trial_value
                        improved = True
                        if trace is not None:
                            trace.append((index, "coarse", value))
        # Coordinate descent with step halving.
        step = coarse_step
        while step >= tol:
            moved = False
            for k in range(8):
                for sign in (1.0, -1.0):
                    trial = angles.copy()
                    trial[k] += sign * step
                    trial_value = objective(trial)
                    if trial_value > value:
                        angles, value = trial, trial_value
                        moved = True
                        if trace is not None:
                            trace.append((index, "refine", value))
            if not moved:
                step /= 2.0
        if value > best_value:
            best_angles, best_value = angles, value
    return _settings_of(best_angles), best_value

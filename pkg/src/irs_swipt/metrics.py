"""Rates, secrecy rate, harvested power, and feasibility checks for any
candidate beamformer / phase-profile pair.  All functions are pure."""

from dataclasses import dataclass, field
import numpy as np

from .errors import InvalidInput

# feasibility slack thresholds (see check_feasible)
SR_SLACK_TOL = 1e-6        # bits/s/Hz
POWER_SLACK_TOL = 1e-9     # relative to the power budget
MODULUS_TOL = 1e-12        # absolute deviation of |u_n| from 1


def _vec(x):
    return np.asarray(getattr(x, "w", getattr(x, "u", x)), dtype=complex)


@dataclass
class PhaseProfile:
    """Unit-modulus IRS vector u; v = [u; 1] is the augmented profile."""

    u: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex).reshape(-1)
        if self.u.size and np.max(np.abs(np.abs(self.u) - 1.0)) > MODULUS_TOL:
            raise InvalidInput("phase profile entries must be unit modulus")

    @classmethod
    def from_reflection_phases(cls, theta):
        # the surface applies e^{j theta}; u stores the conjugate convention
        return cls(np.exp(-1j * np.asarray(theta, dtype=float)))

    @property
    def v(self):
        return np.concatenate([self.u, [1.0 + 0.0j]])

    @property
    def N(self):
        return self.u.shape[0]


@dataclass
class Beamformer:
    """Complex transmit vector; the power budget is checked by check_feasible."""

    w: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=complex).reshape(-1)

    @property
    def power(self):
        return float(np.real(np.vdot(self.w, self.w)))


@dataclass
class SolveResult:
    """Output of an alternating-optimization solver.

    harvested_trace holds one value per outer iteration (the relaxation
    objective for the SDR solver, the true harvested power for the SCA one)
    and is non-decreasing up to numerical noise.
    """

    w: Beamformer
    u: PhaseProfile
    harvested_trace: list = field(default_factory=list)
    achieved_sr: float = 0.0
    status: str = "Converged"          # Converged | MaxIters | Infeasible
    iters_outer: int = 0
    iters_inner_w: int = 0
    iters_inner_u: int = 0
    wall_clock: float = 0.0


def effective_gain(w, u, H):
    """v^H H w for one stacked channel matrix."""
    w = _vec(w)
    v = u.v if isinstance(u, PhaseProfile) else np.concatenate([_vec(u), [1.0 + 0.0j]])
    return complex(v.conj() @ H @ w)


def rate_bob(w, u, channels, sigma2):
    """log2(1 + |v^H H_b w|^2 / sigma2)."""
    g = effective_gain(w, u, channels.H_b)
    return float(np.log2(1.0 + abs(g) ** 2 / sigma2))


def rate_eve(w, u, channels, sigma2):
    """log2(1 + |v^H H_e w|^2 / sigma2)."""
    g = effective_gain(w, u, channels.H_e)
    return float(np.log2(1.0 + abs(g) ** 2 / sigma2))


def secrecy_rate(w, u, channels, sigma2):
    """max{0, rate_bob - rate_eve}."""
    return max(0.0, rate_bob(w, u, channels, sigma2) - rate_eve(w, u, channels, sigma2))


def harvested_power(w, u, channels, zeta):
    """zeta * |v^H H_r w|^2 in watts."""
    g = effective_gain(w, u, channels.H_r)
    return float(zeta * abs(g) ** 2)


def check_feasible(w, u, cfg, channels):
    """Slack report for a candidate (w, u).

    The secrecy constraint is checked in its product form
    |v^H H_b w|^2 + sigma2 >= 2^r0 (|v^H H_e w|^2 + sigma2), i.e. the slack is
    log2 of the power ratio minus r0 (equivalent to the max{0,.}-free secrecy
    rate for r0 > 0).  Returns (feasible, violations) where violations is a
    list of human-readable strings, plus the individual slacks.
    """
    w_arr = _vec(w)
    u_arr = u.u if isinstance(u, PhaseProfile) else np.asarray(u, dtype=complex).reshape(-1)
    v = np.concatenate([u_arr, [1.0 + 0.0j]])
    gb = abs(v.conj() @ channels.H_b @ w_arr) ** 2
    ge = abs(v.conj() @ channels.H_e @ w_arr) ** 2
    sr_slack = float(np.log2((gb + cfg.sigma2_w) / (ge + cfg.sigma2_w)) - cfg.r0)
    power = float(np.real(np.vdot(w_arr, w_arr)))
    power_slack = (cfg.ps_w - power) / cfg.ps_w
    modulus_dev = float(np.max(np.abs(np.abs(u_arr) - 1.0))) if u_arr.size else 0.0

    violations = []
    if sr_slack < -SR_SLACK_TOL:
        violations.append(f"secrecy-rate slack {sr_slack:.3e} bits/s/Hz")
    if power_slack < -POWER_SLACK_TOL:
        violations.append(f"power budget exceeded, relative slack {power_slack:.3e}")
    if modulus_dev > MODULUS_TOL:
        violations.append(f"unit-modulus deviation {modulus_dev:.3e}")

    return FeasibilityReport(
        feasible=not violations,
        violations=violations,
        sr_slack=sr_slack,
        power_slack=power_slack,
        modulus_deviation=modulus_dev,
    )


@dataclass
class FeasibilityReport:
    feasible: bool
    violations: list
    sr_slack: float
    power_slack: float
    modulus_deviation: float

    def __bool__(self):
        return self.feasible

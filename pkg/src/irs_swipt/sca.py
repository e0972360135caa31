"""Low-complexity successive-convex-approximation alternating optimization.

Each outer round first ascends the beamformer through a sequence of convex
surrogate programs (the convex quadratics are minorized by their first-order
expansions at the previous iterate), then updates the phase profile in
semi-closed form: the surrogate phase subproblem is solved by entrywise phase
alignment of d + mu*f, with the multiplier mu found by bisection driven by
complementary slackness.  Every surrogate constraint is a restriction of the
original secrecy constraint and every surrogate objective a lower bound that
is tight at the expansion point, so the true harvested power never decreases.

The beamformer surrogate (a linear objective over the power ball intersected
with one convex quadratic) is solved by a dedicated log-barrier Newton method
in noise-normalized coordinates; no semidefinite machinery is involved.
"""

import time
from dataclasses import dataclass
import numpy as np

from .errors import NumericalFailure, PhaseStepInfeasible
from .init import feasibility_probe, initial_phase_profile, max_sr_beamformer
from .linalg import max_eigval
from .metrics import Beamformer, PhaseProfile, SolveResult, harvested_power, secrecy_rate

BARRIER_MU = 20.0
MAX_NEWTON = 60


@dataclass
class PhaseSubproblemData:
    """Coefficients of the linearized phase subproblem at expansion point u_prev.

    The surrogate objective is 2*Re(u^H d) + c1 and the surrogate secrecy
    constraint is 2*Re(u^H f) >= c2; A = 2^r0 c c^H - b b^H is majorized by
    lambda_max(A) * I.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    alpha: complex
    beta: complex
    gamma: complex
    A: np.ndarray
    lambda_max_A: float
    d: np.ndarray
    f: np.ndarray
    c1: float
    c2: float


def build_phase_data(w, u_prev, channels, cfg):
    """Assemble the phase-subproblem coefficients for a fixed beamformer."""
    w = np.asarray(getattr(w, "w", w), dtype=complex)
    ut = u_prev.u if isinstance(u_prev, PhaseProfile) else np.asarray(u_prev, dtype=complex)
    n = ut.shape[0]
    gain = 2.0 ** cfg.r0

    rw = channels.H_r @ w
    bw = channels.H_b @ w
    ew = channels.H_e @ w
    a, alpha = rw[:n], complex(rw[n])
    b, beta = bw[:n], complex(bw[n])
    c, gamma = ew[:n], complex(ew[n])

    A = gain * np.outer(c, c.conj()) - np.outer(b, b.conj())
    lam = max_eigval(A)
    m_minus_a = lam * np.eye(n) - A

    au = complex(a.conj() @ ut)  # a^H u_prev
    d = a * au + a * np.conj(alpha)
    c1 = abs(alpha) ** 2 - abs(au) ** 2
    f = m_minus_a @ ut + (b * np.conj(beta) - gain * c * np.conj(gamma))
    c2 = (n * lam + float(np.real(ut.conj() @ m_minus_a @ ut))
          + gain * (abs(gamma) ** 2 + cfg.sigma2_w) - abs(beta) ** 2 - cfg.sigma2_w)
    return PhaseSubproblemData(a=a, b=b, c=c, alpha=alpha, beta=beta, gamma=gamma,
                               A=A, lambda_max_A=lam, d=d, f=f, c1=c1, c2=c2)


def u_of_mu(d, f, mu):
    """Entrywise phase alignment u_n = e^{j arg(d_n + mu f_n)}; zero entries
    (measure-zero ties) get phase 0."""
    z = np.asarray(d) + mu * np.asarray(f)
    u = np.ones_like(z)
    nz = z != 0
    u[nz] = z[nz] / np.abs(z[nz])
    return PhaseProfile(u)


def _g_of_mu(d, f, mu):
    return 2.0 * float(np.real(u_of_mu(d, f, mu).u.conj() @ f))


def bisect_mu(data, eps_bisect=1e-8):
    """Multiplier search for the phase subproblem.

    If the constraint already holds at mu = 0 complementary slackness gives
    mu = 0; otherwise g(mu) = 2Re(u(mu)^H f) is non-decreasing, so bisection
    on [0, mu_hi] drives |g(mu) - c2| below eps_bisect*(1+|c2|).  When even
    the mu -> inf limit 2*sum|f_n| cannot reach c2 the step is infeasible.
    """
    d, f, c2 = data.d, data.f, data.c2
    tol = eps_bisect * (1.0 + abs(c2))
    if _g_of_mu(d, f, 0.0) >= c2:
        return 0.0, u_of_mu(d, f, 0.0)
    g_limit = 2.0 * float(np.sum(np.abs(f)))
    if g_limit < c2 - tol:
        raise PhaseStepInfeasible("linearized secrecy constraint unreachable")

    hi = 1.0
    for _ in range(200):
        if _g_of_mu(d, f, hi) >= c2:
            break
        hi *= 2.0
    else:
        if abs(_g_of_mu(d, f, hi) - c2) <= tol:
            return hi, u_of_mu(d, f, hi)
        raise PhaseStepInfeasible("bisection bracket not found")

    lo = 0.0
    for _ in range(200):
        g_hi = _g_of_mu(d, f, hi)
        if abs(g_hi - c2) <= tol:
            break
        mid = 0.5 * (lo + hi)
        if _g_of_mu(d, f, mid) >= c2:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-16 * max(1.0, hi):
            break
    return hi, u_of_mu(d, f, hi)


def _reals(z):
    return np.concatenate([z.real, z.imag])


class _WSurrogate:
    """The beamformer surrogate program in noise-normalized real coordinates.

    maximize   2 Re(x^H q)                     (q = g_r g_r^H x_prev)
    subject to ||x||^2 <= 1
               2^r0 |g_e^H x|^2 - 2 Re(x^H p) + kappa <= 0

    with x = w / sqrt(Ps) and channels scaled by sqrt(Ps)/sigma.
    """

    def __init__(self, v, w_prev, channels, cfg):
        scale = np.sqrt(cfg.ps_w / cfg.sigma2_w)
        self.g_r = (channels.H_r.conj().T @ v) * scale
        self.g_b = (channels.H_b.conj().T @ v) * scale
        self.g_e = (channels.H_e.conj().T @ v) * scale
        self.gain = 2.0 ** cfg.r0
        self.x_prev = np.asarray(w_prev, dtype=complex) / np.sqrt(cfg.ps_w)
        tb = complex(self.g_b.conj() @ self.x_prev)
        self.q = self.g_r * complex(self.g_r.conj() @ self.x_prev)
        self.p = self.g_b * tb
        self.kappa = self.gain - 1.0 + abs(tb) ** 2
        # real embedding
        self.c = 2.0 * _reals(self.q)
        self.p_r = _reals(self.p)
        self.e1 = _reals(self.g_e)
        self.e2 = np.concatenate([-self.g_e.imag, self.g_e.real])

    def f1(self, x):
        return float(x @ x) - 1.0

    def f2(self, x):
        quad = (self.e1 @ x) ** 2 + (self.e2 @ x) ** 2
        return self.gain * quad - 2.0 * float(self.p_r @ x) + self.kappa

    def objective(self, x):
        return float(self.c @ x)

    def strictly_feasible(self, x):
        margin = 1e-10 * (1.0 + abs(self.kappa))
        return self.f1(x) < -1e-12 and self.f2(x) < -margin


def _barrier_solve(sur, x0, tol):
    """Log-barrier Newton method on the surrogate; x0 must be strictly feasible."""
    dim = x0.shape[0]
    cn = np.linalg.norm(sur.c)
    if cn < 1e-30:
        return x0
    c_hat = sur.c / cn
    x = x0.copy()
    t = 1.0
    two_i = 2.0 * np.eye(dim)
    while True:
        for _ in range(MAX_NEWTON):
            s1 = -sur.f1(x)
            s2 = -sur.f2(x)
            g1 = 2.0 * x
            g2 = 2.0 * sur.gain * ((sur.e1 @ x) * sur.e1 + (sur.e2 @ x) * sur.e2) \
                - 2.0 * sur.p_r
            grad = -t * c_hat + g1 / s1 + g2 / s2
            hess = (two_i / s1 + np.outer(g1, g1) / s1 ** 2
                    + 2.0 * sur.gain * (np.outer(sur.e1, sur.e1)
                                        + np.outer(sur.e2, sur.e2)) / s2
                    + np.outer(g2, g2) / s2 ** 2)
            try:
                step = np.linalg.solve(hess, -grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(hess, -grad, rcond=None)[0]
            decrement = float(-grad @ step)
            if decrement <= 0:
                break
            alpha = 1.0
            phi0 = -t * float(c_hat @ x) - np.log(s1) - np.log(s2)
            for _ in range(60):
                xn = x + alpha * step
                if sur.f1(xn) < 0 and sur.f2(xn) < 0:
                    phin = -t * float(c_hat @ xn) - np.log(-sur.f1(xn)) - np.log(-sur.f2(xn))
                    if phin <= phi0 - 0.25 * alpha * decrement:
                        break
                alpha *= 0.5
            else:
                break
            x = x + alpha * step
            if decrement * 0.5 <= 1e-12:
                break
        if 2.0 / t <= tol * (1.0 + abs(float(c_hat @ x))):
            return x
        t *= BARRIER_MU


def _surrogate_interior(sur, rho=1.0 - 1e-6):
    """Minimizer of the surrogate secrecy quadratic over the shrunk power ball.

    The quadratic part is rank-one (gain * g_e g_e^H), so the ridge-regularized
    stationary point has a Sherman-Morrison closed form and the ball multiplier
    is found by bisection on the monotone norm ||x(nu)||.  Returns the real
    embedding, or None when even the minimum cannot go strictly negative (the
    surrogate then has no interior and no progress is possible).
    """
    p = sur.p
    if np.linalg.norm(p) < 1e-300:
        return None
    ge = sur.g_e
    gn2 = sur.gain * float(np.real(ge.conj() @ ge))
    gp = sur.gain * complex(ge.conj() @ p)

    def x_of(nu):
        return (p - ge * (gp / (nu + gn2))) / nu

    def norm_of(nu):
        with np.errstate(over="ignore"):  # inf is a valid "outside the ball" answer
            return float(np.linalg.norm(x_of(nu)))

    nu_lo, nu_hi = 1e-120, 1.0
    while norm_of(nu_hi) > rho:
        nu_hi *= 4.0
        if nu_hi > 1e150:
            return None
    if norm_of(nu_lo) <= rho:
        x = x_of(nu_lo)
    else:
        for _ in range(200):
            mid = np.sqrt(nu_lo * nu_hi)
            if norm_of(mid) > rho:
                nu_lo = mid
            else:
                nu_hi = mid
            if nu_hi / nu_lo < 1.0 + 1e-12:
                break
        x = x_of(nu_hi)
    xr = _reals(x)
    if not sur.strictly_feasible(xr):
        return None
    return xr


def sca_w_step(v, w_prev, channels, cfg):
    """One surrogate beamformer maximization at expansion point w_prev.

    The output never lowers the true objective |v^H H_r w|^2 (the surrogate is
    tight at w_prev and a global lower bound).  When the surrogate feasible set
    has no interior to move in, w_prev is returned unchanged; NumericalFailure
    signals an infeasible expansion point, which cannot happen for feasible
    w_prev.
    """
    v = np.asarray(getattr(v, "v", v), dtype=complex)
    w_prev = np.asarray(getattr(w_prev, "w", w_prev), dtype=complex)
    sur = _WSurrogate(v, w_prev, channels, cfg)
    if np.linalg.norm(sur.q) < 1e-300:
        return Beamformer(w_prev)
    # the expansion point sits on the power sphere after the first step; clip
    # roundoff excursions so convex blending keeps every f_i non-positive
    nrm = np.linalg.norm(sur.x_prev)
    if nrm > 1.0:
        sur.x_prev = sur.x_prev / nrm

    x0 = _reals(sur.x_prev)
    if sur.f2(x0) > 1e-9 * (1.0 + abs(sur.kappa)):
        raise NumericalFailure("expansion point violates the secrecy constraint")
    if not sur.strictly_feasible(x0):
        interior = _surrogate_interior(sur)
        if interior is None:
            return Beamformer(w_prev)
        start = None
        for theta in (1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0):
            cand = (1.0 - theta) * x0 + theta * interior
            if sur.strictly_feasible(cand):
                start = cand
                break
        if start is None:
            start = interior
        x0 = start

    x = _barrier_solve(sur, x0, cfg.qcqp_tol)
    if sur.objective(x) < sur.objective(_reals(sur.x_prev)):
        return Beamformer(w_prev)
    m = w_prev.shape[0]
    w = (x[:m] + 1j * x[m:]) * np.sqrt(cfg.ps_w)
    return Beamformer(w)


def _true_w_objective(v, w, channels):
    return abs(np.vdot(v, channels.H_r @ w)) ** 2


def sca_ao(channels, cfg, rng=None):
    """Full SCA-based alternating optimization.

    harvested_trace holds the true harvested power per outer iteration,
    starting from the initial point, and is non-decreasing.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    t_start = time.perf_counter()
    u = initial_phase_profile(cfg, rng)
    ok, w, sr_max = feasibility_probe(channels, cfg, u)
    if not ok:
        return SolveResult(w=Beamformer(w), u=u, harvested_trace=[],
                           achieved_sr=sr_max, status="Infeasible",
                           wall_clock=time.perf_counter() - t_start)

    trace = [harvested_power(w, u, channels, cfg.zeta)]
    inner_w = inner_u = 0
    status = "MaxIters"
    it = 0
    for it in range(1, cfg.max_outer_iters + 1):
        v = u.v
        val = _true_w_objective(v, w, channels)
        for _ in range(cfg.max_inner_w):
            w = sca_w_step(v, w, channels, cfg).w
            inner_w += 1
            new_val = _true_w_objective(v, w, channels)
            if new_val - val <= cfg.inner_tol * max(new_val, 1e-300):
                break
            val = new_val

        if cfg.N > 0:
            val = abs(np.vdot(u.v, channels.H_r @ w)) ** 2
            for _ in range(cfg.max_inner_u):
                data = build_phase_data(w, u, channels, cfg)
                try:
                    _, u_new = bisect_mu(data, cfg.eps_bisect)
                except PhaseStepInfeasible:
                    break
                inner_u += 1
                new_val = abs(np.vdot(u_new.v, channels.H_r @ w)) ** 2
                if new_val < val * (1.0 - 1e-12):
                    break  # numerical regression; keep the previous profile
                u = u_new
                if new_val - val <= cfg.inner_tol * max(new_val, 1e-300):
                    break
                val = new_val

        trace.append(harvested_power(w, u, channels, cfg.zeta))
        if trace[-1] > 0 and (trace[-1] - trace[-2]) / trace[-1] < cfg.eps:
            status = "Converged"
            break

    return SolveResult(
        w=Beamformer(w), u=u, harvested_trace=trace,
        achieved_sr=secrecy_rate(w, u, channels, cfg.sigma2_w),
        status=status, iters_outer=it, iters_inner_w=inner_w, iters_inner_u=inner_u,
        wall_clock=time.perf_counter() - t_start)

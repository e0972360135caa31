"""Semidefinite-relaxation alternating optimization.

The joint harvested-power problem is lifted to PSD matrices W = w w^H and
V = v v^H with the rank-one constraints dropped.  With one variable fixed the
other subproblem is a linear SDP, so the two are alternated; both half-steps
can only raise the relaxed objective.  Rank-one solutions are recovered
afterwards with Gaussian randomization (profile first, then the beamformer
against the recovered profile, so the returned pair is jointly feasible).

Subproblems are assembled in noise-normalized units (channels scaled by
sqrt(Ps)/sigma, trace budget 1) to keep the interior-point iterations well
conditioned, and rescaled on the way out.
"""

import time
from dataclasses import dataclass
import numpy as np

from .errors import NumericalFailure, RecoveryFailed, SubproblemInfeasible
from .init import feasibility_probe, initial_phase_profile
from .linalg import herm_eig, psd_sqrt
from .metrics import Beamformer, PhaseProfile, SolveResult, secrecy_rate
from .sdp import SdpProblem, solve_sdp


@dataclass
class SdrIterate:
    """One relaxation iterate: lifted beamformer, lifted profile, and the
    relaxed harvested power zeta * tr(H_r^H V H_r W) in watts."""

    W: np.ndarray
    V: np.ndarray
    objective: float


def _snr_stacks(channels, cfg):
    scale = np.sqrt(cfg.ps_w) / np.sqrt(cfg.sigma2_w)
    return channels.H_r * scale, channels.H_b * scale, channels.H_e * scale


def _relaxed_objective_w(channels, cfg, V, W):
    """tr(H_r^H V H_r W) in watts."""
    Rr = channels.H_r.conj().T @ V @ channels.H_r
    return float(np.real(np.tensordot(Rr.conj(), W)))


def solve_w_sdp(V, channels, cfg):
    """Beamformer half-step: maximize tr(H_r^H V H_r W) over PSD W with the
    trace secrecy constraint and tr(W) <= Ps, V fixed.

    Returns (W in watts, relaxed objective in watts).  Raises
    SubproblemInfeasible when the secrecy target is unattainable for this V.
    """
    Hr, Hb, He = _snr_stacks(channels, cfg)
    Rr = Hr.conj().T @ V @ Hr
    Rb = Hb.conj().T @ V @ Hb
    Re = He.conj().T @ V @ He
    gain = 2.0 ** cfg.r0

    prob = SdpProblem()
    blk = prob.add_hermitian_block(cfg.M)
    prob.add_objective(blk, Rr)
    prob.add_constraint([(blk, Rb - gain * Re)], ">=", gain - 1.0)
    prob.add_constraint([(blk, np.eye(cfg.M))], "<=", 1.0)
    sol = solve_sdp(prob, tol=cfg.sdp_tol)
    if sol.status == "Infeasible":
        raise SubproblemInfeasible("secrecy target unattainable for the fixed profile")
    if sol.status != "Optimal":
        raise NumericalFailure("beamformer SDP did not converge")
    W = cfg.ps_w * sol.blocks[0]
    return W, float(cfg.sigma2_w * sol.objective_value)


def solve_v_sdp(W, channels, cfg):
    """Profile half-step: maximize tr(H_r^H V H_r W) over PSD V with unit
    diagonal and the trace secrecy constraint, W fixed."""
    n1 = cfg.N + 1
    Sr = channels.H_r @ W @ channels.H_r.conj().T / cfg.sigma2_w
    Sb = channels.H_b @ W @ channels.H_b.conj().T / cfg.sigma2_w
    Se = channels.H_e @ W @ channels.H_e.conj().T / cfg.sigma2_w
    gain = 2.0 ** cfg.r0

    prob = SdpProblem()
    blk = prob.add_hermitian_block(n1)
    prob.add_objective(blk, Sr)
    for n in range(n1):
        e_n = np.zeros((n1, n1))
        e_n[n, n] = 1.0
        prob.add_constraint([(blk, e_n)], "==", 1.0)
    prob.add_constraint([(blk, Sb - gain * Se)], ">=", gain - 1.0)
    sol = solve_sdp(prob, tol=cfg.sdp_tol)
    if sol.status == "Infeasible":
        raise SubproblemInfeasible("secrecy target unattainable for the fixed beamformer")
    if sol.status != "Optimal":
        raise NumericalFailure("profile SDP did not converge")
    return sol.blocks[0], float(cfg.sigma2_w * sol.objective_value)


def _gains_for_profile(fixed, channels):
    """Per-receiver squared-gain evaluators against a fixed profile (vector v)
    or a lifted profile (matrix V)."""
    if isinstance(fixed, PhaseProfile):
        v = fixed.v
    else:
        v = np.asarray(fixed, dtype=complex)
    if v.ndim == 1:
        g = [H.conj().T @ v for H in (channels.H_r, channels.H_b, channels.H_e)]
        return lambda w: np.array([abs(np.vdot(gx, w)) ** 2 for gx in g])
    R = [H.conj().T @ v @ H for H in (channels.H_r, channels.H_b, channels.H_e)]
    return lambda w: np.array([float(np.real(w.conj() @ Rx @ w)) for Rx in R])


def randomize_w(W, fixed_profile, channels, cfg, count=None, rng=None):
    """Recover a rank-one beamformer from a lifted W by Gaussian randomization.

    Candidates are psd_sqrt(W) @ r with circular Gaussian r, rescaled to the
    power budget when over it; the best secrecy-feasible candidate by harvested
    power wins, with the scaled principal eigenvector as fallback.
    """
    if count is None:
        count = cfg.rand_count
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    gains = _gains_for_profile(fixed_profile, channels)
    gain = 2.0 ** cfg.r0
    s2 = cfg.sigma2_w

    def sr_ok(g):
        return g[1] + s2 >= gain * (g[2] + s2) * (1.0 - 1e-12)

    root = psd_sqrt(W)
    m = W.shape[0]
    best_w, best_val = None, -np.inf
    draws = (rng.standard_normal((count, m)) + 1j * rng.standard_normal((count, m))) / np.sqrt(2)
    for r in draws:
        w = root @ r
        p = np.real(np.vdot(w, w))
        if p > cfg.ps_w:
            w = w * np.sqrt(cfg.ps_w / p)
        g = gains(w)
        if sr_ok(g) and g[0] > best_val:
            best_w, best_val = w, g[0]
    if best_w is None:
        vals, vecs = herm_eig(W)
        w = np.sqrt(max(vals[-1], 0.0)) * vecs[:, -1]
        p = np.real(np.vdot(w, w))
        if p > cfg.ps_w:
            w = w * np.sqrt(cfg.ps_w / p)
        if not sr_ok(gains(w)):
            raise RecoveryFailed("no secrecy-feasible beamformer candidate")
        best_w = w
    return Beamformer(best_w)


def randomize_v(V, fixed_beam, channels, cfg, count=None, rng=None):
    """Recover a unit-modulus profile from a lifted V by Gaussian randomization.

    Candidates are normalized by their last entry and projected entrywise to
    unit modulus; the best secrecy-feasible candidate by harvested power wins,
    falling back to the phases of the principal eigenvector.
    """
    if count is None:
        count = cfg.rand_count
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if cfg.N == 0:
        return PhaseProfile(np.zeros(0, dtype=complex))
    w = np.asarray(getattr(fixed_beam, "w", fixed_beam))
    gain = 2.0 ** cfg.r0
    s2 = cfg.sigma2_w
    if w.ndim == 1:
        y = [H @ w for H in (channels.H_r, channels.H_b, channels.H_e)]
        gains = lambda v: np.array([abs(np.vdot(v, yx)) ** 2 for yx in y])
    else:
        S = [H @ w @ H.conj().T for H in (channels.H_r, channels.H_b, channels.H_e)]
        gains = lambda v: np.array([float(np.real(v.conj() @ Sx @ v)) for Sx in S])

    def project(vt):
        vt = vt / (vt[-1] if vt[-1] != 0 else 1.0)
        return np.exp(1j * np.angle(vt[:-1]))

    root = psd_sqrt(V)
    n1 = V.shape[0]
    best_u, best_val = None, -np.inf
    draws = (rng.standard_normal((count, n1)) + 1j * rng.standard_normal((count, n1))) / np.sqrt(2)
    for r in draws:
        u = project(root @ r)
        v = np.concatenate([u, [1.0 + 0.0j]])
        g = gains(v)
        if g[1] + s2 >= gain * (g[2] + s2) * (1.0 - 1e-12) and g[0] > best_val:
            best_u, best_val = u, g[0]
    if best_u is None:
        _, vecs = herm_eig(V)
        u = project(vecs[:, -1])
        v = np.concatenate([u, [1.0 + 0.0j]])
        g = gains(v)
        if g[1] + s2 < gain * (g[2] + s2) * (1.0 - 1e-12):
            raise RecoveryFailed("no secrecy-feasible profile candidate")
        best_u = u
    return PhaseProfile(best_u)


def sdr_ao(channels, cfg, rng=None):
    """Full SDR-based alternating optimization with randomization recovery.

    harvested_trace holds the relaxed objective zeta*tr(H_r^H V H_r W) per
    outer iteration; the recovered rank-one pair can only sit at or below its
    final value.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    t_start = time.perf_counter()
    u0 = initial_phase_profile(cfg, rng)
    ok, w_probe, sr_max = feasibility_probe(channels, cfg, u0)
    if not ok:
        return SolveResult(w=Beamformer(w_probe), u=u0, harvested_trace=[],
                           achieved_sr=sr_max, status="Infeasible",
                           wall_clock=time.perf_counter() - t_start)

    v0 = u0.v
    V = np.outer(v0, v0.conj())
    W = None
    trace = []
    inner_w = inner_v = 0
    status = "MaxIters"
    it = 0
    u_rec = w_rec = None
    # A recovery that beats the relaxation trace means the alternation was not
    # jointly stationary yet; restart it from the recovered profile (an ascent,
    # so the trace stays monotone) instead of reporting a broken bound.
    for _ in range(3):
        while it < cfg.max_outer_iters:
            it += 1
            W, _ = solve_w_sdp(V, channels, cfg)
            inner_w += 1
            if cfg.N > 0:
                V, obj = solve_v_sdp(W, channels, cfg)
                inner_v += 1
            else:
                obj = _relaxed_objective_w(channels, cfg, V, W)
            trace.append(cfg.zeta * obj)
            if len(trace) >= 2 and trace[-1] > 0:
                if (trace[-1] - trace[-2]) / trace[-1] < cfg.eps:
                    status = "Converged"
                    break
        u_rec = randomize_v(V, W, channels, cfg, rng=rng)
        w_rec = randomize_w(W, u_rec, channels, cfg, rng=rng)
        recovered = cfg.zeta * abs(np.vdot(u_rec.v, channels.H_r @ w_rec.w)) ** 2
        if recovered <= trace[-1] + 1e-8 or it >= cfg.max_outer_iters:
            break
        v_rec = u_rec.v
        V = np.outer(v_rec, v_rec.conj())
        status = "MaxIters"
    return SolveResult(
        w=w_rec, u=u_rec, harvested_trace=trace,
        achieved_sr=secrecy_rate(w_rec.w, u_rec, channels, cfg.sigma2_w),
        status=status, iters_outer=it, iters_inner_w=inner_w, iters_inner_u=inner_v,
        wall_clock=time.perf_counter() - t_start)

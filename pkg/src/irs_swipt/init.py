"""Initialization shared by both alternating-optimization solvers: the starting
phase profile and the full-power secrecy-maximizing beamformer used as a
feasibility probe and as a strictly feasible starting point."""

import numpy as np

from .linalg import herm_eig
from .metrics import PhaseProfile


def initial_phase_profile(cfg, rng=None):
    """Zero-phase profile by default; uniform random phases in ablation mode."""
    if cfg.init_phases == "random":
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        return PhaseProfile(np.exp(-2j * np.pi * rng.random(cfg.N)))
    return PhaseProfile(np.ones(cfg.N, dtype=complex))


def max_sr_beamformer(v, channels, cfg):
    """Full-power beamformer maximizing the secrecy rate for a fixed profile v.

    For fixed v the rate ratio is a generalized Rayleigh quotient, so the
    optimum is the principal generalized eigenvector of the Bob/EVE pencil at
    full power.  Returns (w, sr_max in bits/s/Hz).
    """
    g_b = channels.H_b.conj().T @ v
    g_e = channels.H_e.conj().T @ v
    reg = cfg.sigma2_w / cfg.ps_w
    B = np.outer(g_b, g_b.conj()) + reg * np.eye(cfg.M)
    E = np.outer(g_e, g_e.conj()) + reg * np.eye(cfg.M)
    vals_e, vecs_e = herm_eig(E)
    e_isqrt = (vecs_e / np.sqrt(np.maximum(vals_e, 1e-300))) @ vecs_e.conj().T
    vals, vecs = herm_eig(e_isqrt @ B @ e_isqrt)
    x = e_isqrt @ vecs[:, -1]
    w = np.sqrt(cfg.ps_w) * x / np.linalg.norm(x)
    sr_max = float(np.log2(max(vals[-1], 1.0)))
    return w, sr_max


def feasibility_probe(channels, cfg, u0):
    """(feasible, w, sr_max): whether the secrecy target r0 is attainable with
    the initial profile, and the probing beamformer."""
    w, sr_max = max_sr_beamformer(u0.v, channels, cfg)
    return sr_max >= cfg.r0, w, sr_max

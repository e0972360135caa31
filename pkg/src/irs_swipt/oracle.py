"""Brute-force references at desk scale.

grid_search_joint enumerates the phase profile over a per-element phase grid
and, for each profile, beamformers over the span of the three effective
channel vectors (restricting to that span loses nothing: objective and
constraints see w only through those inner products and its norm).  Span
coefficients are gridded through generalized spherical angles modulo the
irrelevant global phase, then scaled over a power grid up to the budget.

Everything is deterministic: candidates are scanned in a fixed order and ties
break toward the lowest grid index.
"""

from dataclasses import dataclass
import numpy as np

from .errors import GridTooLarge, InvalidInput

EVAL_CAP = 10 ** 8
CHUNK = 2048


@dataclass
class GridSpec:
    phase_levels: int = 64       # per IRS element
    subspace_points: int = 512   # beamformer directions (approximate)
    power_levels: int = 2

    def __post_init__(self):
        if self.phase_levels < 2 or self.subspace_points < 2:
            raise InvalidInput("grid levels must be >= 2")
        if self.power_levels < 1:
            raise InvalidInput("power_levels must be >= 1")


def _unit_directions(rank, count):
    """Roughly `count` unit coefficient vectors covering the complex
    rank-sphere modulo a global phase (first coordinate real nonnegative)."""
    if rank == 1:
        return np.ones((1, 1), dtype=complex)
    if rank == 2:
        n_psi = max(2, int(np.sqrt(count / 2.0)))
        n_phi = max(4, 2 * n_psi)
        psi = np.linspace(0.0, np.pi / 2.0, n_psi)
        phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        pp, ff = np.meshgrid(psi, phi, indexing="ij")
        return np.stack([np.cos(pp).ravel(),
                         np.sin(pp).ravel() * np.exp(1j * ff.ravel())], axis=1)
    if rank == 3:
        n = max(2, int(round((count / 4.0) ** 0.25)))
        n_phi = 2 * n
        psi1 = np.linspace(0.0, np.pi / 2.0, n)
        psi2 = np.linspace(0.0, np.pi / 2.0, n)
        phi1 = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        phi2 = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        a, b, c, d = np.meshgrid(psi1, psi2, phi1, phi2, indexing="ij")
        a, b, c, d = (x.ravel() for x in (a, b, c, d))
        return np.stack([np.cos(a),
                         np.sin(a) * np.cos(b) * np.exp(1j * c),
                         np.sin(a) * np.sin(b) * np.exp(1j * d)], axis=1)
    raise InvalidInput("direction rank must be <= 3")


def _phase_chunks(n, levels, chunk=CHUNK):
    """Yield (start_index, U) blocks of the full levels**n unit-modulus grid,
    decoded from the mixed-radix candidate index (element 0 varies slowest)."""
    total = levels ** n
    roots = np.exp(2j * np.pi * np.arange(levels) / levels)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        digits = np.empty((idx.size, n), dtype=int)
        rem = idx
        for j in range(n - 1, -1, -1):
            digits[:, j] = rem % levels
            rem = rem // levels
        yield start, roots[digits] if n else np.zeros((idx.size, 0), dtype=complex)


def grid_search_joint(channels, cfg, grid):
    """Exhaustive joint reference for tiny instances (N <= 3, M <= 3).

    Returns (w, u, harvested watts) for the best secrecy-feasible candidate.
    """
    n, m = cfg.N, cfg.M
    if n > 3 or m > 3:
        raise InvalidInput("joint grid search is limited to N <= 3, M <= 3")
    dirs = _unit_directions(min(m, 3), grid.subspace_points)
    total = (grid.phase_levels ** n) * dirs.shape[0] * grid.power_levels
    if total > EVAL_CAP:
        raise GridTooLarge(f"{total} evaluations exceed the cap {EVAL_CAP}")

    powers = cfg.ps_w * np.arange(1, grid.power_levels + 1) / grid.power_levels
    gain = 2.0 ** cfg.r0
    s2 = cfg.sigma2_w
    best = (-np.inf, -1, None, None)  # value, flat index, w, u

    for start, U in _phase_chunks(n, grid.phase_levels):
        V = np.concatenate([U, np.ones((U.shape[0], 1))], axis=1)
        rows = [V.conj() @ H for H in (channels.H_r, channels.H_b, channels.H_e)]
        span = np.stack([r.conj() for r in rows], axis=2)  # (B, M, 3)
        q = np.linalg.qr(span)[0][:, :, :dirs.shape[1]]    # (B, M, rank)
        amps = [np.einsum("bm,bmr->br", r, q) @ dirs.T for r in rows]  # (B, K)
        vr, vb, ve = (np.abs(a) ** 2 for a in amps)
        # (B, K, P): power scaling and the secrecy feasibility mask
        obj = cfg.zeta * vr[:, :, None] * powers[None, None, :]
        feas = (vb[:, :, None] * powers + s2) >= gain * (ve[:, :, None] * powers + s2)
        obj = np.where(feas, obj, -np.inf)
        flat = obj.reshape(obj.shape[0], -1)
        arg = np.argmax(flat, axis=1)
        vals = flat[np.arange(flat.shape[0]), arg]
        b = int(np.argmax(vals))
        if vals[b] > best[0]:
            k, p = divmod(int(arg[b]), grid.power_levels)
            w = np.sqrt(powers[p]) * (q[b] @ dirs[k])
            best = (float(vals[b]), start + b, w, U[b].copy())

    if best[2] is None:
        raise GridTooLarge("no feasible grid point found")  # pragma: no cover
    return best[2], best[3], best[0]


def grid_search_phases(channels, w, cfg, levels):
    """Exhaustive phase reference for a fixed beamformer (N <= 4).

    Returns (u, value) maximizing |u^H a + alpha|^2 over the per-element phase
    grid subject to the secrecy constraint.
    """
    n = cfg.N
    if n > 4:
        raise InvalidInput("phase grid search is limited to N <= 4")
    if levels ** max(n, 1) > EVAL_CAP:
        raise GridTooLarge(f"{levels ** n} evaluations exceed the cap {EVAL_CAP}")
    w = np.asarray(getattr(w, "w", w), dtype=complex)
    rw, bw, ew = channels.H_r @ w, channels.H_b @ w, channels.H_e @ w
    gain = 2.0 ** cfg.r0
    s2 = cfg.sigma2_w

    best = (-np.inf, None)
    for _, U in _phase_chunks(n, levels):
        ar = np.abs(U.conj() @ rw[:n] + rw[n]) ** 2
        ab = np.abs(U.conj() @ bw[:n] + bw[n]) ** 2
        ae = np.abs(U.conj() @ ew[:n] + ew[n]) ** 2
        vals = np.where(ab + s2 >= gain * (ae + s2), ar, -np.inf)
        b = int(np.argmax(vals))
        if vals[b] > best[0]:
            best = (float(vals[b]), U[b].copy())
    if best[1] is None:
        raise GridTooLarge("no feasible grid point found")  # pragma: no cover
    return best[1], best[0]

"""A small dense semidefinite-program solver.

Problems are stated over PSD blocks (complex Hermitian or real symmetric;
1x1 real blocks encode nonnegative slacks) with a real linear objective
(maximized) and linear trace constraints.  Complex blocks are lowered to real
symmetric ones through the standard doubling embedding; the factor of two the
embedding introduces in traces is normalized away during assembly, so all
objective and constraint values keep their complex-trace meaning.

The solver is an infeasible-start primal-dual path-following method with the
XZ (HKM) search direction and a Mehrotra predictor-corrector step.  Dense
factorizations per iteration are fine at the dimensions used here (<= ~128).
Inequality constraints become equalities with 1x1 slack blocks.
"""

from dataclasses import dataclass, field
import numpy as np

from .errors import InvalidInput
from .linalg import is_hermitian

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITERS = 200
STEP_FRACTION = 0.98
DIAG_DETECT_TOL = 1e-14


def embed_complex(h):
    """Real symmetric embedding [[Re h, -Im h], [Im h, Re h]] of a Hermitian matrix.

    Traces of products double under the embedding; SdpProblem assembly divides
    the embedded data by two so trace functionals keep their complex values.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidInput("embed_complex expects a square matrix")
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def _deembed(y, d):
    """Project a real symmetric 2d x 2d solution back to a d x d Hermitian one.

    The projection is a congruence, so PSD-ness and every trace functional of
    embedded data are preserved exactly.
    """
    xc = 0.5 * (y[:d, :d] + y[d:, d:]) + 0.5j * (y[d:, :d] - y[:d, d:])
    return 0.5 * (xc + xc.conj().T)


@dataclass
class SdpSolution:
    blocks: list
    objective_value: float
    dual_value: float
    duality_gap: float
    status: str           # Optimal | Infeasible | NumericalFailure
    iterations: int
    primal_residual: float
    dual_residual: float


class SdpProblem:
    """Maximize sum_k tr(C_k X_k) over PSD blocks X_k subject to linear
    trace constraints.  Blocks are added first, then objective terms and
    constraints referencing them by index."""

    def __init__(self):
        self._kinds = []       # "herm" or "sym"
        self._dims = []        # complex dim for herm, real dim for sym
        self.objective = {}    # block index -> matrix
        self.constraints = []  # (terms dict, sense, rhs)

    @property
    def n_blocks(self):
        return len(self._dims)

    def add_hermitian_block(self, dim):
        if dim < 1:
            raise InvalidInput("block dimension must be >= 1")
        self._kinds.append("herm")
        self._dims.append(dim)
        return len(self._dims) - 1

    def add_slack_block(self):
        self._kinds.append("sym")
        self._dims.append(1)
        return len(self._dims) - 1

    def _check_matrix(self, block, mat):
        mat = np.asarray(mat)
        d = self._dims[block]
        if mat.shape != (d, d):
            raise InvalidInput(f"matrix shape {mat.shape} does not match block dim {d}")
        if self._kinds[block] == "herm":
            mat = mat.astype(complex)
            if not is_hermitian(mat):
                raise InvalidInput("block data must be Hermitian")
            return 0.5 * (mat + mat.conj().T)
        mat = mat.astype(float)
        return 0.5 * (mat + mat.T)

    def add_objective(self, block, mat):
        mat = self._check_matrix(block, mat)
        if block in self.objective:
            self.objective[block] = self.objective[block] + mat
        else:
            self.objective[block] = mat

    def add_constraint(self, terms, sense, rhs):
        """terms: iterable of (block index, matrix); sense in {'==','<=','>='}."""
        if sense not in ("==", "<=", ">="):
            raise InvalidInput(f"unknown sense {sense!r}")
        tdict = {}
        for block, mat in terms:
            mat = self._check_matrix(block, mat)
            if block in tdict:
                tdict[block] = tdict[block] + mat
            else:
                tdict[block] = mat
        if not tdict:
            raise InvalidInput("constraint references no blocks")
        self.constraints.append((tdict, sense, float(rhs)))


class _Term:
    """One constraint's footprint on one real block, diagonal-aware."""

    __slots__ = ("row", "dense", "diag")

    def __init__(self, row, mat):
        self.row = row
        off = mat - np.diag(np.diag(mat))
        scale = max(np.max(np.abs(mat)), 1e-300)
        if np.max(np.abs(off)) <= DIAG_DETECT_TOL * scale:
            self.diag = np.diag(mat).copy()
            self.dense = None
        else:
            self.diag = None
            self.dense = mat


class _Assembled:
    """Real-embedded standard form: min <C,X>, A(X) = b, X >= 0 (blockwise)."""

    def __init__(self, problem):
        self.kinds = list(problem._kinds)
        self.cdims = list(problem._dims)
        self.dims = [2 * d if k == "herm" else d for k, d in zip(self.kinds, self.cdims)]

        def lower(block, mat):
            if self.kinds[block] == "herm":
                return 0.5 * embed_complex(mat)
            return np.asarray(mat, dtype=float)

        # internal minimization: flip the sign of the (maximized) objective
        self.C = [np.zeros((d, d)) for d in self.dims]
        for blk, mat in problem.objective.items():
            self.C[blk] = self.C[blk] - lower(blk, mat)

        rows = []
        rhs = []
        for tdict, sense, b in problem.constraints:
            rows.append({blk: lower(blk, mat) for blk, mat in tdict.items()})
            rhs.append(b)
        # slacks turn inequalities into equalities
        for i, (tdict, sense, b) in enumerate(problem.constraints):
            if sense == "==":
                continue
            self.kinds.append("sym")
            self.cdims.append(1)
            self.dims.append(1)
            self.C.append(np.zeros((1, 1)))
            blk = len(self.dims) - 1
            rows[i][blk] = np.array([[1.0 if sense == "<=" else -1.0]])
        self.b = np.asarray(rhs, dtype=float)
        self.m = len(rows)

        # per-block constraint footprints, split into diagonal and dense terms
        self.block_terms = []
        for k in range(len(self.dims)):
            terms = [_Term(i, row[k]) for i, row in enumerate(rows) if k in row]
            diag_terms = [t for t in terms if t.diag is not None]
            dense_terms = [t for t in terms if t.dense is not None]
            dmat = (np.array([t.diag for t in diag_terms])
                    if diag_terms else np.zeros((0, self.dims[k])))
            self.block_terms.append({
                "diag_rows": np.array([t.row for t in diag_terms], dtype=int),
                "D": dmat,
                "dense": dense_terms,
            })

        self.norm_b = max(1.0, float(np.linalg.norm(self.b)))
        self.norm_C = max(1.0, max((np.linalg.norm(c) for c in self.C), default=1.0))
        self.norm_A = max(
            [1.0]
            + [float(np.linalg.norm(t.dense)) for bt in self.block_terms for t in bt["dense"]]
            + [float(np.linalg.norm(bt["D"])) for bt in self.block_terms if bt["D"].size]
        )

    def apply(self, mats):
        """A(Y): the vector of constraint values at blocks Y (not nec. symmetric)."""
        out = np.zeros(self.m)
        for k, bt in enumerate(self.block_terms):
            y = mats[k]
            if bt["D"].size:
                out[bt["diag_rows"]] += bt["D"] @ np.diag(y)
            for t in bt["dense"]:
                out[t.row] += np.tensordot(t.dense, y, axes=([0, 1], [1, 0]))
        return out

    def adjoint(self, y):
        """A*(y): per-block sum of y_i A_i."""
        out = []
        for k, bt in enumerate(self.block_terms):
            s = np.zeros((self.dims[k], self.dims[k]))
            if bt["D"].size:
                s[np.diag_indices(self.dims[k])] += bt["D"].T @ y[bt["diag_rows"]]
            for t in bt["dense"]:
                s += y[t.row] * t.dense
            out.append(s)
        return out

    def schur(self, X, Zi):
        """M_ij = sum_k tr(A_i X A_j Z^{-1}), assembled blockwise.

        Diagonal-diagonal pairs reduce to D (X .* Zi^T) D^T; dense terms fill
        whole rows/columns which are mirrored by symmetry.
        """
        M = np.zeros((self.m, self.m))
        for k, bt in enumerate(self.block_terms):
            x, zi = X[k], Zi[k]
            rows = bt["diag_rows"]
            if bt["D"].size:
                core = bt["D"] @ (x * zi.T) @ bt["D"].T
                M[np.ix_(rows, rows)] += core
            dense = bt["dense"]
            for jt, t in enumerate(dense):
                u = x @ t.dense @ zi  # X A_j Zi with j = t.row
                if bt["D"].size:
                    vals = bt["D"] @ np.diag(u)
                    M[rows, t.row] += vals
                    M[t.row, rows] += vals
                for s in dense[:jt + 1]:  # lower triangle; tr(A_i X A_j Zi) is symmetric
                    val = np.tensordot(s.dense, u, axes=([0, 1], [1, 0]))
                    M[s.row, t.row] += val
                    if s.row != t.row:
                        M[t.row, s.row] += val
        return 0.5 * (M + M.T)


def _min_eig_step(s, ds):
    """Largest alpha with s + alpha*ds PSD, computed via a whitened eigenvalue."""
    if s.shape[0] == 1:
        if ds[0, 0] >= 0:
            return np.inf
        return -s[0, 0] / ds[0, 0]
    vals, vecs = np.linalg.eigh(s)
    vals = np.maximum(vals, 1e-14 * max(vals[-1], 1e-300))
    whit = (vecs / np.sqrt(vals)).T  # rows scale to identity: W s W^T = I
    t = whit @ ds @ whit.T
    lam = np.linalg.eigvalsh(0.5 * (t + t.T))[0]
    if lam >= 0:
        return np.inf
    return -1.0 / lam


def _step_to_boundary(blocks, deltas):
    return min((_min_eig_step(s, ds) for s, ds in zip(blocks, deltas)), default=np.inf)


def _solve_spd(M, rhs):
    try:
        c = np.linalg.cholesky(M)
        y = np.linalg.solve(c, rhs)
        return np.linalg.solve(c.T, y)
    except np.linalg.LinAlgError:
        ridge = 1e-12 * (np.trace(M) / max(M.shape[0], 1) + 1.0)
        try:
            return np.linalg.solve(M + ridge * np.eye(M.shape[0]), rhs)
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(M, rhs, rcond=None)[0]


def solve_sdp(problem, tol=DEFAULT_TOL, max_iters=DEFAULT_MAX_ITERS,
              verbose=False, log_file=None):
    """Solve an SdpProblem; the objective is maximized.

    Returns an SdpSolution.  status is 'Optimal' when the relative duality gap
    and the feasibility residuals are all below tol; 'Infeasible' when a
    primal-infeasibility certificate is found; 'NumericalFailure' when the
    iteration cap passes without gap closure.
    """
    asm = _Assembled(problem)
    m = asm.m
    if m == 0:
        raise InvalidInput("problem has no constraints")
    n_total = sum(asm.dims)

    tau_p = 10.0 * max(1.0, float(np.max(np.abs(asm.b))) / asm.norm_A)
    tau_d = 10.0 * max(1.0, asm.norm_C / np.sqrt(n_total), asm.norm_A)
    X = [tau_p * np.eye(d) for d in asm.dims]
    Z = [tau_d * np.eye(d) for d in asm.dims]
    y = np.zeros(m)

    log_lines = []
    status = "NumericalFailure"
    iters_done = max_iters

    for it in range(1, max_iters + 1):
        Zi = []
        for z in Z:
            vals, vecs = np.linalg.eigh(z)
            vals = np.maximum(vals, 1e-300)
            Zi.append((vecs / vals) @ vecs.T)

        mu = sum(np.tensordot(x, z) for x, z in zip(X, Z)) / n_total
        rp = asm.b - asm.apply(X)
        Ay = asm.adjoint(y)
        Rd = [c - z - ay for c, z, ay in zip(asm.C, Z, Ay)]

        pobj_int = sum(np.tensordot(c, x) for c, x in zip(asm.C, X))
        dobj_int = float(asm.b @ y)
        gap = pobj_int - dobj_int
        relgap = abs(gap) / (1.0 + abs(pobj_int))
        pres = float(np.linalg.norm(rp)) / asm.norm_b
        dres = max(float(np.linalg.norm(r)) for r in Rd) / asm.norm_C

        if verbose or log_file is not None:
            line = (f"iter {it:3d}  mu {mu:.3e}  gap {relgap:.3e}  "
                    f"pres {pres:.3e}  dres {dres:.3e}  pobj {-pobj_int:+.9e}  "
                    f"dobj {-dobj_int:+.9e}")
            log_lines.append(line)
            if verbose:
                print(line)

        if relgap <= tol and pres <= tol and dres <= tol:
            status = "Optimal"
            iters_done = it - 1
            break

        # primal-infeasibility certificate: A*(y) <= 0 with b^T y > 0
        ynorm = float(np.linalg.norm(y))
        if ynorm > 1e6 * asm.norm_b:
            yhat = y / ynorm
            ray = asm.adjoint(yhat)
            lam = max(float(np.linalg.eigvalsh(0.5 * (r + r.T))[-1]) for r in ray)
            if asm.b @ yhat > 1e-8 and lam <= 1e-8:
                status = "Infeasible"
                iters_done = it - 1
                break

        Mschur = asm.schur(X, Zi)
        XRZ = [x @ r @ zi for x, r, zi in zip(X, Rd, Zi)]
        base_rhs = asm.b + asm.apply(XRZ)
        a_zi = asm.apply(Zi)

        # predictor (affine scaling, sigma = 0)
        dy_a = _solve_spd(Mschur, base_rhs)
        Ady_a = asm.adjoint(dy_a)
        dZ_a = [r - a for r, a in zip(Rd, Ady_a)]
        dX_a = []
        for x, dz, zi in zip(X, dZ_a, Zi):
            d = -x - x @ dz @ zi
            dX_a.append(0.5 * (d + d.T))
        ap_a = min(1.0, STEP_FRACTION * _step_to_boundary(X, dX_a))
        ad_a = min(1.0, STEP_FRACTION * _step_to_boundary(Z, dZ_a))
        mu_aff = sum(np.tensordot(x + ap_a * dx, z + ad_a * dz)
                     for x, dx, z, dz in zip(X, dX_a, Z, dZ_a)) / n_total
        sigma = min(1.0, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))

        # corrector with the Mehrotra second-order term
        corr = [dx @ dz @ zi for dx, dz, zi in zip(dX_a, dZ_a, Zi)]
        rhs = base_rhs - sigma * mu * a_zi + asm.apply(corr)
        dy = _solve_spd(Mschur, rhs)
        Ady = asm.adjoint(dy)
        dZ = [r - a for r, a in zip(Rd, Ady)]
        dX = []
        for x, dz, zi, co in zip(X, dZ, Zi, corr):
            d = sigma * mu * zi - x - x @ dz @ zi - co
            dX.append(0.5 * (d + d.T))

        ap = min(1.0, STEP_FRACTION * _step_to_boundary(X, dX))
        ad = min(1.0, STEP_FRACTION * _step_to_boundary(Z, dZ))
        X = [0.5 * ((x + ap * dx) + (x + ap * dx).T) for x, dx in zip(X, dX)]
        Z = [0.5 * ((z + ad * dz) + (z + ad * dz).T) for z, dz in zip(Z, dZ)]
        y = y + ad * dy

    if log_file is not None:
        with open(log_file, "a") as fh:
            fh.write("\n".join(log_lines) + "\n")

    # report in the user's (maximization, complex-trace) orientation
    out_blocks = []
    for k in range(problem.n_blocks):
        if problem._kinds[k] == "herm":
            out_blocks.append(_deembed(X[k], problem._dims[k]))
        else:
            out_blocks.append(X[k].copy())
    pobj_ext = -sum(np.tensordot(c, x) for c, x in zip(asm.C, X))
    dobj_ext = -float(asm.b @ y)
    return SdpSolution(
        blocks=out_blocks,
        objective_value=float(pobj_ext),
        dual_value=float(dobj_ext),
        duality_gap=float(abs(pobj_ext - dobj_ext)),
        status=status,
        iterations=iters_done,
        primal_residual=float(np.linalg.norm(asm.b - asm.apply(X)) / asm.norm_b),
        dual_residual=float(dres),
    )

"""Moment-matrix SDP for the Fourier completely bounded d-norm.

One positive semidefinite moment matrix M is indexed by {u} followed by all
words of length <= d over [n+1] (the empty word is v).  The objective places
each Fourier coefficient on the (u, canonical word) entry; equalities tie
<u, v_w> together across each parity class of length-d words and normalize
M[u,u] = M[v,v] = 1; for every letter i the Gram matrix of the shifted
vectors {v_{i w}} must be dominated by the Gram matrix of {v_w} over words
of length <= d-1, which encodes "A(i) is a contraction" as a pair of
principal-submatrix selections.

The solver is an in-house consensus ADMM in the symmetric-vectorized space:
each iteration performs a sparse linear solve (the only place the objective
enters), a PSD projection of the moment copy via eigendecomposition, a PSD
projection of every localizer slack, and an affine projection onto the
equality constraints, with fixed over-relaxation 1.6 and zero
initialization.  A deterministic residual-balancing rule rescales the
penalty every 100 iterations.  The feasible set is bounded (norms of the
word vectors telescope down from ||v|| = 1), so the iteration converges at
desk scale without a self-dual embedding.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse.linalg import splu

from .behavior import Witness, Word, canonical_word, enumerate_classes
from .errors import CapacityError, ConvergenceError, ExtractionError
from .poly import Polynomial

DEFAULT_MAX_DIM = 2000
MAX_DIM_ENV = "FCBLAB_MAX_DIM"

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 200_000
OVER_RELAXATION = 1.6
RHO_BALANCE_EVERY = 100
RESIDUAL_CHECK_EVERY = 25


@dataclass
class SdpProblem:
    dim: int
    objective: np.ndarray
    equalities: list[tuple[sp.coo_matrix, float]]
    localizers: list[tuple[np.ndarray, np.ndarray]]  # (rows of v_{i w}, rows of v_w)
    n: int
    d: int
    words: list[Word]
    word_index: dict[Word, int]
    num_class_equalities: int


@dataclass
class SdpSolution:
    value: float
    moment: np.ndarray
    primal_residual: float
    equality_residual: float
    localizer_min_eig_slack: float
    iterations: int
    converged: bool


def _max_dim() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from None


def _all_words(n: int, d: int) -> list[Word]:
    words: list[Word] = []
    for length in range(d + 1):
        words.extend(itertools.product(range(1, n + 2), repeat=length))
    return words


def build_fcb_sdp(p: Polynomial, d: int) -> SdpProblem:
    """Assemble the moment-matrix program whose optimum is ||p||_{fcb,d}."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if p.degree > d:
        raise ValueError(f"degree {p.degree} exceeds d={d}")
    n = p.n
    dim = 1 + sum((n + 1) ** s for s in range(d + 1))
    limit = _max_dim()
    if dim > limit:
        raise CapacityError(
            f"moment matrix dimension {dim} exceeds the guard {limit} "
            f"(override with {MAX_DIM_ENV})"
        )

    words = _all_words(n, d)
    word_index = {w: 1 + k for k, w in enumerate(words)}  # index 0 is u

    objective = np.zeros((dim, dim))
    for s, c in p.coeffs.items():
        idx = word_index[canonical_word(s, d, n)]
        objective[0, idx] += c / 2.0
        objective[idx, 0] += c / 2.0

    equalities: list[tuple[sp.coo_matrix, float]] = []
    num_class = 0
    if d > 0:
        for members in enumerate_classes(n, d).values():
            rep = word_index[members[0]]
            for w in members[1:]:
                idx = word_index[w]
                e = sp.coo_matrix(
                    ([0.5, 0.5, -0.5, -0.5], ((0, idx, 0, rep), (idx, 0, rep, 0))),
                    shape=(dim, dim),
                )
                equalities.append((e, 0.0))
                num_class += 1
    for diag in (0, word_index[()]):
        e = sp.coo_matrix(([1.0], ((diag,), (diag,))), shape=(dim, dim))
        equalities.append((e, 1.0))

    base = [word_index[w] for w in words if len(w) <= d - 1]
    localizers = []
    for i in range(1, n + 2):
        shifted = [word_index[(i,) + w] for w in words if len(w) <= d - 1]
        localizers.append((np.array(shifted, dtype=int), np.array(base, dtype=int)))

    return SdpProblem(
        dim=dim,
        objective=objective,
        equalities=equalities,
        localizers=localizers,
        n=n,
        d=d,
        words=words,
        word_index=word_index,
        num_class_equalities=num_class,
    )


class _SvecSpace:
    """Symmetric vectorization of D x D matrices (upper triangle, sqrt(2) off-diagonal)."""

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.size = dim * (dim + 1) // 2
        rows, cols = np.triu_indices(dim)
        self.rows = rows
        self.cols = cols
        self.scale = np.where(rows == cols, 1.0, np.sqrt(2.0))

    def index(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        return lo * self.dim - lo * (lo - 1) // 2 + (hi - lo)

    def to_vector(self, mat: np.ndarray) -> np.ndarray:
        return mat[self.rows, self.cols] * self.scale

    def to_matrix(self, vec: np.ndarray) -> np.ndarray:
        mat = np.zeros((self.dim, self.dim))
        vals = vec / self.scale
        mat[self.rows, self.cols] = vals
        mat[self.cols, self.rows] = vals
        return mat

    def psd_project(self, vec: np.ndarray) -> np.ndarray:
        mat = self.to_matrix(vec)
        eigvals, eigvecs = np.linalg.eigh(mat)
        positive = eigvals > 0.0
        if positive.all():
            return vec
        if not positive.any():
            return np.zeros_like(vec)
        kept = eigvecs[:, positive] * eigvals[positive]
        return self.to_vector(kept @ eigvecs[:, positive].T)


def _equality_rows(space: _SvecSpace, equalities, dim: int) -> tuple[sp.csr_matrix, np.ndarray]:
    data, row_idx, col_idx, rhs = [], [], [], []
    for k, (e, b) in enumerate(equalities):
        coo = e.tocoo()
        acc: dict[int, float] = {}
        for r, c, v in zip(coo.row, coo.col, coo.data):
            key = int(space.index(np.array([r]), np.array([c]))[0])
            if r == c:
                acc[key] = acc.get(key, 0.0) + v
            else:
                acc[key] = acc.get(key, 0.0) + v / np.sqrt(2.0)
        for key, v in acc.items():
            row_idx.append(k)
            col_idx.append(key)
            data.append(v)
        rhs.append(b)
    mat = sp.csr_matrix((data, (row_idx, col_idx)), shape=(len(equalities), space.size))
    return mat, np.array(rhs)


def solve_sdp(
    prob: SdpProblem,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    rho: float = 1.0,
) -> SdpSolution:
    """Run the consensus ADMM iteration until residuals fall below tol.

    Returns converged=False (with residuals) when the iteration budget is
    exhausted; callers decide whether that is fatal.
    """
    space = _SvecSpace(prob.dim)
    n_vec = space.size

    loc_pairs = []
    for shifted, base in prob.localizers:
        sub = _SvecSpace(len(base))
        a = base[sub.rows]
        b = base[sub.cols]
        base_idx = space.index(a, b)
        shift_idx = space.index(shifted[sub.rows], shifted[sub.cols])
        loc_pairs.append((base_idx, shift_idx, sub))
    n_loc = len(loc_pairs)
    loc_size = loc_pairs[0][2].size if n_loc else 0

    blocks = [sp.identity(n_vec, format="csr")]
    for base_idx, shift_idx, sub in loc_pairs:
        rows = np.repeat(np.arange(sub.size), 2)
        cols = np.stack([base_idx, shift_idx], axis=1).reshape(-1)
        vals = np.tile([1.0, -1.0], sub.size)
        blocks.append(sp.csr_matrix((vals, (rows, cols)), shape=(sub.size, n_vec)))
    blocks.append(sp.identity(n_vec, format="csr"))
    F = sp.vstack(blocks, format="csr")
    Ft = F.T.tocsr()
    solver = splu((Ft @ F).tocsc())

    eq_mat, eq_rhs = _equality_rows(space, prob.equalities, prob.dim)
    gram = (eq_mat @ eq_mat.T).toarray()
    eq_factor = cho_factor(gram)

    def project_affine(vec: np.ndarray) -> np.ndarray:
        resid = eq_mat @ vec - eq_rhs
        return vec - eq_mat.T @ cho_solve(eq_factor, resid)

    c = space.to_vector(prob.objective)

    offsets = [0, n_vec]
    for _ in range(n_loc):
        offsets.append(offsets[-1] + loc_size)
    offsets.append(offsets[-1] + n_vec)
    total = offsets[-1]

    def project_blocks(vec: np.ndarray) -> np.ndarray:
        out = np.empty_like(vec)
        out[: offsets[1]] = space.psd_project(vec[: offsets[1]])
        for k, (_, _, sub) in enumerate(loc_pairs):
            lo, hi = offsets[1 + k], offsets[2 + k]
            out[lo:hi] = sub.psd_project(vec[lo:hi])
        out[offsets[-2] :] = project_affine(vec[offsets[-2] :])
        return out

    z = np.zeros(total)
    dual = np.zeros(total)
    x = np.zeros(n_vec)
    alpha = OVER_RELAXATION
    primal_res = np.inf
    dual_res = np.inf
    eq_res = np.inf
    iterations = 0
    converged = False

    for iteration in range(1, max_iters + 1):
        iterations = iteration
        x = solver.solve(c / rho + Ft @ (z - dual))
        fx = F @ x
        relaxed = alpha * fx + (1.0 - alpha) * z
        z_new = project_blocks(relaxed + dual)
        dual += relaxed - z_new
        dz = z_new - z
        z = z_new

        if iteration % RESIDUAL_CHECK_EVERY == 0 or iteration == max_iters:
            primal_res = float(np.linalg.norm(fx - z) / (1.0 + np.linalg.norm(fx)))
            dual_res = float(rho * np.linalg.norm(Ft @ dz) / (1.0 + np.linalg.norm(c)))
            eq_res = float(np.max(np.abs(eq_mat @ x - eq_rhs))) if eq_rhs.size else 0.0
            if primal_res <= tol and dual_res <= tol and eq_res <= tol:
                converged = True
                break
        if iteration % RHO_BALANCE_EVERY == 0 and not converged:
            if primal_res > 10.0 * dual_res and rho < 1e4:
                rho *= 2.0
                dual /= 2.0
            elif dual_res > 10.0 * primal_res and rho > 1e-4:
                rho /= 2.0
                dual *= 2.0

    moment = space.to_matrix(x)
    min_slack = np.inf
    for k, (base_idx, shift_idx, sub) in enumerate(loc_pairs):
        slack = sub.to_matrix(x[base_idx] - x[shift_idx])
        min_slack = min(min_slack, float(np.linalg.eigvalsh(slack)[0]))
    if not loc_pairs:
        min_slack = 0.0

    return SdpSolution(
        value=float(c @ x),
        moment=moment,
        primal_residual=primal_res,
        equality_residual=eq_res,
        localizer_min_eig_slack=min_slack,
        iterations=iterations,
        converged=converged,
    )


def fcb_norm(p: Polynomial, d: int, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS) -> float:
    """Fourier completely bounded d-norm of p via build + solve."""
    prob = build_fcb_sdp(p, d)
    sol = solve_sdp(prob, tol=tol, max_iters=max_iters)
    if not sol.converged:
        raise ConvergenceError(
            f"SDP did not reach tol={tol} in {sol.iterations} iterations "
            f"(primal {sol.primal_residual:.2e}, equality {sol.equality_residual:.2e})"
        )
    return sol.value


RANK_TOLERANCE = 1e-8
SINGULAR_EXCESS_TOLERANCE = 1e-6


def extract_witness(sol: SdpSolution, prob: SdpProblem) -> Witness:
    """Gram-factorize the moment matrix into an explicit Boolean-behavior triple.

    Eigenvalues below RANK_TOLERANCE are discarded; A(i) is the least-squares
    map sending each word vector v_w to v_{i w} (zero on the orthogonal
    complement), with singular values clamped to 1 when the excess is within
    SINGULAR_EXCESS_TOLERANCE.
    """
    if not sol.converged:
        raise ExtractionError("solution did not converge; refusing to extract a witness")
    moment = 0.5 * (sol.moment + sol.moment.T)
    eigvals, eigvecs = np.linalg.eigh(moment)
    keep = eigvals >= RANK_TOLERANCE
    if not keep.any():
        raise ExtractionError("moment matrix is numerically zero")
    factors = eigvecs[:, keep] * np.sqrt(eigvals[keep])  # row alpha = vector of index alpha
    rank = factors.shape[1]

    u = factors[0]
    v = factors[prob.word_index[()]]
    base_rows = [prob.word_index[w] for w in prob.words if len(w) <= prob.d - 1]
    base = factors[base_rows].T  # rank x |W0|
    base_pinv = np.linalg.pinv(base, rcond=1e-7)

    A = np.zeros((prob.n + 1, rank, rank))
    for i in range(1, prob.n + 2):
        shifted_rows = [prob.word_index[(i,) + w] for w in prob.words if len(w) <= prob.d - 1]
        target = factors[shifted_rows].T
        mat = target @ base_pinv
        left, sing, right = np.linalg.svd(mat)
        excess = float(max(0.0, sing.max(initial=0.0) - 1.0))
        if excess > SINGULAR_EXCESS_TOLERANCE:
            raise ExtractionError(
                f"letter {i}: singular value exceeds 1 by {excess:.2e}; solve to a tighter tolerance"
            )
        A[i - 1] = (left * np.minimum(sing, 1.0)) @ right

    u_norm = np.linalg.norm(u)
    v_norm = np.linalg.norm(v)
    if u_norm == 0.0 or v_norm == 0.0:
        raise ExtractionError("degenerate factorization: u or v vanished")
    return Witness(d=prob.d, u=u / u_norm, v=v / v_norm, A=A)

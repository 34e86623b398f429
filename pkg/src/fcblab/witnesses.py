"""Explicit matrix witnesses certifying influence lower bounds.

All three constructions follow the same creation/annihilation pattern: the
first matrix applications build a superposition over basis vectors weighted
by Fourier coefficients (divided by a root-influence normalizer), later
applications delete elements from an index set, and the surviving inner
product with the left vector isolates a single coefficient.  Evaluating the
polynomial on such a triple therefore returns a ratio of its variance to a
root influence, which rearranges into a lower bound on the maximum influence
whenever the relevant norm is at most 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .behavior import Witness, evaluate_bml_on_matrices, evaluate_on_witness
from .linalg import sigma_max
from .poly import (
    BlockMultilinearPolynomial,
    Polynomial,
    bml_influences,
    bml_variance,
    degree_part,
    statistics,
)

HOMOGENEOUS_FCB = "homogeneous_fcb"
BML_HOMOGENEOUS = "bml_homogeneous"
BML_GENERAL = "bml_general"


@dataclass(frozen=True)
class BmlWitness:
    """Matrix tuple (u, v, A) for block-multilinear evaluation.

    ``A`` has shape (d, n, m, m): one matrix per (block, variable) pair.
    """

    u: np.ndarray
    v: np.ndarray
    A: np.ndarray

    @property
    def m(self) -> int:
        return self.A.shape[2]

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def blocks(self) -> list[list[np.ndarray]]:
        return [[self.A[b, i] for i in range(self.n)] for b in range(self.d)]


@dataclass(frozen=True)
class InfluenceCertificate:
    kind: str
    witness: Witness | BmlWitness
    certified_value: float
    implied_bound: float
    s_or_d: int


def contraction_check(a: np.ndarray, tol: float) -> dict:
    """Largest singular value of a square matrix versus the 1 + tol budget."""
    sigma = sigma_max(np.asarray(a, dtype=float))
    return {"sigma_max": sigma, "pass": bool(sigma <= 1.0 + tol)}


def homogeneous_fcb_witness(p: Polynomial) -> InfluenceCertificate:
    """Boolean-behavior triple achieving Var[p]/sqrt(MaxInf[p]) for homogeneous p.

    Basis {v} + {f_S : |S| <= d-1}.  A(i) sends v to the superposition of
    f_{S-{i}} weighted by p_hat(S)/sqrt(MaxInf) over degree-d sets S
    containing i, deletes i from smaller index sets, and A(n+1) = 0.  The
    certificate value rearranges to MaxInf >= Var^2 when the degree-d
    Fourier completely bounded norm is at most 1.
    """
    d = p.degree
    if not p.is_homogeneous() or d < 1:
        raise ValueError("construction requires a homogeneous polynomial of degree >= 1")
    st = statistics(p)
    if st.variance == 0.0:
        raise ValueError("zero polynomial has no influence certificate")
    n = p.n
    root = sqrt(st.max_influence)

    subsets = sorted(
        s for r in range(d) for s in itertools.combinations(range(1, n + 1), r)
    )
    f_index = {s: 1 + k for k, s in enumerate(subsets)}  # slot 0 is v
    m = 1 + len(subsets)
    assert m == 1 + sum(comb(n, r) for r in range(d))

    A = np.zeros((n + 1, m, m))
    for s, c in p.coeffs.items():
        for i in s:
            A[i - 1, f_index[tuple(j for j in s if j != i)], 0] = c / root
    for s in subsets:
        for i in s:
            A[i - 1, f_index[tuple(j for j in s if j != i)], f_index[s]] = 1.0
    # A[n] stays zero: the frozen letter annihilates everything.

    u = np.zeros(m)
    u[f_index[()]] = 1.0
    v = np.zeros(m)
    v[0] = 1.0
    witness = Witness(d=d, u=u, v=v, A=A)
    value = evaluate_on_witness(p, witness)
    return InfluenceCertificate(
        kind=HOMOGENEOUS_FCB,
        witness=witness,
        certified_value=value,
        implied_bound=st.variance**2,
        s_or_d=d,
    )


def _suffix_sets(n: int, d: int, s: int) -> list[tuple[tuple[int, int], ...]]:
    # {(r,i_r),..,(d,i_d)} for r in s+1..d: contiguous trailing blocks
    out = []
    for r in range(s + 1, d + 1):
        for idx in itertools.product(range(1, n + 1), repeat=d - r + 1):
            out.append(tuple((r + k, idx[k]) for k in range(d - r + 1)))
    return sorted(out)


def _prefix_sets(n: int, s: int) -> list[tuple[tuple[int, int], ...]]:
    # {(1,i_1),..,(r,i_r)} for r <= s-1: contiguous leading blocks
    out = []
    for r in range(1, s):
        for idx in itertools.product(range(1, n + 1), repeat=r):
            out.append(tuple((k + 1, idx[k]) for k in range(r)))
    return sorted(out)


def bml_homogeneous_witness(p: BlockMultilinearPolynomial, s: int) -> InfluenceCertificate:
    """Creation/annihilation tuple realizing sum_i sqrt(Inf_{s,i}) for homogeneous p.

    The same matrices are substituted into every block.  Applications for
    blocks d..s+1 build suffix sets, the block-s application jumps to a
    superposition of prefix sets weighted by p_hat/sqrt(Inf_{s,i}), and
    blocks s-1..1 annihilate.  The certified value is identical for every
    choice of s in [d].
    """
    d = p.d
    if not p.is_homogeneous() or p.degree != d or not p.coeffs:
        raise ValueError("construction requires a homogeneous degree-d block-multilinear polynomial")
    if not (1 <= s <= d):
        raise IndexError(f"block {s} out of range for d={d}")
    n = p.n
    inf_s = bml_influences(p)[s - 1]

    e_sets = _suffix_sets(n, d, s)
    f_sets = _prefix_sets(n, s)
    e_index = {sett: 1 + k for k, sett in enumerate(e_sets)}
    e_index[()] = 0
    f_base = 1 + len(e_sets)
    f_index = {sett: f_base + 1 + k for k, sett in enumerate(f_sets)}
    f_index[()] = f_base
    m = 2 + len(e_sets) + len(f_sets)

    A = np.zeros((n, m, m))
    for sett, col in e_index.items():
        size = len(sett)
        if size <= d - s - 1:
            # creation: append the next-lower block
            for i in range(1, n + 1):
                grown = tuple(sorted(sett + ((d - size, i),)))
                A[i - 1, e_index[grown], col] = 1.0
        elif size == d - s:
            # jump across block s, weighted by the coefficients
            for i in range(1, n + 1):
                if inf_s[i - 1] == 0.0:
                    continue
                root = sqrt(inf_s[i - 1])
                for prefix in [()] + f_sets:
                    if len(prefix) != s - 1:
                        continue
                    key = tuple(sorted(prefix + sett + ((s, i),)))
                    c = p.coeffs.get(key, 0.0)
                    if c != 0.0:
                        A[i - 1, f_index[prefix], col] = c / root
    for sett, col in f_index.items():
        # annihilation: remove the highest block if the index matches
        if sett:
            top_block, top_i = sett[-1]
            A[top_i - 1, f_index[sett[:-1]], col] = 1.0

    u = np.zeros(m)
    u[f_index[()]] = 1.0
    v = np.zeros(m)
    v[e_index[()]] = 1.0
    tuple_A = np.broadcast_to(A, (d, n, m, m)).copy()
    witness = BmlWitness(u=u, v=v, A=tuple_A)
    value = evaluate_bml_on_matrices(p, u, v, witness.blocks())
    return InfluenceCertificate(
        kind=BML_HOMOGENEOUS,
        witness=witness,
        certified_value=value,
        implied_bound=bml_variance(p) ** 2,
        s_or_d=s,
    )


def _partial_sets(n: int, d: int, max_size: int) -> list[tuple[tuple[int, int], ...]]:
    # all (block, index) sets with strictly increasing blocks, size <= max_size
    out: list[tuple[tuple[int, int], ...]] = []
    for r in range(max_size + 1):
        for blocks in itertools.combinations(range(1, d + 1), r):
            for idx in itertools.product(range(1, n + 1), repeat=r):
                out.append(tuple(zip(blocks, idx)))
    return sorted(out)


def bml_general_witness(p: BlockMultilinearPolynomial) -> InfluenceCertificate:
    """Flat annihilation tuple for the highest-variance degree part of p.

    Picks D maximizing Var[p_=D] (smallest on ties), which guarantees
    Var[p_=D] >= Var[p]/d, and certifies Var[p_=D]/sqrt(MaxInf[p_=D]).
    Since lower parts strand above the f_empty level and higher parts
    annihilate through it, evaluating the full p on the tuple already
    isolates the degree-D part.
    """
    total_var = bml_variance(p)
    if total_var == 0.0:
        raise ValueError("zero-variance polynomial has no influence certificate")
    part_vars = [bml_variance(degree_part(p, r)) for r in range(p.d + 1)]
    D = max(range(1, p.d + 1), key=lambda r: (part_vars[r], -r))
    pD = degree_part(p, D)
    infD = bml_influences(pD)
    max_inf = float(infD.max())
    root = sqrt(max_inf)

    n, d = p.n, p.d
    sets = _partial_sets(n, d, D - 1)
    f_index = {sett: 1 + k for k, sett in enumerate(sets)}  # slot 0 is v
    m = 1 + len(sets)

    A = np.zeros((d, n, m, m))
    for key, c in pD.coeffs.items():
        for b, i in key:
            rest = tuple(pair for pair in key if pair != (b, i))
            A[b - 1, i - 1, f_index[rest], 0] = c / root
    for sett, col in f_index.items():
        for b, i in sett:
            rest = tuple(pair for pair in sett if pair != (b, i))
            A[b - 1, i - 1, f_index[rest], col] = 1.0

    u = np.zeros(m)
    u[f_index[()]] = 1.0
    v = np.zeros(m)
    v[0] = 1.0
    witness = BmlWitness(u=u, v=v, A=A)
    value = evaluate_bml_on_matrices(p, u, v, witness.blocks())
    return InfluenceCertificate(
        kind=BML_GENERAL,
        witness=witness,
        certified_value=value,
        implied_bound=(total_var / d) ** 2,
        s_or_d=D,
    )


def degree_extraction_embed(w: BmlWitness, D: int, d: int) -> BmlWitness:
    """Tensor with the nilpotent shift so the full polynomial sees only degree D.

    B on R^(D+1) sends e_{s+1} to e_s; since <e_1, B^s e_{D+1}> = delta_{s,D},
    evaluating any block-multilinear polynomial on (u ox e_1, v ox e_{D+1},
    A_b(i) ox B) equals evaluating its degree-D part on (u, v, A).
    """
    if not (1 <= D <= d):
        raise ValueError(f"D={D} must lie in [1, d={d}]")
    if w.d != d:
        raise ValueError(f"witness has {w.d} blocks, expected {d}")
    shift = np.zeros((D + 1, D + 1))
    for s in range(1, D + 1):
        shift[s - 1, s] = 1.0
    e_first = np.zeros(D + 1)
    e_first[0] = 1.0
    e_last = np.zeros(D + 1)
    e_last[D] = 1.0
    m = w.m
    A = np.zeros((w.d, w.n, m * (D + 1), m * (D + 1)))
    for b in range(w.d):
        for i in range(w.n):
            A[b, i] = np.kron(w.A[b, i], shift)
    return BmlWitness(u=np.kron(w.u, e_first), v=np.kron(w.v, e_last), A=A)


def exact_correlation_search(
    p: Polynomial, d: int, scale: float, tol: float = 1e-6, max_iters: int = 100_000
) -> dict:
    """Experimental: search for a triple matching every coefficient of p/scale.

    Augments the norm SDP with equalities pinning <u, v_{i^S}> to
    p_hat(S)/scale for every class, then solves the feasibility problem
    (zero objective).  A converged solve with small residuals is numerical
    evidence only; no claim is attached to either outcome.
    """
    import scipy.sparse as sp

    from . import sdp as _sdp
    from .behavior import canonical_word

    prob = _sdp.build_fcb_sdp(p, d)
    equalities = list(prob.equalities)
    dim = prob.dim
    for size in range(d + 1):
        for s in itertools.combinations(range(1, p.n + 1), size):
            idx = prob.word_index[canonical_word(s, d, p.n)]
            e = sp.coo_matrix(([0.5, 0.5], ((0, idx), (idx, 0))), shape=(dim, dim))
            equalities.append((e, p.coeffs.get(s, 0.0) / scale))
    pinned = _sdp.SdpProblem(
        dim=dim,
        objective=np.zeros((dim, dim)),
        equalities=equalities,
        localizers=prob.localizers,
        n=prob.n,
        d=prob.d,
        words=prob.words,
        word_index=prob.word_index,
        num_class_equalities=prob.num_class_equalities,
    )
    sol = _sdp.solve_sdp(pinned, tol=tol, max_iters=max_iters)
    report = {
        "feasible_numerically": sol.converged,
        "equality_residual": sol.equality_residual,
        "primal_residual": sol.primal_residual,
        "iterations": sol.iterations,
        "witness": None,
    }
    if sol.converged:
        try:
            report["witness"] = _sdp.extract_witness(sol, pinned)
        except Exception:  # noqa: BLE001 - extraction failure stays informational
            pass
    return report

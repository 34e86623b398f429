"""Word algebra over [n+1] and matrix triples with Boolean behavior.

A word is a tuple of letters from {1,..,n+1}.  Two words of the same length
are equivalent when each letter of [n] occurs with the same parity; the extra
letter n+1 is a frozen variable and never counts.  A triple (u, v, A(1..n+1))
of unit vectors and contractions has Boolean behavior of degree d when
<u, A(w_1)...A(w_d) v> agrees across every equivalence class of length-d
words, mirroring the product relations satisfied by sign vectors with a
trailing frozen 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError
from .linalg import sigma_max
from .poly import BlockMultilinearPolynomial, Polynomial, Subset

Word = tuple[int, ...]

MAX_WORDS = 10**6


def word_class(w: Sequence[int], n: int) -> Subset:
    """Letters of [n] occurring an odd number of times in w (n+1 is ignored)."""
    counts: dict[int, int] = {}
    for letter in w:
        if not (1 <= letter <= n + 1):
            raise IndexError(f"letter {letter} out of range for n={n}")
        if letter <= n:
            counts[letter] = counts.get(letter, 0) + 1
    return tuple(sorted(k for k, c in counts.items() if c % 2))


def canonical_word(S: Sequence[int], d: int, n: int) -> Word:
    """Ascending elements of S padded with copies of n+1 up to length d."""
    s = tuple(sorted(S))
    if len(s) > d:
        raise ValueError(f"|S|={len(s)} exceeds word length d={d}")
    if s and not (1 <= s[0] and s[-1] <= n):
        raise IndexError(f"subset {s} out of range for n={n}")
    return s + (n + 1,) * (d - len(s))


def enumerate_classes(n: int, d: int) -> dict[Subset, list[Word]]:
    """Partition all of [n+1]^d into parity classes, words in lexicographic order."""
    total = (n + 1) ** d
    if total > MAX_WORDS:
        raise CapacityError(f"(n+1)^d = {total} exceeds the enumeration guard ({MAX_WORDS})")
    classes: dict[Subset, list[Word]] = {}
    for w in itertools.product(range(1, n + 2), repeat=d):
        classes.setdefault(word_class(w, n), []).append(w)
    return classes


@dataclass(frozen=True)
class Witness:
    """Candidate Boolean-behavior triple: unit vectors u, v and n+1 matrices.

    ``A`` has shape (n+1, m, m) with A[i-1] the matrix for letter i; the last
    slot belongs to the frozen letter n+1.
    """

    d: int
    u: np.ndarray
    v: np.ndarray
    A: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        a = np.asarray(self.A, dtype=float)
        if a.ndim != 3 or a.shape[1] != a.shape[2]:
            raise ValueError("A must be a stack of square matrices")
        if u.shape != (a.shape[1],) or v.shape != (a.shape[1],):
            raise ValueError("u, v must match the matrix dimension")
        if a.shape[0] < 2:
            raise ValueError("need at least one variable letter plus the frozen letter")
        if self.d < 0:
            raise ValueError("degree must be nonnegative")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "A", a)

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def n(self) -> int:
        return self.A.shape[0] - 1


def bitstring_witness(x: Sequence[int], d: int) -> Witness:
    """Scalar witness for a sign vector: m=1, u=v=1, A(i)=x(i), A(n+1)=1."""
    sx = [float(v) for v in x]
    if any(v not in (-1.0, 1.0) for v in sx):
        raise ValueError("entries must be -1 or +1")
    a = np.array([[[v]] for v in sx + [1.0]])
    return Witness(d=d, u=np.ones(1), v=np.ones(1), A=a)


def _chain_apply(A: np.ndarray, word: Sequence[int], vec: np.ndarray) -> np.ndarray:
    # A(w_1)...A(w_s) v, applied right to left
    out = vec
    for letter in reversed(word):
        out = A[letter - 1] @ out
    return out


def chain_value(w: Witness, word: Sequence[int]) -> float:
    """<u, A(w_1)...A(w_s) v> for an arbitrary word."""
    for letter in word:
        if not (1 <= letter <= w.n + 1):
            raise IndexError(f"letter {letter} out of range for n={w.n}")
    return float(w.u @ _chain_apply(w.A, word, w.v))


def verify_bb(w: Witness, tol: float) -> dict:
    """Check unit norms, contractivity, and the length-d class relations.

    Every length-d word is compared against the lexicographically first
    member of its class (violations are linear, so representative checks
    suffice).  Returns max_relation_violation, max_contraction_excess,
    unit_norm_error and the combined pass flag (all three within tol).
    """
    n, d, m = w.n, w.d, w.m
    total = (n + 1) ** d
    if total > MAX_WORDS:
        raise CapacityError(f"(n+1)^d = {total} exceeds the enumeration guard ({MAX_WORDS})")

    unit_err = max(abs(np.linalg.norm(w.u) - 1.0), abs(np.linalg.norm(w.v) - 1.0))
    excess = max(max(0.0, sigma_max(w.A[i]) - 1.0) for i in range(n + 1))

    # Suffix vectors level by level; the final letter is folded into u^T A(i)
    # so only (n+1)^(d-1) vectors are ever materialized.
    max_violation = 0.0
    if d > 0:
        suffix = w.v.reshape(m, 1)
        for _ in range(d - 1):
            suffix = np.hstack([w.A[i] @ suffix for i in range(n + 1)])
        # column order of `suffix` = lexicographic order of length-(d-1) words
        ua = np.stack([w.u @ w.A[i] for i in range(n + 1)])
        values = (ua @ suffix).reshape(-1)  # lexicographic over length-d words
        rep_value: dict[Subset, float] = {}
        for rank, word in enumerate(itertools.product(range(1, n + 2), repeat=d)):
            cls = word_class(word, n)
            if cls in rep_value:
                max_violation = max(max_violation, abs(values[rank] - rep_value[cls]))
            else:
                rep_value[cls] = values[rank]

    passed = unit_err <= tol and excess <= tol and max_violation <= tol
    return {
        "max_relation_violation": float(max_violation),
        "max_contraction_excess": float(excess),
        "unit_norm_error": float(unit_err),
        "pass": bool(passed),
    }


def evaluate_on_witness(p: Polynomial, w: Witness) -> float:
    """Fourier-weighted evaluation sum_S p_hat(S) <u, A(i_1^S)...A(i_d^S) v>.

    Uses the canonical representative of each class; independence of the
    representative is exactly what verify_bb certifies.
    """
    if p.n != w.n:
        raise ValueError(f"polynomial has n={p.n} but witness has n={w.n}")
    if p.degree > w.d:
        raise ValueError(f"degree {p.degree} exceeds witness degree {w.d}")
    total = 0.0
    for s, c in p.coeffs.items():
        word = canonical_word(s, w.d, w.n)
        total += c * float(w.u @ _chain_apply(w.A, word, w.v))
    return total


def evaluate_bml_on_matrices(
    p: BlockMultilinearPolynomial,
    u: np.ndarray,
    v: np.ndarray,
    A_blocks: Sequence[Sequence[np.ndarray]] | np.ndarray,
) -> float:
    """<u, p(A_1,..,A_d) v> with the constant term acting as the identity.

    ``A_blocks[b-1][i-1]`` is the matrix substituted for variable i of
    block b.  Each monomial is applied right to left in block order.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    m = u.shape[0]
    if v.shape != (m,):
        raise ValueError("u and v must have the same dimension")
    blocks = [[np.asarray(a, dtype=float) for a in row] for row in A_blocks]
    if len(blocks) != p.d:
        raise ValueError(f"expected {p.d} blocks of matrices, got {len(blocks)}")
    for row in blocks:
        if len(row) != p.n:
            raise ValueError(f"each block needs {p.n} matrices")
        for a in row:
            if a.shape != (m, m):
                raise ValueError("matrix dimensions must match u and v")
    total = 0.0
    for key, c in p.coeffs.items():
        vec = v
        for b, i in reversed(key):
            vec = blocks[b - 1][i - 1] @ vec
        total += c * float(u @ vec)
    return total

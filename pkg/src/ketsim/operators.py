"""Quantum gates as sparse sums of weighted ket-bra terms.

An operator on n qubits is a collection of entries a_ij attached to
|i><j| outer products; the dense 2^n x 2^n matrix is a derived,
size-guarded view used for testing and small instances. Application
follows the two-step rule: a sparse product over nonzero entries only,
then division by the normalization factor A (the raw output's norm),
which is 1 for unitary gates and is reported rather than assumed.

Operators are immutable after construction; the dense view is cached on
first request. Sharing across threads is safe.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import (
    AnnihilatedStateError,
    DimensionMismatchError,
    InvalidInputError,
    ResourceLimitError,
)
from .states import BasisState, KetBraTerm, QuantumState

ENTRY_DROP_TOL = 1e-15
ANNIHILATION_FLOOR = 1e-12
DENSE_QUBIT_GUARD = 13

EntryTriple = tuple[int, int, complex]


class Operator:
    """Gate on n qubits stored as a sparse map (ket index, bra index) -> weight."""

    __slots__ = ("_csr", "_n", "_dense")

    def __init__(
        self,
        n: int,
        entries: Mapping[tuple[int, int], complex] | Iterable[EntryTriple] = (),
    ):
        if n < 1:
            raise InvalidInputError(f"operator qubit count must be >= 1, got {n}")
        if isinstance(entries, Mapping):
            triples = [(i, j, w) for (i, j), w in entries.items()]
        else:
            triples = [(i, j, w) for i, j, w in entries]
        dim = 1 << n
        rows = np.fromiter((t[0] for t in triples), dtype=np.int64, count=len(triples))
        cols = np.fromiter((t[1] for t in triples), dtype=np.int64, count=len(triples))
        data = np.fromiter(
            (t[2] for t in triples), dtype=np.complex128, count=len(triples)
        )
        if triples:
            if rows.min() < 0 or cols.min() < 0 or rows.max() >= dim or cols.max() >= dim:
                raise InvalidInputError(
                    f"entry index out of range for {n}-qubit operator (dim {dim})"
                )
            if not np.all(np.isfinite(data)):
                raise InvalidInputError("operator weights must be finite")
        self._init_from_csr(
            n, sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))
        )

    # Construction used by builders that already hold a scipy matrix.
    @classmethod
    def _from_csr(cls, n: int, csr: sp.csr_matrix) -> "Operator":
        op = object.__new__(cls)
        op._init_from_csr(n, csr)
        return op

    def _init_from_csr(self, n: int, csr: sp.csr_matrix) -> None:
        csr = csr.tocsr()
        csr.sum_duplicates()
        if csr.nnz:
            csr.data[np.abs(csr.data) < ENTRY_DROP_TOL] = 0
            csr.eliminate_zeros()
        csr.sort_indices()
        for arr in (csr.data, csr.indices, csr.indptr):
            arr.setflags(write=False)
        self._csr = csr
        self._n = n
        self._dense = None

    @property
    def n(self) -> int:
        """Qubit count."""
        return self._n

    @property
    def dim(self) -> int:
        return 1 << self._n

    @property
    def nnz(self) -> int:
        """Number of stored (nonzero) ket-bra entries."""
        return self._csr.nnz

    def entry(self, i: int, j: int) -> complex:
        """The weight a_ij (0 if absent)."""
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise InvalidInputError(f"entry ({i}, {j}) out of range for dim {self.dim}")
        return complex(self._csr[i, j])

    def entries(self) -> Iterator[EntryTriple]:
        """Stored entries as (ket index, bra index, weight), row-major."""
        coo = self._csr.tocoo()
        for i, j, w in zip(coo.row, coo.col, coo.data):
            yield int(i), int(j), complex(w)

    def ket_bra_terms(self) -> list[KetBraTerm]:
        """The operator as an explicit list of weighted |i><j| terms."""
        return [
            KetBraTerm(
                w,
                BasisState.from_index(i, self._n),
                BasisState.from_index(j, self._n),
            )
            for i, j, w in self.entries()
        ]

    def __repr__(self) -> str:
        return f"Operator(n={self._n}, nnz={self.nnz})"


@dataclass(frozen=True)
class ApplyReport:
    """Result of applying an operator: the normalized state and the factor A."""

    output: QuantumState
    normalization_factor: float


def operator_from_terms(
    terms: Iterable[tuple[complex, str, str]],
) -> Operator:
    """Build an operator from (weight, ket bit-string, bra bit-string) terms.

    Duplicate (ket, bra) pairs are summed; entries whose sum falls below
    1e-15 in magnitude are dropped, so full cancellation yields an empty
    (zero) operator.
    """
    term_list = list(terms)
    if not term_list:
        raise InvalidInputError(
            "operator_from_terms needs at least one term; "
            "use Operator(n) for an explicit zero operator"
        )
    kb = [KetBraTerm(complex(w), BasisState(k), BasisState(b)) for w, k, b in term_list]
    n = kb[0].n
    for t in kb:
        if t.n != n:
            raise DimensionMismatchError(
                f"mixed bit-string lengths in operator terms: {t.n} vs {n}"
            )
    return Operator(n, [(t.ket.index, t.bra.index, t.weight) for t in kb])


def outer(ket_state: QuantumState, bra_state: QuantumState) -> Operator:
    """Outer product |ket><bra|: dense entry (i, j) = ket[i] * conj(bra[j])."""
    if ket_state.n != bra_state.n:
        raise DimensionMismatchError(
            f"outer product needs equal qubit counts, got {ket_state.n} and {bra_state.n}"
        )
    n = ket_state.n
    if n > DENSE_QUBIT_GUARD:
        raise ResourceLimitError(
            f"outer product on {n} qubits would materialize a dense {1 << n} x {1 << n} matrix"
        )
    mat = np.outer(ket_state.amps, bra_state.amps.conj())
    return Operator._from_csr(n, sp.csr_matrix(mat))


def identity(n: int) -> Operator:
    """The n-qubit identity, sum of |x><x| over all basis strings x."""
    if n < 1:
        raise InvalidInputError(f"identity needs n >= 1, got {n}")
    dim = 1 << n
    return Operator._from_csr(n, sp.identity(dim, dtype=np.complex128, format="csr"))


def pauli_x() -> Operator:
    """The NOT gate X = |0><1| + |1><0|."""
    return operator_from_terms([(1, "0", "1"), (1, "1", "0")])


def hadamard() -> Operator:
    """H = (|0><0| + |1><0| + |0><1| - |1><1|) / sqrt(2)."""
    s = 1 / math.sqrt(2)
    return operator_from_terms(
        [(s, "0", "0"), (s, "1", "0"), (s, "0", "1"), (-s, "1", "1")]
    )


def cnot() -> Operator:
    """CNOT = |00><00| + |01><01| + |11><10| + |10><11|."""
    return operator_from_terms(
        [(1, "00", "00"), (1, "01", "01"), (1, "11", "10"), (1, "10", "11")]
    )


def bitdot(k: int, j: int) -> int:
    """Bitwise dot product: parity of popcount(k AND j)."""
    if k < 0 or j < 0:
        raise InvalidInputError("bitdot arguments must be nonnegative")
    return (k & j).bit_count() & 1


@functools.lru_cache(maxsize=12)
def hadamard_n(n: int) -> Operator:
    """The n-qubit Hadamard: entry (j, k) = (-1)^(k.j) / sqrt(2^n).

    Equals the n-fold tensor power of hadamard(). Cached: instances are
    immutable, and circuit drivers request the same sizes repeatedly.
    """
    if n < 1:
        raise InvalidInputError(f"hadamard_n needs n >= 1, got {n}")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    parity = (np.bitwise_count(idx[:, None] & idx[None, :]) & 1).astype(bool)
    scale = 1 / math.sqrt(dim)
    data = np.where(parity, -scale, scale).astype(np.complex128).ravel()
    rows = np.repeat(idx, dim)
    cols = np.tile(idx, dim)
    return Operator._from_csr(
        n, sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    )


def apply_unnormalized(op: Operator, state: QuantumState) -> np.ndarray:
    """Step one of operator application: raw[i] = sum_k a_ik * b_k.

    The sum runs over stored entries only (zero a_ik and zero b_k terms
    vanish). Returns the raw amplitude array before normalization.
    """
    if op.n != state.n:
        raise DimensionMismatchError(
            f"operator acts on {op.n} qubits, state has {state.n}"
        )
    return op._csr @ state.amps


def apply(op: Operator, state: QuantumState) -> ApplyReport:
    """Apply an operator: sparse product, then division by A = ||raw||.

    A is reported so callers can verify it is 1 for unitary gates. A
    (near-)zero A means the operator annihilated the state, which is an
    error: the zero vector is not a quantum state.
    """
    raw = apply_unnormalized(op, state)
    factor = float(np.linalg.norm(raw))
    if factor < ANNIHILATION_FLOOR:
        raise AnnihilatedStateError(
            f"operator maps the state to the zero vector (A={factor!r})"
        )
    return ApplyReport(QuantumState(raw / factor), factor)


def adjoint(op: Operator) -> Operator:
    """Conjugate transpose: entry (i, j) becomes conj(entry (j, i))."""
    return Operator._from_csr(op.n, op._csr.conj().transpose().tocsr())


def compose(a: Operator, b: Operator) -> Operator:
    """Matrix product a . b (apply b first, then a)."""
    if a.n != b.n:
        raise DimensionMismatchError(
            f"cannot compose operators on {a.n} and {b.n} qubits"
        )
    return Operator._from_csr(a.n, (a._csr @ b._csr).tocsr())


def tensor_ops(a: Operator, b: Operator) -> Operator:
    """Tensor product of gates: bit-strings of kets and bras concatenate.

    Each term pair contributes weight a_w * b_w on |a_ket b_ket><a_bra b_bra|;
    the dense form is the Kronecker product of the dense forms.
    """
    return Operator._from_csr(a.n + b.n, sp.kron(a._csr, b._csr, format="csr"))


def is_unitary(op: Operator, tol: float = 1e-12) -> bool:
    """True iff O O-dagger and O-dagger O are both the identity within tol."""
    if tol <= 0:
        raise InvalidInputError(f"tolerance must be positive, got {tol}")
    adj = op._csr.conj().transpose().tocsr()
    eye = sp.identity(op.dim, dtype=np.complex128, format="csr")
    for prod in (op._csr @ adj, adj @ op._csr):
        diff = prod - eye
        if diff.nnz and np.max(np.abs(diff.data)) > tol:
            return False
    return True


def to_dense(op: Operator) -> np.ndarray:
    """Dense 2^n x 2^n matrix with entry (i, j) = a_ij.

    Guarded at n <= 13: beyond that the 4^n entries do not reasonably fit
    in memory. The result is cached on the operator and marked read-only.
    """
    if op.n > DENSE_QUBIT_GUARD:
        raise ResourceLimitError(
            f"dense view of a {op.n}-qubit operator exceeds the n <= {DENSE_QUBIT_GUARD} guard"
        )
    if op._dense is None:
        dense = op._csr.toarray()
        dense.setflags(write=False)
        op._dense = dense
    return op._dense

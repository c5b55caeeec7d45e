"""Basis states, superpositions, and the vector algebra underneath them.

A basis state is an n-bit string naming one canonical unit vector of a
2^n-dimensional complex space (most-significant bit first, so "100001" is
index 33). A quantum state is a dense vector of 2^n complex amplitudes whose
squared moduli sum to 1; the norm is checked at construction rather than
silently fixed.

Everything here is immutable after construction: amplitude arrays are marked
read-only, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    NormalizationError,
    ZeroStateError,
)

NORM_ATOL = 1e-12
ZERO_NORM_FLOOR = 1e-12


def _check_bits(bits: str) -> None:
    if not bits:
        raise InvalidInputError("basis state needs a nonempty bit-string")
    bad = set(bits) - {"0", "1"}
    if bad:
        raise InvalidInputError(
            f"basis state bit-string may only contain 0/1, got {bits!r}"
        )


@dataclass(frozen=True)
class BasisState:
    """An n-bit string labelling one canonical unit vector, MSB first."""

    bits: str

    def __post_init__(self):
        _check_bits(self.bits)

    @classmethod
    def from_index(cls, index: int, n: int) -> "BasisState":
        """Build the basis state |index> in an n-qubit space.

        The qubit count must be given explicitly: a bare decimal label is
        ambiguous about how many leading zeros it carries.
        """
        if n < 1:
            raise InvalidInputError(f"qubit count must be >= 1, got {n}")
        if not 0 <= index < 2**n:
            raise InvalidInputError(f"index {index} out of range for {n} qubits")
        return cls(format(index, f"0{n}b"))

    @property
    def n(self) -> int:
        """Qubit count (length of the bit-string)."""
        return len(self.bits)

    @property
    def index(self) -> int:
        """Decimal value of the bit-string, in [0, 2^n)."""
        return int(self.bits, 2)

    def __str__(self) -> str:
        return f"|{self.bits}>"


@dataclass(frozen=True)
class KetBraTerm:
    """One weighted outer-product term a * |ket><bra| of an operator sum."""

    weight: complex
    ket: BasisState
    bra: BasisState

    def __post_init__(self):
        if self.ket.n != self.bra.n:
            raise DimensionMismatchError(
                f"ket and bra differ in qubit count: {self.ket.n} vs {self.bra.n}"
            )

    @property
    def n(self) -> int:
        return self.ket.n


def _as_amp_array(amps: Sequence[complex] | np.ndarray) -> np.ndarray:
    arr = np.asarray(amps, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidInputError(f"amplitude array must be 1-D, got shape {arr.shape}")
    return arr


class QuantumState:
    """Unit-norm vector of 2^n complex amplitudes indexed by basis index."""

    __slots__ = ("_amps", "_n")

    def __init__(self, amps: Sequence[complex] | np.ndarray):
        arr = _as_amp_array(amps).copy()
        n = int(arr.size).bit_length() - 1
        if arr.size < 2 or arr.size != 2**n:
            raise InvalidInputError(
                f"amplitude array length must be a power of two >= 2, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("amplitudes must be finite (no NaN/Inf)")
        norm_sq = float(np.sum(np.abs(arr) ** 2))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise NormalizationError(
                f"squared amplitudes sum to {norm_sq!r}, not 1 "
                f"(tolerance {NORM_ATOL}); use normalize() to rescale explicitly"
            )
        arr.setflags(write=False)
        self._amps = arr
        self._n = n

    @property
    def amps(self) -> np.ndarray:
        """Read-only amplitude array of length 2^n."""
        return self._amps

    @property
    def n(self) -> int:
        """Qubit count."""
        return self._n

    @property
    def dim(self) -> int:
        return self._amps.size

    def amplitude(self, basis: BasisState | str) -> complex:
        """Amplitude of one basis state."""
        if isinstance(basis, str):
            basis = BasisState(basis)
        if basis.n != self._n:
            raise DimensionMismatchError(
                f"basis state has {basis.n} qubits, state has {self._n}"
            )
        return complex(self._amps[basis.index])

    def __repr__(self) -> str:
        nz = np.flatnonzero(self._amps)
        terms = ", ".join(
            f"{format(k, f'0{self._n}b')}: {self._amps[k]:.4g}" for k in nz[:4]
        )
        more = "" if nz.size <= 4 else f", ... ({nz.size} nonzero)"
        return f"QuantumState(n={self._n}, {{{terms}{more}}})"


def basis_state(bits: str) -> QuantumState:
    """The 2^n-dimensional state with amplitude 1 at index(bits), 0 elsewhere."""
    b = BasisState(bits)
    amps = np.zeros(2**b.n, dtype=np.complex128)
    amps[b.index] = 1.0
    return QuantumState(amps)


def superpose(
    terms: Iterable[tuple[complex, BasisState | str]],
    *,
    auto_normalize: bool = False,
) -> QuantumState:
    """Weighted sum of same-length basis states; duplicate kets are summed.

    Fails with NormalizationError if the squared weights do not sum to 1
    within tolerance, unless auto_normalize is set.
    """
    term_list = [
        (complex(w), b if isinstance(b, BasisState) else BasisState(b))
        for w, b in terms
    ]
    if not term_list:
        raise InvalidInputError("superpose needs at least one term")
    n = term_list[0][1].n
    for _, b in term_list:
        if b.n != n:
            raise DimensionMismatchError(
                f"mixed qubit counts in superposition: {b.n} vs {n}"
            )
    amps = np.zeros(2**n, dtype=np.complex128)
    for w, b in term_list:
        amps[b.index] += w
    if not np.any(amps):
        raise ZeroStateError("all weights cancelled; the zero vector is not a state")
    if auto_normalize:
        return normalize(amps)
    return QuantumState(amps)


def normalize(amps: Sequence[complex] | np.ndarray) -> QuantumState:
    """Divide a raw amplitude array by its Euclidean norm.

    The explicit way to build a state from unnormalized weights; plain
    constructors reject them instead of rescaling behind the caller's back.
    """
    arr = _as_amp_array(amps)
    norm = float(np.linalg.norm(arr))
    if norm < ZERO_NORM_FLOOR:
        raise ZeroStateError(f"cannot normalize a (near-)zero vector, norm={norm!r}")
    return QuantumState(arr / norm)


def dot(bra_state: QuantumState, ket_state: QuantumState) -> complex:
    """Inner product <bra_state|ket_state>.

    Conjugates the first argument's weights: sum_k conj(a_k) * b_k. On basis
    states this is the 0/1 selection rule.
    """
    if bra_state.n != ket_state.n:
        raise DimensionMismatchError(
            f"dot product needs equal qubit counts, got {bra_state.n} and {ket_state.n}"
        )
    return complex(np.vdot(bra_state.amps, ket_state.amps))


def tensor_states(a: QuantumState, b: QuantumState) -> QuantumState:
    """Tensor product: result amplitude at i*2^n + j is a.amps[i] * b.amps[j].

    Bit-strings concatenate, so tensor of basis "x" and "y" is basis "xy".
    """
    return QuantumState(np.kron(a.amps, b.amps))

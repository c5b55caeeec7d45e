"""Decide whether an n-qubit state factors into n single-qubit states.

A state is entangled exactly when no such factorization exists. The test
peels one qubit at a time: viewing the amplitudes as a 2 x 2^(n-1) array,
the cut factorizes iff every 2x2 minor vanishes (for two qubits this is
the familiar a1*b2 = a2*b1 condition on |00>,|01>,|10>,|11| weights).
Minors against the largest column decide the rank; a full reconstruction
check backs the verdict up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .states import QuantumState

DEFAULT_TOL = 1e-10

# Components below this are treated as zero when picking the phase anchor.
_PHASE_ANCHOR_EPS = 1e-14


@dataclass(frozen=True)
class FactorizationResult:
    """Verdict of the product-state test.

    For a product state, factors holds n single-qubit states whose tensor
    product reproduces the input, and residual is the largest entrywise
    deviation of that reconstruction. For an entangled state, factors is
    None and residual reports the largest scale-free minor violation that
    ruled the factorization out.
    """

    is_product: bool
    factors: list[QuantumState] | None
    residual: float


def _canonical_phase(q: np.ndarray) -> complex:
    """Unit phase that makes q's first nonzero component real nonnegative."""
    anchor = q[0] if abs(q[0]) > _PHASE_ANCHOR_EPS else q[1]
    return anchor / abs(anchor)


def is_product_state(state: QuantumState, tol: float = DEFAULT_TOL) -> FactorizationResult:
    """Factor the state into single-qubit states, or report why it cannot be.

    Minor violations are compared against tol scaled by the current
    remainder's largest amplitude magnitude, so the test is insensitive to
    global phase and does not depend on where the small amplitudes sit.
    Extracted factors are canonicalized to a real nonnegative leading
    amplitude; the leftover global phase ends up in the last factor.
    """
    if tol <= 0:
        raise InvalidInputError(f"tolerance must be positive, got {tol}")
    remainder = state.amps
    factors: list[QuantumState] = []
    for _ in range(state.n - 1):
        m = remainder.reshape(2, -1)
        scale = float(np.max(np.abs(remainder)))
        pivot = int(np.argmax(np.abs(m[0]) ** 2 + np.abs(m[1]) ** 2))
        minors = m[0, pivot] * m[1] - m[1, pivot] * m[0]
        violation = float(np.max(np.abs(minors))) / scale
        if violation > tol:
            return FactorizationResult(False, None, violation)
        q = m[:, pivot]
        q = q / np.linalg.norm(q)
        rest = q.conj() @ m
        rest = rest / np.linalg.norm(rest)
        phase = _canonical_phase(q)
        factors.append(QuantumState(q * phase.conjugate()))
        remainder = rest * phase
    factors.append(QuantumState(remainder))
    recon = factors[0].amps
    for f in factors[1:]:
        recon = np.kron(recon, f.amps)
    residual = float(np.max(np.abs(recon - state.amps)))
    return FactorizationResult(residual <= tol, factors, residual)

"""Real density matrices for classical events, superposition events and mixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    CapExceededError,
    ConditioningOnNullError,
    DensityMatrixError,
    InternalConsistencyError,
    NormalizationError,
    SpaceMismatchError,
    ValidationError,
)
from .outcomes import PROB_TOL, Event, OutcomeSpace, Partition, _check_same_space, event_probability

MATRIX_TOL = 1e-9
MAX_EIGEN_DIM = 16


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A symmetric, trace-one, positive semidefinite real matrix on ``space``.

    The library's constructors produce valid matrices by construction; use
    :meth:`from_array` for untrusted input, which runs :meth:`validate`.
    """

    space: OutcomeSpace
    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.entries, dtype=float)
        n = self.space.n
        if a.shape != (n, n):
            raise DensityMatrixError(f"expected a {n}x{n} matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DensityMatrixError("matrix has non-finite entries")
        if not np.array_equal(a, a.T):
            if np.max(np.abs(a - a.T)) > MATRIX_TOL:
                raise DensityMatrixError("matrix is not symmetric")
            a = (a + a.T) / 2
        object.__setattr__(self, "entries", _frozen(a))

    @classmethod
    def from_array(cls, space: OutcomeSpace, entries, tol: float = MATRIX_TOL) -> DensityMatrix:
        rho = cls(space, entries)
        rho.validate(tol)
        return rho

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def trace(self) -> float:
        return math.fsum(np.diag(self.entries))

    def purity(self) -> float:
        """tr[ρ²], computed as the sum of squared entries."""
        return math.fsum((self.entries * self.entries).ravel())

    def eigenvalues(self) -> np.ndarray:
        if self.n > MAX_EIGEN_DIM:
            raise CapExceededError(f"eigenvalue checks are capped at n <= {MAX_EIGEN_DIM}")
        return np.linalg.eigvalsh(self.entries)

    def validate(self, tol: float = MATRIX_TOL) -> None:
        a = self.entries
        if np.max(np.abs(a - a.T), initial=0.0) > tol:
            raise DensityMatrixError("matrix is not symmetric")
        if abs(self.trace - 1.0) > tol:
            raise DensityMatrixError(f"trace is {self.trace!r}, not 1")
        lowest = float(self.eigenvalues()[0])
        if lowest < -tol:
            raise DensityMatrixError(f"matrix has negative eigenvalue {lowest!r}")

    def allclose(self, other, atol: float = MATRIX_TOL) -> bool:
        b = other.entries if isinstance(other, DensityMatrix) else np.asarray(other, dtype=float)
        if self.entries.shape != b.shape:
            return False
        return bool(np.max(np.abs(self.entries - b), initial=0.0) <= atol)

    def tolist(self) -> list[list[float]]:
        return self.entries.tolist()

    def __repr__(self) -> str:
        return f"DensityMatrix({self.space.labels}, {self.entries.tolist()})"


@dataclass(frozen=True, eq=False)
class StateVector:
    space: OutcomeSpace
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.amplitudes, dtype=float)
        if v.shape != (self.space.n,):
            raise ValidationError(f"expected {self.space.n} amplitudes, got shape {v.shape}")
        norm = math.sqrt(math.fsum(v * v))
        if abs(norm - 1.0) > PROB_TOL:
            raise NormalizationError(f"state vector has norm {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(v))

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.space, np.outer(self.amplitudes, self.amplitudes))


def _event_prob_checked(S: Event) -> float:
    p = event_probability(S)
    if p <= 0:
        raise ConditioningOnNullError(f"{S!r} has probability zero")
    return p


def ket_of_event(S: Event) -> StateVector:
    """Unit vector with entries sqrt(p_i / Pr(S)) on S and 0 elsewhere."""
    p_s = _event_prob_checked(S)
    v = np.zeros(S.space.n)
    for i in S.indices:
        v[i] = math.sqrt(S.space.probs[i] / p_s)
    return StateVector(S.space, v)


def rho_delta(S: Event) -> DensityMatrix:
    """Diagonal density matrix of the classical event S."""
    p_s = _event_prob_checked(S)
    a = np.zeros((S.space.n, S.space.n))
    for i in S.indices:
        a[i, i] = S.space.probs[i] / p_s
    return DensityMatrix(S.space, a)


def rho_sigma(S: Event) -> DensityMatrix:
    """Pure density matrix of the superposition event on S.

    Entry (i, k) is sqrt(p_i p_k) / Pr(S) for i, k in S. The diagonal is
    written as p_i / Pr(S) so it agrees bit-for-bit with :func:`rho_delta`.
    """
    p_s = _event_prob_checked(S)
    probs = S.space.probs
    idx = S.indices
    a = np.zeros((S.space.n, S.space.n))
    for i in idx:
        a[i, i] = probs[i] / p_s
        for k in idx:
            if k > i:
                a[i, k] = a[k, i] = math.sqrt(probs[i] * probs[k]) / p_s
    return DensityMatrix(S.space, a)


def rho_partition(pi: Partition) -> DensityMatrix:
    """Mixture of the block superposition matrices, weighted by block probability.

    For a partition restricted to a subset S the weights are Pr(B ∩ S)/Pr(S).
    """
    weights = pi.block_probabilities()
    a = np.zeros((pi.space.n, pi.space.n))
    for w, block in zip(weights, pi.blocks):
        if w > 0:
            a += w * rho_sigma(block).entries
    return DensityMatrix(pi.space, a)


def mix(weights: Sequence[float], matrices: Sequence[DensityMatrix]) -> DensityMatrix:
    """Convex combination of density matrices over one space."""
    weights = [float(w) for w in weights]
    if len(weights) != len(matrices) or not matrices:
        raise ValidationError("need one weight per matrix and at least one matrix")
    if any(w < 0 or not math.isfinite(w) for w in weights):
        raise NormalizationError("mixture weights must be non-negative")
    if abs(math.fsum(weights) - 1.0) > PROB_TOL:
        raise NormalizationError(f"mixture weights sum to {math.fsum(weights)!r}")
    space = matrices[0].space
    for m in matrices[1:]:
        try:
            _check_same_space(space, m.space)
        except SpaceMismatchError:
            raise SpaceMismatchError("cannot mix matrices over different spaces") from None
    a = np.zeros((space.n, space.n))
    for w, m in zip(weights, matrices):
        if w:
            a += w * m.entries
    return DensityMatrix(space, a)


def is_pure(rho: DensityMatrix, tol: float = MATRIX_TOL) -> bool:
    """True iff ρ² = ρ; cross-checked against tr[ρ²] = 1."""
    a = rho.entries
    by_square = float(np.max(np.abs(a @ a - a))) <= tol
    by_trace = abs(rho.purity() - 1.0) <= tol
    if by_square != by_trace:
        raise InternalConsistencyError(
            f"purity tests disagree: max|ρ²-ρ| test says {by_square}, tr[ρ²] test says {by_trace}"
        )
    return by_square

"""Projective measurement: trace-rule probabilities and the Lüders mixture."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import MATRIX_TOL, DensityMatrix, rho_sigma
from .errors import DensityMatrixError, NullIntersectionError, PartitionError
from .outcomes import Event, OutcomeSpace, Partition, RandomVariable, _check_same_space, event_probability

# Outcomes at or below this probability are not reported by measure().
NEGLIGIBLE_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class ProjectionMatrix:
    """Diagonal 0/1 projector onto the outcomes of an event."""

    space: OutcomeSpace
    mask: int

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([float((self.mask >> i) & 1) for i in range(self.space.n)])

    @property
    def entries(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def apply(self, rho: DensityMatrix) -> np.ndarray:
        """P ρ P (not renormalized). Entries outside the block are set to exact zeros."""
        _check_same_space(self.space, rho.space)
        d = self.diagonal
        return rho.entries * np.outer(d, d)


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    value: float
    probability: float
    post_state: DensityMatrix


def projection(T: Event) -> ProjectionMatrix:
    return ProjectionMatrix(T.space, T.members)


def _clamped_probability(x: float, what: str) -> float:
    if x < -MATRIX_TOL or x > 1 + MATRIX_TOL:
        raise DensityMatrixError(f"{what} evaluated to {x!r}, outside [0, 1]")
    return min(1.0, max(0.0, x))


def _block_trace(mask: int, rho: DensityMatrix) -> float:
    diag = np.diag(rho.entries)
    return math.fsum(diag[i] for i in range(rho.n) if (mask >> i) & 1)


def prob_given(T: Event, rho: DensityMatrix) -> float:
    """Pr(T | ρ) = tr[P_T ρ]."""
    _check_same_space(T.space, rho.space)
    return _clamped_probability(_block_trace(T.members, rho), "tr[P_T ρ]")


def project_superposition(S: Event, T: Event) -> tuple[float, DensityMatrix]:
    """Project ρ(ΣS) onto T.

    Returns ``(Pr(T∩S)/Pr(S), ρ(Σ(T∩S)))``; the unnormalized ``P_T ρ(ΣS) P_T``
    equals their product.
    """
    _check_same_space(S.space, T.space)
    both = S.intersect(T)
    if both is None or event_probability(both) <= 0:
        raise NullIntersectionError(f"{T!r} has probability zero given {S!r}")
    p = _clamped_probability(event_probability(both) / event_probability(S), "Pr(T∩S)/Pr(S)")
    return p, rho_sigma(both)


def luders(rho: DensityMatrix, pi: Partition) -> DensityMatrix:
    """Non-selective measurement: sum over blocks of P_B ρ P_B."""
    _check_same_space(rho.space, pi.space)
    a = np.zeros_like(rho.entries)
    for block in pi.blocks:
        a += projection(block).apply(rho)
    if pi.carrier != pi.space.full_mask:
        # P_B only sum to the identity on the carrier; ρ must live there.
        lost = 1.0 - math.fsum(np.diag(a))
        if abs(lost) > MATRIX_TOL:
            raise PartitionError("state has weight outside the partition's carrier set")
    return DensityMatrix(rho.space, a)


def measure(rho: DensityMatrix, f: RandomVariable) -> list[MeasurementOutcome]:
    """Outcomes of measuring ``f`` on ``rho`` in ascending order of value.

    Post-states are the normalized P_B ρ P_B. Values with probability at or
    below ``NEGLIGIBLE_PROB`` are omitted.
    """
    _check_same_space(rho.space, f.space)
    outcomes = []
    for value, block in f.level_sets():
        p = prob_given(block, rho)
        if p <= NEGLIGIBLE_PROB:
            continue
        projected = projection(block).apply(rho)
        raw_trace = math.fsum(np.diag(projected))
        outcomes.append(MeasurementOutcome(value, p, DensityMatrix(rho.space, projected / raw_trace)))
    return outcomes


def observable(f: RandomVariable) -> np.ndarray:
    """Diagonal matrix carrying the values of ``f``."""
    return np.diag(np.array(f.values, dtype=float))


def expectation(rho: DensityMatrix, f: RandomVariable) -> float:
    """tr[O_f ρ] = Σ f(u_i) ρ_ii."""
    _check_same_space(rho.space, f.space)
    return math.fsum(v * d for v, d in zip(f.values, np.diag(rho.entries)))

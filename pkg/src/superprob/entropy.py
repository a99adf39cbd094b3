"""Logical entropy of distributions, partitions and density matrices.

Logical entropy is 1 - Σ q_j²: the chance that two independent draws are
distinguished. No logarithms appear anywhere here.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .density import MATRIX_TOL, DensityMatrix
from .errors import InternalConsistencyError, NormalizationError
from .measurement import luders
from .outcomes import PROB_TOL, Partition


@dataclass(frozen=True)
class EntropyReport:
    before: float
    after: float
    created: float
    zeroed_square_sum: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def logical_entropy_distribution(q: Sequence[float]) -> float:
    q = [float(x) for x in q]
    if not q or any(x < 0 or not math.isfinite(x) for x in q):
        raise NormalizationError("a distribution needs non-negative entries")
    if abs(math.fsum(q) - 1.0) > PROB_TOL:
        raise NormalizationError(f"distribution sums to {math.fsum(q)!r}")
    return max(0.0, 1.0 - math.fsum(x * x for x in q))


def logical_entropy_partition(pi: Partition) -> float:
    """h(π) = 1 - Σ Pr(B)², block probabilities taken relative to the carrier."""
    return logical_entropy_distribution(pi.block_probabilities())


def logical_entropy_density(rho: DensityMatrix) -> float:
    """h(ρ) = 1 - tr[ρ²]."""
    return max(0.0, 1.0 - rho.purity())


def measurement_entropy_report(rho_before: DensityMatrix, pi: Partition) -> EntropyReport:
    """Entropy created by the Lüders mixture of ``rho_before`` under ``pi``.

    ``zeroed_square_sum`` is Σρ_before² - Σρ_after² over all entries: the
    squares of the off-diagonal entries the measurement zeroes. It must equal
    the created entropy.
    """
    rho_after = luders(rho_before, pi)
    before = logical_entropy_density(rho_before)
    after = logical_entropy_density(rho_after)
    zeroed = rho_before.purity() - rho_after.purity()
    report = EntropyReport(before, after, after - before, zeroed)
    if abs(report.created - report.zeroed_square_sum) > MATRIX_TOL:
        raise InternalConsistencyError(
            f"created entropy {report.created!r} != zeroed square sum {report.zeroed_square_sum!r}"
        )
    return report

"""Finite probability with superposition events, via real density matrices."""

from .density import (
    DensityMatrix,
    StateVector,
    is_pure,
    ket_of_event,
    mix,
    rho_delta,
    rho_partition,
    rho_sigma,
)
from .entropy import (
    EntropyReport,
    logical_entropy_density,
    logical_entropy_distribution,
    logical_entropy_partition,
    measurement_entropy_report,
)
from .measurement import (
    MeasurementOutcome,
    ProjectionMatrix,
    expectation,
    luders,
    measure,
    prob_given,
    project_superposition,
    projection,
)
from .outcomes import (
    Event,
    OutcomeSpace,
    Partition,
    RandomVariable,
    conditional_probability,
    equiprobable,
    event_probability,
    make_outcome_space,
    partition_of,
    restrict_partition,
)

__version__ = "0.1.0"

"""Finite outcome spaces, events, partitions and random variables.

Events are stored as integer bitmasks over outcome indices: bit ``i`` is set
iff outcome ``i`` (in label order) belongs to the event. The label order of an
:class:`OutcomeSpace` is the row/column order of every matrix built on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConditioningOnNullError,
    DuplicateLabelError,
    EmptyEventError,
    NegativeProbabilityError,
    NormalizationError,
    PartitionError,
    SpaceMismatchError,
    UnknownLabelError,
    ValidationError,
)

PROB_TOL = 1e-12


def iter_bits(mask: int) -> Iterable[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class OutcomeSpace:
    labels: tuple[str, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)
        if not labels:
            raise ValidationError("an outcome space needs at least one outcome")
        if len(labels) != len(probs):
            raise ValidationError(f"{len(labels)} labels but {len(probs)} probabilities")
        if any(not lab for lab in labels):
            raise ValidationError("outcome labels must be non-empty strings")
        seen = set()
        for lab in labels:
            if lab in seen:
                raise DuplicateLabelError(f"duplicate outcome label {lab!r}")
            seen.add(lab)
        for lab, p in zip(labels, probs):
            if not math.isfinite(p) or p < 0:
                raise NegativeProbabilityError(f"probability of {lab!r} is {p}")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise NormalizationError(f"probabilities sum to {total!r}, not 1")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"unknown outcome label {label!r}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return mask

    def mask_probability(self, mask: int) -> float:
        if mask == self.full_mask:
            return 1.0
        return math.fsum(self.probs[i] for i in iter_bits(mask))

    def event(self, labels: Iterable[str]) -> Event:
        return Event(self, self.mask_of(labels))

    def universe(self) -> Event:
        return Event(self, self.full_mask)

    def singleton(self, label: str) -> Event:
        return self.event([label])

    def discrete_partition(self) -> Partition:
        return Partition(self, tuple(Event(self, 1 << i) for i in range(self.n)))

    def indiscrete_partition(self) -> Partition:
        return Partition(self, (self.universe(),))

    def partition(self, blocks: Iterable[Iterable[str]]) -> Partition:
        return Partition(self, tuple(self.event(b) for b in blocks))

    def variable(self, values: Mapping[str, float]) -> RandomVariable:
        missing = [lab for lab in self.labels if lab not in values]
        if missing:
            raise ValidationError(f"random variable has no value for {missing}")
        for lab in values:
            self.index(lab)
        return RandomVariable(self, tuple(float(values[lab]) for lab in self.labels))


def make_outcome_space(labels: Sequence[str], probs: Sequence[float]) -> OutcomeSpace:
    return OutcomeSpace(tuple(labels), tuple(probs))


def equiprobable(labels: Sequence[str]) -> OutcomeSpace:
    n = len(labels)
    return OutcomeSpace(tuple(labels), (1.0 / n,) * n if n else ())


@dataclass(frozen=True)
class Event:
    space: OutcomeSpace
    members: int

    def __post_init__(self) -> None:
        if self.members == 0:
            raise EmptyEventError("events must be non-empty")
        if self.members < 0 or self.members > self.space.full_mask:
            raise ValidationError(f"bitmask {self.members:#x} outside a space of {self.space.n} outcomes")

    def __contains__(self, label: str) -> bool:
        return self.indicator(self.space.index(label)) == 1

    def __len__(self) -> int:
        return bin(self.members).count("1")

    def indicator(self, i: int) -> int:
        return (self.members >> i) & 1

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.members))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in iter_bits(self.members))

    @property
    def probability(self) -> float:
        return event_probability(self)

    def intersect(self, other: Event) -> Event | None:
        """Intersection, or ``None`` when it is empty."""
        _check_same_space(self.space, other.space)
        mask = self.members & other.members
        return Event(self.space, mask) if mask else None

    def issubset(self, other: Event) -> bool:
        return self.members & ~other.members == 0

    def __repr__(self) -> str:
        return "Event({" + ", ".join(self.labels) + "})"


@dataclass(frozen=True)
class Partition:
    """Blocks partitioning ``carrier`` (the whole space unless restricted)."""

    space: OutcomeSpace
    blocks: tuple[Event, ...]
    carrier: int = -1

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.carrier == -1:
            object.__setattr__(self, "carrier", self.space.full_mask)
        if not blocks:
            raise PartitionError("a partition needs at least one block")
        seen = 0
        for b in blocks:
            _check_same_space(self.space, b.space)
            if seen & b.members:
                raise PartitionError(f"block {b!r} overlaps an earlier block")
            seen |= b.members
        if seen != self.carrier:
            raise PartitionError("blocks do not cover the carrier set")

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    @property
    def carrier_event(self) -> Event:
        return Event(self.space, self.carrier)

    def block_probabilities(self) -> list[float]:
        """Block probabilities relative to the carrier set."""
        total = self.space.mask_probability(self.carrier)
        if total <= 0:
            raise ConditioningOnNullError("carrier set has probability zero")
        if self.carrier == self.space.full_mask:
            return [event_probability(b) for b in self.blocks]
        return [event_probability(b) / total for b in self.blocks]

    def as_label_sets(self) -> list[list[str]]:
        return [list(b.labels) for b in self.blocks]

    def __repr__(self) -> str:
        inner = ", ".join("{" + ", ".join(b.labels) + "}" for b in self.blocks)
        return f"Partition({inner})"


@dataclass(frozen=True)
class RandomVariable:
    space: OutcomeSpace
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.space.n:
            raise ValidationError("a random variable needs one value per outcome")

    def __call__(self, label: str) -> float:
        return self.values[self.space.index(label)]

    def level_sets(self) -> list[tuple[float, Event]]:
        """``(value, preimage)`` pairs in ascending order of value."""
        masks: dict[float, int] = {}
        for i, v in enumerate(self.values):
            masks[v] = masks.get(v, 0) | (1 << i)
        return [(v, Event(self.space, masks[v])) for v in sorted(masks)]


def _check_same_space(a: OutcomeSpace, b: OutcomeSpace) -> None:
    if a is not b and a != b:
        raise SpaceMismatchError("operands live on different outcome spaces")


def event_probability(S: Event) -> float:
    return S.space.mask_probability(S.members)


def conditional_probability(T: Event, S: Event) -> float:
    """Pr(T | S) = Pr(S ∩ T) / Pr(S)."""
    _check_same_space(T.space, S.space)
    p_s = event_probability(S)
    if p_s <= 0:
        raise ConditioningOnNullError(f"cannot condition on {S!r}: probability zero")
    both = T.members & S.members
    if not both:
        return 0.0
    if both == S.members:
        return 1.0
    return min(1.0, S.space.mask_probability(both) / p_s)


def partition_of(f: RandomVariable) -> Partition:
    """Partition of the space into the level sets of ``f``, by ascending value."""
    return Partition(f.space, tuple(ev for _, ev in f.level_sets()))


def restrict_partition(pi: Partition, S: Event) -> Partition:
    """The non-empty blocks ``B ∩ S``, as a partition of ``S``."""
    _check_same_space(pi.space, S.space)
    if event_probability(S) <= 0:
        raise ConditioningOnNullError(f"cannot restrict to {S!r}: probability zero")
    if S.members & ~pi.carrier:
        raise PartitionError("event is not contained in the partition's carrier")
    blocks = [b.intersect(S) for b in pi.blocks]
    return Partition(pi.space, tuple(b for b in blocks if b is not None), S.members)

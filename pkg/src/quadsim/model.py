"""Field geometry, quadrant partition, and the sensor node population.

The field is an axis-aligned rectangle split into four equal quadrants at
its midpoint. Quadrant membership uses a half-open rule: a coordinate
strictly below the midpoint belongs to the low quadrant, at or above the
midpoint to the high one, so every in-field point lands in exactly one
quadrant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, DomainError


class Position(NamedTuple):
    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.dist(self, other)


class QuadrantId(enum.IntEnum):
    """The four quadrants: A1 low-x/low-y, A2 high-x/low-y, A3 low-x/high-y, A4 high-x/high-y."""

    A1 = 0
    A2 = 1
    A3 = 2
    A4 = 3

    @property
    def label(self) -> str:
        return self.name


class Role(enum.Enum):
    MEMBER = "member"
    CLUSTER_HEAD = "cluster_head"


@dataclass(frozen=True)
class FieldSpec:
    """Rectangular deployment field, dimensions in meters."""

    width: float = 100.0
    height: float = 100.0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ConfigurationError(
                f"field dimensions must be positive, got {self.width}x{self.height}"
            )

    def contains(self, p: Position) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x0, x1) x [y0, y1), closed on the field's outer edges."""

    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


@dataclass(frozen=True)
class FieldPartition:
    """The four equal quadrant rectangles of a field, split at its midpoint."""

    field_spec: FieldSpec

    @cached_property
    def quadrants(self) -> dict[QuadrantId, Rect]:
        w, h = self.field_spec.width, self.field_spec.height
        mx, my = w / 2.0, h / 2.0
        return {
            QuadrantId.A1: Rect(0.0, 0.0, mx, my),
            QuadrantId.A2: Rect(mx, 0.0, w, my),
            QuadrantId.A3: Rect(0.0, my, mx, h),
            QuadrantId.A4: Rect(mx, my, w, h),
        }

    @property
    def midpoint(self) -> Position:
        return Position(self.field_spec.width / 2.0, self.field_spec.height / 2.0)

    def quadrant_of(self, p: Position) -> QuadrantId:
        """Return the unique quadrant containing ``p`` (half-open boundary rule)."""
        if not self.field_spec.contains(p):
            raise DomainError(f"position {p} is outside the {self.field_spec}")
        mx, my = self.midpoint
        high_x = p.x >= mx
        high_y = p.y >= my
        if high_y:
            return QuadrantId.A4 if high_x else QuadrantId.A3
        return QuadrantId.A2 if high_x else QuadrantId.A1


def partition_field(field_spec: FieldSpec) -> FieldPartition:
    """Split a field into its four equal quadrants."""
    return FieldPartition(field_spec)


@dataclass
class Node:
    """One sensor node. ``eligible`` tracks membership in the election pool
    for the current epoch; ``alive`` is equivalent to ``energy > 0``."""

    id: int
    position: Position
    energy: float
    quadrant: QuadrantId
    alive: bool = True
    eligible: bool = True
    role: Role = Role.MEMBER


def deploy_nodes(
    n: int,
    field_spec: FieldSpec,
    seed: int | np.random.SeedSequence | np.random.Generator,
    initial_energy: float = 0.5,
) -> list[Node]:
    """Place ``n`` nodes uniformly at random over the field.

    Positions are drawn as one (n, 2) block from a PCG64 stream, so a given
    seed reproduces the same deployment on any platform. Node ids run 0..n-1
    in draw order.
    """
    if n < 1:
        raise ConfigurationError(f"node count must be >= 1, got {n}")
    if initial_energy <= 0:
        raise ConfigurationError(f"initial energy must be positive, got {initial_energy}")
    rng = np.random.default_rng(seed)
    part = partition_field(field_spec)
    coords = rng.random((n, 2))
    nodes = []
    for i in range(n):
        pos = Position(float(coords[i, 0]) * field_spec.width,
                       float(coords[i, 1]) * field_spec.height)
        nodes.append(Node(id=i, position=pos, energy=initial_energy,
                          quadrant=part.quadrant_of(pos)))
    return nodes

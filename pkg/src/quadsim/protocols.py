"""Per-round setup-phase logic: cluster-head election, member association,
and TDMA schedule construction.

Two protocols share one interface. The quadrant-partitioned variant elects
heads independently inside each quadrant with a per-quadrant cap and lets
members associate only within their own quadrant; the classic variant runs
the same threshold election network-wide, uncapped, and members may join
any head.

Election is a pure function of the round state and the RNG stream: every
alive, epoch-eligible node draws one uniform number, in ascending id order.
Callers apply the side effects (marking heads, shrinking the pool).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError
from .model import FieldPartition, Node, QuadrantId

PROTOCOL_NAMES = ("qleach", "leach")
# Cited in the literature but their election rules are not specified here;
# the registry rejects them with a pointer to the plugin seam.
KNOWN_UNIMPLEMENTED = ("sep", "deec")


@dataclass(frozen=True)
class ElectionParams:
    """Election knobs: head probability ``p`` per round, the epoch length
    (defaults to round(1/p) rounds), and the per-quadrant head cap."""

    p: float = 0.05
    epoch_len: int | None = None  # None derives round(1/p)
    per_area_cap: int = 2

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ConfigurationError(f"election probability must be in (0, 1), got {self.p}")
        if self.epoch_len is None:
            object.__setattr__(self, "epoch_len", max(1, round(1.0 / self.p)))
        if self.epoch_len < 1:
            raise ConfigurationError(f"epoch length must be >= 1, got {self.epoch_len}")
        if self.per_area_cap < 1:
            raise ConfigurationError(f"per-quadrant head cap must be >= 1, got {self.per_area_cap}")


def default_per_area_cap(n_nodes: int, p: float) -> int:
    """Expected head count n*p split evenly over the four quadrants, rounded up."""
    return max(1, math.ceil(n_nodes * p / 4.0))


def leach_threshold(p: float, r: int, eligible: bool, epoch_len: int | None = None) -> float:
    """Election threshold T for an individual node in round ``r``.

    Nodes outside the current epoch's pool never elect (T = 0). For pool
    members, T = p / (1 - p * (r mod epoch_len)), clamped to [0, 1]; the
    clamp makes the final round of an epoch elect every remaining pool
    member with certainty.
    """
    if not 0.0 < p < 1.0:
        raise ConfigurationError(f"election probability must be in (0, 1), got {p}")
    if r < 0:
        raise ConfigurationError(f"round index must be >= 0, got {r}")
    if not eligible:
        return 0.0
    if epoch_len is None:
        epoch_len = max(1, round(1.0 / p))
    denom = 1.0 - p * (r % epoch_len)
    if denom <= 0.0:
        return 1.0
    return min(max(p / denom, 0.0), 1.0)


@dataclass
class RoundContext:
    """Everything an election needs for one round: the round index, the
    protocol RNG stream, the node views, and the field partition."""

    r: int
    rng: np.random.Generator
    nodes: Sequence[Node]
    partition: FieldPartition


def _threshold_election(
    ctx: RoundContext,
    params: ElectionParams,
    cap_key: Callable[[Node], object] | None,
    cap: int,
) -> list[int]:
    """One pass over alive pool members in id order; each draws once.

    A node becomes head iff its draw is at or below its threshold and the
    head count in its cap bucket has not reached ``cap``. Blocked nodes
    stay in the pool. Draws come from one block request so the stream is
    identical to per-node scalar draws.
    """
    candidates = sorted((n for n in ctx.nodes if n.alive and n.eligible), key=lambda n: n.id)
    if not candidates:
        return []
    t = leach_threshold(params.p, ctx.r, True, params.epoch_len)
    draws = ctx.rng.random(len(candidates))
    heads: list[int] = []
    counts: dict[object, int] = {}
    for node, temp in zip(candidates, draws):
        if temp > t:
            continue
        bucket = cap_key(node) if cap_key is not None else None
        if counts.get(bucket, 0) >= cap:
            continue
        counts[bucket] = counts.get(bucket, 0) + 1
        heads.append(node.id)
    return heads


def elect_cluster_heads_qleach(ctx: RoundContext, params: ElectionParams) -> list[int]:
    """Quadrant-partitioned election: the threshold draw runs per node as in
    the classic scheme, but at most ``per_area_cap`` heads may emerge from
    each quadrant per round."""
    return _threshold_election(ctx, params, lambda n: n.quadrant, params.per_area_cap)


def elect_cluster_heads_leach(ctx: RoundContext, params: ElectionParams) -> list[int]:
    """Network-wide threshold election with no cap."""
    return _threshold_election(ctx, params, None, len(ctx.nodes) + 1)


@dataclass
class Cluster:
    """One head and its associated members (head excluded), with the
    quadrant tag in quadrant-local mode."""

    head: int
    members: list[int] = field(default_factory=list)
    quadrant: QuadrantId | None = None


@dataclass(frozen=True)
class TdmaSchedule:
    """Guaranteed slot assignment for a cluster: one slot per member per frame."""

    cluster: Cluster
    slot_order: tuple[int, ...]

    @property
    def slots_per_frame(self) -> int:
        return len(self.slot_order)


def build_tdma_schedule(cluster: Cluster) -> TdmaSchedule:
    """Assign slots in ascending member id order."""
    return TdmaSchedule(cluster=cluster, slot_order=tuple(sorted(cluster.members)))


def associate_members(
    members: Sequence[Node],
    heads: Sequence[Node],
    quadrant_local: bool,
) -> tuple[list[Cluster], list[int]]:
    """Attach each member to its closest audible head.

    Candidates are the heads in the member's own quadrant when
    ``quadrant_local``, otherwise all heads. Closest means maximal RSSI,
    which for any strictly distance-decreasing RSSI is the minimal
    Euclidean distance; ties break toward the lower head id. Members with
    no candidate head are returned separately for the caller's fallback
    handling.

    Returns (clusters ordered by head id, unclustered member ids).
    """
    by_quadrant: dict[QuadrantId, list[Node]] = {}
    for h in heads:
        by_quadrant.setdefault(h.quadrant, []).append(h)

    clusters: dict[int, Cluster] = {
        h.id: Cluster(head=h.id, quadrant=h.quadrant if quadrant_local else None)
        for h in heads
    }
    unclustered: list[int] = []
    all_heads = list(heads)
    for m in members:
        candidates = by_quadrant.get(m.quadrant, ()) if quadrant_local else all_heads
        if not candidates:
            unclustered.append(m.id)
            continue
        best = min(candidates, key=lambda h: (m.position.distance_to(h.position), h.id))
        clusters[best.id].members.append(m.id)
    return [clusters[hid] for hid in sorted(clusters)], unclustered


@dataclass(frozen=True)
class Protocol:
    """Protocol behavior bundle: how heads are elected and how far
    advertisement/association reach (own quadrant vs whole network)."""

    name: str
    quadrant_local: bool
    elect: Callable[[RoundContext, ElectionParams], list[int]]


QLEACH = Protocol(name="qleach", quadrant_local=True, elect=elect_cluster_heads_qleach)
LEACH = Protocol(name="leach", quadrant_local=False, elect=elect_cluster_heads_leach)

_REGISTRY = {p.name: p for p in (QLEACH, LEACH)}


def get_protocol(name: str) -> Protocol:
    """Look up a protocol by name; unknown names raise with the valid list."""
    key = name.strip().lower()
    if key in _REGISTRY:
        return _REGISTRY[key]
    if key in KNOWN_UNIMPLEMENTED:
        raise ConfigurationError(
            f"protocol {name!r} is not implemented; only its plugin seam exists. "
            f"Available protocols: {', '.join(PROTOCOL_NAMES)}"
        )
    raise ConfigurationError(
        f"unknown protocol {name!r}; valid names: {', '.join(PROTOCOL_NAMES)}"
    )

"""Round-driving engine: setup phase (election, advertisement, association,
join and schedule traffic), steady-state phase (member frames, aggregation,
forwarding to the base station), death bookkeeping, and trace emission.

Charging rules: a node pays a cost only while alive. An action the node can
fully afford is paid exactly; an action it cannot afford does not happen
(no packet is produced) and the attempt drains the node to zero, killing it
on the spot. A node that pays its whole residual on an affordable action
dies at zero after the action completes, so a transmission paid in full is
always delivered. Every joule drained anywhere is accumulated into the
round's charged-energy ledger, which the traces expose for conservation
checks.

Fallback: alive nodes that end association with no reachable cluster head
(their quadrant elected none, or no head survived advertising) send their
frame straight to the base station that round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .model import FieldSpec, Node, Role, deploy_nodes, partition_field
from .protocols import (
    Cluster,
    ElectionParams,
    Protocol,
    RoundContext,
    TdmaSchedule,
    associate_members,
    build_tdma_schedule,
    get_protocol,
)
from .radio import PacketSpec, RadioModel

RNG_ALGORITHM = "numpy-pcg64"
RNG_STREAMS = "SeedSequence(seed).spawn(2): stream 0 deployment, stream 1 protocol"


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one run; two equal configs with equal seeds
    produce identical traces."""

    n_nodes: int = 100
    field_spec: FieldSpec = field(default_factory=FieldSpec)
    initial_energy: float = 0.5
    election: ElectionParams = field(default_factory=ElectionParams)
    radio: RadioModel = field(default_factory=RadioModel)
    packets: PacketSpec = field(default_factory=PacketSpec)
    protocol: str = "qleach"
    max_rounds: int = 5000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ConfigurationError(f"n_nodes must be >= 1, got {self.n_nodes}")
        if self.initial_energy <= 0:
            raise ConfigurationError(f"initial_energy must be positive, got {self.initial_energy}")
        if self.max_rounds < 1:
            raise ConfigurationError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must fit in an unsigned 64-bit int, got {self.seed}")
        get_protocol(self.protocol)


@dataclass(frozen=True)
class RoundTrace:
    """Observable outcome of one round."""

    r: int
    alive: int
    ch_ids: tuple[int, ...]
    packets_to_bs: int
    packets_to_chs: int
    energy_remaining: float
    alive_per_quadrant: tuple[int, int, int, int]
    deaths: tuple[int, ...]
    energy_charged: float


@dataclass(frozen=True)
class SimulationResult:
    """Config echo, the full per-round trace, and lifetime summary values.

    ``fnd``/``lnd`` are the rounds of the first and last node death; when a
    run reaches ``max_rounds`` without the corresponding death, the value is
    censored at ``max_rounds`` and flagged.
    """

    config: SimulationConfig
    traces: tuple[RoundTrace, ...]
    fnd: int
    fnd_censored: bool
    lnd: int
    lnd_censored: bool
    total_packets_bs: int
    total_packets_chs: int
    total_energy_charged: float

    @property
    def rounds_run(self) -> int:
        return len(self.traces)


class Simulation:
    """Mutable state of one run, advanced one round at a time.

    ``clusters``, ``fallback_ids``, and ``schedules`` expose the structures
    built by the most recent round for inspection.
    """

    def __init__(self, config: SimulationConfig):
        self.config = config
        self.protocol: Protocol = get_protocol(config.protocol)
        master = np.random.SeedSequence(config.seed)
        deploy_seed, protocol_seed = master.spawn(2)
        self.partition = partition_field(config.field_spec)
        self.nodes = deploy_nodes(
            config.n_nodes, config.field_spec, deploy_seed, config.initial_energy
        )
        self.rng = np.random.default_rng(protocol_seed)
        self.r = 0
        self.alive_count = config.n_nodes
        self.clusters: list[Cluster] = []
        self.fallback_ids: list[int] = []
        self.schedules: list = []
        # Positions never change; precompute pair and base-station distances.
        xy = np.array([n.position for n in self.nodes])
        diff = xy[:, None, :] - xy[None, :, :]
        self._dist = np.sqrt((diff**2).sum(axis=2)).tolist()
        bs = np.array(config.radio.bs_position)
        self._dist_bs = np.sqrt(((xy - bs) ** 2).sum(axis=1)).tolist()

    def run_round(self) -> RoundTrace:
        """Execute one full round and append nothing; returns its trace."""
        if self.alive_count == 0:
            raise ConfigurationError("cannot run a round with no alive nodes")
        cfg = self.config
        params: ElectionParams = cfg.election
        radio: RadioModel = cfg.radio
        nodes = self.nodes
        dist = self._dist
        r = self.r
        ctrl_bits = cfg.packets.ctrl_bits
        data_bits = cfg.packets.data_bits
        rx_ctrl = radio.rx_cost(ctrl_bits)
        rx_data = radio.rx_cost(data_bits)

        deaths: list[int] = []
        charged = 0.0

        def charge(node: Node, cost: float) -> bool:
            """Debit ``cost`` if affordable (True); else drain and kill (False)."""
            nonlocal charged
            e = node.energy
            if cost <= e:
                e -= cost
                charged += cost
                node.energy = e
                if e <= 0.0:
                    node.energy = 0.0
                    node.alive = False
                    deaths.append(node.id)
                    self.alive_count -= 1
                return True
            charged += e
            node.energy = 0.0
            node.alive = False
            deaths.append(node.id)
            self.alive_count -= 1
            return False

        # (1) epoch boundary: reset the election pool to all alive nodes
        if r % params.epoch_len == 0:
            for n in nodes:
                if n.alive:
                    n.eligible = True

        for n in nodes:
            if n.alive:
                n.role = Role.MEMBER

        # (2) election
        ctx = RoundContext(r=r, rng=self.rng, nodes=nodes, partition=self.partition)
        ch_ids = self.protocol.elect(ctx, params)
        heads = [nodes[i] for i in ch_ids]
        for h in heads:
            h.role = Role.CLUSTER_HEAD
            h.eligible = False

        # (3) advertisement: each head broadcasts far enough to reach the
        # farthest alive node in its scope (own quadrant, or whole network);
        # members then debit one reception per ad that went out in their scope.
        quadrant_local = self.protocol.quadrant_local
        audible: list[Node] = []  # ads that were fully transmitted
        for h in heads:
            if quadrant_local:
                scope = [n for n in nodes if n.alive and n.quadrant == h.quadrant]
            else:
                scope = [n for n in nodes if n.alive]
            drow = dist[h.id]
            d_max = max(drow[s.id] for s in scope) if scope else 0.0
            if charge(h, radio.tx_cost(ctrl_bits, d_max)):
                audible.append(h)

        if audible:
            if quadrant_local:
                ads_in_quadrant = [0, 0, 0, 0]
                for h in audible:
                    ads_in_quadrant[h.quadrant] += 1
            n_ads_total = len(audible)
            for n in nodes:
                if not n.alive or n.role is Role.CLUSTER_HEAD:
                    continue
                k = ads_in_quadrant[n.quadrant] if quadrant_local else n_ads_total
                if k:
                    charge(n, k * rx_ctrl)  # one debit for all audible ads

        # (4) association: alive members attach to the nearest live head
        # whose ad they heard; the rest fall back to direct base-station use.
        candidates = [h for h in audible if h.alive]
        members = [n for n in nodes if n.alive and n.role is Role.MEMBER]
        from .protocols import associate_members  # local import avoids cycle at module load

        self.clusters, self.fallback_ids = associate_members(
            members, candidates, quadrant_local
        )

        # (5) join messages: member unicasts to its head; the head debits all
        # receptions of fully transmitted joins as one charge.
        for cluster in self.clusters:
            head = nodes[cluster.head]
            drow = dist[cluster.head]
            joins_received = 0
            for mid in cluster.members:
                m = nodes[mid]
                if m.alive and charge(m, radio.tx_cost(ctrl_bits, drow[mid])):
                    joins_received += 1
            if joins_received and head.alive:
                charge(head, joins_received * rx_ctrl)

        # (6) TDMA schedule: broadcast to the cluster's alive members, who
        # each debit one reception. A cluster whose head is dead, or whose
        # schedule broadcast fails, stays silent this round (its members
        # never get slots and keep their radios off).
        self.schedules = []
        active: list[tuple[Cluster, tuple[int, ...]]] = []
        for cluster in self.clusters:
            head = nodes[cluster.head]
            if not head.alive:
                continue
            schedule = build_tdma_schedule(cluster)
            alive_members = [mid for mid in schedule.slot_order if nodes[mid].alive]
            if alive_members:
                drow = dist[cluster.head]
                d_max = max(drow[mid] for mid in alive_members)
                if not charge(head, radio.tx_cost(ctrl_bits, d_max)):
                    continue
                for mid in alive_members:
                    charge(nodes[mid], rx_ctrl)
            self.schedules.append(schedule)
            active.append((cluster, schedule.slot_order))

        # (7) steady state: members transmit one frame each in slot order;
        # the head receives what it is alive to receive, fuses the received
        # frames plus its own, and forwards one packet to the base station.
        packets_to_chs = 0
        packets_to_bs = 0
        dist_bs = self._dist_bs
        for cluster, slot_order in active:
            head = nodes[cluster.head]
            drow = dist[cluster.head]
            frames = 0
            for mid in slot_order:
                m = nodes[mid]
                if not m.alive:
                    continue
                sent = charge(m, radio.tx_cost(data_bits, drow[mid]))
                if sent and head.alive and charge(head, rx_data):
                    frames += 1
            if not head.alive:
                continue
            packets_to_chs += frames
            if charge(head, radio.aggregation_cost(data_bits, frames + 1)):
                if charge(head, radio.tx_cost(data_bits, dist_bs[cluster.head])):
                    packets_to_bs += 1

        for nid in self.fallback_ids:
            n = nodes[nid]
            if n.alive and charge(n, radio.tx_cost(data_bits, dist_bs[nid])):
                packets_to_bs += 1

        # (8)-(9) bookkeeping and trace
        alive_per_quadrant = [0, 0, 0, 0]
        energy_remaining = 0.0
        for n in nodes:
            if n.alive:
                alive_per_quadrant[n.quadrant] += 1
                energy_remaining += n.energy
        trace = RoundTrace(
            r=r,
            alive=self.alive_count,
            ch_ids=tuple(ch_ids),
            packets_to_bs=packets_to_bs,
            packets_to_chs=packets_to_chs,
            energy_remaining=energy_remaining,
            alive_per_quadrant=tuple(alive_per_quadrant),
            deaths=tuple(deaths),
            energy_charged=charged,
        )
        self.r += 1
        return trace


def run_simulation(config: SimulationConfig) -> SimulationResult:
    """Run rounds until every node is dead or ``max_rounds`` is reached."""
    sim = Simulation(config)
    traces: list[RoundTrace] = []
    while sim.r < config.max_rounds and sim.alive_count > 0:
        traces.append(sim.run_round())

    max_rounds = config.max_rounds
    fnd, fnd_censored = max_rounds, True
    for t in traces:
        if t.deaths:
            fnd, fnd_censored = t.r, False
            break
    if traces and traces[-1].alive == 0:
        lnd, lnd_censored = traces[-1].r, False
    else:
        lnd, lnd_censored = max_rounds, True

    return SimulationResult(
        config=config,
        traces=tuple(traces),
        fnd=fnd,
        fnd_censored=fnd_censored,
        lnd=lnd,
        lnd_censored=lnd_censored,
        total_packets_bs=sum(t.packets_to_bs for t in traces),
        total_packets_chs=sum(t.packets_to_chs for t in traces),
        total_energy_charged=sum(t.energy_charged for t in traces),
    )

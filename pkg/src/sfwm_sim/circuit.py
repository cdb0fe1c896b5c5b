"""Photonic circuit graphs: pump propagation and per-segment SFWM budgets.

A circuit is a small DAG of grating couplers, 2x2 splitters, phase shifters,
waveguide segments and ports.  Pump light is tracked as a list of pulses per
node, each pulse carrying one power per pump line plus accumulated delay and
phase.  Splitting is incoherent power bookkeeping: a 2x2 splitter with ratio
r sends r of an input-0 pulse to output 0 and 1-r to output 1 (and mirrored
for input 1); pulses arriving at a node with equal delays merge by adding
powers, while pulses separated in time stay distinct, so a segment behind an
unbalanced interferometer sees two delayed pulses at the per-pulse peak power
rather than their sum.

Each waveguide segment then contributes an SFWM biphoton spectrum evaluated
at its local peak pump powers, scaled by the power transmission from the
segment to the designated detection port (summed over paths).  Whether that
transmission hits the pair flux once (one shared loss element) or squared
(both photons traverse it independently) is declared per segment via
``pair_loss_exponent``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import inf

from scipy.constants import c as C_VACUUM

from .dispersion import PumpConfig, wavelength_from_angular_frequency
from .engine import (
    BiphotonSpectrum,
    SpectralGrid,
    WaveguideSpec,
    band_flux,
    biphoton_spectrum,
)
from .errors import ConfigError, TopologyError, UsageError

# Pulses closer in time than this are treated as overlapping and their powers
# add; CW light always merges, interferometer time bins never do.
PULSE_MERGE_TOL_S = 1e-13


@dataclass(frozen=True)
class PortNode:
    id: str
    direction: str = "input"  # "input" | "output"

    def __post_init__(self) -> None:
        if self.direction not in ("input", "output"):
            raise ConfigError(f"port {self.id!r}: bad direction {self.direction!r}")


@dataclass(frozen=True)
class SplitterNode:
    """Lossless 2x2 power splitter; ratio = input-0 fraction sent to output 0."""

    id: str
    ratio: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.ratio <= 1.0:
            raise ConfigError(f"splitter {self.id!r}: ratio must be in [0, 1]")


@dataclass(frozen=True)
class PhaseShifterNode:
    id: str
    phase_rad: float = 0.0


@dataclass(frozen=True)
class CouplerNode:
    """Grating coupler with a quadratic-in-dB loss profile about its center."""

    id: str
    center_wavelength_m: float
    min_loss_db: float = 4.5
    bandwidth_3db_m: float = 50e-9

    def __post_init__(self) -> None:
        if not self.center_wavelength_m > 0.0:
            raise ConfigError(f"coupler {self.id!r}: center wavelength must be > 0")
        if self.min_loss_db < 0.0 or not self.bandwidth_3db_m > 0.0:
            raise ConfigError(f"coupler {self.id!r}: bad loss parameters")

    def loss_db(self, wavelength_m: float) -> float:
        detune = (wavelength_m - self.center_wavelength_m) / (0.5 * self.bandwidth_3db_m)
        return self.min_loss_db + 3.0 * detune * detune

    def transmission(self, omega: float) -> float:
        return 10.0 ** (-self.loss_db(wavelength_from_angular_frequency(omega)) / 10.0)


@dataclass(frozen=True)
class SegmentNode:
    """A waveguide segment: the only SFWM source in the graph."""

    id: str
    waveguide: WaveguideSpec
    n_eff: float = 2.6
    pair_loss_exponent: int = 1

    def __post_init__(self) -> None:
        if not self.n_eff > 0.0:
            raise ConfigError(f"segment {self.id!r}: n_eff must be > 0")
        if self.pair_loss_exponent not in (1, 2):
            raise ConfigError(f"segment {self.id!r}: pair_loss_exponent must be 1 or 2")

    @property
    def delay_s(self) -> float:
        return self.n_eff * self.waveguide.length_m / C_VACUUM

    def photon_transmission(self) -> float:
        db = self.waveguide.attenuation_db_per_cm * self.waveguide.length_m * 100.0
        return 10.0 ** (-db / 10.0)


Node = PortNode | SplitterNode | PhaseShifterNode | CouplerNode | SegmentNode


def _slot_counts(node: Node) -> tuple[int, int]:
    # (inputs, outputs)
    if isinstance(node, PortNode):
        return (0, 1) if node.direction == "input" else (1, 0)
    if isinstance(node, SplitterNode):
        return (2, 2)
    return (1, 1)


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    src_port: int = 0
    dst_port: int = 0


@dataclass(frozen=True)
class CircuitGraph:
    """Validated DAG of photonic nodes."""

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        by_id: dict[str, Node] = {}
        for node in self.nodes:
            if node.id in by_id:
                raise ConfigError(f"duplicate node id {node.id!r}")
            by_id[node.id] = node
        taken_inputs: set[tuple[str, int]] = set()
        for edge in self.edges:
            for end, port_attr in ((edge.src, edge.src_port), (edge.dst, edge.dst_port)):
                if end not in by_id:
                    raise ConfigError(f"edge references unknown node {end!r}")
            n_in_src, n_out_src = _slot_counts(by_id[edge.src])
            n_in_dst, n_out_dst = _slot_counts(by_id[edge.dst])
            if not 0 <= edge.src_port < n_out_src:
                raise ConfigError(f"{edge.src!r} has no output slot {edge.src_port}")
            if not 0 <= edge.dst_port < n_in_dst:
                raise ConfigError(f"{edge.dst!r} has no input slot {edge.dst_port}")
            slot = (edge.dst, edge.dst_port)
            if slot in taken_inputs:
                raise ConfigError(f"input slot {slot} is fed by more than one edge")
            taken_inputs.add(slot)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_topo_order", self._topological_order())

    def node(self, node_id: str) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise ConfigError(f"unknown node {node_id!r}") from None

    def segments(self) -> tuple[SegmentNode, ...]:
        return tuple(n for n in self.nodes if isinstance(n, SegmentNode))

    def input_ports(self) -> tuple[str, ...]:
        return tuple(
            n.id for n in self.nodes if isinstance(n, PortNode) and n.direction == "input"
        )

    def outgoing(self, node_id: str, src_port: int) -> tuple[Edge, ...]:
        return tuple(
            e for e in self.edges if e.src == node_id and e.src_port == src_port
        )

    def _topological_order(self) -> tuple[str, ...]:
        indeg = {n.id: 0 for n in self.nodes}
        for e in self.edges:
            indeg[e.dst] += 1
        ready = [nid for nid, d in indeg.items() if d == 0]
        order: list[str] = []
        while ready:
            nid = ready.pop()
            order.append(nid)
            for e in self.edges:
                if e.src == nid:
                    indeg[e.dst] -= 1
                    if indeg[e.dst] == 0:
                        ready.append(e.dst)
        if len(order) != len(self.nodes):
            cyclic = sorted(nid for nid, d in indeg.items() if d > 0)
            raise TopologyError(f"circuit graph is cyclic around {cyclic}")
        return tuple(order)


@dataclass(frozen=True)
class Pulse:
    """One pump pulse: per-line powers (W) plus accumulated delay and phase."""

    powers_w: tuple[float, ...]
    delay_s: float = 0.0
    phase_rad: float = 0.0

    def scaled(self, factors) -> "Pulse":
        return replace(
            self, powers_w=tuple(p * f for p, f in zip(self.powers_w, factors))
        )


def _merge_pulses(pulses: list[Pulse], tol_s: float) -> tuple[Pulse, ...]:
    merged: list[Pulse] = []
    for pulse in sorted(pulses, key=lambda p: p.delay_s):
        if merged and abs(pulse.delay_s - merged[-1].delay_s) <= tol_s:
            prev = merged[-1]
            powers = tuple(a + b for a, b in zip(prev.powers_w, pulse.powers_w))
            # Phase of the stronger component wins; powers add incoherently.
            keep = prev if sum(prev.powers_w) >= sum(pulse.powers_w) else pulse
            merged[-1] = Pulse(powers, prev.delay_s, keep.phase_rad)
        else:
            merged.append(pulse)
    return tuple(merged)


@dataclass(frozen=True)
class PumpPropagation:
    """Pump pulse lists per node input, plus pump line frequencies."""

    pulses_at: dict[str, tuple[Pulse, ...]]
    line_omegas: tuple[float, ...]

    def pulses(self, node_id: str) -> tuple[Pulse, ...]:
        return self.pulses_at.get(node_id, ())

    def peak_powers_w(self, node_id: str) -> tuple[float, ...]:
        """Per-line peak (maximum single-pulse) power at a node."""
        pulses = self.pulses(node_id)
        if not pulses:
            return tuple(0.0 for _ in self.line_omegas)
        return tuple(
            max(p.powers_w[i] for p in pulses) for i in range(len(self.line_omegas))
        )

    def inter_pulse_delay_s(self, node_id: str) -> float:
        """Spread between earliest and latest pulse at a node (0 if single)."""
        pulses = self.pulses(node_id)
        if not pulses:
            return 0.0
        delays = [p.delay_s for p in pulses]
        return max(delays) - min(delays)


def propagate_pump(
    circuit: CircuitGraph,
    pump: PumpConfig,
    input_ports: str | tuple[str, str],
    merge_tol_s: float = PULSE_MERGE_TOL_S,
) -> PumpPropagation:
    """Propagate pump power/delay/phase from the input ports through the DAG.

    ``input_ports`` names one input port (both lines, or the single degenerate
    line) or a pair (one port per pump line).  Every segment must end up with
    at least one pulse, otherwise the circuit is considered mis-wired.
    """
    if pump.mode == "degenerate":
        line_omegas = (pump.omega_p1,)
        line_powers = (pump.power_w,)
    else:
        line_omegas = (pump.omega_p1, pump.omega_p2)
        line_powers = (pump.power1_w, pump.power2_w)
    ports = (input_ports,) * len(line_omegas) if isinstance(input_ports, str) else tuple(input_ports)
    if len(ports) != len(line_omegas):
        raise ConfigError(
            f"{pump.mode} pump has {len(line_omegas)} line(s) but "
            f"{len(ports)} input port(s) were given"
        )
    n_lines = len(line_omegas)

    initial: dict[str, list[Pulse]] = {}
    for line, port_id in enumerate(ports):
        node = circuit.node(port_id)
        if not (isinstance(node, PortNode) and node.direction == "input"):
            raise ConfigError(f"{port_id!r} is not an input port")
        powers = tuple(line_powers[i] if i == line else 0.0 for i in range(n_lines))
        initial.setdefault(port_id, []).append(Pulse(powers))

    # Pulses pending at each (node, input slot); input ports seed themselves.
    pending: dict[tuple[str, int], list[Pulse]] = {}
    arrived: dict[str, tuple[Pulse, ...]] = {}

    def emit(node_id: str, src_port: int, pulses) -> None:
        for edge in circuit.outgoing(node_id, src_port):
            pending.setdefault((edge.dst, edge.dst_port), []).extend(pulses)

    for node_id in circuit._topo_order:
        node = circuit.node(node_id)
        if isinstance(node, PortNode) and node.direction == "input":
            pulses = _merge_pulses(initial.get(node_id, []), merge_tol_s)
            arrived[node_id] = pulses
            emit(node_id, 0, pulses)
            continue

        if isinstance(node, SplitterNode):
            in0 = _merge_pulses(pending.get((node_id, 0), []), merge_tol_s)
            in1 = _merge_pulses(pending.get((node_id, 1), []), merge_tol_s)
            arrived[node_id] = _merge_pulses(list(in0 + in1), merge_tol_s)
            r = node.ratio
            out0 = [p.scaled([r] * n_lines) for p in in0] + [
                p.scaled([1.0 - r] * n_lines) for p in in1
            ]
            out1 = [p.scaled([1.0 - r] * n_lines) for p in in0] + [
                p.scaled([r] * n_lines) for p in in1
            ]
            emit(node_id, 0, _merge_pulses(out0, merge_tol_s))
            emit(node_id, 1, _merge_pulses(out1, merge_tol_s))
            continue

        pulses = _merge_pulses(pending.get((node_id, 0), []), merge_tol_s)
        arrived[node_id] = pulses
        if isinstance(node, PortNode):
            continue  # output port: sink
        if isinstance(node, CouplerNode):
            factors = [node.transmission(w) for w in line_omegas]
            pulses = tuple(p.scaled(factors) for p in pulses)
        elif isinstance(node, PhaseShifterNode):
            pulses = tuple(
                replace(p, phase_rad=p.phase_rad + node.phase_rad) for p in pulses
            )
        elif isinstance(node, SegmentNode):
            transit = node.photon_transmission()
            pulses = tuple(
                Pulse(
                    tuple(pw * transit for pw in p.powers_w),
                    p.delay_s + node.delay_s,
                    p.phase_rad,
                )
                for p in pulses
            )
        emit(node_id, 0, pulses)

    for segment in circuit.segments():
        if not arrived.get(segment.id):
            raise TopologyError(f"segment {segment.id!r} receives no pump (disconnected)")
    return PumpPropagation(arrived, line_omegas)


def photon_transmission(
    circuit: CircuitGraph, from_segment: str, detection_node: str, omega: float
) -> float:
    """Power transmission for one photon from a segment's output to a port.

    Sums path products of splitter ratios, coupler transmission at ``omega``
    and transit attenuation of intermediate segments.  0 when unreachable.
    """
    node = circuit.node(from_segment)
    if not isinstance(node, SegmentNode):
        raise UsageError(f"{from_segment!r} is not a segment")
    circuit.node(detection_node)
    cache: dict[tuple[str, int], float] = {}

    def from_output(node_id: str, out_slot: int) -> float:
        total = 0.0
        for edge in circuit.outgoing(node_id, out_slot):
            total += entering(edge.dst, edge.dst_port)
        return total

    def entering(node_id: str, in_slot: int) -> float:
        if node_id == detection_node:
            return 1.0
        key = (node_id, in_slot)
        if key in cache:
            return cache[key]
        node = circuit.node(node_id)
        if isinstance(node, PortNode):
            value = 0.0
        elif isinstance(node, SplitterNode):
            r = node.ratio
            f0, f1 = (r, 1.0 - r) if in_slot == 0 else (1.0 - r, r)
            value = f0 * from_output(node_id, 0) + f1 * from_output(node_id, 1)
        elif isinstance(node, CouplerNode):
            value = node.transmission(omega) * from_output(node_id, 0)
        elif isinstance(node, SegmentNode):
            value = node.photon_transmission() * from_output(node_id, 0)
        else:
            value = from_output(node_id, 0)
        cache[key] = value
        return value

    return from_output(from_segment, 0)


@dataclass(frozen=True, eq=False)
class SegmentContribution:
    """One segment's biphoton flux toward the detectors."""

    segment_id: str
    pump_powers_w: tuple[float, ...]
    transmission: float
    spectrum: BiphotonSpectrum  # already scaled by transmission**pair_loss_exponent

    def band_flux(self, band: tuple[float, float]) -> float:
        return band_flux(self.spectrum, band)


def segment_contributions(
    circuit: CircuitGraph,
    pump: PumpConfig,
    grid: SpectralGrid,
    input_ports: str | tuple[str, str],
    detection_node: str | None = None,
) -> tuple[SegmentContribution, ...]:
    """Per-segment SFWM spectra at local pump powers, scaled toward detection.

    With ``detection_node=None`` raw generation spectra are compared
    (transmission 1 for every segment).
    """
    propagation = propagate_pump(circuit, pump, input_ports)
    contributions = []
    for segment in circuit.segments():
        powers = propagation.peak_powers_w(segment.id)
        local_pump = (
            pump.with_powers(powers[0])
            if pump.mode == "degenerate"
            else pump.with_powers(powers[0], powers[1])
        )
        spectrum = biphoton_spectrum(segment.waveguide, local_pump, grid, label=segment.id)
        if detection_node is None:
            transmission = 1.0
        else:
            transmission = photon_transmission(
                circuit, segment.id, detection_node, grid.center
            )
        scaled = spectrum.scaled(transmission**segment.pair_loss_exponent)
        contributions.append(
            SegmentContribution(segment.id, powers, transmission, scaled)
        )
    return tuple(contributions)


def selection_ratio(
    contributions,
    band: tuple[float, float],
    designated_segments,
) -> float:
    """Designated-to-rest band-flux ratio; +inf when the rest contributes 0."""
    contributions = tuple(contributions)
    if not contributions:
        raise UsageError("selection_ratio needs at least one contribution")
    designated = set(designated_segments)
    if not designated:
        raise UsageError("designated segment set must be non-empty")
    known = {c.segment_id for c in contributions}
    missing = designated - known
    if missing:
        raise UsageError(f"designated segments {sorted(missing)} not in contributions")
    num = sum(c.band_flux(band) for c in contributions if c.segment_id in designated)
    den = sum(c.band_flux(band) for c in contributions if c.segment_id not in designated)
    if den == 0.0:
        return inf
    return num / den

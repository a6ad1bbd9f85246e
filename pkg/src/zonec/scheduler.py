"""Maps a zone-step program onto the machine model: load/store batches, trap
transfers, in-zone shuttling, readout travel, and error-correction prep,
producing a deterministic event timeline.

Movement accounting follows batch semantics: each storage<->entangling
boundary realizes one LOAD or STORE batch event whose duration is the longest
member travel time. Trap transfers overlap adjacent load/store travel where a
waiting qubit exists; only the exposed remainder shows up in the breakdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .arch import (
    AodMove,
    AtomLayout,
    LayoutError,
    MachineConfig,
    Policy,
    Trap,
    apply_move,
    build_layout,
    crossing_distance_um,
    move_duration_us,
    validate_move,
)
from .ir import Circuit, Gate, GateKind, Zone, dependency_layers
from .rewrite import ZoneStepProgram


class EventKind(Enum):
    LOAD = "LOAD"
    STORE = "STORE"
    TRAP_TRANSFER = "TRAP_TRANSFER"
    SHUTTLE = "SHUTTLE"
    PULSE_1Q = "PULSE_1Q"
    PULSE_2Q = "PULSE_2Q"
    READOUT_MOVE = "READOUT_MOVE"
    READOUT_IMAGE = "READOUT_IMAGE"
    EC_PREP = "EC_PREP"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    qubits: tuple[int, ...]
    start_us: float
    duration_us: float

    @property
    def end_us(self) -> float:
        return self.start_us + self.duration_us


@dataclass
class Timeline:
    num_qubits: int
    events: tuple[Event, ...]
    makespan_us: float
    t_in_us: dict  # qubit -> time spent in the storage zone
    t_out_us: dict  # qubit -> time spent outside it
    transfers: dict  # qubit -> trap-transfer count
    measured: tuple[int, ...]
    xtalk_1q_exposures: dict = field(default_factory=dict)
    xtalk_cz_exposures: dict = field(default_factory=dict)

    def to_lines(self) -> str:
        lines = []
        for e in self.events:
            qs = ",".join(str(q) for q in e.qubits)
            lines.append(f"{e.kind.value} [{qs}] start={e.start_us:.3f} dur={e.duration_us:.3f}")
        lines.append(f"MAKESPAN {self.makespan_us:.3f}")
        return "\n".join(lines) + "\n"


def count_ld_st(timeline: Timeline) -> tuple[int, int]:
    """(loads, stores) counted per batch event (readout travel excluded)."""
    loads = sum(1 for e in timeline.events if e.kind is EventKind.LOAD)
    stores = sum(1 for e in timeline.events if e.kind is EventKind.STORE)
    return loads, stores


class ScheduleError(RuntimeError):
    pass


def steane_prep_duration_us(config: MachineConfig) -> float:
    """Pulse time of the Steane |+>_L preparation circuit (lowered to the
    native gate set), layer by layer."""
    from .frontend import gen_steane_prep
    from .rewrite import cancel_hadamard_pairs, lower_cx_to_cz

    prep = cancel_hadamard_pairs(lower_cx_to_cz(gen_steane_prep()))
    total = 0.0
    for layer in dependency_layers(prep).layers:
        kinds = {prep.gates[i].kind for i in layer}
        if any(k in (GateKind.CZ,) for k in kinds):
            total += config.pulse_2q_us
        if any(k in (GateKind.H, GateKind.X, GateKind.RX) for k in kinds):
            total += config.pulse_1q_us
    return total


def ec_prep_events(config: MachineConfig, n_logical: int) -> tuple[Event, ...]:
    """Fixed per-run logical-qubit preparation prefix: Steane prep pulses,
    one transversal entangling layer, and (except under Type 3) the ancilla
    travel to the storage zone. Fully parallel across logical qubits."""
    dur = steane_prep_duration_us(config) + config.pulse_2q_us
    if config.policy is not Policy.TYPE3:
        dur += config.zone_gap_um / config.aod_speed_um_per_us
    return (Event(EventKind.EC_PREP, tuple(range(n_logical)), 0.0, dur),)


@dataclass
class _Sim:
    config: MachineConfig
    layout: AtomLayout
    clock: float = 0.0
    events: list = field(default_factory=list)
    zone_since: dict = field(default_factory=dict)
    t_in: dict = field(default_factory=dict)
    t_out: dict = field(default_factory=dict)
    transfers: dict = field(default_factory=dict)
    x1q: dict = field(default_factory=dict)
    xcz: dict = field(default_factory=dict)

    def emit(self, kind, qubits, start, dur):
        self.events.append(Event(kind, tuple(sorted(qubits)), start, dur))

    def settle_zone(self, q, new_zone, at):
        since = self.zone_since.get(q, 0.0)
        old = self.layout.site(q).zone
        bucket = self.t_in if old == "storage" else self.t_out
        bucket[q] = bucket.get(q, 0.0) + (at - since)
        self.layout.site(q).zone = new_zone
        self.zone_since[q] = at

    def finalize_zones(self, n):
        for q in range(n):
            since = self.zone_since.get(q, 0.0)
            zone = self.layout.site(q).zone
            bucket = self.t_in if zone == "storage" else self.t_out
            bucket[q] = bucket.get(q, 0.0) + (self.clock - since)
            self.t_in.setdefault(q, 0.0)
            self.t_out.setdefault(q, 0.0)

    def transfer_batch(self, qubits, hide_under_us=0.0):
        """One batched trap-transfer event; returns its duration so the
        caller can fold it into the step's concurrency window."""
        qubits = sorted(qubits)
        if not qubits:
            return 0.0
        for q in qubits:
            s = self.layout.site(q)
            s.trap = Trap.AOD if s.trap is Trap.SLM else Trap.SLM
            self.transfers[q] = self.transfers.get(q, 0) + 1
        self.emit(
            EventKind.TRAP_TRANSFER, qubits, self.clock, self.config.trap_transfer_time_us
        )
        return self.config.trap_transfer_time_us


def _step_layers(gates: tuple[Gate, ...]):
    c_gates = list(gates)
    frontier: dict[int, int] = {}
    layers: list[list[Gate]] = []
    for g in c_gates:
        lvl = max((frontier.get(q, 0) for q in g.qubits), default=0)
        while len(layers) <= lvl:
            layers.append([])
        layers[lvl].append(g)
        for q in g.qubits:
            frontier[q] = lvl + 1
    return layers


def _pick_movers(gates: tuple[Gate, ...], layout: AtomLayout):
    """Choose the moving operand per 2Q gate: the one with more gates in the
    step (the fountain's shared qubit rides the AOD); ties prefer the qubit
    already in an AOD trap, then the lower index."""
    count: dict[int, int] = {}
    for g in gates:
        for q in g.qubits:
            count[q] = count.get(q, 0) + 1

    def key(q):
        return (-count[q], 0 if layout.site(q).trap is Trap.AOD else 1, q)

    movers = {}
    for g in gates:
        a, b = g.qubits
        movers[g] = min((a, b), key=key)
    return movers


def schedule(
    program: ZoneStepProgram, layout: AtomLayout, config: MachineConfig
) -> Timeline:
    """Deterministic schedule of a zone-step program under the configured
    operation policy."""
    n = program.num_qubits
    if n > len(layout.qubits):
        raise ScheduleError(
            f"program uses {n} logical qubits, layout holds {len(layout.qubits)}"
        )
    sim = _Sim(config, layout)

    # Error-correction prefix.
    for e in ec_prep_events(config, n):
        sim.events.append(e)
        sim.clock = max(sim.clock, e.end_us)
    ec_window = sim.clock  # initial trap pickups hide under the EC prefix

    if config.policy is Policy.TYPE3:
        _schedule_type3(sim, program)
    elif config.policy is Policy.TYPE2:
        _schedule_type2(sim, program)
    else:
        _schedule_type1(sim, program, ec_window)

    sim.finalize_zones(n)
    measured = tuple(
        sorted(
            {
                g.qubits[0]
                for step in program.steps
                for g in step.gates
                if g.kind is GateKind.MEASURE
            }
        )
    )
    return Timeline(
        num_qubits=n,
        events=tuple(sim.events),
        makespan_us=sim.clock,
        t_in_us=dict(sorted(sim.t_in.items())),
        t_out_us=dict(sorted(sim.t_out.items())),
        transfers=dict(sorted(sim.transfers.items())),
        measured=measured,
        xtalk_1q_exposures=dict(sorted(sim.x1q.items())),
        xtalk_cz_exposures=dict(sorted(sim.xcz.items())),
    )


def _entangling_slot(site):
    # Entangling-zone slots mirror the storage block grid one-to-one.
    return site.row, site.col


def _preplace(sim: _Sim, program: ZoneStepProgram):
    """X-basis programs start with every initial-layer entangling qubit
    already in the entangling zone: with the leading basis change absorbed
    into state preparation there is no storage-zone work before the first CZ
    layer, so the qubits are prepared in place."""
    if not program.x_basis:
        return
    first_zone: dict[int, Zone] = {}
    for step in program.steps:
        for g in step.gates:
            for q in g.qubits:
                first_zone.setdefault(q, step.zone)
    for q, zone in first_zone.items():
        if zone is Zone.ENTANGLING:
            sim.layout.site(q).zone = "entangling"


def _pulse_storage_layers(sim: _Sim, gates):
    for layer in _step_layers(gates):
        pulsed = [g for g in layer if g.kind is not GateKind.RZ]
        if not pulsed:
            continue  # RZ is virtual: zero duration
        qubits = sorted({q for g in pulsed for q in g.qubits})
        sim.emit(EventKind.PULSE_1Q, qubits, sim.clock, sim.config.pulse_1q_us)
        sim.clock += sim.config.pulse_1q_us


def _entangling_gates(sim: _Sim, gates):
    """Shuttle the movers and fire one 2Q pulse per parallel layer."""
    cfg = sim.config
    movers = _pick_movers(gates, sim.layout)
    for layer in _step_layers(gates):
        worst = 0.0
        layer_movers = []
        for g in layer:
            m = movers[g]
            other = g.qubits[0] if g.qubits[1] == m else g.qubits[1]
            ms, os_ = sim.layout.site(m), sim.layout.site(other)
            dist = math.hypot(
                (ms.row - os_.row) * cfg.pitch_entangling_um,
                (ms.col - os_.col) * cfg.pitch_entangling_um,
            )
            worst = max(worst, dist / cfg.aod_speed_um_per_us)
            ms.row, ms.col = os_.row, os_.col
            layer_movers.append(m)
        if worst > 0.0:
            sim.emit(EventKind.SHUTTLE, layer_movers, sim.clock, worst)
            sim.clock += worst
        qubits = sorted({q for g in layer for q in g.qubits})
        sim.emit(EventKind.PULSE_2Q, qubits, sim.clock, cfg.pulse_2q_us)
        sim.clock += cfg.pulse_2q_us
    return movers


def _batch_crossing(sim: _Sim, qubits, direction: str):
    """One LOAD or STORE batch; duration is the slowest member's travel."""
    cfg = sim.config
    qubits = sorted(qubits)
    worst = cfg.min_ld_st_us
    for q in qubits:
        site = sim.layout.site(q)
        if direction == "load":
            r, c = _entangling_slot(site)
            worst = max(worst, crossing_distance_um(sim.layout, q, r, c, "entangling")
                        / cfg.aod_speed_um_per_us)
        else:
            worst = max(worst, crossing_distance_um(sim.layout, q, site.row, site.col,
                        "storage") / cfg.aod_speed_um_per_us)
    kind = EventKind.LOAD if direction == "load" else EventKind.STORE
    sim.emit(kind, qubits, sim.clock, worst)
    return worst


def _schedule_type1(sim: _Sim, program: ZoneStepProgram, ec_window: float):
    cfg = sim.config
    _preplace(sim, program)

    for step in program.steps:
        used = sorted({q for g in step.gates for q in g.qubits})
        if step.zone is Zone.STORAGE:
            incoming = [q for q in used if sim.layout.site(q).zone == "entangling"]
            window = 0.0
            if incoming:
                pickups = [q for q in incoming if sim.layout.site(q).trap is Trap.SLM]
                tdur = sim.transfer_batch(pickups)
                window = _batch_crossing(sim, incoming, "store")
                window = max(window, tdur)
                sim.clock += window
                for q in incoming:
                    sim.settle_zone(q, "storage", sim.clock)
            _pulse_storage_layers(sim, step.gates)
        elif step.zone is Zone.ENTANGLING:
            movers_by_gate = _pick_movers(step.gates, sim.layout)
            mover_set = set(movers_by_gate.values())
            stationary = set(used) - mover_set
            incoming = [q for q in used if sim.layout.site(q).zone == "storage"]
            resident = [q for q in used if q not in incoming]

            # Advance transfers for residents hide under the load travel.
            pre = [
                q
                for q in resident
                if (q in stationary and sim.layout.site(q).trap is Trap.AOD)
                or (q in mover_set and sim.layout.site(q).trap is Trap.SLM)
            ]
            window = sim.transfer_batch(pre)
            if incoming:
                # Qubits in storage ride SLM; AOD pickup hides under the EC
                # prefix on first load, under the batch itself afterwards.
                pickups = [q for q in incoming if sim.layout.site(q).trap is Trap.SLM]
                window = max(window, sim.transfer_batch(pickups))
                window = max(window, _batch_crossing(sim, incoming, "load"))
            sim.clock += window
            for q in incoming:
                sim.settle_zone(q, "entangling", sim.clock)
            # Freshly arrived stationary partners still hand over to SLM.
            post = [
                q
                for q in incoming
                if q in stationary and sim.layout.site(q).trap is Trap.AOD
            ]
            sim.clock += sim.transfer_batch(post)
            _entangling_gates(sim, step.gates)
        else:  # readout
            _schedule_readout(sim, used)


def _schedule_readout(sim: _Sim, qubits):
    cfg = sim.config
    if qubits:
        pickups = [q for q in qubits if sim.layout.site(q).trap is Trap.SLM]
        tdur = sim.transfer_batch(pickups)
        # Zone order is storage | entangling | readout: readout travel from
        # the entangling zone crosses one gap, from storage two plus the span.
        worst = 0.0
        entangling_span = cfg.array_rows * cfg.pitch_entangling_um
        for q in qubits:
            x, y = sim.layout.position_um(q)
            dist = y + cfg.zone_gap_um
            if sim.layout.site(q).zone == "storage":
                dist += entangling_span + cfg.zone_gap_um
            worst = max(worst, dist / cfg.aod_speed_um_per_us)
        worst = max(worst, tdur)
        sim.emit(EventKind.READOUT_MOVE, qubits, sim.clock, worst)
        sim.clock += worst
        for q in qubits:
            sim.settle_zone(q, "readout", sim.clock)
    sim.emit(EventKind.READOUT_IMAGE, qubits, sim.clock, cfg.readout_time_us)
    sim.clock += cfg.readout_time_us


def _schedule_type2(sim: _Sim, program: ZoneStepProgram):
    """Local Raman permitted in the entangling zone: one initial load, then
    all gate execution stays there with isolation repositioning."""
    cfg = sim.config
    used_all = sorted({q for s in program.steps for g in s.gates for q in g.qubits})
    loaded = False
    for step in program.steps:
        if step.zone is Zone.READOUT:
            _schedule_readout(sim, sorted({q for g in step.gates for q in g.qubits}))
            continue
        if step.zone is Zone.ENTANGLING and not loaded:
            sim.transfer_batch([q for q in used_all
                                if sim.layout.site(q).trap is Trap.SLM])
            window = _batch_crossing(sim, used_all, "load")
            sim.clock += window
            for q in used_all:
                sim.settle_zone(q, "entangling", sim.clock)
            loaded = True
        if step.zone is Zone.STORAGE and not loaded:
            _pulse_storage_layers(sim, step.gates)
        elif step.zone is Zone.STORAGE:
            # 1Q gates in the entangling zone: targets shuttle >12 um clear
            # of every other atom, pulse, and shuttle back.
            for layer in _step_layers(step.gates):
                pulsed = [g for g in layer if g.kind is not GateKind.RZ]
                if not pulsed:
                    continue
                qubits = sorted({q for g in pulsed for q in g.qubits})
                pickups = [q for q in qubits if sim.layout.site(q).trap is Trap.SLM]
                sim.clock += sim.transfer_batch(pickups)
                hop = 2.0 * cfg.pitch_entangling_um / cfg.aod_speed_um_per_us
                sim.emit(EventKind.SHUTTLE, qubits, sim.clock, hop)
                sim.clock += hop
                sim.emit(EventKind.PULSE_1Q, qubits, sim.clock, cfg.pulse_1q_us)
                sim.clock += cfg.pulse_1q_us
                sim.emit(EventKind.SHUTTLE, qubits, sim.clock, hop)
                sim.clock += hop
        else:
            movers_by_gate = _pick_movers(step.gates, sim.layout)
            mover_set = set(movers_by_gate.values())
            used = sorted({q for g in step.gates for q in g.qubits})
            stationary = set(used) - mover_set
            need = [
                q
                for q in used
                if (q in stationary and sim.layout.site(q).trap is Trap.AOD)
                or (q in mover_set and sim.layout.site(q).trap is Trap.SLM)
            ]
            sim.clock += sim.transfer_batch(need)
            _entangling_gates(sim, step.gates)


def _schedule_type3(sim: _Sim, program: ZoneStepProgram):
    """Non-zoned in-place execution; crosstalk exposures tracked per pulse
    layer over all non-target atoms."""
    cfg = sim.config
    all_qubits = set(range(program.num_qubits))
    for q in all_qubits:  # single zone; all time decoheres at the fast rate
        sim.layout.site(q).zone = "entangling"
    for step in program.steps:
        if step.zone is Zone.READOUT:
            qs = sorted({q for g in step.gates for q in g.qubits})
            sim.emit(EventKind.READOUT_IMAGE, qs, sim.clock, cfg.readout_time_us)
            sim.clock += cfg.readout_time_us
            continue
        for layer in _step_layers(step.gates):
            pulsed = [g for g in layer if g.kind is not GateKind.RZ]
            if not pulsed:
                continue
            qubits = sorted({q for g in pulsed for q in g.qubits})
            two_q = step.zone is Zone.ENTANGLING
            kind = EventKind.PULSE_2Q if two_q else EventKind.PULSE_1Q
            dur = cfg.pulse_2q_us if two_q else cfg.pulse_1q_us
            sim.emit(kind, qubits, sim.clock, dur)
            sim.clock += dur
            bucket = sim.xcz if two_q else sim.x1q
            for q in all_qubits - set(qubits):
                bucket[q] = bucket.get(q, 0) + 1


# ---------------------------------------------------------------------------
# Movement-based SWAP within the entangling zone
# ---------------------------------------------------------------------------


def plan_swap_in_entangling(
    layout: AtomLayout, a: int, b: int
) -> list[tuple[AodMove, float]]:
    """Exchange two entangling-zone block positions in at most three AOD legs
    through a vacant waypoint row; zero loads/stores."""
    if a == b:
        return []
    for q in (a, b):
        if layout.site(q).zone != "entangling":
            raise LayoutError(f"qubit {q} is not in the entangling zone")
        layout.site(q).trap = Trap.AOD
    occupied_rows = {s.row for s in layout.qubits if s.zone == "entangling"}
    waypoint_row = max(occupied_rows) + 1
    if waypoint_row >= layout.config.array_rows:
        raise LayoutError("no vacant waypoint row; SLM handoff required")
    sa, sb = layout.site(a), layout.site(b)
    plan: list[tuple[AodMove, float]] = []
    orig_a = (sa.row, sa.col)
    orig_b = (sb.row, sb.col)
    moves = [
        AodMove({a: (waypoint_row - orig_a[0], 0)}),
        AodMove({b: (orig_a[0] - orig_b[0], orig_a[1] - orig_b[1])}),
        AodMove({a: (orig_b[0] - waypoint_row, orig_b[1] - orig_a[1])}),
    ]
    for mv in moves:
        ok = validate_move(layout, mv)
        if ok is not True:
            raise LayoutError(f"swap leg invalid: {ok.reason}")
        dur = move_duration_us(layout, mv, layout.config)
        apply_move(layout, mv)
        plan.append((mv, dur))
    return plan

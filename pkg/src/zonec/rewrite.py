"""Rewriting passes: CX lowering, Hadamard-pair cancellation, fountain/path
Pauli-exponential synthesis, native ZZ-protocol substitution, movement-based
SWAP elimination, and zone-step alignment.

Every pass preserves the circuit unitary up to global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import protocols
from .ir import (
    Circuit,
    Gate,
    GateKind,
    PauliTerm,
    Zone,
    dependency_layers,
)

# ---------------------------------------------------------------------------
# Zone-step program
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZoneStep:
    zone: Zone
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if g.zone is not self.zone:
                raise ValueError(
                    f"{g.kind.value} (zone {g.zone.value}) in a "
                    f"{self.zone.value} step"
                )


@dataclass(frozen=True)
class RemapDirective:
    """Logical relabeling emitted by SWAP elimination, anchored before the
    gate at `position` in the rewritten circuit."""

    position: int
    pair: tuple[int, int]


@dataclass(frozen=True)
class ZoneStepProgram:
    num_qubits: int
    steps: tuple[ZoneStep, ...]
    remaps: tuple[RemapDirective, ...] = ()
    x_basis: bool = False

    def __post_init__(self):
        for a, b in zip(self.steps, self.steps[1:]):
            if a.zone is b.zone:
                raise ValueError("adjacent steps share a zone (not maximally merged)")

    def flatten(self) -> Circuit:
        gates = tuple(g for step in self.steps for g in step.gates)
        return Circuit(self.num_qubits, gates)

    def boundary_crossings(self) -> int:
        """Storage <-> entangling boundaries in the step sequence."""
        pair = {Zone.STORAGE, Zone.ENTANGLING}
        return sum(
            1
            for a, b in zip(self.steps, self.steps[1:])
            if {a.zone, b.zone} == pair
        )


def _merge_steps(raw: list[tuple[Zone, list[Gate]]]) -> tuple[ZoneStep, ...]:
    merged: list[tuple[Zone, list[Gate]]] = []
    for zone, gates in raw:
        if not gates:
            continue
        if merged and merged[-1][0] is zone:
            merged[-1][1].extend(gates)
        else:
            merged.append((zone, list(gates)))
    return tuple(ZoneStep(zone, tuple(gates)) for zone, gates in merged)


# ---------------------------------------------------------------------------
# Lowering and peephole passes
# ---------------------------------------------------------------------------


def lower_cx_to_cz(circuit: Circuit) -> Circuit:
    """Replace every CX(c,t) by H(t); CZ(c,t); H(t)."""
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.CX:
            c, t = g.qubits
            gates += [
                Gate(GateKind.H, (t,)),
                Gate(GateKind.CZ, (c, t)),
                Gate(GateKind.H, (t,)),
            ]
        else:
            gates.append(g)
    return Circuit(circuit.num_qubits, tuple(gates))


def lower_rzz_to_cx(circuit: Circuit) -> Circuit:
    """Replace every RZZ(g) by CX; RZ(g); CX (standard-execution template)."""
    gates: list[Gate] = []
    for g in circuit.gates:
        if g.kind is GateKind.RZZ:
            a, b = g.qubits
            gates += [
                Gate(GateKind.CX, (a, b)),
                Gate(GateKind.RZ, (b,), g.params),
                Gate(GateKind.CX, (a, b)),
            ]
        else:
            gates.append(g)
    return Circuit(circuit.num_qubits, tuple(gates))


def cancel_hadamard_pairs(circuit: Circuit) -> Circuit:
    """Remove adjacent H;H pairs on the same qubit (no intervening gate on
    that qubit) until a fixed point is reached."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        # last pending H index per qubit, invalidated by any touching gate
        pending: dict[int, int] = {}
        kill: set[int] = set()
        for i, g in enumerate(gates):
            if g.kind is GateKind.H:
                q = g.qubits[0]
                if q in pending:
                    kill.update((pending.pop(q), i))
                    changed = True
                else:
                    pending[q] = i
            else:
                for q in g.qubits:
                    pending.pop(q, None)
        if kill:
            gates = [g for i, g in enumerate(gates) if i not in kill]
    return Circuit(circuit.num_qubits, tuple(gates))


# ---------------------------------------------------------------------------
# Pauli-exponential synthesis
# ---------------------------------------------------------------------------


_HALF_PI = 1.5707963267948966


def _basis_change(term: PauliTerm, invert: bool) -> list[Gate]:
    gates = []
    for q, ch in zip(term.support, (term.label[i] for i in term.support)):
        if ch == "X":
            gates.append(Gate(GateKind.H, (q,)))
        elif ch == "Y":
            gates.append(Gate(GateKind.RX, (q,), (-_HALF_PI if invert else _HALF_PI,)))
    return gates


def synth_pauli_fountain(term: PauliTerm) -> Circuit:
    """Full exponential exp(-i*theta/2 * P) with a fountain-shaped CZ tree.

    All CZs share the lowest-index non-I qubit as target, so the inner
    Hadamards between CZs cancel and each half-tree runs in a single
    entangling-zone visit. CZs are applied in ascending qubit order.
    """
    n = term.num_qubits
    if term.weight == 0:
        return Circuit(n)  # global phase only
    target = term.support[0]
    others = term.support[1:]
    gates: list[Gate] = _basis_change(term, invert=False)
    if others:
        gates.append(Gate(GateKind.H, (target,)))
        for q in others:
            gates.append(Gate(GateKind.CZ, (q, target)))
        gates.append(Gate(GateKind.H, (target,)))
    gates.append(Gate(GateKind.RZ, (target,), (term.theta,)))
    if others:
        gates.append(Gate(GateKind.H, (target,)))
        for q in reversed(others):
            gates.append(Gate(GateKind.CZ, (q, target)))
        gates.append(Gate(GateKind.H, (target,)))
    gates += _basis_change(term, invert=True)
    return cancel_hadamard_pairs(Circuit(n, tuple(gates)))


def synth_pauli_path(term: PauliTerm) -> Circuit:
    """Standard path-shaped CX cascade onto the last non-I qubit; serves as
    the baseline and the independent oracle reference for the fountain."""
    n = term.num_qubits
    if term.weight == 0:
        return Circuit(n)
    gates: list[Gate] = _basis_change(term, invert=False)
    chain = term.support
    for a, b in zip(chain, chain[1:]):
        gates.append(Gate(GateKind.CX, (a, b)))
    gates.append(Gate(GateKind.RZ, (chain[-1],), (term.theta,)))
    for a, b in reversed(list(zip(chain, chain[1:]))):
        gates.append(Gate(GateKind.CX, (a, b)))
    gates += _basis_change(term, invert=True)
    return Circuit(n, tuple(gates))


# ---------------------------------------------------------------------------
# ZZ-idiom recognition and native-protocol substitution
# ---------------------------------------------------------------------------


def _touches(gate: Gate, qubits: set[int]) -> bool:
    return any(q in qubits for q in gate.qubits)


def _match_zz_idiom(gates: list[Gate], i: int):
    """Match a ZZ idiom starting at index i, skipping gates on other qubits.

    Recognizes CX(a,b) RZ(t,b) CX(a,b) and its lowered form
    H(b) CZ(a,b) H(b) RZ(t,b) H(b) CZ(a,b) H(b). Returns (indices, a, b,
    theta) or None. Equivalence to RZZ(theta) holds up to a global phase
    exp(-i*theta/2).
    """
    first = gates[i]
    if first.kind is GateKind.CX:
        pattern = ["RZ", "CX"]
        a, b = first.qubits
    elif first.kind is GateKind.H:
        b = first.qubits[0]
        pattern = ["CZ", "H", "RZ", "H", "CZ", "H"]
        a = None
    else:
        return None

    involved = set(first.qubits)
    indices = [i]
    theta = None
    j = i + 1
    for want in pattern:
        while j < len(gates) and not _touches(gates[j], involved):
            j += 1
        if j >= len(gates):
            return None
        g = gates[j]
        if g.kind.value != want:
            return None
        if want in ("RZ", "H") and g.qubits[0] != b:
            return None
        if want == "CX":
            # CX is not symmetric: the closing CX must repeat the orientation.
            if g.qubits != first.qubits:
                return None
        elif want == "CZ":
            if a is None:
                if b not in g.qubits:
                    return None
                a = g.qubits[0] if g.qubits[1] == b else g.qubits[1]
                involved.add(a)
            elif set(g.qubits) != {a, b}:
                return None
        if want == "RZ":
            theta = g.params[0]
        indices.append(j)
        j += 1
    return indices, a, b, theta


def substitute_rzz(circuit: Circuit, protocol: str = "adiabatic") -> Circuit:
    """Replace RZZ gates (and recognized ZZ idioms) with the two-pulse native
    protocol: Ad+LP or LP+CPHASE. No storage-zone gate is introduced."""
    if protocol not in ("adiabatic", "cphase"):
        raise ValueError(f"unknown protocol {protocol!r}")
    gates = list(circuit.gates)

    # First fold ZZ idioms into RZZ gates.
    changed = True
    while changed:
        changed = False
        for i in range(len(gates)):
            if gates[i].kind not in (GateKind.CX, GateKind.H):
                continue
            m = _match_zz_idiom(gates, i)
            if m is None:
                continue
            indices, a, b, theta = m
            keep = set(indices)
            rebuilt = []
            for j, g in enumerate(gates):
                if j == indices[0]:
                    rebuilt.append(Gate(GateKind.RZZ, (a, b), (theta,)))
                elif j not in keep:
                    rebuilt.append(g)
            gates = rebuilt
            changed = True
            break

    out: list[Gate] = []
    for g in gates:
        if g.kind is not GateKind.RZZ:
            out.append(g)
            continue
        gamma = g.params[0]
        if protocol == "adiabatic":
            recipe = protocols.synth_rzz_adiabatic(gamma)
            out.append(Gate(GateKind.AD, g.qubits, (recipe.ad_phi1, recipe.ad_phi2)))
            out.append(Gate(GateKind.LP, g.qubits, (gamma,)))
        else:
            recipe = protocols.synth_rzz_cphase(gamma)
            out.append(Gate(GateKind.LP, g.qubits, (gamma,)))
            out.append(Gate(GateKind.CPHASE, g.qubits, (recipe.cphase_phi,)))
    return Circuit(circuit.num_qubits, tuple(out))


# ---------------------------------------------------------------------------
# SWAP elimination (movement-based)
# ---------------------------------------------------------------------------


def lower_swap(circuit: Circuit) -> tuple[Circuit, tuple[RemapDirective, ...]]:
    """Remove every SWAP, rewriting downstream operands through the logical
    permutation and emitting a remap directive at that program point. The
    scheduler realizes remaps as free relabelings or in-zone moves."""
    perm = list(range(circuit.num_qubits))
    gates: list[Gate] = []
    remaps: list[RemapDirective] = []
    for g in circuit.gates:
        if g.kind is GateKind.SWAP:
            a, b = g.qubits
            ia, ib = perm.index(a), perm.index(b)
            perm[ia], perm[ib] = perm[ib], perm[ia]
            remaps.append(RemapDirective(len(gates), (a, b)))
        else:
            gates.append(Gate(g.kind, tuple(perm.index(q) for q in g.qubits), g.params))
    # Collapse remap pairs that cancelled back to identity.
    if perm == list(range(circuit.num_qubits)):
        pair_count: dict[tuple[int, int], int] = {}
        for r in remaps:
            key = tuple(sorted(r.pair))
            pair_count[key] = pair_count.get(key, 0) + 1
        if all(v % 2 == 0 for v in pair_count.values()):
            remaps = []
    return Circuit(circuit.num_qubits, tuple(gates)), tuple(remaps)


def gate_based_swap_reference(num_qubits: int, a: int, b: int) -> Circuit:
    """Gate-based SWAP lowering (3 CX), kept only as the comparison path for
    the movement-based implementation."""
    c = Circuit(num_qubits)
    c = c.append(GateKind.CX, [a, b])
    c = c.append(GateKind.CX, [b, a])
    c = c.append(GateKind.CX, [a, b])
    return c


# ---------------------------------------------------------------------------
# Zone-step construction
# ---------------------------------------------------------------------------


def align_zone_steps(circuit: Circuit) -> ZoneStepProgram:
    """Greedy preemptive alignment into alternating zone steps.

    Starting from the first gate's zone, every dependency-ready gate of the
    current zone is hoisted into the current step; readiness is recomputed
    after each hoist so newly unblocked same-zone gates join too. When no
    gate qualifies, a step opens in the other zone. Terminal MEASUREs form a
    final readout step.
    """
    for g in circuit.gates:
        if g.kind in (GateKind.CX, GateKind.SWAP):
            raise ValueError(f"align_zone_steps requires a {g.kind.value}-free circuit")

    main = [(i, g) for i, g in enumerate(circuit.gates) if g.zone is not Zone.READOUT]
    measures = tuple(g for g in circuit.gates if g.zone is Zone.READOUT)

    # preds[i] = indices of earlier main gates sharing an operand with gate i
    last_on: dict[int, int] = {}
    preds: dict[int, set[int]] = {}
    for i, g in main:
        preds[i] = {last_on[q] for q in g.qubits if q in last_on}
        for q in g.qubits:
            last_on[q] = i

    remaining = dict(main)
    done: set[int] = set()
    raw: list[tuple[Zone, list[Gate]]] = []
    current_zone = main[0][1].zone if main else Zone.STORAGE

    while remaining:
        step_gates: list[Gate] = []
        progressed = True
        while progressed:
            progressed = False
            for i in sorted(remaining):
                g = remaining[i]
                if g.zone is current_zone and preds[i] <= done:
                    step_gates.append(g)
                    done.add(i)
                    del remaining[i]
                    progressed = True
        raw.append((current_zone, step_gates))
        current_zone = (
            Zone.ENTANGLING if current_zone is Zone.STORAGE else Zone.STORAGE
        )

    if measures:
        raw.append((Zone.READOUT, list(measures)))
    return ZoneStepProgram(circuit.num_qubits, _merge_steps(raw))


def layer_zone_steps(circuit: Circuit) -> ZoneStepProgram:
    """Unaligned (standard-execution) zone stepping: one zone segment per
    dependency layer of the input circuit, CX gates expanded in place, and
    only adjacent same-zone segments merged. No cross-layer hoisting."""
    layers = dependency_layers(circuit)
    raw: list[tuple[Zone, list[Gate]]] = []
    measures: list[Gate] = []
    for layer in layers.layers:
        pre: list[Gate] = []
        two: list[Gate] = []
        post: list[Gate] = []
        for idx in layer:
            g = circuit.gates[idx]
            if g.kind is GateKind.MEASURE:
                measures.append(g)
            elif g.kind is GateKind.CX:
                c, t = g.qubits
                pre.append(Gate(GateKind.H, (t,)))
                two.append(Gate(GateKind.CZ, (c, t)))
                post.append(Gate(GateKind.H, (t,)))
            elif g.zone is Zone.STORAGE:
                pre.append(g)
            else:
                two.append(g)
        raw.append((Zone.STORAGE, pre))
        raw.append((Zone.ENTANGLING, two))
        raw.append((Zone.STORAGE, post))
    if measures:
        raw.append((Zone.READOUT, measures))
    return ZoneStepProgram(circuit.num_qubits, _merge_steps(raw))


def absorb_x_basis(circuit: Circuit) -> Circuit:
    """Absorb a leading H on each qubit into X-basis initialization and a
    trailing H-immediately-before-MEASURE into X-basis readout."""
    first_on: dict[int, int] = {}
    ops_on: dict[int, list[int]] = {}
    for i, g in enumerate(circuit.gates):
        for q in g.qubits:
            first_on.setdefault(q, i)
            ops_on.setdefault(q, []).append(i)
    drop: set[int] = set()
    for q, indices in ops_on.items():
        first = circuit.gates[indices[0]]
        if first.kind is GateKind.H:
            drop.add(indices[0])
        if (
            len(indices) >= 2
            and circuit.gates[indices[-1]].kind is GateKind.MEASURE
            and circuit.gates[indices[-2]].kind is GateKind.H
            and indices[-2] not in drop
        ):
            drop.add(indices[-2])
    gates = tuple(g for i, g in enumerate(circuit.gates) if i not in drop)
    return Circuit(circuit.num_qubits, gates)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineOptions:
    mode: str = "mantra"  # "mantra" | "standard"
    protocol: str = "adiabatic"
    x_basis: bool = False

    def __post_init__(self):
        if self.mode not in ("mantra", "standard"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.protocol not in ("adiabatic", "cphase"):
            raise ValueError(f"unknown protocol {self.protocol!r}")


def _append_program(
    raw: list[tuple[Zone, list[Gate]]], program: ZoneStepProgram
) -> None:
    for step in program.steps:
        raw.append((step.zone, list(step.gates)))


def mantra_pipeline(source, options: PipelineOptions = PipelineOptions()) -> ZoneStepProgram:
    """Full rewriting pipeline to a zone-step program.

    mantra:   fountain synthesis (Pauli inputs), CX lowering, H-pair
              cancellation, native ZZ substitution, movement-based SWAP
              elimination, preemptive alignment.
    standard: path synthesis, RZZ->CX RZ CX, CX lowering, per-dependency-layer
              zone stepping with no hoisting.

    Pauli-term files are compiled term by term (per-string execution); the
    per-term step sequences are concatenated with same-zone seams merged.
    """
    from .frontend import PauliTermFile  # local import to avoid a cycle

    if isinstance(source, PauliTermFile):
        # Basis absorption is only sound at program start; never per term.
        term_options = PipelineOptions(options.mode, options.protocol, x_basis=False)
        raw: list[tuple[Zone, list[Gate]]] = []
        remaps: tuple[RemapDirective, ...] = ()
        for term in source.terms:
            if term.weight == 0:
                continue
            sub = _compile_circuit(_synth(term, term_options), term_options)
            _append_program(raw, sub)
        num_qubits = source.num_qubits
        measures = [
            Gate(GateKind.MEASURE, (q,)) for q in range(num_qubits)
        ]
        raw.append((Zone.READOUT, measures))
        return ZoneStepProgram(num_qubits, _merge_steps(raw), remaps, x_basis=False)
    return _compile_circuit(source, options)


def _synth(term: PauliTerm, options: PipelineOptions) -> Circuit:
    if options.mode == "mantra":
        return synth_pauli_fountain(term)
    return synth_pauli_path(term)


def _compile_circuit(circuit: Circuit, options: PipelineOptions) -> ZoneStepProgram:
    if options.mode == "standard":
        lowered = lower_rzz_to_cx(circuit)
        lowered, remaps = lower_swap(lowered)
        if options.x_basis:
            lowered = absorb_x_basis(lowered)
        program = layer_zone_steps(lowered)
        return ZoneStepProgram(
            program.num_qubits, program.steps, remaps, x_basis=options.x_basis
        )
    c = lower_cx_to_cz(circuit)
    c = cancel_hadamard_pairs(c)
    c = substitute_rzz(c, options.protocol)
    c, remaps = lower_swap(c)
    if options.x_basis:
        c = absorb_x_basis(c)
    program = align_zone_steps(c)
    return ZoneStepProgram(
        program.num_qubits, program.steps, remaps, x_basis=options.x_basis
    )

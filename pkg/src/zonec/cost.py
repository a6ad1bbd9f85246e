"""Reduces a Timeline to an execution-time breakdown and a product-form
fidelity estimate.

Breakdown categories: load/store (zone-gap travel, incl. readout travel),
trap transfer (exposed remainder only — time hidden under concurrent travel
is not charged), shuttling, readout imaging, error-correction prep, and gate
execution. Fidelity multiplies per-gate, per-transfer, readout, decoherence
and (non-zoned policy) crosstalk factors per logical qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arch import MachineConfig, Policy
from .ir import Circuit, GateKind
from .scheduler import Event, EventKind, Timeline

_TRAVEL_KINDS = (
    EventKind.LOAD,
    EventKind.STORE,
    EventKind.READOUT_MOVE,
    EventKind.EC_PREP,
)


@dataclass(frozen=True)
class Breakdown:
    load_store_us: float
    trap_transfer_us: float
    shuttling_us: float
    readout_us: float
    error_correction_us: float
    gate_execution_us: float
    makespan_us: float

    @property
    def categories(self) -> dict:
        return {
            "load_store_us": self.load_store_us,
            "trap_transfer_us": self.trap_transfer_us,
            "shuttling_us": self.shuttling_us,
            "readout_us": self.readout_us,
            "error_correction_us": self.error_correction_us,
            "gate_execution_us": self.gate_execution_us,
        }

    def share(self, name: str) -> float:
        if self.makespan_us == 0.0:
            return 0.0
        return self.categories[name] / self.makespan_us


def _overlap(e: Event, others: list[Event]) -> float:
    """Total time of e covered by the union of the other events' intervals."""
    spans = sorted(
        (max(o.start_us, e.start_us), min(o.end_us, e.end_us))
        for o in others
        if o.end_us > e.start_us and o.start_us < e.end_us
    )
    covered, cursor = 0.0, e.start_us
    for lo, hi in spans:
        lo = max(lo, cursor)
        if hi > lo:
            covered += hi - lo
            cursor = hi
    return covered


def breakdown(timeline: Timeline) -> Breakdown:
    cat = {k: 0.0 for k in ("ls", "tt", "sh", "ro", "ec", "ge")}
    travel = [e for e in timeline.events if e.kind in _TRAVEL_KINDS]
    for e in timeline.events:
        if e.kind in (EventKind.LOAD, EventKind.STORE, EventKind.READOUT_MOVE):
            cat["ls"] += e.duration_us
        elif e.kind is EventKind.TRAP_TRANSFER:
            cat["tt"] += e.duration_us - _overlap(e, travel)
        elif e.kind is EventKind.SHUTTLE:
            cat["sh"] += e.duration_us
        elif e.kind is EventKind.READOUT_IMAGE:
            cat["ro"] += e.duration_us
        elif e.kind is EventKind.EC_PREP:
            cat["ec"] += e.duration_us
        else:
            cat["ge"] += e.duration_us
    return Breakdown(
        load_store_us=cat["ls"],
        trap_transfer_us=cat["tt"],
        shuttling_us=cat["sh"],
        readout_us=cat["ro"],
        error_correction_us=cat["ec"],
        gate_execution_us=cat["ge"],
        makespan_us=timeline.makespan_us,
    )


@dataclass(frozen=True)
class FidelityReport:
    per_qubit: dict
    total: float
    n_1q: int
    n_2q: int
    n_transfer: int
    factors: dict  # named component factors, product == total

    def factor(self, name: str) -> float:
        return self.factors[name]


def physical_gate_count(circuit: Circuit, config: MachineConfig) -> int:
    """Transversal physical pulses: each logical 1Q/2Q gate is applied to all
    data atoms of the code block in parallel."""
    data_atoms = config.physical_per_logical // 2
    logical = sum(
        1
        for g in circuit.gates
        if g.kind not in (GateKind.RZ, GateKind.MEASURE)
    )
    return logical * data_atoms


def fidelity(
    timeline: Timeline, circuit: Circuit, config: MachineConfig
) -> FidelityReport:
    """Per-qubit fidelity product; RZ is virtual and error-free, 2Q gates
    are attributed to the lower-index operand so the per-qubit product equals
    the component-factor product exactly."""
    n = timeline.num_qubits
    n1q = {q: 0 for q in range(n)}
    n2q = {q: 0 for q in range(n)}
    for g in circuit.gates:
        if g.kind in (GateKind.RZ, GateKind.MEASURE):
            continue
        if len(g.qubits) == 1:
            n1q[g.qubits[0]] += 1
        else:
            n2q[min(g.qubits)] += 1
    measured = set(timeline.measured)
    per_qubit = {}
    decoherence = 1.0
    xt1 = xtc = 0
    for q in range(n):
        t_in_s = timeline.t_in_us.get(q, 0.0) * 1e-6
        t_out_s = timeline.t_out_us.get(q, 0.0) * 1e-6
        dec = math.exp(
            -(t_in_s / config.coherence_in_storage_s + t_out_s / config.coherence_out_s)
        )
        decoherence *= dec
        f = (
            config.f_1q ** n1q[q]
            * config.f_2q ** n2q[q]
            * config.f_transfer ** timeline.transfers.get(q, 0)
            * dec
        )
        if q in measured:
            f *= config.f_readout
        if config.policy is Policy.TYPE3:
            e1 = timeline.xtalk_1q_exposures.get(q, 0)
            ec = timeline.xtalk_cz_exposures.get(q, 0)
            f *= (1.0 - config.xtalk_1q) ** e1 * (1.0 - config.xtalk_cz) ** ec
            xt1 += e1
            xtc += ec
        per_qubit[q] = f
    total_1q = sum(n1q.values())
    total_2q = sum(n2q.values())
    total_tr = sum(timeline.transfers.values())
    factors = {
        "f_1q": config.f_1q**total_1q,
        "f_2q": config.f_2q**total_2q,
        "f_transfer": config.f_transfer**total_tr,
        "f_readout": config.f_readout ** len(measured),
        "f_decoherence": decoherence,
    }
    if config.policy is Policy.TYPE3:
        factors["f_crosstalk"] = (1.0 - config.xtalk_1q) ** xt1 * (
            1.0 - config.xtalk_cz
        ) ** xtc
    total = 1.0
    for v in factors.values():
        total *= v
    return FidelityReport(
        per_qubit=per_qubit,
        total=total,
        n_1q=total_1q,
        n_2q=total_2q,
        n_transfer=total_tr,
        factors=factors,
    )


# ---------------------------------------------------------------------------
# Stable serialization
# ---------------------------------------------------------------------------

REPORT_KEYS = (
    "load_store_us",
    "trap_transfer_us",
    "shuttling_us",
    "readout_us",
    "error_correction_us",
    "gate_execution_us",
    "makespan_us",
    "loads",
    "stores",
    "n_1q",
    "n_2q",
    "n_transfer",
    "fidelity",
)


def report_record(bd: Breakdown, fr: FidelityReport, loads: int, stores: int) -> dict:
    rec = dict(bd.categories)
    rec["makespan_us"] = bd.makespan_us
    rec["loads"] = loads
    rec["stores"] = stores
    rec["n_1q"] = fr.n_1q
    rec["n_2q"] = fr.n_2q
    rec["n_transfer"] = fr.n_transfer
    rec["fidelity"] = fr.total
    return {k: rec[k] for k in REPORT_KEYS}


def format_record(rec: dict) -> str:
    lines = []
    for k, v in rec.items():
        if isinstance(v, float):
            lines.append(f"{k} = {v:.6f}")
        else:
            lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def csv_header(extra: tuple[str, ...] = ()) -> str:
    return ",".join(tuple(extra) + REPORT_KEYS)


def csv_row(rec: dict, extra: tuple = ()) -> str:
    vals = [str(x) for x in extra]
    for k in REPORT_KEYS:
        v = rec[k]
        vals.append(f"{v:.6f}" if isinstance(v, float) else str(v))
    return ",".join(vals)

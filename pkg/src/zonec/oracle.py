"""Dense reference simulator used to verify every rewrite on small instances.

Qubit ordering is little-endian: qubit 0 is the least significant bit of the
basis-state index. Two-qubit matrices follow the protocols-module basis
|00>,|01>,|10>,|11> with the first-listed operand as the left bit.
"""

from __future__ import annotations

import numpy as np

from . import protocols
from .ir import Circuit, Gate, GateKind

MAX_UNITARY_QUBITS = 10
MAX_STATE_QUBITS = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def gate_matrix(gate: Gate) -> np.ndarray:
    k, p = gate.kind, gate.params
    if k is GateKind.H:
        return _H
    if k is GateKind.X:
        return _X
    if k is GateKind.RX:
        t = p[0] / 2.0
        return np.array(
            [[np.cos(t), -1j * np.sin(t)], [-1j * np.sin(t), np.cos(t)]], dtype=complex
        )
    if k is GateKind.RZ:
        return np.diag([np.exp(-1j * p[0] / 2.0), np.exp(1j * p[0] / 2.0)])
    if k is GateKind.CX:
        return _CX
    if k is GateKind.CZ:
        return _CZ
    if k is GateKind.SWAP:
        return _SWAP
    if k is GateKind.RZZ:
        return protocols.rzz_matrix(p[0])
    if k is GateKind.CPHASE:
        return protocols.cphase_matrix(p[0])
    if k is GateKind.LP:
        return protocols.lp_matrix(p[0])
    if k is GateKind.AD:
        return protocols.adiabatic_matrix(p[0], p[1])
    raise ValueError(f"no matrix for {k}")


def _apply(tensor: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply a gate to the first n (qubit) axes of tensor.

    Axis n-1-q corresponds to qubit q (little-endian flat index).
    """
    mat = gate_matrix(gate)
    axes = [n - 1 - q for q in gate.qubits]
    k = len(axes)
    mat = mat.reshape((2,) * (2 * k))
    tensor = np.tensordot(mat, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(tensor, list(range(k)), axes)


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (program order), n <= 10, no MEASURE."""
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise ValueError(f"unitary_of limited to {MAX_UNITARY_QUBITS} qubits, got {n}")
    if any(g.kind is GateKind.MEASURE for g in circuit.gates):
        raise ValueError("unitary_of cannot simulate MEASURE")
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for gate in circuit.gates:
        u = _apply(u, gate, n)
    return u.reshape(dim, dim)


def statevector_of(circuit: Circuit, initial: int = 0) -> np.ndarray:
    """State after the circuit from computational basis state |initial>."""
    n = circuit.num_qubits
    if n > MAX_STATE_QUBITS:
        raise ValueError(f"statevector_of limited to {MAX_STATE_QUBITS} qubits, got {n}")
    if not 0 <= initial < 2**n:
        raise ValueError("initial basis state out of range")
    psi = np.zeros(2**n, dtype=complex)
    psi[initial] = 1.0
    psi = psi.reshape((2,) * n)
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            continue
        psi = _apply(psi, gate, n)
    return psi.reshape(-1)


def pauli_expectation(state: np.ndarray, label: str) -> float:
    """<state| P |state> for a Pauli string (real part; P is Hermitian)."""
    n = int(np.log2(state.size))
    assert len(label) == n
    phi = state.reshape((2,) * n)
    _Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    _Z = np.diag([1.0, -1.0]).astype(complex)
    mats = {"X": _X, "Y": _Y, "Z": _Z}
    for q, ch in enumerate(label):
        if ch == "I":
            continue
        ax = n - 1 - q
        phi = np.moveaxis(
            np.tensordot(mats[ch], phi, axes=([1], [ax])), 0, ax
        )
    return float(np.real(np.vdot(state, phi.reshape(-1))))

import os

from qiskit import qasm2
from qiskit.qasm2 import LEGACY_INCLUDE_PATH


class QuantumCircuit:
    @staticmethod
    def from_qasm_file(path: str | os.PathLike) -> "QuantumCircuit":
        return qasm2.load(path, include_path=LEGACY_INCLUDE_PATH, strict=False)

    @staticmethod
    def from_qasm_str(qasm_str: str) -> "QuantumCircuit":
        return qasm2.loads(qasm_str, include_path=LEGACY_INCLUDE_PATH, strict=False)

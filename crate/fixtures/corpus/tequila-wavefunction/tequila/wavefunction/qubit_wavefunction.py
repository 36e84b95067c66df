import numpy as np


class QubitWaveFunction:
    def __init__(self, n_qubits: int):
        self._n_qubits = n_qubits
        self._state = {}

    def to_array(self, n_qubits: int):
        coefficients = np.zeros(2**n_qubits, dtype=complex)
        for i in range(2**n_qubits):
            coefficients[i] = self._state.get(i, 0.0)
        return coefficients

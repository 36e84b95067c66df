import numpy as np


def zero_superoperator(num_qubits: int) -> np.ndarray:
    return np.zeros(2 ** (2 * num_qubits), dtype=np.complex64)

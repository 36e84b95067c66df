import numpy as np


def maximally_mixed(num_qubits: int) -> np.ndarray:
    N = 2**num_qubits
    rho = np.zeros((N, N), dtype=complex)
    np.fill_diagonal(rho, 1.0 / N)
    return rho

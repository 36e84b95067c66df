import numpy as np


def bench_statevector(num_qubits=20):
    return np.zeros(2**num_qubits, dtype=complex)

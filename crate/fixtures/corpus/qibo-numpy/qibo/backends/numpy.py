import numpy as np


class NumpyBackend:
    def __init__(self):
        self.np = np
        self.dtype = np.complex128

    def zero_density_matrix(self, nqubits):
        dtype = self.dtype
        self.state = np.zeros(2 * (2**nqubits,), dtype=dtype)
        for i in range(2**nqubits):
            self.state[i, i] = 0
        self.state[0, 0] = 1
        return self.state

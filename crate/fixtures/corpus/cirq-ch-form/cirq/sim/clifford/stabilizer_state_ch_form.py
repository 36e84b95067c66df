import numpy as np

from cirq import qis


class StabilizerStateChForm(qis.StabilizerState):
    def __init__(self, num_qubits: int, initial_state: int = 0) -> None:
        self.n = num_qubits
        self.F = np.eye(self.n, dtype=bool)
        self.G = np.eye(self.n, dtype=bool)
        self.M = np.zeros((self.n, self.n), dtype=bool)
        self.gamma = np.zeros(self.n, dtype=int)
        self.v = np.zeros(self.n, dtype=bool)
        self.s = np.zeros(self.n, dtype=bool)
        self.omega: complex = 1

    def to_state_vector(self) -> np.ndarray:
        wf = np.zeros(2**self.n, dtype=complex)
        for x in range(2**self.n):
            y = bin(x)[2:].zfill(self.n)
            wf[x] = self.inner_product_of_state_and_x(int(y, 2))
        return wf

import numpy as np

MAX_QUBITS_STATEVECTOR = 50


class StabilizerStateChForm:
    def __init__(self, num_qubits: int) -> None:
        self.n = num_qubits

    def to_state_vector(self) -> np.ndarray:
        if self.n > MAX_QUBITS_STATEVECTOR:
            raise ValueError(f"num_qubits={self.n} exceeds maximum supported ({MAX_QUBITS_STATEVECTOR})")
        wf = np.zeros(2**self.n, dtype=complex)
        for x in range(2**self.n):
            wf[x] = self.inner_product_of_state_and_x(x)
        return wf

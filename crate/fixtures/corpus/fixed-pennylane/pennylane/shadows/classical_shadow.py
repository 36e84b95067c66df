import numpy as np

MAX_QUBITS_DENSITY_MATRIX = 25


class ClassicalShadow:
    def __init__(self, bits, recipes, wire_map=None):
        self.bits = bits
        self.recipes = recipes
        self.wire_map = wire_map or list(range(bits.shape[1]))

    def global_snapshots(self, n_wires):
        if n_wires > MAX_QUBITS_DENSITY_MATRIX:
            raise ValueError(
                f"Density matrix simulation requires 2**(2*{n_wires}) = "
                f"{2**(2*n_wires):.2e} elements. Maximum supported: {MAX_QUBITS_DENSITY_MATRIX}"
            )
        rho = np.zeros((2 ** n_wires, 2 ** n_wires), dtype=np.complex128)
        return rho

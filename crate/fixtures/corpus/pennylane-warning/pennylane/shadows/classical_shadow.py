import warnings

import numpy as np


class ClassicalShadow:
    def __init__(self, bits, recipes, wire_map=None):
        self.bits = bits
        self.recipes = recipes
        self.wire_map = wire_map or list(range(bits.shape[1]))

    def global_snapshots(self, n_wires):
        if n_wires > 16:
            warnings.warn(
                "Querying density matrices for n_wires > 16 is not recommended, "
                "operation will take a long time"
            )
        rho = np.zeros((2 ** n_wires, 2 ** n_wires), dtype=np.complex128)
        return rho

class Simulator:
    def __init__(self, rnd_seed=None):
        self._map = {}
        self._seed = rnd_seed

    def cheat(self, num_qubits):
        wavefunction = [0.0] * (2 ** num_qubits)
        for i in range(2 ** num_qubits):
            wavefunction[i] = self._amplitude(i)
        return wavefunction

import paddle


def zero_state(num_qubits: int, backend: str = "state_vector"):
    if backend == "state_vector":
        ket = paddle.zeros([2**num_qubits, 1])
        ket[0] = 1
        return ket
    dm = paddle.zeros([2**num_qubits, 2**num_qubits])
    dm[0, 0] = 1
    return dm

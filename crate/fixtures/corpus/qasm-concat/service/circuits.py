from qiskit import QuantumCircuit

BELL = QuantumCircuit.from_qasm_str("OPENQASM 2.0; include \"qelib1.inc\"; qreg q[2];")


def build_circuit(user_input):
    qasm_str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n" + user_input
    circuit = QuantumCircuit.from_qasm_str(qasm_str)
    return circuit


def build_inline(user_input):
    circuit = QuantumCircuit.from_qasm_str("OPENQASM 2.0;" + user_input)
    return circuit


def load_user_file(user_supplied_path):
    circuit = QuantumCircuit.from_qasm_file(user_supplied_path)
    return circuit

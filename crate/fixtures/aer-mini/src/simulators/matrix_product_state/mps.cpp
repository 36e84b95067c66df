#include <cstdint>
#include <vector>

#include "simulators/matrix_product_state/mps.hpp"

namespace MatrixProductState {

void MPS::apply_multi_qubit_gate(const reg_t &qubits, const cmatrix_t &mat) {
  const uint64_t num_qubits = qubits.size();
  uint64_t indexes[1ULL << num_qubits];
  for (uint64_t i = 0; i < num_qubits; i++)
    indexes[i] = qubits[i];
  apply_matrix_internal(indexes, num_qubits, mat);
}

void MPS::move_qubits_to_centralized_indices(const reg_t &indices) {
  for (size_t i = 0; i + 1 < indices.size(); i++) {
    if (indices[i + 1] - indices[i] > 1)
      move_qubit(indices[i + 1], indices[i] + 1);
  }
}

} // namespace MatrixProductState

#include <stdexcept>
#include <string>

namespace QV {

template <typename data_t>
void QubitVector<data_t>::set_num_qubits(size_t num_qubits) {
  if (num_qubits >= 64)
    throw std::invalid_argument(
      "QubitVector: num_qubits=" + std::to_string(num_qubits) + " >= 64 not supported"
    );
  free_checkpoint();
  if (num_qubits != num_qubits_) { free_mem(); }
  data_size_ = BITS[num_qubits];
  allocate_mem(data_size_);
  num_qubits_ = num_qubits;
}

} // namespace QV

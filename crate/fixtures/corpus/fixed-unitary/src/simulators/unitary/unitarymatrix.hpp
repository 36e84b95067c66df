#include <stdexcept>
#include <string>

namespace QV {

template <class data_t>
void UnitaryMatrix<data_t>::set_num_qubits(size_t num_qubits) {
  if (num_qubits >= 32)
    throw std::invalid_argument(
      "UnitaryMatrix: requires 2*num_qubits < 64; got " + std::to_string(num_qubits)
    );
  num_qubits_ = num_qubits;
  rows_ = 1ULL << num_qubits;
  BaseVector::set_num_qubits(2 * num_qubits);
}

} // namespace QV

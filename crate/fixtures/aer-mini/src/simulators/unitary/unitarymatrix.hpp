#ifndef _qv_unitary_matrix_hpp_
#define _qv_unitary_matrix_hpp_

#include <sstream>
#include <stdexcept>

#include "simulators/statevector/qubitvector.hpp"

namespace QV {

template <class data_t = double>
class UnitaryMatrix : public QubitVector<data_t> {
public:
  using BaseVector = QubitVector<data_t>;

  void set_num_qubits(size_t num_qubits);
  void check_dimension(const UnitaryMatrix &other) const;

protected:
  size_t num_qubits_ = 0;
  size_t rows_ = 1;
};

template <class data_t>
void UnitaryMatrix<data_t>::check_dimension(const UnitaryMatrix &other) const {
  if (other.rows_ * other.rows_ != (1ULL << (num_qubits_ * 2))) {
    std::stringstream ss;
    ss << "UnitaryMatrix: size " << other.rows_ << " does not match " << rows_;
    throw std::runtime_error(ss.str());
  }
}

template <class data_t>
void UnitaryMatrix<data_t>::set_num_qubits(size_t num_qubits) {
  num_qubits_ = num_qubits;
  rows_ = 1ULL << num_qubits;
  BaseVector::set_num_qubits(2 * num_qubits);
}

} // namespace QV

#endif

#ifndef _qv_superoperator_hpp_
#define _qv_superoperator_hpp_

#include "simulators/density_matrix/densitymatrix.hpp"

namespace QV {

template <class data_t = double>
class Superoperator : public DensityMatrix<data_t> {
public:
  using BaseVector = DensityMatrix<data_t>;

  void set_num_qubits(size_t num_qubits);
  void initialize_from_matrix(size_t num_qubits, const data_t *mat);

protected:
  size_t num_qubits_ = 0;
};

template <class data_t>
void Superoperator<data_t>::set_num_qubits(size_t num_qubits) {
  num_qubits_ = num_qubits;
  BaseVector::set_num_qubits(2 * num_qubits);
}

template <class data_t>
void Superoperator<data_t>::initialize_from_matrix(size_t num_qubits, const data_t *mat) {
  BaseVector::set_num_qubits(num_qubits * 2);
  this->copy_from(mat);
}

} // namespace QV

#endif

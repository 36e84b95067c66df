#ifndef _qv_density_matrix_hpp_
#define _qv_density_matrix_hpp_

#include "simulators/unitary/unitarymatrix.hpp"

namespace QV {

template <typename data_t = double>
class DensityMatrix : public UnitaryMatrix<data_t> {
public:
  using BaseMatrix = UnitaryMatrix<data_t>;

  DensityMatrix() : DensityMatrix(0) {}
  explicit DensityMatrix(size_t num_qubits);

  void initialize();
  double probability(uint64_t outcome) const;

  void copy_from(const data_t *mat);
};

template <typename data_t>
void DensityMatrix<data_t>::initialize() {
  BaseMatrix::zero();
  BaseMatrix::data_[0] = 1.0;
}

} // namespace QV

#endif

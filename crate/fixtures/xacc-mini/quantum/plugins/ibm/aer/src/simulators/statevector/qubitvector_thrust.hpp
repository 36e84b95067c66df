#ifndef _qv_qubit_vector_thrust_hpp_
#define _qv_qubit_vector_thrust_hpp_

#include <thrust/device_vector.h>

namespace QV {

template <typename data_t = double>
class QubitVectorThrust {
public:
  void set_num_qubits(size_t num_qubits) {
    num_qubits_ = num_qubits;
    data_size_ = 1ull << num_qubits;
    buffer_.resize(data_size_);
  }

private:
  size_t num_qubits_ = 0;
  size_t data_size_ = 0;
  thrust::device_vector<thrust::complex<data_t>> buffer_;
};

} // namespace QV

#endif

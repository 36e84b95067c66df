#ifndef _qv_qubitvector_hpp_
#define _qv_qubitvector_hpp_

#include <array>
#include <cstdint>
#include <cstdlib>

namespace QV {

static const std::array<uint64_t, 64> BITS = {1, 2, 4, 8, 16, 32, 64, 128};

template <typename data_t = double>
class QubitVector {
public:
  void set_num_qubits(size_t num_qubits);
  void zero();

protected:
  void allocate_mem(size_t data_size);
  void free_mem();
  void free_checkpoint();

  size_t num_qubits_ = 0;
  size_t data_size_ = 0;
  data_t *data_ = nullptr;
  data_t *checkpoint_ = nullptr;
};

template <typename data_t>
void QubitVector<data_t>::set_num_qubits(size_t num_qubits) {
  free_checkpoint();
  if (num_qubits != num_qubits_) { free_mem(); }
  data_size_ = BITS[num_qubits];  // no bounds check
  allocate_mem(data_size_);
  num_qubits_ = num_qubits;
}

template <typename data_t>
void QubitVector<data_t>::zero() {
  const uint64_t end = 1ULL << num_qubits_;
  for (uint64_t k = 0; k < end; ++k)
    data_[k] = 0.0;
}

} // namespace QV

#endif

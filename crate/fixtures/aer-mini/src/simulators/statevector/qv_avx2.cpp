#include <immintrin.h>
#include <cstdint>

#include "simulators/statevector/qv_avx2.hpp"

namespace QV {

template <typename FloatType>
void apply_matrix_avx(FloatType *qv, uint64_t num_qubits, const uint64_t *qregs,
                      const FloatType *mat, size_t omp_threads) {
  const uint64_t end = 1ULL << (num_qubits + 1);
#pragma omp parallel for num_threads(omp_threads)
  for (int64_t k = 0; k < static_cast<int64_t>(end); k += 4) {
    __m256d v = _mm256_loadu_pd(reinterpret_cast<const double *>(qv + k));
    _mm256_storeu_pd(reinterpret_cast<double *>(qv + k), v);
  }
}

template <typename FloatType>
void apply_diagonal_avx(FloatType *qv, uint64_t num_qubits, const FloatType *diag) {
  const uint64_t half = 1ULL << num_qubits;
  for (uint64_t k = 0; k < half; ++k)
    qv[k] *= diag[k & 3];
}

template <typename FloatType>
bool is_avx_aligned(const FloatType *qv, uint64_t num_qubits) {
  const uint64_t bytes = sizeof(FloatType) * (1ULL << (num_qubits + 1));
  return (reinterpret_cast<uintptr_t>(qv) % 32 == 0) && bytes >= 32;
}

} // namespace QV

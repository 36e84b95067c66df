#include <array>
#include <cstdint>
#include <stdexcept>

namespace CHSimulator {

static const std::array<uint64_t, 64> BITS = {1, 2, 4, 8, 16, 32, 64, 128};

class Runner {
public:
  void initialize(uint64_t n) {
    if (n > 63) throw std::invalid_argument("n > 63 not supported");
    num_qubits_ = n;
    dim_ = BITS[n];
  }

private:
  uint64_t num_qubits_ = 0;
  uint64_t dim_ = 0;
};

} // namespace CHSimulator

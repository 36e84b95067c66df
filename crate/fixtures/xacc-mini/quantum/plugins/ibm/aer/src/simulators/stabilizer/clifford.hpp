#ifndef _clifford_hpp
#define _clifford_hpp

#include <vector>

#include "simulators/stabilizer/pauli.hpp"

namespace Clifford {

class Clifford {
public:
  explicit Clifford(uint64_t nqubit) : num_qubits_(nqubit) {
    table_.reserve(2 * nqubit);
    for (uint64_t i = 0; i < 2 * nqubit; i++)
      table_.emplace_back(nqubit);
    phases_.assign(2 * nqubit, 0);
  }

  void CX(uint64_t qc, uint64_t qt);
  void H(uint64_t qubit);
  void S(uint64_t qubit);

private:
  uint64_t num_qubits_ = 0;
  std::vector<Pauli::Pauli> table_;
  std::vector<int> phases_;
};

} // namespace Clifford

#endif

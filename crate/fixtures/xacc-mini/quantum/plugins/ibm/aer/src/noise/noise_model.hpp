#ifndef _aer_noise_model_hpp_
#define _aer_noise_model_hpp_

#include <string>
#include <unordered_map>

#include "framework/types.hpp"
#include "noise/quantum_error.hpp"

namespace AER {
namespace Noise {

class NoiseModel {
public:
  bool is_ideal() const { return ideal_; }
  void add_quantum_error(const QuantumError &error, const stringset_t &op_labels);

private:
  bool ideal_ = true;
  std::unordered_map<std::string, std::vector<QuantumError>> errors_;
};

} // namespace Noise
} // namespace AER

#endif

#ifndef _aer_controller_hpp_
#define _aer_controller_hpp_

#include "framework/types.hpp"

namespace AER {

class Controller {
public:
  void set_config(const stringmap_t<std::string> &config);
  size_t required_memory_mb(uint_t num_qubits) const;

protected:
  int max_parallel_threads_ = 0;
  int max_parallel_experiments_ = 1;
  size_t max_memory_mb_ = 0;
};

} // namespace AER

#endif

#include "aer_accelerator.hpp"

#include "simulators/statevector/qubitvector.hpp"

namespace xacc {
namespace quantum {

void AerAccelerator::initialize(const HeterogeneousMap &params) {
  m_shots = params.get_or_default("shots", 1024);
  m_simType = params.get_or_default("sim-type", std::string("qasm"));
}

void AerAccelerator::execute(std::shared_ptr<AcceleratorBuffer> buffer,
                             const std::shared_ptr<CompositeInstruction> program) {
  QV::QubitVector<double> state;
  state.set_num_qubits(buffer->size());
  run_circuit(state, program, m_shots);
}

} // namespace quantum
} // namespace xacc

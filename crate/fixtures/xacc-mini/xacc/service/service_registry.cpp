#include "service_registry.hpp"

#include <string>

namespace xacc {

void ServiceRegistry::initialize(const std::string &root) {
  if (initialized_) {
    return;
  }
  root_path_ = root;
  load_plugins(root_path_ + "/plugins");
  initialized_ = true;
}

bool ServiceRegistry::has_service(const std::string &name) const {
  return services_.find(name) != services_.end();
}

} // namespace xacc

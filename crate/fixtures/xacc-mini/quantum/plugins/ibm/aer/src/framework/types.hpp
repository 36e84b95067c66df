#ifndef _aer_framework_types_hpp_
#define _aer_framework_types_hpp_

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace AER {

using int_t = int_fast64_t;
using uint_t = uint_fast64_t;
using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;
using reg_t = std::vector<uint_t>;
using stringset_t = std::set<std::string>;
template <typename T>
using stringmap_t = std::map<std::string, T>;

} // namespace AER

#endif

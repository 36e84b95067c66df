#ifndef _aer_framework_utils_hpp_
#define _aer_framework_utils_hpp_

#include <algorithm>
#include <string>

#include "framework/types.hpp"

namespace AER {
namespace Utils {

inline uint_t popcount(uint_t count) {
  count = (count & 0x5555555555555555) + ((count >> 1) & 0x5555555555555555);
  count = (count & 0x3333333333333333) + ((count >> 2) & 0x3333333333333333);
  count = (count & 0x0f0f0f0f0f0f0f0f) + ((count >> 4) & 0x0f0f0f0f0f0f0f0f);
  return (count * 0x0101010101010101) >> 56;
}

inline std::string padleft(const std::string &s, char c, size_t n) {
  return std::string(n > s.size() ? n - s.size() : 0, c) + s;
}

} // namespace Utils
} // namespace AER

#endif

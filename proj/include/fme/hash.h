#ifndef FME_HASH_H_
#define FME_HASH_H_

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace fme {

// 64-bit FNV-1a as 16 lowercase hex digits.
inline std::string Fnv1aHex(std::string_view text) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fme

#endif  // FME_HASH_H_

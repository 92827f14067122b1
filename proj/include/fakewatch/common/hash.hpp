#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace fakewatch {

// 64-bit FNV-1a, incremental.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Fnv1a& update_u64(std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    return update(std::string_view(buf, 8));
  }

  Fnv1a& update_double(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    return update_u64(bits);
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::string_view bytes) { return Fnv1a().update(bytes).digest(); }

std::string to_hex(std::uint64_t v);

}  // namespace fakewatch

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fakewatch::model_hub {

// Little-endian portable encoding. Doubles are stored as their IEEE-754 bit
// pattern, so round trips are exact.
class BinaryWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v);
  void str(std::string_view s);
  void f64_vec(const std::vector<double>& v);
  void u32_vec(const std::vector<std::uint32_t>& v);
  void i32_vec(const std::vector<std::int32_t>& v);

  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

// Throws kIntegrity when reading past the end.
class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64();
  std::string str();
  std::vector<double> f64_vec();
  std::vector<std::uint32_t> u32_vec();
  std::vector<std::int32_t> i32_vec();
  // Element count prefix bounded by the remaining bytes.
  std::size_t count(std::size_t min_element_bytes);

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const;

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace fakewatch::model_hub

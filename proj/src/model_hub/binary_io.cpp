#include "fakewatch/model_hub/binary_io.hpp"

#include <cstring>

#include "fakewatch/common/error.hpp"

namespace fakewatch::model_hub {

void BinaryWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void BinaryWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void BinaryWriter::f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  u64(bits);
}

void BinaryWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  buf_.append(s);
}

void BinaryWriter::f64_vec(const std::vector<double>& v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void BinaryWriter::u32_vec(const std::vector<std::uint32_t>& v) {
  u64(v.size());
  for (auto x : v) u32(x);
}

void BinaryWriter::i32_vec(const std::vector<std::int32_t>& v) {
  u64(v.size());
  for (auto x : v) u32(static_cast<std::uint32_t>(x));
}

void BinaryReader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) throw Error(ErrorCode::kIntegrity, "model payload truncated");
}

std::uint8_t BinaryReader::u8() {
  need(1);
  return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t BinaryReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t BinaryReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
  pos_ += 8;
  return v;
}

double BinaryReader::f64() {
  std::uint64_t bits = u64();
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

std::string BinaryReader::str() {
  std::uint32_t n = u32();
  need(n);
  std::string s(data_.substr(pos_, n));
  pos_ += n;
  return s;
}

std::size_t BinaryReader::count(std::size_t min_element_bytes) {
  std::uint64_t n = u64();
  if (min_element_bytes > 0 && n > (data_.size() - pos_) / min_element_bytes) {
    throw Error(ErrorCode::kIntegrity, "model payload element count exceeds file size");
  }
  return static_cast<std::size_t>(n);
}

std::vector<double> BinaryReader::f64_vec() {
  std::size_t n = count(8);
  std::vector<double> v(n);
  for (auto& x : v) x = f64();
  return v;
}

std::vector<std::uint32_t> BinaryReader::u32_vec() {
  std::size_t n = count(4);
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = u32();
  return v;
}

std::vector<std::int32_t> BinaryReader::i32_vec() {
  std::size_t n = count(4);
  std::vector<std::int32_t> v(n);
  for (auto& x : v) x = static_cast<std::int32_t>(u32());
  return v;
}

}  // namespace fakewatch::model_hub

#pragma once

// Little-endian primitive I/O shared by the binary readers/writers.

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "insight/errors.hpp"

namespace insight::detail {

template <typename T>
bool read_le(std::istream& in, T& value) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) return false;
  T v{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
  }
  value = v;
  return true;
}

inline bool read_f32_le(std::istream& in, float& value) {
  uint32_t bits = 0;
  if (!read_le(in, bits)) return false;
  std::memcpy(&value, &bits, sizeof(bits));
  return true;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

inline void write_f32_le(std::ostream& out, float value) {
  uint32_t bits = 0;
  std::memcpy(&bits, &value, sizeof(bits));
  write_le(out, bits);
}

inline void write_i32_le(std::ostream& out, int32_t value) {
  write_le(out, static_cast<uint32_t>(value));
}

inline bool read_i32_le(std::istream& in, int32_t& value) {
  uint32_t bits = 0;
  if (!read_le(in, bits)) return false;
  value = static_cast<int32_t>(bits);
  return true;
}

}  // namespace insight::detail

#include "insight/rle_mask.hpp"

#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "insight/errors.hpp"

namespace insight {

std::size_t RleMask::bit_count() const {
  std::size_t n = 0;
  for (const auto& [start, len] : runs) n += len;
  return n;
}

void RleMask::validate() const {
  const std::size_t total = pixel_count();
  uint64_t prev_end = 0;
  bool first = true;
  for (const auto& [start, len] : runs) {
    if (len == 0) throw ValidationError("zero-length run");
    const uint64_t end = static_cast<uint64_t>(start) + len;
    if (end > total) {
      throw ValidationError("run [" + std::to_string(start) + ", +" +
                            std::to_string(len) + ") exceeds " +
                            std::to_string(total) + " pixels");
    }
    if (!first && start < prev_end) {
      throw ValidationError("runs unsorted or overlapping at start " +
                            std::to_string(start));
    }
    prev_end = end;
    first = false;
  }
}

std::vector<bool> decode_mask(const RleMask& mask) {
  mask.validate();
  std::vector<bool> bits(mask.pixel_count(), false);
  for (const auto& [start, len] : mask.runs) {
    for (uint32_t i = 0; i < len; ++i) bits[start + i] = true;
  }
  return bits;
}

RleMask encode_mask(const std::vector<bool>& bits, uint32_t width, uint32_t height) {
  if (bits.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("bitmap size does not match mask dimensions");
  }
  RleMask mask;
  mask.width = width;
  mask.height = height;
  std::size_t i = 0;
  while (i < bits.size()) {
    if (!bits[i]) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < bits.size() && bits[i]) ++i;
    mask.runs.emplace_back(static_cast<uint32_t>(start),
                           static_cast<uint32_t>(i - start));
  }
  return mask;
}

RleMask read_rle_mask(std::istream& in) {
  RleMask mask;
  uint32_t run_count = 0;
  if (!detail::read_le(in, mask.width) || !detail::read_le(in, mask.height) ||
      !detail::read_le(in, run_count)) {
    throw ParseError(ParseErrorKind::Truncated, "mask header truncated");
  }
  mask.runs.reserve(run_count);
  for (uint32_t i = 0; i < run_count; ++i) {
    uint32_t start = 0, len = 0;
    if (!detail::read_le(in, start) || !detail::read_le(in, len)) {
      throw ParseError(ParseErrorKind::Truncated, "mask runs truncated");
    }
    mask.runs.emplace_back(start, len);
  }
  if (in.peek() != std::istream::traits_type::eof()) {
    throw ParseError(ParseErrorKind::TrailingData, "mask file has trailing bytes");
  }
  mask.validate();
  return mask;
}

RleMask read_rle_mask(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mask file: " + path);
  return read_rle_mask(in);
}

void write_rle_mask(const RleMask& mask, std::ostream& out) {
  mask.validate();
  detail::write_le(out, mask.width);
  detail::write_le(out, mask.height);
  detail::write_le(out, static_cast<uint32_t>(mask.runs.size()));
  for (const auto& [start, len] : mask.runs) {
    detail::write_le(out, start);
    detail::write_le(out, len);
  }
}

void write_rle_mask(const RleMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write mask file: " + path);
  write_rle_mask(mask, out);
  if (!out) throw IoError("short write: " + path);
}

}  // namespace insight

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace insight {

/// Run-length encoded binary mask over row-major pixel order.
/// Runs must be sorted, non-overlapping and within width*height.
struct RleMask {
  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<std::pair<uint32_t, uint32_t>> runs;  // (start, length)

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  /// Sum of run lengths.
  std::size_t bit_count() const;
  /// Throws ValidationError if runs are unsorted, overlapping, zero-length
  /// or out of bounds.
  void validate() const;
};

/// Expands to one flag per pixel. Validates first.
std::vector<bool> decode_mask(const RleMask& mask);

/// Packs a pixel bitmap into sorted maximal runs.
RleMask encode_mask(const std::vector<bool>& bits, uint32_t width, uint32_t height);

/// Mask file format: u32 width, u32 height, u32 run_count, then
/// (u32 start, u32 length) pairs, little-endian.
RleMask read_rle_mask(std::istream& in);
RleMask read_rle_mask(const std::string& path);
void write_rle_mask(const RleMask& mask, std::ostream& out);
void write_rle_mask(const RleMask& mask, const std::string& path);

}  // namespace insight

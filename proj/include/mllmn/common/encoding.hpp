#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mllmn/common/types.hpp"

namespace mllmn {

/// Big-endian byte writer for canonical encodings.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void digest(const Digest& d) { bytes(d); }

  const std::vector<std::uint8_t>& data() const& { return buf_; }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Reader counterpart. Throws Error(parse_error) on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : buf_(b) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::vector<std::uint8_t> bytes(std::size_t n);
  Digest digest();

  bool done() const noexcept { return pos_ == buf_.size(); }
  std::size_t remaining() const noexcept { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const;

  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

/// Watts to integer milliwatts, the fixed-point unit of every canonical encoding.
std::int64_t to_milliwatts(double watts);

}  // namespace mllmn

#include "mllmn/common/encoding.hpp"

#include <cmath>

#include "mllmn/common/error.hpp"

namespace mllmn {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::invalid_config: return "invalid-config";
    case Errc::unreachable_reliability: return "unreachable-reliability";
    case Errc::empty_phase: return "empty-phase";
    case Errc::empty_input: return "empty-input";
    case Errc::no_quorum: return "no-commit";
    case Errc::invalid_allocation: return "invalid-allocation";
    case Errc::solver_error: return "solver-error";
    case Errc::refused: return "refused";
    case Errc::parse_error: return "parse-error";
    case Errc::invalid_candidate: return "invalid-candidate";
    case Errc::remote_error: return "remote-responder-error";
    case Errc::append_rejected: return "append-rejected";
    case Errc::io_error: return "io-error";
    case Errc::validation_error: return "validation-error";
  }
  return "unknown";
}

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v >> 8));
  u8(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) throw Error(Errc::parse_error, "truncated encoding");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return buf_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  std::uint16_t v = static_cast<std::uint16_t>((buf_[pos_] << 8) | buf_[pos_ + 1]);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | buf_[pos_++];
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | buf_[pos_++];
  return v;
}

std::vector<std::uint8_t> ByteReader::bytes(std::size_t n) {
  need(n);
  std::vector<std::uint8_t> out(buf_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                buf_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

Digest ByteReader::digest() {
  need(32);
  Digest d{};
  std::copy_n(buf_.begin() + static_cast<std::ptrdiff_t>(pos_), 32, d.begin());
  pos_ += 32;
  return d;
}

std::int64_t to_milliwatts(double watts) { return std::llround(watts * 1000.0); }

}  // namespace mllmn

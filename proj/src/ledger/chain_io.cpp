#include "mllmn/ledger/chain_io.hpp"

#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mllmn/common/digest.hpp"
#include "mllmn/common/error.hpp"

namespace mllmn::ledger {

namespace {

using nlohmann::json;

Digest hex_digest(const json& j, const char* key) {
  const auto d = digest_from_hex(j.at(key).get<std::string>());
  if (!d) throw Error(Errc::parse_error, fmt::format("field '{}' is not a 64-digit lowercase hex digest", key));
  return *d;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::string block_to_json_line(const Block& b) {
  json j;
  j["index"] = b.index;
  j["timestamp_us"] = b.timestamp_us;
  j["prev_hash"] = to_hex(b.prev_hash);
  j["outcome_hash"] = to_hex(b.outcome_hash);
  j["payload"] = to_hex(b.payload);
  j["block_hash"] = to_hex(b.block_hash);
  return j.dump();
}

Block block_from_json_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, fmt::format("not JSON: {}", e.what()));
  }
  Block b;
  try {
    if (!j.is_object() || j.size() != 6) throw Error(Errc::parse_error, "block object must have exactly 6 fields");
    if (!j.at("index").is_number_unsigned() || !j.at("timestamp_us").is_number_unsigned())
      throw Error(Errc::parse_error, "index and timestamp_us must be unsigned integers");
    b.index = j.at("index").get<std::uint64_t>();
    b.timestamp_us = j.at("timestamp_us").get<std::uint64_t>();
    b.prev_hash = hex_digest(j, "prev_hash");
    b.outcome_hash = hex_digest(j, "outcome_hash");
    b.block_hash = hex_digest(j, "block_hash");
    const auto payload = from_hex(j.at("payload").get<std::string>());
    if (!payload) throw Error(Errc::parse_error, "payload is not lowercase hex");
    b.payload = *payload;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, fmt::format("bad block fields: {}", e.what()));
  }
  if (block_to_json_line(b) != line) throw Error(Errc::parse_error, "block line is not in canonical form");
  return b;
}

std::string chain_to_jsonl(std::span<const Block> blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += block_to_json_line(b);
    out += '\n';
  }
  return out;
}

VerifyResult verify_chain_text(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      blocks.push_back(block_from_json_line(lines[i]));
    } catch (const Error& e) {
      return VerifyResult::failure(i, fmt::format("parse-error ({})", e.what()));
    }
  }
  if (!text.empty() && text.back() != '\n')
    return VerifyResult::failure(lines.size() - 1, "parse-error (missing trailing newline)");
  return verify_chain(blocks);
}

void save_chain(const std::filesystem::path& path, std::span<const Block> blocks) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::io_error, fmt::format("cannot write {}", path.string()));
  os << chain_to_jsonl(blocks);
  if (!os) throw Error(Errc::io_error, fmt::format("write failed for {}", path.string()));
}

std::vector<Block> load_chain(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  if (!text.empty() && text.back() != '\n') throw Error(Errc::parse_error, "chain file lacks a trailing newline");
  std::vector<Block> blocks;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      blocks.push_back(block_from_json_line(lines[i]));
    } catch (const Error& e) {
      throw Error(Errc::parse_error, fmt::format("line {}: {}", i + 1, e.what()));
    }
  }
  return blocks;
}

}  // namespace mllmn::ledger

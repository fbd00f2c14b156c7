#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mllmn/ledger/chain.hpp"

namespace mllmn::ledger {

/// One compact JSON object with sorted keys; hashes and payload in lowercase hex.
std::string block_to_json_line(const Block& b);

/// Strict inverse of block_to_json_line: the line must be exactly what the
/// writer would produce. Throws Error(parse_error).
Block block_from_json_line(std::string_view line);

/// One line per block, each terminated by '\n'.
std::string chain_to_jsonl(std::span<const Block> blocks);

/// Parses then verifies. Malformed lines are reported as failures at their
/// line index; a missing trailing newline is reported at the last line.
VerifyResult verify_chain_text(std::string_view text);

void save_chain(const std::filesystem::path& path, std::span<const Block> blocks);
std::vector<Block> load_chain(const std::filesystem::path& path);  // throws parse_error / io_error

}  // namespace mllmn::ledger

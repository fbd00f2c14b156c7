#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <openssl/evp.h>

#include "mllmn/common/encoding.hpp"
#include "mllmn/common/error.hpp"
#include "mllmn/common/rng.hpp"
#include "mllmn/consensus/consensus.hpp"
#include "mllmn/ledger/block.hpp"
#include "mllmn/ledger/chain.hpp"
#include "mllmn/ledger/chain_io.hpp"

using namespace mllmn;
using namespace mllmn::ledger;
using consensus::ConsensusOutcome;

namespace {

ConsensusOutcome committed_round(std::uint64_t round, consensus::Protocol p = consensus::Protocol::PBFT) {
  std::vector<responders::ResponseCandidate> cands;
  for (std::uint32_t i = 0; i < 10; ++i)
    cands.push_back(responders::make_candidate(NodeId(i), {{double(i), double(round), 5.5}}, 0.1 * (i % 10)));
  consensus::RoundInput in;
  in.round = round;
  in.seed = round;
  in.candidates = cands;
  in.evaluator = [](NodeId, const responders::ResponseCandidate& c) { return double(c.proposer.index % 7); };
  consensus::ConsensusConfig cfg;
  cfg.protocol = p;
  return consensus::run_consensus(in, cfg, {}, consensus::TrustState::uniform(10));
}

std::vector<Block> build_chain(std::size_t len) {
  std::vector<Block> blocks;
  std::optional<Block> prev;
  for (std::size_t i = 0; i < len; ++i) {
    const auto p = consensus::kAllProtocols[i % 4];
    blocks.push_back(create_block(committed_round(i, p), prev, 1000 * (i + 1)));
    prev = blocks.back();
  }
  return blocks;
}

Digest openssl_sha256(const std::vector<std::uint8_t>& data) {
  Digest d{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), d.data(), &len, EVP_sha256(), nullptr);
  return d;
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) buf.push_back(static_cast<std::uint8_t>(v >> s));
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::invalid_argument;
}

}  // namespace

TEST(Block, GenesisAndLinking) {
  const auto chain = build_chain(3);
  EXPECT_EQ(chain[0].index, 0u);
  EXPECT_EQ(chain[0].prev_hash, Digest{});
  EXPECT_EQ(chain[1].prev_hash, chain[0].block_hash);
  EXPECT_EQ(chain[2].prev_hash, chain[1].block_hash);
  EXPECT_EQ(chain[2].index, 2u);
  EXPECT_TRUE(verify_chain(chain).ok);
}

TEST(Block, HashRecomputedIndependently) {
  for (const auto& b : build_chain(4)) {
    std::vector<std::uint8_t> buf;
    put_u64(buf, b.index);
    put_u64(buf, b.timestamp_us);
    buf.insert(buf.end(), b.prev_hash.begin(), b.prev_hash.end());
    buf.insert(buf.end(), b.outcome_hash.begin(), b.outcome_hash.end());
    buf.insert(buf.end(), b.payload.begin(), b.payload.end());
    EXPECT_EQ(openssl_sha256(buf), b.block_hash);
  }
}

TEST(Block, PayloadCarriesTheCertificate) {
  const auto o = committed_round(7, consensus::Protocol::VAAP);
  const auto b = create_block(o, std::nullopt, 10);
  const auto v = decode_payload(b.payload);
  EXPECT_EQ(b.payload[0], 1);  // format version
  EXPECT_EQ(v.protocol, consensus::Protocol::VAAP);
  EXPECT_EQ(v.round, 7u);
  EXPECT_EQ(v.quorum, o.quorum);
  EXPECT_EQ(v.winner.candidate_hash, o.winner.candidate_hash);
  EXPECT_EQ(responders::canonical_encoding(v.winner), responders::canonical_encoding(o.winner));
  EXPECT_EQ(v.votes, o.votes);
  EXPECT_EQ(openssl_sha256(v.winner_encoding), b.outcome_hash);
  EXPECT_EQ(openssl_sha256(v.winner_encoding), o.winner.candidate_hash);

  auto truncated = b.payload;
  truncated.resize(truncated.size() - 3);
  EXPECT_EQ(code_of([&] { decode_payload(truncated); }), Errc::parse_error);
  auto trailing = b.payload;
  trailing.push_back(0);
  EXPECT_EQ(code_of([&] { decode_payload(trailing); }), Errc::parse_error);
}

TEST(Block, RefusesInvalidCertificatesAndTimeTravel) {
  auto o = committed_round(1);
  while (o.votes.size() >= o.quorum) o.votes.pop_back();
  EXPECT_EQ(code_of([&] { create_block(o, std::nullopt, 1); }), Errc::refused);

  o = committed_round(1);
  o.votes[0].signature[0] ^= 0x80;
  EXPECT_EQ(code_of([&] { create_block(o, std::nullopt, 1); }), Errc::refused);

  const auto first = create_block(committed_round(1), std::nullopt, 500);
  EXPECT_EQ(code_of([&] { create_block(committed_round(2), first, 499); }), Errc::invalid_argument);
  EXPECT_NO_THROW(create_block(committed_round(2), first, 500));
}

TEST(Verify, PayloadTamperAtBlockFour) {
  auto chain = build_chain(6);
  chain[4].payload[20] ^= 0x01;
  const auto r = verify_chain(chain);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.index, 4u);
  EXPECT_EQ(r.reason, "hash-mismatch");
}

TEST(Verify, EachViolationIsNamed) {
  const auto good = build_chain(5);

  auto c = good;
  std::swap(c[2], c[3]);
  auto r = verify_chain(c);
  EXPECT_EQ(r.index, 2u);
  EXPECT_EQ(r.reason, "link-mismatch");

  c = good;
  c[3].index = 9;
  c[3].block_hash = compute_block_hash(c[3]);
  c[4].prev_hash = c[3].block_hash;
  c[4].block_hash = compute_block_hash(c[4]);
  r = verify_chain(c);
  EXPECT_EQ(r.index, 3u);
  EXPECT_EQ(r.reason, "index-mismatch (expected 3, found 9)");

  c = good;
  c[1].outcome_hash[0] ^= 1;
  c[1].block_hash = compute_block_hash(c[1]);
  c[2].prev_hash = c[1].block_hash;
  c[2].block_hash = compute_block_hash(c[2]);
  r = verify_chain(c);
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.reason, "outcome-hash-mismatch");

  c = good;
  c[2].payload.pop_back();
  c[2].block_hash = compute_block_hash(c[2]);
  r = verify_chain(c);
  EXPECT_EQ(r.index, 2u);
  EXPECT_EQ(r.reason.rfind("payload-invalid", 0), 0u);

  c = good;
  c[4].timestamp_us = c[3].timestamp_us - 1;
  c[4].block_hash = compute_block_hash(c[4]);
  r = verify_chain(c);
  EXPECT_EQ(r.index, 4u);
  EXPECT_EQ(r.reason, "timestamp-regression");

  c = good;
  c[0].prev_hash[31] = 1;
  r = verify_chain(c);
  EXPECT_EQ(r.index, 0u);
  EXPECT_EQ(r.reason, "link-mismatch");

  EXPECT_TRUE(verify_chain(std::vector<Block>{}).ok);
}

TEST(Chain, AppendOnly) {
  const auto blocks = build_chain(3);
  Chain c;
  EXPECT_FALSE(c.tip());
  EXPECT_EQ(code_of([&] { c.append(blocks[1]); }), Errc::append_rejected);
  c.append(blocks[0]);
  EXPECT_EQ(code_of([&] { c.append(blocks[0]); }), Errc::append_rejected);
  EXPECT_EQ(code_of([&] { c.append(blocks[2]); }), Errc::append_rejected);
  auto forged = blocks[1];
  forged.payload[10] ^= 4;
  EXPECT_EQ(code_of([&] { c.append(forged); }), Errc::append_rejected);
  c.append(blocks[1]);
  c.append(blocks[2]);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(*c.tip(), blocks[2]);
  EXPECT_EQ(c.blocks(), blocks);
}

TEST(Chain, ReplicasStayIdentical) {
  ReplicaSet set(10);
  for (const auto& b : build_chain(5)) {
    set.append(b);
    EXPECT_TRUE(set.identical());
  }
  for (std::size_t i = 0; i < set.size(); ++i) EXPECT_TRUE(verify_chain(set.replica(i).blocks()).ok);
  EXPECT_EQ(set.replica(3).blocks(), set.replica(7).blocks());
}

TEST(Jsonl, RoundTripAndFiles) {
  const auto chain = build_chain(5);
  const auto text = chain_to_jsonl(chain);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_TRUE(verify_chain_text(text).ok);
  const auto first_line = text.substr(0, text.find('\n'));
  EXPECT_EQ(first_line.rfind("{\"block_hash\":\"", 0), 0u);  // sorted keys
  EXPECT_EQ(block_from_json_line(first_line), chain[0]);

  const auto dir = std::filesystem::temp_directory_path() / "mllmn_ledger_test";
  std::filesystem::create_directories(dir);
  save_chain(dir / "c.jsonl", chain);
  EXPECT_EQ(load_chain(dir / "c.jsonl"), chain);
  EXPECT_EQ(code_of([&] { load_chain(dir / "missing.jsonl"); }), Errc::io_error);
  std::filesystem::remove_all(dir);
}

TEST(Jsonl, StrictParsing) {
  const auto chain = build_chain(2);
  const auto text = chain_to_jsonl(chain);
  auto r = verify_chain_text(text.substr(0, text.size() - 1));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.reason, "parse-error (missing trailing newline)");

  const auto line = block_to_json_line(chain[0]);
  auto spaced = line;
  spaced.insert(1, " ");
  EXPECT_EQ(code_of([&] { block_from_json_line(spaced); }), Errc::parse_error);
  auto upper = line;
  const auto pos = upper.find_first_of("abcdef", upper.find("prev_hash") + 12);
  upper[pos] = static_cast<char>(std::toupper(upper[pos]));
  EXPECT_EQ(code_of([&] { block_from_json_line(upper); }), Errc::parse_error);
  EXPECT_EQ(code_of([&] { block_from_json_line("[]"); }), Errc::parse_error);
  EXPECT_EQ(code_of([&] { block_from_json_line("{\"index\":0}"); }), Errc::parse_error);

  r = verify_chain_text("garbage\n" + text);
  EXPECT_EQ(r.index, 0u);
  EXPECT_EQ(r.reason.rfind("parse-error", 0), 0u);
}

TEST(Property, RandomBitFlipsAreDetected) {
  const auto chain = build_chain(6);
  const auto text = chain_to_jsonl(chain);
  Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    auto blocks = chain;
    auto& b = blocks[rng.next() % blocks.size()];
    const std::size_t field = rng.next() % 6;
    const auto bit = static_cast<std::uint8_t>(1u << (rng.next() % 8));
    switch (field) {
      case 0: b.index ^= 1ull << (rng.next() % 64); break;
      case 1: b.timestamp_us ^= 1ull << (rng.next() % 64); break;
      case 2: b.prev_hash[rng.next() % 32] ^= bit; break;
      case 3: b.outcome_hash[rng.next() % 32] ^= bit; break;
      case 4: b.payload[rng.next() % b.payload.size()] ^= bit; break;
      default: b.block_hash[rng.next() % 32] ^= bit; break;
    }
    EXPECT_FALSE(verify_chain(blocks).ok) << "trial " << trial << " field " << field;

    auto t = text;
    t[rng.next() % t.size()] ^= static_cast<char>(1u << (rng.next() % 8));
    EXPECT_FALSE(verify_chain_text(t).ok) << "text trial " << trial;
  }
}

#include <gtest/gtest.h>

#include "pqnb/error.hpp"
#include "pqnb/suite_catalog.hpp"
#include "support/oracles.hpp"

using namespace pqnb;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no pqnb::Error thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(SuiteCatalog, BuiltinsMatchPublishedSizes) {
  const SuiteCatalog cat;
  ASSERT_EQ(cat.size(), 7u);
  for (const auto& ref : oracle::published()) {
    SCOPED_TRACE(ref.name);
    const CipherSuite& s = cat.at(ref.name);
    EXPECT_EQ(s.total_handshake_bytes, ref.total);
    EXPECT_EQ(s.kem.client_key_share_bytes, ref.client_ks);
    EXPECT_EQ(s.kem.server_key_share_bytes, ref.server_ks);
    EXPECT_EQ(s.sig.signature_bytes, ref.sig);
    if (ref.chain) EXPECT_EQ(s.chain_bytes, ref.chain);
  }
}

TEST(SuiteCatalog, OrderedByTotal) {
  const auto v = builtin_suites();
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v[i - 1].total_handshake_bytes, v[i].total_handshake_bytes);
}

TEST(SuiteCatalog, LookupExamples) {
  const SuiteCatalog cat;
  const auto& ke = cat.at("kyber512+ecdsa");
  EXPECT_EQ(ke.total_handshake_bytes, 3560);
  EXPECT_EQ(ke.chain_bytes, 592);
  const auto& ee = cat.at("ecdhe+ecdsa");
  EXPECT_EQ(ee.kem.client_key_share_bytes, 38);
  EXPECT_EQ(ee.kem.server_key_share_bytes, 36);
  EXPECT_EQ(ee.sig.signature_bytes, 64);
  const auto& sp = cat.at("kyber512+sphincs-sha256-128f-simple");
  EXPECT_EQ(sp.total_handshake_bytes, 26830);
  EXPECT_EQ(sp.chain_bytes, 16070);
  EXPECT_EQ(sp.sig.signature_bytes, 7856);
}

TEST(SuiteCatalog, FixedOverheadBySubtraction) {
  const SuiteCatalog cat;
  for (const auto& ref : oracle::published()) {
    if (!ref.chain) continue;
    EXPECT_EQ(fixed_overhead(cat.at(ref.name)), oracle::overhead(ref, *ref.chain)) << ref.name;
  }
  EXPECT_EQ(fixed_overhead(cat.at("kyber512+ecdsa")), 1326);
  EXPECT_EQ(fixed_overhead(cat.at("ecdhe+ecdsa")), 1318);
  EXPECT_EQ(fixed_overhead(cat.at("kyber512+falcon512")), 1293);
}

TEST(SuiteCatalog, FixedOverheadNeedsChain) {
  const SuiteCatalog cat;
  EXPECT_EQ(code_of([&] { fixed_overhead(cat.at("ecdhe+rsa2048")); }), ErrorCode::kUnknownChain);
}

TEST(SuiteCatalog, ResolveChainResidual) {
  const SuiteCatalog cat;
  EXPECT_EQ(resolve_chain_bytes(cat.at("ecdhe+rsa2048"), cat.at("ecdhe+ecdsa")), oracle::chain_of("ecdhe+rsa2048"));
  EXPECT_EQ(resolve_chain_bytes(cat.at("kyber512+rsa2048"), cat.at("kyber512+ecdsa")),
            oracle::chain_of("kyber512+rsa2048"));
  EXPECT_EQ(oracle::chain_of("ecdhe+rsa2048"), 1378);
  EXPECT_EQ(oracle::chain_of("kyber512+rsa2048"), 1362);
  // Known chain comes back unchanged.
  EXPECT_EQ(resolve_chain_bytes(cat.at("kyber512+falcon512"), cat.at("kyber512+ecdsa")), 3404);
}

TEST(SuiteCatalog, ResolveChainNoReference) {
  const SuiteCatalog cat;
  EXPECT_EQ(code_of([&] { resolve_chain_bytes(cat.at("ecdhe+rsa2048"), cat.at("kyber512+ecdsa")); }),
            ErrorCode::kNoReference);
  EXPECT_EQ(code_of([&] { resolve_chain_bytes(cat.at("kyber512+rsa2048"), cat.at("ecdhe+rsa2048")); }),
            ErrorCode::kNoReference);

  auto lone = cat.at("ecdhe+rsa2048");
  const SuiteCatalog orphan({lone});
  EXPECT_EQ(code_of([&] { orphan.resolved("ecdhe+rsa2048"); }), ErrorCode::kNoReference);
}

TEST(SuiteCatalog, ResolvedCopyKeepsTotal) {
  const SuiteCatalog cat;
  for (const auto& s : cat.suites()) {
    const CipherSuite r = cat.resolved(s.name);
    ASSERT_TRUE(r.chain_bytes.has_value());
    EXPECT_EQ(r.total_handshake_bytes, s.total_handshake_bytes);
    EXPECT_GE(fixed_overhead(r), 0);
  }
}

TEST(SuiteCatalog, KemSubstitutionDelta) {
  const SuiteCatalog cat;
  const auto d_ecdsa = cat.at("kyber512+ecdsa").total_handshake_bytes - cat.at("ecdhe+ecdsa").total_handshake_bytes;
  const auto d_rsa = cat.at("kyber512+rsa2048").total_handshake_bytes - cat.at("ecdhe+rsa2048").total_handshake_bytes;
  EXPECT_EQ(d_ecdsa, 1512);
  EXPECT_EQ(d_rsa, 1496);
}

TEST(SuiteCatalog, UnknownSuite) {
  const SuiteCatalog cat;
  EXPECT_EQ(cat.find("nope"), nullptr);
  EXPECT_EQ(code_of([&] { cat.at("nope"); }), ErrorCode::kUnknownSuite);
}

TEST(SuiteCatalog, SignatureTable) {
  const auto t = signature_size_table();
  EXPECT_EQ(t.size(), 11u);
  for (const auto& s : t) {
    EXPECT_GT(s.signature_bytes, 0) << s.name;
    EXPECT_GT(s.public_key_bytes, 0) << s.name;
  }
}

TEST(SuiteCatalog, ValidationRejectsBadSuites) {
  auto s = builtin_suites()[2];
  s.kem.client_key_share_bytes = 0;
  EXPECT_THROW(validate_suite(s), ConfigError);

  s = builtin_suites()[2];
  s.total_handshake_bytes = 806 + 772 + 64 + 592;  // no room for overhead
  EXPECT_THROW(validate_suite(s), ConfigError);

  s = builtin_suites()[2];
  s.sig.public_key_bytes = 0;
  EXPECT_THROW(validate_suite(s), ConfigError);
}

TEST(SuiteCatalog, DuplicateNamesRejected) {
  auto v = builtin_suites();
  v.push_back(v.front());
  EXPECT_THROW(SuiteCatalog{v}, ConfigError);
}

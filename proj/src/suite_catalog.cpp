#include "pqnb/suite_catalog.hpp"

#include <algorithm>
#include <set>

#include "pqnb/error.hpp"

namespace pqnb {
namespace {

const KemScheme kEcdhe{"ecdhe-prime256v1", 38, 36};
const KemScheme kKyber512{"kyber512", 806, 772};

const SignatureScheme kRsa2048{"rsa2048", 256, 256, 0};
const SignatureScheme kEcdsaP256{"ecdsa-prime256v1", 64, 64, 1};
const SignatureScheme kFalcon512{"falcon512", 690, 897, 1};
const SignatureScheme kDilithium3{"dilithium3", 3293, 1952, 3};
// The ...128f-simple parameter set was measured; its CertificateVerify was
// 7856 bytes, the 128s-simple size from the signature size table.
const SignatureScheme kSphincs128{"sphincs-sha256-128f-simple", 7856, 32, 1};

}  // namespace

std::vector<SignatureScheme> signature_size_table() {
  return {
      {"rsa2048", 256, 256, 0},
      {"rsa3072", 384, 384, 1},
      {"ecdsa-prime256v1", 64, 64, 1},
      {"sphincs-sha256-128s-simple", 7856, 32, 1},
      {"sphincs-sha256-192s-simple", 16224, 48, 3},
      {"sphincs-sha256-256s-simple", 29792, 64, 5},
      {"falcon512", 690, 897, 1},
      {"falcon1024", 1330, 1793, 5},
      {"dilithium2", 2420, 1312, 2},
      {"dilithium3", 3293, 1952, 3},
      {"dilithium5", 4595, 2592, 5},
  };
}

std::vector<CipherSuite> builtin_suites() {
  return {
      {"ecdhe+ecdsa", kEcdhe, kEcdsaP256, 592, 2048},
      {"ecdhe+rsa2048", kEcdhe, kRsa2048, std::nullopt, 3026},
      {"kyber512+ecdsa", kKyber512, kEcdsaP256, 592, 3560},
      {"kyber512+rsa2048", kKyber512, kRsa2048, std::nullopt, 4522},
      {"kyber512+falcon512", kKyber512, kFalcon512, 3404, 6965},
      {"kyber512+dilithium3", kKyber512, kDilithium3, 10824, 16997},
      {"kyber512+sphincs-sha256-128f-simple", kKyber512, kSphincs128, 16070, 26830},
  };
}

ByteCount fixed_overhead(const CipherSuite& suite) {
  if (!suite.chain_bytes) {
    throw Error(ErrorCode::kUnknownChain, "suite '" + suite.name + "' has no certificate chain size");
  }
  return suite.total_handshake_bytes - suite.kem.client_key_share_bytes -
         suite.kem.server_key_share_bytes - *suite.chain_bytes - suite.sig.signature_bytes;
}

ByteCount resolve_chain_bytes(const CipherSuite& suite, const CipherSuite& reference) {
  if (suite.chain_bytes) return *suite.chain_bytes;
  if (!reference.chain_bytes || !(reference.kem == suite.kem)) {
    throw Error(ErrorCode::kNoReference,
                "suite '" + suite.name + "' needs a same-KEM reference with a known chain, got '" +
                    reference.name + "'");
  }
  return suite.total_handshake_bytes - suite.kem.client_key_share_bytes -
         suite.kem.server_key_share_bytes - suite.sig.signature_bytes - fixed_overhead(reference);
}

void validate_suite(const CipherSuite& s) {
  const std::string p = "suites[" + s.name + "].";
  if (s.name.empty()) throw ConfigError("suites[].name", "must be nonempty");
  if (s.kem.client_key_share_bytes <= 0) throw ConfigError(p + "kem.client_key_share_bytes", "must be > 0");
  if (s.kem.server_key_share_bytes <= 0) throw ConfigError(p + "kem.server_key_share_bytes", "must be > 0");
  if (s.sig.signature_bytes <= 0) throw ConfigError(p + "sig.signature_bytes", "must be > 0");
  if (s.sig.public_key_bytes <= 0) throw ConfigError(p + "sig.public_key_bytes", "must be > 0");
  if (s.chain_bytes && *s.chain_bytes <= 0) throw ConfigError(p + "chain_bytes", "must be > 0 or null");
  const ByteCount listed = s.kem.client_key_share_bytes + s.kem.server_key_share_bytes +
                           s.sig.signature_bytes + s.chain_bytes.value_or(0);
  if (s.total_handshake_bytes <= listed) {
    throw ConfigError(p + "total_handshake_bytes", "must exceed the sum of listed components (" +
                                                       std::to_string(listed) + ")");
  }
}

SuiteCatalog::SuiteCatalog() : SuiteCatalog(builtin_suites()) {}

SuiteCatalog::SuiteCatalog(std::vector<CipherSuite> suites) : suites_(std::move(suites)) {
  std::set<std::string> names;
  for (const auto& s : suites_) {
    validate_suite(s);
    if (!names.insert(s.name).second) throw ConfigError("suites[" + s.name + "].name", "duplicate suite name");
  }
  // A KEM name must always denote the same key-share sizes.
  for (const auto& a : suites_) {
    for (const auto& b : suites_) {
      if (a.kem.name == b.kem.name && !(a.kem == b.kem)) {
        throw ConfigError("suites[" + b.name + "].kem", "KEM '" + b.kem.name + "' redefined with different sizes");
      }
    }
  }
}

const CipherSuite* SuiteCatalog::find(std::string_view name) const {
  auto it = std::find_if(suites_.begin(), suites_.end(), [&](const CipherSuite& s) { return s.name == name; });
  return it == suites_.end() ? nullptr : &*it;
}

const CipherSuite& SuiteCatalog::at(std::string_view name) const {
  if (const auto* s = find(name)) return *s;
  throw Error(ErrorCode::kUnknownSuite, "unknown suite '" + std::string(name) + "'");
}

CipherSuite SuiteCatalog::resolved(std::string_view name) const {
  CipherSuite out = at(name);
  if (out.chain_bytes) return out;
  auto ref = std::find_if(suites_.begin(), suites_.end(),
                          [&](const CipherSuite& s) { return s.chain_bytes && s.kem == out.kem; });
  if (ref == suites_.end()) {
    throw Error(ErrorCode::kNoReference, "no same-KEM reference with a known chain for '" + out.name + "'");
  }
  out.chain_bytes = resolve_chain_bytes(out, *ref);
  return out;
}

}  // namespace pqnb

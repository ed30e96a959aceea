#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqnb {

using ByteCount = std::int64_t;

struct KemScheme {
  std::string name;
  ByteCount client_key_share_bytes = 0;  // key_share in ClientHello
  ByteCount server_key_share_bytes = 0;  // key_share in ServerHello

  bool operator==(const KemScheme&) const = default;
};

struct SignatureScheme {
  std::string name;
  ByteCount signature_bytes = 0;
  ByteCount public_key_bytes = 0;
  int nist_level = 0;  // 0 encodes "<1"

  bool operator==(const SignatureScheme&) const = default;
};

struct CipherSuite {
  std::string name;
  KemScheme kem;
  SignatureScheme sig;
  std::optional<ByteCount> chain_bytes;  // ICA + server certificate; nullopt if unmeasured
  ByteCount total_handshake_bytes = 0;   // on-the-wire total, everything included

  bool operator==(const CipherSuite&) const = default;
};

// The eleven rows of the published signature/public-key size comparison.
std::vector<SignatureScheme> signature_size_table();

// The seven measured suites, in ascending order of handshake total.
std::vector<CipherSuite> builtin_suites();

// Bytes of the handshake not attributed to key shares, chain or CertificateVerify.
// Throws kUnknownChain when the chain size is absent.
ByteCount fixed_overhead(const CipherSuite& suite);

// Chain size for a suite with an unmeasured chain, taken as the residual that
// keeps the suite total exact when its fixed overhead equals the reference's.
// Returns the known chain unchanged. Throws kNoReference when the reference
// uses a different KEM or has no chain itself.
ByteCount resolve_chain_bytes(const CipherSuite& suite, const CipherSuite& reference);

// Checks the per-suite invariants; throws ConfigError naming the field.
void validate_suite(const CipherSuite& suite);

class SuiteCatalog {
 public:
  SuiteCatalog();  // builtin suites
  explicit SuiteCatalog(std::vector<CipherSuite> suites);

  static SuiteCatalog builtin() { return SuiteCatalog(); }

  std::span<const CipherSuite> suites() const { return suites_; }
  std::size_t size() const { return suites_.size(); }

  const CipherSuite* find(std::string_view name) const;
  // Throws kUnknownSuite.
  const CipherSuite& at(std::string_view name) const;

  // Copy of the named suite with chain_bytes filled in, using the first
  // same-KEM suite with a measured chain as the reference.
  CipherSuite resolved(std::string_view name) const;

 private:
  std::vector<CipherSuite> suites_;
};

}  // namespace pqnb

// Copyright (c) 2026 The vflengine Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>

#include "vfl/common.hpp"
#include "vfl/rng.hpp"

namespace vfl {

/// Party label. Code 0 is Party B (the label holder); code i >= 1 is the i-th
/// feature party A(i). Two-party protocols use A(1) and B.
struct PartyId {
  uint8_t code = 0;

  static constexpr PartyId B() { return PartyId{0}; }
  static constexpr PartyId A(unsigned i = 1) {
    return PartyId{static_cast<uint8_t>(i)};
  }
  bool is_b() const { return code == 0; }
  bool operator==(const PartyId&) const = default;
  std::string str() const {
    return is_b() ? "B" : (code == 1 ? "A" : "A(" + std::to_string(code) + ")");
  }
};

/// Encrypted value in Z_{n^2}, tagged with the party whose secret key opens it.
struct Ciphertext {
  Int value;
  PartyId key_owner;
};

/// Wrong party's ciphertext handed to a secret key. Reported distinctly from a
/// malformed ciphertext.
struct KeyMismatchError : CryptoError {
  explicit KeyMismatchError(const std::string& what) : CryptoError(what) {}
};

class PublicKey {
 public:
  PublicKey() = default;
  PublicKey(Int n, PartyId owner);

  const Int& n() const { return n_; }
  const Int& n_squared() const { return n2_; }
  PartyId owner() const { return owner_; }
  /// Largest bit length b such that any |v| < 2^b is inside the signed
  /// plaintext range (-n/2, n/2).
  unsigned max_plain_bits() const { return plain_bits_; }

  /// Probabilistic encryption. Requires |v| < n/2.
  Ciphertext encrypt(const Int& v, Rng& rng) const;
  /// Enc(u) * Enc(v) -> Enc(u+v). Requires matching key owners.
  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  /// Enc(u) + plaintext k -> Enc(u+k). One modular multiply (g = n+1).
  Ciphertext add_plain(const Ciphertext& c, const Int& k) const;
  /// k * Enc(v) -> Enc(k*v). Overflow of the signed range is the caller's
  /// responsibility; homomorphic values must stay below n/2 in magnitude.
  Ciphertext mul_plain(const Ciphertext& c, const Int& k) const;
  /// Value-oblivious variant of mul_plain: runs a fixed square-and-multiply
  /// ladder of exactly `bits` steps regardless of k, so the cost does not
  /// depend on the multiplier (in particular, zero costs the same as any
  /// other value). Used by the sparsity-oblivious dense kernels.
  Ciphertext mul_plain_fixed(const Ciphertext& c, const Int& k,
                             unsigned bits) const;
  /// Fresh encryption of zero folded into c; value unchanged.
  Ciphertext rerandomize(const Ciphertext& c, Rng& rng) const;

  Bytes serialize() const;
  static PublicKey deserialize(const Bytes& in, PartyId owner);

  bool operator==(const PublicKey& o) const {
    return n_ == o.n_ && owner_ == o.owner_;
  }

 private:
  void check_owner(const Ciphertext& c, const char* op) const;
  Int n_, n2_, half_n_;
  PartyId owner_;
  unsigned plain_bits_ = 0;
};

class SecretKey {
 public:
  SecretKey() = default;
  SecretKey(Int p, Int q, const PublicKey& pk);

  /// Centered-lift decryption: the residue in [0, n) is mapped to
  /// (-n/2, n/2]. Uses the CRT fast path by default; `use_crt = false`
  /// selects the definitional lambda/mu route (identical output).
  Int decrypt(const Ciphertext& c, bool use_crt = true) const;

  PartyId owner() const { return pk_.owner(); }
  const PublicKey& pk() const { return pk_; }

 private:
  Int decrypt_definitional(const Int& c) const;
  Int decrypt_crt(const Int& c) const;

  PublicKey pk_;
  Int p_, q_, p2_, q2_;
  Int lambda_, mu_;
  Int hp_, hq_, q_inv_p_;  // CRT precomputation
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

/// Generates a fresh key pair for `owner`. `bits` must be 512 (tests only),
/// 1024 or 2048 (deployment default).
KeyPair keygen(unsigned bits, PartyId owner, Rng& rng);

Bytes serialize(const Ciphertext& c);
Ciphertext deserialize_ciphertext(const Bytes& in);

/// Global homomorphic-operation counters (benchmark instrumentation).
struct PaillierOpCounts {
  static std::atomic<uint64_t> encrypts;
  static std::atomic<uint64_t> decrypts;
  static std::atomic<uint64_t> adds;
  static std::atomic<uint64_t> plain_mults;
  static void reset();
};

}  // namespace vfl

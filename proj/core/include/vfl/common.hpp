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

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfl {

/// Arbitrary-precision signed integer used for plaintexts, raw fixed-point
/// values and ciphertext residues.
using Int = mpz_class;

using Bytes = std::vector<uint8_t>;

/// Configuration disagreement between parties (key bits, fractional bits, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Violation of a cryptographic contract: wrong key owner, plaintext range, ...
struct CryptoError : std::runtime_error {
  explicit CryptoError(const std::string& what) : std::runtime_error(what) {}
};

/// Shape / scale / index bookkeeping violations on tensors and shares.
struct ValueError : std::runtime_error {
  explicit ValueError(const std::string& what) : std::runtime_error(what) {}
};

/// Channel and message-sequencing failures. Carries the step tag at which the
/// protocol run went wrong.
struct ProtocolError : std::runtime_error {
  std::string step_tag;
  ProtocolError(std::string tag, const std::string& what)
      : std::runtime_error("[" + tag + "] " + what), step_tag(std::move(tag)) {}
};

inline int bit_length(const Int& v) {
  if (v == 0) return 0;
  return static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

/// 2^k as an Int.
inline Int pow2(unsigned k) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

// -- byte-level helpers shared by the wire formats --

inline void put_u32_be(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline uint32_t get_u32_be(const Bytes& in, size_t& pos) {
  if (pos + 4 > in.size()) throw ValueError("truncated u32 field");
  uint32_t v = (static_cast<uint32_t>(in[pos]) << 24) |
               (static_cast<uint32_t>(in[pos + 1]) << 16) |
               (static_cast<uint32_t>(in[pos + 2]) << 8) |
               static_cast<uint32_t>(in[pos + 3]);
  pos += 4;
  return v;
}

/// Non-negative Int -> big-endian magnitude bytes (empty for zero).
Bytes magnitude_bytes(const Int& v);
Int from_magnitude_bytes(const uint8_t* data, size_t len);

/// Signed Int -> length-prefixed big-endian two's complement (minimal width).
void put_signed_int(Bytes& out, const Int& v);
Int get_signed_int(const Bytes& in, size_t& pos);

}  // namespace vfl

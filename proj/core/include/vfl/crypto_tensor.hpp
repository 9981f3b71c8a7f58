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

#include <vector>

#include "vfl/tensor.hpp"

namespace vfl {

/// Element-wise encrypted matrix. Always dense: an encrypted operand must not
/// reveal which of its entries are zero, so only plaintext operands exploit
/// sparsity.
struct CipherTensor {
  size_t rows = 0, cols = 0;
  unsigned scale_exp = 0;
  unsigned bound_bits = 0;
  PartyId key_owner;
  std::vector<Ciphertext> cells;  // row-major

  const Ciphertext& at(size_t r, size_t c) const { return cells[r * cols + c]; }
  Ciphertext& at(size_t r, size_t c) { return cells[r * cols + c]; }
  bool same_shape(const CipherTensor& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

/// Scalar-multiplication strategy for the homomorphic matmul kernels.
///   kFast       -- standard exponentiation; public sparsity may be skipped.
///   kOblivious  -- fixed-ladder multiply whose cost is independent of the
///                  operand value (models computation over hidden/outsourced
///                  features where zeros cannot be skipped).
enum class MulMode { kFast, kOblivious };

/// Element-wise probabilistic encryption. Sparse input yields a dense
/// CipherTensor of the same shape (zeros are encrypted too). Per-element
/// range violations are aggregated into a single error naming the first
/// offending index.
CipherTensor encrypt_tensor(const PublicKey& pk, const FxTensor& t, Rng& rng);
FxTensor decrypt_tensor(const SecretKey& sk, const CipherTensor& t);

/// x * W with plaintext x (CSR-aware) and encrypted W. Every output cell is
/// seeded with a fresh encryption of zero, so all-zero rows decrypt to zero
/// without echoing input ciphertexts.
CipherTensor pc_matmul(const FxTensor& x, const CipherTensor& w,
                       const PublicKey& pk, Rng& rng,
                       MulMode mode = MulMode::kFast);
/// x^T * g with plaintext x; iterates nonzeros of x once.
CipherTensor pc_matmul_t(const FxTensor& x, const CipherTensor& g,
                         const PublicKey& pk, Rng& rng,
                         MulMode mode = MulMode::kFast);
/// c * p with encrypted left operand and plaintext right operand.
CipherTensor cp_matmul(const CipherTensor& c, const FxTensor& p,
                       const PublicKey& pk, Rng& rng,
                       MulMode mode = MulMode::kFast);

CipherTensor cipher_add(const CipherTensor& a, const CipherTensor& b,
                        const PublicKey& pk);
CipherTensor cipher_add_plain(const CipherTensor& a, const FxTensor& p,
                              const PublicKey& pk);
CipherTensor cipher_sub_plain(const CipherTensor& a, const FxTensor& p,
                              const PublicKey& pk);
/// a - b, element-wise.
CipherTensor cipher_sub(const CipherTensor& a, const CipherTensor& b,
                        const PublicKey& pk);
/// Element-wise k * a; scales add.
CipherTensor cipher_scale(const CipherTensor& a, const FxScalar& k,
                          const PublicKey& pk);
CipherTensor cipher_transpose(const CipherTensor& a);

/// out[i] = table[idx[i]]. Copies ciphertexts; pass `rerandomize = true` to
/// fold a fresh encryption of zero into every copied cell.
CipherTensor row_gather(const CipherTensor& table, const IndexVector& idx,
                        const PublicKey& pk, Rng& rng,
                        bool rerandomize = false);

/// out has `table_rows` rows; row r accumulates the gradient rows whose index
/// is r. Untouched rows are fresh encryptions of zero, so ciphertext identity
/// leaks no access pattern.
CipherTensor scatter_add_rows(const CipherTensor& grads, const IndexVector& idx,
                              size_t table_rows, const PublicKey& pk, Rng& rng);

Bytes serialize(const CipherTensor& t);
CipherTensor deserialize_cipher_tensor(const Bytes& in);
Bytes serialize(const FxTensor& t);
FxTensor deserialize_fx_tensor(const Bytes& in);

}  // namespace vfl

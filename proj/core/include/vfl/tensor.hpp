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

#include "vfl/fixedpoint.hpp"

namespace vfl {

/// Batch of categorical indices, one per instance for a single field.
using IndexVector = std::vector<uint32_t>;

/// Dense or CSR fixed-point matrix.
///
/// `bound_bits` is a declared, data-independent bit bound on every raw value
/// (derived from config and shapes, never from the data itself); masks that
/// hide a tensor are sized from it, and it is what the encryption budget
/// check validates against the Paillier plaintext range.
class FxTensor {
 public:
  FxTensor() = default;

  static FxTensor zeros(size_t rows, size_t cols, unsigned scale_exp,
                        unsigned bound_bits);
  static FxTensor dense(size_t rows, size_t cols, std::vector<Int> values,
                        unsigned scale_exp, unsigned bound_bits);
  static FxTensor csr(size_t rows, size_t cols, std::vector<size_t> row_ptr,
                      std::vector<uint32_t> col_idx, std::vector<Int> values,
                      unsigned scale_exp, unsigned bound_bits);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool is_sparse() const { return sparse_; }
  unsigned scale_exp() const { return scale_exp_; }
  unsigned bound_bits() const { return bound_bits_; }
  void set_bound_bits(unsigned b) { bound_bits_ = b; }

  size_t nnz() const;
  Int get(size_t r, size_t c) const;
  /// Dense-storage element access.
  Int& at(size_t r, size_t c);
  const Int& at(size_t r, size_t c) const;

  const std::vector<size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<uint32_t>& col_idx() const { return col_idx_; }
  const std::vector<Int>& values() const { return vals_; }
  std::vector<Int>& values() { return vals_; }

  /// Lossless representation changes.
  FxTensor to_dense() const;
  FxTensor to_csr() const;

  /// Raw integers of the abstract matrix, row-major (densifies CSR).
  std::vector<Int> raw_row_major() const;

  bool same_shape(const FxTensor& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  unsigned scale_exp_ = 0;
  unsigned bound_bits_ = 0;
  bool sparse_ = false;
  std::vector<Int> vals_;          // dense: rows*cols row-major; CSR: nnz
  std::vector<size_t> row_ptr_;    // CSR only
  std::vector<uint32_t> col_idx_;  // CSR only
};

/// Round-to-nearest element-wise encoding of a row-major double matrix.
/// `magnitude_bits` declares the admissible |x| < 2^magnitude_bits.
FxTensor encode_tensor(const std::vector<double>& values, size_t rows,
                       size_t cols, unsigned f_bits,
                       unsigned magnitude_bits = 16);
std::vector<double> decode_tensor(const FxTensor& t);

// -- integer-exact plain ops (these double as the protocol test oracles) --

/// a * b. CSR-aware on `a`: only nonzeros contribute.
FxTensor matmul(const FxTensor& a, const FxTensor& b);
/// a^T * b without materializing the transpose; iterates nonzeros of a once.
FxTensor matmul_t(const FxTensor& a, const FxTensor& b);
FxTensor add(const FxTensor& a, const FxTensor& b);
FxTensor sub(const FxTensor& a, const FxTensor& b);
FxTensor neg(const FxTensor& a);
/// Element-wise multiply by a fixed-point scalar; scales add.
FxTensor scale(const FxTensor& a, const FxScalar& k);
FxTensor transpose(const FxTensor& a);
/// Element-wise floor shift right; reduces the scale.
FxTensor truncate_tensor(const FxTensor& a, unsigned by_bits);

/// Row gather: out[i] = table[idx[i]].
FxTensor lkup(const FxTensor& table, const IndexVector& idx);
/// Embedding backward: out[r] = sum of grads rows whose index is r.
FxTensor lkup_bw(const FxTensor& grads, const IndexVector& idx,
                 size_t table_rows);

bool raw_equal(const FxTensor& a, const FxTensor& b);

}  // namespace vfl

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

#include "vfl/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace vfl {

namespace {

unsigned log2_ceil(size_t n) {
  return n <= 1 ? 0 : std::bit_width(n - 1);
}

void check_same_scale(const FxTensor& a, const FxTensor& b, const char* op) {
  if (a.scale_exp() != b.scale_exp()) {
    throw ValueError(std::string(op) + ": scale mismatch (" +
                     std::to_string(a.scale_exp()) + " vs " +
                     std::to_string(b.scale_exp()) + ")");
  }
}

}  // namespace

FxTensor FxTensor::zeros(size_t rows, size_t cols, unsigned scale_exp,
                         unsigned bound_bits) {
  FxTensor t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.scale_exp_ = scale_exp;
  t.bound_bits_ = bound_bits;
  t.vals_.assign(rows * cols, Int(0));
  return t;
}

FxTensor FxTensor::dense(size_t rows, size_t cols, std::vector<Int> values,
                         unsigned scale_exp, unsigned bound_bits) {
  if (values.size() != rows * cols) {
    throw ValueError("dense tensor: value count does not match shape");
  }
  FxTensor t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.scale_exp_ = scale_exp;
  t.bound_bits_ = bound_bits;
  t.vals_ = std::move(values);
  return t;
}

FxTensor FxTensor::csr(size_t rows, size_t cols, std::vector<size_t> row_ptr,
                       std::vector<uint32_t> col_idx, std::vector<Int> values,
                       unsigned scale_exp, unsigned bound_bits) {
  if (row_ptr.size() != rows + 1 || col_idx.size() != values.size() ||
      row_ptr.back() != values.size()) {
    throw ValueError("csr tensor: inconsistent index arrays");
  }
  for (size_t r = 0; r < rows; ++r) {
    for (size_t k = row_ptr[r]; k + 1 < row_ptr[r + 1]; ++k) {
      if (col_idx[k] >= col_idx[k + 1]) {
        throw ValueError("csr tensor: column indices not strictly increasing");
      }
    }
    if (row_ptr[r + 1] > row_ptr[r] && col_idx[row_ptr[r + 1] - 1] >= cols) {
      throw ValueError("csr tensor: column index out of range");
    }
  }
  FxTensor t;
  t.rows_ = rows;
  t.cols_ = cols;
  t.scale_exp_ = scale_exp;
  t.bound_bits_ = bound_bits;
  t.sparse_ = true;
  t.row_ptr_ = std::move(row_ptr);
  t.col_idx_ = std::move(col_idx);
  t.vals_ = std::move(values);
  return t;
}

size_t FxTensor::nnz() const {
  if (sparse_) return vals_.size();
  size_t n = 0;
  for (const Int& v : vals_) n += (v != 0);
  return n;
}

Int FxTensor::get(size_t r, size_t c) const {
  if (r >= rows_ || c >= cols_) throw ValueError("tensor index out of range");
  if (!sparse_) return vals_[r * cols_ + c];
  for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
    if (col_idx_[k] == c) return vals_[k];
  }
  return Int(0);
}

Int& FxTensor::at(size_t r, size_t c) {
  if (sparse_) throw ValueError("at(): dense storage required");
  return vals_[r * cols_ + c];
}

const Int& FxTensor::at(size_t r, size_t c) const {
  if (sparse_) throw ValueError("at(): dense storage required");
  return vals_[r * cols_ + c];
}

FxTensor FxTensor::to_dense() const {
  if (!sparse_) return *this;
  FxTensor t = zeros(rows_, cols_, scale_exp_, bound_bits_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      t.vals_[r * cols_ + col_idx_[k]] = vals_[k];
    }
  }
  return t;
}

FxTensor FxTensor::to_csr() const {
  if (sparse_) return *this;
  std::vector<size_t> row_ptr(rows_ + 1, 0);
  std::vector<uint32_t> col_idx;
  std::vector<Int> vals;
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) {
      const Int& v = vals_[r * cols_ + c];
      if (v != 0) {
        col_idx.push_back(static_cast<uint32_t>(c));
        vals.push_back(v);
      }
    }
    row_ptr[r + 1] = vals.size();
  }
  return csr(rows_, cols_, std::move(row_ptr), std::move(col_idx),
             std::move(vals), scale_exp_, bound_bits_);
}

std::vector<Int> FxTensor::raw_row_major() const {
  if (!sparse_) return vals_;
  return to_dense().vals_;
}

FxTensor encode_tensor(const std::vector<double>& values, size_t rows,
                       size_t cols, unsigned f_bits, unsigned magnitude_bits) {
  if (values.size() != rows * cols) {
    throw ValueError("encode_tensor: value count does not match shape");
  }
  FxConfig cfg;
  std::vector<Int> raw(values.size());
  double limit = std::ldexp(1.0, static_cast<int>(magnitude_bits));
  for (size_t i = 0; i < values.size(); ++i) {
    if (std::fabs(values[i]) >= limit) {
      throw ValueError("encode_tensor: element " + std::to_string(i) +
                       " exceeds the declared magnitude");
    }
    raw[i] = encode(values[i], f_bits, cfg).raw;
  }
  return FxTensor::dense(rows, cols, std::move(raw), f_bits,
                         f_bits + magnitude_bits);
}

std::vector<double> decode_tensor(const FxTensor& t) {
  std::vector<Int> raw = t.raw_row_major();
  std::vector<double> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    out[i] = decode_raw(raw[i], t.scale_exp());
  }
  return out;
}

FxTensor matmul(const FxTensor& a, const FxTensor& b) {
  if (a.cols() != b.rows()) throw ValueError("matmul: inner dims differ");
  FxTensor bd = b.is_sparse() ? b.to_dense() : b;
  FxTensor out = FxTensor::zeros(a.rows(), b.cols(),
                                 a.scale_exp() + b.scale_exp(),
                                 a.bound_bits() + b.bound_bits() +
                                     log2_ceil(a.cols()));
  if (a.is_sparse()) {
    for (size_t r = 0; r < a.rows(); ++r) {
      for (size_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
        const Int& x = a.values()[k];
        size_t inner = a.col_idx()[k];
        for (size_t j = 0; j < bd.cols(); ++j) {
          out.at(r, j) += x * bd.at(inner, j);
        }
      }
    }
  } else {
    for (size_t r = 0; r < a.rows(); ++r) {
      for (size_t k = 0; k < a.cols(); ++k) {
        const Int& x = a.at(r, k);
        if (x == 0) continue;
        for (size_t j = 0; j < bd.cols(); ++j) {
          out.at(r, j) += x * bd.at(k, j);
        }
      }
    }
  }
  return out;
}

FxTensor matmul_t(const FxTensor& a, const FxTensor& b) {
  if (a.rows() != b.rows()) throw ValueError("matmul_t: batch dims differ");
  FxTensor bd = b.is_sparse() ? b.to_dense() : b;
  FxTensor out = FxTensor::zeros(a.cols(), b.cols(),
                                 a.scale_exp() + b.scale_exp(),
                                 a.bound_bits() + b.bound_bits() +
                                     log2_ceil(a.rows()));
  if (a.is_sparse()) {
    for (size_t r = 0; r < a.rows(); ++r) {
      for (size_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
        const Int& x = a.values()[k];
        size_t i = a.col_idx()[k];
        for (size_t j = 0; j < bd.cols(); ++j) {
          out.at(i, j) += x * bd.at(r, j);
        }
      }
    }
  } else {
    for (size_t r = 0; r < a.rows(); ++r) {
      for (size_t i = 0; i < a.cols(); ++i) {
        const Int& x = a.at(r, i);
        if (x == 0) continue;
        for (size_t j = 0; j < bd.cols(); ++j) {
          out.at(i, j) += x * bd.at(r, j);
        }
      }
    }
  }
  return out;
}

FxTensor add(const FxTensor& a, const FxTensor& b) {
  if (!a.same_shape(b)) throw ValueError("add: shape mismatch");
  check_same_scale(a, b, "add");
  FxTensor ad = a.to_dense(), bd = b.to_dense();
  FxTensor out = FxTensor::zeros(a.rows(), a.cols(), a.scale_exp(),
                                 std::max(a.bound_bits(), b.bound_bits()) + 1);
  for (size_t i = 0; i < out.values().size(); ++i) {
    out.values()[i] = ad.values()[i] + bd.values()[i];
  }
  return out;
}

FxTensor sub(const FxTensor& a, const FxTensor& b) { return add(a, neg(b)); }

FxTensor neg(const FxTensor& a) {
  FxTensor out = a;
  for (Int& v : out.values()) v = -v;
  return out;
}

FxTensor scale(const FxTensor& a, const FxScalar& k) {
  if (k.raw == 0) {
    return FxTensor::zeros(a.rows(), a.cols(), a.scale_exp() + k.scale_exp, 1);
  }
  std::vector<Int> vals = a.values();
  for (Int& v : vals) v *= k.raw;
  unsigned bound = a.bound_bits() + std::max(bit_length(k.raw), 1);
  if (a.is_sparse()) {
    return FxTensor::csr(a.rows(), a.cols(), a.row_ptr(), a.col_idx(),
                         std::move(vals), a.scale_exp() + k.scale_exp, bound);
  }
  return FxTensor::dense(a.rows(), a.cols(), std::move(vals),
                         a.scale_exp() + k.scale_exp, bound);
}

FxTensor transpose(const FxTensor& a) {
  FxTensor ad = a.to_dense();
  FxTensor out =
      FxTensor::zeros(a.cols(), a.rows(), a.scale_exp(), a.bound_bits());
  for (size_t r = 0; r < a.rows(); ++r) {
    for (size_t c = 0; c < a.cols(); ++c) {
      out.at(c, r) = ad.at(r, c);
    }
  }
  return out;
}

FxTensor truncate_tensor(const FxTensor& a, unsigned by_bits) {
  if (by_bits > a.scale_exp()) {
    throw ValueError("truncate_tensor: shift exceeds the carried scale");
  }
  FxTensor ad = a.to_dense();
  FxTensor out = FxTensor::zeros(a.rows(), a.cols(), a.scale_exp() - by_bits,
                                 a.bound_bits() > by_bits
                                     ? a.bound_bits() - by_bits
                                     : 1);
  for (size_t i = 0; i < out.values().size(); ++i) {
    out.values()[i] = truncate_raw(ad.values()[i], by_bits);
  }
  return out;
}

FxTensor lkup(const FxTensor& table, const IndexVector& idx) {
  FxTensor td = table.to_dense();
  FxTensor out = FxTensor::zeros(idx.size(), table.cols(), table.scale_exp(),
                                 table.bound_bits());
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= table.rows()) {
      throw ValueError("lkup: index " + std::to_string(idx[i]) +
                       " out of range for table with " +
                       std::to_string(table.rows()) + " rows");
    }
    for (size_t j = 0; j < table.cols(); ++j) {
      out.at(i, j) = td.at(idx[i], j);
    }
  }
  return out;
}

FxTensor lkup_bw(const FxTensor& grads, const IndexVector& idx,
                 size_t table_rows) {
  if (grads.rows() != idx.size()) {
    throw ValueError("lkup_bw: gradient rows and index count differ");
  }
  FxTensor gd = grads.to_dense();
  FxTensor out = FxTensor::zeros(table_rows, grads.cols(), grads.scale_exp(),
                                 grads.bound_bits() + log2_ceil(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= table_rows) {
      throw ValueError("lkup_bw: index out of range");
    }
    for (size_t j = 0; j < grads.cols(); ++j) {
      out.at(idx[i], j) += gd.at(i, j);
    }
  }
  return out;
}

bool raw_equal(const FxTensor& a, const FxTensor& b) {
  if (!a.same_shape(b) || a.scale_exp() != b.scale_exp()) return false;
  return a.raw_row_major() == b.raw_row_major();
}

}  // namespace vfl

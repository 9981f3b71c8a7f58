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

#include "vfl/crypto_tensor.hpp"

#include <bit>
#include <mutex>

#include "vfl/detail/parallel.hpp"

namespace vfl {

namespace {

unsigned log2_ceil(size_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }

void check_budget(unsigned bound_bits, const PublicKey& pk, const char* op) {
  if (bound_bits + 1 >= pk.max_plain_bits()) {
    throw CryptoError(std::string(op) + ": value bound of " +
                      std::to_string(bound_bits) +
                      " bits does not fit the plaintext range of a " +
                      std::to_string(pk.max_plain_bits()) + "-bit key budget");
  }
}

void check_key(const CipherTensor& t, const PublicKey& pk, const char* op) {
  if (!(t.key_owner == pk.owner())) {
    throw KeyMismatchError(std::string(op) + ": tensor encrypted for party " +
                           t.key_owner.str());
  }
}

std::vector<Ciphertext> fresh_zeros(size_t n, const PublicKey& pk, Rng& rng) {
  std::vector<Ciphertext> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(pk.encrypt(0, rng));
  return out;
}

Ciphertext scalar_mul(const PublicKey& pk, const Ciphertext& c, const Int& k,
                      MulMode mode, unsigned fixed_bits) {
  if (mode == MulMode::kOblivious) {
    return pk.mul_plain_fixed(c, k, fixed_bits);
  }
  return pk.mul_plain(c, k);
}

}  // namespace

CipherTensor encrypt_tensor(const PublicKey& pk, const FxTensor& t, Rng& rng) {
  check_budget(t.bound_bits(), pk, "encrypt_tensor");
  std::vector<Int> raw = t.raw_row_major();
  CipherTensor out;
  out.rows = t.rows();
  out.cols = t.cols();
  out.scale_exp = t.scale_exp();
  out.bound_bits = t.bound_bits();
  out.key_owner = pk.owner();
  out.cells.reserve(raw.size());
  size_t bad = raw.size();
  size_t bad_count = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (bit_length(raw[i]) + 1 >= static_cast<int>(pk.max_plain_bits())) {
      if (bad == raw.size()) bad = i;
      ++bad_count;
    }
  }
  if (bad_count > 0) {
    throw CryptoError("encrypt_tensor: " + std::to_string(bad_count) +
                      " element(s) outside the plaintext range, first at " +
                      "flat index " + std::to_string(bad));
  }
  for (const Int& v : raw) out.cells.push_back(pk.encrypt(v, rng));
  return out;
}

FxTensor decrypt_tensor(const SecretKey& sk, const CipherTensor& t) {
  FxTensor out = FxTensor::zeros(t.rows, t.cols, t.scale_exp, t.bound_bits);
  detail::parallel_for(t.cells.size(), [&](size_t i) {
    out.values()[i] = sk.decrypt(t.cells[i]);
  });
  return out;
}

CipherTensor pc_matmul(const FxTensor& x, const CipherTensor& w,
                       const PublicKey& pk, Rng& rng, MulMode mode) {
  if (x.cols() != w.rows) throw ValueError("pc_matmul: inner dims differ");
  check_key(w, pk, "pc_matmul");
  unsigned out_bound = x.bound_bits() + w.bound_bits + log2_ceil(x.cols());
  check_budget(out_bound, pk, "pc_matmul");

  CipherTensor out;
  out.rows = x.rows();
  out.cols = w.cols;
  out.scale_exp = x.scale_exp() + w.scale_exp;
  out.bound_bits = out_bound;
  out.key_owner = w.key_owner;
  out.cells = fresh_zeros(out.rows * out.cols, pk, rng);

  const unsigned fixed_bits = x.bound_bits() + 1;
  detail::parallel_for(x.rows(), [&](size_t r) {
    if (x.is_sparse()) {
      for (size_t k = x.row_ptr()[r]; k < x.row_ptr()[r + 1]; ++k) {
        const Int& v = x.values()[k];
        size_t inner = x.col_idx()[k];
        for (size_t j = 0; j < out.cols; ++j) {
          out.at(r, j) = pk.add(
              out.at(r, j), scalar_mul(pk, w.at(inner, j), v, mode, fixed_bits));
        }
      }
    } else {
      for (size_t k = 0; k < x.cols(); ++k) {
        const Int& v = x.at(r, k);
        if (mode == MulMode::kFast && v == 0) continue;
        for (size_t j = 0; j < out.cols; ++j) {
          out.at(r, j) = pk.add(out.at(r, j),
                                scalar_mul(pk, w.at(k, j), v, mode, fixed_bits));
        }
      }
    }
  });
  return out;
}

CipherTensor pc_matmul_t(const FxTensor& x, const CipherTensor& g,
                         const PublicKey& pk, Rng& rng, MulMode mode) {
  if (x.rows() != g.rows) throw ValueError("pc_matmul_t: batch dims differ");
  check_key(g, pk, "pc_matmul_t");
  unsigned out_bound = x.bound_bits() + g.bound_bits + log2_ceil(x.rows());
  check_budget(out_bound, pk, "pc_matmul_t");

  CipherTensor out;
  out.rows = x.cols();
  out.cols = g.cols;
  out.scale_exp = x.scale_exp() + g.scale_exp;
  out.bound_bits = out_bound;
  out.key_owner = g.key_owner;
  out.cells = fresh_zeros(out.rows * out.cols, pk, rng);

  const unsigned fixed_bits = x.bound_bits() + 1;
  // Transposed accumulation writes rows of `out` indexed by x's columns, so
  // the batch loop stays outer and a mutex array guards output rows.
  std::vector<std::mutex> row_mu(out.rows);
  detail::parallel_for(x.rows(), [&](size_t r) {
    auto accumulate = [&](size_t i, const Int& v) {
      std::lock_guard<std::mutex> lock(row_mu[i]);
      for (size_t j = 0; j < out.cols; ++j) {
        out.at(i, j) =
            pk.add(out.at(i, j), scalar_mul(pk, g.at(r, j), v, mode, fixed_bits));
      }
    };
    if (x.is_sparse()) {
      for (size_t k = x.row_ptr()[r]; k < x.row_ptr()[r + 1]; ++k) {
        accumulate(x.col_idx()[k], x.values()[k]);
      }
    } else {
      for (size_t i = 0; i < x.cols(); ++i) {
        const Int& v = x.at(r, i);
        if (mode == MulMode::kFast && v == 0) continue;
        accumulate(i, v);
      }
    }
  });
  return out;
}

CipherTensor cp_matmul(const CipherTensor& c, const FxTensor& p,
                       const PublicKey& pk, Rng& rng, MulMode mode) {
  if (c.cols != p.rows()) throw ValueError("cp_matmul: inner dims differ");
  check_key(c, pk, "cp_matmul");
  unsigned out_bound = c.bound_bits + p.bound_bits() + log2_ceil(c.cols);
  check_budget(out_bound, pk, "cp_matmul");

  FxTensor pd = p.to_dense();
  CipherTensor out;
  out.rows = c.rows;
  out.cols = p.cols();
  out.scale_exp = c.scale_exp + p.scale_exp();
  out.bound_bits = out_bound;
  out.key_owner = c.key_owner;
  out.cells = fresh_zeros(out.rows * out.cols, pk, rng);

  const unsigned fixed_bits = p.bound_bits() + 1;
  detail::parallel_for(out.rows, [&](size_t r) {
    for (size_t k = 0; k < c.cols; ++k) {
      for (size_t j = 0; j < out.cols; ++j) {
        const Int& v = pd.at(k, j);
        if (mode == MulMode::kFast && v == 0) continue;
        out.at(r, j) = pk.add(out.at(r, j),
                              scalar_mul(pk, c.at(r, k), v, mode, fixed_bits));
      }
    }
  });
  return out;
}

CipherTensor cipher_add(const CipherTensor& a, const CipherTensor& b,
                        const PublicKey& pk) {
  if (!a.same_shape(b)) throw ValueError("cipher_add: shape mismatch");
  if (a.scale_exp != b.scale_exp) throw ValueError("cipher_add: scale mismatch");
  check_key(a, pk, "cipher_add");
  check_key(b, pk, "cipher_add");
  CipherTensor out = a;
  out.bound_bits = std::max(a.bound_bits, b.bound_bits) + 1;
  detail::parallel_for(out.cells.size(), [&](size_t i) {
    out.cells[i] = pk.add(a.cells[i], b.cells[i]);
  });
  return out;
}

CipherTensor cipher_add_plain(const CipherTensor& a, const FxTensor& p,
                              const PublicKey& pk) {
  if (a.rows != p.rows() || a.cols != p.cols()) {
    throw ValueError("cipher_add_plain: shape mismatch");
  }
  if (a.scale_exp != p.scale_exp()) {
    throw ValueError("cipher_add_plain: scale mismatch");
  }
  check_key(a, pk, "cipher_add_plain");
  std::vector<Int> raw = p.raw_row_major();
  CipherTensor out = a;
  out.bound_bits = std::max(a.bound_bits, p.bound_bits()) + 1;
  detail::parallel_for(out.cells.size(), [&](size_t i) {
    out.cells[i] = pk.add_plain(a.cells[i], raw[i]);
  });
  return out;
}

CipherTensor cipher_sub_plain(const CipherTensor& a, const FxTensor& p,
                              const PublicKey& pk) {
  return cipher_add_plain(a, neg(p.to_dense()), pk);
}

CipherTensor cipher_sub(const CipherTensor& a, const CipherTensor& b,
                        const PublicKey& pk) {
  CipherTensor nb = cipher_scale(b, FxScalar{Int(-1), 0}, pk);
  return cipher_add(a, nb, pk);
}

CipherTensor cipher_scale(const CipherTensor& a, const FxScalar& k,
                          const PublicKey& pk) {
  check_key(a, pk, "cipher_scale");
  CipherTensor out = a;
  out.scale_exp = a.scale_exp + k.scale_exp;
  out.bound_bits = a.bound_bits + std::max(bit_length(k.raw), 1);
  detail::parallel_for(out.cells.size(), [&](size_t i) {
    out.cells[i] = pk.mul_plain(a.cells[i], k.raw);
  });
  return out;
}

CipherTensor cipher_transpose(const CipherTensor& a) {
  CipherTensor out = a;
  out.rows = a.cols;
  out.cols = a.rows;
  for (size_t r = 0; r < a.rows; ++r) {
    for (size_t c = 0; c < a.cols; ++c) {
      out.cells[c * out.cols + r] = a.cells[r * a.cols + c];
    }
  }
  return out;
}

CipherTensor row_gather(const CipherTensor& table, const IndexVector& idx,
                        const PublicKey& pk, Rng& rng, bool rerandomize) {
  check_key(table, pk, "row_gather");
  CipherTensor out;
  out.rows = idx.size();
  out.cols = table.cols;
  out.scale_exp = table.scale_exp;
  out.bound_bits = table.bound_bits;
  out.key_owner = table.key_owner;
  out.cells.reserve(out.rows * out.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= table.rows) {
      throw ValueError("row_gather: index " + std::to_string(idx[i]) +
                       " out of range");
    }
    for (size_t j = 0; j < table.cols; ++j) {
      Ciphertext c = table.at(idx[i], j);
      if (rerandomize) c = pk.rerandomize(c, rng);
      out.cells.push_back(std::move(c));
    }
  }
  return out;
}

CipherTensor scatter_add_rows(const CipherTensor& grads, const IndexVector& idx,
                              size_t table_rows, const PublicKey& pk,
                              Rng& rng) {
  if (grads.rows != idx.size()) {
    throw ValueError("scatter_add_rows: gradient rows and index count differ");
  }
  check_key(grads, pk, "scatter_add_rows");
  CipherTensor out;
  out.rows = table_rows;
  out.cols = grads.cols;
  out.scale_exp = grads.scale_exp;
  out.bound_bits = grads.bound_bits + log2_ceil(idx.size());
  out.key_owner = grads.key_owner;
  out.cells = fresh_zeros(out.rows * out.cols, pk, rng);
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= table_rows) {
      throw ValueError("scatter_add_rows: index out of range");
    }
    for (size_t j = 0; j < grads.cols; ++j) {
      out.at(idx[i], j) = pk.add(out.at(idx[i], j), grads.at(i, j));
    }
  }
  return out;
}

Bytes serialize(const CipherTensor& t) {
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(t.rows));
  put_u32_be(out, static_cast<uint32_t>(t.cols));
  out.push_back(static_cast<uint8_t>(t.scale_exp));
  out.push_back(t.key_owner.code);
  for (const Ciphertext& c : t.cells) {
    Bytes mag = magnitude_bytes(c.value);
    put_u32_be(out, static_cast<uint32_t>(mag.size()));
    out.insert(out.end(), mag.begin(), mag.end());
  }
  return out;
}

CipherTensor deserialize_cipher_tensor(const Bytes& in) {
  size_t pos = 0;
  CipherTensor t;
  t.rows = get_u32_be(in, pos);
  t.cols = get_u32_be(in, pos);
  if (pos + 2 > in.size()) throw ValueError("truncated cipher tensor header");
  t.scale_exp = in[pos++];
  t.key_owner = PartyId{in[pos++]};
  t.cells.reserve(t.rows * t.cols);
  for (size_t i = 0; i < t.rows * t.cols; ++i) {
    uint32_t len = get_u32_be(in, pos);
    if (pos + len > in.size()) throw ValueError("truncated cipher tensor cell");
    t.cells.push_back(
        Ciphertext{from_magnitude_bytes(in.data() + pos, len), t.key_owner});
    pos += len;
  }
  if (pos != in.size()) throw ValueError("trailing bytes after cipher tensor");
  return t;
}

Bytes serialize(const FxTensor& t) {
  FxTensor d = t.to_dense();
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(d.rows()));
  put_u32_be(out, static_cast<uint32_t>(d.cols()));
  out.push_back(static_cast<uint8_t>(d.scale_exp()));
  for (const Int& v : d.values()) put_signed_int(out, v);
  return out;
}

FxTensor deserialize_fx_tensor(const Bytes& in) {
  size_t pos = 0;
  uint32_t rows = get_u32_be(in, pos);
  uint32_t cols = get_u32_be(in, pos);
  if (pos + 1 > in.size()) throw ValueError("truncated tensor header");
  unsigned scale = in[pos++];
  std::vector<Int> vals;
  vals.reserve(static_cast<size_t>(rows) * cols);
  for (size_t i = 0; i < static_cast<size_t>(rows) * cols; ++i) {
    vals.push_back(get_signed_int(in, pos));
  }
  if (pos != in.size()) throw ValueError("trailing bytes after tensor");
  return FxTensor::dense(rows, cols, std::move(vals), scale, 0);
}

}  // namespace vfl

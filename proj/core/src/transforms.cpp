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

#include "vfl/transforms.hpp"

namespace vfl {

FxTensor mask_tensor(size_t rows, size_t cols, unsigned scale_exp,
                     unsigned bound_bits, Rng& rng, const FxConfig& cfg) {
  FxTensor t = FxTensor::zeros(rows, cols, scale_exp,
                               bound_bits + cfg.lambda + 1);
  for (Int& v : t.values()) v = mask_sample(rng, cfg, bound_bits);
  return t;
}

FxTensor he2ss_nonkey(ProtocolSession& session, const std::string& tag,
                      const CipherTensor& c, Rng& rng) {
  if (c.key_owner == session.self()) {
    throw ProtocolError(tag, "he2ss: ciphertext is under this party's own key");
  }
  const PublicKey& pk = session.peer_pk();
  FxTensor phi =
      mask_tensor(c.rows, c.cols, c.scale_exp, c.bound_bits, rng, session.fx());
  CipherTensor blinded = cipher_sub_plain(c, phi, pk);
  for (Ciphertext& cell : blinded.cells) cell = pk.rerandomize(cell, rng);
  session.send_cipher_tensor(tag, blinded);
  return phi;
}

FxTensor he2ss_key(ProtocolSession& session, const std::string& tag,
                   size_t rows, size_t cols, unsigned scale_exp,
                   unsigned value_bound_bits) {
  unsigned piece_bound = value_bound_bits + session.fx().lambda + 1;
  CipherTensor blinded = session.recv_cipher_tensor(tag, piece_bound);
  if (blinded.rows != rows || blinded.cols != cols) {
    throw ProtocolError(tag, "he2ss: unexpected tensor shape");
  }
  if (blinded.scale_exp != scale_exp) {
    throw ProtocolError(tag, "he2ss: unexpected scale");
  }
  FxTensor piece = decrypt_tensor(session.own_sk(), blinded);
  for (const Int& v : piece.values()) {
    if (bit_length(v) > static_cast<int>(piece_bound)) {
      throw ProtocolError(tag,
                          "he2ss: decrypted magnitude exceeds the value bound; "
                          "upstream overflow");
    }
  }
  return piece;
}

void ss2he_target(ProtocolSession& session, const std::string& tag,
                  const FxTensor& own_piece, Rng& rng) {
  CipherTensor enc = encrypt_tensor(session.own_pk(), own_piece, rng);
  session.send_cipher_tensor(tag, enc);
}

CipherTensor ss2he_other(ProtocolSession& session, const std::string& tag,
                         const FxTensor& own_piece, unsigned peer_bound_bits) {
  CipherTensor enc = session.recv_cipher_tensor(tag, peer_bound_bits);
  if (enc.scale_exp != own_piece.scale_exp()) {
    throw ProtocolError(tag, "ss2he: piece scales disagree");
  }
  if (enc.rows != own_piece.rows() || enc.cols != own_piece.cols()) {
    throw ProtocolError(tag, "ss2he: piece shapes disagree");
  }
  return cipher_add_plain(enc, own_piece, session.peer_pk());
}

std::pair<FxTensor, FxTensor> share_tensor(const FxTensor& v, Rng& rng,
                                           const FxConfig& cfg) {
  FxTensor vd = v.to_dense();
  for (const Int& x : vd.values()) {
    if (bit_length(x) > static_cast<int>(cfg.vmax)) {
      throw ValueError("share_tensor: element exceeds the value bound");
    }
  }
  FxTensor mask = mask_tensor(v.rows(), v.cols(), v.scale_exp(), cfg.vmax, rng, cfg);
  FxTensor rest = sub(vd, mask);
  return {mask, rest};
}

FxTensor restore_tensor(const FxTensor& a, const FxTensor& b) {
  return add(a, b);
}

}  // namespace vfl

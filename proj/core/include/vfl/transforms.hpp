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

#include "vfl/transport.hpp"

namespace vfl {

// HE -> SS transform of a ciphertext tensor held by the party that does NOT
// own its key. Exactly one (ciphertext) message crosses the channel.
//
// Non-key party: draws a fresh mask tensor phi sized for the ciphertext's
// declared bound, sends re-randomized Enc(v - phi), keeps phi as its piece.
FxTensor he2ss_nonkey(ProtocolSession& session, const std::string& tag,
                      const CipherTensor& c, Rng& rng);
// Key party: receives Enc(v - phi), decrypts, keeps v - phi as its piece.
// A decrypted magnitude above value_bound_bits + lambda + 1 bits signals an
// upstream overflow bug and is reported as an error.
FxTensor he2ss_key(ProtocolSession& session, const std::string& tag,
                   size_t rows, size_t cols, unsigned scale_exp,
                   unsigned value_bound_bits);

// SS -> HE transform: turns pieces held by the two parties into Enc(v) under
// the key of `target`, held by the other party. Only a ciphertext crosses.
//
// Target key owner: encrypts its piece under its own key and sends it.
void ss2he_target(ProtocolSession& session, const std::string& tag,
                  const FxTensor& own_piece, Rng& rng);
// Non-target party: receives Enc(v_target) and adds its plaintext piece.
CipherTensor ss2he_other(ProtocolSession& session, const std::string& tag,
                         const FxTensor& own_piece, unsigned peer_bound_bits);

/// Tensor-level additive sharing: (mask piece, v - mask). Element bounds must
/// respect the configured vmax.
std::pair<FxTensor, FxTensor> share_tensor(const FxTensor& v, Rng& rng,
                                           const FxConfig& cfg);
/// Exact integer restore of two piece tensors at equal scale.
FxTensor restore_tensor(const FxTensor& a, const FxTensor& b);

/// Fresh mask tensor uniform over [-2^(bound+lambda), 2^(bound+lambda)].
FxTensor mask_tensor(size_t rows, size_t cols, unsigned scale_exp,
                     unsigned bound_bits, Rng& rng, const FxConfig& cfg);

}  // namespace vfl

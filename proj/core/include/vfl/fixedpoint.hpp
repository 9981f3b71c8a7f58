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

#include <utility>

#include "vfl/common.hpp"
#include "vfl/paillier.hpp"
#include "vfl/rng.hpp"

namespace vfl {

/// Fixed-point and hiding parameters shared by both parties. All of them must
/// agree across a session; connect() verifies this.
struct FxConfig {
  unsigned f_bits = 20;   // fractional bits per scale step
  unsigned lambda = 40;   // statistical hiding parameter
  unsigned vmax = 128;    // bit bound for encoded values entering share()
  bool operator==(const FxConfig&) const = default;
};

/// Fixed-point scalar: decoded real value = raw / 2^scale_exp.
struct FxScalar {
  Int raw;
  unsigned scale_exp = 0;
};

/// One party's additive piece of a secret. Pieces of a logical value sum to
/// its raw integer exactly (no modular reduction); each piece alone is
/// statistically independent of the secret up to the hiding parameter.
struct SharePiece {
  Int raw;
  unsigned scale_exp = 0;
  PartyId owner;
};

/// Round-to-nearest encoding of x at f_bits fractional bits. Rejects
/// |x * 2^f_bits| >= 2^vmax.
FxScalar encode(double x, unsigned f_bits, const FxConfig& cfg = {});
double decode(const FxScalar& v);
double decode_raw(const Int& raw, unsigned scale_exp);

/// Uniform draw from [-2^(bound_bits + lambda), 2^(bound_bits + lambda)]:
/// hides any value of at most bound_bits bits with statistical parameter
/// lambda. bound_bits defaults to cfg.vmax for plain share() calls; callers
/// masking wider intermediates pass their tracked bound.
Int mask_sample(Rng& rng, const FxConfig& cfg, unsigned bound_bits);

/// Splits v into (piece for `first`, piece for `second`): the first piece is
/// a fresh mask, the second is v - mask.
std::pair<SharePiece, SharePiece> share(const FxScalar& v, Rng& rng,
                                        const FxConfig& cfg,
                                        PartyId first = PartyId::A(),
                                        PartyId second = PartyId::B());

/// Exact integer sum of two pieces at equal scale.
FxScalar restore(const SharePiece& a, const SharePiece& b);

/// Arithmetic shift right by `by_bits` (floor toward -inf); reduces the
/// scale. Restoring two independently truncated pieces matches the truncated
/// secret within one ulp at the new scale.
SharePiece truncate_piece(const SharePiece& p, unsigned by_bits);
Int truncate_raw(const Int& raw, unsigned by_bits);

}  // namespace vfl

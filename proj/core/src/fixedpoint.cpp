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

#include "vfl/fixedpoint.hpp"

#include <cmath>

namespace vfl {

FxScalar encode(double x, unsigned f_bits, const FxConfig& cfg) {
  if (!std::isfinite(x)) throw ValueError("encode: non-finite input");
  double scaled = std::ldexp(x, static_cast<int>(f_bits));
  Int raw;
  if (std::fabs(scaled) < 9.0e15) {
    raw = Int(static_cast<long>(std::llround(scaled)));
  } else {
    // Beyond 2^53 every double is an exact integer already.
    mpz_set_d(raw.get_mpz_t(), scaled);
  }
  if (bit_length(raw) > static_cast<int>(cfg.vmax)) {
    throw ValueError("encode: magnitude overflows the value bound");
  }
  return FxScalar{raw, f_bits};
}

double decode(const FxScalar& v) { return decode_raw(v.raw, v.scale_exp); }

double decode_raw(const Int& raw, unsigned scale_exp) {
  return std::ldexp(raw.get_d(), -static_cast<int>(scale_exp));
}

Int mask_sample(Rng& rng, const FxConfig& cfg, unsigned bound_bits) {
  return rng.symmetric(bound_bits + cfg.lambda);
}

std::pair<SharePiece, SharePiece> share(const FxScalar& v, Rng& rng,
                                        const FxConfig& cfg, PartyId first,
                                        PartyId second) {
  if (bit_length(v.raw) > static_cast<int>(cfg.vmax)) {
    throw ValueError("share: secret exceeds the value bound");
  }
  Int m = mask_sample(rng, cfg, cfg.vmax);
  return {SharePiece{m, v.scale_exp, first},
          SharePiece{v.raw - m, v.scale_exp, second}};
}

FxScalar restore(const SharePiece& a, const SharePiece& b) {
  if (a.scale_exp != b.scale_exp) {
    throw ValueError("restore: scale mismatch (" +
                     std::to_string(a.scale_exp) + " vs " +
                     std::to_string(b.scale_exp) + ")");
  }
  return FxScalar{a.raw + b.raw, a.scale_exp};
}

Int truncate_raw(const Int& raw, unsigned by_bits) {
  Int out;
  mpz_fdiv_q_2exp(out.get_mpz_t(), raw.get_mpz_t(), by_bits);
  return out;
}

SharePiece truncate_piece(const SharePiece& p, unsigned by_bits) {
  if (by_bits > p.scale_exp) {
    throw ValueError("truncate_piece: shift exceeds the carried scale");
  }
  return SharePiece{truncate_raw(p.raw, by_bits), p.scale_exp - by_bits,
                    p.owner};
}

}  // namespace vfl

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

#include <memory>
#include <string>

#include "vfl/common.hpp"

namespace vfl {

/// Seedable random source for big integers.
///
/// Protocol runs derive every random draw (key generation, masks, encryption
/// randomness, batch shuffles) from labeled substreams of a root seed, so two
/// runs with the same seeds are bit-identical. Production entropy comes from
/// the OS via from_entropy().
class Rng {
 public:
  explicit Rng(uint64_t seed);
  ~Rng();
  Rng(Rng&&) noexcept;
  Rng& operator=(Rng&&) noexcept;
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  static Rng from_entropy();

  /// Deterministic substream: seed' = mix(seed, label). Independent of the
  /// draw position of this stream, so call order between substreams does not
  /// matter.
  Rng fork(const std::string& label) const;

  /// Uniform in [0, bound).
  Int below(const Int& bound);
  /// Uniform with exactly `bits` random bits, i.e. in [0, 2^bits).
  Int bits(unsigned bits);
  /// Uniform in [-2^bits, 2^bits] (symmetric mask range).
  Int symmetric(unsigned bits);
  /// Uniform in [lo, hi] over int64.
  int64_t int_in(int64_t lo, int64_t hi);
  /// Uniform double in [0, 1).
  double real();

  uint64_t seed() const { return seed_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  uint64_t seed_;
};

}  // namespace vfl

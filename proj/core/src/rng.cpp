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

#include "vfl/rng.hpp"

#include <gmp.h>

#include <random>

namespace vfl {

struct Rng::Impl {
  gmp_randstate_t state;
};

namespace {

// splitmix64 finalizer; decent avalanche for seed derivation.
uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t label_seed(uint64_t seed, const std::string& label) {
  uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (char c : label) {
    h = mix64(h ^ static_cast<uint8_t>(c));
  }
  return h;
}

}  // namespace

Rng::Rng(uint64_t seed) : impl_(std::make_unique<Impl>()), seed_(seed) {
  gmp_randinit_mt(impl_->state);
  gmp_randseed_ui(impl_->state, seed);
}

Rng::~Rng() {
  if (impl_) gmp_randclear(impl_->state);
}

Rng::Rng(Rng&&) noexcept = default;
Rng& Rng::operator=(Rng&&) noexcept = default;

Rng Rng::from_entropy() {
  std::random_device rd;
  uint64_t s = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  return Rng(s);
}

Rng Rng::fork(const std::string& label) const {
  return Rng(label_seed(seed_, label));
}

Int Rng::below(const Int& bound) {
  if (bound <= 0) throw ValueError("Rng::below requires a positive bound");
  Int r;
  mpz_urandomm(r.get_mpz_t(), impl_->state, bound.get_mpz_t());
  return r;
}

Int Rng::bits(unsigned nbits) {
  Int r;
  mpz_urandomb(r.get_mpz_t(), impl_->state, nbits);
  return r;
}

Int Rng::symmetric(unsigned nbits) {
  // Uniform over [-2^nbits, 2^nbits]: draw from [0, 2^(nbits+1)] and shift.
  Int span = pow2(nbits + 1) + 1;
  return below(span) - pow2(nbits);
}

int64_t Rng::int_in(int64_t lo, int64_t hi) {
  if (hi < lo) throw ValueError("Rng::int_in empty range");
  Int span = Int(hi) - Int(lo) + 1;
  Int r = below(span);
  return lo + r.get_si();
}

double Rng::real() {
  constexpr unsigned kBits = 53;
  Int r = bits(kBits);
  return r.get_d() / 9007199254740992.0;  // 2^53
}

}  // namespace vfl

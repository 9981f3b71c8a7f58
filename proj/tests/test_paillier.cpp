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

#include <doctest.h>

#include "vfl/paillier.hpp"

using namespace vfl;

namespace {

KeyPair test_keys(uint64_t seed = 7, PartyId owner = PartyId::A()) {
  Rng rng(seed);
  return keygen(512, owner, rng);
}

}  // namespace

TEST_CASE("keygen rejects unsupported sizes") {
  Rng rng(1);
  CHECK_THROWS_AS(keygen(256, PartyId::A(), rng), ConfigError);
  CHECK_THROWS_AS(keygen(1000, PartyId::A(), rng), ConfigError);
}

TEST_CASE("identity cases") {
  KeyPair kp = test_keys();
  Rng rng(11);
  CHECK(kp.sk.decrypt(kp.pk.encrypt(0, rng)) == 0);
  CHECK(kp.sk.decrypt(kp.pk.encrypt(-1, rng)) == -1);
  CHECK(kp.sk.decrypt(kp.pk.encrypt(7, rng)) == 7);
  CHECK(kp.sk.decrypt(kp.pk.encrypt(-7, rng)) == -7);
}

TEST_CASE("randomized round trip over the signed range") {
  KeyPair kp = test_keys();
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    Int v = rng.symmetric(100);
    CHECK(kp.sk.decrypt(kp.pk.encrypt(v, rng)) == v);
  }
}

TEST_CASE("encryption is probabilistic") {
  KeyPair kp = test_keys();
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    Ciphertext c1 = kp.pk.encrypt(5, rng);
    Ciphertext c2 = kp.pk.encrypt(5, rng);
    CHECK(c1.value != c2.value);
    CHECK(kp.sk.decrypt(c1) == 5);
    CHECK(kp.sk.decrypt(c2) == 5);
  }
}

TEST_CASE("plaintext range bound is enforced") {
  KeyPair kp = test_keys();
  Rng rng(14);
  Int half_n = kp.pk.n() / 2;
  CHECK_THROWS_AS(kp.pk.encrypt(half_n, rng), CryptoError);
  CHECK_THROWS_AS(kp.pk.encrypt(-half_n, rng), CryptoError);
  CHECK(kp.sk.decrypt(kp.pk.encrypt(half_n - 1, rng)) == half_n - 1);
}

TEST_CASE("homomorphic addition") {
  KeyPair kp = test_keys();
  Rng rng(15);
  Ciphertext c = kp.pk.add(kp.pk.encrypt(2, rng), kp.pk.encrypt(3, rng));
  CHECK(kp.sk.decrypt(c) == 5);

  // Enc(v) + Enc(0) is value-equal after decryption.
  Ciphertext v = kp.pk.encrypt(42, rng);
  CHECK(kp.sk.decrypt(kp.pk.add(v, kp.pk.encrypt(0, rng))) == 42);

  for (int i = 0; i < 500; ++i) {
    Int a = rng.symmetric(90), b = rng.symmetric(90);
    CHECK(kp.sk.decrypt(kp.pk.add(kp.pk.encrypt(a, rng),
                                  kp.pk.encrypt(b, rng))) == a + b);
  }
}

TEST_CASE("scalar addition") {
  KeyPair kp = test_keys();
  Rng rng(16);
  CHECK(kp.sk.decrypt(kp.pk.add_plain(kp.pk.encrypt(4, rng), 3)) == 7);
  CHECK(kp.sk.decrypt(kp.pk.add_plain(kp.pk.encrypt(4, rng), -4)) == 0);
  for (int i = 0; i < 500; ++i) {
    Int a = rng.symmetric(90), k = rng.symmetric(90);
    CHECK(kp.sk.decrypt(kp.pk.add_plain(kp.pk.encrypt(a, rng), k)) == a + k);
  }
}

TEST_CASE("scalar multiplication") {
  KeyPair kp = test_keys();
  Rng rng(17);
  CHECK(kp.sk.decrypt(kp.pk.mul_plain(kp.pk.encrypt(4, rng), 3)) == 12);
  CHECK(kp.sk.decrypt(kp.pk.mul_plain(kp.pk.encrypt(4, rng), -1)) == -4);
  for (int i = 0; i < 500; ++i) {
    Int v = rng.symmetric(60), k = rng.symmetric(40);
    CHECK(kp.sk.decrypt(kp.pk.mul_plain(kp.pk.encrypt(v, rng), k)) == k * v);
  }
}

TEST_CASE("fixed-ladder multiplication matches the fast path") {
  KeyPair kp = test_keys();
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    Int v = rng.symmetric(50), k = rng.symmetric(20);
    Ciphertext c = kp.pk.encrypt(v, rng);
    CHECK(kp.sk.decrypt(kp.pk.mul_plain_fixed(c, k, 22)) == k * v);
  }
  Ciphertext c = kp.pk.encrypt(9, rng);
  CHECK(kp.sk.decrypt(kp.pk.mul_plain_fixed(c, 0, 22)) == 0);
  CHECK_THROWS_AS(kp.pk.mul_plain_fixed(c, pow2(30), 22), ValueError);
}

TEST_CASE("wrong party's key is a detected contract error") {
  KeyPair a = test_keys(21, PartyId::A());
  KeyPair b = test_keys(22, PartyId::B());
  Rng rng(23);
  Ciphertext c = a.pk.encrypt(5, rng);
  CHECK_THROWS_AS(b.sk.decrypt(c), KeyMismatchError);
  CHECK_THROWS_AS(b.pk.add(c, c), KeyMismatchError);
  Ciphertext cb = b.pk.encrypt(5, rng);
  CHECK_THROWS_AS(b.pk.add(cb, c), KeyMismatchError);
}

TEST_CASE("malformed ciphertext is distinct from key mismatch") {
  KeyPair kp = test_keys();
  Ciphertext junk{kp.pk.n_squared() + 1, kp.pk.owner()};
  CHECK_THROWS_AS(kp.sk.decrypt(junk), CryptoError);
  CHECK_THROWS_WITH_AS(kp.sk.decrypt(junk),
                       doctest::Contains("malformed"), CryptoError);
}

TEST_CASE("CRT decryption equals the definitional path") {
  KeyPair kp = test_keys();
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    Int v = rng.symmetric(100);
    Ciphertext c = kp.pk.encrypt(v, rng);
    CHECK(kp.sk.decrypt(c, /*use_crt=*/true) ==
          kp.sk.decrypt(c, /*use_crt=*/false));
  }
}

TEST_CASE("rerandomization preserves the plaintext") {
  KeyPair kp = test_keys();
  Rng rng(25);
  Ciphertext c = kp.pk.encrypt(77, rng);
  Ciphertext r = kp.pk.rerandomize(c, rng);
  CHECK(c.value != r.value);
  CHECK(kp.sk.decrypt(r) == 77);
}

TEST_CASE("ciphertext and public key serialization round trips") {
  KeyPair kp = test_keys(31, PartyId::B());
  Rng rng(32);
  Ciphertext c = kp.pk.encrypt(-12345, rng);
  Ciphertext back = deserialize_ciphertext(serialize(c));
  CHECK(back.value == c.value);
  CHECK(back.key_owner == c.key_owner);

  PublicKey pk2 = PublicKey::deserialize(kp.pk.serialize(), PartyId::B());
  CHECK(pk2 == kp.pk);
  CHECK(kp.sk.decrypt(pk2.encrypt(99, rng)) == 99);
}

TEST_CASE("keys for different parties decrypt independently") {
  KeyPair a = test_keys(41, PartyId::A());
  KeyPair b = test_keys(42, PartyId::B());
  Rng rng(43);
  Ciphertext ca = a.pk.encrypt(10, rng);
  Ciphertext cb = b.pk.encrypt(-10, rng);
  CHECK(a.sk.decrypt(ca) == 10);
  CHECK(b.sk.decrypt(cb) == -10);
}

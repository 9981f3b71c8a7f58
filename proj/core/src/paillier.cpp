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

#include "vfl/paillier.hpp"

namespace vfl {

std::atomic<uint64_t> PaillierOpCounts::encrypts{0};
std::atomic<uint64_t> PaillierOpCounts::decrypts{0};
std::atomic<uint64_t> PaillierOpCounts::adds{0};
std::atomic<uint64_t> PaillierOpCounts::plain_mults{0};

void PaillierOpCounts::reset() {
  encrypts = 0;
  decrypts = 0;
  adds = 0;
  plain_mults = 0;
}

Bytes magnitude_bytes(const Int& v) {
  if (v < 0) throw ValueError("magnitude_bytes expects a non-negative value");
  size_t count = 0;
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  if (v != 0) {
    mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  }
  out.resize(count);
  return out;
}

Int from_magnitude_bytes(const uint8_t* data, size_t len) {
  Int v = 0;
  if (len > 0) mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, data);
  return v;
}

void put_signed_int(Bytes& out, const Int& v) {
  // Sign byte + big-endian magnitude, length-prefixed over both.
  Bytes mag = magnitude_bytes(abs(v));
  put_u32_be(out, static_cast<uint32_t>(mag.size() + 1));
  out.push_back(v < 0 ? 1 : 0);
  out.insert(out.end(), mag.begin(), mag.end());
}

Int get_signed_int(const Bytes& in, size_t& pos) {
  uint32_t len = get_u32_be(in, pos);
  if (len == 0 || pos + len > in.size()) throw ValueError("truncated integer field");
  bool neg = in[pos] == 1;
  Int v = from_magnitude_bytes(in.data() + pos + 1, len - 1);
  pos += len;
  return neg ? Int(-v) : v;
}

PublicKey::PublicKey(Int n, PartyId owner) : n_(std::move(n)), owner_(owner) {
  n2_ = n_ * n_;
  half_n_ = n_ / 2;
  plain_bits_ = bit_length(n_) - 2;
}

void PublicKey::check_owner(const Ciphertext& c, const char* op) const {
  if (!(c.key_owner == owner_)) {
    throw KeyMismatchError(std::string(op) + ": ciphertext belongs to party " +
                           c.key_owner.str() + ", key is " + owner_.str());
  }
}

Ciphertext PublicKey::encrypt(const Int& v, Rng& rng) const {
  if (abs(v) >= half_n_) {
    throw CryptoError("plaintext magnitude exceeds n/2: " +
                      std::to_string(bit_length(v)) + " bits");
  }
  PaillierOpCounts::encrypts++;
  Int m = v < 0 ? Int(n_ + v) : v;
  // g = n+1: g^m = 1 + n*m (mod n^2), so encryption costs one exponentiation.
  Int gm = (1 + n_ * m) % n2_;
  Int r = rng.below(n_ - 1) + 1;
  Int rn;
  mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), n_.get_mpz_t(), n2_.get_mpz_t());
  return Ciphertext{(gm * rn) % n2_, owner_};
}

Ciphertext PublicKey::add(const Ciphertext& a, const Ciphertext& b) const {
  check_owner(a, "add");
  if (!(a.key_owner == b.key_owner)) {
    throw KeyMismatchError("add: operands encrypted under different keys");
  }
  PaillierOpCounts::adds++;
  return Ciphertext{(a.value * b.value) % n2_, owner_};
}

Ciphertext PublicKey::add_plain(const Ciphertext& c, const Int& k) const {
  check_owner(c, "add_plain");
  PaillierOpCounts::adds++;
  Int m = k % n_;
  if (m < 0) m += n_;
  Int gk = (1 + n_ * m) % n2_;
  return Ciphertext{(c.value * gk) % n2_, owner_};
}

Ciphertext PublicKey::mul_plain(const Ciphertext& c, const Int& k) const {
  check_owner(c, "mul_plain");
  PaillierOpCounts::plain_mults++;
  Int base = c.value;
  Int e = k;
  if (e < 0) {
    if (mpz_invert(base.get_mpz_t(), base.get_mpz_t(), n2_.get_mpz_t()) == 0) {
      throw CryptoError("mul_plain: ciphertext not invertible mod n^2");
    }
    e = -e;
  }
  Int out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), n2_.get_mpz_t());
  return Ciphertext{out, owner_};
}

Ciphertext PublicKey::mul_plain_fixed(const Ciphertext& c, const Int& k,
                                      unsigned bits) const {
  check_owner(c, "mul_plain_fixed");
  PaillierOpCounts::plain_mults++;
  Int base = c.value;
  Int e = k;
  if (e < 0) {
    if (mpz_invert(base.get_mpz_t(), base.get_mpz_t(), n2_.get_mpz_t()) == 0) {
      throw CryptoError("mul_plain_fixed: ciphertext not invertible mod n^2");
    }
    e = -e;
  }
  if (bit_length(e) > static_cast<int>(bits)) {
    throw ValueError("mul_plain_fixed: multiplier wider than the fixed ladder");
  }
  // Always-multiply ladder: `bits` squarings and `bits` multiplies, with the
  // result of the dummy multiply discarded when the exponent bit is clear.
  Int acc = 1, dummy = 1;
  for (int i = static_cast<int>(bits) - 1; i >= 0; --i) {
    acc = (acc * acc) % n2_;
    Int t = (acc * base) % n2_;
    if (mpz_tstbit(e.get_mpz_t(), i)) {
      acc = t;
    } else {
      dummy = t;
    }
  }
  (void)dummy;
  return Ciphertext{acc, owner_};
}

Ciphertext PublicKey::rerandomize(const Ciphertext& c, Rng& rng) const {
  check_owner(c, "rerandomize");
  Int r = rng.below(n_ - 1) + 1;
  Int rn;
  mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), n_.get_mpz_t(), n2_.get_mpz_t());
  return Ciphertext{(c.value * rn) % n2_, owner_};
}

Bytes PublicKey::serialize() const {
  Bytes out;
  Bytes mag = magnitude_bytes(n_);
  put_u32_be(out, static_cast<uint32_t>(mag.size()));
  out.insert(out.end(), mag.begin(), mag.end());
  return out;
}

PublicKey PublicKey::deserialize(const Bytes& in, PartyId owner) {
  size_t pos = 0;
  uint32_t len = get_u32_be(in, pos);
  if (pos + len > in.size()) throw ValueError("truncated public key");
  Int n = from_magnitude_bytes(in.data() + pos, len);
  return PublicKey(n, owner);
}

SecretKey::SecretKey(Int p, Int q, const PublicKey& pk)
    : pk_(pk), p_(std::move(p)), q_(std::move(q)) {
  p2_ = p_ * p_;
  q2_ = q_ * q_;
  Int pm1 = p_ - 1, qm1 = q_ - 1;
  mpz_lcm(lambda_.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  const Int& n = pk_.n();
  // mu = L(g^lambda mod n^2)^-1 mod n, with L(x) = (x-1)/n and g = n+1:
  // g^lambda = 1 + lambda*n (mod n^2), so L(g^lambda) = lambda mod n.
  Int l = lambda_ % n;
  if (mpz_invert(mu_.get_mpz_t(), l.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw CryptoError("invalid key: lambda not invertible mod n");
  }
  // CRT precomputation: hp = Lp(g^(p-1) mod p^2)^-1 mod p. With g = n+1,
  // g^(p-1) mod p^2 = 1 + (p-1)*n mod p^2.
  auto h_for = [&n](const Int& prime, const Int& prime2) {
    Int g_pow = (1 + (prime - 1) * (n % prime2)) % prime2;
    Int l_val = (g_pow - 1) / prime;
    Int h;
    if (mpz_invert(h.get_mpz_t(), l_val.get_mpz_t(), prime.get_mpz_t()) == 0) {
      throw CryptoError("invalid key: CRT inverse does not exist");
    }
    return h;
  };
  hp_ = h_for(p_, p2_);
  hq_ = h_for(q_, q2_);
  if (mpz_invert(q_inv_p_.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t()) == 0) {
    throw CryptoError("invalid key: p and q not coprime");
  }
}

Int SecretKey::decrypt_definitional(const Int& c) const {
  const Int& n = pk_.n();
  const Int& n2 = pk_.n_squared();
  Int u;
  mpz_powm(u.get_mpz_t(), c.get_mpz_t(), lambda_.get_mpz_t(), n2.get_mpz_t());
  Int l = (u - 1) / n;
  return (l * mu_) % n;
}

Int SecretKey::decrypt_crt(const Int& c) const {
  // mp = Lp(c^(p-1) mod p^2) * hp mod p, same for q, then CRT-combine.
  Int cp = c % p2_;
  Int cq = c % q2_;
  Int up, uq;
  Int pm1 = p_ - 1, qm1 = q_ - 1;
  mpz_powm(up.get_mpz_t(), cp.get_mpz_t(), pm1.get_mpz_t(), p2_.get_mpz_t());
  mpz_powm(uq.get_mpz_t(), cq.get_mpz_t(), qm1.get_mpz_t(), q2_.get_mpz_t());
  Int mp = (((up - 1) / p_) * hp_) % p_;
  Int mq = (((uq - 1) / q_) * hq_) % q_;
  Int diff = ((mp - mq) * q_inv_p_) % p_;
  if (diff < 0) diff += p_;
  return mq + diff * q_;
}

Int SecretKey::decrypt(const Ciphertext& c, bool use_crt) const {
  if (!(c.key_owner == pk_.owner())) {
    throw KeyMismatchError("decrypt: ciphertext belongs to party " +
                           c.key_owner.str() + ", secret key is " +
                           pk_.owner().str());
  }
  if (c.value < 0 || c.value >= pk_.n_squared()) {
    throw CryptoError("malformed ciphertext: value outside Z_{n^2}");
  }
  PaillierOpCounts::decrypts++;
  Int raw = use_crt ? decrypt_crt(c.value) : decrypt_definitional(c.value);
  // Centered lift of [0, n) onto the signed range.
  if (raw > pk_.n() / 2) raw -= pk_.n();
  return raw;
}

namespace {

Int random_prime(unsigned bits, Rng& rng) {
  // Random odd integer with the top bit set, advanced to the next prime.
  Int cand = rng.bits(bits - 1) | pow2(bits - 1) | 1;
  Int p;
  mpz_nextprime(p.get_mpz_t(), cand.get_mpz_t());
  return p;
}

}  // namespace

KeyPair keygen(unsigned bits, PartyId owner, Rng& rng) {
  if (bits != 512 && bits != 1024 && bits != 2048) {
    throw ConfigError("key size must be 512, 1024 or 2048 bits, got " +
                      std::to_string(bits));
  }
  while (true) {
    Int p = random_prime(bits / 2, rng);
    Int q = random_prime(bits / 2, rng);
    if (p == q) continue;
    Int n = p * q;
    if (bit_length(n) != static_cast<int>(bits)) continue;
    Int pm1 = p - 1, qm1 = q - 1, phi = pm1 * qm1, g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) continue;
    PublicKey pk(n, owner);
    return KeyPair{pk, SecretKey(p, q, pk)};
  }
}

Bytes serialize(const Ciphertext& c) {
  Bytes out;
  Bytes mag = magnitude_bytes(c.value);
  put_u32_be(out, static_cast<uint32_t>(mag.size()));
  out.insert(out.end(), mag.begin(), mag.end());
  out.push_back(c.key_owner.code);
  return out;
}

Ciphertext deserialize_ciphertext(const Bytes& in) {
  size_t pos = 0;
  uint32_t len = get_u32_be(in, pos);
  if (pos + len + 1 > in.size()) throw ValueError("truncated ciphertext");
  Int v = from_magnitude_bytes(in.data() + pos, len);
  PartyId owner{in[pos + len]};
  return Ciphertext{v, owner};
}

}  // namespace vfl

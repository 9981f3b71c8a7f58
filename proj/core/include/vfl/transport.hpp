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

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "vfl/crypto_tensor.hpp"

namespace vfl {

enum class PayloadKind : uint8_t {
  kControl = 0,
  kPubKey = 1,
  kCipherTensor = 2,
  kBlindedPlainTensor = 3,
};

std::string to_string(PayloadKind k);

/// One step-tagged protocol message. Step tags are stable identifiers such as
/// "mm.fw.he2ss.A"; recv() checks them, which turns any desynchronization
/// into an immediate error at the first out-of-order step.
struct Message {
  uint64_t session_id = 0;
  std::string step_tag;
  PayloadKind kind = PayloadKind::kControl;
  Bytes payload;
};

/// Frame: 4-byte length, 1-byte payload kind, 2-byte tag length, UTF-8 tag,
/// payload. The length covers everything after itself.
Bytes encode_frame(const Message& m);
Message decode_frame(const Bytes& frame, uint64_t session_id);

/// Ordered reliable byte channel carrying whole frames.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send_frame(const Bytes& frame) = 0;
  virtual Bytes recv_frame() = 0;
};

/// In-process loopback: a pair of queues. Default transport for tests.
class InProcChannel : public Channel {
 public:
  static std::pair<std::shared_ptr<InProcChannel>,
                   std::shared_ptr<InProcChannel>>
  make_pair();

  void send_frame(const Bytes& frame) override;
  Bytes recv_frame() override;

 private:
  struct Queue {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> frames;
  };
  std::shared_ptr<Queue> out_, in_;
};

/// Blocking TCP channel with length-prefixed frames.
class TcpChannel : public Channel {
 public:
  /// Listens on `port` and accepts exactly one peer.
  static std::unique_ptr<TcpChannel> listen(uint16_t port);
  /// Connects to host:port, retrying until `timeout` elapses.
  static std::unique_ptr<TcpChannel> connect(
      const std::string& host, uint16_t port,
      std::chrono::milliseconds timeout = std::chrono::seconds(10));

  ~TcpChannel() override;
  void send_frame(const Bytes& frame) override;
  Bytes recv_frame() override;

 private:
  explicit TcpChannel(int fd) : fd_(fd) {}
  int fd_ = -1;
};

enum class Direction : uint8_t { kSent = 0, kReceived = 1 };

struct TranscriptEntry {
  Direction direction;
  Message message;
  std::chrono::system_clock::time_point wall_time;
};

/// Append-only recording of every byte that crossed the channel, used by the
/// privacy scanner and the determinism checks.
class Transcript {
 public:
  void record(Direction d, const Message& m);
  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  /// One line per message: direction, step_tag, payload_kind, payload byte
  /// length, hex digest.
  std::string dump() const;
  /// Digest over (direction, tag, kind, payload) of all messages; wall times
  /// are excluded so retries with identical seeds digest identically.
  uint64_t digest() const;
  Bytes serialize() const;
  static Transcript deserialize(const Bytes& in);

 private:
  std::vector<TranscriptEntry> entries_;
};

uint64_t fnv1a64(const Bytes& data, uint64_t seed = 1469598103934665603ULL);
std::string hex64(uint64_t v);

/// Session-wide agreed parameters. Mismatches are detected at connect time.
struct SessionConfig {
  unsigned key_bits = 2048;
  FxConfig fx;
  uint64_t session_id = 1;
  bool operator==(const SessionConfig&) const = default;
};

/// Duplex, role-tagged session between two parties: owns the channel, the
/// local key pair, the peer's public key, and the transcript recorder.
class ProtocolSession {
 public:
  ProtocolSession(PartyId self, PartyId peer, SessionConfig cfg,
                  KeyPair own_keys, std::shared_ptr<Channel> channel)
      : self_(self),
        peer_(peer),
        cfg_(std::move(cfg)),
        own_keys_(std::move(own_keys)),
        channel_(std::move(channel)) {}

  PartyId self() const { return self_; }
  PartyId peer() const { return peer_; }
  const SessionConfig& config() const { return cfg_; }
  const FxConfig& fx() const { return cfg_.fx; }
  const KeyPair& own_keys() const { return own_keys_; }
  const PublicKey& own_pk() const { return own_keys_.pk; }
  const SecretKey& own_sk() const { return own_keys_.sk; }
  const PublicKey& peer_pk() const { return peer_pk_; }
  Transcript& transcript() { return transcript_; }
  const Transcript& transcript() const { return transcript_; }

  void send(const std::string& step_tag, PayloadKind kind, Bytes payload);
  /// Blocks for the next message; raises ProtocolError if its tag or kind
  /// differs from the expected ones.
  Message recv(const std::string& expected_tag, PayloadKind expected_kind);

  void send_cipher_tensor(const std::string& tag, const CipherTensor& t);
  /// `bound_bits` restores the declared bound the wire format does not carry.
  CipherTensor recv_cipher_tensor(const std::string& tag, unsigned bound_bits);
  void send_plain_tensor(const std::string& tag, const FxTensor& t);
  FxTensor recv_plain_tensor(const std::string& tag, unsigned bound_bits);

  /// Handshake: config control message, then public keys, in both directions.
  void exchange_keys();

 private:
  PartyId self_, peer_;
  SessionConfig cfg_;
  KeyPair own_keys_;
  PublicKey peer_pk_;
  std::shared_ptr<Channel> channel_;
  Transcript transcript_;
};

/// Builds a session over an established channel and runs the handshake.
ProtocolSession connect(PartyId self, PartyId peer, const SessionConfig& cfg,
                        KeyPair own_keys, std::shared_ptr<Channel> channel);

}  // namespace vfl

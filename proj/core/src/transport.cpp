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

#include "vfl/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <sstream>
#include <thread>

namespace vfl {

std::string to_string(PayloadKind k) {
  switch (k) {
    case PayloadKind::kControl: return "control";
    case PayloadKind::kPubKey: return "pubkey";
    case PayloadKind::kCipherTensor: return "ciphertext-tensor";
    case PayloadKind::kBlindedPlainTensor: return "blinded-plain-tensor";
  }
  return "unknown";
}

Bytes encode_frame(const Message& m) {
  if (m.step_tag.size() > 0xffff) throw ValueError("step tag too long");
  Bytes body;
  body.push_back(static_cast<uint8_t>(m.kind));
  body.push_back(static_cast<uint8_t>(m.step_tag.size() >> 8));
  body.push_back(static_cast<uint8_t>(m.step_tag.size() & 0xff));
  body.insert(body.end(), m.step_tag.begin(), m.step_tag.end());
  body.insert(body.end(), m.payload.begin(), m.payload.end());
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Message decode_frame(const Bytes& frame, uint64_t session_id) {
  size_t pos = 0;
  uint32_t len = get_u32_be(frame, pos);
  if (frame.size() != 4 + static_cast<size_t>(len) || len < 3) {
    throw ValueError("malformed frame length");
  }
  uint8_t kind = frame[pos++];
  if (kind > static_cast<uint8_t>(PayloadKind::kBlindedPlainTensor)) {
    throw ValueError("unknown payload kind " + std::to_string(kind));
  }
  size_t tag_len = (static_cast<size_t>(frame[pos]) << 8) | frame[pos + 1];
  pos += 2;
  if (pos + tag_len > frame.size()) throw ValueError("malformed frame tag");
  Message m;
  m.session_id = session_id;
  m.kind = static_cast<PayloadKind>(kind);
  m.step_tag.assign(frame.begin() + pos, frame.begin() + pos + tag_len);
  pos += tag_len;
  m.payload.assign(frame.begin() + pos, frame.end());
  return m;
}

std::pair<std::shared_ptr<InProcChannel>, std::shared_ptr<InProcChannel>>
InProcChannel::make_pair() {
  auto q1 = std::make_shared<Queue>();
  auto q2 = std::make_shared<Queue>();
  auto a = std::shared_ptr<InProcChannel>(new InProcChannel());
  auto b = std::shared_ptr<InProcChannel>(new InProcChannel());
  a->out_ = q1;
  a->in_ = q2;
  b->out_ = q2;
  b->in_ = q1;
  return {a, b};
}

void InProcChannel::send_frame(const Bytes& frame) {
  {
    std::lock_guard<std::mutex> lock(out_->mu);
    out_->frames.push_back(frame);
  }
  out_->cv.notify_one();
}

Bytes InProcChannel::recv_frame() {
  std::unique_lock<std::mutex> lock(in_->mu);
  in_->cv.wait(lock, [&] { return !in_->frames.empty(); });
  Bytes f = std::move(in_->frames.front());
  in_->frames.pop_front();
  return f;
}

namespace {

void send_all(int fd, const uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::send(fd, data + off, len - off, 0);
    if (n <= 0) throw ProtocolError("tcp", "send failed: " + std::string(strerror(errno)));
    off += static_cast<size_t>(n);
  }
}

void recv_all(int fd, uint8_t* data, size_t len) {
  size_t off = 0;
  while (off < len) {
    ssize_t n = ::recv(fd, data + off, len - off, 0);
    if (n == 0) throw ProtocolError("tcp", "peer closed the connection");
    if (n < 0) throw ProtocolError("tcp", "recv failed: " + std::string(strerror(errno)));
    off += static_cast<size_t>(n);
  }
}

}  // namespace

std::unique_ptr<TcpChannel> TcpChannel::listen(uint16_t port) {
  int srv = ::socket(AF_INET, SOCK_STREAM, 0);
  if (srv < 0) throw ProtocolError("tcp", "socket() failed");
  int one = 1;
  setsockopt(srv, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(srv, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(srv);
    throw ProtocolError("tcp", "bind failed on port " + std::to_string(port));
  }
  if (::listen(srv, 1) != 0) {
    ::close(srv);
    throw ProtocolError("tcp", "listen failed");
  }
  int fd = ::accept(srv, nullptr, nullptr);
  ::close(srv);
  if (fd < 0) throw ProtocolError("tcp", "accept failed");
  return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
}

std::unique_ptr<TcpChannel> TcpChannel::connect(
    const std::string& host, uint16_t port, std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw ProtocolError("tcp", "bad address: " + host);
  }
  while (true) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw ProtocolError("tcp", "socket() failed");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      throw ProtocolError("tcp", "connect timeout to " + host + ":" +
                                     std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpChannel::send_frame(const Bytes& frame) {
  send_all(fd_, frame.data(), frame.size());
}

Bytes TcpChannel::recv_frame() {
  uint8_t head[4];
  recv_all(fd_, head, 4);
  uint32_t len = (static_cast<uint32_t>(head[0]) << 24) |
                 (static_cast<uint32_t>(head[1]) << 16) |
                 (static_cast<uint32_t>(head[2]) << 8) | head[3];
  Bytes frame(head, head + 4);
  frame.resize(4 + len);
  recv_all(fd_, frame.data() + 4, len);
  return frame;
}

uint64_t fnv1a64(const Bytes& data, uint64_t seed) {
  uint64_t h = seed;
  for (uint8_t b : data) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

void Transcript::record(Direction d, const Message& m) {
  entries_.push_back({d, m, std::chrono::system_clock::now()});
}

std::string Transcript::dump() const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    os << (e.direction == Direction::kSent ? "sent" : "recv") << ", "
       << e.message.step_tag << ", " << to_string(e.message.kind) << ", "
       << e.message.payload.size() << ", " << hex64(fnv1a64(e.message.payload))
       << "\n";
  }
  return os.str();
}

uint64_t Transcript::digest() const {
  uint64_t h = 1469598103934665603ULL;
  for (const auto& e : entries_) {
    Bytes meta;
    meta.push_back(static_cast<uint8_t>(e.direction));
    meta.push_back(static_cast<uint8_t>(e.message.kind));
    meta.insert(meta.end(), e.message.step_tag.begin(), e.message.step_tag.end());
    h = fnv1a64(meta, h);
    h = fnv1a64(e.message.payload, h);
  }
  return h;
}

Bytes Transcript::serialize() const {
  Bytes out;
  put_u32_be(out, static_cast<uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    out.push_back(static_cast<uint8_t>(e.direction));
    Bytes frame = encode_frame(e.message);
    put_u32_be(out, static_cast<uint32_t>(frame.size()));
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

Transcript Transcript::deserialize(const Bytes& in) {
  size_t pos = 0;
  uint32_t count = get_u32_be(in, pos);
  Transcript t;
  for (uint32_t i = 0; i < count; ++i) {
    if (pos >= in.size()) throw ValueError("truncated transcript");
    Direction d = static_cast<Direction>(in[pos++]);
    uint32_t len = get_u32_be(in, pos);
    if (pos + len > in.size()) throw ValueError("truncated transcript frame");
    Bytes frame(in.begin() + pos, in.begin() + pos + len);
    pos += len;
    t.entries_.push_back(
        {d, decode_frame(frame, 0), std::chrono::system_clock::time_point{}});
  }
  return t;
}

void ProtocolSession::send(const std::string& step_tag, PayloadKind kind,
                           Bytes payload) {
  Message m{cfg_.session_id, step_tag, kind, std::move(payload)};
  transcript_.record(Direction::kSent, m);
  channel_->send_frame(encode_frame(m));
}

Message ProtocolSession::recv(const std::string& expected_tag,
                              PayloadKind expected_kind) {
  Bytes frame = channel_->recv_frame();
  Message m = decode_frame(frame, cfg_.session_id);
  transcript_.record(Direction::kReceived, m);
  if (m.step_tag != expected_tag) {
    throw ProtocolError(expected_tag,
                        "protocol desync: received step '" + m.step_tag + "'");
  }
  if (m.kind != expected_kind) {
    throw ProtocolError(expected_tag, "unexpected payload kind " +
                                          to_string(m.kind) + ", wanted " +
                                          to_string(expected_kind));
  }
  return m;
}

void ProtocolSession::send_cipher_tensor(const std::string& tag,
                                         const CipherTensor& t) {
  send(tag, PayloadKind::kCipherTensor, serialize(t));
}

CipherTensor ProtocolSession::recv_cipher_tensor(const std::string& tag,
                                                 unsigned bound_bits) {
  Message m = recv(tag, PayloadKind::kCipherTensor);
  CipherTensor t = deserialize_cipher_tensor(m.payload);
  t.bound_bits = bound_bits;
  return t;
}

void ProtocolSession::send_plain_tensor(const std::string& tag,
                                        const FxTensor& t) {
  send(tag, PayloadKind::kBlindedPlainTensor, serialize(t));
}

FxTensor ProtocolSession::recv_plain_tensor(const std::string& tag,
                                            unsigned bound_bits) {
  Message m = recv(tag, PayloadKind::kBlindedPlainTensor);
  FxTensor t = deserialize_fx_tensor(m.payload);
  t.set_bound_bits(bound_bits);
  return t;
}

namespace {

Bytes encode_config(const SessionConfig& cfg) {
  Bytes out;
  put_u32_be(out, 1);  // wire version
  put_u32_be(out, cfg.key_bits);
  put_u32_be(out, cfg.fx.f_bits);
  put_u32_be(out, cfg.fx.lambda);
  put_u32_be(out, cfg.fx.vmax);
  put_u32_be(out, static_cast<uint32_t>(cfg.session_id >> 32));
  put_u32_be(out, static_cast<uint32_t>(cfg.session_id));
  return out;
}

}  // namespace

void ProtocolSession::exchange_keys() {
  send("session.hello", PayloadKind::kControl, encode_config(cfg_));
  Message hello = recv("session.hello", PayloadKind::kControl);
  if (hello.payload != encode_config(cfg_)) {
    throw ConfigError("session config mismatch between parties");
  }
  send("session.pubkey", PayloadKind::kPubKey, own_keys_.pk.serialize());
  Message pk_msg = recv("session.pubkey", PayloadKind::kPubKey);
  peer_pk_ = PublicKey::deserialize(pk_msg.payload, peer_);
  if (bit_length(peer_pk_.n()) != static_cast<int>(cfg_.key_bits)) {
    throw ConfigError("peer public key does not match the agreed key size");
  }
}

ProtocolSession connect(PartyId self, PartyId peer, const SessionConfig& cfg,
                        KeyPair own_keys, std::shared_ptr<Channel> channel) {
  ProtocolSession s(self, peer, cfg, std::move(own_keys), std::move(channel));
  s.exchange_keys();
  return s;
}

}  // namespace vfl

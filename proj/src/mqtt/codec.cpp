// Copyright 2026 The Faultwire Authors.
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

#include "faultwire/mqtt/codec.hpp"

#include <string_view>
#include <type_traits>

#include "faultwire/mqtt/topic.hpp"

namespace faultwire::mqtt {
namespace {

constexpr std::uint8_t kConnect = 1;
constexpr std::uint8_t kConnack = 2;
constexpr std::uint8_t kPublish = 3;
constexpr std::uint8_t kPuback = 4;
constexpr std::uint8_t kPubrec = 5;
constexpr std::uint8_t kPubrel = 6;
constexpr std::uint8_t kPubcomp = 7;
constexpr std::uint8_t kSubscribe = 8;
constexpr std::uint8_t kSuback = 9;
constexpr std::uint8_t kUnsubscribe = 10;
constexpr std::uint8_t kUnsuback = 11;
constexpr std::uint8_t kPingreq = 12;
constexpr std::uint8_t kPingresp = 13;
constexpr std::uint8_t kDisconnect = 14;

constexpr std::uint32_t kMaxRemainingLength = 268'435'455;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  void bytes(std::string_view s) {
    if (s.size() > 0xFFFF) throw EncodeError("string field longer than 65535 bytes");
    u16(static_cast<std::uint16_t>(s.size()));
    raw(s);
  }
  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> body) : body_(body) {}

  std::uint8_t u8() {
    need(1);
    return body_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    auto v = static_cast<std::uint16_t>((body_[pos_] << 8) | body_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::string bytes() {
    auto len = u16();
    need(len);
    std::string s(reinterpret_cast<const char*>(body_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  std::string utf8() {
    auto s = bytes();
    if (!is_valid_utf8(s)) throw DecodeError("malformed UTF-8 string");
    return s;
  }
  std::string rest() {
    std::string s(reinterpret_cast<const char*>(body_.data() + pos_), body_.size() - pos_);
    pos_ = body_.size();
    return s;
  }
  bool done() const { return pos_ == body_.size(); }

 private:
  void need(std::size_t n) const {
    if (body_.size() - pos_ < n) throw DecodeError("packet body shorter than its fields");
  }

  std::span<const std::uint8_t> body_;
  std::size_t pos_ = 0;
};

void require_packet_id(std::uint16_t id, const char* what) {
  if (id == 0) throw EncodeError(std::string(what) + " requires a non-zero packet id");
}

std::vector<std::uint8_t> frame(std::uint8_t first_byte, std::vector<std::uint8_t> body) {
  if (body.size() > kMaxRemainingLength) throw EncodeError("packet exceeds maximum remaining length");
  std::vector<std::uint8_t> out;
  out.reserve(body.size() + 5);
  out.push_back(first_byte);
  auto len = static_cast<std::uint32_t>(body.size());
  do {
    auto digit = static_cast<std::uint8_t>(len % 128);
    len /= 128;
    if (len > 0) digit |= 0x80;
    out.push_back(digit);
  } while (len > 0);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<std::uint8_t> encode_connect(const Connect& c) {
  Writer w;
  w.bytes("MQTT");
  w.u8(c.protocol_level);
  std::uint8_t flags = 0;
  if (c.username) flags |= 0x80;
  if (c.password) flags |= 0x40;
  if (c.will) {
    if (c.will->qos > 2) throw EncodeError("will qos out of range");
    flags |= 0x04;
    flags |= static_cast<std::uint8_t>(c.will->qos << 3);
    if (c.will->retain) flags |= 0x20;
  }
  if (c.clean_session) flags |= 0x02;
  if (c.password && !c.username) throw EncodeError("password without username");
  w.u8(flags);
  w.u16(c.keep_alive_s);
  w.bytes(c.client_id);
  if (c.will) {
    w.bytes(c.will->topic);
    w.bytes(c.will->payload);
  }
  if (c.username) w.bytes(*c.username);
  if (c.password) w.bytes(*c.password);
  return frame(kConnect << 4, std::move(w.data()));
}

std::vector<std::uint8_t> encode_publish(const Publish& p, const CodecLimits& limits) {
  if (p.payload.size() > limits.max_payload) {
    throw EncodeError("payload of " + std::to_string(p.payload.size()) +
                      " bytes exceeds limit of " + std::to_string(limits.max_payload));
  }
  if (p.qos > 1) throw EncodeError("only qos 0 and 1 are supported");
  if (p.qos == 0 && p.packet_id) throw EncodeError("qos 0 publish must not carry a packet id");
  if (p.qos == 1 && !p.packet_id) throw EncodeError("qos 1 publish requires a packet id");
  if (!is_valid_topic_name(p.topic)) throw EncodeError("invalid publish topic '" + p.topic + "'");
  Writer w;
  w.bytes(p.topic);
  if (p.packet_id) {
    require_packet_id(*p.packet_id, "PUBLISH");
    w.u16(*p.packet_id);
  }
  w.raw(p.payload);
  return frame(static_cast<std::uint8_t>((kPublish << 4) | (p.qos << 1)), std::move(w.data()));
}

std::vector<std::uint8_t> encode_id_only(std::uint8_t first_byte, std::uint16_t id) {
  Writer w;
  w.u16(id);
  return frame(first_byte, std::move(w.data()));
}

Packet decode_body(std::uint8_t type, std::uint8_t flags, std::span<const std::uint8_t> body,
                   const CodecLimits& limits) {
  Reader r(body);
  auto expect_flags = [&](std::uint8_t want) {
    if (flags != want) throw DecodeError("invalid fixed-header flags");
  };
  auto finish = [&](Packet p) {
    if (!r.done()) throw DecodeError("trailing bytes after packet fields");
    return p;
  };

  switch (type) {
    case kConnect: {
      expect_flags(0);
      Connect c;
      if (r.bytes() != "MQTT") throw DecodeError("unsupported protocol name");
      c.protocol_level = r.u8();
      auto cf = r.u8();
      if (cf & 0x01) throw DecodeError("reserved connect flag set");
      c.clean_session = (cf & 0x02) != 0;
      bool will = (cf & 0x04) != 0;
      auto will_qos = static_cast<std::uint8_t>((cf >> 3) & 0x03);
      bool will_retain = (cf & 0x20) != 0;
      bool has_password = (cf & 0x40) != 0;
      bool has_username = (cf & 0x80) != 0;
      if (!will && (will_qos != 0 || will_retain)) throw DecodeError("will flags without will");
      if (will_qos > 2) throw DecodeError("will qos out of range");
      if (has_password && !has_username) throw DecodeError("password without username");
      c.keep_alive_s = r.u16();
      c.client_id = r.utf8();
      if (will) {
        Will wl;
        wl.topic = r.utf8();
        wl.payload = r.bytes();
        wl.qos = will_qos;
        wl.retain = will_retain;
        c.will = std::move(wl);
      }
      if (has_username) c.username = r.utf8();
      if (has_password) c.password = r.bytes();
      return finish(std::move(c));
    }
    case kConnack: {
      expect_flags(0);
      Connack c;
      auto ack = r.u8();
      if (ack & 0xFE) throw DecodeError("reserved connack flags set");
      c.session_present = (ack & 0x01) != 0;
      auto rc = r.u8();
      if (rc > 5) throw DecodeError("unknown connack return code");
      c.return_code = static_cast<ConnectReturnCode>(rc);
      return finish(c);
    }
    case kPublish: {
      Publish p;
      p.qos = static_cast<std::uint8_t>((flags >> 1) & 0x03);
      if (p.qos == 3) throw DecodeError("publish qos 3 is malformed");
      if (p.qos == 2) throw DecodeError("publish qos 2 is not supported");
      if (flags & 0x01) throw DecodeError("retained messages are not supported");
      // DUP (bit 3) carries no meaning without retransmission and is ignored.
      p.topic = r.utf8();
      if (!is_valid_topic_name(p.topic)) {
        throw DecodeError("publish topic '" + p.topic + "' is empty or contains wildcards");
      }
      if (p.qos == 1) {
        auto id = r.u16();
        if (id == 0) throw DecodeError("zero packet id");
        p.packet_id = id;
      }
      p.payload = r.rest();
      if (p.payload.size() > limits.max_payload) throw DecodeError("payload exceeds limit");
      return p;
    }
    case kPuback: {
      expect_flags(0);
      Puback a{r.u16()};
      return finish(a);
    }
    case kSubscribe: {
      expect_flags(0x02);
      Subscribe s;
      s.packet_id = r.u16();
      if (s.packet_id == 0) throw DecodeError("zero packet id");
      while (!r.done()) {
        SubscribeEntry e;
        e.filter = r.utf8();
        e.qos = r.u8();
        if (e.qos > 2) throw DecodeError("subscribe qos byte malformed");
        s.entries.push_back(std::move(e));
      }
      if (s.entries.empty()) throw DecodeError("subscribe without topic filters");
      return s;
    }
    case kSuback: {
      expect_flags(0);
      Suback s;
      s.packet_id = r.u16();
      while (!r.done()) {
        auto rc = r.u8();
        if (rc > 2 && rc != kSubackFailure) throw DecodeError("bad suback return code");
        s.return_codes.push_back(rc);
      }
      return s;
    }
    case kUnsubscribe: {
      expect_flags(0x02);
      Unsubscribe u;
      u.packet_id = r.u16();
      if (u.packet_id == 0) throw DecodeError("zero packet id");
      while (!r.done()) u.filters.push_back(r.utf8());
      if (u.filters.empty()) throw DecodeError("unsubscribe without topic filters");
      return u;
    }
    case kUnsuback: {
      expect_flags(0);
      Unsuback u{r.u16()};
      return finish(u);
    }
    case kPingreq:
      expect_flags(0);
      return finish(Pingreq{});
    case kPingresp:
      expect_flags(0);
      return finish(Pingresp{});
    case kDisconnect:
      expect_flags(0);
      return finish(Disconnect{});
    case kPubrec:
    case kPubrel:
    case kPubcomp:
      throw DecodeError("qos 2 flow packets are not supported");
    default:
      throw DecodeError("bad packet type " + std::to_string(type));
  }
}

}  // namespace

const char* packet_name(const Packet& p) {
  static constexpr const char* kNames[] = {"CONNECT",     "CONNACK",  "PUBLISH", "PUBACK",
                                           "SUBSCRIBE",   "SUBACK",   "UNSUBSCRIBE",
                                           "UNSUBACK",    "PINGREQ",  "PINGRESP",
                                           "DISCONNECT"};
  return kNames[p.index()];
}

std::vector<std::uint8_t> encode_packet(const Packet& packet, const CodecLimits& limits) {
  return std::visit(
      [&](const auto& p) -> std::vector<std::uint8_t> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Connect>) {
          return encode_connect(p);
        } else if constexpr (std::is_same_v<T, Connack>) {
          Writer w;
          w.u8(p.session_present ? 1 : 0);
          w.u8(static_cast<std::uint8_t>(p.return_code));
          return frame(kConnack << 4, std::move(w.data()));
        } else if constexpr (std::is_same_v<T, Publish>) {
          return encode_publish(p, limits);
        } else if constexpr (std::is_same_v<T, Puback>) {
          return encode_id_only(kPuback << 4, p.packet_id);
        } else if constexpr (std::is_same_v<T, Subscribe>) {
          require_packet_id(p.packet_id, "SUBSCRIBE");
          if (p.entries.empty()) throw EncodeError("SUBSCRIBE needs at least one filter");
          Writer w;
          w.u16(p.packet_id);
          for (const auto& e : p.entries) {
            if (e.qos > 2) throw EncodeError("subscribe qos out of range");
            w.bytes(e.filter);
            w.u8(e.qos);
          }
          return frame((kSubscribe << 4) | 0x02, std::move(w.data()));
        } else if constexpr (std::is_same_v<T, Suback>) {
          Writer w;
          w.u16(p.packet_id);
          for (auto rc : p.return_codes) w.u8(rc);
          return frame(kSuback << 4, std::move(w.data()));
        } else if constexpr (std::is_same_v<T, Unsubscribe>) {
          require_packet_id(p.packet_id, "UNSUBSCRIBE");
          if (p.filters.empty()) throw EncodeError("UNSUBSCRIBE needs at least one filter");
          Writer w;
          w.u16(p.packet_id);
          for (const auto& f : p.filters) w.bytes(f);
          return frame((kUnsubscribe << 4) | 0x02, std::move(w.data()));
        } else if constexpr (std::is_same_v<T, Unsuback>) {
          return encode_id_only(kUnsuback << 4, p.packet_id);
        } else if constexpr (std::is_same_v<T, Pingreq>) {
          return {kPingreq << 4, 0x00};
        } else if constexpr (std::is_same_v<T, Pingresp>) {
          return {kPingresp << 4, 0x00};
        } else {
          return {kDisconnect << 4, 0x00};
        }
      },
      packet);
}

DecodeResult decode_packet(std::span<const std::uint8_t> buf, const CodecLimits& limits) {
  if (buf.empty()) return NeedMoreData{};
  const std::uint8_t first = buf[0];
  const auto type = static_cast<std::uint8_t>(first >> 4);
  const auto flags = static_cast<std::uint8_t>(first & 0x0F);
  if (type == 0 || type == 15) throw DecodeError("bad packet type " + std::to_string(type));

  std::uint32_t remaining = 0;
  std::uint32_t multiplier = 1;
  std::size_t pos = 1;
  for (int i = 0;; ++i) {
    if (i == 4) throw DecodeError("remaining length longer than 4 bytes");
    if (pos >= buf.size()) return NeedMoreData{};
    auto digit = buf[pos++];
    remaining += static_cast<std::uint32_t>(digit & 0x7F) * multiplier;
    multiplier *= 128;
    if ((digit & 0x80) == 0) break;
  }
  // Cap on the whole body: topic (<= 65535 + 2) + packet id + payload.
  if (remaining > limits.max_payload + 65537 + 2) throw DecodeError("packet exceeds size limit");
  if (buf.size() - pos < remaining) return NeedMoreData{};
  auto packet = decode_body(type, flags, buf.subspan(pos, remaining), limits);
  return Decoded{std::move(packet), pos + remaining};
}

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buf_.size()) {
    buf_.clear();
    offset_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Packet> StreamDecoder::next() {
  auto view = std::span<const std::uint8_t>(buf_).subspan(offset_);
  auto res = decode_packet(view, limits_);
  if (std::holds_alternative<NeedMoreData>(res)) {
    if (offset_ > 4096 && offset_ * 2 > buf_.size()) {
      buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(offset_));
      offset_ = 0;
    }
    return std::nullopt;
  }
  auto& d = std::get<Decoded>(res);
  offset_ += d.consumed;
  return std::move(d.packet);
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c == 0) return false;
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) {
      return false;
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

}  // namespace faultwire::mqtt

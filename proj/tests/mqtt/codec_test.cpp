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

#include <gtest/gtest.h>

#include <random>

namespace faultwire::mqtt {
namespace {

using Bytes = std::vector<std::uint8_t>;

Packet decode_all(const Bytes& bytes) {
  auto r = decode_packet(bytes);
  auto* d = std::get_if<Decoded>(&r);
  if (d == nullptr) throw std::runtime_error("incomplete");
  EXPECT_EQ(d->consumed, bytes.size());
  return d->packet;
}

TEST(Codec, PingreqIsTwoBytes) {
  EXPECT_EQ(encode_packet(Pingreq{}), (Bytes{0xC0, 0x00}));
  auto r = decode_packet(Bytes{0xC0, 0x00});
  ASSERT_TRUE(std::holds_alternative<Decoded>(r));
  EXPECT_TRUE(std::holds_alternative<Pingreq>(std::get<Decoded>(r).packet));
  EXPECT_EQ(std::get<Decoded>(r).consumed, 2u);
}

TEST(Codec, TruncatedFrameNeedsMoreData) {
  EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_packet(Bytes{0xC0})));
  EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_packet(Bytes{})));
  auto full = encode_packet(Publish{"a/b", "12.5", 0, std::nullopt});
  for (std::size_t n = 0; n < full.size(); ++n) {
    Bytes prefix(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
    EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_packet(prefix))) << n;
  }
}

TEST(Codec, KnownPublishBytes) {
  // QoS 1 publish "t" / "1", packet id 10.
  Bytes expect{0x32, 0x06, 0x00, 0x01, 't', 0x00, 0x0A, '1'};
  EXPECT_EQ(encode_packet(Publish{"t", "1", 1, 10}), expect);
  EXPECT_EQ(decode_all(expect), Packet(Publish{"t", "1", 1, 10}));
}

TEST(Codec, SimpleRoundTrips) {
  Packet p1 = Publish{"t", "1", 0, std::nullopt};
  EXPECT_EQ(decode_all(encode_packet(p1)), p1);
  Packet p2 = Subscribe{7, {{"a/+", 0}}};
  auto back = decode_all(encode_packet(p2));
  EXPECT_EQ(back, p2);
  EXPECT_EQ(std::get<Subscribe>(back).entries[0].filter, "a/+");
}

TEST(Codec, OverlongRemainingLengthIsAnError) {
  EXPECT_THROW(decode_packet(Bytes{0x30, 0xFF, 0xFF, 0xFF, 0xFF, 0x01}), DecodeError);
  // Still an error when the buffer stops right after the fourth continuation byte.
  EXPECT_THROW(decode_packet(Bytes{0x30, 0x80, 0x80, 0x80, 0x80}), DecodeError);
}

TEST(Codec, LargestRemainingLength) {
  CodecLimits limits;
  limits.max_payload = 300 * 1024 * 1024;
  Bytes header{0x30, 0xFF, 0xFF, 0xFF, 0x7F};
  EXPECT_TRUE(std::holds_alternative<NeedMoreData>(decode_packet(header, limits)));
}

TEST(Codec, WildcardPublishTopicRejected) {
  // Hand-built: encode refuses the topic.
  Bytes bytes{0x30, 0x04, 0x00, 0x01, '#', '1'};
  EXPECT_THROW(decode_packet(bytes), DecodeError);
  Bytes plus{0x30, 0x06, 0x00, 0x03, 'a', '/', '+', '1'};
  EXPECT_THROW(decode_packet(plus), DecodeError);
  EXPECT_THROW(encode_packet(Publish{"a/#", "1", 0, std::nullopt}), EncodeError);
}

TEST(Codec, ProtocolViolations) {
  EXPECT_THROW(decode_packet(Bytes{0x00, 0x00}), DecodeError);              // reserved type 0
  EXPECT_THROW(decode_packet(Bytes{0xF0, 0x00}), DecodeError);              // reserved type 15
  EXPECT_THROW(decode_packet(Bytes{0x50, 0x02, 0x00, 0x01}), DecodeError);  // PUBREC
  EXPECT_THROW(decode_packet(Bytes{0x34, 0x06, 0x00, 0x01, 't', 0x00, 0x01, '1'}),
               DecodeError);                                                // qos 2
  EXPECT_THROW(decode_packet(Bytes{0x31, 0x04, 0x00, 0x01, 't', '1'}), DecodeError);  // retain
  EXPECT_THROW(decode_packet(Bytes{0xC1, 0x00}), DecodeError);  // bad PINGREQ flags
  EXPECT_THROW(decode_packet(Bytes{0xC0, 0x01, 0x00}), DecodeError);  // trailing bytes
  // Publish qos 1 with packet id 0.
  EXPECT_THROW(decode_packet(Bytes{0x32, 0x06, 0x00, 0x01, 't', 0x00, 0x00, '1'}), DecodeError);
  // Invalid UTF-8 in topic.
  EXPECT_THROW(decode_packet(Bytes{0x30, 0x05, 0x00, 0x02, 0xC3, 0x28, '1'}), DecodeError);
}

TEST(Codec, EncodeRejectsInvalidPackets) {
  EXPECT_THROW(encode_packet(Publish{"t", "1", 2, 1}), EncodeError);
  EXPECT_THROW(encode_packet(Publish{"t", "1", 1, std::nullopt}), EncodeError);
  EXPECT_THROW(encode_packet(Publish{"t", "1", 0, 5}), EncodeError);
  CodecLimits small;
  small.max_payload = 4;
  EXPECT_THROW(encode_packet(Publish{"t", "12345", 0, std::nullopt}, small), EncodeError);
  EXPECT_NO_THROW(encode_packet(Publish{"t", "1234", 0, std::nullopt}, small));
}

TEST(Codec, DecodeRejectsOversizePayload) {
  CodecLimits small;
  small.max_payload = 4;
  auto bytes = encode_packet(Publish{"t", "12345", 0, std::nullopt});
  EXPECT_THROW(decode_packet(bytes, small), DecodeError);
}

TEST(Codec, StreamDecoderSplitsAndJoins) {
  Bytes stream;
  std::vector<Packet> sent{Connect{4, true, 30, "c1", std::nullopt, std::nullopt, std::nullopt},
                           Publish{"x/y", "hello", 1, 3}, Pingreq{}, Disconnect{}};
  for (const auto& p : sent) {
    auto b = encode_packet(p);
    stream.insert(stream.end(), b.begin(), b.end());
  }
  StreamDecoder dec;
  std::vector<Packet> got;
  for (auto byte : stream) {
    dec.feed(std::span<const std::uint8_t>(&byte, 1));
    while (auto p = dec.next()) got.push_back(*p);
  }
  EXPECT_EQ(got, sent);
  EXPECT_EQ(dec.buffered(), 0u);
}

// Generated packets, all valid by construction.
class PacketGen {
 public:
  explicit PacketGen(std::uint32_t seed) : rng_(seed) {}

  Packet next() {
    switch (pick(0, 10)) {
      case 0: {
        Connect c;
        c.clean_session = pick(0, 1) == 1;
        c.keep_alive_s = static_cast<std::uint16_t>(pick(0, 65535));
        c.client_id = text(0, 23, false);
        if (pick(0, 3) == 0) {
          c.will = Will{topic(), text(0, 20, false), static_cast<std::uint8_t>(pick(0, 1)),
                        pick(0, 1) == 1};
        }
        if (pick(0, 2) == 0) {
          c.username = text(0, 10, false);
          if (pick(0, 1) == 0) c.password = text(0, 10, true);
        }
        return c;
      }
      case 1:
        return Connack{pick(0, 1) == 1, static_cast<ConnectReturnCode>(pick(0, 5))};
      case 2: {
        Publish p;
        p.topic = topic();
        p.payload = text(0, pick(0, 1) == 0 ? 8 : 300, true);
        p.qos = static_cast<std::uint8_t>(pick(0, 1));
        if (p.qos == 1) p.packet_id = static_cast<std::uint16_t>(pick(1, 65535));
        return p;
      }
      case 3:
        return Puback{static_cast<std::uint16_t>(pick(0, 65535))};
      case 4: {
        Subscribe s;
        s.packet_id = static_cast<std::uint16_t>(pick(1, 65535));
        int n = pick(1, 4);
        for (int i = 0; i < n; ++i) s.entries.push_back({filter(), static_cast<std::uint8_t>(pick(0, 1))});
        return s;
      }
      case 5: {
        Suback s;
        s.packet_id = static_cast<std::uint16_t>(pick(1, 65535));
        int n = pick(1, 4);
        for (int i = 0; i < n; ++i) {
          s.return_codes.push_back(pick(0, 3) == 0 ? kSubackFailure : static_cast<std::uint8_t>(pick(0, 1)));
        }
        return s;
      }
      case 6: {
        Unsubscribe u;
        u.packet_id = static_cast<std::uint16_t>(pick(1, 65535));
        int n = pick(1, 3);
        for (int i = 0; i < n; ++i) u.filters.push_back(filter());
        return u;
      }
      case 7:
        return Unsuback{static_cast<std::uint16_t>(pick(0, 65535))};
      case 8:
        return Pingreq{};
      case 9:
        return Pingresp{};
      default:
        return Disconnect{};
    }
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string text(int lo, int hi, bool binary) {
    static const char kChars[] = "abcxyz019_-. ";
    int n = pick(lo, hi);
    std::string s;
    for (int i = 0; i < n; ++i) {
      if (binary && pick(0, 9) == 0) {
        s += static_cast<char>(pick(0, 255));
      } else if (!binary && pick(0, 19) == 0) {
        s += "\xC3\xA9";  // two-byte UTF-8
      } else {
        s += kChars[pick(0, sizeof(kChars) - 2)];
      }
    }
    return s;
  }

  std::string level() {
    static const char* const kLevels[] = {"sensors", "1", "nox", "a", "b", "alarm", ""};
    return kLevels[pick(0, 6)];
  }

  std::string topic() {
    std::string t = level() + "x";
    int n = pick(0, 3);
    for (int i = 0; i < n; ++i) t += "/" + level();
    return t;
  }

  std::string filter() {
    int n = pick(1, 4);
    std::string f;
    for (int i = 0; i < n; ++i) {
      if (i > 0) f += "/";
      int k = pick(0, 5);
      if (k == 0) {
        f += "+";
      } else if (k == 1 && i == n - 1) {
        f += "#";
      } else {
        f += level() + "f";
      }
    }
    return f;
  }

  std::mt19937 rng_;
};

TEST(CodecProperty, RoundTripOverGeneratedPackets) {
  PacketGen gen(20240611);
  std::size_t checked = 0;
  std::array<int, std::variant_size_v<Packet>> per_kind{};
  for (int i = 0; i < 2000; ++i) {
    Packet p = gen.next();
    auto bytes = encode_packet(p);
    auto r = decode_packet(bytes);
    ASSERT_TRUE(std::holds_alternative<Decoded>(r)) << packet_name(p);
    const auto& d = std::get<Decoded>(r);
    ASSERT_EQ(d.consumed, bytes.size()) << packet_name(p);
    ASSERT_EQ(d.packet, p) << packet_name(p) << " #" << i;
    ++per_kind[p.index()];
    ++checked;
  }
  EXPECT_GE(checked, 1000u);
  for (int n : per_kind) EXPECT_GT(n, 50);
}

TEST(CodecProperty, EveryProperPrefixNeedsMoreData) {
  PacketGen gen(7);
  for (int i = 0; i < 200; ++i) {
    auto bytes = encode_packet(gen.next());
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      auto r = decode_packet(std::span<const std::uint8_t>(bytes.data(), n));
      ASSERT_TRUE(std::holds_alternative<NeedMoreData>(r));
    }
  }
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("caf\xC3\xA9"));
  EXPECT_FALSE(is_valid_utf8("\xC3\x28"));
  EXPECT_FALSE(is_valid_utf8("\xED\xA0\x80"));  // surrogate
  EXPECT_FALSE(is_valid_utf8(std::string("a\0b", 3)));
}

}  // namespace
}  // namespace faultwire::mqtt

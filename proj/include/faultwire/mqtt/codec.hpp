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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "faultwire/mqtt/packet.hpp"

namespace faultwire::mqtt {

constexpr std::size_t kDefaultMaxPayload = 256 * 1024;

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Protocol violation in an inbound byte stream. Fatal for the connection.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CodecLimits {
  std::size_t max_payload = kDefaultMaxPayload;
};

std::vector<std::uint8_t> encode_packet(const Packet& packet, const CodecLimits& limits = {});

struct NeedMoreData {
  bool operator==(const NeedMoreData&) const = default;
};

struct Decoded {
  Packet packet;
  std::size_t consumed = 0;
};

using DecodeResult = std::variant<Decoded, NeedMoreData>;

/// Parses one packet from the front of `buf`. Throws DecodeError on protocol
/// violations, including a remaining-length field longer than four bytes.
DecodeResult decode_packet(std::span<const std::uint8_t> buf, const CodecLimits& limits = {});

/// Accumulates a byte stream and yields complete packets.
class StreamDecoder {
 public:
  explicit StreamDecoder(CodecLimits limits = {}) : limits_(limits) {}

  void feed(std::span<const std::uint8_t> bytes);

  /// Next complete packet, or nullopt when more bytes are needed.
  std::optional<Packet> next();

  std::size_t buffered() const { return buf_.size() - offset_; }

 private:
  CodecLimits limits_;
  std::vector<std::uint8_t> buf_;
  std::size_t offset_ = 0;
};

bool is_valid_utf8(std::string_view s);

}  // namespace faultwire::mqtt

/*
 * Copyright 2026 The pnoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the 'License');
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef PNOC_MESSAGE_HPP_
#define PNOC_MESSAGE_HPP_

#include <stdexcept>

#include "pnoc/types.hpp"

namespace pnoc {

enum class MessageKind : u8 {
  kReadReq,    // header only
  kWriteReq,   // header + line (the dirty line travels to memory)
  kReadResp,   // header + line
  kWriteAck,   // header only
  kBcast,      // header only, broadcast coil payload
};

constexpr bool is_request(MessageKind k) {
  return k == MessageKind::kReadReq || k == MessageKind::kWriteReq;
}
constexpr bool is_response(MessageKind k) {
  return k == MessageKind::kReadResp || k == MessageKind::kWriteAck;
}
constexpr bool carries_line(MessageKind k) {
  return k == MessageKind::kWriteReq || k == MessageKind::kReadResp;
}
constexpr MessageKind response_for(MessageKind k) {
  return k == MessageKind::kReadReq ? MessageKind::kReadResp : MessageKind::kWriteAck;
}
constexpr u32 message_bytes(MessageKind k) {
  return carries_line(k) ? kHeaderBytes + kLineBytes : kHeaderBytes;
}
constexpr const char* kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::kReadReq: return "mem-read-req";
    case MessageKind::kWriteReq: return "mem-write-req";
    case MessageKind::kReadResp: return "mem-read-resp";
    case MessageKind::kWriteAck: return "mem-write-ack";
    case MessageKind::kBcast: return "bcast-payload";
  }
  return "?";
}

struct Message {
  MessageKind kind = MessageKind::kReadReq;
  ClusterId src = 0;
  ClusterId dst = 0;
  u64 address = 0;      // line-aligned
  u32 transaction = 0;  // MSHR entry id at the requesting cluster
  SimTime created{};    // miss accepted into the MSHR
  SimTime injected{};   // first phit/flit entered the interconnect
  SimTime delivered{};  // fully received at the destination

  u32 size_bytes() const { return message_bytes(kind); }
};

// Crossbar phit framing: an 8 B header phit plus, for data-bearing kinds,
// one 64 B line phit; each phit crosses a channel in one cycle.
inline u32 serialize_cycles(u32 size_bytes) {
  if (size_bytes == kHeaderBytes) return 1;
  if (size_bytes == kHeaderBytes + kLineBytes) return 2;
  throw std::logic_error("unsupported message size: " + std::to_string(size_bytes));
}

}  // namespace pnoc

#endif  // PNOC_MESSAGE_HPP_

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
#ifndef PNOC_TRACE_HPP_
#define PNOC_TRACE_HPP_

#include <string>
#include <vector>

#include "pnoc/types.hpp"

namespace pnoc {

// One per-thread trace record. Threads are replayed independently: each
// record waits for the previous one to finish, then idles for gap_cycles
// before taking effect.
struct TraceRecord {
  enum class Op : u8 { kRead, kWrite, kBarrier };
  Op op = Op::kRead;
  u64 address = 0;   // byte address for reads/writes
  u32 barrier = 0;   // barrier id for kBarrier
  u64 gap_cycles = 0;
};

struct ThreadTrace {
  ThreadId thread = 0;
  std::vector<TraceRecord> records;
};

struct TraceFile {
  std::vector<ThreadTrace> threads;  // sorted by thread id
  u64 total_accesses = 0;            // reads + writes across all threads
  u64 total_barriers = 0;            // barrier records across all threads
};

// Reads a trace file. Lines are
//   T<tid> R 0x<addr> +<gap>
//   T<tid> W 0x<addr> +<gap>
//   T<tid> B <barrier-id> +<gap>
// with '#' starting a comment and blank lines ignored. Plain and
// gzip-compressed files are both accepted. Malformed lines raise
// ConfigError with the offending line number.
TraceFile load_trace(const std::string& path);

}  // namespace pnoc

#endif  // PNOC_TRACE_HPP_

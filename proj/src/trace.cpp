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
#include "pnoc/trace.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>

#include "pnoc/config.hpp"

namespace pnoc {

namespace {

class GzLineReader {
 public:
  explicit GzLineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) throw ConfigError("cannot open trace file: " + path);
  }
  ~GzLineReader() {
    if (file_ != nullptr) gzclose(file_);
  }
  GzLineReader(const GzLineReader&) = delete;
  GzLineReader& operator=(const GzLineReader&) = delete;

  bool next(std::string* line) {
    line->clear();
    char buf[4096];
    for (;;) {
      if (gzgets(file_, buf, sizeof(buf)) == nullptr) return !line->empty();
      line->append(buf);
      if (!line->empty() && line->back() == '\n') {
        line->pop_back();
        if (!line->empty() && line->back() == '\r') line->pop_back();
        return true;
      }
    }
  }

 private:
  gzFile file_;
};

struct Cursor {
  const char* p;
  const char* end;

  void skip_ws() {
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
  }
  bool done() {
    skip_ws();
    return p == end;
  }
  bool literal(char c) {
    skip_ws();
    if (p == end || *p != c) return false;
    ++p;
    return true;
  }
  bool number(u64* out, int base) {
    skip_ws();
    const char* start = p;
    u64 v = 0;
    while (p != end) {
      char c = *p;
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else break;
      v = v * static_cast<u64>(base) + static_cast<u64>(d);
      ++p;
    }
    if (p == start) return false;
    *out = v;
    return true;
  }
};

}  // namespace

TraceFile load_trace(const std::string& path) {
  GzLineReader reader(path);
  std::map<ThreadId, std::vector<TraceRecord>> by_thread;
  TraceFile out;

  std::string line;
  u64 lineno = 0;
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError(path + ":" + std::to_string(lineno) + ": " + why);
  };

  while (reader.next(&line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    Cursor c{line.data(), line.data() + line.size()};
    if (c.done()) continue;

    if (!c.literal('T')) throw fail("expected 'T<tid>'");
    u64 tid64 = 0;
    if (!c.number(&tid64, 10)) throw fail("bad thread id");
    if (tid64 >= kThreads) throw fail("thread id out of range (max " + std::to_string(kThreads - 1) + ")");
    auto tid = static_cast<ThreadId>(tid64);

    c.skip_ws();
    if (c.p == c.end) throw fail("missing op");
    char op = *c.p++;

    TraceRecord rec;
    if (op == 'R' || op == 'W') {
      rec.op = op == 'R' ? TraceRecord::Op::kRead : TraceRecord::Op::kWrite;
      if (!c.literal('0') || !(c.literal('x') || c.literal('X'))) throw fail("expected 0x<addr>");
      if (!c.number(&rec.address, 16)) throw fail("bad address");
      ++out.total_accesses;
    } else if (op == 'B') {
      rec.op = TraceRecord::Op::kBarrier;
      u64 id = 0;
      if (!c.number(&id, 10)) throw fail("bad barrier id");
      rec.barrier = static_cast<u32>(id);
      ++out.total_barriers;
    } else {
      throw fail(std::string("unknown op '") + op + "' (expected R, W or B)");
    }

    if (!c.literal('+')) throw fail("expected '+<gap>'");
    if (!c.number(&rec.gap_cycles, 10)) throw fail("bad gap");
    if (!c.done()) throw fail("trailing characters");

    by_thread[tid].push_back(rec);
  }

  out.threads.reserve(by_thread.size());
  for (auto& [tid, records] : by_thread) {
    out.threads.push_back(ThreadTrace{tid, std::move(records)});
  }
  return out;
}

}  // namespace pnoc

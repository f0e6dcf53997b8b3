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

// Release gate: drives the simulator through its headline experiments and
// checks each result against the design targets. Prints one verdict line
// per criterion; the exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pnoc/arbitration.hpp"
#include "pnoc/sweep.hpp"
#include "pnoc/system.hpp"
#include "pnoc/traffic.hpp"

using namespace pnoc;

namespace {

struct Verdict {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Verdict> verdicts;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
  verdicts.push_back({id, name, pass, detail});
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

struct Timed {
  RunResult r;
  double wall_s = 0.0;
};

Timed timed_run(const SimConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.r = run_one(cfg);
  t.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fprintf(stderr, "  ran %s %s (%llu requests): %.1f GB/s, %llu cycles, %.1f s wall\n",
          t.r.config.c_str(), t.r.workload.c_str(),
          static_cast<unsigned long long>(cfg.request_target), t.r.bandwidth_gbps,
          static_cast<unsigned long long>(t.r.runtime_cycles), t.wall_s);
  return t;
}

SimConfig make_cfg(NetworkKind nk, MemoryKind mk, WorkloadKind w, u64 target,
                   u64 seed = 1) {
  SimConfig cfg;
  cfg.network = nk;
  cfg.memory = mk;
  cfg.workload = w;
  cfg.request_target = target;
  cfg.seed = seed;
  return cfg;
}

// --------------------------------------------------------------------------
// Closed-form round trips (matching the design arithmetic).

u64 first_capture(u32 home, u32 pos, u64 registered) {
  u64 base = (static_cast<u64>(pos) + kClusters - home) % kClusters;
  u64 lo = registered + 1;
  if (base >= lo) return base;
  return base + kClusters * ((lo - base + kClusters - 1) / kClusters);
}

u64 xbar_round_trip_end(ClusterId src, ClusterId dst, u64 issue_cycle) {
  u64 t_req = 8 * (issue_cycle + 1);
  u64 g1 = first_capture(dst, src, t_req);
  u64 tail1 = g1 + 8 * serialize_cycles(kHeaderBytes);
  u64 deliver1 = (tail1 + XbarNetwork::channel_distance(src, dst) + 7) / 8;
  u64 mem_done = deliver1 + 1 + 106;
  u64 t_resp = 8 * (mem_done + 1);
  u64 g2 = first_capture(src, dst, t_resp);
  u64 tail2 = g2 + 8 * serialize_cycles(kHeaderBytes + kLineBytes);
  u64 deliver2 = (tail2 + XbarNetwork::channel_distance(dst, src) + 7) / 8;
  return deliver2 + 1;
}

u32 manhattan(ClusterId a, ClusterId b) {
  u32 dr = grid_row(a) > grid_row(b) ? grid_row(a) - grid_row(b) : grid_row(b) - grid_row(a);
  u32 dc = grid_col(a) > grid_col(b) ? grid_col(a) - grid_col(b) : grid_col(b) - grid_col(a);
  return dr + dc;
}

// Runs a batch of scripted misses and returns completion cycles in order.
std::vector<u64> run_probes(NetworkKind nk, const std::vector<ProbeDriver::Probe>& ps,
                            Stats* stats_out = nullptr) {
  SimConfig cfg;
  cfg.network = nk;
  cfg.memory = MemoryKind::kOcm;
  ProbeDriver* probe = nullptr;
  System sys(cfg, [&](const DriverContext& ctx) {
    auto d = std::make_unique<ProbeDriver>(ctx, ps);
    probe = d.get();
    return d;
  });
  sys.run();
  std::vector<u64> out;
  for (const auto& r : probe->results()) out.push_back(r.completed.cycle());
  if (stats_out != nullptr) *stats_out = sys.stats();
  return out;
}

// --------------------------------------------------------------------------
// Criterion bodies.

void check_bandwidth_ceilings(std::map<std::string, Timed>& uniform_1m) {
  for (auto [nk, mk] : standard_configs()) {
    SimConfig cfg = make_cfg(nk, mk, WorkloadKind::kUniform, 1'000'000);
    Timed t = timed_run(cfg);
    uniform_1m[t.r.config] = t;
  }
  double xbar = uniform_1m["xbar/ocm"].r.bandwidth_gbps;
  double he = uniform_1m["hmesh/ecm"].r.bandwidth_gbps;
  double le = uniform_1m["lmesh/ecm"].r.bandwidth_gbps;
  double max_wall = 0.0;
  for (auto& [k, v] : uniform_1m) max_wall = std::max(max_wall, v.wall_s);

  // Optical rig: within [80% of the 64-controller return ceiling, raw channel
  // capacity]. Electrical rigs: within [90% of the electrical pin ceiling,
  // its design cap].
  bool xbar_ok = xbar >= 0.8 * 4096.0 && xbar <= 10240.0;
  bool he_ok = he >= 0.9 * 853.33 && he <= 960.0;
  bool le_ok = le >= 0.9 * 853.33 && le <= 960.0;
  bool wall_ok = max_wall < 120.0;
  record(1, "uniform saturation bandwidth within design ceilings",
         xbar_ok && he_ok && le_ok && wall_ok,
         fmt("xbar/ocm %.0f GB/s in [3277,10240]; hmesh/ecm %.0f, lmesh/ecm %.0f GB/s "
             "vs [768,960]; max wall %.1f s (limit 120)",
             xbar, he, le, max_wall));
}

void check_hotspot(const std::map<std::string, Timed>& uniform_1m) {
  SimConfig cfg = make_cfg(NetworkKind::kXbar, MemoryKind::kOcm,
                           WorkloadKind::kHotspot, 1'000'000);
  Timed t = timed_run(cfg);
  double bw = t.r.bandwidth_gbps;
  double uniform_bw = uniform_1m.at("xbar/ocm").r.bandwidth_gbps;
  // One controller turns around a 64 B line every 5 cycles: 64 GB/s payload.
  bool near_ceiling = std::fabs(bw - 64.0) <= 6.4;
  bool far_below_uniform = bw < 0.25 * uniform_bw;
  record(2, "hotspot throughput pinned by one controller's return link",
         near_ceiling && far_below_uniform,
         fmt("hotspot %.2f GB/s vs 64 +-10%%; uniform %.0f GB/s (ratio %.3f)", bw,
             uniform_bw, bw / uniform_bw));
}

void check_zero_load() {
  std::mt19937_64 rng(2026);
  auto draw_pairs = [&rng] {
    std::vector<std::pair<ClusterId, ClusterId>> ps;
    while (ps.size() < 24) {
      auto s = static_cast<ClusterId>(rng() % kClusters);
      auto d = static_cast<ClusterId>(rng() % kClusters);
      if (s != d) ps.emplace_back(s, d);
    }
    return ps;
  };

  u32 exact = 0, total = 0;

  // Crossbar probes each get a fresh chip: a token is reinjected wherever its
  // last holder sat, so a shared run would shift the orbits the closed form
  // assumes. Issue times vary to exercise different token alignments.
  {
    auto pairs = draw_pairs();
    for (size_t i = 0; i < pairs.size(); ++i) {
      u64 at = rng() % 97;
      std::vector<ProbeDriver::Probe> probes{
          {SimTime::cycles(at), pairs[i].first,
           synth_address(pairs[i].first, i, pairs[i].second), MessageKind::kReadReq}};
      std::vector<u64> done = run_probes(NetworkKind::kXbar, probes);
      ++total;
      if (done.size() == 1 &&
          done[0] == xbar_round_trip_end(pairs[i].first, pairs[i].second, at)) {
        ++exact;
      }
    }
  }

  // Mesh timing carries no state between idle periods, so probes batch.
  for (NetworkKind nk : {NetworkKind::kHMesh, NetworkKind::kLMesh}) {
    auto pairs = draw_pairs();
    std::vector<ProbeDriver::Probe> probes;
    for (size_t i = 0; i < pairs.size(); ++i) {
      u64 at = 2000 * i;  // far apart: every probe sees an idle chip
      probes.push_back({SimTime::cycles(at), pairs[i].first,
                        synth_address(pairs[i].first, i, pairs[i].second),
                        MessageKind::kReadReq});
    }
    std::vector<u64> done = run_probes(nk, probes);
    for (size_t i = 0; i < pairs.size(); ++i) {
      u64 at = 2000 * i;
      u64 base = nk == NetworkKind::kHMesh ? 114 : 118;
      u64 expect = at + base + 10ull * manhattan(pairs[i].first, pairs[i].second);
      ++total;
      if (done[i] == expect) ++exact;
    }
  }

  // Uncontested channel token: the wait is at most one revolution (8 cycles),
  // hit exactly when the token slips past just as the request registers.
  u64 max_wait = 0, min_wait = ~0ull, worst_align_wait = 0;
  for (u64 align = 0; align < 64; ++align) {
    EventEngine eng;
    TokenRing ring(eng, kClusters, kClusters + 1);
    u64 wait = 0;
    ring.set_grant_handler([&ring, &eng, &wait, align](u32 c, u32 tok) {
      wait = eng.now().phases - align;
      ring.release(c, tok);
    });
    eng.schedule(SimTime{align}, [&ring] { ring.request(5, 0); });
    eng.run();
    max_wait = std::max(max_wait, wait);
    min_wait = std::min(min_wait, wait);
    if (align == 5) worst_align_wait = wait;  // token sits at stop 5 here
  }
  bool token_ok = max_wait <= 64 && min_wait >= 1 && worst_align_wait == 64;

  bool ok = exact == total && total == 72 && token_ok;
  record(3, "unloaded round-trip latency matches closed forms", ok,
         fmt("%u/%u scripted misses exact across three networks; uncontested token "
             "wait %llu..%llu phases, one full revolution at the worst alignment",
             exact, total, static_cast<unsigned long long>(min_wait),
             static_cast<unsigned long long>(max_wait)));
}

void check_arbitration() {
  // Exhaustive on a small ring: every subset of 8 stops contends for one
  // channel; grants must be exclusive, conserved, and cyclically ordered.
  constexpr u32 kStops = 8;
  u32 subsets_ok = 0;
  for (u32 mask = 1; mask < 256; ++mask) {
    EventEngine eng;
    TokenRing ring(eng, kStops, 1);
    std::vector<u32> order;
    bool held = false;
    bool exclusive = true;
    ring.set_grant_handler([&](u32 c, u32 tok) {
      if (held) exclusive = false;
      held = true;
      order.push_back(c);
      eng.schedule(SimTime{eng.now().phases + 2}, [&, c, tok] {
        held = false;
        ring.release(c, tok);
      });
    });
    for (u32 c = 0; c < kStops; ++c) {
      if (!(mask & (1u << c))) continue;
      eng.schedule(SimTime{0}, [&, c] { ring.request(c, 0); });
    }
    eng.run();

    std::vector<u32> want;
    for (u32 c = 0; c < kStops; ++c) {
      if (mask & (1u << c)) want.push_back(c);
    }
    // token 0 starts at stop 0 and sweeps forward; first grant goes to the
    // stop it reaches first, then strictly in ring order.
    std::sort(want.begin(), want.end(), [](u32 a, u32 b) {
      return (a + kStops - 1) % kStops < (b + kStops - 1) % kStops;
    });
    if (exclusive && order == want) ++subsets_ok;
  }

  // Fairness: all 64 stops re-request a single channel for a long time.
  EventEngine eng;
  TokenRing ring(eng, kClusters, kClusters + 1);
  std::vector<u64> grants(kClusters, 0);
  u64 total_grants = 0;
  constexpr u64 kTarget = 100'000;
  ring.set_grant_handler([&](u32 c, u32 tok) {
    ++grants[c];
    ++total_grants;
    eng.schedule(SimTime{eng.now().phases + 16}, [&, c, tok] {
      ring.release(c, tok);
      if (total_grants < kTarget) ring.request(c, tok);
    });
  });
  for (u32 c = 0; c < kClusters; ++c) {
    eng.schedule(SimTime{0}, [&, c] { ring.request(c, 17); });
  }
  eng.run();
  u64 lo = ~0ull, hi = 0;
  for (u64 g : grants) {
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  double spread = lo > 0 ? 100.0 * static_cast<double>(hi - lo) / static_cast<double>(lo)
                         : 100.0;

  bool ok = subsets_ok == 255 && spread <= 5.0;
  record(4, "channel arbitration: exclusive, cyclic, fair", ok,
         fmt("%u/255 contention subsets exclusive and in ring order; "
             "64-way grant spread %.2f%% over %llu grants",
             subsets_ok, spread, static_cast<unsigned long long>(total_grants)));
}

void check_mesh_statistics(const std::map<std::string, Timed>& uniform_1m) {
  // Hop-count oracle: all source/destination pairs, equally weighted.
  u64 hop_sum = 0;
  for (ClusterId a = 0; a < kClusters; ++a) {
    for (ClusterId b = 0; b < kClusters; ++b) hop_sum += manhattan(a, b);
  }
  double oracle = static_cast<double>(hop_sum) / (kClusters * kClusters);

  // Balanced sample: every cluster issues the same number of uniform draws,
  // so no source is over-represented. (The stock closed-loop workload lets
  // well-placed clusters take more of a shared quota, which skews the
  // completed mix toward short trips by a few percent.)
  std::mt19937_64 rng(777);
  constexpr u32 kPerCluster = 2048;
  std::vector<ProbeDriver::Probe> probes;
  for (u32 n = 0; n < kPerCluster; ++n) {
    for (ClusterId c = 0; c < kClusters; ++c) {
      auto dst = static_cast<ClusterId>(rng() % kClusters);
      probes.push_back({SimTime::cycles(100ull * n), c, synth_address(c, n, dst),
                        MessageKind::kReadReq});
    }
  }
  Stats st;
  std::vector<u64> done = run_probes(NetworkKind::kHMesh, probes, &st);
  double measured = static_cast<double>(st.message_hops) /
                    (2.0 * static_cast<double>(st.transactions_completed));
  bool mean_ok = std::fabs(measured - oracle) <= 0.02 * oracle &&
                 done.size() == probes.size();

  // Head latency: 5 cycles per hop in each direction, exact at zero load.
  u32 head_exact = 0;
  std::vector<ProbeDriver::Probe> hp;
  std::vector<u32> dists;
  for (ClusterId dst : {1u, 2u, 7u, 9u, 18u, 36u, 63u}) {
    u64 at = 2000 * hp.size();
    hp.push_back({SimTime::cycles(at), 0, synth_address(0, dst, dst),
                  MessageKind::kReadReq});
    dists.push_back(manhattan(0, dst));
  }
  std::vector<u64> hd = run_probes(NetworkKind::kHMesh, hp);
  for (size_t i = 0; i < hp.size(); ++i) {
    if (hd[i] - 2000 * i == 114 + 10ull * dists[i]) ++head_exact;
  }
  bool head_ok = head_exact == hp.size();

  // Sustained random load drains with nothing stuck in a router.
  const Timed& lm = uniform_1m.at("lmesh/ecm");
  bool drain_ok = lm.r.stats.transactions_completed == 1'000'000 &&
                  lm.r.stats.flit_hops >= 10'000'000;

  // The shared-quota mix, for contrast in the log.
  const Timed& hm = uniform_1m.at("hmesh/ocm");
  double quota_mean = static_cast<double>(hm.r.stats.message_hops) /
                      (2.0 * static_cast<double>(hm.r.stats.transactions_completed));

  record(5, "mesh hop statistics and deadlock-free random load",
         mean_ok && head_ok && drain_ok,
         fmt("balanced mean %.3f hops vs %.2f oracle (2%% band); shared-quota mix %.2f; "
             "head latency 5/hop exact on %u/%zu pairs; %llu flit hops drained",
             measured, oracle, quota_mean, head_exact, hp.size(),
             static_cast<unsigned long long>(lm.r.stats.flit_hops)));
}

void check_power() {
  double ocm_w = memory_power_w(10.24e12, MemoryKind::kOcm);
  double ecm_w = memory_power_w(10.24e12, MemoryKind::kEcm);
  bool ocm_ok = std::fabs(ocm_w - 6.4) <= 0.02 * 6.4;
  bool ecm_ok = ecm_w > 160.0;

  // Hand-built message scenarios with known grid distances.
  u32 energy_ok = 0;
  struct Scene {
    ClusterId src, dst;
  };
  for (Scene s : {Scene{0, 1}, Scene{0, 7}, Scene{0, 63}}) {
    std::vector<ProbeDriver::Probe> ps{{SimTime::cycles(0), s.src,
                                        synth_address(s.src, 1, s.dst),
                                        MessageKind::kReadReq}};
    Stats st;
    run_probes(NetworkKind::kHMesh, ps, &st);
    u64 want_hops = 2ull * manhattan(s.src, s.dst);
    if (st.message_hops == want_hops &&
        mesh_energy_j(st.message_hops) == static_cast<double>(want_hops) * 196e-12) {
      ++energy_ok;
    }
  }
  record(6, "power model reproduces design-point figures",
         ocm_ok && ecm_ok && energy_ok == 3,
         fmt("optical memory %.5f W (target 6.4 +-2%%); electrical %.2f W (> 160); "
             "hop energy exact at 196 pJ in %u/3 scenarios",
             ocm_w, ecm_w, energy_ok));
}

void check_inventory() {
  PhotonicInventory inv;
  bool wg_ok = inv.memory_waveguides == 128 && inv.xbar_waveguides == 256 &&
               inv.broadcast_waveguides == 1 && inv.arbitration_waveguides == 2 &&
               inv.clock_waveguides == 1 && inv.total_waveguides() == 388;
  bool ring_ok = ring_count_str(inv.memory_rings) == "16 K" &&
                 ring_count_str(inv.xbar_rings) == "1024 K" &&
                 ring_count_str(inv.broadcast_rings) == "8 K" &&
                 ring_count_str(inv.arbitration_rings) == "8 K" &&
                 ring_count_str(inv.clock_rings) == "64";
  std::string text = inventory_text();
  bool text_ok = text.find("388") != std::string::npos &&
                 text.find("~1056 K") != std::string::npos;
  record(7, "component inventory matches the fixed design", wg_ok && ring_ok && text_ok,
         fmt("waveguides 128+256+1+2+1 = %u; rings 16K/1024K/8K/8K/64, total %s",
             inv.total_waveguides(), ring_count_str(inv.total_rings()).c_str()));
}

void check_ordering(const std::map<std::string, Timed>& uniform_1m) {
  struct Row {
    std::string workload;
    std::map<std::string, u64> rt;
  };
  std::vector<Row> rows;

  Row u{"uniform", {}};
  for (const auto& [k, v] : uniform_1m) u.rt[k] = v.r.runtime_cycles;
  rows.push_back(u);

  for (WorkloadKind w : {WorkloadKind::kTornado, WorkloadKind::kTranspose}) {
    Row row{w == WorkloadKind::kTornado ? "tornado" : "transpose", {}};
    for (auto [nk, mk] : standard_configs()) {
      Timed t = timed_run(make_cfg(nk, mk, w, 500'000));
      row.rt[t.r.config] = t.r.runtime_cycles;
    }
    rows.push_back(row);
  }

  bool all_ok = true;
  std::string detail;
  for (const Row& row : rows) {
    bool chain = row.rt.at("xbar/ocm") < row.rt.at("hmesh/ocm") &&
                 row.rt.at("hmesh/ocm") < row.rt.at("lmesh/ocm");
    double he = static_cast<double>(row.rt.at("hmesh/ecm"));
    double le = static_cast<double>(row.rt.at("lmesh/ecm"));
    bool pair = std::fabs(he - le) <= 0.10 * le;
    all_ok = all_ok && chain && pair;
    if (!detail.empty()) detail += "; ";
    detail += fmt("%s chain %s, ecm pair %.0f%% apart", row.workload.c_str(),
                  chain ? "ordered" : "BROKEN", 100.0 * std::fabs(he - le) / le);
  }
  record(8, "relative performance ordering across rigs", all_ok, detail);
}

void check_bursty() {
  auto bursty = [](NetworkKind nk, MemoryKind mk) {
    SimConfig cfg = make_cfg(nk, mk, WorkloadKind::kBursty, 12'800);
    return timed_run(cfg).r;
  };
  RunResult ox = bursty(NetworkKind::kXbar, MemoryKind::kOcm);
  RunResult he = bursty(NetworkKind::kHMesh, MemoryKind::kEcm);
  RunResult le = bursty(NetworkKind::kLMesh, MemoryKind::kEcm);

  // Demand is far below what the electrical pins could carry in aggregate,
  // yet the burst structure still favors the optical rig on latency.
  bool low_demand = ox.bandwidth_gbps < 853.0 && he.bandwidth_gbps < 853.0 &&
                    le.bandwidth_gbps < 853.0;
  bool faster = ox.avg_latency_ns < he.avg_latency_ns &&
                ox.avg_latency_ns < le.avg_latency_ns;
  record(9, "bursts favor the optical rig even at low demand", low_demand && faster,
         fmt("avg latency xbar/ocm %.0f ns vs hmesh/ecm %.0f ns, lmesh/ecm %.0f ns; "
             "demand %.1f GB/s, well under the electrical ceiling",
             ox.avg_latency_ns, he.avg_latency_ns, le.avg_latency_ns,
             ox.bandwidth_gbps));
}

void check_determinism() {
  u32 same = 0, n = 0;
  for (auto [nk, mk] : standard_configs()) {
    SimConfig cfg = make_cfg(nk, mk, WorkloadKind::kUniform, 20'000, 42);
    std::string a = csv_row(run_one(cfg));
    std::string b = csv_row(run_one(cfg));
    ++n;
    if (a == b) ++same;
  }
  record(10, "equal seeds give byte-identical output", same == n,
         fmt("%u/%u rigs identical across repeat runs", same, n));
}

}  // namespace

int main() {
  std::map<std::string, Timed> uniform_1m;

  check_bandwidth_ceilings(uniform_1m);
  check_hotspot(uniform_1m);
  check_zero_load();
  check_arbitration();
  check_mesh_statistics(uniform_1m);
  check_power();
  check_inventory();
  check_ordering(uniform_1m);
  check_bursty();
  check_determinism();

  int fails = 0;
  printf("\n");
  for (const Verdict& v : verdicts) {
    printf("%s  %2d  %s: %s\n", v.pass ? "PASS" : "FAIL", v.id, v.name.c_str(),
           v.detail.c_str());
    if (!v.pass) ++fails;
  }
  printf("\n%zu of %zu criteria passed\n", verdicts.size() - fails, verdicts.size());
  return fails;
}

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
#include "pnoc/system.hpp"

namespace pnoc {

System::System(const SimConfig& cfg, DriverFactory factory) : cfg_(cfg) {
  cfg_.validate();

  clusters_.reserve(kClusters);
  mems_.reserve(kClusters);
  for (ClusterId c = 0; c < kClusters; ++c) {
    clusters_.push_back(std::make_unique<Cluster>(&engine_, c, cfg_, &stats_));
    mems_.push_back(
        std::make_unique<MemoryController>(&engine_, c, cfg_.memory, cfg_.mem_queue_depth));
  }

  // One arbitration ring carries the per-channel tokens plus the bus token.
  ring_ = std::make_unique<TokenRing>(engine_, kClusters, kClusters + 1);
  bus_ = std::make_unique<BroadcastBus>(&engine_, ring_.get(), &stats_);

  std::vector<Cluster*> raw;
  raw.reserve(kClusters);
  for (auto& c : clusters_) raw.push_back(c.get());

  if (cfg_.network == NetworkKind::kXbar) {
    auto xbar = std::make_unique<XbarNetwork>(&engine_, ring_.get(), raw, cfg_, &stats_);
    xbar_ = xbar.get();
    net_ = std::move(xbar);
    ring_->set_grant_handler([this](ClusterId c, u32 token) {
      if (token < kClusters) {
        xbar_->on_grant(c, token);
      } else {
        bus_->on_grant(c, token);
      }
    });
  } else {
    auto mesh = std::make_unique<MeshNetwork>(&engine_, raw, cfg_, &stats_);
    mesh_ = mesh.get();
    net_ = std::move(mesh);
    ring_->set_grant_handler([this](ClusterId c, u32 token) {
      if (token != BroadcastBus::kToken) {
        throw std::logic_error("data-channel grant without a crossbar");
      }
      bus_->on_grant(c, token);
    });
  }

  for (ClusterId c = 0; c < kClusters; ++c) {
    clusters_[c]->connect(net_.get(), mems_[c].get());
    clusters_[c]->set_completion_handler(
        [this](ClusterId id, u64 line, std::span<const ThreadId> waiters, SimTime at) {
          driver_->miss_completed(id, line, waiters, at);
        });
    clusters_[c]->set_injector_wake([this, c] { driver_->injector_wake(c); });
  }

  DriverContext ctx;
  ctx.engine = &engine_;
  ctx.clusters = raw;
  ctx.bus = bus_.get();
  ctx.stats = &stats_;
  ctx.cfg = &cfg_;
  driver_ = factory ? factory(ctx) : make_driver(ctx);

  engine_.set_idle_handler([this] {
    std::string report = driver_->idle_report();
    if (report.empty()) return report;
    for (ClusterId c = 0; c < kClusters; ++c) {
      if (clusters_[c]->outstanding() > 0) {
        report += "\n  " + clusters_[c]->blocked_report();
        if (report.size() > 900) break;
      }
    }
    if (mesh_ != nullptr) {
      std::string m = mesh_->blocked_report();
      if (!m.empty()) report += "\n" + m;
    }
    return report;
  });
}

RunResult System::run() {
  driver_->start();
  engine_.run();
  return reduce(cfg_, stats_);
}

}  // namespace pnoc

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace plaqperc {

// Dinic's algorithm: shortest augmenting paths found level by level with BFS,
// blocking flows pushed with an iterative DFS.
class MaxFlow {
 public:
  using Cap = std::int64_t;
  static constexpr Cap kInfinity = std::numeric_limits<Cap>::max() / 4;

  explicit MaxFlow(std::size_t nodes) : head_(nodes, -1), level_(nodes), iter_(nodes) {}

  std::size_t node_count() const { return head_.size(); }

  // Adds an arc u->v with capacity cap and reverse capacity rev_cap. Returns the arc id.
  int add_edge(std::uint32_t u, std::uint32_t v, Cap cap, Cap rev_cap = 0) {
    const int id = static_cast<int>(to_.size());
    push_arc(u, v, cap);
    push_arc(v, u, rev_cap);
    return id;
  }

  Cap run(std::uint32_t s, std::uint32_t t) {
    Cap flow = 0;
    while (bfs(s, t)) {
      std::copy(head_.begin(), head_.end(), iter_.begin());
      while (true) {
        const Cap f = augment(s, t);
        if (f == 0) break;
        flow += f;
        if (flow >= kInfinity) return kInfinity;
      }
    }
    return flow;
  }

  // Nodes reachable from s in the residual graph after run().
  std::vector<bool> residual_reachable(std::uint32_t s) const {
    std::vector<bool> seen(head_.size(), false);
    std::vector<std::uint32_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (int a = head_[u]; a != -1; a = next_[a])
        if (cap_[a] > 0 && !seen[to_[a]]) {
          seen[to_[a]] = true;
          stack.push_back(to_[a]);
        }
    }
    return seen;
  }

 private:
  void push_arc(std::uint32_t u, std::uint32_t v, Cap cap) {
    to_.push_back(v);
    cap_.push_back(cap);
    next_.push_back(head_[u]);
    head_[u] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs(std::uint32_t s, std::uint32_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::uint32_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (int a = head_[u]; a != -1; a = next_[a])
        if (cap_[a] > 0 && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[u] + 1;
          q.push(to_[a]);
        }
    }
    return level_[t] >= 0;
  }

  // One augmenting path along the level graph; returns its bottleneck or 0.
  Cap augment(std::uint32_t s, std::uint32_t t) {
    path_.clear();
    std::uint32_t u = s;
    while (true) {
      if (u == t) {
        Cap bottleneck = kInfinity;
        for (int a : path_) bottleneck = std::min(bottleneck, cap_[a]);
        for (int a : path_) {
          cap_[a] -= bottleneck;
          cap_[a ^ 1] += bottleneck;
        }
        return bottleneck;
      }
      int& a = iter_[u];
      while (a != -1 && !(cap_[a] > 0 && level_[to_[a]] == level_[u] + 1)) a = next_[a];
      if (a != -1) {
        path_.push_back(a);
        u = to_[a];
        continue;
      }
      // Dead end: retreat.
      level_[u] = -1;
      if (path_.empty()) return 0;
      const int back = path_.back();
      path_.pop_back();
      u = to_[back ^ 1];
      iter_[u] = next_[iter_[u]];
    }
  }

  std::vector<int> head_;
  std::vector<std::uint32_t> to_;
  std::vector<Cap> cap_;
  std::vector<int> next_;
  std::vector<int> level_;
  std::vector<int> iter_;
  std::vector<int> path_;
};

}  // namespace plaqperc

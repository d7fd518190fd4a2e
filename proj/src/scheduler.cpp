#include "sensel/scheduler.hpp"

#include "sensel/errors.hpp"
#include "sensel/estimator.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numeric>

namespace sensel {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::brute_force: return "brute_force";
    case Method::sliding_window: return "sliding_window";
    case Method::round_robin: return "round_robin";
  }
  return "unknown";
}

double search_space_size(int sensors, int depth) {
  return std::pow(static_cast<double>(sensors), static_cast<double>(depth));
}

namespace {

void guard(int sensors, int depth, const char* what) {
  const double size = search_space_size(sensors, depth);
  if (!(size <= kEnumerationGuard)) {
    throw SearchSpaceError(fmt::format("{}: {}^{} = {:.6g} sequences exceeds the enumeration "
                                       "guard of {:.0e}",
                                       what, sensors, depth, size, kEnumerationGuard),
                           size);
  }
}

class Stepper {
 public:
  Stepper(const Scenario& s, SearchStats* stats) : s_(s), stats_(stats) {}

  Matrix operator()(const Matrix& P, int sensor) const {
    if (stats_) ++stats_->covariance_steps;
    return covariance_step(P, s_.plant, s_.sensors.at(sensor));
  }

 private:
  const Scenario& s_;
  SearchStats* stats_;
};

Schedule finish(std::vector<int> seq, Method method, const Scenario& s) {
  Schedule out;
  out.traces = posterior_traces(seq, s);
  out.objective = std::accumulate(out.traces.begin(), out.traces.end(), 0.0);
  out.sequence = std::move(seq);
  out.method = method;
  return out;
}

// Depth-first enumeration in lexicographic order; the first strictly better
// leaf wins, so ties resolve to the smallest sequence.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Stepper& step, int sensors, int depth)
      : step_(step), sensors_(sensors), depth_(depth) {
    path_.resize(static_cast<std::size_t>(depth));
  }

  void run(const Matrix& root) { descend(root, 0, 0.0); }

  const std::vector<int>& best() const { return best_; }

 private:
  void descend(const Matrix& P, int level, double cost) {
    if (level == depth_) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = path_;
      }
      return;
    }
    for (int sensor = 1; sensor <= sensors_; ++sensor) {
      Matrix child = step_(P, sensor);
      path_[static_cast<std::size_t>(level)] = sensor;
      descend(child, level + 1, cost + child.trace());
    }
  }

  const Stepper& step_;
  int sensors_;
  int depth_;
  std::vector<int> path_;
  std::vector<int> best_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

// Full N-ary window tree stored level by level; node j of level l has
// children j*N + (s-1) on level l+1, so leaf order is lexicographic.
class WindowTree {
 public:
  WindowTree(const Stepper& step, int sensors) : step_(step), sensors_(sensors) {}

  void reset(Matrix root) {
    levels_.clear();
    levels_.push_back({SearchNode{std::move(root), 0, 0.0, {}}});
  }

  int depth() const { return static_cast<int>(levels_.size()) - 1; }

  void grow_to(int depth) {
    while (this->depth() < depth) expand();
  }

  /// Makes child `sensor` of the root the new root, keeping its subtree.
  void rebase(int sensor, Matrix committed) {
    std::vector<std::vector<SearchNode>> next;
    next.reserve(levels_.size() - 1);
    std::size_t width = 1;
    for (std::size_t l = 1; l < levels_.size(); ++l) {
      auto& old = levels_[l];
      const auto first = old.begin() + static_cast<std::ptrdiff_t>(
                                           static_cast<std::size_t>(sensor - 1) * width);
      next.emplace_back(std::make_move_iterator(first),
                        std::make_move_iterator(first + static_cast<std::ptrdiff_t>(width)));
      width *= static_cast<std::size_t>(sensors_);
    }
    if (next.empty()) {
      next.push_back({SearchNode{}});
    }
    next[0][0].P = std::move(committed);
    levels_ = std::move(next);
    relabel();
  }

  /// Lexicographically smallest leaf path of minimum partial cost.
  const SearchNode& best_leaf() const {
    const auto& leaves = levels_.back();
    const SearchNode* best = &leaves.front();
    for (const auto& node : leaves) {
      if (node.partial_cost < best->partial_cost) best = &node;
    }
    return *best;
  }

 private:
  void expand() {
    const auto& parents = levels_.back();
    std::vector<SearchNode> children;
    children.reserve(parents.size() * static_cast<std::size_t>(sensors_));
    for (const auto& parent : parents) {
      for (int sensor = 1; sensor <= sensors_; ++sensor) {
        SearchNode child;
        child.P = step_(parent.P, sensor);
        child.depth = parent.depth + 1;
        child.partial_cost = parent.partial_cost + child.P.trace();
        child.path = parent.path;
        child.path.push_back(sensor);
        children.push_back(std::move(child));
      }
    }
    levels_.push_back(std::move(children));
  }

  // Recomputes depth, path and partial cost relative to the current root in
  // the same accumulation order expand() uses, so reused and freshly built
  // windows compare bit-identically.
  void relabel() {
    auto& root = levels_[0][0];
    root.depth = 0;
    root.partial_cost = 0.0;
    root.path.clear();
    for (std::size_t l = 1; l < levels_.size(); ++l) {
      auto& level = levels_[l];
      const auto& parents = levels_[l - 1];
      for (std::size_t j = 0; j < level.size(); ++j) {
        const auto& parent = parents[j / static_cast<std::size_t>(sensors_)];
        auto& node = level[j];
        node.depth = parent.depth + 1;
        node.partial_cost = parent.partial_cost + node.P.trace();
        node.path = parent.path;
        node.path.push_back(static_cast<int>(j % static_cast<std::size_t>(sensors_)) + 1);
      }
    }
  }

  const Stepper& step_;
  int sensors_;
  std::vector<std::vector<SearchNode>> levels_;
};

}  // namespace

std::vector<double> posterior_traces(const std::vector<int>& seq, const Scenario& s) {
  if (seq.empty()) throw DimensionError("schedule must contain at least one sensor");
  std::vector<double> traces;
  traces.reserve(seq.size());
  Matrix P = s.P0;
  for (int sensor : seq) {
    P = covariance_step(P, s.plant, s.sensors.at(sensor));
    traces.push_back(P.trace());
  }
  return traces;
}

double schedule_objective(const std::vector<int>& seq, const Scenario& s) {
  const auto traces = posterior_traces(seq, s);
  return std::accumulate(traces.begin(), traces.end(), 0.0);
}

Schedule brute_force_schedule(const Scenario& s, SearchStats* stats) {
  const int N = s.sensors.size();
  if (N < 1) throw DimensionError("brute_force_schedule: no sensors");
  if (s.horizon < 1) throw DimensionError("brute_force_schedule: horizon must be >= 1");
  guard(N, s.horizon, "brute force search");
  const Stepper step(s, stats);
  ExhaustiveSearch search(step, N, s.horizon);
  search.run(s.P0);
  return finish(search.best(), Method::brute_force, s);
}

Schedule sliding_window_schedule(const Scenario& s, SearchStats* stats, bool reuse) {
  const int N = s.sensors.size();
  const int K = s.horizon;
  const int d = s.window;
  if (N < 1) throw DimensionError("sliding_window_schedule: no sensors");
  if (K < 1) throw DimensionError("sliding_window_schedule: horizon must be >= 1");
  if (d < 1 || d > K) {
    throw DimensionError(fmt::format("window d = {} must satisfy 1 <= d <= K = {}", d, K));
  }
  guard(N, d, "sliding window search");

  const Stepper step(s, stats);
  WindowTree tree(step, N);
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(K));
  Matrix committed = s.P0;
  tree.reset(committed);
  for (int k = 1; k <= K; ++k) {
    const int depth = std::min(d, K - k + 1);
    tree.grow_to(depth);
    const int chosen = tree.best_leaf().path.front();
    seq.push_back(chosen);
    if (k == K) break;
    committed = step(committed, chosen);
    if (reuse) {
      tree.rebase(chosen, committed);
    } else {
      tree.reset(committed);
    }
  }
  return finish(std::move(seq), Method::sliding_window, s);
}

Schedule round_robin_schedule(const Scenario& s) {
  const int N = s.sensors.size();
  if (N < 1) throw DimensionError("round_robin_schedule: no sensors");
  if (s.round_robin_start < 1 || s.round_robin_start > N) {
    throw IndexError(fmt::format("round-robin start {} outside [1, {}]", s.round_robin_start, N));
  }
  std::vector<int> seq(static_cast<std::size_t>(s.horizon));
  for (int k = 0; k < s.horizon; ++k) {
    seq[static_cast<std::size_t>(k)] = (s.round_robin_start - 1 + k) % N + 1;
  }
  return finish(std::move(seq), Method::round_robin, s);
}

}  // namespace sensel

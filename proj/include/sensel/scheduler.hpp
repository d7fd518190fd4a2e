#pragma once

#include "sensel/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace sensel {

enum class Method { brute_force, sliding_window, round_robin };

std::string_view method_name(Method m);

/// A sensor querying sequence i_1..i_K (1-based) with its summed trace(P_k).
struct Schedule {
  std::vector<int> sequence;
  double objective = 0.0;
  Method method = Method::round_robin;
  std::vector<double> traces;  // trace(P_k) for k = 1..K
};

/// Node of the d-level search tree rooted at the last committed covariance.
struct SearchNode {
  Matrix P;                // posterior covariance after the path
  int depth = 0;           // levels below the window root
  double partial_cost = 0; // sum of trace(P) along the path
  std::vector<int> path;   // sensor indices from the root
};

/// Number of covariance_step evaluations performed by a search.
struct SearchStats {
  std::uint64_t covariance_steps = 0;
};

/// Exhaustive searches refuse to enumerate more than this many sequences.
inline constexpr double kEnumerationGuard = 1e7;

/// N^depth as a double (saturates to +inf instead of overflowing).
double search_space_size(int sensors, int depth);

/// trace(P_k) for k = 1..len(seq), iterating covariance_step from P0.
/// Throws IndexError on an out-of-range sensor and DimensionError on an empty sequence.
std::vector<double> posterior_traces(const std::vector<int>& seq, const Scenario& s);

/// Sum of posterior_traces(seq, s).
double schedule_objective(const std::vector<int>& seq, const Scenario& s);

/// Global minimum of the trace objective over all N^K sequences; ties go to
/// the lexicographically smallest sequence. Throws SearchSpaceError when
/// N^K exceeds kEnumerationGuard.
Schedule brute_force_schedule(const Scenario& s, SearchStats* stats = nullptr);

/// Receding-horizon search with window s.window: at each slot enumerate every
/// continuation of length min(d, slots left), commit the first sensor of the
/// best one (lexicographic tie-break) and slide. With reuse enabled, the
/// committed child's subtree from the previous window is kept and only the
/// new deepest level is expanded. Throws SearchSpaceError when N^d exceeds
/// kEnumerationGuard.
Schedule sliding_window_schedule(const Scenario& s, SearchStats* stats = nullptr,
                                 bool reuse = true);

/// start, start+1, ... wrapping modulo N, for K slots.
Schedule round_robin_schedule(const Scenario& s);

}  // namespace sensel

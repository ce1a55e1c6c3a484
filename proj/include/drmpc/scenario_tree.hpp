#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace drmpc {

struct TreeNode {
  int id = 0;
  int day_offset = 0;  // 0 = the day being solved
  int event_flag = 0;
  int parent = -1;  // -1 for the root
  std::vector<int> children;
};

// Hybrid scenario tree: a perfect binary prefix over the first n days
// (outcomes fully enumerated) and one sampled single-child continuation per
// binary leaf out to the receding horizon N.
struct ScenarioTree {
  std::vector<TreeNode> nodes;
  int branching_depth = 1;  // n
  int horizon_days = 1;     // N
  std::vector<int> leaves;                   // leaf node ids, in construction order
  std::vector<std::vector<int>> leaf_paths;  // node ids, root first, one per leaf
  std::vector<double> branch_probabilities;  // per leaf, sums to 1
  std::vector<double> node_weights;          // leaf-probability mass through each node

  int node_count() const { return static_cast<int>(nodes.size()); }
  int leaf_count() const { return static_cast<int>(leaves.size()); }
};

// Builds the tree for one day-solve. `probabilities[k-1]` is the event
// probability of the day at offset k (the solve day itself is known and
// contributes no probability factor). Branching covers offsets 1..n-1;
// offsets n..N-1 are Bernoulli-sampled per leaf from `rng_seed`.
ScenarioTree build_tree(int omega_today, const std::vector<double>& probabilities, int n,
                        int horizon, std::uint64_t rng_seed);

// Number of battery decision variables of the day-solve LP:
// 48 * (2^(n-1) * (N - n + 2) - 1).
std::int64_t variable_count(int n, int horizon);

// Flattens the tree into (event sequence, probability) pairs, one per leaf.
std::vector<std::pair<std::vector<int>, double>> enumerate_scenarios(const ScenarioTree& tree);

// Shrinks (n, N) so the horizon never extends past the final day.
std::pair<int, int> clamp_to_final_day(int n, int horizon, int current_day, int final_day);

// Indented text rendering (node id, day offset, event flag, weight).
std::string dump_tree(const ScenarioTree& tree);

}  // namespace drmpc

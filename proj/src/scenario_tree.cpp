#include "drmpc/scenario_tree.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "drmpc/rng.hpp"

namespace drmpc {

namespace {

void check_params(const std::vector<double>& probabilities, int n, int horizon) {
  if (n < 1 || n > horizon) {
    throw std::invalid_argument("branching depth must satisfy 1 <= n <= N");
  }
  if (static_cast<int>(probabilities.size()) < horizon - 1) {
    throw std::invalid_argument("need event probabilities for all N-1 lookahead days");
  }
  for (int k = 0; k < horizon - 1; ++k) {
    if (!(probabilities[k] >= 0.0 && probabilities[k] <= 1.0)) {
      throw std::invalid_argument("event probability out of [0, 1] at lookahead day " +
                                  std::to_string(k + 1));
    }
  }
}

}  // namespace

ScenarioTree build_tree(int omega_today, const std::vector<double>& probabilities, int n,
                        int horizon, std::uint64_t rng_seed) {
  check_params(probabilities, n, horizon);

  ScenarioTree tree;
  tree.branching_depth = n;
  tree.horizon_days = horizon;

  auto add_node = [&tree](int day_offset, int event_flag, int parent) {
    TreeNode node;
    node.id = tree.node_count();
    node.day_offset = day_offset;
    node.event_flag = event_flag;
    node.parent = parent;
    tree.nodes.push_back(node);
    if (parent >= 0) tree.nodes[parent].children.push_back(node.id);
    return node.id;
  };

  add_node(0, omega_today ? 1 : 0, -1);

  // perfect binary prefix over offsets 1..n-1
  std::vector<int> frontier = {0};
  for (int offset = 1; offset < n; ++offset) {
    std::vector<int> next;
    next.reserve(frontier.size() * 2);
    for (int parent : frontier) {
      next.push_back(add_node(offset, 0, parent));
      next.push_back(add_node(offset, 1, parent));
    }
    frontier = std::move(next);
  }

  // one sampled degenerate branch per binary leaf
  SplitMix64 rng(rng_seed);
  for (int leaf : frontier) {
    int tail = leaf;
    for (int offset = n; offset < horizon; ++offset) {
      const int omega = rng.next_bernoulli(probabilities[offset - 1]) ? 1 : 0;
      tail = add_node(offset, omega, tail);
    }
    tree.leaves.push_back(tail);
  }

  tree.leaf_paths.reserve(tree.leaves.size());
  tree.branch_probabilities.reserve(tree.leaves.size());
  for (int leaf : tree.leaves) {
    std::vector<int> path;
    for (int id = leaf; id >= 0; id = tree.nodes[id].parent) path.push_back(id);
    std::reverse(path.begin(), path.end());

    double prob = 1.0;
    for (int offset = 1; offset < n; ++offset) {
      const TreeNode& node = tree.nodes[path[offset]];
      const double p = probabilities[offset - 1];
      prob *= node.event_flag ? p : (1.0 - p);
    }
    tree.leaf_paths.push_back(std::move(path));
    tree.branch_probabilities.push_back(prob);
  }

  tree.node_weights.assign(tree.nodes.size(), 0.0);
  for (std::size_t leaf_idx = 0; leaf_idx < tree.leaves.size(); ++leaf_idx) {
    for (int id : tree.leaf_paths[leaf_idx]) {
      tree.node_weights[id] += tree.branch_probabilities[leaf_idx];
    }
  }
  return tree;
}

std::int64_t variable_count(int n, int horizon) {
  if (n < 1 || n > horizon) {
    throw std::invalid_argument("branching depth must satisfy 1 <= n <= N");
  }
  const std::int64_t leaves = std::int64_t{1} << (n - 1);
  return 48 * (leaves * (horizon - n + 2) - 1);
}

std::vector<std::pair<std::vector<int>, double>> enumerate_scenarios(const ScenarioTree& tree) {
  std::vector<std::pair<std::vector<int>, double>> result;
  result.reserve(tree.leaf_count());
  for (int i = 0; i < tree.leaf_count(); ++i) {
    std::vector<int> sequence;
    sequence.reserve(tree.leaf_paths[i].size());
    for (int id : tree.leaf_paths[i]) sequence.push_back(tree.nodes[id].event_flag);
    result.emplace_back(std::move(sequence), tree.branch_probabilities[i]);
  }
  return result;
}

std::pair<int, int> clamp_to_final_day(int n, int horizon, int current_day, int final_day) {
  if (current_day > final_day) {
    throw std::invalid_argument("current day is past the final day");
  }
  const int clamped_horizon = std::min(horizon, final_day - current_day + 1);
  return {std::min(n, clamped_horizon), clamped_horizon};
}

std::string dump_tree(const ScenarioTree& tree) {
  std::ostringstream out;
  // depth-first so the indentation reads as branches
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    const TreeNode& node = tree.nodes[id];
    for (int i = 0; i < node.day_offset; ++i) out << "  ";
    out << "node " << node.id << " day+" << node.day_offset << " omega=" << node.event_flag
        << " weight=" << tree.node_weights[id] << "\n";
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
      stack.push_back(*it);
    }
  }
  return out.str();
}

}  // namespace drmpc

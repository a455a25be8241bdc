#include "monosens/staged_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace monosens {

StagedTree::StagedTree(std::vector<std::string> vertices, std::string root,
                       std::vector<TreeEdge> edges, std::vector<Stage> stages)
    : vertices_(std::move(vertices)),
      root_(std::move(root)),
      edges_(std::move(edges)),
      stages_(std::move(stages)) {
  std::set<std::string> known(vertices_.begin(), vertices_.end());
  if (known.size() != vertices_.size()) {
    throw ValidationError("duplicate vertex id");
  }
  if (!known.count(root_)) {
    throw ValidationError("root '" + root_ + "' is not a listed vertex");
  }
  std::map<std::string, std::string> parent;
  for (const auto& e : edges_) {
    if (!known.count(e.from)) {
      throw ValidationError("edge references unknown vertex '" + e.from + "'");
    }
    if (!known.count(e.to)) {
      throw ValidationError("edge references unknown vertex '" + e.to + "'");
    }
    if (e.to == root_) {
      throw ValidationError("edge " + e.from + " -> " + e.to +
                            " points back into the root");
    }
    if (parent.count(e.to)) {
      throw ValidationError("vertex '" + e.to + "' has two parents (edge " +
                            e.from + " -> " + e.to + ")");
    }
    parent[e.to] = e.from;
  }
  // Every vertex must reach the root through parent links; a vertex whose
  // ancestor chain loops sits on a cycle.
  for (const auto& v : vertices_) {
    std::set<std::string> seen;
    std::string cur = v;
    while (cur != root_) {
      auto it = parent.find(cur);
      if (it == parent.end()) {
        throw ValidationError("vertex '" + v +
                              "' is not connected to the root");
      }
      if (!seen.insert(cur).second) {
        throw ValidationError("cycle detected through edge " + it->second +
                              " -> " + cur);
      }
      cur = it->second;
    }
  }
}

bool StagedTree::has_vertex(const std::string& id) const {
  return std::find(vertices_.begin(), vertices_.end(), id) != vertices_.end();
}

bool StagedTree::is_leaf(const std::string& id) const {
  for (const auto& e : edges_) {
    if (e.from == id) return false;
  }
  return true;
}

std::vector<const TreeEdge*> StagedTree::floret(
    const std::string& vertex) const {
  std::vector<const TreeEdge*> out;
  for (const auto& e : edges_) {
    if (e.from == vertex) out.push_back(&e);
  }
  std::sort(out.begin(), out.end(), [](const TreeEdge* a, const TreeEdge* b) {
    return a->position < b->position;
  });
  return out;
}

std::vector<std::string> StagedTree::leaves_depth_first() const {
  std::vector<std::string> leaves;
  std::vector<std::string> stack{root_};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    auto children = floret(v);
    if (children.empty()) {
      leaves.push_back(v);
      continue;
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back((*it)->to);
    }
  }
  return leaves;
}

std::vector<std::string> validate_tree(const StagedTree& tree) {
  std::vector<std::string> findings;

  std::map<std::string, std::size_t> floret_size;
  for (const auto& v : tree.vertices()) {
    auto children = tree.floret(v);
    if (children.empty()) continue;
    floret_size[v] = children.size();
    if (children.size() < 2) {
      findings.push_back("inner vertex with <2 children: '" + v + "'");
    }
    // Positions must be exactly 0..m-1.
    std::set<std::size_t> positions;
    for (const auto* e : children) positions.insert(e->position);
    bool contiguous = positions.size() == children.size() &&
                      (positions.empty() || *positions.rbegin() ==
                                                children.size() - 1);
    if (!contiguous) {
      findings.push_back("floret of '" + v +
                         "' has duplicate or non-contiguous edge positions");
    }
  }
  if (floret_size.empty()) {
    findings.push_back("root '" + tree.root() + "' has no children");
  }

  // Stages must partition the inner vertices.
  std::map<std::string, std::size_t> stage_of;
  for (std::size_t s = 0; s < tree.stages().size(); ++s) {
    const Stage& stage = tree.stages()[s];
    if (stage.members.empty()) {
      findings.push_back("stage " + std::to_string(s + 1) + " has no members");
      continue;
    }
    std::size_t expected = 0;
    for (const auto& m : stage.members) {
      if (!tree.has_vertex(m)) {
        findings.push_back("stage " + std::to_string(s + 1) +
                           " lists unknown vertex '" + m + "'");
        continue;
      }
      auto it = floret_size.find(m);
      if (it == floret_size.end()) {
        findings.push_back("stage " + std::to_string(s + 1) +
                           " lists leaf vertex '" + m + "'");
        continue;
      }
      if (stage_of.count(m)) {
        findings.push_back("vertex '" + m + "' belongs to two stages");
        continue;
      }
      stage_of[m] = s;
      if (expected == 0) expected = it->second;
      if (it->second != expected) {
        findings.push_back("floret size mismatch in stage " +
                           std::to_string(s + 1) + ": vertex '" + m + "' has " +
                           std::to_string(it->second) + " edges, expected " +
                           std::to_string(expected));
        expected = std::max(expected, it->second);
      }
    }
    if (expected != 0 && stage.probs.size() != expected) {
      findings.push_back("floret size mismatch: stage " +
                         std::to_string(s + 1) + " has " +
                         std::to_string(stage.probs.size()) +
                         " probabilities for florets of size " +
                         std::to_string(expected));
    }
    double sum = 0.0;
    bool in_range = true;
    for (double p : stage.probs) {
      sum += p;
      if (!(p > kThetaEps) || !(p < 1.0 - kThetaEps)) in_range = false;
    }
    if (!in_range) {
      findings.push_back("stage " + std::to_string(s + 1) +
                         " has probabilities outside (0,1)");
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
      findings.push_back("stage " + std::to_string(s + 1) +
                         " probabilities sum to " + std::to_string(sum) +
                         ", not 1");
    }
  }
  for (const auto& [v, size] : floret_size) {
    (void)size;
    if (!stage_of.count(v)) {
      findings.push_back("inner vertex '" + v + "' belongs to no stage");
    }
  }
  return findings;
}

MonomialModel compile_to_mm(const StagedTree& tree) {
  auto findings = validate_tree(tree);
  if (!findings.empty()) {
    throw ValidationError("cannot compile invalid tree: " + findings.front());
  }

  // Parameter index space: stage probability vectors concatenated in stage
  // order, so stage s slot p maps to one global parameter.
  std::vector<std::size_t> stage_base(tree.stages().size(), 0);
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<double> theta;
  for (std::size_t s = 0; s < tree.stages().size(); ++s) {
    stage_base[s] = theta.size();
    std::vector<std::size_t> block;
    for (std::size_t p = 0; p < tree.stages()[s].probs.size(); ++p) {
      block.push_back(theta.size());
      theta.push_back(tree.stages()[s].probs[p]);
    }
    blocks.push_back(std::move(block));
  }

  std::map<std::string, std::size_t> stage_of;
  for (std::size_t s = 0; s < tree.stages().size(); ++s) {
    for (const auto& m : tree.stages()[s].members) stage_of[m] = s;
  }

  // Depth-first traversal accumulating per-path exponent rows.
  std::vector<std::vector<int>> rows;
  std::vector<std::string> labels;
  struct Frame {
    std::string vertex;
    std::vector<int> exponents;
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root(), std::vector<int>(theta.size(), 0)});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    auto children = tree.floret(frame.vertex);
    if (children.empty()) {
      rows.push_back(std::move(frame.exponents));
      labels.push_back(frame.vertex);
      continue;
    }
    std::size_t stage = stage_of.at(frame.vertex);
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      Frame next{(*it)->to, frame.exponents};
      next.exponents[stage_base[stage] + (*it)->position] += 1;
      stack.push_back(std::move(next));
    }
  }

  return MonomialModel(
      ExponentMatrix::from_rows(rows),
      ParameterVector(std::move(theta), SimplexPartition(std::move(blocks))),
      std::move(labels));
}

}  // namespace monosens

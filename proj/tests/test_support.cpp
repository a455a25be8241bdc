#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace testsupport {

using monosens::Stage;
using monosens::StagedTree;
using monosens::TreeEdge;

std::string fixtures_dir() {
  if (const char* env = std::getenv("MONOSENS_FIXTURES")) return env;
  return "fixtures";
}

monosens::StagedTree load_fixture_tree(const std::string& name) {
  return monosens::load_tree_file(fixtures_dir() + "/" + name);
}

monosens::MonomialModel load_fixture_model(const std::string& name) {
  return monosens::load_model_file(fixtures_dir() + "/" + name);
}

monosens::StagedTree coin_tree(double head) {
  return StagedTree(
      {"v0", "v1", "HH", "HT", "T"}, "v0",
      {{"v0", "v1", "head", 0},
       {"v0", "T", "tail", 1},
       {"v1", "HH", "head", 0},
       {"v1", "HT", "tail", 1}},
      {Stage{{"v0", "v1"}, {head, 1.0 - head}}});
}

namespace {

// Shared shape of the two educational trees.
struct EduShape {
  std::vector<std::string> vertices;
  std::vector<TreeEdge> edges;
};

EduShape edu_shape() {
  EduShape shape;
  shape.vertices = {"v0"};
  shape.edges.push_back({"v0", "A", "module A first", 0});
  shape.edges.push_back({"v0", "B", "module B first", 1});
  for (std::string side : {"A", "B"}) {
    auto leafy = [&](const std::string& parent, const std::string& suffix) {
      shape.edges.push_back({parent, parent + "_F2" + suffix, "fail", 0});
      shape.edges.push_back({parent, parent + "_P2" + suffix, "pass", 1});
      shape.edges.push_back({parent, parent + "_D2" + suffix, "distinction", 2});
      shape.vertices.push_back(parent + "_F2" + suffix);
      shape.vertices.push_back(parent + "_P2" + suffix);
      shape.vertices.push_back(parent + "_D2" + suffix);
    };
    shape.vertices.push_back(side);
    shape.edges.push_back({side, side + "_F1", "fail", 0});
    shape.edges.push_back({side, side + "_P1", "pass", 1});
    shape.edges.push_back({side, side + "_D1", "distinction", 2});
    shape.vertices.push_back(side + "_F1");
    shape.vertices.push_back(side + "_P1");
    shape.vertices.push_back(side + "_D1");
    shape.edges.push_back({side + "_F1", side + "_FR", "fail resit", 0});
    shape.edges.push_back({side + "_F1", side + "_PR", "pass resit", 1});
    shape.vertices.push_back(side + "_FR");
    shape.vertices.push_back(side + "_PR");
    leafy(side + "_PR", "");
    leafy(side + "_P1", "");
    leafy(side + "_D1", "");
  }
  return shape;
}

}  // namespace

monosens::StagedTree edu_ml_tree() {
  EduShape shape = edu_shape();
  std::vector<Stage> stages = {
      Stage{{"v0"}, {0.5, 0.5}},
      Stage{{"A", "B"}, {0.2, 0.7, 0.1}},
      Stage{{"A_F1", "B_F1"}, {0.35, 0.65}},
      Stage{{"A_P1", "A_D1", "A_PR", "B_P1", "B_D1", "B_PR"}, {0.1, 0.5, 0.4}}};
  return StagedTree(shape.vertices, "v0", shape.edges, stages);
}

monosens::StagedTree edu_nml_tree() {
  EduShape shape = edu_shape();
  std::vector<Stage> stages = {
      Stage{{"v0"}, {0.5, 0.5}},
      Stage{{"A", "B", "A_P1", "A_D1", "A_PR", "B_P1", "B_D1", "B_PR"},
            {0.15, 0.6, 0.25}},
      Stage{{"A_F1", "B_F1"}, {0.35, 0.65}}};
  return StagedTree(shape.vertices, "v0", shape.edges, stages);
}

monosens::StagedTree edu_nml_split_fail_tree() {
  EduShape shape = edu_shape();
  // Split the resit-fail outcome in two, so the fail-stage floret has three
  // edges while still appearing at most once along any path.
  std::vector<TreeEdge> edges;
  for (const auto& e : shape.edges) {
    if (e.label == "fail resit") {
      edges.push_back({e.from, e.to + "_bad", "fail resit badly", 0});
      edges.push_back({e.from, e.to + "_mod", "fail resit moderately", 1});
      shape.vertices.push_back(e.to + "_bad");
      shape.vertices.push_back(e.to + "_mod");
      continue;
    }
    if (e.label == "pass resit") {
      edges.push_back({e.from, e.to, e.label, 2});
      continue;
    }
    edges.push_back(e);
  }
  // Drop the now-unreferenced resit-fail leaves.
  std::vector<std::string> vertices;
  for (const auto& v : shape.vertices) {
    if (v == "A_FR" || v == "B_FR") continue;
    vertices.push_back(v);
  }
  std::vector<Stage> stages = {
      Stage{{"v0"}, {0.5, 0.5}},
      Stage{{"A", "B", "A_P1", "A_D1", "A_PR", "B_P1", "B_D1", "B_PR"},
            {0.15, 0.6, 0.25}},
      Stage{{"A_F1", "B_F1"}, {0.15, 0.2, 0.65}}};
  return StagedTree(vertices, "v0", edges, stages);
}

std::map<std::string, double> tree_path_probabilities(
    const monosens::StagedTree& tree) {
  std::map<std::string, double> edge_prob;
  for (const auto& stage : tree.stages()) {
    for (const auto& member : stage.members) {
      auto floret = tree.floret(member);
      for (std::size_t p = 0; p < floret.size(); ++p) {
        edge_prob[member + ">" + floret[p]->to] = stage.probs[p];
      }
    }
  }
  std::map<std::string, double> result;
  struct Item {
    std::string vertex;
    double prob;
  };
  std::vector<Item> queue{{tree.root(), 1.0}};
  while (!queue.empty()) {
    Item item = queue.back();
    queue.pop_back();
    auto floret = tree.floret(item.vertex);
    if (floret.empty()) {
      result[item.vertex] = item.prob;
      continue;
    }
    for (const auto* e : floret) {
      queue.push_back({e->to, item.prob * edge_prob.at(item.vertex + ">" + e->to)});
    }
  }
  return result;
}

monosens::AtomEvent event_of(const monosens::MonomialModel& model,
                             const std::vector<std::string>& labels) {
  std::vector<std::size_t> atoms;
  for (const auto& label : labels) {
    atoms.push_back(model.atom_index_of(label));
  }
  return monosens::AtomEvent::of(std::move(atoms), model.atom_count());
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo,
                          std::size_t hi) {
  return lo + static_cast<std::size_t>(uniform(rng) *
                                       static_cast<double>(hi - lo + 1));
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t size,
                                   double floor) {
  std::vector<double> point(size);
  double total = 0.0;
  for (double& x : point) {
    x = -std::log1p(-uniform(rng)) + floor * static_cast<double>(size);
    total += x;
  }
  for (double& x : point) x /= total;
  return point;
}

RandomTreeResult random_tree(std::mt19937_64& rng,
                             const RandomTreeOptions& options) {
  struct Vertex {
    std::string id;
    std::size_t depth;
  };
  std::vector<std::string> vertices{"r"};
  std::vector<TreeEdge> edges;
  std::vector<Vertex> frontier{{"r", 0}};
  std::vector<Vertex> inner;
  std::size_t leaves = 0;
  std::size_t counter = 0;

  while (!frontier.empty()) {
    Vertex v = frontier.back();
    frontier.pop_back();
    bool must_leaf = v.depth >= options.max_depth ||
                     leaves + frontier.size() + 3 > options.max_leaves;
    bool make_leaf = v.depth > 0 && (must_leaf || uniform(rng) < 0.35);
    if (make_leaf) {
      ++leaves;
      continue;
    }
    std::size_t width = uniform_index(rng, 2, 3);
    inner.push_back(v);
    for (std::size_t c = 0; c < width; ++c) {
      std::string child = "n" + std::to_string(++counter);
      vertices.push_back(child);
      edges.push_back({v.id, child, "e" + std::to_string(c), c});
      frontier.push_back({child, v.depth + 1});
    }
  }

  // Group inner vertices by floret size, then carve stages out of each
  // group. Ancestor/descendant pairs may share a stage, which is what
  // produces exponents above one.
  std::map<std::string, std::size_t> floret_width;
  for (const auto& e : edges) floret_width[e.from]++;

  std::map<std::size_t, std::vector<Vertex>> by_width;
  for (const auto& v : inner) by_width[floret_width[v.id]].push_back(v);

  std::vector<Stage> stages;
  std::size_t params = 0;
  std::size_t square_free_stage = 0;
  bool square_free_done = !options.square_free_block;

  for (auto& [width, members] : by_width) {
    std::vector<std::vector<std::string>> groups;
    if (!square_free_done) {
      // Collect a same-depth subset first: those vertices are pairwise
      // off-path, so the stage's block exponent sums are 0/1.
      std::map<std::size_t, std::vector<std::string>> by_depth;
      for (const auto& v : members) by_depth[v.depth].push_back(v.id);
      std::size_t best_depth = by_depth.begin()->first;
      for (const auto& [depth, ids] : by_depth) {
        if (ids.size() > by_depth[best_depth].size()) best_depth = depth;
      }
      groups.push_back(by_depth[best_depth]);
      square_free_stage = stages.size();
      square_free_done = true;
      std::vector<Vertex> rest;
      for (const auto& v : members) {
        if (v.depth != best_depth) rest.push_back(v);
      }
      members = rest;
    }
    // Distribute the remaining vertices over a small random number of
    // stages, merging everything into one stage when the parameter budget
    // runs low.
    std::size_t budget = (options.max_params - std::min(options.max_params,
                                                        params)) /
                         std::max<std::size_t>(width, 1);
    std::size_t stage_count =
        members.empty() ? 0
                        : std::max<std::size_t>(
                              1, std::min({members.size(), budget,
                                           uniform_index(rng, 1, 3)}));
    for (std::size_t s = 0; s < stage_count; ++s) groups.push_back({});
    for (std::size_t m = 0; m < members.size(); ++m) {
      std::size_t g = groups.size() - stage_count +
                      uniform_index(rng, 0, stage_count - 1);
      groups[g].push_back(members[m].id);
    }
    for (auto& group : groups) {
      if (group.empty()) continue;
      stages.push_back(Stage{group, random_simplex(rng, width)});
      params += width;
    }
  }

  return RandomTreeResult{StagedTree(vertices, "r", edges, stages),
                          square_free_stage};
}

monosens::MonomialModel random_model(std::mt19937_64& rng,
                                     const RandomTreeOptions& options) {
  return monosens::compile_to_mm(random_tree(rng, options).tree);
}

monosens::AtomEvent random_event(std::mt19937_64& rng,
                                 const monosens::MonomialModel& model) {
  std::vector<std::size_t> atoms;
  for (std::size_t y = 0; y < model.atom_count(); ++y) {
    if (uniform(rng) < 0.4) atoms.push_back(y);
  }
  if (atoms.empty()) {
    atoms.push_back(uniform_index(rng, 0, model.atom_count() - 1));
  }
  return monosens::AtomEvent::of(std::move(atoms), model.atom_count());
}

}  // namespace testsupport

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monosens/model.hpp"

namespace monosens {

struct TreeEdge {
  std::string from;
  std::string to;
  std::string label;
  std::size_t position = 0;  // slot within the source floret, 0-based
};

struct Stage {
  std::vector<std::string> members;  // inner vertices sharing one distribution
  std::vector<double> probs;         // positional, one per floret edge slot
};

// Rooted event tree with stage-identified florets. The constructor enforces
// only that the edges form a tree over known vertices; everything else is a
// validate_tree finding so broken inputs can still be inspected.
class StagedTree {
 public:
  StagedTree(std::vector<std::string> vertices, std::string root,
             std::vector<TreeEdge> edges, std::vector<Stage> stages);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& root() const { return root_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<Stage>& stages() const { return stages_; }

  bool has_vertex(const std::string& id) const;
  bool is_leaf(const std::string& id) const;
  // Outgoing edges of a vertex ordered by position.
  std::vector<const TreeEdge*> floret(const std::string& vertex) const;

  // Leaves in depth-first order (children visited by floret position); this
  // fixes the atom ordering of the compiled model.
  std::vector<std::string> leaves_depth_first() const;

 private:
  std::vector<std::string> vertices_;
  std::string root_;
  std::vector<TreeEdge> edges_;
  std::vector<Stage> stages_;
};

// Reports every violated structural invariant; empty result means valid.
std::vector<std::string> validate_tree(const StagedTree& tree);

// Compiles a valid tree to its monomial model: one atom per root-to-leaf
// path, parameters indexed by (stage, position), exponents counting how
// often each parameter occurs along the path.
MonomialModel compile_to_mm(const StagedTree& tree);

}  // namespace monosens

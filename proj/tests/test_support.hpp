#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "monosens/io.hpp"
#include "monosens/model.hpp"
#include "monosens/staged_tree.hpp"

namespace testsupport {

// Directory with the bundled fixture files (MONOSENS_FIXTURES or ./fixtures).
std::string fixtures_dir();

monosens::StagedTree load_fixture_tree(const std::string& name);
monosens::MonomialModel load_fixture_model(const std::string& name);

// Programmatic builders, independent of the JSON files.
monosens::StagedTree coin_tree(double head = 0.5);
monosens::StagedTree edu_ml_tree();
monosens::StagedTree edu_nml_tree();
// The non-multilinear educational tree with the resit-fail outcome split in
// two, making the fail stage a 3-edge floret whose block is square free.
monosens::StagedTree edu_nml_split_fail_tree();

// Walks root-to-leaf paths multiplying edge probabilities directly; an
// oracle for compiled models that shares nothing with the compiler.
std::map<std::string, double> tree_path_probabilities(
    const monosens::StagedTree& tree);

// Event helper: resolve labels on a model.
monosens::AtomEvent event_of(const monosens::MonomialModel& model,
                             const std::vector<std::string>& labels);

// Portable uniform double in [lo, hi).
double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0);
// Uniform integer in [lo, hi].
std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo,
                          std::size_t hi);
// Random point in the open simplex with entries bounded away from 0.
std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t size,
                                   double floor = 0.01);

struct RandomTreeOptions {
  std::size_t max_depth = 4;    // exponents never exceed this
  std::size_t max_leaves = 200;
  std::size_t max_params = 30;
  // When set, one stage is built from same-depth vertices only, so its
  // block exponent sums are 0/1; its index is reported in the result.
  bool square_free_block = false;
};

struct RandomTreeResult {
  monosens::StagedTree tree;
  std::size_t square_free_stage = 0;  // meaningful when requested
};

// Random staged tree: random shape, stages pooled over equal-size florets
// (possibly nesting along paths, which creates exponents >= 2), random
// floret distributions. Compiled models always have unit total mass.
RandomTreeResult random_tree(std::mt19937_64& rng,
                             const RandomTreeOptions& options = {});

monosens::MonomialModel random_model(std::mt19937_64& rng,
                                     const RandomTreeOptions& options = {});

// Random nonempty event over a model's atoms.
monosens::AtomEvent random_event(std::mt19937_64& rng,
                                 const monosens::MonomialModel& model);

}  // namespace testsupport

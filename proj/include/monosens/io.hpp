#pragma once

#include <stdexcept>
#include <string>

#include "monosens/model.hpp"
#include "monosens/staged_tree.hpp"

namespace monosens {

// Raised for malformed documents; the message carries the offending
// field or byte position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model format: {"atoms": [{"label", "exponents"}...], "theta": [...],
// "partition": [[1-based indices]...]}. Integer fields round-trip exactly.
MonomialModel parse_model(const std::string& text);
std::string serialize_model(const MonomialModel& model);

// Tree format: {"vertices": [...], "root", "edges": [{"from","to","label",
// "position"}...], "stages": [{"members": [...], "probs": [...]}...]}.
StagedTree parse_tree(const std::string& text);
std::string serialize_tree(const StagedTree& tree);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

MonomialModel load_model_file(const std::string& path);
StagedTree load_tree_file(const std::string& path);

}  // namespace monosens

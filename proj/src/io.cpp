#include "monosens/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace monosens {

namespace {

using nlohmann::ordered_json;

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
}

const ordered_json& field(const ordered_json& obj, const char* name,
                          const char* where) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(std::string("missing field '") + name + "' in " + where);
  }
  return *it;
}

template <typename T>
T as(const ordered_json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const ordered_json::exception&) {
    throw ParseError("unexpected type for " + where);
  }
}

}  // namespace

MonomialModel parse_model(const std::string& text) {
  ordered_json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("model document is not an object");

  const auto& atoms = field(doc, "atoms", "model");
  if (!atoms.is_array() || atoms.empty()) {
    throw ParseError("'atoms' must be a nonempty array");
  }
  std::vector<std::vector<int>> rows;
  std::vector<std::string> labels;
  for (std::size_t y = 0; y < atoms.size(); ++y) {
    std::string where = "atoms[" + std::to_string(y) + "]";
    const auto& atom = atoms[y];
    if (!atom.is_object()) throw ParseError(where + " is not an object");
    labels.push_back(as<std::string>(field(atom, "label", where.c_str()),
                                     where + ".label"));
    auto exps = as<std::vector<int>>(
        field(atom, "exponents", where.c_str()), where + ".exponents");
    rows.push_back(std::move(exps));
  }
  for (std::size_t y = 1; y < rows.size(); ++y) {
    if (rows[y].size() != rows[0].size()) {
      throw ParseError("atoms[" + std::to_string(y) +
                       "].exponents has inconsistent length");
    }
  }

  auto theta =
      as<std::vector<double>>(field(doc, "theta", "model"), "theta");

  const auto& partition = field(doc, "partition", "model");
  if (!partition.is_array()) throw ParseError("'partition' must be an array");
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    std::string where = "partition[" + std::to_string(j) + "]";
    auto indices = as<std::vector<long long>>(partition[j], where);
    std::vector<std::size_t> block;
    for (long long i : indices) {
      if (i < 1 || static_cast<std::size_t>(i) > theta.size()) {
        throw ParseError(where + " index " + std::to_string(i) +
                         " outside 1.." + std::to_string(theta.size()));
      }
      block.push_back(static_cast<std::size_t>(i - 1));  // files are 1-based
    }
    blocks.push_back(std::move(block));
  }

  return MonomialModel(
      ExponentMatrix::from_rows(rows),
      ParameterVector(std::move(theta), SimplexPartition(std::move(blocks))),
      std::move(labels));
}

std::string serialize_model(const MonomialModel& model) {
  ordered_json doc;
  doc["atoms"] = ordered_json::array();
  for (std::size_t y = 0; y < model.atom_count(); ++y) {
    ordered_json atom;
    atom["label"] = model.atom_labels()[y];
    std::vector<int> exps(model.param_count());
    for (std::size_t i = 0; i < model.param_count(); ++i) {
      exps[i] = model.matrix().at(y, i);
    }
    atom["exponents"] = exps;
    doc["atoms"].push_back(std::move(atom));
  }
  doc["theta"] = model.theta().values();
  doc["partition"] = ordered_json::array();
  for (const auto& block : model.partition().blocks()) {
    std::vector<std::size_t> ones;
    for (std::size_t i : block) ones.push_back(i + 1);
    doc["partition"].push_back(ones);
  }
  return doc.dump(2) + "\n";
}

StagedTree parse_tree(const std::string& text) {
  ordered_json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("tree document is not an object");

  auto vertices = as<std::vector<std::string>>(
      field(doc, "vertices", "tree"), "vertices");
  auto root = as<std::string>(field(doc, "root", "tree"), "root");

  const auto& edges_json = field(doc, "edges", "tree");
  if (!edges_json.is_array()) throw ParseError("'edges' must be an array");
  std::vector<TreeEdge> edges;
  for (std::size_t e = 0; e < edges_json.size(); ++e) {
    std::string where = "edges[" + std::to_string(e) + "]";
    const auto& ej = edges_json[e];
    TreeEdge edge;
    edge.from = as<std::string>(field(ej, "from", where.c_str()), where);
    edge.to = as<std::string>(field(ej, "to", where.c_str()), where);
    edge.label = as<std::string>(field(ej, "label", where.c_str()), where);
    auto pos = as<long long>(field(ej, "position", where.c_str()), where);
    if (pos < 0) throw ParseError(where + ".position is negative");
    edge.position = static_cast<std::size_t>(pos);
    edges.push_back(std::move(edge));
  }

  const auto& stages_json = field(doc, "stages", "tree");
  if (!stages_json.is_array()) throw ParseError("'stages' must be an array");
  std::vector<Stage> stages;
  for (std::size_t s = 0; s < stages_json.size(); ++s) {
    std::string where = "stages[" + std::to_string(s) + "]";
    Stage stage;
    stage.members = as<std::vector<std::string>>(
        field(stages_json[s], "members", where.c_str()), where + ".members");
    stage.probs = as<std::vector<double>>(
        field(stages_json[s], "probs", where.c_str()), where + ".probs");
    stages.push_back(std::move(stage));
  }

  try {
    return StagedTree(std::move(vertices), std::move(root), std::move(edges),
                      std::move(stages));
  } catch (const ValidationError& e) {
    // Structural breakage (cycles, unknown references) is a parse failure.
    throw ParseError(e.what());
  }
}

std::string serialize_tree(const StagedTree& tree) {
  ordered_json doc;
  doc["vertices"] = tree.vertices();
  doc["root"] = tree.root();
  doc["edges"] = ordered_json::array();
  for (const auto& e : tree.edges()) {
    ordered_json ej;
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["label"] = e.label;
    ej["position"] = e.position;
    doc["edges"].push_back(std::move(ej));
  }
  doc["stages"] = ordered_json::array();
  for (const auto& s : tree.stages()) {
    ordered_json sj;
    sj["members"] = s.members;
    sj["probs"] = s.probs;
    doc["stages"].push_back(std::move(sj));
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

MonomialModel load_model_file(const std::string& path) {
  return parse_model(read_file(path));
}

StagedTree load_tree_file(const std::string& path) {
  return parse_tree(read_file(path));
}

}  // namespace monosens

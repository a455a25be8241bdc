#include "monosens/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace monosens {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "; ";
    out += parts[i];
  }
  return out;
}

void throw_if_findings(const std::vector<std::string>& findings,
                       const char* what) {
  if (!findings.empty()) {
    throw ValidationError(std::string(what) + ": " + join(findings));
  }
}

// Edit distance for label suggestions.
std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

// ---------------------------------------------------------------------------
// ExponentMatrix

ExponentMatrix::ExponentMatrix(std::size_t atom_count, std::size_t param_count,
                               std::vector<int> entries)
    : atoms_(atom_count), params_(param_count), entries_(std::move(entries)) {
  throw_if_findings(check(atoms_, params_, entries_), "invalid exponent matrix");
}

ExponentMatrix ExponentMatrix::from_rows(
    const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ValidationError("exponent matrix has no rows");
  std::size_t cols = rows.front().size();
  std::vector<int> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) {
      throw ValidationError("ragged exponent matrix rows");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ExponentMatrix(rows.size(), cols, std::move(entries));
}

int ExponentMatrix::max_entry() const {
  return *std::max_element(entries_.begin(), entries_.end());
}

std::vector<std::string> ExponentMatrix::check(std::size_t atom_count,
                                               std::size_t param_count,
                                               const std::vector<int>& entries) {
  std::vector<std::string> findings;
  if (atom_count == 0) findings.push_back("matrix has no atoms");
  if (param_count == 0) findings.push_back("matrix has no parameters");
  if (entries.size() != atom_count * param_count) {
    findings.push_back("entry count does not match matrix shape");
    return findings;
  }
  for (std::size_t y = 0; y < atom_count; ++y) {
    for (std::size_t i = 0; i < param_count; ++i) {
      if (entries[y * param_count + i] < 0) {
        findings.push_back("negative exponent at atom " + std::to_string(y) +
                           ", parameter " + std::to_string(i + 1));
      }
    }
  }
  for (std::size_t i = 0; i < param_count; ++i) {
    bool used = false;
    for (std::size_t y = 0; y < atom_count && !used; ++y) {
      used = entries[y * param_count + i] != 0;
    }
    if (!used) {
      findings.push_back("parameter " + std::to_string(i + 1) +
                         " appears in no atom (all-zero column)");
    }
  }
  return findings;
}

// ---------------------------------------------------------------------------
// SimplexPartition

SimplexPartition::SimplexPartition(
    std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  throw_if_findings(check(blocks_), "invalid simplex partition");
  std::size_t k = 0;
  for (const auto& block : blocks_) k += block.size();
  block_of_.assign(k, 0);
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    for (std::size_t i : blocks_[j]) block_of_[i] = j;
  }
}

std::vector<std::string> SimplexPartition::check(
    const std::vector<std::vector<std::size_t>>& blocks) {
  std::vector<std::string> findings;
  if (blocks.empty()) {
    findings.push_back("partition has no blocks");
    return findings;
  }
  std::size_t k = 0;
  for (const auto& block : blocks) k += block.size();
  std::vector<int> seen(k, 0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j].size() < 2) {
      findings.push_back("block " + std::to_string(j + 1) +
                         " has fewer than two parameters");
    }
    for (std::size_t i : blocks[j]) {
      if (i >= k) {
        findings.push_back("block " + std::to_string(j + 1) +
                           " references parameter index out of range");
      } else if (seen[i]++) {
        findings.push_back("parameter " + std::to_string(i + 1) +
                           " appears in more than one block");
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!seen[i]) {
      findings.push_back("parameter " + std::to_string(i + 1) +
                         " is missing from the partition");
    }
  }
  return findings;
}

// ---------------------------------------------------------------------------
// ParameterVector

ParameterVector::ParameterVector(std::vector<double> values,
                                 SimplexPartition partition)
    : values_(std::move(values)), partition_(std::move(partition)) {
  throw_if_findings(check(values_, partition_), "invalid parameter vector");
}

std::vector<std::string> ParameterVector::check(
    const std::vector<double>& values, const SimplexPartition& partition) {
  std::vector<std::string> findings;
  if (values.size() != partition.param_count()) {
    findings.push_back("parameter count does not match partition cover size");
    return findings;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > kThetaEps) || !(values[i] < 1.0 - kThetaEps) ||
        !std::isfinite(values[i])) {
      findings.push_back("parameter " + std::to_string(i + 1) +
                         " outside the open interval (0,1)");
    }
  }
  for (std::size_t j = 0; j < partition.block_count(); ++j) {
    double sum = 0.0;
    for (std::size_t i : partition.block(j)) sum += values[i];
    if (std::abs(sum - 1.0) > kSimplexTol) {
      findings.push_back("block " + std::to_string(j + 1) +
                         " does not sum to one (sum=" + std::to_string(sum) +
                         ")");
    }
  }
  return findings;
}

// ---------------------------------------------------------------------------
// AtomEvent

AtomEvent AtomEvent::of(std::vector<std::size_t> atoms,
                        std::size_t atom_count) {
  for (std::size_t a : atoms) {
    if (a >= atom_count) {
      throw std::out_of_range("atom index " + std::to_string(a + 1) +
                              " out of range (model has " +
                              std::to_string(atom_count) + " atoms)");
    }
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  AtomEvent e;
  e.atoms_ = std::move(atoms);
  return e;
}

AtomEvent AtomEvent::full(std::size_t atom_count) {
  std::vector<std::size_t> all(atom_count);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return of(std::move(all), atom_count);
}

bool AtomEvent::contains(std::size_t atom) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

AtomEvent AtomEvent::complement(std::size_t atom_count) const {
  std::vector<std::size_t> rest;
  rest.reserve(atom_count - atoms_.size());
  for (std::size_t a = 0; a < atom_count; ++a) {
    if (!contains(a)) rest.push_back(a);
  }
  return of(std::move(rest), atom_count);
}

AtomEvent AtomEvent::intersect(const AtomEvent& other) const {
  std::vector<std::size_t> common;
  std::set_intersection(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                        other.atoms_.end(), std::back_inserter(common));
  AtomEvent e;
  e.atoms_ = std::move(common);
  return e;
}

// ---------------------------------------------------------------------------
// MonomialModel

MonomialModel::MonomialModel(ExponentMatrix matrix, ParameterVector theta,
                             std::vector<std::string> atom_labels)
    : matrix_(std::move(matrix)),
      theta_(std::move(theta)),
      atom_labels_(std::move(atom_labels)) {
  if (atom_labels_.empty()) {
    atom_labels_.reserve(matrix_.atom_count());
    for (std::size_t y = 0; y < matrix_.atom_count(); ++y) {
      atom_labels_.push_back("atom" + std::to_string(y + 1));
    }
  }
  throw_if_findings(check(matrix_, theta_, atom_labels_), "invalid model");
}

std::vector<std::string> MonomialModel::check(
    const ExponentMatrix& matrix, const ParameterVector& theta,
    const std::vector<std::string>& labels) {
  std::vector<std::string> findings;
  if (matrix.param_count() != theta.size()) {
    findings.push_back("matrix columns do not match parameter count");
    return findings;
  }
  if (!labels.empty() && labels.size() != matrix.atom_count()) {
    findings.push_back("atom label count does not match atom count");
  }
  double mass = 0.0;
  for (std::size_t y = 0; y < matrix.atom_count(); ++y) {
    double p = 1.0;
    for (std::size_t i = 0; i < matrix.param_count(); ++i) {
      int e = matrix.at(y, i);
      if (e) p *= detail::pow_int(theta[i], e);
    }
    mass += p;
  }
  if (std::abs(mass - 1.0) > kSimplexTol) {
    findings.push_back("atomic probabilities sum to " + std::to_string(mass) +
                       ", not 1");
  }
  return findings;
}

double MonomialModel::atomic_probability(std::size_t atom) const {
  if (atom >= atom_count()) {
    throw std::out_of_range("atom index " + std::to_string(atom + 1) +
                            " out of range");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < param_count(); ++i) {
    int e = matrix_.at(atom, i);
    if (e) p *= detail::pow_int(theta_[i], e);
  }
  return p;
}

double MonomialModel::event_probability(const AtomEvent& event) const {
  if (event.empty()) {
    throw std::invalid_argument("event probability of an empty event");
  }
  double sum = 0.0;
  for (std::size_t a : event.atoms()) sum += atomic_probability(a);
  return sum;
}

std::vector<double> MonomialModel::atom_probabilities() const {
  std::vector<double> probs(atom_count());
  for (std::size_t y = 0; y < atom_count(); ++y) {
    probs[y] = atomic_probability(y);
  }
  return probs;
}

bool MonomialModel::is_multilinear() const { return matrix_.max_entry() <= 1; }

SupportSplit MonomialModel::support_split(std::size_t block) const {
  const auto& cols = partition().block(block);
  SupportSplit split;
  for (std::size_t y = 0; y < atom_count(); ++y) {
    bool uses_block = false;
    for (std::size_t i : cols) {
      if (matrix_.at(y, i) != 0) {
        uses_block = true;
        break;
      }
    }
    (uses_block ? split.support_atoms : split.zero_atoms).push_back(y);
  }
  return split;
}

int MonomialModel::block_exponent_sum(std::size_t atom,
                                      std::size_t block) const {
  if (atom >= atom_count()) {
    throw std::out_of_range("atom index out of range");
  }
  int sum = 0;
  for (std::size_t i : partition().block(block)) sum += matrix_.at(atom, i);
  return sum;
}

std::size_t MonomialModel::atom_index_of(const std::string& label) const {
  for (std::size_t y = 0; y < atom_labels_.size(); ++y) {
    if (atom_labels_[y] == label) return y;
  }
  // Collect the closest labels to help diagnose typos.
  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& candidate : atom_labels_) {
    ranked.emplace_back(levenshtein(label, candidate), candidate);
  }
  std::sort(ranked.begin(), ranked.end());
  std::string msg = "unknown atom label '" + label + "'";
  if (!ranked.empty()) {
    msg += "; closest matches:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
      msg += " '" + ranked[i].second + "'";
    }
  }
  throw std::invalid_argument(msg);
}

}  // namespace monosens

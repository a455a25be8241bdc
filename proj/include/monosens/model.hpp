#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace monosens {

// Open-interval margin for probability parameters.
inline constexpr double kThetaEps = 1e-12;
// Tolerance for block simplex sums and total atomic mass.
inline constexpr double kSimplexTol = 1e-9;

// Thrown when a model, tree or parameter vector fails its invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Integer-exponent power by repeated squaring.
inline double pow_int(double base, int exp) {
  double result = 1.0;
  double b = base;
  int e = exp;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

}  // namespace detail

// Dense q x k matrix of nonnegative integer exponents, one row per atom.
class ExponentMatrix {
 public:
  ExponentMatrix(std::size_t atom_count, std::size_t param_count,
                 std::vector<int> entries);

  static ExponentMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t atom_count() const { return atoms_; }
  std::size_t param_count() const { return params_; }

  int at(std::size_t atom, std::size_t param) const {
    return entries_[atom * params_ + param];
  }

  const std::vector<int>& entries() const { return entries_; }
  int max_entry() const;

  bool operator==(const ExponentMatrix&) const = default;

  // Returns human-readable findings; empty means the invariants hold.
  static std::vector<std::string> check(std::size_t atom_count,
                                        std::size_t param_count,
                                        const std::vector<int>& entries);

 private:
  std::size_t atoms_ = 0;
  std::size_t params_ = 0;
  std::vector<int> entries_;
};

// Ordered partition of the parameter index set into simplex blocks.
class SimplexPartition {
 public:
  explicit SimplexPartition(std::vector<std::vector<std::size_t>> blocks);

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t param_count() const { return block_of_.size(); }
  const std::vector<std::size_t>& block(std::size_t j) const {
    return blocks_.at(j);
  }
  const std::vector<std::vector<std::size_t>>& blocks() const {
    return blocks_;
  }
  std::size_t block_of(std::size_t param) const { return block_of_.at(param); }

  bool operator==(const SimplexPartition&) const = default;

  static std::vector<std::string> check(
      const std::vector<std::vector<std::size_t>>& blocks);

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

// Positive parameter vector whose blocks each lie in the open simplex.
class ParameterVector {
 public:
  ParameterVector(std::vector<double> values, SimplexPartition partition);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const SimplexPartition& partition() const { return partition_; }

  bool operator==(const ParameterVector&) const = default;

  static std::vector<std::string> check(const std::vector<double>& values,
                                        const SimplexPartition& partition);

 private:
  std::vector<double> values_;
  SimplexPartition partition_;
};

// Subset of atom indices over which probabilities are aggregated.
class AtomEvent {
 public:
  AtomEvent() = default;

  // Sorts, deduplicates and range-checks the indices. Empty events are
  // representable; probability queries reject them.
  static AtomEvent of(std::vector<std::size_t> atoms, std::size_t atom_count);
  static AtomEvent full(std::size_t atom_count);

  const std::vector<std::size_t>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  bool contains(std::size_t atom) const;

  AtomEvent complement(std::size_t atom_count) const;
  AtomEvent intersect(const AtomEvent& other) const;

 private:
  std::vector<std::size_t> atoms_;
};

struct SupportSplit {
  std::vector<std::size_t> zero_atoms;     // no block parameter appears
  std::vector<std::size_t> support_atoms;  // some block exponent is nonzero
};

// Discrete model whose atomic probabilities are monomials in theta.
class MonomialModel {
 public:
  MonomialModel(ExponentMatrix matrix, ParameterVector theta,
                std::vector<std::string> atom_labels = {});

  std::size_t atom_count() const { return matrix_.atom_count(); }
  std::size_t param_count() const { return matrix_.param_count(); }
  const ExponentMatrix& matrix() const { return matrix_; }
  const ParameterVector& theta() const { return theta_; }
  const SimplexPartition& partition() const { return theta_.partition(); }
  const std::vector<std::string>& atom_labels() const { return atom_labels_; }

  double atomic_probability(std::size_t atom) const;
  double event_probability(const AtomEvent& event) const;
  std::vector<double> atom_probabilities() const;

  bool is_multilinear() const;
  SupportSplit support_split(std::size_t block) const;
  int block_exponent_sum(std::size_t atom, std::size_t block) const;

  // Resolves an atom label to its index; throws with near-matches listed.
  std::size_t atom_index_of(const std::string& label) const;

  static std::vector<std::string> check(const ExponentMatrix& matrix,
                                        const ParameterVector& theta,
                                        const std::vector<std::string>& labels);

 private:
  ExponentMatrix matrix_;
  ParameterVector theta_;
  std::vector<std::string> atom_labels_;
};

}  // namespace monosens

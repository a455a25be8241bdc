#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monosens/model.hpp"

namespace monosens {

// One parameter fixed to a new value; the rest of its block covaries.
struct VariationTarget {
  std::size_t param_index = 0;  // 0-based
  double new_value = 0.0;       // in (0,1)
};

struct LinearCoefficients {
  // Affine maps theta_k -> gamma_k * x + delta_k for k in the target's
  // block minus the target itself, ordered by ascending parameter index.
  std::vector<double> gamma;
  std::vector<double> delta;
};

// Rule reassigning the residual block mass after a single variation.
class CovariationScheme {
 public:
  enum class Kind { Proportional, Uniform, Linear };

  static CovariationScheme proportional();
  static CovariationScheme uniform();
  // General affine scheme; must satisfy sum(gamma) = -1, sum(delta) = 1.
  static CovariationScheme linear(LinearCoefficients coefficients);
  // delta_k = -gamma_k family: each off-target parameter receives a fixed
  // share of the remaining mass. Shares must be positive and sum to one.
  static CovariationScheme mass_proportion(std::vector<double> shares);

  // Accepts "proportional", "uniform", "linear:d1,d2,..." and
  // "linear-full:g1,g2,...;d1,d2,...".
  static CovariationScheme parse(const std::string& spec);

  Kind kind() const { return kind_; }
  bool is_mass_proportion() const { return mass_proportion_; }
  const LinearCoefficients& coefficients() const { return coefficients_; }
  std::string name() const;

 private:
  CovariationScheme(Kind kind, LinearCoefficients coefficients,
                    bool mass_proportion)
      : kind_(kind),
        coefficients_(std::move(coefficients)),
        mass_proportion_(mass_proportion) {}

  Kind kind_;
  LinearCoefficients coefficients_;  // Linear only
  bool mass_proportion_ = false;
};

struct LinearCheck {
  bool valid = true;
  std::vector<std::string> violations;
};

// Closed (lo, hi) range of target values the scheme can be applied at.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double x) const { return x > lo && x < hi; }
};

// Produces the full varied vector: target fixed, block covaried per the
// scheme, all other blocks untouched. Throws if any covaried parameter
// leaves (0,1) or a linear scheme breaks the sum-to-one identity.
ParameterVector apply_scheme(const ParameterVector& theta,
                             const VariationTarget& target,
                             const CovariationScheme& scheme);

// Expresses proportional/uniform as the equivalent affine coefficients at
// the given theta; linear schemes pass through unchanged.
LinearCoefficients scheme_as_linear(const CovariationScheme& scheme,
                                    const ParameterVector& theta,
                                    const VariationTarget& target);

// Checks sum(gamma) = -1 and sum(delta) = 1 (the sum-to-one identity as a
// polynomial in the varied value) plus range feasibility at the target.
LinearCheck validate_linear(const LinearCoefficients& coefficients,
                            const ParameterVector& theta,
                            const VariationTarget& target);

// Target values for which every covaried parameter stays inside (0,1).
Interval feasible_interval(const CovariationScheme& scheme,
                           const ParameterVector& theta,
                           const VariationTarget& target);

}  // namespace monosens

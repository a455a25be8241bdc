#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monosens/covariation.hpp"
#include "monosens/model.hpp"

namespace monosens {

struct PolynomialMetadata {
  std::string model;
  std::string event;
  std::size_t target_param = 0;  // 0-based
  std::string scheme;
};

// Event probability as an explicit univariate polynomial in the varied
// parameter, valid on the scheme's feasible interval.
class SensitivityPolynomial {
 public:
  SensitivityPolynomial(std::vector<double> coefficients, Interval feasible,
                        PolynomialMetadata meta = {});

  // Highest index with a nonzero coefficient (zero-padded tails ignored).
  std::size_t degree() const;
  const std::vector<double>& coefficients() const { return coefficients_; }
  const Interval& feasible() const { return feasible_; }
  const PolynomialMetadata& metadata() const { return meta_; }

  double evaluate(double theta_tilde) const;  // throws outside feasibility

 private:
  std::vector<double> coefficients_;  // ascending powers
  Interval feasible_;
  PolynomialMetadata meta_;
};

// Conditional sensitivity: a ratio of two sensitivity polynomials.
struct RationalSensitivity {
  SensitivityPolynomial numerator;
  SensitivityPolynomial denominator;
  double evaluate(double theta_tilde) const {
    return numerator.evaluate(theta_tilde) / denominator.evaluate(theta_tilde);
  }
};

// Event probability after covarying at the target; equals the event
// probability of the varied model.
double sensitivity_value(const MonomialModel& model, const AtomEvent& event,
                         const VariationTarget& target,
                         const CovariationScheme& scheme);

// Exact coefficient expansion of the sensitivity function for the
// proportional / uniform / linear scheme families.
SensitivityPolynomial sensitivity_polynomial(const MonomialModel& model,
                                             const AtomEvent& event,
                                             const VariationTarget& target,
                                             const CovariationScheme& scheme);

// Largest block exponent sum over the event: the degree bound of any
// sensitivity polynomial for a block-j variation.
int degree_bound(const MonomialModel& model, const AtomEvent& event,
                 std::size_t block);

// sigma(P)(E | C) as numerator/denominator polynomials. An empty
// intersection yields the zero polynomial; an empty condition throws.
RationalSensitivity conditional_sensitivity(const MonomialModel& model,
                                            const AtomEvent& event,
                                            const AtomEvent& condition,
                                            const VariationTarget& target,
                                            const CovariationScheme& scheme);

struct SweepRow {
  double theta_tilde = 0.0;
  double value = 0.0;
  bool feasible = true;
};

// Evaluates the sensitivity function over a grid of target values;
// infeasible points are flagged per row rather than aborting the sweep.
std::vector<SweepRow> sweep(const MonomialModel& model, const AtomEvent& event,
                            std::size_t target_param,
                            const CovariationScheme& scheme,
                            const std::vector<double>& grid);

// n equispaced interior points k/(n+1), k = 1..n. The 199-point default
// covers {0.005, 0.010, ..., 0.995}.
std::vector<double> default_grid(std::size_t n = 199);

}  // namespace monosens

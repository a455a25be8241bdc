#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "monosens/covariation.hpp"
#include "monosens/divergence.hpp"
#include "monosens/model.hpp"

namespace monosens {

struct Cor4Check {
  bool holds = false;
  std::vector<std::size_t> violating_atoms;  // support atoms with sum >= 2
};

// True iff every support atom of the block has block exponent sum exactly 1,
// the hypothesis under which proportional covariation is CD-optimal.
Cor4Check check_cor4_condition(const MonomialModel& model, std::size_t block);

struct OptimalityVerdict {
  bool condition_holds = false;
  double proportional_cd = 0.0;
  double best_found_cd = 0.0;
  CovariationScheme best_scheme = CovariationScheme::proportional();
  std::size_t samples_tested = 0;
  std::uint64_t seed = 0;
};

// Samples n mass-reallocation schemes (random simplex shares for the
// covarying block) plus uniform and proportional, and returns the CD
// minimizer. Deterministic for a fixed seed; ties resolved by sample order.
OptimalityVerdict search_schemes(const MonomialModel& model,
                                 const VariationTarget& target,
                                 std::size_t n_samples, std::uint64_t seed);

// Recomputes every atomic probability from scratch by plain repeated
// multiplication; kept free of the closed-form code paths on purpose so it
// can act as an independent check on them.
std::vector<double> oracle_varied_distribution(
    const MonomialModel& model, const ParameterVector& theta_varied);

namespace detail {

// Deterministic uniform variate in [0,1) from the top 53 bits; avoids the
// implementation-defined std distributions.
double uniform01(std::uint64_t raw);

}  // namespace detail

}  // namespace monosens

#include "monosens/optimality.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace monosens {

namespace detail {

double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace detail

Cor4Check check_cor4_condition(const MonomialModel& model, std::size_t block) {
  if (block >= model.partition().block_count()) {
    throw std::out_of_range("block index out of range");
  }
  Cor4Check result;
  for (std::size_t y : model.support_split(block).support_atoms) {
    if (model.block_exponent_sum(y, block) > 1) {
      result.violating_atoms.push_back(y);
    }
  }
  result.holds = result.violating_atoms.empty();
  return result;
}

OptimalityVerdict search_schemes(const MonomialModel& model,
                                 const VariationTarget& target,
                                 std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  std::size_t j = model.partition().block_of(target.param_index);
  std::size_t rest_size = model.partition().block(j).size() - 1;

  OptimalityVerdict verdict;
  verdict.seed = seed;
  verdict.condition_holds = check_cor4_condition(model, j).holds;

  auto cd_of = [&](const CovariationScheme& scheme) {
    ParameterVector varied = apply_scheme(model.theta(), target, scheme);
    return cd_distance_full(model, varied).value;
  };

  verdict.proportional_cd = cd_of(CovariationScheme::proportional());
  verdict.best_found_cd = verdict.proportional_cd;
  verdict.best_scheme = CovariationScheme::proportional();
  verdict.samples_tested = 1;

  auto consider = [&](const CovariationScheme& scheme) {
    double cd = cd_of(scheme);
    ++verdict.samples_tested;
    if (cd < verdict.best_found_cd) {
      verdict.best_found_cd = cd;
      verdict.best_scheme = scheme;
    }
  };

  consider(CovariationScheme::uniform());

  // Random shares on the residual-mass simplex via normalized exponentials,
  // the Dirichlet(1,...,1) construction.
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::vector<double> shares(rest_size);
    double total = 0.0;
    for (double& share : shares) {
      double u = detail::uniform01(rng());
      share = -std::log1p(-u) + 1e-6;  // keep shares strictly positive
      total += share;
    }
    for (double& share : shares) share /= total;
    try {
      consider(CovariationScheme::mass_proportion(shares));
    } catch (const std::domain_error&) {
      // A share so small the covaried value leaves (0,1); skip the sample.
      ++verdict.samples_tested;
    }
  }
  return verdict;
}

std::vector<double> oracle_varied_distribution(
    const MonomialModel& model, const ParameterVector& theta_varied) {
  if (theta_varied.size() != model.param_count() ||
      !(theta_varied.partition() == model.partition())) {
    throw std::invalid_argument(
        "varied parameter vector does not match the model's shape");
  }
  std::vector<double> probs(model.atom_count(), 1.0);
  for (std::size_t y = 0; y < model.atom_count(); ++y) {
    for (std::size_t i = 0; i < model.param_count(); ++i) {
      for (int t = 0; t < model.matrix().at(y, i); ++t) {
        probs[y] *= theta_varied[i];
      }
    }
  }
  return probs;
}

}  // namespace monosens

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monosens/covariation.hpp"
#include "monosens/model.hpp"

namespace monosens {

// Convex generator of a phi-divergence: phi(1) = 0, convex on [0, inf).
// All divergences here use the natural logarithm.
class PhiFunction {
 public:
  static PhiFunction kl();               // x ln x
  static PhiFunction inverse_kl();       // -ln x
  static PhiFunction total_variation();  // |x - 1| / 2
  static PhiFunction chi_squared();      // (x - 1)^2

  // User-supplied map; phi(1) = 0 and convexity are spot-checked on a grid.
  static PhiFunction custom(std::string name, std::function<double(double)> fn,
                            double limit_at_infinity);

  static PhiFunction by_name(const std::string& name);  // kl, inv-kl, tv, chi2

  double operator()(double x) const { return fn_(x); }

  // One summand p * phi(p_varied / p), honoring the 0 phi(0/0) = 0 and
  // 0 phi(x/0) = x * lim phi(t)/t conventions.
  double term(double p, double p_varied) const;

  const std::string& name() const { return name_; }
  double limit_at_infinity() const { return limit_; }

 private:
  PhiFunction(std::string name, std::function<double(double)> fn, double limit)
      : name_(std::move(name)), fn_(std::move(fn)), limit_(limit) {}

  std::string name_;
  std::function<double(double)> fn_;
  double limit_ = 0.0;  // lim_{x->inf} phi(x)/x, may be +inf
};

enum class ComputePath { BruteForce, ClosedForm };

struct DivergenceReport {
  double value = 0.0;
  // Atoms achieving the extremal probability ratios (CD only, -1 otherwise);
  // ties resolved to the lowest atom index.
  std::ptrdiff_t argmax_atom = -1;
  std::ptrdiff_t argmin_atom = -1;
  ComputePath path = ComputePath::BruteForce;
};

// CD distance over all atoms: ln max ratio - ln min ratio of varied to
// original atomic probabilities.
DivergenceReport cd_distance_full(const MonomialModel& model,
                                  const ParameterVector& theta_varied);

// CD distance from block-ratio monomials over the block's support atoms
// only; off-block factors cancel atom by atom.
DivergenceReport cd_distance_block(const MonomialModel& model,
                                   const VariationTarget& target,
                                   const CovariationScheme& scheme);

// Closed forms available when every support atom has block exponent sum
// exactly one; refuses otherwise, naming a violating atom.
DivergenceReport cd_corollary4(const MonomialModel& model,
                               const VariationTarget& target,
                               const CovariationScheme& scheme);

// Full-definition phi-divergence sum over all atoms.
DivergenceReport phi_divergence_full(const MonomialModel& model,
                                     const ParameterVector& theta_varied,
                                     const PhiFunction& phi);

// Restricted sum over the block's support atoms; the omitted terms all
// have unit ratio and phi(1) = 0.
DivergenceReport phi_divergence_block(const MonomialModel& model,
                                      const VariationTarget& target,
                                      const CovariationScheme& scheme,
                                      const PhiFunction& phi);

// A divergence selector: the CD distance or a named phi-divergence.
struct Measure {
  static Measure cd();
  static Measure phi(PhiFunction fn);
  static Measure by_name(const std::string& name);  // cd or a phi name

  std::string name;
  bool is_cd = false;
  std::optional<PhiFunction> fn;  // empty for CD
};

struct DivergenceSweepRow {
  double theta_tilde = 0.0;
  std::string scheme;
  std::string measure;
  double value = 0.0;
  bool feasible = true;
};

// One row per (grid point, scheme, measure), in that nesting order.
std::vector<DivergenceSweepRow> divergence_sweep(
    const MonomialModel& model, std::size_t target_param,
    const std::vector<CovariationScheme>& schemes,
    const std::vector<Measure>& measures, const std::vector<double>& grid);

}  // namespace monosens

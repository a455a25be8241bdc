#include "monosens/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace monosens {

namespace {

constexpr double kPhiTol = 1e-12;

void check_shapes(const MonomialModel& model,
                  const ParameterVector& theta_varied) {
  if (theta_varied.size() != model.param_count() ||
      !(theta_varied.partition() == model.partition())) {
    throw std::invalid_argument(
        "varied parameter vector does not match the model's shape");
  }
}

// Per-atom log probability ratios accumulated in the log domain over the
// given columns: sum_i A[y][i] * (ln varied_i - ln original_i).
std::vector<double> log_ratios(const MonomialModel& model,
                               const ParameterVector& theta_varied,
                               const std::vector<std::size_t>& cols,
                               const std::vector<std::size_t>& atoms) {
  std::vector<double> dlog(model.param_count(), 0.0);
  for (std::size_t i : cols) {
    dlog[i] = std::log(theta_varied[i]) - std::log(model.theta()[i]);
  }
  std::vector<double> out;
  out.reserve(atoms.size());
  for (std::size_t y : atoms) {
    double r = 0.0;
    for (std::size_t i : cols) {
      int e = model.matrix().at(y, i);
      if (e) r += static_cast<double>(e) * dlog[i];
    }
    out.push_back(r);
  }
  return out;
}

DivergenceReport extrema_report(const std::vector<double>& log_ratio,
                                const std::vector<std::size_t>& atoms,
                                ComputePath path) {
  DivergenceReport report;
  report.path = path;
  std::size_t arg_max = 0, arg_min = 0;
  for (std::size_t t = 1; t < log_ratio.size(); ++t) {
    if (log_ratio[t] > log_ratio[arg_max]) arg_max = t;
    if (log_ratio[t] < log_ratio[arg_min]) arg_min = t;
  }
  report.value = log_ratio[arg_max] - log_ratio[arg_min];
  report.argmax_atom = static_cast<std::ptrdiff_t>(atoms[arg_max]);
  report.argmin_atom = static_cast<std::ptrdiff_t>(atoms[arg_min]);
  return report;
}

std::vector<std::size_t> all_atoms(const MonomialModel& model) {
  std::vector<std::size_t> atoms(model.atom_count());
  for (std::size_t y = 0; y < atoms.size(); ++y) atoms[y] = y;
  return atoms;
}

std::vector<std::size_t> all_params(const MonomialModel& model) {
  std::vector<std::size_t> params(model.param_count());
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = i;
  return params;
}

}  // namespace

// ---------------------------------------------------------------------------
// PhiFunction

PhiFunction PhiFunction::kl() {
  return PhiFunction(
      "kl", [](double x) { return x <= 0.0 ? 0.0 : x * std::log(x); },
      std::numeric_limits<double>::infinity());
}

PhiFunction PhiFunction::inverse_kl() {
  return PhiFunction("inv-kl", [](double x) { return -std::log(x); }, 0.0);
}

PhiFunction PhiFunction::total_variation() {
  return PhiFunction("tv", [](double x) { return std::abs(x - 1.0) / 2.0; },
                     0.5);
}

PhiFunction PhiFunction::chi_squared() {
  return PhiFunction("chi2",
                     [](double x) { return (x - 1.0) * (x - 1.0); },
                     std::numeric_limits<double>::infinity());
}

PhiFunction PhiFunction::custom(std::string name,
                                std::function<double(double)> fn,
                                double limit_at_infinity) {
  if (std::abs(fn(1.0)) > kPhiTol) {
    throw std::invalid_argument("phi(1) must be 0 for '" + name + "'");
  }
  // Midpoint convexity spot-check on a coarse grid.
  for (double a = 0.125; a < 8.0; a *= 2.0) {
    for (double b = a; b < 8.0; b *= 2.0) {
      double mid = fn((a + b) / 2.0);
      if (mid > (fn(a) + fn(b)) / 2.0 + 1e-9) {
        throw std::invalid_argument("phi '" + name +
                                    "' fails the convexity spot-check");
      }
    }
  }
  return PhiFunction(std::move(name), std::move(fn), limit_at_infinity);
}

PhiFunction PhiFunction::by_name(const std::string& name) {
  if (name == "kl") return kl();
  if (name == "inv-kl") return inverse_kl();
  if (name == "tv") return total_variation();
  if (name == "chi2") return chi_squared();
  throw std::invalid_argument("unknown phi-divergence '" + name +
                              "' (expected kl, inv-kl, tv or chi2)");
}

double PhiFunction::term(double p, double p_varied) const {
  if (p > 0.0) return p * fn_(p_varied / p);
  if (p_varied == 0.0) return 0.0;  // 0 phi(0/0) = 0
  return p_varied * limit_;         // 0 phi(x/0) = x lim phi(t)/t
}

// ---------------------------------------------------------------------------
// CD distance

DivergenceReport cd_distance_full(const MonomialModel& model,
                                  const ParameterVector& theta_varied) {
  check_shapes(model, theta_varied);
  auto atoms = all_atoms(model);
  auto ratios = log_ratios(model, theta_varied, all_params(model), atoms);
  return extrema_report(ratios, atoms, ComputePath::BruteForce);
}

DivergenceReport cd_distance_block(const MonomialModel& model,
                                   const VariationTarget& target,
                                   const CovariationScheme& scheme) {
  ParameterVector varied = apply_scheme(model.theta(), target, scheme);
  std::size_t j = model.partition().block_of(target.param_index);
  auto support = model.support_split(j).support_atoms;
  // Support ratios straddle 1 (varied and original block masses both sum to
  // one), so restricting to the support loses neither extremum.
  auto ratios = log_ratios(model, varied, model.partition().block(j), support);
  return extrema_report(ratios, support, ComputePath::ClosedForm);
}

DivergenceReport cd_corollary4(const MonomialModel& model,
                               const VariationTarget& target,
                               const CovariationScheme& scheme) {
  std::size_t i = target.param_index;
  std::size_t j = model.partition().block_of(i);
  auto split = model.support_split(j);
  for (std::size_t y : split.support_atoms) {
    if (model.block_exponent_sum(y, j) > 1) {
      throw std::domain_error(
          "closed form requires block exponent sums of at most 1; atom '" +
          model.atom_labels()[y] + "' (index " + std::to_string(y + 1) +
          ") has sum " + std::to_string(model.block_exponent_sum(y, j)));
    }
  }

  const auto& block = model.partition().block(j);
  double theta_i = model.theta()[i];
  double x = target.new_value;

  DivergenceReport report;
  report.path = ComputePath::ClosedForm;
  switch (scheme.kind()) {
    case CovariationScheme::Kind::Proportional:
      report.value = std::abs(std::log(x / theta_i) -
                              std::log((1.0 - x) / (1.0 - theta_i)));
      return report;
    case CovariationScheme::Kind::Uniform: {
      double m1 = static_cast<double>(block.size() - 1);
      double min_rest = 1.0, max_rest = 0.0;
      for (std::size_t k : block) {
        if (k == i) continue;
        min_rest = std::min(min_rest, model.theta()[k]);
        max_rest = std::max(max_rest, model.theta()[k]);
      }
      double hi = std::max(x / theta_i, (1.0 - x) / (m1 * min_rest));
      double lo = std::min(x / theta_i, (1.0 - x) / (m1 * max_rest));
      report.value = std::log(hi) - std::log(lo);
      return report;
    }
    case CovariationScheme::Kind::Linear: {
      if (scheme.is_mass_proportion()) {
        // Shares are matched against the covarying indices in ascending
        // order, the same pairing apply_scheme uses.
        const auto& shares = scheme.coefficients().delta;
        std::vector<std::size_t> rest;
        for (std::size_t p : block) {
          if (p != i) rest.push_back(p);
        }
        std::sort(rest.begin(), rest.end());
        if (shares.size() != rest.size()) {
          throw std::invalid_argument(
              "scheme share count does not match the covarying block");
        }
        double min_scaled = std::numeric_limits<double>::infinity();
        double max_scaled = 0.0;
        for (std::size_t k = 0; k < rest.size(); ++k) {
          double scaled = model.theta()[rest[k]] / shares[k];
          min_scaled = std::min(min_scaled, scaled);
          max_scaled = std::max(max_scaled, scaled);
        }
        double hi = std::max(x / theta_i, (1.0 - x) / min_scaled);
        double lo = std::min(x / theta_i, (1.0 - x) / max_scaled);
        report.value = std::log(hi) - std::log(lo);
        return report;
      }
      // General affine scheme: extremal parameter ratios over the block.
      ParameterVector varied = apply_scheme(model.theta(), target, scheme);
      double hi = -std::numeric_limits<double>::infinity();
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t p : block) {
        double r = varied[p] / model.theta()[p];
        hi = std::max(hi, r);
        lo = std::min(lo, r);
      }
      report.value = std::log(hi) - std::log(lo);
      return report;
    }
  }
  throw std::logic_error("unreachable scheme kind");
}

// ---------------------------------------------------------------------------
// phi-divergences

DivergenceReport phi_divergence_full(const MonomialModel& model,
                                     const ParameterVector& theta_varied,
                                     const PhiFunction& phi) {
  check_shapes(model, theta_varied);
  double sum = 0.0;
  for (std::size_t y = 0; y < model.atom_count(); ++y) {
    double p = model.atomic_probability(y);
    double p_varied = 1.0;
    for (std::size_t i = 0; i < model.param_count(); ++i) {
      int e = model.matrix().at(y, i);
      if (e) p_varied *= detail::pow_int(theta_varied[i], e);
    }
    sum += phi.term(p, p_varied);
  }
  DivergenceReport report;
  report.value = sum;
  report.path = ComputePath::BruteForce;
  return report;
}

DivergenceReport phi_divergence_block(const MonomialModel& model,
                                      const VariationTarget& target,
                                      const CovariationScheme& scheme,
                                      const PhiFunction& phi) {
  ParameterVector varied = apply_scheme(model.theta(), target, scheme);
  std::size_t j = model.partition().block_of(target.param_index);
  auto support = model.support_split(j).support_atoms;
  auto ratios = log_ratios(model, varied, model.partition().block(j), support);
  double sum = 0.0;
  for (std::size_t t = 0; t < support.size(); ++t) {
    sum += model.atomic_probability(support[t]) * phi(std::exp(ratios[t]));
  }
  DivergenceReport report;
  report.value = sum;
  report.path = ComputePath::ClosedForm;
  return report;
}

// ---------------------------------------------------------------------------
// Measures and sweeps

Measure Measure::cd() {
  Measure m;
  m.name = "cd";
  m.is_cd = true;
  return m;
}

Measure Measure::phi(PhiFunction fn) {
  Measure m;
  m.name = fn.name();
  m.fn = std::move(fn);
  return m;
}

Measure Measure::by_name(const std::string& name) {
  if (name == "cd") return cd();
  return phi(PhiFunction::by_name(name));
}

std::vector<DivergenceSweepRow> divergence_sweep(
    const MonomialModel& model, std::size_t target_param,
    const std::vector<CovariationScheme>& schemes,
    const std::vector<Measure>& measures, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty sweep grid");
  if (schemes.empty()) throw std::invalid_argument("no schemes to sweep");
  if (measures.empty()) throw std::invalid_argument("no measures to sweep");

  std::vector<DivergenceSweepRow> rows;
  rows.reserve(grid.size() * schemes.size() * measures.size());
  for (double x : grid) {
    for (const auto& scheme : schemes) {
      VariationTarget target{target_param, x};
      bool feasible = true;
      try {
        apply_scheme(model.theta(), target, scheme);
      } catch (const std::domain_error&) {
        feasible = false;
      }
      for (const auto& measure : measures) {
        DivergenceSweepRow row;
        row.theta_tilde = x;
        row.scheme = scheme.name();
        row.measure = measure.name;
        if (!feasible) {
          row.feasible = false;
          row.value = std::nan("");
        } else if (measure.is_cd) {
          row.value = cd_distance_block(model, target, scheme).value;
        } else {
          row.value =
              phi_divergence_block(model, target, scheme, *measure.fn).value;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace monosens

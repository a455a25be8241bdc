#include "monosens/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monosens {

namespace {

// (gamma*x + delta)^m expanded by the binomial theorem, ascending powers.
std::vector<double> linear_power(double gamma, double delta, int m) {
  std::vector<double> coeffs(static_cast<std::size_t>(m) + 1, 0.0);
  double binom = 1.0;  // C(m, t), exact in double for the degrees seen here
  for (int t = 0; t <= m; ++t) {
    coeffs[static_cast<std::size_t>(t)] =
        binom * detail::pow_int(gamma, t) * detail::pow_int(delta, m - t);
    binom = binom * static_cast<double>(m - t) / static_cast<double>(t + 1);
  }
  return coeffs;
}

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

void add_into(std::vector<double>& acc, const std::vector<double>& term) {
  if (term.size() > acc.size()) acc.resize(term.size(), 0.0);
  for (std::size_t i = 0; i < term.size(); ++i) acc[i] += term[i];
}

std::string event_description(const AtomEvent& event) {
  std::string out;
  for (std::size_t i = 0; i < event.atoms().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(event.atoms()[i] + 1);
  }
  return out;
}

}  // namespace

SensitivityPolynomial::SensitivityPolynomial(std::vector<double> coefficients,
                                             Interval feasible,
                                             PolynomialMetadata meta)
    : coefficients_(std::move(coefficients)),
      feasible_(feasible),
      meta_(std::move(meta)) {
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

std::size_t SensitivityPolynomial::degree() const {
  std::size_t d = coefficients_.size() - 1;
  while (d > 0 && coefficients_[d] == 0.0) --d;
  return d;
}

double SensitivityPolynomial::evaluate(double theta_tilde) const {
  if (!feasible_.contains(theta_tilde)) {
    throw std::domain_error("evaluation point " + std::to_string(theta_tilde) +
                            " outside the scheme's feasible interval");
  }
  double value = 0.0;
  for (std::size_t i = coefficients_.size(); i-- > 0;) {
    value = value * theta_tilde + coefficients_[i];
  }
  return value;
}

double sensitivity_value(const MonomialModel& model, const AtomEvent& event,
                         const VariationTarget& target,
                         const CovariationScheme& scheme) {
  if (event.empty()) {
    throw std::invalid_argument("sensitivity of an empty event");
  }
  ParameterVector varied = apply_scheme(model.theta(), target, scheme);
  double sum = 0.0;
  for (std::size_t y : event.atoms()) {
    double p = 1.0;
    for (std::size_t i = 0; i < model.param_count(); ++i) {
      int e = model.matrix().at(y, i);
      if (e) p *= detail::pow_int(varied[i], e);
    }
    sum += p;
  }
  return sum;
}

SensitivityPolynomial sensitivity_polynomial(const MonomialModel& model,
                                             const AtomEvent& event,
                                             const VariationTarget& target,
                                             const CovariationScheme& scheme) {
  if (event.empty()) {
    throw std::invalid_argument("sensitivity of an empty event");
  }
  const auto& partition = model.partition();
  std::size_t i = target.param_index;
  if (i >= model.param_count()) {
    throw std::out_of_range("target parameter index out of range");
  }
  std::size_t j = partition.block_of(i);

  LinearCoefficients coeff = scheme_as_linear(scheme, model.theta(), target);
  std::vector<std::size_t> rest;
  for (std::size_t k : partition.block(j)) {
    if (k != i) rest.push_back(k);
  }
  std::sort(rest.begin(), rest.end());
  if (coeff.gamma.size() != rest.size()) {
    throw std::invalid_argument(
        "scheme coefficient count does not match the covarying block");
  }

  std::vector<double> acc{0.0};
  for (std::size_t y : event.atoms()) {
    // Off-block parameters stay fixed and contribute a constant factor.
    double fixed = 1.0;
    for (std::size_t p = 0; p < model.param_count(); ++p) {
      if (partition.block_of(p) == j) continue;
      int e = model.matrix().at(y, p);
      if (e) fixed *= detail::pow_int(model.theta()[p], e);
    }
    std::vector<double> term{fixed};
    int target_exp = model.matrix().at(y, i);
    if (target_exp > 0) {
      // Multiply by x^target_exp.
      term.insert(term.begin(), static_cast<std::size_t>(target_exp), 0.0);
    }
    for (std::size_t k = 0; k < rest.size(); ++k) {
      int e = model.matrix().at(y, rest[k]);
      if (e) {
        term = convolve(term, linear_power(coeff.gamma[k], coeff.delta[k], e));
      }
    }
    add_into(acc, term);
  }

  PolynomialMetadata meta;
  meta.event = event_description(event);
  meta.target_param = i;
  meta.scheme = scheme.name();
  return SensitivityPolynomial(
      std::move(acc), feasible_interval(scheme, model.theta(), target),
      std::move(meta));
}

int degree_bound(const MonomialModel& model, const AtomEvent& event,
                 std::size_t block) {
  int bound = 0;
  for (std::size_t y : event.atoms()) {
    bound = std::max(bound, model.block_exponent_sum(y, block));
  }
  return bound;
}

RationalSensitivity conditional_sensitivity(const MonomialModel& model,
                                            const AtomEvent& event,
                                            const AtomEvent& condition,
                                            const VariationTarget& target,
                                            const CovariationScheme& scheme) {
  if (condition.empty()) {
    throw std::invalid_argument("conditional sensitivity on an empty condition");
  }
  SensitivityPolynomial denominator =
      sensitivity_polynomial(model, condition, target, scheme);
  AtomEvent both = event.intersect(condition);
  if (both.empty()) {
    PolynomialMetadata meta;
    meta.event = "";
    meta.target_param = target.param_index;
    meta.scheme = scheme.name();
    SensitivityPolynomial zero({0.0}, denominator.feasible(), std::move(meta));
    return RationalSensitivity{std::move(zero), std::move(denominator)};
  }
  SensitivityPolynomial numerator =
      sensitivity_polynomial(model, both, target, scheme);
  return RationalSensitivity{std::move(numerator), std::move(denominator)};
}

std::vector<SweepRow> sweep(const MonomialModel& model, const AtomEvent& event,
                            std::size_t target_param,
                            const CovariationScheme& scheme,
                            const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty sweep grid");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    SweepRow row;
    row.theta_tilde = x;
    try {
      row.value =
          sensitivity_value(model, event, {target_param, x}, scheme);
    } catch (const std::domain_error&) {
      row.feasible = false;
      row.value = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> default_grid(std::size_t n) {
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    grid.push_back(static_cast<double>(k) / static_cast<double>(n + 1));
  }
  return grid;
}

}  // namespace monosens

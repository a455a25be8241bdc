#include "monosens/covariation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace monosens {

namespace {

constexpr double kIdentityTol = 1e-9;

void check_target(const ParameterVector& theta, const VariationTarget& target) {
  if (target.param_index >= theta.size()) {
    throw std::out_of_range("target parameter index out of range");
  }
  if (!(target.new_value > kThetaEps) ||
      !(target.new_value < 1.0 - kThetaEps)) {
    throw std::invalid_argument("target value outside the open interval (0,1)");
  }
}

// Block indices excluding the target, ascending; the order linear
// coefficients are matched against.
std::vector<std::size_t> off_target(const SimplexPartition& partition,
                                    std::size_t param) {
  std::vector<std::size_t> rest;
  for (std::size_t i : partition.block(partition.block_of(param))) {
    if (i != param) rest.push_back(i);
  }
  std::sort(rest.begin(), rest.end());
  return rest;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) {
      throw std::invalid_argument("bad number '" + item + "' in scheme spec");
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("empty coefficient list");
  return values;
}

std::string format_reals(const std::vector<double>& values) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    std::snprintf(buf, sizeof buf, "%.12g", values[i]);
    out += buf;
  }
  return out;
}

}  // namespace

CovariationScheme CovariationScheme::proportional() {
  return CovariationScheme(Kind::Proportional, {}, false);
}

CovariationScheme CovariationScheme::uniform() {
  return CovariationScheme(Kind::Uniform, {}, false);
}

CovariationScheme CovariationScheme::linear(LinearCoefficients coefficients) {
  if (coefficients.gamma.size() != coefficients.delta.size() ||
      coefficients.gamma.empty()) {
    throw std::invalid_argument(
        "linear scheme needs matching nonempty gamma/delta lists");
  }
  return CovariationScheme(Kind::Linear, std::move(coefficients), false);
}

CovariationScheme CovariationScheme::mass_proportion(
    std::vector<double> shares) {
  if (shares.empty()) {
    throw std::invalid_argument("mass-proportion scheme needs shares");
  }
  double sum = 0.0;
  for (double s : shares) {
    if (!(s > 0.0)) {
      throw std::invalid_argument("mass-proportion shares must be positive");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > kIdentityTol) {
    throw std::invalid_argument("mass-proportion shares must sum to one");
  }
  LinearCoefficients c;
  for (double s : shares) {
    c.gamma.push_back(-s);
    c.delta.push_back(s);
  }
  return CovariationScheme(Kind::Linear, std::move(c), true);
}

CovariationScheme CovariationScheme::parse(const std::string& spec) {
  if (spec == "proportional") return proportional();
  if (spec == "uniform") return uniform();
  const std::string mass_prefix = "linear:";
  const std::string full_prefix = "linear-full:";
  if (spec.rfind(full_prefix, 0) == 0) {
    std::string body = spec.substr(full_prefix.size());
    auto sep = body.find(';');
    if (sep == std::string::npos) {
      throw std::invalid_argument(
          "linear-full scheme needs 'gammas;deltas' separated by ';'");
    }
    LinearCoefficients c;
    c.gamma = parse_reals(body.substr(0, sep));
    c.delta = parse_reals(body.substr(sep + 1));
    return linear(std::move(c));
  }
  if (spec.rfind(mass_prefix, 0) == 0) {
    return mass_proportion(parse_reals(spec.substr(mass_prefix.size())));
  }
  throw std::invalid_argument(
      "unknown covariation scheme '" + spec +
      "' (expected proportional, uniform, linear:..., linear-full:...)");
}

std::string CovariationScheme::name() const {
  switch (kind_) {
    case Kind::Proportional:
      return "proportional";
    case Kind::Uniform:
      return "uniform";
    case Kind::Linear:
      if (mass_proportion_) return "linear:" + format_reals(coefficients_.delta);
      return "linear-full:" + format_reals(coefficients_.gamma) + ";" +
             format_reals(coefficients_.delta);
  }
  return "unknown";
}

ParameterVector apply_scheme(const ParameterVector& theta,
                             const VariationTarget& target,
                             const CovariationScheme& scheme) {
  check_target(theta, target);
  const auto& partition = theta.partition();
  std::size_t i = target.param_index;
  auto rest = off_target(partition, i);

  std::vector<double> varied = theta.values();
  varied[i] = target.new_value;

  switch (scheme.kind()) {
    case CovariationScheme::Kind::Proportional: {
      double factor = (1.0 - target.new_value) / (1.0 - theta[i]);
      for (std::size_t k : rest) varied[k] = theta[k] * factor;
      break;
    }
    case CovariationScheme::Kind::Uniform: {
      double share = (1.0 - target.new_value) / static_cast<double>(rest.size());
      for (std::size_t k : rest) varied[k] = share;
      break;
    }
    case CovariationScheme::Kind::Linear: {
      const auto& c = scheme.coefficients();
      if (c.gamma.size() != rest.size()) {
        throw std::invalid_argument(
            "linear scheme has " + std::to_string(c.gamma.size()) +
            " coefficient pairs for a block with " +
            std::to_string(rest.size()) + " covarying parameters");
      }
      double gamma_sum = 0.0, delta_sum = 0.0;
      for (double g : c.gamma) gamma_sum += g;
      for (double d : c.delta) delta_sum += d;
      if (std::abs(gamma_sum + 1.0) > kIdentityTol ||
          std::abs(delta_sum - 1.0) > kIdentityTol) {
        throw std::invalid_argument(
            "linear scheme breaks the sum-to-one identity (sum gamma=" +
            std::to_string(gamma_sum) + ", sum delta=" +
            std::to_string(delta_sum) + ")");
      }
      for (std::size_t k = 0; k < rest.size(); ++k) {
        varied[rest[k]] = c.gamma[k] * target.new_value + c.delta[k];
      }
      break;
    }
  }

  for (std::size_t k : rest) {
    if (!(varied[k] > kThetaEps) || !(varied[k] < 1.0 - kThetaEps)) {
      throw std::domain_error(
          "covariation drives parameter " + std::to_string(k + 1) +
          " outside (0,1) at target value " + std::to_string(target.new_value));
    }
  }
  double block_sum = 0.0;
  for (std::size_t k : partition.block(partition.block_of(i))) {
    block_sum += varied[k];
  }
  if (std::abs(block_sum - 1.0) > kSimplexTol) {
    throw std::domain_error("covaried block sums to " +
                            std::to_string(block_sum) + ", not 1");
  }
  return ParameterVector(std::move(varied), partition);
}

LinearCoefficients scheme_as_linear(const CovariationScheme& scheme,
                                    const ParameterVector& theta,
                                    const VariationTarget& target) {
  check_target(theta, target);
  auto rest = off_target(theta.partition(), target.param_index);
  LinearCoefficients c;
  switch (scheme.kind()) {
    case CovariationScheme::Kind::Proportional: {
      double denom = 1.0 - theta[target.param_index];
      for (std::size_t k : rest) {
        c.gamma.push_back(-theta[k] / denom);
        c.delta.push_back(theta[k] / denom);
      }
      break;
    }
    case CovariationScheme::Kind::Uniform: {
      double share = 1.0 / static_cast<double>(rest.size());
      for (std::size_t k : rest) {
        (void)k;
        c.gamma.push_back(-share);
        c.delta.push_back(share);
      }
      break;
    }
    case CovariationScheme::Kind::Linear:
      c = scheme.coefficients();
      break;
  }
  return c;
}

LinearCheck validate_linear(const LinearCoefficients& coefficients,
                            const ParameterVector& theta,
                            const VariationTarget& target) {
  check_target(theta, target);
  LinearCheck result;
  auto rest = off_target(theta.partition(), target.param_index);
  if (coefficients.gamma.size() != coefficients.delta.size()) {
    result.violations.push_back("gamma and delta lengths differ");
  }
  if (coefficients.gamma.size() != rest.size()) {
    result.violations.push_back(
        "coefficient count " + std::to_string(coefficients.gamma.size()) +
        " does not match covarying block size " + std::to_string(rest.size()));
  }
  // Sum-to-one as an identity in the varied value: the linear part must
  // cancel the target and the constants must supply the full mass.
  double gamma_sum = 0.0, delta_sum = 0.0;
  for (double g : coefficients.gamma) gamma_sum += g;
  for (double d : coefficients.delta) delta_sum += d;
  if (std::abs(gamma_sum + 1.0) > kIdentityTol) {
    result.violations.push_back("sum of gamma is " + std::to_string(gamma_sum) +
                                ", expected -1");
  }
  if (std::abs(delta_sum - 1.0) > kIdentityTol) {
    result.violations.push_back("sum of delta is " + std::to_string(delta_sum) +
                                ", expected 1");
  }
  if (coefficients.gamma.size() == coefficients.delta.size()) {
    for (std::size_t k = 0; k < coefficients.gamma.size(); ++k) {
      double v = coefficients.gamma[k] * target.new_value +
                 coefficients.delta[k];
      if (!(v > kThetaEps) || !(v < 1.0 - kThetaEps)) {
        result.violations.push_back(
            "coefficient pair " + std::to_string(k + 1) + " maps target " +
            std::to_string(target.new_value) + " to " + std::to_string(v) +
            ", outside (0,1)");
      }
    }
  }
  result.valid = result.violations.empty();
  return result;
}

Interval feasible_interval(const CovariationScheme& scheme,
                           const ParameterVector& theta,
                           const VariationTarget& target) {
  check_target(theta, target);
  Interval interval{kThetaEps, 1.0 - kThetaEps};
  if (scheme.kind() != CovariationScheme::Kind::Linear ||
      scheme.is_mass_proportion()) {
    // Proportional, uniform and mass-proportion maps keep every covaried
    // parameter inside (0,1) for any target in (0,1).
    return interval;
  }
  const auto& c = scheme.coefficients();
  for (std::size_t k = 0; k < c.gamma.size(); ++k) {
    double g = c.gamma[k], d = c.delta[k];
    if (g == 0.0) {
      if (!(d > kThetaEps) || !(d < 1.0 - kThetaEps)) {
        interval.lo = 1.0;
        interval.hi = 0.0;  // empty
      }
      continue;
    }
    // g*x + d in (0,1)  <=>  x between -d/g and (1-d)/g.
    double a = -d / g;
    double b = (1.0 - d) / g;
    interval.lo = std::max(interval.lo, std::min(a, b));
    interval.hi = std::min(interval.hi, std::max(a, b));
  }
  return interval;
}

}  // namespace monosens

#include <doctest.h>

#include <cmath>
#include <random>

#include "monosens/sensitivity.hpp"
#include "monosens/staged_tree.hpp"
#include "test_support.hpp"

using namespace monosens;
namespace ts = testsupport;

namespace {

// Second-semester outcomes by final grade, same leaf names in both trees.
std::vector<std::string> second_fail() {
  return {"A_PR_F2", "A_P1_F2", "A_D1_F2", "B_PR_F2", "B_P1_F2", "B_D1_F2"};
}
std::vector<std::string> second_distinction() {
  return {"A_PR_D2", "A_P1_D2", "A_D1_D2", "B_PR_D2", "B_P1_D2", "B_D1_D2"};
}
std::vector<std::string> first_distinction() {
  return {"A_D1_F2", "A_D1_P2", "A_D1_D2", "B_D1_F2", "B_D1_P2", "B_D1_D2"};
}
std::vector<std::string> both_distinction() { return {"A_D1_D2", "B_D1_D2"}; }

}  // namespace

TEST_CASE("sensitivity values") {
  auto coin = compile_to_mm(ts::coin_tree());
  for (auto scheme : {CovariationScheme::proportional(),
                      CovariationScheme::uniform(),
                      CovariationScheme::mass_proportion({1.0})}) {
    CHECK(sensitivity_value(coin, ts::event_of(coin, {"HH"}), {0, 0.6},
                            scheme) == doctest::Approx(0.36).epsilon(1e-12));
  }

  auto ml = compile_to_mm(ts::edu_ml_tree());
  CHECK(sensitivity_value(ml, ts::event_of(ml, second_fail()), {3, 0.7},
                          CovariationScheme::proportional()) ==
        doctest::Approx(0.093).epsilon(1e-12));

  auto nml = compile_to_mm(ts::edu_nml_tree());
  CHECK(sensitivity_value(nml, ts::event_of(nml, both_distinction()), {3, 0.6},
                          CovariationScheme::proportional()) ==
        doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("sensitivity value equals event probability of the varied model") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    auto model = ts::random_model(rng);
    auto event = ts::random_event(rng, model);
    std::size_t i = ts::uniform_index(rng, 0, model.param_count() - 1);
    VariationTarget target{i, ts::uniform(rng, 0.05, 0.95)};
    auto scheme = rep % 2 ? CovariationScheme::proportional()
                          : CovariationScheme::uniform();
    auto varied = apply_scheme(model.theta(), target, scheme);
    MonomialModel varied_model(model.matrix(), varied, model.atom_labels());
    CHECK(sensitivity_value(model, event, target, scheme) ==
          doctest::Approx(varied_model.event_probability(event))
              .epsilon(1e-12));
  }
}

TEST_CASE("sensitivity polynomials for the educational trees") {
  auto ml = compile_to_mm(ts::edu_ml_tree());
  auto poly_ml = sensitivity_polynomial(ml, ts::event_of(ml, second_fail()),
                                        {3, 0.8},
                                        CovariationScheme::proportional());
  CHECK(poly_ml.degree() == 1);
  CHECK(poly_ml.evaluate(0.7) == doctest::Approx(0.093).epsilon(1e-12));

  auto nml = compile_to_mm(ts::edu_nml_tree());
  auto poly_nml = sensitivity_polynomial(nml, ts::event_of(nml, second_fail()),
                                         {3, 0.8},
                                         CovariationScheme::proportional());
  CHECK(poly_nml.degree() == 2);

  // Full sample space stays at probability one under covariation.
  auto coin = compile_to_mm(ts::coin_tree());
  auto one = sensitivity_polynomial(coin, AtomEvent::full(3), {0, 0.3},
                                    CovariationScheme::proportional());
  CHECK(one.degree() == 0);
  CHECK(one.coefficients()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("polynomial matches pointwise values on a 99-point grid") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 25; ++rep) {
    auto model = ts::random_model(rng);
    auto event = ts::random_event(rng, model);
    std::size_t i = ts::uniform_index(rng, 0, model.param_count() - 1);
    CovariationScheme scheme = CovariationScheme::proportional();
    switch (rep % 3) {
      case 0:
        break;
      case 1:
        scheme = CovariationScheme::uniform();
        break;
      default: {
        std::size_t rest =
            model.partition()
                .block(model.partition().block_of(i))
                .size() -
            1;
        scheme = CovariationScheme::mass_proportion(
            ts::random_simplex(rng, rest));
        break;
      }
    }
    auto poly = sensitivity_polynomial(model, event, {i, 0.5}, scheme);
    for (double x : default_grid(99)) {
      CHECK(poly.evaluate(x) ==
            doctest::Approx(sensitivity_value(model, event, {i, x}, scheme))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("degree bounds") {
  auto coin = compile_to_mm(ts::coin_tree());
  CHECK(degree_bound(coin, ts::event_of(coin, {"HH"}), 0) == 2);

  auto ml = compile_to_mm(ts::edu_ml_tree());
  CHECK(degree_bound(ml, AtomEvent::full(ml.atom_count()), 1) == 1);

  auto nml = compile_to_mm(ts::edu_nml_tree());
  CHECK(degree_bound(nml, ts::event_of(nml, both_distinction()), 1) == 2);
}

TEST_CASE("conditional sensitivity") {
  auto ml = compile_to_mm(ts::edu_ml_tree());
  auto event = ts::event_of(ml, first_distinction());
  auto condition = ts::event_of(ml, second_distinction());

  // P(E | E) is constantly one.
  auto self = conditional_sensitivity(ml, event, event, {3, 0.5},
                                      CovariationScheme::uniform());
  for (double x : default_grid(19)) {
    CHECK(self.evaluate(x) == doctest::Approx(1.0).epsilon(1e-12));
  }

  auto ratio = conditional_sensitivity(ml, event, condition, {3, 0.5},
                                       CovariationScheme::uniform());
  CHECK(ratio.numerator.degree() == 1);
  CHECK(ratio.denominator.degree() == 1);
  for (double x : default_grid(19)) {
    double direct =
        sensitivity_value(ml, event.intersect(condition), {3, x},
                          CovariationScheme::uniform()) /
        sensitivity_value(ml, condition, {3, x}, CovariationScheme::uniform());
    CHECK(ratio.evaluate(x) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(ratio.evaluate(x) >= -1e-9);
    CHECK(ratio.evaluate(x) <= 1.0 + 1e-9);
  }

  // Under uniform covariation the conditional curve is the same function
  // for the two educational trees.
  auto nml = compile_to_mm(ts::edu_nml_tree());
  auto ratio_nml = conditional_sensitivity(
      nml, ts::event_of(nml, first_distinction()),
      ts::event_of(nml, second_distinction()), {3, 0.5},
      CovariationScheme::uniform());
  for (double x : default_grid(99)) {
    CHECK(ratio.evaluate(x) ==
          doctest::Approx(ratio_nml.evaluate(x)).epsilon(1e-10));
  }

  // Empty intersection gives the zero function; empty condition throws.
  auto hh_only = ts::event_of(ml, {"A_FR"});
  auto disjoint = ts::event_of(ml, {"B_FR"});
  auto zero = conditional_sensitivity(ml, hh_only, disjoint, {3, 0.5},
                                      CovariationScheme::uniform());
  CHECK(zero.evaluate(0.5) == 0.0);
  CHECK_THROWS_AS(conditional_sensitivity(ml, hh_only, AtomEvent{}, {3, 0.5},
                                          CovariationScheme::uniform()),
                  std::invalid_argument);
}

TEST_CASE("sweeps") {
  auto coin = compile_to_mm(ts::coin_tree());
  auto rows = sweep(coin, ts::event_of(coin, {"HH"}), 0,
                    CovariationScheme::proportional(), {0.25, 0.5, 0.75});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(rows[1].value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rows[2].value == doctest::Approx(0.5625).epsilon(1e-12));

  auto nml = compile_to_mm(ts::edu_nml_tree());
  auto single = sweep(nml, ts::event_of(nml, both_distinction()), 3,
                      CovariationScheme::proportional(), {0.6});
  CHECK(single[0].value == doctest::Approx(0.0625).epsilon(1e-12));

  // Withdrawal event: proportional and uniform curves are distinct for the
  // multilinear tree, while the uniform curves of the two trees agree.
  auto ml = compile_to_mm(ts::edu_ml_tree());
  auto withdrawn_ml = ts::event_of(ml, {"A_FR", "B_FR"});
  auto withdrawn_nml = ts::event_of(nml, {"A_FR", "B_FR"});
  auto grid = default_grid();
  auto pro_ml = sweep(ml, withdrawn_ml, 3, CovariationScheme::proportional(),
                      grid);
  auto uni_ml = sweep(ml, withdrawn_ml, 3, CovariationScheme::uniform(), grid);
  auto uni_nml =
      sweep(nml, withdrawn_nml, 3, CovariationScheme::uniform(), grid);
  bool differs = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (std::abs(pro_ml[g].value - uni_ml[g].value) > 1e-6) differs = true;
    CHECK(uni_ml[g].value ==
          doctest::Approx(uni_nml[g].value).epsilon(1e-10));
  }
  CHECK(differs);

  // Infeasible grid points are flagged, not fatal.
  auto ex3 = ts::load_fixture_model("ex3.model.json");
  auto partial = sweep(ex3, ts::event_of(ex3, {"Y11"}), 0,
                       CovariationScheme::linear({{-1.0, 0.0}, {0.9, 0.1}}),
                       {0.5, 0.95});
  CHECK(partial[0].feasible);
  CHECK_FALSE(partial[1].feasible);

  CHECK_THROWS_AS(sweep(coin, ts::event_of(coin, {"HH"}), 0,
                        CovariationScheme::proportional(), {}),
                  std::invalid_argument);
}

TEST_CASE("complement consistency across schemes") {
  std::mt19937_64 rng(5150);
  for (int rep = 0; rep < 40; ++rep) {
    auto model = ts::random_model(rng);
    auto event = ts::random_event(rng, model);
    auto rest = event.complement(model.atom_count());
    if (rest.empty()) continue;
    std::size_t i = ts::uniform_index(rng, 0, model.param_count() - 1);
    double x = ts::uniform(rng, 0.05, 0.95);
    for (auto scheme : {CovariationScheme::proportional(),
                        CovariationScheme::uniform()}) {
      double total = sensitivity_value(model, event, {i, x}, scheme) +
                     sensitivity_value(model, rest, {i, x}, scheme);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

#include <doctest.h>

#include <vector>

#include "alice/metrics.hpp"

using namespace alice;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

RolloutRecord row(double norm, std::optional<double> zeta, Mode mode = Mode::active) {
  RolloutRecord r;
  r.x_norm2 = norm;
  r.zeta = zeta;
  r.mode = mode;
  return r;
}

}  // namespace

TEST_CASE("step loss") {
  CHECK(step_loss(Vector::Ones(3), Vector::Zero(3), 10, 1) == 15.0);
  CHECK(step_loss(Vector::Zero(3), Vector::Zero(3), 10, 1) == 0.0);
  Vector x = Vector::Zero(3), u = Vector::Zero(3);
  x[0] = 1.0;
  u[0] = 2.0;
  CHECK(step_loss(x, u, 10, 1) == 7.0);
}

TEST_CASE("regret curve") {
  const std::vector<double> a{2, 2}, o{1, 1};
  CHECK(regret_curve(a, o) == std::vector<double>{1, 2});
  CHECK(regret_curve(a, a) == std::vector<double>{0, 0});
  const std::vector<double> short_seq{1};
  CHECK_THROWS_AS(regret_curve(a, short_seq), std::invalid_argument);

  const std::vector<double> x{0.3, 1.7, 2.25, 0.125, 9.0}, y{1.1, 0.5, 2.0, 0.25, 3.5};
  const auto reg = regret_curve(x, y);
  CHECK(reg[0] == x[0] - y[0]);
  for (std::size_t t = 1; t < reg.size(); ++t) CHECK(reg[t] - reg[t - 1] == doctest::Approx(x[t] - y[t]).epsilon(1e-15));
}

TEST_CASE("zeta on a scalar history") {
  ZetaInputs in;
  in.S = Matrix::Constant(1, 1, 1.0 + 4.0);  // x_0^2 + x_1^2
  in.B = Matrix::Identity(1, 1);
  in.eta = 1.0;
  in.beta = 1.0;
  in.x_t = v1(4.0);
  in.x_prev = v1(2.0);
  in.x_prev2 = v1(1.0);
  in.u_prev = v1(0.0);
  in.u_hat_prev2 = v1(0.0);
  const auto z = zeta_bound(in);
  REQUIRE(z.has_value());
  CHECK(*z == doctest::Approx(1.6).epsilon(1e-14));

  in.x_prev = v1(0.0);
  CHECK(*zeta_bound(in) == 0.0);

  in.S = Matrix::Zero(1, 1);
  CHECK_FALSE(zeta_bound(in).has_value());
}

TEST_CASE("zeta multiplier terms enter as written") {
  ZetaInputs in;
  in.S = Matrix::Constant(1, 1, 2.0);
  in.B = Matrix::Constant(1, 1, 2.0);
  in.eta = 3.0;
  in.beta = 1.0;
  in.nu_t = 0.5;
  in.nu_t1 = 0.25;
  in.x_t = v1(1.0);
  in.x_prev = v1(2.0);
  in.x_prev2 = v1(3.0);
  in.u_prev = v1(-1.0);
  in.u_hat_prev2 = v1(0.5);
  // numerator: -2(.5)(3)(4)(.5) + 3(2)(2)(1) + (0.5+1)(2)(4)(-1) = -6 + 12 - 12 = -6
  // hessian: 4(2)(4) + 0.5(2)(4)(2) = 32 + 8 = 40
  CHECK(*zeta_bound(in) == doctest::Approx(2.0 * 2.0 * 6.0 / 40.0).epsilon(1e-14));
}

TEST_CASE("contraction frequency") {
  std::vector<RolloutRecord> all{row(10, 0.0), row(8, 0.0), row(6, 0.1), row(5, 0.0)};
  CHECK(*contraction_frequency(all, 0.9) == 1.0);

  std::vector<RolloutRecord> none{row(1, 0.0), row(2, 0.0), row(4, 0.5)};
  CHECK(*contraction_frequency(none, 0.9) == 0.0);

  std::vector<RolloutRecord> skipped{row(1, 0.0), row(2, std::nullopt), row(4, 0.1, Mode::coast),
                                     row(3, 0.0, Mode::warmup)};
  CHECK_FALSE(contraction_frequency(skipped, 0.9).has_value());

  std::vector<RolloutRecord> mixed{row(10, 0.0), row(8, 0.0), row(9, 0.0), row(4, 0.0)};
  CHECK(*contraction_frequency(mixed, 0.9) == doctest::Approx(2.0 / 3.0));
  const ContractionCount c = contraction_count(mixed, 0.9);
  CHECK(c.held == 2);
  CHECK(c.counted == 3);
}

TEST_CASE("quantiles and line fits") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5}, 0.75) == 5.0);
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);

  const std::vector<double> x{0, 1, 2, 3}, y{1, -1, -3, -5};
  const LineFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

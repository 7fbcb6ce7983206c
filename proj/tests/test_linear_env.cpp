#include <doctest.h>

#include <cmath>

#include "alice/config.hpp"
#include "alice/linear_env.hpp"

using namespace alice;

namespace {

PlantConfig laplacian_plant(Vector sigma, Vector x0) {
  PlantConfig p = preset("exp1").plant;
  p.sigma = std::move(sigma);
  p.x0_mean = std::move(x0);
  return p;
}

}  // namespace

TEST_CASE("initial state is the mean when the covariance is zero") {
  Plant far(laplacian_plant(Vector::Zero(3), Vector::Constant(3, 5.0)), 1);
  CHECK(far.observe() == Vector::Constant(3, 5.0));
  CHECK(far.t() == 0);

  PlantConfig cfg = laplacian_plant(Vector::Zero(3), Vector::Zero(3));
  cfg.x0_cov = Matrix::Zero(3, 3);
  Plant origin(cfg, 1);
  CHECK(origin.observe() == Vector::Zero(3));
}

TEST_CASE("random initial state is reproducible and respects the covariance") {
  PlantConfig cfg = laplacian_plant(Vector::Ones(3), Vector::Zero(3));
  cfg.x0_cov = Matrix::Identity(3, 3);
  CHECK(Plant(cfg, 9).observe() == Plant(cfg, 9).observe());
  CHECK(Plant(cfg, 9).observe() != Plant(cfg, 10).observe());

  // Rank-one covariance: samples lie on the span of its eigenvector.
  const Vector dir = Vector::Ones(3).normalized();
  cfg.x0_cov = dir * dir.transpose();
  const Vector x = Plant(cfg, 3).observe();
  CHECK((x - dir * dir.dot(x)).norm() < 1e-12);
}

TEST_CASE("non-PSD initial covariance is a configuration error") {
  PlantConfig cfg = laplacian_plant(Vector::Ones(3), Vector::Zero(3));
  cfg.x0_cov = -Matrix::Identity(3, 3);
  CHECK_THROWS_AS(Plant(cfg, 0), ConfigError);
}

TEST_CASE("one noiseless step of the Laplacian plant") {
  Plant plant(laplacian_plant(Vector::Zero(3), Vector::Ones(3)), 0);
  const Vector next = plant.step(Vector::Zero(3));
  CHECK(next[0] == doctest::Approx(1.02).epsilon(1e-15));
  CHECK(next[1] == doctest::Approx(1.03).epsilon(1e-15));
  CHECK(next[2] == doctest::Approx(1.02).epsilon(1e-15));
  CHECK(plant.t() == 1);
}

TEST_CASE("identity dynamics without noise or action leave the state alone") {
  PlantConfig cfg;
  cfg.n = 2;
  cfg.m = 1;
  cfg.a_schedule = ASchedule::constant(Matrix::Identity(2, 2));
  cfg.B = Matrix::Ones(2, 1);
  cfg.sigma = Vector::Zero(2);
  cfg.x0_mean = Vector::LinSpaced(2, 1.0, 2.0);
  Plant plant(cfg, 0);
  for (int i = 0; i < 5; ++i) plant.step(Vector::Zero(1));
  CHECK(plant.observe() == cfg.x0_mean);
  CHECK(plant.observe() == plant.observe());
}

TEST_CASE("adversarial switch and ramp schedules") {
  const ASchedule sw = preset("exp2").plant.a_schedule;
  CHECK(sw.at(0)(0, 0) == 1.01);
  CHECK(sw.at(9)(0, 0) == 1.01);
  CHECK(sw.at(10)(0, 0) == 4.01);
  CHECK(sw.at(150)(0, 0) == 4.01);
  CHECK(sw.at(150)(1, 1) == 1.01);

  const ASchedule ramp = preset("exp3").plant.a_schedule;
  for (int t : {0, 1, 10, 57, 90}) {
    CHECK(ramp.at(t)(0, 0) == doctest::Approx(1.01 + 0.1 * t).epsilon(1e-14));
    CHECK(ramp.at(t)(0, 1) == 0.01);
  }
}

TEST_CASE("noise empirical moments") {
  PlantConfig cfg;
  cfg.n = 2;
  cfg.m = 1;
  cfg.a_schedule = ASchedule::constant(Matrix::Zero(2, 2));
  cfg.B = Matrix::Zero(2, 1);
  cfg.sigma = Vector(2);
  cfg.sigma << 0.5, 2.0;
  cfg.x0_mean = Vector::Zero(2);
  Plant plant(cfg, 77);
  constexpr int N = 100000;
  Vector sum = Vector::Zero(2), sum2 = Vector::Zero(2);
  for (int i = 0; i < N; ++i) {
    const Vector& x = plant.step(Vector::Zero(1));  // x = w with A = 0
    sum += x;
    sum2 += x.cwiseProduct(x);
  }
  for (int i = 0; i < 2; ++i) {
    const double mean = sum[i] / N;
    const double var = sum2[i] / N - mean * mean;
    CHECK(std::abs(mean) <= 5.0 * cfg.sigma[i] / std::sqrt(N));
    CHECK(std::abs(var - cfg.sigma[i] * cfg.sigma[i]) <= 0.1 * cfg.sigma[i] * cfg.sigma[i]);
  }
}

TEST_CASE("process noise does not depend on the actions taken") {
  const PlantConfig cfg = laplacian_plant(Vector::Ones(3), Vector::Zero(3));
  Plant a(cfg, 5), b(cfg, 5), c(cfg, 6);
  for (int t = 0; t < 20; ++t) {
    a.step(Vector::Zero(3));
    b.step(Vector::Constant(3, 0.1 * t));
    c.step(Vector::Zero(3));
    CHECK(a.last_noise() == b.last_noise());
  }
  CHECK(a.noise_digest() == b.noise_digest());
  CHECK(a.noise_digest() != c.noise_digest());
}

TEST_CASE("noiseless trajectories are bit-deterministic") {
  const PlantConfig cfg = laplacian_plant(Vector::Zero(3), Vector::Constant(3, 5.0));
  Plant a(cfg, 1), b(cfg, 2);
  for (int t = 0; t < 30; ++t) {
    const Vector u = Vector::Constant(3, std::sin(t));
    CHECK(a.step(u) == b.step(u));
  }
}

TEST_CASE("divergence guard reports the step") {
  PlantConfig cfg = laplacian_plant(Vector::Zero(3), Vector::Ones(3));
  cfg.a_schedule = ASchedule::constant(1e5 * Matrix::Identity(3, 3));
  Plant plant(cfg, 0);
  std::int64_t fired = -1;
  try {
    for (int t = 0; t < 10; ++t) plant.step(Vector::Zero(3));
  } catch (const DivergenceError& e) {
    fired = e.step();
  }
  CHECK(fired == 3);  // 1e15 > 1e12 after the third step

  Plant nan_plant(laplacian_plant(Vector::Zero(3), Vector::Ones(3)), 0);
  CHECK_THROWS_AS(nan_plant.step(Vector::Constant(3, std::nan(""))), DivergenceError);
}

TEST_CASE("plant configuration validation") {
  PlantConfig good = laplacian_plant(Vector::Ones(3), Vector::Zero(3));
  CHECK_NOTHROW(good.validate());

  PlantConfig bad_b = good;
  bad_b.B = Matrix::Identity(2, 3);
  CHECK_THROWS_AS(bad_b.validate(), ConfigError);

  PlantConfig bad_sigma = good;
  bad_sigma.sigma = -Vector::Ones(3);
  CHECK_THROWS_AS(bad_sigma.validate(), ConfigError);

  PlantConfig bad_a = good;
  bad_a.a_schedule = ASchedule::piecewise({{0, Matrix::Identity(3, 3)}, {4, Matrix::Identity(2, 2)}});
  CHECK_THROWS_AS(bad_a.validate(), ConfigError);

  CHECK_THROWS_AS(ASchedule::piecewise({{3, Matrix::Identity(3, 3)}}), ConfigError);
}

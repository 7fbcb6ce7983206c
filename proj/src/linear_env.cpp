#include "alice/linear_env.hpp"

#include <algorithm>
#include <cstring>
#include <utility>

namespace alice {

namespace {

constexpr double kPsdTolerance = 1e-12;

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

}  // namespace

ASchedule ASchedule::constant(Matrix A) {
  ASchedule s;
  s.pieces_.push_back({0, std::move(A)});
  return s;
}

ASchedule ASchedule::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw ConfigError("A schedule needs at least one piece");
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.start < b.start; });
  if (pieces.front().start != 0) throw ConfigError("A schedule must start at step 0");
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].start == pieces[i - 1].start) {
      throw ConfigError("A schedule has duplicate start step " + std::to_string(pieces[i].start));
    }
  }
  ASchedule s;
  s.pieces_ = std::move(pieces);
  return s;
}

ASchedule ASchedule::ramp(Matrix base, Matrix slope) {
  ASchedule s = constant(std::move(base));
  s.slope_ = std::move(slope);
  return s;
}

Matrix ASchedule::at(std::int64_t t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](std::int64_t v, const Piece& p) { return v < p.start; });
  Matrix A = std::prev(it)->matrix;
  if (slope_) A += static_cast<double>(t) * *slope_;
  return A;
}

void PlantConfig::validate() const {
  if (n <= 0 || m <= 0) throw ConfigError("plant dimensions must be positive");
  for (const auto& p : a_schedule.pieces()) {
    if (p.matrix.rows() != n || p.matrix.cols() != n) {
      throw ConfigError("A piece at step " + std::to_string(p.start) + " is " + shape(p.matrix) +
                        ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!p.matrix.allFinite()) throw ConfigError("A contains non-finite entries");
  }
  if (const auto& s = a_schedule.slope(); s && (s->rows() != n || s->cols() != n)) {
    throw ConfigError("A ramp slope is " + shape(*s));
  }
  if (B.rows() != n || B.cols() != m) {
    throw ConfigError("B is " + shape(B) + ", expected " + std::to_string(n) + "x" + std::to_string(m));
  }
  if (sigma.size() != n) throw ConfigError("sigma must have length n");
  if ((sigma.array() < 0.0).any() || !sigma.allFinite()) throw ConfigError("sigma must be finite and >= 0");
  if (x0_mean.size() != n) throw ConfigError("x0_mean must have length n");
  if (x0_cov) {
    const Matrix& P = *x0_cov;
    if (P.rows() != n || P.cols() != n) throw ConfigError("x0_cov is " + shape(P));
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.cwiseAbs().maxCoeff())) {
      throw ConfigError("x0_cov must be symmetric");
    }
  }
}

Vector sample_initial_state(const PlantConfig& config, std::uint64_t seed) {
  Vector x = config.x0_mean;
  if (!config.x0_cov || config.x0_cov->isZero(0.0)) return x;
  Eigen::SelfAdjointEigenSolver<Matrix> es(*config.x0_cov);
  Vector ev = es.eigenvalues();
  if (ev.minCoeff() < -kPsdTolerance) throw ConfigError("x0_cov is not positive semidefinite");
  ev = ev.cwiseMax(0.0);
  const Matrix L = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  const CounterRng rng(seed, Stream::initial_state);
  x += L * rng.normal_vector(0, config.n);
  return x;
}

Plant::Plant(PlantConfig config, std::uint64_t seed)
    : config_(std::move(config)), noise_(seed, Stream::process_noise) {
  config_.validate();
  x_ = sample_initial_state(config_, seed);
  last_noise_ = Vector::Zero(config_.n);
}

const Vector& Plant::step(const Vector& u) {
  if (u.size() != config_.m) throw std::invalid_argument("action has wrong length");
  if (!u.allFinite()) throw DivergenceError(t_, "non-finite action at step " + std::to_string(t_));

  // w_{t+1} is keyed by the step it lands on, independent of the actions.
  last_noise_ = config_.sigma.cwiseProduct(noise_.normal_vector(static_cast<std::uint64_t>(t_ + 1), config_.n));
  for (Eigen::Index i = 0; i < last_noise_.size(); ++i) {
    std::uint64_t bits;
    const double v = last_noise_[i];
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      noise_digest_ ^= (bits >> (8 * b)) & 0xffU;
      noise_digest_ *= 0x100000001b3ULL;
    }
  }

  Vector next = config_.a_schedule.at(t_) * x_ + config_.B * u + last_noise_;
  ++t_;
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergenceBound) {
    throw DivergenceError(t_, "state diverged at step " + std::to_string(t_));
  }
  x_ = std::move(next);
  return x_;
}

}  // namespace alice

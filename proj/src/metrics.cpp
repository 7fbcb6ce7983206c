#include "alice/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alice {

double step_loss(const Vector& x_t, const Vector& u_prev, double eta, double beta) {
  return 0.5 * eta * x_t.squaredNorm() + 0.5 * beta * u_prev.squaredNorm();
}

std::vector<double> regret_curve(std::span<const double> alice_losses, std::span<const double> oracle_losses) {
  if (alice_losses.size() != oracle_losses.size()) {
    throw std::invalid_argument("regret_curve: sequences differ in length");
  }
  std::vector<double> out(alice_losses.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    acc += alice_losses[i] - oracle_losses[i];
    out[i] = acc;
  }
  return out;
}

std::optional<double> zeta_bound(const ZetaInputs& in) {
  const Eigen::Index m = in.B.cols();
  const Matrix BtB = in.B.transpose() * in.B;
  const Matrix phi_prev = action_lift(in.x_prev, m);
  const Matrix phi_prev2 = action_lift(in.x_prev2, m);

  const Vector numerator = -2.0 * in.nu_t * phi_prev2.transpose() * BtB * in.u_hat_prev2 +
                           in.eta * phi_prev.transpose() * in.B.transpose() * in.x_t +
                           (2.0 * in.nu_t1 + in.beta) * phi_prev.transpose() * BtB * in.u_prev;

  // sum_i Phi_{i-1}^T B^T B Phi_{i-1} = S (x) B^T B
  const Matrix hessian = (in.eta + in.beta) * kron(in.S, BtB) +
                         2.0 * in.nu_t1 * phi_prev.transpose() * BtB * phi_prev;
  const double denom = spectral_norm(hessian);
  if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;
  return 2.0 * spectral_norm(in.B) * numerator.norm() / denom;
}

ContractionCount contraction_count(std::span<const RolloutRecord> rollout, double alpha) {
  ContractionCount out;
  for (std::size_t i = 1; i < rollout.size(); ++i) {
    const RolloutRecord& row = rollout[i];
    if (row.mode != Mode::active || !row.zeta) continue;
    ++out.counted;
    if (row.x_norm2 <= (alpha + *row.zeta) * rollout[i - 1].x_norm2) ++out.held;
  }
  return out;
}

std::optional<double> contraction_frequency(std::span<const RolloutRecord> rollout, double alpha) {
  const ContractionCount c = contraction_count(rollout, alpha);
  if (c.counted == 0) return std::nullopt;
  return static_cast<double>(c.held) / static_cast<double>(c.counted);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of empty data");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace alice

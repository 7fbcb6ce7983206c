#include "alice/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace alice {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kControllerNames = {"alice", "lqr_oracle", "zero", "random"};

Matrix laplacian_plant() {
  Matrix A(3, 3);
  A << 1.01, 0.01, 0.0,
       0.01, 1.01, 0.01,
       0.0, 0.01, 1.01;
  return A;
}

Matrix matrix_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(std::string(what) + " has ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) throw ConfigError(std::string(what) + " has a non-numeric entry");
      M(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return M;
}

Vector vector_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " has a non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ASchedule schedule_from_json(const json& j) {
  const std::string type = j.value("type", "");
  if (type == "constant") return ASchedule::constant(matrix_from_json(j.at("matrix"), "A.matrix"));
  if (type == "piecewise") {
    std::vector<ASchedule::Piece> pieces;
    for (const json& p : j.at("pieces")) {
      pieces.push_back({p.at("start").get<std::int64_t>(), matrix_from_json(p.at("matrix"), "A.pieces.matrix")});
    }
    return ASchedule::piecewise(std::move(pieces));
  }
  if (type == "ramp") {
    return ASchedule::ramp(matrix_from_json(j.at("base"), "A.base"), matrix_from_json(j.at("slope"), "A.slope"));
  }
  throw ConfigError("A schedule type must be constant, piecewise or ramp (got '" + type + "')");
}

json schedule_to_json(const ASchedule& s) {
  if (s.slope()) {
    return {{"type", "ramp"}, {"base", to_json(s.pieces().front().matrix)}, {"slope", to_json(*s.slope())}};
  }
  if (s.pieces().size() == 1) return {{"type", "constant"}, {"matrix", to_json(s.pieces().front().matrix)}};
  json pieces = json::array();
  for (const auto& p : s.pieces()) pieces.push_back({{"start", p.start}, {"matrix", to_json(p.matrix)}});
  return {{"type", "piecewise"}, {"pieces", pieces}};
}

ExperimentConfig base_experiment(std::string name, Vector sigma, Vector x0, std::int64_t horizon) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  cfg.plant.n = 3;
  cfg.plant.m = 3;
  cfg.plant.a_schedule = ASchedule::constant(laplacian_plant());
  cfg.plant.B = Matrix::Identity(3, 3);
  cfg.plant.sigma = std::move(sigma);
  cfg.plant.x0_mean = std::move(x0);
  cfg.alice.eta = 10.0;
  cfg.alice.beta = 1.0;
  cfg.alice.gamma = 1.2;
  cfg.alice.alpha = 0.9;
  cfg.alice.lambda = 0.001;
  cfg.alice.t_w = 1;
  cfg.alice.t_c = 1;
  cfg.alice.T = horizon;
  cfg.alice.sigma_norm = cfg.plant.sigma.norm();
  cfg.horizon = horizon;
  cfg.base_seed = 0;
  cfg.seeds = seed_range(cfg.base_seed, 100);
  cfg.out_dir = "out/" + cfg.name;
  return cfg;
}

}  // namespace

bool is_controller_name(std::string_view name) {
  return std::find(kControllerNames.begin(), kControllerNames.end(), name) != kControllerNames.end();
}

std::vector<std::uint64_t> seed_range(std::uint64_t base_seed, std::int64_t count) {
  if (count < 1) throw ConfigError("seed count must be at least 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = base_seed + i;
  return seeds;
}

void ExperimentConfig::validate() const {
  plant.validate();
  alice.validate();
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (alice.T != horizon) throw ConfigError("alice.T must equal the horizon");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (controllers.empty()) throw ConfigError("at least one controller is required");
  for (const auto& c : controllers) {
    if (!is_controller_name(c)) throw ConfigError("unknown controller '" + c + "'");
  }
}

ExperimentConfig preset(std::string_view name) {
  const Vector unit = Vector::Ones(3);
  const Vector far = Vector::Constant(3, 5.0);
  if (name == "exp1") {
    ExperimentConfig cfg = base_experiment("exp1", unit, Vector::Zero(3), 500);
    cfg.controllers = {"alice", "lqr_oracle", "zero", "random"};
    return cfg;
  }
  if (name == "exp1_noiseless") {
    ExperimentConfig cfg = base_experiment("exp1_noiseless", Vector::Zero(3), Vector::Zero(3), 400);
    cfg.alice.lambda = 0.0;
    cfg.alice.t_w = 3;
    // A random start keeps S invertible once the n warm-up steps are in.
    cfg.plant.x0_cov = Matrix::Identity(3, 3);
    // Decisions run for t < T, so t_c = T never engages the constraint.
    cfg.alice.t_c = cfg.horizon;
    cfg.seeds = seed_range(cfg.base_seed, 1);
    cfg.controllers = {"alice", "lqr_oracle"};
    return cfg;
  }
  if (name == "exp2") {
    ExperimentConfig cfg = base_experiment("exp2", 0.1 * unit, far, 200);
    Matrix switched = laplacian_plant();
    switched(0, 0) = 4.01;
    cfg.plant.a_schedule = ASchedule::piecewise({{0, laplacian_plant()}, {10, switched}});
    cfg.controllers = {"alice", "lqr_oracle"};
    return cfg;
  }
  if (name == "exp3") {
    ExperimentConfig cfg = base_experiment("exp3", 0.1 * unit, far, 100);
    Matrix slope = Matrix::Zero(3, 3);
    slope(0, 0) = 0.1;
    cfg.plant.a_schedule = ASchedule::ramp(laplacian_plant(), slope);
    cfg.controllers = {"alice", "lqr_oracle"};
    return cfg;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig config_from_json(const json& doc) {
  try {
    ExperimentConfig cfg;
    cfg.name = doc.value("name", "custom");

    const json& p = doc.at("plant");
    cfg.plant.a_schedule = schedule_from_json(p.at("A"));
    cfg.plant.B = matrix_from_json(p.at("B"), "B");
    cfg.plant.n = p.value("n", static_cast<std::int64_t>(cfg.plant.B.rows()));
    cfg.plant.m = p.value("m", static_cast<std::int64_t>(cfg.plant.B.cols()));
    cfg.plant.sigma = vector_from_json(p.at("sigma"), "sigma");
    cfg.plant.x0_mean = p.contains("x0_mean") ? vector_from_json(p.at("x0_mean"), "x0_mean")
                                              : Vector::Zero(cfg.plant.n);
    if (p.contains("x0_cov")) cfg.plant.x0_cov = matrix_from_json(p.at("x0_cov"), "x0_cov");

    cfg.horizon = doc.at("horizon").get<std::int64_t>();
    const json a = doc.value("alice", json::object());
    cfg.alice.eta = a.value("eta", 10.0);
    cfg.alice.beta = a.value("beta", 1.0);
    cfg.alice.alpha = a.value("alpha", 0.9);
    cfg.alice.lambda = a.value("lambda", 0.001);
    cfg.alice.gamma = a.value("gamma", 1.2);
    cfg.alice.t_w = a.value("t_w", static_cast<std::int64_t>(1));
    cfg.alice.t_c = a.value("t_c", static_cast<std::int64_t>(1));
    cfg.alice.T = cfg.horizon;
    cfg.alice.sigma_norm = a.value("sigma_norm", cfg.plant.sigma.norm());

    cfg.controllers = doc.value("controllers", std::vector<std::string>{"alice", "lqr_oracle"});
    cfg.base_seed = doc.value("base_seed", static_cast<std::uint64_t>(0));
    const json seeds = doc.value("seeds", json(100));
    if (seeds.is_array()) {
      cfg.seeds = seeds.get<std::vector<std::uint64_t>>();
    } else {
      cfg.seeds = seed_range(cfg.base_seed, seeds.get<std::int64_t>());
    }
    cfg.out_dir = doc.value("out_dir", "out/" + cfg.name);
    cfg.emit_svg = doc.value("emit_svg", false);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json plant = {
      {"n", cfg.plant.n},
      {"m", cfg.plant.m},
      {"A", schedule_to_json(cfg.plant.a_schedule)},
      {"B", to_json(cfg.plant.B)},
      {"sigma", to_json(cfg.plant.sigma)},
      {"x0_mean", to_json(cfg.plant.x0_mean)},
  };
  if (cfg.plant.x0_cov) plant["x0_cov"] = to_json(*cfg.plant.x0_cov);
  return {
      {"name", cfg.name},
      {"plant", plant},
      {"alice",
       {{"eta", cfg.alice.eta},
        {"beta", cfg.alice.beta},
        {"alpha", cfg.alice.alpha},
        {"lambda", cfg.alice.lambda},
        {"gamma", cfg.alice.gamma},
        {"t_w", cfg.alice.t_w},
        {"t_c", cfg.alice.t_c},
        {"sigma_norm", cfg.alice.sigma_norm}}},
      {"controllers", cfg.controllers},
      {"horizon", cfg.horizon},
      {"seeds", cfg.seeds},
      {"base_seed", cfg.base_seed},
      {"out_dir", cfg.out_dir},
      {"emit_svg", cfg.emit_svg},
  };
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace alice

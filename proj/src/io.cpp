#include "lot/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lot {

Json measure_to_json(const DiscreteMeasure& mu) {
  Json points = Json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Json p = Json::array();
    for (int k = 0; k < mu.dim(); ++k) p.push_back(mu.points()(static_cast<Eigen::Index>(i), k));
    points.push_back(std::move(p));
  }
  Json weights = Json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) weights.push_back(mu.weight(i));
  return Json{{"dim", mu.dim()}, {"points", std::move(points)}, {"weights", std::move(weights)}};
}

DiscreteMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("points") || !j.contains("weights")) {
    throw Error(ErrorCode::InvalidArgument, "measure JSON needs dim, points and weights");
  }
  try {
    const int dim = j.at("dim").get<int>();
    const auto& pts = j.at("points");
    const auto& ws = j.at("weights");
    if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dim must be positive");
    Points points(static_cast<Eigen::Index>(pts.size()), dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != static_cast<std::size_t>(dim)) {
        throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " has the wrong dimension");
      }
      for (int k = 0; k < dim; ++k) points(static_cast<Eigen::Index>(i), k) = pts[i][static_cast<std::size_t>(k)].get<double>();
    }
    Vector weights(static_cast<Eigen::Index>(ws.size()));
    for (std::size_t i = 0; i < ws.size(); ++i) weights(static_cast<Eigen::Index>(i)) = ws[i].get<double>();
    return DiscreteMeasure::make(std::move(points), std::move(weights));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed measure JSON: ") + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

DiscreteMeasure read_measure(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
  return measure_from_json(j);
}

void write_measure(const std::string& path, const DiscreteMeasure& mu) {
  write_text(path, measure_to_json(mu).dump(1) + "\n");
}

std::string measure_fingerprint(const DiscreteMeasure& mu) {
  // FNV-1a over the raw doubles.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<double>(mu.dim()));
  for (Eigen::Index i = 0; i < mu.points().rows(); ++i) {
    for (Eigen::Index k = 0; k < mu.points().cols(); ++k) mix(mu.points()(i, k));
    mix(mu.weights()(i));
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

Json embedding_to_json(const Embedding& e, const std::string& reference_id) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < e.values.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < e.values.cols(); ++k) row.push_back(e.values(i, k));
    values.push_back(std::move(row));
  }
  return Json{{"reference_id", reference_id}, {"source_id", e.source_id}, {"values", std::move(values)}};
}

std::string distance_matrix_to_csv(const DistanceMatrix& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& l : m.labels) out << ',' << l;
  out << '\n';
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    out << m.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) out << ',' << m.entries(i, j);
    out << '\n';
  }
  return out.str();
}

Json gap_curve_to_json(const GapCurve& c) {
  auto clean = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
    return a;
  };
  return Json{{"eps", c.eps_values}, {"gap_mean", c.gap_mean},         {"gap_max", c.gap_max},
              {"gap_min", c.gap_min}, {"bound", clean(c.bound_values)}, {"C_fit", c.C_fit},
              {"trials", c.trials}};
}

std::string gap_curve_to_csv(const GapCurve& c) {
  std::ostringstream out;
  out << std::setprecision(17) << "eps,gap_mean,gap_max,bound\n";
  for (std::size_t k = 0; k < c.eps_values.size(); ++k) {
    out << c.eps_values[k] << ',' << c.gap_mean[k] << ',' << c.gap_max[k] << ',';
    if (k < c.bound_values.size() && std::isfinite(c.bound_values[k])) out << c.bound_values[k];
    out << '\n';
  }
  return out.str();
}

namespace {

Json class_bounds_json(const ClassBounds& b) {
  return Json{{"f_sup", b.f_sup},       {"K_hat", b.K_hat}, {"w2_sigma", b.w2_sigma},
              {"id_norm", b.id_norm},   {"psi", b.psi},
              {"psi_bar", std::isfinite(b.psi_bar) ? Json(b.psi_bar) : Json(nullptr)}};
}

}  // namespace

Json bounds_report_to_json(const BoundsReport& r) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  return Json{{"eps", r.eps},
              {"R", r.R},
              {"C_merigot", r.C_merigot},
              {"cell_width", r.cell_width},
              {"K_hat_is_estimate", true},
              {"mu", class_bounds_json(r.mu)},
              {"nu", class_bounds_json(r.nu)},
              {"psi", r.psi},
              {"psi_bar", num(r.psi_bar)},
              {"delta", r.delta},
              {"delta_bar", num(r.delta_bar)}};
}

Json eval_report_to_json(const EvalReport& r) {
  Json j{{"train_error", r.train_error}, {"test_error", r.test_error}, {"per_trial", r.per_trial},
         {"mean", r.mean},               {"stddev", r.stddev}};
  j["margin"] = r.margin ? Json(*r.margin) : Json(nullptr);
  return j;
}

}  // namespace lot

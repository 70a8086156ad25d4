#include "config.hpp"

#include "lot/random.hpp"

namespace lot::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

// A measure given as a path, an inline {dim, points, weights} object, or a
// {"shape": "disk" | "bar", ...} template.
DiscreteMeasure measure_ref(const Json& j, const fs::path& base, const std::string& what) {
  if (j.is_string()) return read_measure(resolve(base, j.get<std::string>()).string());
  require_object(j, what);
  if (j.contains("path")) return read_measure(resolve(base, j.at("path").get<std::string>()).string());
  if (j.contains("shape")) {
    const auto shape = j.at("shape").get<std::string>();
    const auto atoms = get_or<std::size_t>(j, "atoms", 48);
    if (shape == "disk") return disk_template(get_or(j, "radius", 1.0), atoms);
    if (shape == "bar") return bar_template(get_or(j, "length", 3.0), get_or(j, "height", 0.5), atoms);
    throw ConfigError(what + ": unknown shape \"" + shape + "\"");
  }
  if (j.contains("measure")) return measure_from_json(j.at("measure"));
  return measure_from_json(j);
}

SolverConfig parse_solver(const Json& j) {
  require_object(j, "solver");
  SolverConfig s;
  const auto type = get_or<std::string>(j, "type", "exact");
  if (type == "exact") {
    s.kind = SolverConfig::Kind::Exact;
  } else if (type == "sinkhorn") {
    s.kind = SolverConfig::Kind::Sinkhorn;
  } else if (type == "auto") {
    s.kind = SolverConfig::Kind::Auto;
  } else {
    throw ConfigError("solver.type must be exact, sinkhorn or auto");
  }
  s.sinkhorn.reg = get_or(j, "reg", s.sinkhorn.reg);
  s.sinkhorn.max_iters = get_or(j, "max_iters", s.sinkhorn.max_iters);
  s.sinkhorn.tol = get_or(j, "tol", s.sinkhorn.tol);
  s.sinkhorn.anneal = get_or(j, "anneal", s.sinkhorn.anneal);
  s.exact_max_support = get_or(j, "exact_max_support", s.exact_max_support);
  s.reg_scale = get_or(j, "reg_scale", s.reg_scale);
  if (!(s.sinkhorn.reg > 0.0) || s.sinkhorn.max_iters < 1 || !(s.sinkhorn.tol > 0.0)) {
    throw ConfigError("solver needs reg > 0, max_iters >= 1 and tol > 0");
  }
  return s;
}

std::vector<double> doubles(const Json& j, const char* key, std::vector<double> fallback) {
  return get_or(j, key, std::move(fallback));
}

}  // namespace

DiscreteMeasure ExperimentConfig::reference_support() const {
  return reference_measure ? *reference_measure : select_reference_support(reference);
}

ExperimentConfig parse_config(const Json& doc, const fs::path& base_dir, std::optional<std::uint64_t> seed) {
  require_object(doc, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.seed = seed ? *seed : get_or<std::uint64_t>(doc, "seed", 0);
  c.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "out"));

  if (doc.contains("reference")) {
    const Json& r = doc.at("reference");
    require_object(r, "reference");
    const auto type = get_or<std::string>(r, "type", "grid");
    if (type == "gaussian") {
      GaussianReference g;
      g.center = doubles(r, "center", g.center);
      g.std = get_or(r, "std", g.std);
      g.truncation = get_or(r, "truncation", g.truncation);
      const auto grid = get_or(r, "grid", std::vector<int>{g.grid_width, g.grid_height});
      if (grid.size() != 2) throw ConfigError("reference.grid needs two entries");
      g.grid_width = grid[0];
      g.grid_height = grid[1];
      c.reference = g;
    } else if (type == "grid") {
      UniformGridReference u;
      u.lo = doubles(r, "lo", u.lo);
      u.hi = doubles(r, "hi", u.hi);
      u.resolution = get_or(r, "resolution", u.resolution);
      c.reference = u;
    } else if (type == "measure") {
      c.reference_measure = measure_ref(r.contains("measure") ? r.at("measure") : r, base_dir, "reference");
    } else {
      throw ConfigError("reference.type must be gaussian, grid or measure");
    }
  }
  if (doc.contains("solver")) c.solver = parse_solver(doc.at("solver"));

  if (doc.contains("measures")) {
    const Json& ms = doc.at("measures");
    if (!ms.is_array()) throw ConfigError("measures must be an array");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const Json& m = ms[k];
      std::string id;
      if (m.is_string()) {
        id = fs::path(m.get<std::string>()).stem().string();
      } else {
        require_object(m, "measures[" + std::to_string(k) + "]");
        id = get_or<std::string>(m, "id", "m" + std::to_string(k));
      }
      c.measures.push_back({id, measure_ref(m, base_dir, "measures[" + std::to_string(k) + "]")});
    }
  }

  if (doc.contains("families")) {
    const Json& fs_ = doc.at("families");
    if (!fs_.is_array()) throw ConfigError("families must be an array");
    for (std::size_t k = 0; k < fs_.size(); ++k) {
      const Json& f = fs_[k];
      require_object(f, "families[" + std::to_string(k) + "]");
      if (!f.contains("template")) throw ConfigError("families[" + std::to_string(k) + "] needs a template");
      FamilyConfig fc;
      fc.name = get_or<std::string>(f, "name", std::string(1, static_cast<char>('A' + k % 26)));
      FamilySpec& s = fc.spec;
      s.template_measure = measure_ref(f.at("template"), base_dir, "families[" + std::to_string(k) + "].template");
      s.R = get_or(f, "R", 5.0);
      s.eps = get_or(f, "eps", 0.0);
      s.count = get_or<std::size_t>(f, "count", 10);
      s.seed = derive_seed(c.seed, get_or<std::uint64_t>(f, "seed", k));
      s.shift_probability = get_or(f, "shift_probability", s.shift_probability);
      s.scale_min = get_or(f, "scale_min", s.scale_min);
      s.scale_max = get_or(f, "scale_max", s.scale_max);
      s.smoothness = get_or(f, "smoothness", s.smoothness);
      s.bumps = get_or(f, "bumps", s.bumps);
      if (s.eps < 0.0 || !(s.R > 0.0) || s.count < 1) throw ConfigError("family needs eps >= 0, R > 0, count >= 1");
      c.families.push_back(std::move(fc));
    }
  }

  if (doc.contains("distmat")) c.exact_cap = get_or<std::size_t>(doc.at("distmat"), "exact_cap", c.exact_cap);

  c.mnist.seed = c.seed;
  c.mnist.shrinkage = 0.1;
  if (doc.contains("mnist")) {
    const Json& m = doc.at("mnist");
    require_object(m, "mnist");
    if (m.contains("images")) c.mnist_images = resolve(base_dir, m.at("images").get<std::string>());
    if (m.contains("labels")) c.mnist_labels = resolve(base_dir, m.at("labels").get<std::string>());
    const auto digits = get_or(m, "digits", std::vector<int>{1, 2});
    if (digits.size() != 2) throw ConfigError("mnist.digits needs exactly two classes");
    c.mnist.digits = {digits[0], digits[1]};
    c.mnist.train_sizes = get_or(m, "train_sizes", c.mnist.train_sizes);
    c.mnist.test_per_class = get_or(m, "test_per_class", c.mnist.test_per_class);
    c.mnist.trials = get_or(m, "trials", c.mnist.trials);
    c.mnist.shrinkage = get_or(m, "shrinkage", c.mnist.shrinkage);
    c.mnist.mass_floor = get_or(m, "mass_floor", c.mnist.mass_floor);
    c.mnist.scale_min = get_or(m, "scale_min", c.mnist.scale_min);
    c.mnist.scale_max = get_or(m, "scale_max", c.mnist.scale_max);
    if (c.mnist.trials < 1) throw ConfigError("mnist.trials must be at least 1");
  }
  if (const auto* g = std::get_if<GaussianReference>(&c.reference)) c.mnist.reference = *g;
  c.mnist.solver = c.solver;

  VerifyConfig& v = c.verify;
  v.gap.seed = derive_seed(c.seed, 100);
  v.separation.seed = derive_seed(c.seed, 101);
  if (doc.contains("verify")) {
    const Json& j = doc.at("verify");
    require_object(j, "verify");
    v.oracle_instances = get_or(j, "oracle_instances", v.oracle_instances);
    v.instances = get_or(j, "instances", v.instances);
    v.khat_cases = get_or(j, "khat_cases", v.khat_cases);
    v.gap.eps_values = doubles(j, "gap_eps", v.gap.eps_values);
    v.gap.trials = get_or(j, "gap_trials", v.gap.trials);
    v.gap.atoms = get_or(j, "gap_atoms", v.gap.atoms);
    v.gap.min_exponent = get_or(j, "gap_min_exponent", v.gap.min_exponent);
    v.separability = get_or(j, "separability", v.separability);
    v.inject_crossed_plan = get_or(j, "inject_crossed_plan", v.inject_crossed_plan);
    if (v.gap.trials < 1) throw ConfigError("verify.gap_trials must be at least 1");
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed) {
  Json doc;
  try {
    doc = Json::parse(read_text(path.string()));
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path(), seed);
}

}  // namespace lot::cli

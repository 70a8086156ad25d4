#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "lot/parallel.hpp"
#include "lot/random.hpp"
#include "lot/svg.hpp"

namespace lot::cli {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + p.string() + ": " + ec.message());
}

void write_json(const fs::path& p, const Json& j) { write_text(p.string(), j.dump(2) + "\n"); }

const char* provenance_name(MapProvenance p) {
  switch (p) {
    case MapProvenance::Exact:
      return "exact";
    case MapProvenance::Barycentric:
      return "barycentric";
    case MapProvenance::OneDim:
      return "one_dim";
  }
  return "unknown";
}

const char* solver_name(const SolverConfig& s) {
  switch (s.kind) {
    case SolverConfig::Kind::Exact:
      return "exact";
    case SolverConfig::Kind::Sinkhorn:
      return "sinkhorn";
    case SolverConfig::Kind::Auto:
      return "auto";
  }
  return "unknown";
}

std::string reference_id(const DiscreteMeasure& sigma) { return "sigma-" + measure_fingerprint(sigma); }

}  // namespace

std::vector<NamedMeasure> collect_measures(const ExperimentConfig& config) {
  std::vector<NamedMeasure> all = config.measures;
  for (const auto& f : config.families) {
    const auto maps = sample_affine(f.spec);
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const PerturbedMap g = perturb(maps[k], f.spec.template_measure, f.spec.eps, f.spec.smoothness,
                                     derive_seed(f.spec.seed, k), f.spec.bumps);
      all.push_back({f.name + std::to_string(k), g.apply(f.spec.template_measure)});
    }
  }
  if (all.empty()) throw ConfigError("config lists no measures and no families");
  return all;
}

int cmd_embed(const ExperimentConfig& config, std::ostream& log) {
  const auto measures = collect_measures(config);
  const DiscreteMeasure sigma = config.reference_support();
  const std::string ref = reference_id(sigma);
  const fs::path dir = config.output_dir / "embeddings";
  ensure_dir(dir);
  std::vector<Embedding> embeddings(measures.size());
  parallel_for(measures.size(), [&](std::size_t k) {
    embeddings[k] = embed(sigma, measures[k].measure, config.solver, measures[k].id);
  });
  Json entries = Json::array();
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const std::string file = measures[k].id + ".json";
    write_json(dir / file, embedding_to_json(embeddings[k], ref));
    entries.push_back({{"id", measures[k].id},
                       {"file", file},
                       {"fingerprint", measure_fingerprint(measures[k].measure)},
                       {"provenance", provenance_name(embeddings[k].provenance)}});
  }
  write_json(dir / "manifest.json", Json{{"reference_id", ref},
                                         {"reference_size", sigma.size()},
                                         {"dim", sigma.dim()},
                                         {"solver", solver_name(config.solver)},
                                         {"seed", config.seed},
                                         {"embeddings", entries}});
  write_measure((dir / "reference.json").string(), sigma);
  log << "embedded " << measures.size() << " measures against " << ref << " (" << sigma.size() << " atoms)\n";
  return kOk;
}

int cmd_distmat(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  const auto named = collect_measures(config);
  std::vector<DiscreteMeasure> measures;
  std::vector<std::string> labels;
  for (const auto& m : named) {
    measures.push_back(m.measure);
    labels.push_back(m.id);
  }
  const bool exact = options.exact && measures.size() <= config.exact_cap;
  if (options.exact && !exact) {
    log << "exact matrix skipped: " << measures.size() << " measures exceed the cap of " << config.exact_cap << "\n";
  }
  DistanceMatrix lot, w2;
  const DistmatTiming t = timed_distance_matrices(config.reference_support(), measures, labels, config.solver, exact,
                                                  &lot, &w2);
  ensure_dir(config.output_dir);
  write_text((config.output_dir / "lot_distances.csv").string(), distance_matrix_to_csv(lot));
  log << std::setprecision(4);
  log << "timing: embeds=" << t.embeds << " in " << t.embed_seconds << " s; lot distances=" << t.lot_distances
      << " in " << t.lot_distance_seconds << " s\n";
  if (exact) {
    write_text((config.output_dir / "exact_distances.csv").string(), distance_matrix_to_csv(w2));
    const double min_slack = (lot.entries - w2.entries).minCoeff();
    log << "timing: exact solves=" << t.exact_solves << " in " << t.exact_seconds << " s\n";
    log << "timing: lot path " << (t.embed_seconds + t.lot_distance_seconds < t.exact_seconds ? "faster" : "slower")
        << " than exact path (speedup " << t.exact_seconds / (t.embed_seconds + t.lot_distance_seconds) << "x)\n";
    log << "min(lot - exact) = " << min_slack << "\n";
  }
  return kOk;
}

int cmd_gen(const ExperimentConfig& config, std::ostream& log) {
  const auto measures = collect_measures(config);
  const fs::path dir = config.output_dir / "measures";
  ensure_dir(dir);
  Json entries = Json::array();
  for (const auto& m : measures) {
    write_measure((dir / (m.id + ".json")).string(), m.measure);
    entries.push_back({{"id", m.id}, {"file", m.id + ".json"}, {"fingerprint", measure_fingerprint(m.measure)}});
  }
  Json manifest{{"seed", config.seed}, {"measures", entries}};
  if (config.families.size() == 2) {
    const auto data = make_two_class_dataset(config.families[0].spec, config.families[1].spec, 10);
    manifest["two_class"] = {{"min_cross_w2", data.min_cross_w2},
                             {"subsample", data.subsample},
                             {"same_orbit_flag", data.same_orbit_flag}};
    log << "min cross-class W2 on " << data.subsample << "x" << data.subsample
        << " subsample: " << data.min_cross_w2 << (data.same_orbit_flag ? " (same orbit)" : "") << "\n";
  }
  write_json(dir / "manifest.json", manifest);
  log << "wrote " << measures.size() << " measures to " << dir.string() << "\n";
  return kOk;
}

int cmd_mnist(const ExperimentConfig& config, std::ostream& log) {
  if (!config.mnist_images || !config.mnist_labels) throw ConfigError("mnist.images and mnist.labels are required");
  const auto pool = load_idx(config.mnist_images->string(), config.mnist_labels->string());
  const MnistResult r = run_mnist(pool, config.mnist);
  ensure_dir(config.output_dir);

  Json rows = Json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "train_per_class,lot_mean,lot_std,pca_mean,pca_std\n";
  log << std::fixed << std::setprecision(4);
  for (std::size_t s = 0; s < r.train_sizes.size(); ++s) {
    rows.push_back({{"train_per_class", r.train_sizes[s]},
                    {"lot", eval_report_to_json(r.lot[s])},
                    {"pca", eval_report_to_json(r.pca[s])}});
    csv << r.train_sizes[s] << ',' << r.lot[s].mean << ',' << r.lot[s].stddev << ',' << r.pca[s].mean << ','
        << r.pca[s].stddev << '\n';
    log << "N=" << r.train_sizes[s] << "  lot " << r.lot[s].mean << " +- " << r.lot[s].stddev << "  pca "
        << r.pca[s].mean << " +- " << r.pca[s].stddev << "\n";
  }
  write_json(config.output_dir / "mnist_report.json",
             Json{{"seed", config.seed},
                  {"digits", config.mnist.digits},
                  {"trials", config.mnist.trials},
                  {"test_per_class", config.mnist.test_per_class},
                  {"shrinkage", config.mnist.shrinkage},
                  {"reference_size", r.reference_size},
                  {"feature_dim", 2 * r.reference_size},
                  {"pca_dim", r.pca_dim},
                  {"results", rows}});
  write_text((config.output_dir / "mnist_curve.csv").string(), csv.str());
  const int first = r.train_sizes.front();
  const int last = r.train_sizes.back();
  for (const auto& sc : r.scatters) {
    if (sc.train_size != first && sc.train_size != last) continue;
    const auto path = config.output_dir / ("mnist_scatter_N" + std::to_string(sc.train_size) + ".svg");
    emit_svg_scatter(sc.points, sc.labels, path.string(),
                     "LDA coordinates, N = " + std::to_string(sc.train_size) + " per class");
  }
  return kOk;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& log) {
  const VerifyConfig& v = config.verify;
  const std::uint64_t s = config.seed;
  std::vector<SuiteResult> results;
  results.push_back(oracle_suite(v.oracle_instances, derive_seed(s, 1)));
  results.push_back(isometry_1d_suite(v.instances, derive_seed(s, 2)));
  results.push_back(shift_scale_suite(v.instances, derive_seed(s, 3)));
  results.push_back(sandwich_suite(v.instances, derive_seed(s, 4)));
  results.push_back(cyclic_monotonicity_suite(v.instances, derive_seed(s, 5), v.inject_crossed_plan));
  GapCurve curve;
  results.push_back(gap_curve_suite(v.gap, &curve));
  results.push_back(khat_suite(v.khat_cases, derive_seed(s, 6)));
  if (v.separability) results.push_back(separability_suite(v.separation));

  ensure_dir(config.output_dir);
  write_json(config.output_dir / "gap_curve.json", gap_curve_to_json(curve));
  write_text((config.output_dir / "gap_curve.csv").string(), gap_curve_to_csv(curve));

  bool all = true;
  Json suites = Json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    suites.push_back(suite_to_json(r));
    log << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
    if (r.name == "separability") write_json(config.output_dir / "bounds_report.json", r.metrics.at("bounds"));
  }
  write_json(config.output_dir / "verify_report.json", Json{{"seed", s}, {"passed", all}, {"suites", suites}});
  return all ? kOk : kSuiteFailure;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear optimal transport embeddings"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  RunOptions options;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_dir, "override the output directory");
  };
  auto* embed_cmd = app.add_subcommand("embed", "embed every measure against the reference");
  auto* distmat_cmd = app.add_subcommand("distmat", "LOT distance matrix, optionally with exact W2");
  auto* mnist_cmd = app.add_subcommand("mnist", "two-digit MNIST classification experiment");
  auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
  auto* gen_cmd = app.add_subcommand("gen", "write the synthetic family measures");
  for (auto* sub : {embed_cmd, distmat_cmd, mnist_cmd, verify_cmd, gen_cmd}) add_common(sub);
  distmat_cmd->add_flag("--exact", options.exact, "also compute pairwise exact W2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kConfigError;
  }

  try {
    ExperimentConfig config = load_config(config_path, seed);
    if (out_dir) config.output_dir = *out_dir;
    if (embed_cmd->parsed()) return cmd_embed(config, out);
    if (distmat_cmd->parsed()) return cmd_distmat(config, options, out);
    if (mnist_cmd->parsed()) return cmd_mnist(config, out);
    if (verify_cmd->parsed()) return cmd_verify(config, out);
    return cmd_gen(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::Io:
      case ErrorCode::BadMagic:
      case ErrorCode::TruncatedFile:
      case ErrorCode::CountMismatch:
      case ErrorCode::InvalidArgument:
      case ErrorCode::DimensionMismatch:
      case ErrorCode::InfeasibleRadius:
        return kConfigError;
      default:
        return kSuiteFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSuiteFailure;
  }
}

}  // namespace lot::cli

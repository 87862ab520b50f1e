#include "trajeval/app.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "trajeval/error.hpp"
#include "trajeval/framework/report.hpp"
#include "trajeval/framework/selection.hpp"
#include "trajeval/framework/sweep.hpp"
#include "trajeval/generators/generators.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/manifest.hpp"
#include "trajeval/metrics/realism.hpp"
#include "trajeval/metrics/registry.hpp"
#include "trajeval/mobility/io.hpp"
#include "trajeval/mobility/profile.hpp"
#include "trajeval/mobility/split.hpp"
#include "trajeval/privacy/histogram.hpp"
#include "trajeval/privacy/mia.hpp"
#include "trajeval/privacy/tul.hpp"
#include "trajeval/random.hpp"

namespace trajeval::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using mobility::Dataset;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

class PartialFailure : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Flags {
  std::string dataset;
  std::vector<std::string> syn;
  std::string aux;
  std::string layers;
  std::string preset;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t seeds = 4;
  std::string out;
  std::string format;
  bool allow_partial = false;
  double cell_edge_m = 0.0;

  // attack / generator
  std::string generator;
  double sigma_m = 0.0;
  double flip = 0.0;
  std::string scenario;
  std::string metric;
  double keep_fraction = 1.0;
  std::size_t targets_per_class = 100;
  double train_fraction = 2.0 / 3.0;

  // sweep
  std::vector<std::string> metrics;
  double min_edge_m = 100.0;
  double max_edge_m = 1000.0;
  double step_m = 50.0;
  std::size_t offsets = 3;

  std::string input;
};

/// Resolves settings with precedence flag > config file > default and keeps
/// the resolved values for the manifest.
class Settings {
 public:
  Settings(const CLI::App& command, const std::string& config_path, std::set<std::string> allowed)
      : command_(command) {
    if (config_path.empty()) return;
    config_ = json::parse(read_file(config_path));
    if (!config_.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, _] : config_.items())
      if (!allowed.count(key)) throw UsageError("unknown config key '" + key + "' for this command");
  }

  template <typename T>
  T pick(const std::string& key, const std::string& flag, const T& flag_value, const T& fallback) {
    T value = fallback;
    if (!flag.empty() && command_.count(flag) > 0) value = flag_value;
    else if (config_.contains(key)) value = config_.at(key).get<T>();
    resolved_[key] = value;
    return value;
  }

  bool has(const std::string& key) const { return config_.contains(key); }
  const json& raw(const std::string& key) const { return config_.at(key); }
  json& resolved() { return resolved_; }

 private:
  const CLI::App& command_;
  json config_ = json::object();
  json resolved_ = json::object();
};

/// Writes outputs under one directory and records them in the manifest.
class Run {
 public:
  Run(std::string command, const std::string& out_flag) : out_dir_(resolve_out(out_flag)) {
    manifest_.command = std::move(command);
    manifest_.tool_version = TRAJEVAL_VERSION;
    manifest_.started_at = utc_now();
  }

  void input(const std::string& path) { manifest_.inputs.push_back({path, file_sha256(path)}); }

  fs::path write(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir_);
    const auto path = out_dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
    manifest_.outputs.push_back({name, sha256_hex(content)});
    return path;
  }

  void finish(json resolved, std::vector<std::uint64_t> seeds) {
    manifest_.config = resolved.dump();
    manifest_.config_hash = sha256_hex(manifest_.config);
    manifest_.seeds = std::move(seeds);
    manifest_.finished_at = utc_now();
    fs::create_directories(out_dir_);
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out << manifest_to_json(manifest_);
    if (!out) throw Error("cannot write manifest");
  }

  const fs::path& dir() const { return out_dir_; }

 private:
  static fs::path resolve_out(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("TRAJEVAL_OUT"); env && *env) return env;
    return ".";
  }

  fs::path out_dir_;
  RunManifest manifest_;
};

Dataset load_real(Run& run, const std::string& path) {
  if (path.empty()) throw UsageError("--dataset is required");
  run.input(path);
  return mobility::load_dataset(path);
}

/// Loads a dataset into the projection and vocabulary of `real`.
Dataset load_companion(Run& run, const std::string& path, const Dataset& real) {
  run.input(path);
  mobility::IngestOptions options;
  options.crs = real.metadata().crs;
  options.vocabulary = real.vocabulary();
  return mobility::load_dataset(path, options);
}

std::string model_name(const std::string& path) { return fs::path(path).stem().string(); }

generators::GeneratorParams generator_params(Settings& s, const Flags& f) {
  generators::GeneratorParams p;
  if (s.has("generator")) p = generators::generator_params_from_json(s.raw("generator").dump());
  p.kind = s.pick<std::string>("generator_kind", "--generator", f.generator, p.kind);
  p.sigma_m = s.pick<double>("sigma_m", "--sigma", f.sigma_m, p.sigma_m);
  p.flip_probability = s.pick<double>("flip_probability", "--flip", f.flip, p.flip_probability);
  p.cell_edge_m = s.pick<double>("generator_cell_edge_m", "--cell-edge", f.cell_edge_m, p.cell_edge_m);
  s.resolved()["generator"] = json::parse(generators::generator_params_to_json(p));
  return p;
}

std::string profile_table(const mobility::DatasetProfile& p, char sep) {
  std::string out;
  const auto columns = mobility::profile_columns();
  const auto values = mobility::profile_values(p);
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? std::string(1, sep) : "") + columns[i];
  out += '\n';
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? std::string(1, sep) : "") + fmt::format("{:.3f}", values[i]);
  out += '\n';
  return out;
}

int cmd_profile(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {"format"});
  Run run("profile", f.out);
  const auto format = s.pick<std::string>("format", "--format", f.format, "csv");
  const Dataset d = load_real(run, f.dataset);
  const auto p = mobility::profile_dataset(d);
  if (format == "csv") {
    run.write("profile.csv", profile_table(p, ','));
  } else if (format == "json") {
    json j;
    const auto columns = mobility::profile_columns();
    const auto values = mobility::profile_values(p);
    for (std::size_t i = 0; i < columns.size(); ++i) j[columns[i]] = values[i];
    run.write("profile.json", j.dump(2) + "\n");
  } else {
    throw UsageError("profile supports --format csv or json");
  }
  out << profile_table(p, '\t');
  run.finish(s.resolved(), {});
  return kOk;
}

int cmd_grid_select(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {"step_m"});
  Run run("grid select", f.out);
  grid::CellSizeOptions options;
  options.step_m = s.pick<double>("step_m", "--step", f.step_m, options.step_m);
  const Dataset d = load_real(run, f.dataset);
  const auto sel = grid::select_cell_size(d, options);

  std::string csv = "edge_m,unique_transition_fraction,self_transition_fraction,occupancy_ratio\n";
  for (std::size_t i = 0; i < sel.candidates.size(); ++i) {
    const auto& g = sel.diagnostics[i];
    csv += fmt::format("{:.3f},{:.6f},{:.6f},{:.6f}\n", sel.candidates[i], g.unique_transition_fraction,
                       g.self_transition_fraction, g.occupancy_ratio);
  }
  run.write("grid_candidates.csv", csv);
  json j;
  j["edge_m"] = sel.edge_m;
  j["p10_m"] = sel.p10_m;
  j["p50_m"] = sel.p50_m;
  j["elbows"] = {{"unique_transition_fraction", sel.elbows[0]},
                 {"self_transition_fraction", sel.elbows[1]},
                 {"occupancy_ratio", sel.elbows[2]}};
  if (sel.warning) j["warning"] = *sel.warning;
  run.write("grid_selection.json", j.dump(2) + "\n");
  out << fmt::format("selected cell edge: {:.1f} m (P10 {:.1f} m, P50 {:.1f} m)\n", sel.edge_m, sel.p10_m, sel.p50_m);
  if (sel.warning) out << "warning: " << *sel.warning << '\n';
  run.finish(s.resolved(), {});
  return kOk;
}

std::vector<std::string> default_sweep_metrics(const Dataset& real, const Dataset& syn) {
  std::vector<std::string> ids;
  for (const auto& m : metrics::metric_registry()) {
    if (!m.implemented() || !m.grid_based || m.needs_layers) continue;
    if (m.needs_categories && !(real.has_categories() && syn.has_categories())) continue;
    ids.push_back(m.id);
  }
  return ids;
}

int cmd_grid_sweep(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {"metrics", "min_edge_m", "max_edge_m", "step_m", "offsets_per_axis"});
  Run run("grid sweep", f.out);
  if (f.syn.size() != 1) throw UsageError("grid sweep needs exactly one --syn dataset");
  const Dataset real = load_real(run, f.dataset);
  const Dataset syn = load_companion(run, f.syn.front(), real);
  grid::SweepOptions options;
  options.min_edge_m = s.pick<double>("min_edge_m", "--min-edge", f.min_edge_m, options.min_edge_m);
  options.max_edge_m = s.pick<double>("max_edge_m", "--max-edge", f.max_edge_m, options.max_edge_m);
  options.step_m = s.pick<double>("step_m", "--step", f.step_m, options.step_m);
  options.offsets_per_axis = s.pick<std::size_t>("offsets_per_axis", "--offsets", f.offsets, options.offsets_per_axis);
  const auto ids = s.pick<std::vector<std::string>>("metrics", "--metrics", f.metrics, default_sweep_metrics(real, syn));

  const auto rows = framework::run_stability_sweep(real, syn, ids, options);
  std::ostringstream csv;
  grid::write_sweep_csv(csv, rows);
  run.write("sweep.csv", csv.str());
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.mean ? 0 : 1;
  out << fmt::format("{} rows over {} metrics, {} without a value\n", rows.size(), ids.size(), failed);
  run.finish(s.resolved(), {});
  return kOk;
}

int cmd_evaluate(const CLI::App& cmd, const Flags& f, std::ostream& out, std::ostream& err) {
  Settings s(cmd, f.config, {"preset", "selection", "cell_edge_m", "format", "allow_partial"});
  Run run("evaluate", f.out);
  if (f.syn.empty()) throw UsageError("evaluate needs at least one --syn dataset");

  framework::MetricSelection selection;
  if (cmd.count("--preset") > 0 || !s.has("selection")) {
    const auto name = s.pick<std::string>("preset", "--preset", f.preset, "");
    if (name.empty()) throw UsageError("evaluate needs --preset or a selection in --config");
    selection = framework::preset(name);
  } else {
    selection = framework::selection_from_json(s.raw("selection").dump());
  }
  s.resolved()["selection"] = json::parse(framework::selection_to_json(selection));
  const auto format = framework::report_format_from_string(s.pick<std::string>("format", "--format", f.format, "json"));
  const bool allow_partial = s.pick<bool>("allow_partial", "--allow-partial", f.allow_partial, false);
  const double edge = s.pick<double>("cell_edge_m", "--cell-edge", f.cell_edge_m, 0.0);

  const Dataset real = load_real(run, f.dataset);
  std::vector<std::pair<std::string, Dataset>> models;
  for (const auto& path : f.syn) models.emplace_back(model_name(path), load_companion(run, path, real));

  std::optional<metrics::ConstraintLayers> layers;
  if (!f.layers.empty()) {
    for (const char* name : {"implausible.geojson", "infrastructure.geojson", "roads.geojson"})
      if (fs::exists(fs::path(f.layers) / name)) run.input((fs::path(f.layers) / name).string());
    layers = metrics::load_constraint_layers(f.layers, real.metadata().crs);
  }
  framework::EvaluationEnvironment env;
  env.grid = framework::derive_grid(real, edge > 0.0 ? std::optional<grid::GridSpec>(grid::GridSpec{edge})
                                                     : std::nullopt);
  s.resolved()["grid_edge_m"] = env.grid.cell_edge_m;
  env.layers = layers ? &*layers : nullptr;

  const auto report = framework::evaluate_models(real, models, selection, env);
  if (framework::has_failures(report)) {
    auto list = [&](const framework::UtilityVector& v) {
      for (const auto& e : v.entries)
        if (e.status != metrics::Status::Ok)
          err << fmt::format("{}: {} {} ({})\n", v.model, e.metric, metrics::to_string(e.status), e.note);
    };
    if (report.original) list(*report.original);
    for (const auto& m : report.models) list(m.vector);
    if (!allow_partial) throw PartialFailure("some metrics produced no value; rerun with --allow-partial to emit N/A cells");
  }
  run.write("report" + framework::extension(format), framework::render_report(report, format));

  for (const auto& c : report.columns) out << '\t' << c.id;
  out << '\n';
  auto row = [&](const framework::UtilityVector& v) {
    out << v.model;
    for (const auto& e : v.entries) out << '\t' << framework::format_value(e);
    out << '\n';
  };
  if (report.original) row(*report.original);
  for (const auto& m : report.models) row(m.vector);
  run.finish(s.resolved(), {});
  return kOk;
}

std::vector<double> fractions_from(Settings& s, const std::string& key, std::vector<double> fallback) {
  return s.pick<std::vector<double>>(key, "", {}, std::move(fallback));
}

int cmd_attack_mia(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {"attack", "generator", "partition"});
  Run run("attack mia", f.out);

  privacy::AttackConfig cfg;
  if (s.has("attack")) cfg = privacy::attack_config_from_json(s.raw("attack").dump());
  if (cmd.count("--scenario")) cfg.scenario = privacy::scenario_from_string(f.scenario);
  if (cmd.count("--metric")) cfg.kind = privacy::distance_kind_from_string(f.metric);
  if (cmd.count("--keep-fraction")) cfg.keep_fraction = f.keep_fraction;
  if (cmd.count("--seed")) cfg.seed = f.seed;
  if (cmd.count("--seeds")) cfg.seeds = f.seeds;
  if (cmd.count("--targets-per-class")) cfg.targets_per_class = f.targets_per_class;
  if (cfg.scenario == privacy::Scenario::Masked && !cfg.keep_fraction)
    throw UsageError("masked scenario needs --keep-fraction");
  cfg.validate();
  s.resolved()["attack"] = json::parse(privacy::attack_config_to_json(cfg));
  const bool released_only = cfg.scenario == privacy::Scenario::ReleasedOnly;
  if (released_only && !f.aux.empty())
    throw UsageError("released_only scenario uses no auxiliary data; drop --aux");

  const auto params = generator_params(s, f);
  const Dataset d = load_real(run, f.dataset);
  privacy::TargetSetup setup;
  setup.model = generators::blurring_factory(params);
  std::optional<Dataset> aux;
  if (!f.aux.empty() || released_only) {
    const auto fr = fractions_from(s, "partition", {0.4, 0.3, 0.3});
    if (fr.size() != 3) throw UsageError("partition needs three fractions (train, target, held-out)");
    auto parts = mobility::split_dataset(d, {fr, false}, cfg.seed);
    setup.d_train = std::move(parts[0]);
    setup.q_target = std::move(parts[1]);
    setup.held_out = std::move(parts[2]);
    if (!f.aux.empty()) aux = load_companion(run, f.aux, d);
  } else {
    const auto fr = fractions_from(s, "partition", {0.3, 0.2, 0.2, 0.3});
    if (fr.size() != 4) throw UsageError("partition needs four fractions (train, target, held-out, aux)");
    auto parts = privacy::partition_for_attack(d, fr, cfg.seed);
    setup.d_train = std::move(parts.d_train);
    setup.q_target = std::move(parts.q_target);
    setup.held_out = std::move(parts.held_out);
    aux = std::move(parts.d_aux);
  }

  const auto result = privacy::run_attack(setup, aux ? &*aux : nullptr, cfg);
  run.write("attack.json", privacy::attack_result_to_json(result));
  run.write("decisions.csv", privacy::decisions_to_csv(result));
  run.write("histogram.csv", privacy::histogram_to_csv(privacy::score_histogram(result.runs.front().threshold)));

  out << fmt::format("model {} / scenario {} / metric {}: accuracy {}\n", result.model,
                     privacy::to_string(cfg.scenario), privacy::to_string(cfg.kind),
                     privacy::mean_pm_std(result.mean, result.std_dev));
  std::vector<std::uint64_t> seeds;
  for (const auto& r : result.runs) {
    out << fmt::format("  seed {:016x}: tau {:.3f}, accuracy {:.3f}\n", r.seed, r.threshold.tau, r.accuracy);
    if (r.threshold.warning) out << "  warning: " << *r.threshold.warning << '\n';
    seeds.push_back(r.seed);
  }
  run.finish(s.resolved(), seeds);
  return kOk;
}

int cmd_attack_tul(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {"generator", "train_fraction", "metric", "seed"});
  Run run("attack tul", f.out);
  const auto params = generator_params(s, f);
  const double train_fraction = s.pick<double>("train_fraction", "--train-fraction", f.train_fraction, 2.0 / 3.0);
  const auto kind = privacy::distance_kind_from_string(s.pick<std::string>("metric", "--metric", f.metric, "frechet"));
  const auto seed = s.pick<std::uint64_t>("seed", "--seed", f.seed, 0);

  const Dataset d = load_real(run, f.dataset);
  const auto split = privacy::split_for_tul(d, train_fraction, seed);
  auto model = generators::make_blurring_model(params);
  model->fit(split.d_train);
  const Dataset s_train = model->blur(split.d_train, mix_seed(seed, 1));
  const Dataset s_target = model->blur(split.q_target, mix_seed(seed, 2));
  const auto results = privacy::tul_protocols(split.d_train, split.q_target, s_train, s_target, [kind] {
    return std::make_unique<privacy::NearestTraceSolver>(kind);
  });
  run.write("tul.json", privacy::tul_results_to_json(results));
  for (const auto& r : results)
    out << fmt::format("{}: real {:.3f}, synthetic {:.3f}, gap {:.1f} pp\n", privacy::to_string(r.protocol),
                       r.real_accuracy, r.synthetic_accuracy, r.gap_pp);
  run.finish(s.resolved(), {seed});
  return kOk;
}

int cmd_plot(const CLI::App& cmd, const Flags& f, std::ostream& out) {
  Settings s(cmd, f.config, {});
  Run run("plot", f.out);
  run.input(f.input);
  const fs::path input(f.input);
  const std::string text = read_file(input);
  std::string svg;
  if (input.extension() == ".csv") {
    svg = privacy::histogram_to_svg(privacy::histogram_from_csv(text));
  } else if (input.extension() == ".json") {
    svg = framework::report_to_svg(framework::report_from_json(text));
  } else {
    throw UsageError("plot expects a histogram .csv or a report .json");
  }
  const auto path = run.write(input.stem().string() + ".svg", svg);
  out << path.string() << '\n';
  run.finish(s.resolved(), {});
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Utility and privacy evaluation of synthetic and blurred mobility datasets", "trajeval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRAJEVAL_VERSION);
  Flags f;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
    c->add_option("--out", f.out, "Output directory (default $TRAJEVAL_OUT or .)");
  };
  auto dataset = [&](CLI::App* c) {
    c->add_option("--dataset", f.dataset, "Real dataset CSV")->required()->check(CLI::ExistingFile);
  };
  auto generator = [&](CLI::App* c) {
    c->add_option("--generator", f.generator, "identity | gaussian_jitter | grid_snap | marginal_resampler");
    c->add_option("--sigma", f.sigma_m, "Jitter scale in meters");
    c->add_option("--flip", f.flip, "Category flip probability");
    c->add_option("--cell-edge", f.cell_edge_m, "Grid edge in meters");
  };

  auto* profile = app.add_subcommand("profile", "Dataset descriptors");
  common(profile);
  dataset(profile);
  profile->add_option("--format", f.format, "csv | json");

  auto* grid_cmd = app.add_subcommand("grid", "Grid size selection and stability sweep");
  grid_cmd->require_subcommand(1);
  auto* select = grid_cmd->add_subcommand("select", "Pick a cell edge from segment-length percentiles");
  common(select);
  dataset(select);
  select->add_option("--step", f.step_m, "Candidate spacing in meters");
  auto* sweep = grid_cmd->add_subcommand("sweep", "Grid-dependent metrics across edges and offsets");
  common(sweep);
  dataset(sweep);
  sweep->add_option("--syn", f.syn, "Synthetic dataset CSV")->check(CLI::ExistingFile);
  sweep->add_option("--metrics", f.metrics, "Metric ids")->delimiter(',');
  sweep->add_option("--min-edge", f.min_edge_m);
  sweep->add_option("--max-edge", f.max_edge_m);
  sweep->add_option("--step", f.step_m);
  sweep->add_option("--offsets", f.offsets, "Offsets per axis");

  auto* evaluate = app.add_subcommand("evaluate", "Utility vectors for one or more synthetic datasets");
  common(evaluate);
  dataset(evaluate);
  evaluate->add_option("--syn", f.syn, "Synthetic dataset CSV (repeatable)")->check(CLI::ExistingFile);
  evaluate->add_option("--preset", f.preset, "use-case-a | use-case-b");
  evaluate->add_option("--layers", f.layers, "Directory with constraint GeoJSON layers")->check(CLI::ExistingDirectory);
  evaluate->add_option("--format", f.format, "json | csv | svg");
  evaluate->add_option("--cell-edge", f.cell_edge_m, "Grid edge in meters (default: selected from data)");
  evaluate->add_flag("--allow-partial", f.allow_partial, "Emit N/A cells for metrics that fail");

  auto* attack = app.add_subcommand("attack", "Privacy attacks against blurring models");
  attack->require_subcommand(1);
  auto* mia = attack->add_subcommand("mia", "Threshold membership inference");
  common(mia);
  dataset(mia);
  generator(mia);
  mia->add_option("--aux", f.aux, "Auxiliary dataset CSV")->check(CLI::ExistingFile);
  mia->add_option("--scenario", f.scenario, "main | masked | released_only");
  mia->add_option("--metric", f.metric, "frechet | custom");
  mia->add_option("--keep-fraction", f.keep_fraction, "Visible share of each target (masked)");
  mia->add_option("--seed", f.seed);
  mia->add_option("--seeds", f.seeds, "Number of runs");
  mia->add_option("--targets-per-class", f.targets_per_class);
  auto* tul = attack->add_subcommand("tul", "Legacy and fixed trajectory-user linking protocols");
  common(tul);
  dataset(tul);
  generator(tul);
  tul->add_option("--metric", f.metric, "frechet | custom");
  tul->add_option("--seed", f.seed);
  tul->add_option("--train-fraction", f.train_fraction);

  auto* plot = app.add_subcommand("plot", "Render a score histogram CSV or a report JSON as SVG");
  common(plot);
  plot->add_option("input", f.input, "Histogram .csv or report .json")->required()->check(CLI::ExistingFile);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (profile->parsed()) return cmd_profile(*profile, f, out);
    if (select->parsed()) return cmd_grid_select(*select, f, out);
    if (sweep->parsed()) return cmd_grid_sweep(*sweep, f, out);
    if (evaluate->parsed()) return cmd_evaluate(*evaluate, f, out, err);
    if (mia->parsed()) return cmd_attack_mia(*mia, f, out);
    if (tul->parsed()) return cmd_attack_tul(*tul, f, out);
    if (plot->parsed()) return cmd_plot(*plot, f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PartialFailure& e) {
    err << "error: " << e.what() << '\n';
    return kPartial;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace trajeval::cli

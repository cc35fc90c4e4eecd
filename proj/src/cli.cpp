#include "geonet/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geonet/clustering.hpp"
#include "geonet/errors.hpp"
#include "geonet/io.hpp"
#include "geonet/isolation.hpp"
#include "geonet/parallel.hpp"
#include "geonet/simulate.hpp"
#include "geonet/threshold.hpp"

namespace geonet::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw io::ParseError(line_no, "expected key=value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw io::ParseError(line_no, "empty key");
    entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return entries;
}

namespace {

// Radius selection shared by isolated/cluster/poisson-check.
struct RadiusFlags {
  std::optional<double> radius;
  std::optional<double> l;
  std::optional<double> af;

  void add(CLI::App* cmd) {
    auto* r = cmd->add_option("--radius", radius, "Fixed affinity radius");
    auto* lo = cmd->add_option("--l", l, "Exponent l in (0,1): radius a_f*(s, p, l)");
    auto* a = cmd->add_option("--af", af, "Reference radius; l is derived from it at size s");
    r->excludes(lo)->excludes(a);
    lo->excludes(a);
  }

  bool given() const { return radius || l || af; }

  struct Resolved {
    double radius = 0.0;
    std::optional<double> l;
  };

  Resolved resolve(std::size_t size, double p) const {
    if (radius) return {*radius, std::nullopt};
    const double s = static_cast<double>(size);
    if (l) return {a_f_star(s, p, *l), *l};
    if (af) {
      const double derived = l_from_af(*af, p, s);
      return {a_f_star(s, p, derived), derived};
    }
    throw DomainError("one of --radius, --l, --af is required");
  }
};

struct CommonFlags {
  std::uint64_t seed = 42;
  std::string metric = "torus";
  std::optional<unsigned> threads;
  std::string config;

  void add(CLI::App* cmd, const char* default_metric) {
    metric = default_metric;
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    cmd->add_option("--metric", metric, "torus | bounded")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads (fallback: GEONET_THREADS)");
    cmd->add_option("--config", config, "Flat key=value config file; flags override it");
  }

  unsigned thread_count() const { return threads && *threads > 0 ? *threads : default_threads(); }
  Metric parsed_metric() const { return metric_from_string(metric.c_str()); }
};

MarkedPointSet load_marked(const std::string& path, double p, std::uint64_t seed) {
  io::PointTable table = io::read_points_csv(fs::path(path));
  if (table.active) return with_marks(std::move(table.points), std::move(*table.active));
  Rng rng = Rng::derive(seed, 0, StreamTag::Marking);
  MarkedPointSet marked = mark_activity(table.points, p, rng);
  return marked;
}

void emit(std::ostream& out, const json& j, bool as_json) {
  if (as_json) {
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (value.is_structured()) {
      out << key << ": " << value.dump() << '\n';
    } else if (value.is_string()) {
      out << key << ": " << value.get<std::string>() << '\n';
    } else {
      out << key << ": " << value.dump() << '\n';
    }
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  SimParams params;
  CommonFlags common;
  std::string proposal = "uniform";
  std::uint64_t iterations = 100000;
  std::uint64_t snapshot_every = 0;
  std::string output_dir = "geonet_run";
  bool events = false;
  bool timing = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Run the event-driven network simulation");
    cmd->add_option("--vr", params.invitation_rate, "Invitation rate per member")->capture_default_str();
    cmd->add_option("--dr", params.departure_rate, "Departure rate per member")->capture_default_str();
    cmd->add_option("--Af", params.max_affinity_rate, "Maximum affinity rate")->capture_default_str();
    cmd->add_option("--af", params.affinity_radius, "Affinity radius in (0, 1/2]")->capture_default_str();
    cmd->add_option("--sigma", params.sigma, "Dispersal standard deviation")->capture_default_str();
    cmd->add_option("--p", params.activity_probability, "Activity probability")->capture_default_str();
    cmd->add_option("--s0", params.initial_size, "Initial size")->capture_default_str();
    cmd->add_option("--affinity-proposal", proposal, "uniform | gaussian")->capture_default_str();
    cmd->add_option("--max-resample", params.max_resample, "Kernel resampling cap")->capture_default_str();
    cmd->add_option("--iterations", iterations, "Number of events (iterations)")->capture_default_str();
    cmd->add_option("--snapshot-every", snapshot_every, "Snapshot cadence in events (0: initial+final)")
        ->capture_default_str();
    cmd->add_option("--output-dir", output_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--events", events, "Also write the full event log");
    cmd->add_flag("--timing", timing, "Record wall-clock time in the manifest");
    common.add(cmd, "bounded");
  }

  int execute(std::ostream& out) {
    params.affinity_proposal = affinity_proposal_from_string(proposal.c_str());
    params.metric = common.parsed_metric();
    params.validate();

    const auto started = std::chrono::steady_clock::now();
    RunOptions opts;
    opts.max_events = iterations;
    opts.snapshot_every = snapshot_every;
    opts.record_events = events;
    const Trajectory traj = run(params, opts, common.seed);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw io::IoError("cannot create output directory '" + output_dir + "': " + ec.message());

    json snapshots = json::array();
    for (const Snapshot& snap : traj.snapshots) {
      const std::string name = "snapshot_" + std::to_string(snap.event_count) + ".csv";
      io::write_file(fs::path(output_dir) / name,
                     [&](std::ostream& f) { io::write_points_csv(f, snap.state.points); });
      snapshots.push_back({{"event_count", snap.event_count},
                           {"time", snap.state.time},
                           {"size", snap.state.size()},
                           {"file", name}});
    }
    if (events) {
      io::write_file(fs::path(output_dir) / "events.csv",
                     [&](std::ostream& f) { io::write_event_log_csv(f, traj.events); });
    }
    const NetworkState& final_state = traj.snapshots.back().state;
    const auto extinct = extinction_time(traj);
    json config = io::to_json(params);
    config["seed"] = common.seed;
    config["iterations"] = iterations;
    config["snapshot_every"] = snapshot_every;
    config["output_dir"] = output_dir;
    json manifest = {
        {"tool", "geonet"},
        {"version", kToolVersion},
        {"seed", common.seed},
        {"config", config},
        {"snapshots", snapshots},
        {"events_file", events ? json("events.csv") : json(nullptr)},
        {"final_size", final_state.size()},
        {"final_time", final_state.time},
        {"event_count", final_state.event_count},
        {"extinct", extinct.has_value()},
    };
    if (timing) manifest["wall_clock_seconds"] = wall;
    io::write_text_file(fs::path(output_dir) / "manifest.json", manifest.dump(2) + "\n");
    out << "seed: " << common.seed << "\nevents: " << final_state.event_count
        << "\nfinal_size: " << final_state.size() << "\nsnapshots: " << traj.snapshots.size()
        << "\nmanifest: " << (fs::path(output_dir) / "manifest.json").string() << '\n';
    return kOk;
  }
};

// --------------------------------------------------------------- threshold

struct ThresholdCmd {
  double size = 0.0;
  double p = 1.0;
  std::optional<double> l;
  std::optional<double> af;
  int kappa = 2;
  std::string branch = "principal";
  bool as_json = false;
  CommonFlags common;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("threshold", "Compute the adaptive threshold a_f* and related quantities");
    cmd->add_option("--size", size, "Network size s")->required();
    cmd->add_option("--p", p, "Activity probability")->capture_default_str();
    auto* lo = cmd->add_option("--l", l, "Exponent l in (0,1)");
    auto* ao = cmd->add_option("--af", af, "Reference radius: derive l from it");
    lo->excludes(ao);
    cmd->add_option("--kappa", kappa, "Multiplicity for alpha*")->capture_default_str();
    cmd->add_option("--branch", branch, "principal | secondary")->capture_default_str();
    cmd->add_flag("--json", as_json, "Machine-readable output");
    common.add(cmd, "torus");
  }

  int execute(std::ostream& out) {
    if (!l && !af) throw DomainError("one of --l or --af is required");
    const double exponent = l ? *l : l_from_af(*af, p, size);
    const double radius = a_f_star(size, p, exponent);
    LambertBranch lb = LambertBranch::Principal;
    if (branch == "secondary") {
      lb = LambertBranch::Secondary;
    } else if (branch != "principal") {
      throw DomainError("--branch must be principal or secondary");
    }
    const AlphaStarResult alpha = alpha_star(size, kappa, lb);
    const double f = f_choice(size, exponent, alpha.alpha);
    const PsiReport ps = psi(size, f, alpha.alpha);
    json j = {
        {"seed", common.seed},
        {"size", size},
        {"p", p},
        {"l", exponent},
        {"a_f_star", radius},
        {"alpha_star", io::to_json(alpha)},
        {"f", f},
        {"psi", io::to_json(ps)},
    };
    emit(out, j, as_json);
    return kOk;
  }
};

// ---------------------------------------------------------------- isolated

struct IsolatedCmd {
  std::string points;
  RadiusFlags radius;
  double p = 1.0;
  bool as_json = false;
  bool ids = false;
  CommonFlags common;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("isolated", "Count isolated members of a point file");
    cmd->add_option("--points", points, "CSV with x,y[,active[,label]]")->required();
    radius.add(cmd);
    cmd->add_option("--p", p, "Activity probability (marks drawn when the file has none)")
        ->capture_default_str();
    cmd->add_flag("--json", as_json, "Machine-readable output");
    cmd->add_flag("--ids", ids, "List isolated ids in text output");
    common.add(cmd, "torus");
  }

  int execute(std::ostream& out) {
    const MarkedPointSet marked = load_marked(points, p, common.seed);
    const auto r = radius.resolve(marked.size(), p);
    const IsolationCounts counts = isolated_counts(marked, r.radius, common.parsed_metric());
    json j = {{"seed", common.seed},
              {"size", marked.size()},
              {"radius", r.radius},
              {"l", r.l ? json(*r.l) : json(nullptr)},
              {"metric", common.metric},
              {"n0", counts.n0},
              {"na", counts.na}};
    if (as_json || ids) j["isolated_ids"] = counts.isolated_ids;
    emit(out, j, as_json);
    return kOk;
  }
};

// ----------------------------------------------------------- poisson-check

struct PoissonCheckCmd {
  std::optional<std::size_t> uniform;
  std::optional<double> poisson_mean;
  bool simulated = false;
  SimParams sim;
  std::string proposal = "uniform";
  std::uint64_t events = 10000;
  std::optional<double> c;
  RadiusFlags radius;
  double p = 1.0;
  std::size_t reps = 1000;
  bool as_json = false;
  CommonFlags common;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("poisson-check", "Replicate isolated counts and fit a Poisson law");
    auto* u = cmd->add_option("--uniform", uniform, "Exactly n uniform points per replication");
    auto* pm = cmd->add_option("--poisson-points", poisson_mean, "Poisson(mean) many uniform points");
    auto* sm = cmd->add_flag("--simulated", simulated, "Final states of simulation runs");
    u->excludes(pm)->excludes(sm);
    pm->excludes(sm);
    cmd->add_option("--vr", sim.invitation_rate)->capture_default_str();
    cmd->add_option("--dr", sim.departure_rate)->capture_default_str();
    cmd->add_option("--Af", sim.max_affinity_rate)->capture_default_str();
    cmd->add_option("--sim-af", sim.affinity_radius, "Simulation affinity radius")->capture_default_str();
    cmd->add_option("--sigma", sim.sigma)->capture_default_str();
    cmd->add_option("--s0", sim.initial_size)->capture_default_str();
    cmd->add_option("--affinity-proposal", proposal)->capture_default_str();
    cmd->add_option("--events", events, "Events per simulated replication")->capture_default_str();
    cmd->add_option("--C", c, "Radius sqrt((ln n + C)/(pi n)) with n the point-law size");
    radius.add(cmd);
    cmd->add_option("--p", p, "Activity probability")->capture_default_str();
    cmd->add_option("--reps", reps, "Replications")->capture_default_str();
    cmd->add_flag("--json", as_json, "Machine-readable output");
    common.add(cmd, "torus");
  }

  int execute(std::ostream& out) {
    if (!uniform && !poisson_mean && !simulated) {
      throw DomainError("one of --uniform, --poisson-points, --simulated is required");
    }
    if (reps < 1) throw DomainError("--reps must be >= 1");
    if (c && radius.given()) throw DomainError("--C excludes --radius/--l/--af");
    const Metric metric = common.parsed_metric();
    const unsigned threads = common.thread_count();

    PointLaw law;
    double nominal = 0.0;
    if (uniform) {
      law = UniformFixed{*uniform};
      nominal = static_cast<double>(*uniform);
    } else if (poisson_mean) {
      law = UniformPoisson{*poisson_mean};
      nominal = *poisson_mean;
    } else {
      sim.affinity_proposal = affinity_proposal_from_string(proposal.c_str());
      sim.validate();
      law = Simulated{sim, events};
      if (c) throw DomainError("--C needs --uniform or --poisson-points");
    }

    RadiusRule rule;
    std::optional<double> fixed_radius;
    if (c) {
      const double r = std::sqrt((std::log(nominal) + *c) / (std::numbers::pi * nominal));
      if (!(r > 0.0 && r <= 0.5)) throw DomainError("--C gives radius outside (0, 1/2]");
      rule = r;
      fixed_radius = r;
    } else if (radius.radius) {
      rule = *radius.radius;
      fixed_radius = *radius.radius;
    } else if (radius.l) {
      rule = AdaptiveRadius{*radius.l};
    } else if (radius.af) {
      if (nominal <= 0.0) throw DomainError("--af needs --uniform or --poisson-points to fix s");
      const double l = l_from_af(*radius.af, p, nominal);
      rule = AdaptiveRadius{l};
    } else {
      throw DomainError("one of --C, --radius, --l, --af is required");
    }

    const auto counts = replicate_counts(law, rule, p, reps, common.seed, metric, threads);
    std::vector<std::uint64_t> n0;
    std::vector<std::uint64_t> na;
    for (const auto& cnt : counts) {
      n0.push_back(cnt.n0);
      na.push_back(cnt.na);
    }
    const PoissonFit fit = poisson_fit(n0);
    const PoissonFit fit_active = poisson_fit(na);
    std::size_t zero = 0;
    for (auto v : n0) zero += v == 0 ? 1 : 0;
    json j = {
        {"seed", common.seed},
        {"reps", reps},
        {"p", p},
        {"metric", common.metric},
        {"radius", fixed_radius ? json(*fixed_radius) : json(nullptr)},
        {"degenerate", fit.degenerate},
        {"n0", io::to_json(fit)},
        {"na", io::to_json(fit_active)},
        {"empirical_p_no_isolated", static_cast<double>(zero) / static_cast<double>(reps)},
    };
    if (c) {
      j["dette_henze"] = {{"C", *c},
                          {"empirical", static_cast<double>(zero) / static_cast<double>(reps)},
                          {"theoretical", std::exp(-std::exp(-*c))},
                          {"binomial_se", std::sqrt(std::exp(-std::exp(-*c)) *
                                                    (1.0 - std::exp(-std::exp(-*c))) /
                                                    static_cast<double>(reps))}};
    }
    if (as_json) {
      out << j.dump(2) << '\n';
    } else {
      out << "seed: " << common.seed << "\nreps: " << reps << "\nmean: " << fit.sample_mean
          << "\nvariance: " << fit.sample_variance << "\ndispersion: " << fit.dispersion_index
          << "\ntv: " << fit.tv_distance
          << "\nempirical_p_no_isolated: " << j["empirical_p_no_isolated"].get<double>() << '\n';
      if (fit.degenerate) out << "warning: degenerate fit (fewer than 2 samples or zero variance)\n";
      if (c) {
        out << "dette_henze_theoretical: " << j["dette_henze"]["theoretical"].get<double>() << '\n';
      }
    }
    return kOk;
  }
};

// ----------------------------------------------------------------- cluster

struct ClusterCmd {
  std::string points;
  RadiusFlags radius;
  double p = 1.0;
  std::optional<std::size_t> kmeans_k;
  std::string svg;
  std::string output;
  std::size_t min_active = 1;
  bool shuffle = false;
  bool as_json = false;
  CommonFlags common;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "a_f*-neighborhood clustering of a point file");
    cmd->add_option("--points", points, "CSV with x,y[,active[,label]]")->required();
    radius.add(cmd);
    cmd->add_option("--p", p, "Activity probability")->capture_default_str();
    cmd->add_option("--kmeans", kmeans_k, "Also run K-means with k groups and compare");
    cmd->add_option("--svg", svg, "Write an SVG scatter of the labeling");
    cmd->add_option("--output", output, "Labels CSV path (default: stdout)");
    cmd->add_option("--min-active", min_active, "Active neighbors needed for a dense point")
        ->capture_default_str();
    cmd->add_flag("--shuffle", shuffle, "Visit seed points in a seeded random order");
    cmd->add_flag("--json", as_json, "Machine-readable summary");
    common.add(cmd, "torus");
  }

  int execute(std::ostream& out, std::ostream& err) {
    const MarkedPointSet marked = load_marked(points, p, common.seed);
    const auto r = radius.resolve(marked.size(), p);
    ClusterOptions opts;
    opts.min_active_neighbors = min_active;
    if (shuffle) opts.shuffle_seed = common.seed;
    const ClusterLabeling labels = afstar_cluster(marked, r.radius, common.parsed_metric(), opts);

    json summary = {{"seed", common.seed},
                    {"size", marked.size()},
                    {"radius", r.radius},
                    {"l", r.l ? json(*r.l) : json(nullptr)},
                    {"metric", common.metric},
                    {"n_clusters", labels.n_clusters},
                    {"n_isolated", labels.n_isolated}};
    if (kmeans_k) {
      const KMeansResult km = kmeans(marked.points, *kmeans_k, common.seed);
      const ClusterLabeling km_labels = to_labeling(km);
      const LabelingComparison cmp = compare_labelings(labels, km_labels);
      summary["kmeans"] = {{"k", *kmeans_k},
                           {"n_clusters", km_labels.n_clusters},
                           {"n_isolated", km_labels.n_isolated},
                           {"inertia", km.inertia},
                           {"iterations", km.iterations},
                           {"pair_agreement", cmp.pair_agreement},
                           {"n_clusters_delta", cmp.n_clusters_delta},
                           {"n_isolated_delta", cmp.n_isolated_delta}};
    }
    if (!svg.empty()) {
      io::write_file(fs::path(svg), [&](std::ostream& f) { io::write_svg(f, marked.points, labels); });
    }
    std::ostream& summary_out = output.empty() ? err : out;
    if (output.empty()) {
      io::write_labels_csv(out, marked, labels);
    } else {
      io::write_file(fs::path(output),
                     [&](std::ostream& f) { io::write_labels_csv(f, marked, labels); });
    }
    emit(summary_out, summary, as_json);
    return kOk;
  }
};

// -------------------------------------------------------------- regularity

struct RegularityCmd {
  std::string points;
  double gamma = 3.0;
  double nu = 0.5;
  std::optional<double> size;
  CommonFlags common;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("regularity", "nu-regular box census of a point file");
    cmd->add_option("--points", points, "CSV with x,y[,...]")->required();
    cmd->add_option("--gamma", gamma)->capture_default_str();
    cmd->add_option("--nu", nu)->capture_default_str();
    cmd->add_option("--size", size, "Override s (default: point count)");
    common.add(cmd, "torus");
  }

  int execute(std::ostream& out) {
    const io::PointTable table = io::read_points_csv(fs::path(points));
    json j = io::to_json(regularity_report(table.points, gamma, nu, size));
    j["seed"] = common.seed;
    out << j.dump(2) << '\n';
    return kOk;
  }
};

// Expands `--config FILE` for the chosen subcommand into leading flags, so
// explicit flags (which come later) take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.size() < 2) return args;
  CLI::App* sub = nullptr;
  for (CLI::App* s : app.get_subcommands([](CLI::App*) { return true; })) {
    if (s->get_name() == args[1]) sub = s;
  }
  if (!sub) return args;
  std::optional<std::string> config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path) return args;
  std::ifstream in(*config_path, std::ios::binary);
  if (!in) throw io::IoError("cannot open config '" + *config_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::vector<std::string> expanded = {args[0], args[1]};
  for (const auto& [key, value] : parse_config(buffer.str())) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt || key == "config") throw DomainError("config: unknown key '" + key + "'");
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value.empty()) {
        expanded.push_back(flag);
      } else if (value != "false" && value != "0") {
        throw DomainError("config: key '" + key + "' expects true/false");
      }
    } else {
      expanded.push_back(flag);
      expanded.push_back(value);
    }
  }
  expanded.insert(expanded.end(), args.begin() + 2, args.end());
  return expanded;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geonet: dynamic random geometric networks, isolation thresholds, clustering"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SimulateCmd simulate;
  ThresholdCmd threshold;
  IsolatedCmd isolated;
  PoissonCheckCmd poisson_check;
  ClusterCmd cluster;
  RegularityCmd regularity;
  simulate.add(app);
  threshold.add(app);
  isolated.add(app);
  poisson_check.add(app);
  cluster.add(app);
  regularity.add(app);

  try {
    std::vector<std::string> expanded = expand_config(args, app);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend() - 1);
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::CallForVersion&) {
      out << kToolVersion << '\n';
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string& name = sub->get_name();
    if (name == "simulate") return simulate.execute(out);
    if (name == "threshold") return threshold.execute(out);
    if (name == "isolated") return isolated.execute(out);
    if (name == "poisson-check") return poisson_check.execute(out);
    if (name == "cluster") return cluster.execute(out, err);
    if (name == "regularity") return regularity.execute(out);
    err << "error: unknown subcommand\n";
    return kUsage;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace geonet::cli

#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sph2/formulas.hpp"
#include "sph2/io.hpp"
#include "sph2/lti.hpp"
#include "sph2/parallel.hpp"
#include "sph2/problem.hpp"
#include "sph2/resource_allocation.hpp"
#include "sph2/simulate.hpp"
#include "sph2/variants.hpp"

namespace sph2::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct VariantOptions {
  std::string variant = "saddle-point";
  double eps = 0.0;
  double rho = 0.0;
  std::string graph_kind;  // overrides the problem-file graph when set
  Index graph_n = 0;       // node count for --graph (defaults to n_x)
};

VariantKind parse_variant_name(const std::string& name) {
  if (name == "saddle-point") return VariantKind::SaddlePoint;
  if (name == "regularized") return VariantKind::Regularized;
  if (name == "augmented") return VariantKind::Augmented;
  if (name == "dual-ascent") return VariantKind::DualAscent;
  if (name == "add-sp") return VariantKind::AddSp;
  throw ValidationError("unknown variant '" + name +
                        "' (expected saddle-point|regularized|augmented|dual-ascent|add-sp)");
}

OrientedGraph make_graph(const std::string& kind, Index n) {
  if (kind == "line") return OrientedGraph::line(n);
  if (kind == "ring") return OrientedGraph::ring(n);
  if (kind == "complete") return OrientedGraph::complete(n);
  if (kind == "star") return OrientedGraph::star(n);
  throw ValidationError("unknown graph kind '" + kind + "' (expected line|ring|complete|star)");
}

VariantSpec resolve_variant(const ProblemBundle& bundle, const VariantOptions& opts) {
  VariantSpec spec;
  spec.kind = parse_variant_name(opts.variant);
  spec.eps = opts.eps;
  spec.rho = opts.rho;
  if (spec.kind == VariantKind::Regularized && !(opts.eps > 0))
    throw ValidationError("regularized variant requires --eps > 0");
  if (spec.kind == VariantKind::AddSp) {
    if (!opts.graph_kind.empty()) {
      const Index n = opts.graph_n > 0 ? opts.graph_n : bundle.problem.n_x();
      spec.graph = make_graph(opts.graph_kind, n);
    } else if (bundle.graph) {
      spec.graph = bundle.graph;
    } else {
      throw ValidationError("add-sp variant requires a graph (--graph or a 'graph' entry in "
                            "the problem file)");
    }
  }
  return spec;
}

bool all_equal(const Vector& v) { return v.size() > 0 && (v.array() == v(0)).all(); }

struct FormulaValue {
  std::optional<double> value;
  std::string reason;  // set when value is absent
};

// Closed-form H2^2 for the variant when its hypotheses hold.
FormulaValue closed_form(const ProblemBundle& b, const VariantSpec& spec) {
  const QuadraticProgram& p = b.problem;
  const DisturbanceConfig& d = b.disturbance;
  const Vector tau_x = detail::broadcast(b.time_constants.tau_x, p.n_x(), "tau_x");
  FormulaValue out;
  switch (spec.kind) {
    case VariantKind::SaddlePoint: {
      const Vector tau_nu = detail::broadcast(b.time_constants.tau_nu, p.n_r(), "tau_nu");
      out.value = h2sq_saddle(tau_x, tau_nu, p.W_b, d.t_c, d.t_b);
      return out;
    }
    case VariantKind::DualAscent: {
      const Vector tau_nu = detail::broadcast(b.time_constants.tau_nu, p.n_r(), "tau_nu");
      out.value = h2sq_dual_ascent(tau_nu, p.W_b, d.t_b);
      return out;
    }
    case VariantKind::Regularized: {
      const Vector tau_nu = detail::broadcast(b.time_constants.tau_nu, p.n_r(), "tau_nu");
      if (p.n_r() != 1 || p.n_b() != 1 || !all_equal(p.q) || !all_equal(tau_x) ||
          !all_equal(tau_nu) || p.W_b(0, 0) != 1.0) {
        out.reason = "closed form needs one constraint, one disturbance, uniform q and taus, "
                     "and W_b = [1]";
        return out;
      }
      const double s2 = p.S.squaredNorm();
      const auto coeff = reg_gap_coefficients(p.q(0), tau_x(0), tau_nu(0), s2, spec.eps);
      out.value = h2sq_saddle(tau_x, tau_nu, p.W_b, d.t_c, d.t_b) -
                  (coeff.alpha * d.t_c * d.t_c + coeff.gamma * d.t_b * d.t_b);
      return out;
    }
    case VariantKind::Augmented: {
      const Vector tau_nu = detail::broadcast(b.time_constants.tau_nu, p.n_r(), "tau_nu");
      const bool wb_identity =
          p.n_b() == p.n_r() && p.W_b.isApprox(Matrix::Identity(p.n_r(), p.n_r()));
      if (!all_equal(p.q) || !all_equal(tau_x) || !all_equal(tau_nu) || !wb_identity) {
        out.reason = "closed form needs uniform q and taus and W_b = I";
        return out;
      }
      UniformParams u{p.q(0), tau_x(0), tau_nu(0), p.n_x(), p.n_r()};
      out.value = h2sq_augmented_uniform(u, p.S, spec.rho, d.t_c, d.t_b);
      return out;
    }
    case VariantKind::AddSp: {
      const Vector tau_nu = detail::broadcast(b.time_constants.tau_nu, p.n_x(), "tau_nu");
      const bool ra_shape = p.n_r() == 1 && p.S.isApprox(Matrix::Ones(1, p.n_x())) &&
                            p.W_b.isApprox(Matrix::Ones(1, p.n_x()));
      if (!ra_shape || !all_equal(p.q) || !all_equal(tau_nu) || !is_acyclic(*spec.graph)) {
        out.reason = "closed form needs S = W_b = ones^T, uniform q and tau_nu, and an "
                     "acyclic graph";
        return out;
      }
      out.value = d.t_b * d.t_b *
                  h2sq_ra_dist_dual_uniform(p.q(0), tau_nu(0),
                                            laplacian_spectrum(*spec.graph), spec.rho);
      return out;
    }
  }
  out.reason = "unknown variant";
  return out;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

void emit_error(std::ostream& err, const std::string& type, const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  err << j.dump() << "\n";
}

// Writes `text` to --out (plus a manifest) or to the default stream.
void deliver(const std::string& text, const std::string& out_path, std::ostream& fallback,
             const RunManifest& manifest) {
  if (out_path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot write output file '" + out_path + "'");
  f << text;
  write_manifest_for(out_path, manifest);
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string problem_file;
  VariantOptions variant;
  std::string out_path;
};

int run_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream&) {
  const ProblemBundle bundle = load_problem_file(opts.problem_file);
  const VariantSpec spec = resolve_variant(bundle, opts.variant);
  const StateSpace sys = build_variant(bundle.problem, bundle.time_constants,
                                       bundle.disturbance, spec);
  const HurwitzResult hr = is_hurwitz(sys);
  const GramianResult gram = solve_observability_gramian(sys);
  const double h2 = (sys.B.transpose() * gram.X * sys.B).trace();
  const FormulaValue formula = closed_form(bundle, spec);
  const Equilibrium eq = spec.kind == VariantKind::Regularized
                             ? regularized_equilibrium(bundle.problem, spec.eps)
                             : solve_kkt(bundle.problem);

  json j;
  j["variant"] = variant_name(spec.kind);
  if (spec.kind == VariantKind::Regularized) j["eps"] = spec.eps;
  if (spec.kind == VariantKind::Augmented || spec.kind == VariantKind::AddSp)
    j["rho"] = spec.rho;
  j["h2sq_numeric"] = h2;
  if (formula.value) {
    j["h2sq_formula"] = *formula.value;
  } else {
    j["h2sq_formula"] = nullptr;
    j["h2sq_formula_reason"] = formula.reason;
  }
  if (spec.kind == VariantKind::AddSp) {
    const Vector tau_nu =
        detail::broadcast(bundle.time_constants.tau_nu, bundle.problem.n_x(), "tau_nu");
    if (all_equal(tau_nu))
      j["h2sq_upper_bound"] = h2sq_add_bound(bundle.problem.W_b.squaredNorm(), tau_nu(0),
                                             bundle.disturbance.t_b);
  }
  j["hurwitz"] = hr.hurwitz;
  j["spectral_abscissa"] = hr.spectral_abscissa;
  j["gramian"] = {{"residual", gram.residual}, {"positive_definite", gram.positive_definite}};
  j["equilibrium"] = {{"x_star", vector_to_json(eq.x_star)},
                      {"nu_star", vector_to_json(eq.nu_star)}};
  j["dims"] = {{"states", sys.n_states()}, {"inputs", sys.n_inputs()},
               {"outputs", sys.n_outputs()}};

  json config;
  config["problem"] = opts.problem_file;
  config["variant"] = opts.variant.variant;
  config["eps"] = opts.variant.eps;
  config["rho"] = opts.variant.rho;
  if (!opts.variant.graph_kind.empty()) config["graph"] = opts.variant.graph_kind;
  deliver(j.dump(2) + "\n", opts.out_path, out, make_manifest("analyze", config, 0));
  return kOk;
}

// ------------------------------------------------------------------ sweep

struct SweepOptions {
  std::string problem_file;
  VariantOptions variant;
  std::string param = "rho";
  std::string grid;  // a:b:steps
  std::string scale = "log";
  std::string out_path;
};

std::vector<double> parse_grid(const std::string& grid, const std::string& scale) {
  double a = 0, b = 0;
  long steps = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(grid);
  if (!(is >> a >> c1 >> b >> c2 >> steps) || c1 != ':' || c2 != ':' || !is.eof())
    throw ValidationError("grid must have the form a:b:steps, got '" + grid + "'");
  if (steps < 1) throw ValidationError("grid is empty (steps must be >= 1)");
  if (scale != "lin" && scale != "log")
    throw ValidationError("scale must be lin or log, got '" + scale + "'");
  if (scale == "log" && (!(a > 0) || !(b > 0)))
    throw ValidationError("log grid requires positive endpoints");
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    points.push_back(a);
    return points;
  }
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
    points.push_back(scale == "lin" ? a + (b - a) * t
                                    : std::exp(std::log(a) + (std::log(b) - std::log(a)) * t));
  }
  return points;
}

int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  const ProblemBundle bundle = load_problem_file(opts.problem_file);
  VariantOptions vopts = opts.variant;
  const VariantKind kind = parse_variant_name(vopts.variant);
  if (opts.param == "eps") {
    if (kind != VariantKind::Regularized)
      throw ValidationError("--param eps requires --variant regularized");
    vopts.eps = 1.0;  // placeholder so resolve_variant accepts; overwritten per cell
  } else if (opts.param == "rho") {
    if (kind != VariantKind::Augmented && kind != VariantKind::AddSp)
      throw ValidationError("--param rho requires --variant augmented or add-sp");
  } else {
    throw ValidationError("--param must be rho or eps, got '" + opts.param + "'");
  }
  const std::vector<double> grid = parse_grid(opts.grid, opts.scale);
  const VariantSpec base = resolve_variant(bundle, vopts);

  std::vector<double> numeric(grid.size());
  std::vector<std::optional<double>> formula(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    VariantSpec spec = base;
    (opts.param == "eps" ? spec.eps : spec.rho) = grid[i];
    const StateSpace sys =
        build_variant(bundle.problem, bundle.time_constants, bundle.disturbance, spec);
    numeric[i] = h2_norm_squared(sys);
    formula[i] = closed_form(bundle, spec).value;
  });

  std::ostringstream csv;
  write_csv_row(csv, {"param_value", "h2sq_numeric", "h2sq_formula"});
  for (std::size_t i = 0; i < grid.size(); ++i)
    write_csv_row(csv, {format_double(grid[i]), format_double(numeric[i]),
                        formula[i] ? format_double(*formula[i]) : std::string()});

  json config;
  config["problem"] = opts.problem_file;
  config["variant"] = vopts.variant;
  config["param"] = opts.param;
  config["grid"] = opts.grid;
  config["scale"] = opts.scale;
  config["rho"] = vopts.rho;
  config["eps"] = vopts.eps;
  deliver(csv.str(), opts.out_path, out, make_manifest("sweep", config, 0));

  const std::string trend = detail::classify_trend(numeric);
  (opts.out_path.empty() ? err : out)
      << "trend: h2sq_numeric is " << trend << " over " << grid.size() << " grid points\n";
  return kOk;
}

// --------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string problem_file;
  VariantOptions variant;
  SimulationConfig sim;
  unsigned threads = 0;
  std::string out_path;
  std::string traj_path;
  bool traj_states = false;
};

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  const ProblemBundle bundle = load_problem_file(opts.problem_file);
  const VariantSpec spec = resolve_variant(bundle, opts.variant);
  const StateSpace sys =
      build_variant(bundle.problem, bundle.time_constants, bundle.disturbance, spec);
  validate_config(opts.sim);
  const auto warning = check_timestep(sys, opts.sim);
  if (warning) err << "warning: " << *warning << "\n";

  const SimulationEstimate est = estimate_variance(sys, opts.sim, opts.threads);
  const double gramian = h2_norm_squared(sys);
  const double tolerance = 3.0 * est.standard_error + 2.0 * opts.sim.dt * gramian;

  json j;
  j["variant"] = variant_name(spec.kind);
  j["variance_estimate"] = est.variance_estimate;
  j["standard_error"] = est.standard_error;
  j["samples_used"] = est.samples_used;
  j["h2sq_gramian"] = gramian;
  j["agreement"] = {{"abs_error", std::abs(est.variance_estimate - gramian)},
                    {"tolerance_3se_plus_bias", tolerance},
                    {"within", std::abs(est.variance_estimate - gramian) <= tolerance}};
  j["dt_warning"] = warning ? json(*warning) : json(nullptr);

  json config;
  config["problem"] = opts.problem_file;
  config["variant"] = opts.variant.variant;
  config["eps"] = opts.variant.eps;
  config["rho"] = opts.variant.rho;
  config["dt"] = opts.sim.dt;
  config["horizon"] = opts.sim.horizon;
  config["burn_in"] = opts.sim.burn_in;
  config["trials"] = opts.sim.trials;
  config["seed"] = opts.sim.seed;
  const RunManifest manifest = make_manifest("simulate", config, opts.sim.seed);
  deliver(j.dump(2) + "\n", opts.out_path, out, manifest);

  if (!opts.traj_path.empty()) {
    std::ostringstream csv;
    std::vector<std::string> header = {"trial", "t"};
    for (const auto& l : sys.output_labels) header.push_back(l);
    if (opts.traj_states)
      for (const auto& l : sys.state_labels) header.push_back(l);
    write_csv_row(csv, header);
    for (int trial = 0; trial < opts.sim.trials; ++trial) {
      const Trajectory traj = simulate_trajectory(sys, opts.sim, trial);
      for (Index k = 0; k < traj.t.size(); ++k) {
        std::vector<std::string> row = {std::to_string(trial), format_double(traj.t(k))};
        for (Index c = 0; c < traj.outputs.cols(); ++c)
          row.push_back(format_double(traj.outputs(k, c)));
        if (opts.traj_states)
          for (Index c = 0; c < traj.states.cols(); ++c)
            row.push_back(format_double(traj.states(k, c)));
        write_csv_row(csv, row);
      }
    }
    std::ofstream f(opts.traj_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write trajectory file '" + opts.traj_path + "'");
    f << csv.str();
    write_manifest_for(opts.traj_path, manifest);
  }
  return kOk;
}

// ----------------------------------------------------------------- table1

struct Table1Options {
  Index n = 2;
  std::string graph_kind = "line";
  std::vector<double> q;
  std::vector<double> c;
  std::vector<double> d;
  double tau_x = 1.0, tau_delta = 1.0, tau_nu = 1.0, tau_mu = 1.0;
  std::vector<double> rho_grid = {0.0};
  double t_c = 0.0, t_b = 1.0;
  std::string out_path;
};

Vector list_to_vector(const std::vector<double>& v, Index n, const std::string& name) {
  if (v.empty()) return Vector::Zero(n);
  if (v.size() == 1) return Vector::Constant(n, v[0]);
  if (static_cast<Index>(v.size()) == n) {
    Vector out(n);
    for (Index i = 0; i < n; ++i) out(i) = v[static_cast<std::size_t>(i)];
    return out;
  }
  throw ValidationError("--" + name + ": expected 1 or " + std::to_string(n) + " values");
}

int run_table1(const Table1Options& opts, std::ostream& out, std::ostream& err) {
  ResourceAllocationProblem ra;
  ra.q = opts.q.empty() ? Vector::Ones(opts.n) : list_to_vector(opts.q, opts.n, "q");
  ra.c = list_to_vector(opts.c, opts.n, "c");
  ra.d = list_to_vector(opts.d, opts.n, "d");
  ra.graph = make_graph(opts.graph_kind, opts.n);
  ra.tau_x = opts.tau_x;
  ra.tau_delta = opts.tau_delta;
  ra.tau_nu = opts.tau_nu;
  ra.tau_mu = opts.tau_mu;
  if (opts.rho_grid.empty()) throw ValidationError("--rho-grid is empty");

  const DisturbanceConfig dist{opts.t_c, opts.t_b};
  const Table1Report rep = table1_report(ra, opts.rho_grid, dist);

  std::ostringstream csv;
  write_csv_row(csv, {"formulation", "rho", "h2sq_numeric", "h2sq_formula",
                      "formula_applicable"});
  for (const auto& row : rep.rows)
    write_csv_row(csv, {row.formulation, format_double(row.rho),
                        format_double(row.h2sq_numeric),
                        row.h2sq_formula ? format_double(*row.h2sq_formula) : std::string(),
                        row.h2sq_formula ? "true" : "false"});

  json config;
  config["n"] = opts.n;
  config["graph"] = opts.graph_kind;
  config["tau_x"] = opts.tau_x;
  config["tau_delta"] = opts.tau_delta;
  config["tau_nu"] = opts.tau_nu;
  config["tau_mu"] = opts.tau_mu;
  config["rho_grid"] = opts.rho_grid;
  config["t_c"] = opts.t_c;
  config["t_b"] = opts.t_b;
  deliver(csv.str(), opts.out_path, out, make_manifest("table1", config, 0));

  std::ostream& info = opts.out_path.empty() ? err : out;
  info << "\n" << std::left;
  for (const auto& row : rep.rows) {
    info << row.formulation << "  rho=" << format_double(row.rho)
         << "  h2sq=" << format_double(row.h2sq_numeric);
    if (row.h2sq_formula) info << "  formula=" << format_double(*row.h2sq_formula);
    info << "\n";
  }
  for (const auto& [f, trend] : rep.trend) info << "trend " << f << ": " << trend << "\n";
  for (const auto& note : rep.notes) info << "note: " << note << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"H2 performance analysis of saddle-point optimization dynamics"};
  app.require_subcommand(1);

  AnalyzeOptions an;
  SweepOptions sw;
  SimulateOptions sim;
  Table1Options t1;

  auto add_variant_flags = [](CLI::App* cmd, VariantOptions& v, bool need_problem,
                              std::string* problem_file) {
    if (need_problem)
      cmd->add_option("--problem", *problem_file, "problem JSON file")->required();
    cmd->add_option("--variant", v.variant,
                    "saddle-point|regularized|augmented|dual-ascent|add-sp");
    cmd->add_option("--eps", v.eps, "regularization parameter (regularized)");
    cmd->add_option("--rho", v.rho, "augmentation gain (augmented, add-sp)");
    cmd->add_option("--graph", v.graph_kind, "graph kind for add-sp (line|ring|complete|star)");
    cmd->add_option("--n", v.graph_n, "node count for --graph (defaults to n_x)");
  };

  CLI::App* c_an = app.add_subcommand("analyze", "exact H2 analysis of one variant");
  add_variant_flags(c_an, an.variant, true, &an.problem_file);
  c_an->add_option("--out", an.out_path, "write JSON here (with manifest)");

  CLI::App* c_sw = app.add_subcommand("sweep", "H2 over a parameter grid, CSV output");
  add_variant_flags(c_sw, sw.variant, true, &sw.problem_file);
  c_sw->add_option("--param", sw.param, "rho|eps")->required();
  c_sw->add_option("--grid", sw.grid, "a:b:steps")->required();
  c_sw->add_option("--scale", sw.scale, "lin|log (default log)");
  c_sw->add_option("--out", sw.out_path, "write CSV here (with manifest)");

  CLI::App* c_sim = app.add_subcommand("simulate", "white-noise variance estimate");
  add_variant_flags(c_sim, sim.variant, true, &sim.problem_file);
  c_sim->add_option("--dt", sim.sim.dt, "step size (default 1e-3)");
  c_sim->add_option("--horizon", sim.sim.horizon, "total time (default 200)");
  c_sim->add_option("--burn-in", sim.sim.burn_in, "discarded prefix (default 20)");
  c_sim->add_option("--trials", sim.sim.trials, "independent trials (default 16)");
  c_sim->add_option("--seed", sim.sim.seed, "RNG seed (default 0)");
  c_sim->add_option("--threads", sim.threads, "worker threads (default: all)");
  c_sim->add_option("--out", sim.out_path, "write JSON here (with manifest)");
  c_sim->add_option("--traj-out", sim.traj_path, "also dump trajectories as CSV");
  c_sim->add_flag("--traj-states", sim.traj_states, "include state columns in the dump");

  CLI::App* c_t1 = app.add_subcommand("table1", "compare the four resource-allocation forms");
  c_t1->add_option("--n", t1.n, "number of agents")->required();
  c_t1->add_option("--graph", t1.graph_kind, "line|ring|complete|star (default line)");
  c_t1->add_option("--q", t1.q, "cost curvatures (scalar or n values)");
  c_t1->add_option("--c", t1.c, "linear costs (scalar or n values)");
  c_t1->add_option("--d", t1.d, "demands (scalar or n values)");
  c_t1->add_option("--tau-x", t1.tau_x, "primal time constant");
  c_t1->add_option("--tau-delta", t1.tau_delta, "edge-flow time constant");
  c_t1->add_option("--tau-nu", t1.tau_nu, "multiplier time constant");
  c_t1->add_option("--tau-mu", t1.tau_mu, "consensus-multiplier time constant");
  c_t1->add_option("--rho-grid", t1.rho_grid, "augmentation gains (default 0)");
  c_t1->add_option("--t-c", t1.t_c, "cost disturbance strength (default 0)");
  c_t1->add_option("--t-b", t1.t_b, "demand disturbance strength (default 1)");
  c_t1->add_option("--out", t1.out_path, "write CSV here (with manifest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      std::ostringstream help;
      const int code = app.exit(e, help, help);
      out << help.str();
      return code;
    }
    emit_error(err, "usage", e.what());
    return kInputError;
  }

  try {
    if (app.got_subcommand(c_an)) return run_analyze(an, out, err);
    if (app.got_subcommand(c_sw)) return run_sweep(sw, out, err);
    if (app.got_subcommand(c_sim)) return run_simulate(sim, out, err);
    if (app.got_subcommand(c_t1)) return run_table1(t1, out, err);
    emit_error(err, "usage", "no subcommand given");
    return kInputError;
  } catch (const ValidationError& e) {
    emit_error(err, "validation", e.what());
    return kInputError;
  } catch (const NumericalError& e) {
    emit_error(err, "numerical", e.what());
    return kNumericalError;
  } catch (const Error& e) {
    emit_error(err, "error", e.what());
    return kNumericalError;
  }
}

}  // namespace sph2::cli

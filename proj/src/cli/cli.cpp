#include "epkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "epkit/compose.hpp"
#include "epkit/ep_core.hpp"
#include "epkit/errors.hpp"
#include "epkit/io.hpp"
#include "epkit/jordan.hpp"
#include "epkit/models.hpp"
#include "epkit/perturb.hpp"

namespace epkit::cli {

namespace {

using io::Json;

constexpr double kFigOmega0 = 1.0;
constexpr double kFigGa = 1.5;
constexpr double kFigGb = 1.3;
constexpr double kFigK = 1.0;

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

CompositeSystem load_composite(const CliConfig& c) {
  ComposeOptions opts;
  if (c.tol > 0.0) opts.eigenvalue_tol = c.tol;
  if (!c.input.empty()) {
    io::LoadedSystem s = io::load_system(c.input);
    if (!s.composite) throw PreconditionError("input '" + c.input + "' is not a composite system");
    return *s.composite;
  }
  if (c.a.empty() || c.b.empty() || c.k.empty()) {
    throw ParseError("need either --input with a composite model or all of --a, --b, --k");
  }
  return block_compose(io::load_matrix(c.a), io::load_matrix(c.b), io::load_matrix(c.k), opts);
}

void validate(const CliConfig& c) {
  if (!(c.eps_min > 0.0) || !(c.eps_max > c.eps_min)) throw ParseError("need 0 < --eps-min < --eps-max");
  if (c.points < 2) throw ParseError("--points must be at least 2");
  if (c.trials < 1) throw ParseError("--trials must be at least 1");
  if (c.tol < 0.0) throw ParseError("--tol must be positive");
  if (c.mode != "generic" && c.mode != "preserving") throw ParseError("--mode must be generic or preserving");
  if (c.threads < 1) throw ParseError("--threads must be at least 1");
}

int cmd_analyze(const CliConfig& c, std::ostream& out) {
  if (c.input.empty()) throw ParseError("analyze needs --input");
  const ComplexMatrix h = io::load_matrix(c.input);
  if (!h.is_square()) throw ShapeError("analyze: matrix is not square");
  const EpReport r = c.tol > 0.0 ? detect_ep(h, c.tol) : detect_ep(h);
  emit(io::report_to_json(r), c.out, out);
  return kOk;
}

int cmd_jordan(const CliConfig& c, std::ostream& out) {
  if (c.input.empty()) throw ParseError("jordan needs --input");
  const ComplexMatrix h = io::load_matrix(c.input);
  const EpReport r = detect_ep(h);
  const JordanChain chain = jordan_chain(r, c.tol > 0.0 ? c.tol : kDefaultChainTol);
  emit(io::chain_to_json(chain), c.out, out);
  return kOk;
}

int cmd_compose(const CliConfig& c, std::ostream& out) {
  const CompositeSystem sys = load_composite(c);
  const double xi = composite_response(sys);  // throws on a degenerate coupling
  const double xi_a = *sys.report_a.response_strength;
  const double xi_b = *sys.report_b.response_strength;
  const JordanChain chain_a = jordan_chain(sys.report_a);
  const JordanChain chain_b = jordan_chain(sys.report_b);
  const Complex amplitude = coupling_amplitude(chain_b, chain_a.eigenvector(), sys.k);
  const auto order = nilpotency_index(sys.nilpotent());

  Json j = io::composite_to_json(sys);
  j["order"] = order ? Json(*order) : Json(nullptr);
  j["generic"] = is_generic(sys);
  j["genericity_product"] = io::matrix_to_json(genericity_product(sys));
  j["response_strength"] = xi;
  j["response_strength_a"] = xi_a;
  j["response_strength_b"] = xi_b;
  j["response_upper_bound"] = response_upper_bound(xi_a, xi_b, sys.k);
  j["coupling_amplitude"] = io::complex_to_json(amplitude);
  j["response_via_amplitude"] = xi_a * xi_b * std::abs(amplitude);
  emit(j, c.out, out);
  return kOk;
}

std::string fit_path_for(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".fit.json");
  return p.string();
}

int cmd_sweep(const CliConfig& c, std::ostream& out, std::ostream& err) {
  SweepOptions opts;
  opts.mode = parse_mode(c.mode);
  opts.trials = c.trials;
  opts.seed = c.seed;
  opts.threads = c.threads;

  ComplexMatrix h;
  Complex ep;
  bool have_composite = !c.a.empty();
  std::optional<CompositeSystem> sys;
  if (!c.input.empty()) {
    io::LoadedSystem s = io::load_system(c.input);
    h = s.h;
    if (s.composite) sys = std::move(s.composite);
    have_composite = sys.has_value();
  } else if (have_composite) {
    sys = load_composite(c);
    h = sys->h;
  } else {
    throw ParseError("sweep needs --input or --a/--b/--k");
  }
  if (sys) {
    ep = sys->ep_eigenvalue;
    opts.split = sys->n_a();
  } else {
    if (!h.is_square()) throw ShapeError("sweep: matrix is not square");
    ep = traceless_part(h).shift;
  }
  if (opts.mode == PerturbationMode::Preserving && !have_composite) {
    throw PreconditionError("sweep: preserving perturbations need a composite system");
  }

  const auto grid = log_grid(c.eps_min, c.eps_max, c.points);
  const auto records = sweep(h, ep, grid, opts);
  const SlopeFit fit = fit_slope(records, c.fit_min, c.fit_max);

  if (c.out.empty()) {
    io::write_sweep_csv(out, records);
    err << io::fit_to_json(fit).dump(2) << '\n';
  } else {
    std::ofstream f(c.out);
    if (!f) throw ParseError("cannot write '" + c.out + "'");
    io::write_sweep_csv(f, records);
    emit(io::fit_to_json(fit), fit_path_for(c.out), out);
  }
  return kOk;
}

int cmd_reproduce_fig3(const CliConfig& c, std::ostream& out) {
  const CompositeSystem sys = models::dimer_trimer_system(kFigOmega0, kFigGa, kFigGb, kFigK);
  const double xi = composite_response(sys);
  const auto grid = log_grid(c.eps_min, c.eps_max, c.points);

  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::filesystem::create_directories(dir);

  Json summary{{"system",
                {{"model", "dimer_trimer"},
                 {"omega0", kFigOmega0},
                 {"g_a", kFigGa},
                 {"g_b", kFigGb},
                 {"k", io::complex_to_json(kFigK)}}},
               {"response_strength", xi},
               {"machine_precision_bound", machine_precision_bound(xi, static_cast<int>(sys.dim()))},
               {"eps_min", c.eps_min},
               {"eps_max", c.eps_max},
               {"points", c.points},
               {"trials", c.trials},
               {"seed", c.seed}};

  for (const PerturbationMode mode : {PerturbationMode::Generic, PerturbationMode::Preserving}) {
    SweepOptions opts;
    opts.mode = mode;
    opts.split = sys.n_a();
    opts.trials = c.trials;
    opts.seed = c.seed;
    opts.threads = c.threads;
    const auto records = sweep(sys.h, sys.ep_eigenvalue, grid, opts);
    const std::string name = std::string(mode_name(mode));
    const std::filesystem::path csv = dir / ("fig3_" + name + ".csv");
    std::ofstream f(csv);
    if (!f) throw ParseError("cannot write '" + csv.string() + "'");
    io::write_sweep_csv(f, records);
    summary[name] = io::fit_to_json(fit_slope(records, c.fit_min, c.fit_max));
    summary[name]["csv"] = csv.filename().string();
  }
  emit(summary, (dir / "fig3_fit.json").string(), out);
  out << summary.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.command == "analyze") return cmd_analyze(config, out);
    if (config.command == "jordan") return cmd_jordan(config, out);
    if (config.command == "compose") return cmd_compose(config, out);
    if (config.command == "sweep") return cmd_sweep(config, out, err);
    if (config.command == "reproduce-fig3") return cmd_reproduce_fig3(config, out);
    err << "error: unknown command '" << config.command << "'\n";
    return kParseFailure;
  } catch (const Error& e) {
    switch (e.error_class()) {
      case ErrorClass::Parse:
        err << "parse error: " << e.what() << '\n';
        return kParseFailure;
      case ErrorClass::Precondition:
        err << "precondition violated: " << e.what() << '\n';
        return kPreconditionViolation;
      case ErrorClass::Numerical:
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
  }
  return kNumericalFailure;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"epkit: exceptional points of non-Hermitian Hamiltonians"};
  app.require_subcommand(1);
  CliConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", c.tol, "Tolerance override (analyze: nilpotency, jordan: chain, compose: eigenvalue match)");
    sub->add_option("--out", c.out, "Output file (reproduce-fig3: output directory)");
  };
  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--eps-min", c.eps_min, "Smallest perturbation strength")->capture_default_str();
    sub->add_option("--eps-max", c.eps_max, "Largest perturbation strength")->capture_default_str();
    sub->add_option("--points", c.points, "Logarithmic grid points")->capture_default_str();
    sub->add_option("--trials", c.trials, "Random perturbations per grid point")->capture_default_str();
    sub->add_option("--seed", c.seed, "Base seed of the SplitMix64 generator")->capture_default_str();
    sub->add_option("--fit-min", c.fit_min, "Lower edge of the slope-fit window")->capture_default_str();
    sub->add_option("--fit-max", c.fit_max, "Upper edge of the slope-fit window")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (output is independent of this)")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Detect an EP and report order, eigenvalue and response strength");
  analyze->add_option("--input", c.input, "Matrix or named-system JSON")->required();
  add_common(analyze);

  auto* jordan = app.add_subcommand("jordan", "Gauge-fixed Jordan chain of a full-order EP");
  jordan->add_option("--input", c.input, "Matrix or named-system JSON")->required();
  add_common(jordan);

  auto* compose = app.add_subcommand("compose", "Couple two EPs unidirectionally and report the composite");
  compose->add_option("--input", c.input, "Named composite system JSON");
  compose->add_option("--a", c.a, "Subsystem a (matrix or named-system JSON)");
  compose->add_option("--b", c.b, "Subsystem b (matrix or named-system JSON)");
  compose->add_option("--k", c.k, "Coupling matrix K (n_b x n_a) JSON");
  add_common(compose);

  auto* sweep_cmd = app.add_subcommand("sweep", "Random-perturbation splitting sweep; CSV plus slope fit");
  sweep_cmd->add_option("--input", c.input, "Matrix or named-system JSON");
  sweep_cmd->add_option("--a", c.a, "Subsystem a JSON");
  sweep_cmd->add_option("--b", c.b, "Subsystem b JSON");
  sweep_cmd->add_option("--k", c.k, "Coupling matrix JSON");
  sweep_cmd->add_option("--mode", c.mode, "generic | preserving")->capture_default_str();
  add_sweep(sweep_cmd);
  add_common(sweep_cmd);

  auto* fig3 = app.add_subcommand(
      "reproduce-fig3",
      "Dimer (g_a=1.5) coupled into trimer (g_b=1.3) with k=1: generic and preserving sweeps over a "
      "41-point log grid 1e-12..1e-2, 8 trials, seed 42; slopes fitted on [1e-8, 1e-3]");
  add_sweep(fig3);
  add_common(fig3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  }

  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace epkit::cli

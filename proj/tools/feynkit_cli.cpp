// Command-line surface over the library: validation, summaries,
// divergence classification, the direct/inverse solvers, enumeration,
// and the cutoff-integral lab.
//
// Exit codes: 0 success, 1 domain errors (parity, infeasibility,
// main-condition failures), 2 usage or parse errors.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "feynkit/feynkit.hpp"

namespace {

std::string read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("file", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostics(const std::string& path, const feynkit::ParseResult& result) {
  for (const feynkit::Diagnostic& d : result.diagnostics) {
    std::cerr << path << ':' << d.line << ':' << d.column << ": error: " << d.message;
    if (!d.hint.empty()) std::cerr << " (hint: " << d.hint << ")";
    std::cerr << '\n';
  }
}

feynkit::Diagram parse_file_or_exit(const std::string& path, int& exit_code) {
  const std::string source = read_source(path);
  feynkit::ParseResult result = feynkit::parse_diagram(source);
  if (!result.ok()) {
    print_diagnostics(path, result);
    exit_code = 2;
    return feynkit::Diagram();
  }
  return std::move(*result.diagram);
}

int run_validate(const std::string& path) {
  int exit_code = 0;
  const feynkit::Diagram d = parse_file_or_exit(path, exit_code);
  if (exit_code != 0) return exit_code;
  const feynkit::ValidationReport report = feynkit::check_main_condition(d);
  for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (report.main_condition) {
    std::cout << "OK: main condition holds (" << d.vertex_count() << " vertices)\n";
    return 0;
  }
  for (const feynkit::Violation& v : report.violations)
    std::cout << "vertex " << v.vertex << ": " << v.reason << '\n';
  std::cerr << "error: main condition violated at " << report.violations.size()
            << " vertex(es)\n";
  return 1;
}

int run_summary(const std::string& path, bool as_json) {
  int exit_code = 0;
  const feynkit::Diagram d = parse_file_or_exit(path, exit_code);
  if (exit_code != 0) return exit_code;
  if (as_json) {
    std::cout << feynkit::summary_json_text(d);
    return 0;
  }
  const feynkit::TopologySummary s = feynkit::summarize(d);
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::cout << "n = " << s.vertices << '\n'
            << "C = " << s.components << '\n'
            << "Q = " << s.contacts << '\n'
            << "Ne = " << s.external_electrons << '\n'
            << "Np = " << s.external_photons << '\n'
            << "Fe = " << s.internal_electrons << '\n'
            << "Fp = " << s.internal_photons << '\n'
            << "F = " << s.internal_total << '\n'
            << "m = " << s.loops << '\n'
            << "K = " << s.power_counter << '\n'
            << "mainCondition = " << flag(s.main_condition) << '\n'
            << "irreducible = " << flag(s.irreducible) << '\n'
            << "physical = " << flag(s.physical) << '\n'
            << "degenerate = " << flag(s.degenerate) << '\n';
  std::cout << "contactPoints =";
  for (const std::string& id : s.contact_points) std::cout << ' ' << id;
  std::cout << '\n';
  return 0;
}

int run_classify(int ne, int np, int loops) {
  const feynkit::DivergenceReport report = feynkit::classify_divergence(ne, np, loops);
  if (report.case_id) std::cout << "Case " << *report.case_id << ", ";
  std::cout << "K=" << report.power_counter << ", ";
  switch (report.nominal_class) {
    case feynkit::DivergenceClass::convergent:
      std::cout << "convergent";
      break;
    case feynkit::DivergenceClass::vacuum:
      std::cout << "vacuum diagram";
      break;
    default:
      std::cout << "nominal " << feynkit::to_string(report.nominal_class);
      break;
  }
  if (!report.note.empty()) std::cout << " (" << report.note << ")";
  std::cout << '\n';
  return 0;
}

int run_solve_direct(int fe, int fp) {
  const feynkit::DirectSolution s = feynkit::solve_direct(fe, fp);
  std::cout << "Q=" << s.contacts << " n=" << s.vertices << " Ne=" << s.external_electrons
            << " Np=" << s.external_photons << '\n';
  return 0;
}

int run_solve_inverse(int ne, int np) {
  const feynkit::InternalData s = feynkit::solve_inverse({ne, np});
  std::cout << "Q=" << s.contacts << " n=" << s.vertices << " Fp=" << s.photon_lines
            << " Fe=" << s.electron_lines << '\n';
  return 0;
}

struct EnumerateArgs {
  std::optional<int> n;
  std::optional<int> ne;
  std::optional<int> np;
  bool connected = false;
  bool irreducible = false;
  bool dedupe = false;
  bool exhaustive_directions = false;
  std::optional<std::size_t> limit;
  int max_vertices = 8;
};

int run_enumerate(const EnumerateArgs& args) {
  feynkit::EnumerationRequest req;
  req.vertex_count = args.n;
  if (args.ne || args.np) req.external = feynkit::ExternalData{args.ne.value_or(0), args.np.value_or(0)};
  req.connected_only = args.connected;
  req.irreducible_only = args.irreducible;
  req.dedupe = args.dedupe;
  req.exhaustive_directions = args.exhaustive_directions;
  req.limit = args.limit;
  req.max_vertices = args.max_vertices;
  std::size_t count = 0;
  feynkit::enumerate_diagrams(req, [&](const feynkit::Diagram& d) {
    ++count;
    std::cout << "# diagram " << count << '\n' << feynkit::serialize(d) << '\n';
    return true;
  });
  std::cerr << count << " diagram(s)\n";
  return 0;
}

struct IntegralArgs {
  std::vector<double> q;
  double ell = 0.0;
  double cutoff = 0.0;
  int component = 1;
  feynkit::IntegrationMethod method = feynkit::IntegrationMethod::quadrature;
  long long samples = 1'000'000;
  int resolution = 16;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  int threads = 0;
  std::vector<double> cutoffs;  // scan only
};

feynkit::IntegralSpec to_spec(const IntegralArgs& args) {
  if (args.q.size() != 4)
    throw CLI::ValidationError("--q", "expected exactly four comma-separated components");
  feynkit::IntegralSpec spec;
  spec.q = {args.q[0], args.q[1], args.q[2], args.q[3]};
  spec.ell = args.ell;
  spec.cutoff = args.cutoff;
  spec.component = args.component;
  spec.method = args.method;
  spec.samples = args.samples;
  spec.resolution = args.resolution;
  spec.tolerance = args.tolerance;
  spec.seed = args.seed;
  spec.threads = args.threads;
  return spec;
}

int run_integrate(const IntegralArgs& args) {
  const feynkit::IntegralSpec spec = to_spec(args);
  const feynkit::IntegralEstimate est = feynkit::integrate(spec);
  const double reference = feynkit::closed_form(spec);
  std::cout << "estimate = " << feynkit::format_plain(est.value) << '\n'
            << "std_error = " << feynkit::format_plain(est.std_error) << '\n'
            << "closed_form = " << feynkit::format_plain(reference) << '\n'
            << "residual = " << feynkit::format_plain(est.value - reference) << '\n'
            << "samples_used = " << est.samples_used << '\n';
  if (!est.converged)
    std::cerr << "warning: grid refinement still moves the estimate by "
              << feynkit::format_plain(est.std_error, 3) << "; result may be inaccurate\n";
  return 0;
}

int run_scan(const IntegralArgs& args) {
  feynkit::IntegralSpec spec = to_spec(args);
  spec.cutoff = 1.0;  // placeholder; the scan sets it per row
  const std::vector<feynkit::ScanRow> rows = feynkit::divergence_scan(spec, args.cutoffs);
  feynkit::write_scan_csv(std::cout, rows);
  for (const feynkit::ScanRow& row : rows)
    if (!row.converged)
      std::cerr << "warning: quadrature did not converge at L="
                << feynkit::format_plain(row.cutoff, 6) << '\n';
  return 0;
}

void add_integral_options(CLI::App* cmd, IntegralArgs& args, bool with_cutoff) {
  cmd->add_option("--q", args.q, "Four-vector q as a,b,c,d")->required()->delimiter(',');
  cmd->add_option("--ell", args.ell, "Scalar ell, must exceed q^2")->required();
  if (with_cutoff) cmd->add_option("--L", args.cutoff, "Ball radius")->required();
  cmd->add_option("--mu", args.component, "Component index")->required()->check(CLI::Range(1, 4));
  cmd->add_option("--method", args.method, "Integration method")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, feynkit::IntegrationMethod>{
              {"mc", feynkit::IntegrationMethod::monte_carlo},
              {"quad", feynkit::IntegrationMethod::quadrature}},
          CLI::ignore_case));
  cmd->add_option("--samples", args.samples, "Monte Carlo samples");
  cmd->add_option("--resolution", args.resolution, "Quadrature base grid nodes per axis");
  cmd->add_option("--tolerance", args.tolerance, "Quadrature relative tolerance");
  cmd->add_option("--seed", args.seed, "Monte Carlo seed");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electron-photon diagram toolkit"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a diagram file");
  validate->add_option("file", validate_path, "Diagram file ('-' for stdin)")->required();

  std::string summary_path;
  bool summary_json = false;
  CLI::App* summary = app.add_subcommand("summary", "Report counts and divergence data");
  summary->add_option("file", summary_path, "Diagram file ('-' for stdin)")->required();
  summary->add_flag("--json", summary_json, "Emit the JSON summary document");

  int classify_ne = 0, classify_np = 0, classify_m = 1;
  CLI::App* classify = app.add_subcommand("classify", "Classify divergence from external data");
  classify->add_option("--ne", classify_ne, "External electron count")->required();
  classify->add_option("--np", classify_np, "External photon count")->required();
  classify->add_option("--m", classify_m, "Loop count");

  CLI::App* solve = app.add_subcommand("solve", "Direct and inverse counting problems");
  solve->require_subcommand(1);
  int direct_fe = 0, direct_fp = 0;
  CLI::App* direct = solve->add_subcommand("direct", "External data from internal lines");
  direct->add_option("--fe", direct_fe, "Internal electron lines")->required();
  direct->add_option("--fp", direct_fp, "Internal photon lines")->required();
  int inverse_ne = 0, inverse_np = 0;
  CLI::App* inverse = solve->add_subcommand("inverse", "Internal lines from external data");
  inverse->add_option("--ne", inverse_ne, "External electron count")->required();
  inverse->add_option("--np", inverse_np, "External photon count")->required();

  EnumerateArgs enum_args;
  CLI::App* enumerate = app.add_subcommand("enumerate", "Generate main-condition diagrams");
  auto* opt_n = enumerate->add_option("--n", enum_args.n, "Vertex count");
  auto* opt_ne = enumerate->add_option("--ne", enum_args.ne, "External electron count");
  auto* opt_np = enumerate->add_option("--np", enum_args.np, "External photon count");
  opt_ne->needs(opt_np);
  opt_np->needs(opt_ne);
  enumerate->add_flag("--connected", enum_args.connected, "Only connected diagrams");
  enumerate->add_flag("--irreducible", enum_args.irreducible, "Only bridge-free diagrams");
  enumerate->add_flag("--dedupe", enum_args.dedupe, "One representative per canonical class");
  enumerate->add_flag("--exhaustive-directions", enum_args.exhaustive_directions,
                      "Enumerate every external-leg direction assignment");
  enumerate->add_option("--limit", enum_args.limit, "Cap on emitted diagrams");
  enumerate->add_option("--max-vertices", enum_args.max_vertices, "Explosion guard");
  enumerate->callback([&] {
    if (!enum_args.n && !enum_args.ne)
      throw CLI::ValidationError("enumerate", "provide --n or both --ne and --np");
  });
  (void)opt_n;

  IntegralArgs integrate_args;
  CLI::App* integrate_cmd = app.add_subcommand("integrate", "Evaluate the cutoff integral");
  add_integral_options(integrate_cmd, integrate_args, /*with_cutoff=*/true);

  IntegralArgs scan_args;
  CLI::App* scan_cmd = app.add_subcommand("scan", "Cutoff sweep, CSV on stdout");
  add_integral_options(scan_cmd, scan_args, /*with_cutoff=*/false);
  scan_cmd->add_option("--L-list", scan_args.cutoffs, "Increasing cutoff radii a,b,c")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return run_validate(validate_path);
    if (*summary) return run_summary(summary_path, summary_json);
    if (*classify) return run_classify(classify_ne, classify_np, classify_m);
    if (*direct) return run_solve_direct(direct_fe, direct_fp);
    if (*inverse) return run_solve_inverse(inverse_ne, inverse_np);
    if (*enumerate) return run_enumerate(enum_args);
    if (*integrate_cmd) return run_integrate(integrate_args);
    if (*scan_cmd) return run_scan(scan_args);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const feynkit::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const feynkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

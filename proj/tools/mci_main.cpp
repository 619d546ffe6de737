#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mci/errors.hpp"
#include "mci/estimate.hpp"
#include "mci/model_io.hpp"
#include "mci/reduction.hpp"
#include "mci/serialize.hpp"

namespace {

using namespace mci;

// a filter argument is either an inline spec or a file whose first
// non-empty line holds the spec
std::string load_filter_spec(const std::string& arg) {
  if (!std::filesystem::exists(arg)) return arg;
  std::ifstream in(arg);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r\n");
    if (start != std::string::npos) return line.substr(start);
  }
  throw ParseError("filter file '" + arg + "' is empty");
}

// model files may hold either representation; dispatch on the header tag
std::variant<StateSpaceModel, RationalTransferFunction> load_any_model(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string tag;
  in >> tag;
  in.clear();
  in.seekg(0);
  if (tag == "rtf") return read_rational(in);
  return read_model(in);
}

int run_reduce(const std::string& problem_path, ReductionOptions options,
               const std::string& filter_arg, const std::string& grid_arg) {
  options.filter_spec = load_filter_spec(filter_arg);
  options.grid = GridSpec::parse(grid_arg);
  const Problem problem = read_problem_file(problem_path);
  const ReductionResult result = reduce_problem(problem, options);
  std::cout << result.report.serialize();
  std::cout << "elapsed_seconds=" << fmt_double(result.report.elapsed_seconds) << "\n";
  if (!options.out_dir.empty())
    std::cout << "output_dir=" << options.out_dir << "\n";
  return 0;
}

int run_discretize(const std::string& model_path, double period, const std::string& out) {
  const StateSpaceModel model = read_model_file(model_path);
  const StateSpaceModel discrete = bilinear_discretize(model, period);
  write_model_file(out, discrete);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_freqresp(const std::string& model_path, const std::string& grid_arg, double period,
                 const std::string& out) {
  const GridSpec grid = GridSpec::parse(grid_arg);
  std::ostringstream csv;
  const auto model = load_any_model(model_path);
  if (std::holds_alternative<StateSpaceModel>(model))
    freq_response(csv, std::get<StateSpaceModel>(model), grid, period);
  else
    freq_response(csv, std::get<RationalTransferFunction>(model), grid, period);
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    atomic_write_file(out, csv.str());
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_baltrunc(const std::string& model_path, int degree, double period,
                 const std::string& out) {
  StateSpaceModel model = read_model_file(model_path);
  if (model.domain == Domain::continuous) model = bilinear_discretize(model, period);
  const StateSpaceModel truncated = balanced_truncation(model, degree);
  write_model_file(out, truncated);
  std::cout << "wrote " << out << "\n";
  return 0;
}

struct EstimateArgs {
  std::string filter_arg;
  std::string signal_path;
  bool two_column = false;
  int synth_white = 0;
  std::uint64_t seed = 12345;
  int burn_in = -1;
  std::string impulse_path;
  bool raw_sigma = false;
  std::string out_dir = "estimate_out";
};

int run_estimate(const EstimateArgs& args) {
  const InputToStateFilter filter = parse_filter_spec(load_filter_spec(args.filter_arg));
  SignalSeries signal;
  if (args.synth_white > 0) {
    signal = white_noise(args.synth_white, args.seed);
  } else if (!args.signal_path.empty()) {
    signal = read_signal_file(args.signal_path, args.two_column);
  } else {
    throw ValidationError("either --signal or --synth-white is required");
  }
  const Matrix states = run_filter(filter, signal);
  const int burn = (args.burn_in >= 0)
                       ? args.burn_in
                       : default_burn_in(static_cast<int>(signal.samples.size()));
  const Matrix sigma_raw = sample_covariance(states, burn);

  InterpolationData data;
  data.sigma = args.raw_sigma ? sigma_raw : project_sigma(filter, sigma_raw);
  if (!args.impulse_path.empty()) {
    const SignalSeries h = read_signal_file(args.impulse_path, args.two_column);
    data.markov = markov_from_impulse(filter, h.samples).markov;
  } else {
    data.markov = filter.B(); // white-input default: match the Gramian identity
  }

  bool structure_ok = true;
  try {
    validate_sigma(filter, sigma_raw);
  } catch (const StructureViolation&) {
    structure_ok = false;
  }

  std::ostringstream report;
  report << "samples=" << signal.samples.size() << "\n";
  report << "burn_in=" << burn << "\n";
  report << "projected=" << (args.raw_sigma ? 0 : 1) << "\n";
  report << "structure_ok=" << (structure_ok ? 1 : 0) << "\n";
  report << "gramian_relative_error="
         << fmt_double((sigma_raw - filter.gramian()).norm() / filter.gramian().norm())
         << "\n";
  if (filter.layout() == FilterLayout::caratheodory) {
    std::vector<Complex> first_col(static_cast<size_t>(filter.order()));
    for (int i = 0; i < filter.order(); ++i) first_col[static_cast<size_t>(i)] = sigma_raw(i, 0);
    report << "toeplitz_min_eig=" << fmt_double(toeplitz_psd(first_col)) << "\n";
  }

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);
  write_interp_file((fs::path(args.out_dir) / "problem.interp").string(), data);
  atomic_write_file((fs::path(args.out_dir) / "estimate_report.txt").string(),
                    report.str());
  std::cout << report.str();
  std::cout << "output_dir=" << args.out_dir << "\n";
  return 0;
}

int run_import_mm(const std::string& a_path, const std::string& b_path,
                  const std::string& c_path, const std::string& d_path,
                  const std::string& domain_word, const std::string& out) {
  StateSpaceModel model;
  model.A = read_matrix_market_file(a_path);
  const Matrix B = read_matrix_market_file(b_path);
  const Matrix C = read_matrix_market_file(c_path);
  if (B.cols() != 1) throw DimensionError("B must be a single column");
  if (C.rows() != 1) throw DimensionError("C must be a single row");
  model.B = B.col(0);
  model.C = C;
  model.D = Vector::Zero(1);
  if (!d_path.empty()) {
    const Matrix D = read_matrix_market_file(d_path);
    if (D.rows() != 1 || D.cols() != 1) throw DimensionError("D must be 1 x 1");
    model.D(0) = D(0, 0);
  }
  if (domain_word == "discrete")
    model.domain = Domain::discrete;
  else if (domain_word == "continuous")
    model.domain = Domain::continuous;
  else
    throw ParseError("domain must be 'discrete' or 'continuous'");
  model.require_valid();
  write_model_file(out, model);
  std::cout << "wrote " << out << " (order " << model.order() << ")\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance and Markov interpolation model-reduction tool"};
  app.require_subcommand(1);

  // reduce
  auto* reduce_cmd =
      app.add_subcommand("reduce", "solve the interpolation problem for a model or data file");
  std::string problem_path, filter_arg, grid_arg = "1:1000:200:log";
  ReductionOptions options;
  options.out_dir = "reduced_out";
  reduce_cmd->add_option("problem", problem_path, "model (sss) or data (interp) file")
      ->required();
  reduce_cmd->add_option("--filter", filter_arg, "filter spec or spec file")->required();
  reduce_cmd->add_option("--degree", options.degree, "reduced degree (filter order - 1)");
  reduce_cmd->add_option("--period", options.period, "sampling period for continuous input");
  reduce_cmd->add_option("--grid", grid_arg, "response grid lo:hi:npts:log|lin");
  reduce_cmd->add_flag("--strict-sigma", options.strict_sigma,
                       "reject covariances without the exact displacement structure");
  reduce_cmd->add_flag("--apply-variance", options.apply_variance,
                       "scale the emitted optimizer by sqrt(lambda)");
  reduce_cmd->add_option("--out", options.out_dir, "output directory");

  // discretize
  auto* disc_cmd = app.add_subcommand("discretize", "bilinear continuous-to-discrete bridge");
  std::string disc_model, disc_out;
  double disc_period = 1.0 / 250.0;
  disc_cmd->add_option("model", disc_model, "continuous model file")->required();
  disc_cmd->add_option("--period", disc_period, "sampling period");
  disc_cmd->add_option("--out", disc_out, "output model file")->required();

  // freqresp
  auto* freq_cmd = app.add_subcommand("freqresp", "frequency response CSV");
  std::string freq_model, freq_grid = "1:1000:200:log", freq_out;
  double freq_period = 1.0 / 250.0;
  freq_cmd->add_option("model", freq_model, "model file (sss or rtf)")->required();
  freq_cmd->add_option("--grid", freq_grid, "grid lo:hi:npts:log|lin");
  freq_cmd->add_option("--period", freq_period, "sampling period for discrete models");
  freq_cmd->add_option("--out", freq_out, "output CSV (stdout when omitted)");

  // baltrunc
  auto* bal_cmd = app.add_subcommand("baltrunc", "balanced truncation baseline");
  std::string bal_model, bal_out;
  int bal_degree = 0;
  double bal_period = 1.0 / 250.0;
  bal_cmd->add_option("model", bal_model, "model file")->required();
  bal_cmd->add_option("--degree", bal_degree, "states to keep")->required();
  bal_cmd->add_option("--period", bal_period, "sampling period for continuous input");
  bal_cmd->add_option("--out", bal_out, "output model file")->required();

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "estimate (Sigma, H) from signal data");
  EstimateArgs est;
  est_cmd->add_option("--filter", est.filter_arg, "filter spec or spec file")->required();
  est_cmd->add_option("--signal", est.signal_path, "signal file, one sample per line");
  est_cmd->add_flag("--two-column", est.two_column, "signal lines are 're im' pairs");
  est_cmd->add_option("--synth-white", est.synth_white,
                      "generate this many unit white-noise samples instead");
  est_cmd->add_option("--seed", est.seed, "generator seed for --synth-white");
  est_cmd->add_option("--burn-in", est.burn_in, "transient samples to discard");
  est_cmd->add_option("--impulse", est.impulse_path,
                      "impulse response file for the Markov estimate");
  est_cmd->add_flag("--raw-sigma", est.raw_sigma,
                    "skip the displacement-structure projection");
  est_cmd->add_option("--out", est.out_dir, "output directory");

  // import-mm
  auto* mm_cmd = app.add_subcommand("import-mm", "assemble a model from MatrixMarket files");
  std::string mm_a, mm_b, mm_c, mm_d, mm_domain, mm_out;
  mm_cmd->add_option("--a", mm_a, "A matrix file")->required();
  mm_cmd->add_option("--b", mm_b, "B column file")->required();
  mm_cmd->add_option("--c", mm_c, "C row file")->required();
  mm_cmd->add_option("--d", mm_d, "D scalar file (defaults to zero)");
  mm_cmd->add_option("--domain", mm_domain, "discrete or continuous")->required();
  mm_cmd->add_option("--out", mm_out, "output model file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (reduce_cmd->parsed()) return run_reduce(problem_path, options, filter_arg, grid_arg);
    if (disc_cmd->parsed()) return run_discretize(disc_model, disc_period, disc_out);
    if (freq_cmd->parsed()) return run_freqresp(freq_model, freq_grid, freq_period, freq_out);
    if (bal_cmd->parsed()) return run_baltrunc(bal_model, bal_degree, bal_period, bal_out);
    if (est_cmd->parsed()) return run_estimate(est);
    if (mm_cmd->parsed()) return run_import_mm(mm_a, mm_b, mm_c, mm_d, mm_domain, mm_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: unexpected: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "mci/reduction.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"
#include "mci/serialize.hpp"

namespace mci {

namespace {

constexpr double kTiny = 1e-300;

std::string form_name(RealizationForm form) {
  switch (form) {
    case RealizationForm::full: return "full";
    case RealizationForm::reduced: return "reduced";
    case RealizationForm::companion: return "companion";
    case RealizationForm::rational_companion: return "rational_companion";
  }
  return "unknown";
}

} // namespace

StateSpaceModel bilinear_discretize(const StateSpaceModel& model, double period,
                                    const Tolerances& tol) {
  model.require_valid();
  if (model.domain != Domain::continuous)
    throw DomainMismatch("bilinear discretization needs a continuous model");
  if (!(period > 0.0)) throw ValidationError("sampling period must be positive");
  const double alpha = 2.0 / period;
  const Eigen::Index k = model.order();
  StateSpaceModel out;
  out.domain = Domain::discrete;
  if (k == 0) {
    out.A = Matrix(0, 0);
    out.B = Vector(0);
    out.C = Matrix(model.outputs(), 0);
    out.D = model.D;
    return out;
  }
  const Matrix I = Matrix::Identity(k, k);
  // the map sends s = -2/T to z = infinity, so a pole there has no image
  {
    Eigen::JacobiSVD<Matrix> svd(-alpha * I - model.A);
    const auto& sv = svd.singularValues();
    if (sv(k - 1) <= 1e-12 * std::max(sv(0), kTiny))
      throw SingularBilinear("continuous model has a pole at s = -2/T");
  }
  const Matrix m_minus = alpha * I - model.A;
  Eigen::PartialPivLU<Matrix> lu(m_minus);
  if (std::abs(lu.determinant()) <= kTiny)
    throw SingularBilinear("continuous model has a pole at s = 2/T");
  out.A = lu.solve(alpha * I + model.A);
  out.B = lu.solve(model.B);
  out.C = model.C * (Matrix::Identity(k, k) + out.A);
  out.D = model.D + model.C * lu.solve(model.B);

  // spot check W_d(z) = W_c(s(z)) away from the z = -1 preimage of s = inf
  double worst = 0.0;
  for (Complex z : circle_grid(tol.grid_coarse)) {
    const Complex s = alpha * (1.0 - z) / (1.0 + z);
    const Vector wc = model.eval(s);
    const Vector wd = out.eval(z);
    const double scale = std::max(1.0, wc.norm());
    worst = std::max(worst, (wc - wd).norm() / scale);
  }
  if (worst > tol.bilinear_match)
    throw NumericalError("discretized transfer does not match the continuous one");
  return out;
}

RealVector hankel_singular_values(const StateSpaceModel& model, const Tolerances& tol) {
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("Hankel analysis needs a discrete model");
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("model eigenvalues must lie strictly inside the unit disc");
  if (model.order() == 0) return RealVector(0);
  const Matrix P = solve_stein(model.A, model.B * model.B.adjoint(), tol);
  const Matrix Q = solve_stein(model.A.adjoint(), model.C.adjoint() * model.C, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> ep(P), eq(Q);
  auto factor = [](const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
    Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    return Matrix(es.eigenvectors() * s.asDiagonal());
  };
  const Matrix Rc = factor(ep), Ro = factor(eq);
  Eigen::JacobiSVD<Matrix> svd(Ro.adjoint() * Rc);
  return svd.singularValues();
}

StateSpaceModel balanced_truncation(const StateSpaceModel& model, int k,
                                    const Tolerances& tol) {
  model.require_valid();
  if (model.domain != Domain::discrete)
    throw DomainMismatch("balanced truncation needs a discrete model");
  if (k < 0 || k > model.order())
    throw DimensionError("truncation order must lie between 0 and the model order");
  if (!model.stable(tol.stability_margin))
    throw UnstableModel("model eigenvalues must lie strictly inside the unit disc");
  if (model.order() == 0) return model;
  const Matrix P = solve_stein(model.A, model.B * model.B.adjoint(), tol);
  const Matrix Q = solve_stein(model.A.adjoint(), model.C.adjoint() * model.C, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> ep(P), eq(Q);
  auto factor = [](const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
    Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    return Matrix(es.eigenvectors() * s.asDiagonal());
  };
  const Matrix Rc = factor(ep), Ro = factor(eq);
  Eigen::JacobiSVD<Matrix> svd(Ro.adjoint() * Rc,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& hsv = svd.singularValues();
  if (k > 0 && hsv(k - 1) <= 1e-14 * std::max(hsv(0), kTiny))
    throw SingularSystem("requested order exceeds the numerical Hankel rank");
  Matrix T(model.order(), k), L(k, model.order());
  for (int i = 0; i < k; ++i) {
    const double s = 1.0 / std::sqrt(hsv(i));
    T.col(i) = Rc * svd.matrixV().col(i) * s;
    L.row(i) = svd.matrixU().col(i).adjoint() * Ro.adjoint() * s;
  }
  StateSpaceModel out;
  out.domain = Domain::discrete;
  out.A = L * model.A * T;
  out.B = L * model.B;
  out.C = model.C * T;
  out.D = model.D;
  out.require_valid();
  return out;
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4) throw ParseError("grid spec must be lo:hi:npts:log|lin");
  GridSpec g;
  try {
    size_t pos = 0;
    g.lo = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument(parts[0]);
    g.hi = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
    g.npts = std::stoi(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    throw ParseError("bad number in grid spec '" + text + "'");
  }
  if (parts[3] == "log")
    g.log_spaced = true;
  else if (parts[3] == "lin")
    g.log_spaced = false;
  else
    throw ParseError("grid spacing must be 'log' or 'lin'");
  if (!(g.lo > 0.0) && g.log_spaced) throw ParseError("log grid needs lo > 0");
  if (!(g.hi >= g.lo) || g.npts < 1) throw ParseError("grid needs hi >= lo and npts >= 1");
  return g;
}

std::vector<double> GridSpec::omegas() const {
  std::vector<double> out(static_cast<size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    const double t = (npts == 1) ? 0.0 : static_cast<double>(i) / (npts - 1);
    out[static_cast<size_t>(i)] =
        log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                   : lo + t * (hi - lo);
  }
  return out;
}

namespace {

void write_response_rows(std::ostream& out, const GridSpec& grid,
                         const std::function<Complex(double)>& value) {
  out << "omega,magnitude,phase_rad\n";
  for (double w : grid.omegas()) {
    const Complex v = value(w);
    out << fmt_double(w) << "," << fmt_double(std::abs(v)) << ","
        << fmt_double(std::arg(v)) << "\n";
  }
}

Complex discrete_point(double omega, double period) {
  const Complex iwt(0.0, omega * period * 0.5);
  return (Complex(1.0, 0.0) - iwt) / (Complex(1.0, 0.0) + iwt);
}

} // namespace

void freq_response(std::ostream& out, const StateSpaceModel& model, const GridSpec& grid,
                   double period) {
  model.require_valid();
  if (model.outputs() != 1) throw DimensionError("response needs a single-output model");
  if (model.domain == Domain::continuous) {
    write_response_rows(out, grid,
                        [&](double w) { return model.eval_scalar(Complex(0.0, w)); });
  } else {
    write_response_rows(out, grid, [&](double w) {
      return model.eval_scalar(discrete_point(w, period));
    });
  }
}

void freq_response(std::ostream& out, const RationalTransferFunction& model,
                   const GridSpec& grid, double period) {
  write_response_rows(out, grid,
                      [&](double w) { return model.eval(discrete_point(w, period)); });
}

std::string ReductionReport::serialize() const {
  std::ostringstream out;
  out << "lambda=" << fmt_double(lambda) << "\n";
  out << "markov_residual=" << fmt_double(markov_residual) << "\n";
  out << "covariance_residual=" << fmt_double(covariance_residual) << "\n";
  out << "sigma_structure_residual=" << fmt_double(sigma_structure_residual) << "\n";
  out << "multiplicity=" << multiplicity << "\n";
  out << "unique=" << (unique ? 1 : 0) << "\n";
  out << "input_stable=" << (input_stable ? 1 : 0) << "\n";
  out << "reduced_stable=" << (reduced_stable ? 1 : 0) << "\n";
  out << "filter=" << filter_descriptor << "\n";
  out << "degree=" << degree << "\n";
  out << "form=" << form << "\n";
  out << "applied_variance=" << (applied_variance ? 1 : 0) << "\n";
  return out.str();
}

namespace {

// solve + realize + verify; shared by both pipeline entries
ReductionResult finish_reduction(const InputToStateFilter& filter,
                                 const InterpolationData& data,
                                 const StateSpaceModel* discrete_input,
                                 const ReductionOptions& options, const Tolerances& tol) {
  const auto t0 = std::chrono::steady_clock::now();
  ReductionResult result;
  Solution sol = solve(filter, data, options.strict_sigma, tol);
  RationalTransferFunction rtf = to_rational(filter, sol, tol);

  // emit the (n-1)-state form when xi B is comfortably nonzero, the closed
  // companion form when it is merely usable, and fall back otherwise
  const double xiB = std::abs((sol.xi * filter.B()).value());
  const double xiB_scale = std::max(sol.xi.norm() * filter.B().norm(), kTiny);
  RealizationForm want = RealizationForm::reduced;
  if (xiB <= std::sqrt(tol.zero) * xiB_scale) want = RealizationForm::companion;
  RealizationNote note;
  StateSpaceModel ssm = to_state_space(filter, sol, want, &note, tol);

  const double markov_res =
      (markov_check(filter, rtf, tol) - data.markov).norm() /
      std::max(data.markov.norm(), kTiny);
  const double cov_res =
      (covariance_check(filter, rtf, sol.lambda, CovRoute::polynomial, tol) - data.sigma)
          .norm() /
      std::max(data.sigma.norm(), kTiny);

  if (options.apply_variance) {
    const double g = std::sqrt(sol.lambda);
    rtf = RationalTransferFunction(rtf.num.scaled(g), rtf.den);
    ssm.C *= g;
    ssm.D *= g;
  }

  ReductionReport& report = result.report;
  report.lambda = sol.lambda;
  report.markov_residual = markov_res;
  report.covariance_residual = cov_res;
  report.sigma_structure_residual = sol.sigma_structure_residual;
  report.multiplicity = sol.multiplicity;
  report.unique = sol.unique;
  report.input_stable = true;
  report.reduced_stable = rtf.stable(tol.stability_margin) && ssm.stable(tol.stability_margin);
  report.filter_descriptor = filter.descriptor();
  report.degree = filter.order() - 1;
  report.form = form_name(note.used);
  report.applied_variance = options.apply_variance;

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir(options.out_dir);
    fs::create_directories(dir);
    write_rational_file((dir / "reduced.rtf").string(), rtf);
    write_model_file((dir / "reduced.sss").string(), ssm);
    {
      std::ostringstream csv;
      freq_response(csv, ssm, options.grid, options.period);
      atomic_write_file((dir / "freq_reduced.csv").string(), csv.str());
    }
    if (discrete_input) {
      std::ostringstream csv;
      freq_response(csv, *discrete_input, options.grid, options.period);
      atomic_write_file((dir / "freq_input.csv").string(), csv.str());
    }
    atomic_write_file((dir / "report.txt").string(), report.serialize());
  }

  result.rational = std::move(rtf);
  result.state_space = std::move(ssm);
  result.solution = std::move(sol);
  result.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

} // namespace

ReductionResult reduce_model(const StateSpaceModel& input, const ReductionOptions& options,
                             const Tolerances& tol) {
  input.require_valid();
  if (input.outputs() != 1) throw DimensionError("reduction needs a single-output model");
  if (options.filter_spec.empty()) throw ValidationError("a filter spec is required");
  StateSpaceModel discrete =
      (input.domain == Domain::continuous)
          ? bilinear_discretize(input, options.period, tol)
          : input;
  if (!discrete.stable(tol.stability_margin))
    throw UnstableModel("input model must be stable");
  InputToStateFilter filter = parse_filter_spec(options.filter_spec);
  if (options.degree >= 0 && filter.order() != options.degree + 1)
    throw DimensionError("filter order must be the requested degree plus one");

  InterpolationData data;
  data.markov = markov_check(filter, discrete, tol);
  data.sigma = covariance_check(filter, discrete, 1.0, CovRoute::statespace, tol);
  return finish_reduction(filter, data, &discrete, options, tol);
}

ReductionResult reduce_data(const InputToStateFilter& filter, const InterpolationData& data,
                            const ReductionOptions& options, const Tolerances& tol) {
  if (options.degree >= 0 && filter.order() != options.degree + 1)
    throw DimensionError("filter order must be the requested degree plus one");
  return finish_reduction(filter, data, nullptr, options, tol);
}

ReductionResult reduce_problem(const Problem& problem, const ReductionOptions& options,
                               const Tolerances& tol) {
  if (std::holds_alternative<StateSpaceModel>(problem))
    return reduce_model(std::get<StateSpaceModel>(problem), options, tol);
  if (options.filter_spec.empty())
    throw ValidationError("interpolation problems need an explicit filter spec");
  InputToStateFilter filter = parse_filter_spec(options.filter_spec);
  const InterpolationData& data = std::get<InterpolationData>(problem);
  if (data.sigma.rows() != filter.order())
    throw DimensionError("problem size must match the filter order");
  return reduce_data(filter, data, options, tol);
}

} // namespace mci

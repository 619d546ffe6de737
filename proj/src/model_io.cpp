#include "mci/model_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mci/errors.hpp"
#include "mci/serialize.hpp"

namespace mci {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_complex(Complex v) {
  return fmt_double(v.real()) + " " + fmt_double(v.imag());
}

namespace {

double read_double(std::istream& in, const char* what) {
  double v;
  if (!(in >> v)) throw ParseError(std::string("expected a number for ") + what);
  return v;
}

Complex read_complex(std::istream& in, const char* what) {
  const double re = read_double(in, what);
  const double im = read_double(in, what);
  return Complex(re, im);
}

int read_count(std::istream& in, const char* what) {
  int v;
  if (!(in >> v) || v < 0) throw ParseError(std::string("expected a count for ") + what);
  return v;
}

void expect_done(std::istream& in, const char* what) {
  std::string left;
  if (in >> left)
    throw ParseError(std::string("unexpected trailing content in ") + what + ": '" + left + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

StateSpaceModel read_model_body(std::istream& in, int order, const std::string& domain_word) {
  Domain domain;
  if (domain_word == "discrete")
    domain = Domain::discrete;
  else if (domain_word == "continuous")
    domain = Domain::continuous;
  else
    throw ParseError("model domain must be 'discrete' or 'continuous'");
  StateSpaceModel m;
  m.domain = domain;
  m.A = Matrix(order, order);
  m.B = Vector(order);
  m.C = Matrix(1, order);
  m.D = Vector(1);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) m.A(i, j) = read_complex(in, "A");
  for (int i = 0; i < order; ++i) m.B(i) = read_complex(in, "B");
  for (int j = 0; j < order; ++j) m.C(0, j) = read_complex(in, "C");
  m.D(0) = read_complex(in, "D");
  m.require_valid();
  return m;
}

} // namespace

StateSpaceModel read_model(std::istream& in) {
  std::string tag;
  if (!(in >> tag) || tag != "sss") throw ParseError("model file must start with 'sss'");
  const int order = read_count(in, "model order");
  std::string domain_word;
  in >> domain_word;
  StateSpaceModel m = read_model_body(in, order, domain_word);
  expect_done(in, "model file");
  return m;
}

StateSpaceModel read_model_file(const std::string& path) {
  auto in = open_input(path);
  return read_model(in);
}

void write_model(std::ostream& out, const StateSpaceModel& model) {
  model.require_valid();
  if (model.outputs() != 1)
    throw DimensionError("model files hold single-output models");
  const int n = model.order();
  out << "sss " << n << " "
      << (model.domain == Domain::discrete ? "discrete" : "continuous") << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << fmt_complex(model.A(i, j));
    out << "\n";
  }
  for (int i = 0; i < n; ++i) out << fmt_complex(model.B(i)) << "\n";
  for (int j = 0; j < n; ++j) out << (j ? " " : "") << fmt_complex(model.C(0, j));
  if (n > 0) out << "\n";
  out << fmt_complex(model.D(0)) << "\n";
}

void write_model_file(const std::string& path, const StateSpaceModel& model) {
  std::ostringstream body;
  write_model(body, model);
  atomic_write_file(path, body.str());
}

RationalTransferFunction read_rational(std::istream& in) {
  std::string tag;
  if (!(in >> tag) || tag != "rtf") throw ParseError("rational file must start with 'rtf'");
  const int nn = read_count(in, "numerator length");
  const int nd = read_count(in, "denominator length");
  if (nn < 1 || nd < 1) throw ParseError("coefficient counts must be positive");
  std::vector<Complex> num(static_cast<size_t>(nn)), den(static_cast<size_t>(nd));
  for (auto& c : num) c = read_complex(in, "numerator");
  for (auto& c : den) c = read_complex(in, "denominator");
  expect_done(in, "rational file");
  return RationalTransferFunction(Polynomial(std::move(num)), Polynomial(std::move(den)));
}

void write_rational(std::ostream& out, const RationalTransferFunction& model) {
  out << "rtf " << model.num.coeffs().size() << " " << model.den.coeffs().size() << "\n";
  for (Complex c : model.num.coeffs()) out << fmt_complex(c) << "\n";
  for (Complex c : model.den.coeffs()) out << fmt_complex(c) << "\n";
}

void write_rational_file(const std::string& path, const RationalTransferFunction& model) {
  std::ostringstream body;
  write_rational(body, model);
  atomic_write_file(path, body.str());
}

Problem read_problem_file(const std::string& path) {
  auto in = open_input(path);
  std::string tag;
  if (!(in >> tag)) throw ParseError("empty problem file '" + path + "'");
  if (tag == "sss") {
    const int order = read_count(in, "model order");
    std::string domain_word;
    in >> domain_word;
    StateSpaceModel m = read_model_body(in, order, domain_word);
    expect_done(in, "model file");
    return m;
  }
  if (tag == "interp") {
    const int n = read_count(in, "problem size");
    if (n < 1) throw ParseError("problem size must be positive");
    InterpolationData data;
    data.sigma = Matrix(n, n);
    data.markov = Vector(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) data.sigma(i, j) = read_complex(in, "Sigma");
    for (int i = 0; i < n; ++i) data.markov(i) = read_complex(in, "H");
    expect_done(in, "problem file");
    return data;
  }
  throw ParseError("problem file must start with 'sss' or 'interp'");
}

void write_interp(std::ostream& out, const InterpolationData& data) {
  const Eigen::Index n = data.sigma.rows();
  if (data.sigma.cols() != n || data.markov.size() != n)
    throw DimensionError("covariance must be square with a matching Markov vector");
  out << "interp " << n << "\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      out << (j ? " " : "") << fmt_complex(data.sigma(i, j));
    out << "\n";
  }
  for (Eigen::Index i = 0; i < n; ++i) out << fmt_complex(data.markov(i)) << "\n";
}

void write_interp_file(const std::string& path, const InterpolationData& data) {
  std::ostringstream body;
  write_interp(body, data);
  atomic_write_file(path, body.str());
}

SignalSeries read_signal(std::istream& in, bool two_column, double sample_period) {
  SignalSeries out;
  out.sample_period = sample_period;
  if (two_column) {
    double re, im;
    while (in >> re >> im) out.samples.emplace_back(re, im);
  } else {
    double re;
    while (in >> re) out.samples.emplace_back(re, 0.0);
  }
  if (!in.eof() && in.fail()) throw ParseError("signal stream contains a malformed value");
  if (out.samples.empty()) throw ParseError("signal stream is empty");
  return out;
}

SignalSeries read_signal_file(const std::string& path, bool two_column,
                              double sample_period) {
  auto in = open_input(path);
  return read_signal(in, two_column, sample_period);
}

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0)
    throw ParseError("missing MatrixMarket header");
  std::istringstream hs(header);
  std::string mm, object, format, field, symmetry;
  hs >> mm >> object >> format >> field >> symmetry;
  if (object != "matrix") throw ParseError("only 'matrix' objects are supported");
  const bool coordinate = (format == "coordinate");
  if (!coordinate && format != "array")
    throw ParseError("unsupported MatrixMarket format '" + format + "'");
  const bool complex_field = (field == "complex");
  if (!complex_field && field != "real" && field != "integer")
    throw ParseError("unsupported MatrixMarket field '" + field + "'");
  const bool symmetric = (symmetry == "symmetric");
  const bool hermitian = (symmetry == "hermitian");
  if (!symmetric && !hermitian && symmetry != "general")
    throw ParseError("unsupported MatrixMarket symmetry '" + symmetry + "'");

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  Eigen::Index rows, cols;
  if (!(sizes >> rows >> cols) || rows < 1 || cols < 1)
    throw ParseError("bad MatrixMarket size line");

  Matrix M = Matrix::Zero(rows, cols);
  auto entry = [&](std::istream& s) {
    const double re = read_double(s, "matrix entry");
    const double im = complex_field ? read_double(s, "matrix entry") : 0.0;
    return Complex(re, im);
  };
  if (coordinate) {
    long long nnz;
    if (!(sizes >> nnz) || nnz < 0) throw ParseError("bad MatrixMarket nonzero count");
    for (long long k = 0; k < nnz; ++k) {
      Eigen::Index i, j;
      if (!(in >> i >> j)) throw ParseError("truncated MatrixMarket entries");
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("MatrixMarket index out of range");
      const Complex v = entry(in);
      M(i - 1, j - 1) = v;
      if ((symmetric || hermitian) && i != j)
        M(j - 1, i - 1) = hermitian ? std::conj(v) : v;
    }
  } else {
    // array entries are column-major; symmetric files store the lower triangle
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = (symmetric || hermitian) ? j : 0; i < rows; ++i) {
        const Complex v = entry(in);
        M(i, j) = v;
        if ((symmetric || hermitian) && i != j)
          M(j, i) = hermitian ? std::conj(v) : v;
      }
    }
  }
  return M;
}

Matrix read_matrix_market_file(const std::string& path) {
  auto in = open_input(path);
  return read_matrix_market(in);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ValidationError("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

} // namespace mci

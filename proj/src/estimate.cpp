#include "mci/estimate.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mci/errors.hpp"
#include "mci/numkit.hpp"

namespace mci {

Matrix run_filter(const InputToStateFilter& filter, const SignalSeries& y) {
  const Eigen::Index n = filter.order();
  const Eigen::Index N = static_cast<Eigen::Index>(y.samples.size());
  if (N < 1) throw DimensionError("signal must contain at least one sample");
  for (Complex v : y.samples)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("signal entries must be finite");
  Matrix states(n, N);
  Vector x = Vector::Zero(n);
  for (Eigen::Index k = 0; k < N; ++k) {
    x = filter.A() * x + filter.B() * y.samples[static_cast<size_t>(k)];
    states.col(k) = x;
  }
  return states;
}

int default_burn_in(int n_samples) { return std::min(1000, n_samples / 10); }

Matrix sample_covariance(const Matrix& states, int burn_in) {
  if (burn_in < 0) throw DimensionError("burn-in must be nonnegative");
  const Eigen::Index N = states.cols();
  if (N - burn_in <= 0) throw EmptyAfterBurnIn("no samples remain after the burn-in cut");
  const Eigen::Index kept = N - burn_in;
  const auto tail = states.rightCols(kept);
  Matrix S = (tail * tail.adjoint()) / static_cast<double>(kept);
  return 0.5 * (S + S.adjoint());
}

MarkovEstimate markov_from_impulse(const InputToStateFilter& filter,
                                   const std::vector<Complex>& h) {
  if (h.empty()) throw DimensionError("impulse response must contain h_0");
  Vector acc = Vector::Zero(filter.order());
  Vector v = filter.B(); // A^k B
  double hmax = 0.0;
  for (Complex hk : h) {
    acc += std::conj(hk) * v;
    v = filter.A() * v;
    hmax = std::max(hmax, std::abs(hk));
  }
  const double rho = spectral_radius(filter.A());
  const double bound =
      filter.B().norm() * hmax * std::pow(rho, static_cast<double>(h.size())) / (1.0 - rho);
  return {acc, bound};
}

double toeplitz_psd(const std::vector<Complex>& R) {
  if (R.empty()) throw DimensionError("at least R_0 is required");
  const Eigen::Index m = static_cast<Eigen::Index>(R.size());
  Matrix T(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      T(i, j) = (i >= j) ? R[static_cast<size_t>(i - j)]
                         : std::conj(R[static_cast<size_t>(j - i)]);
  T = 0.5 * (T + T.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(T, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SignalSeries white_noise(int n_samples, std::uint64_t seed, double sample_period) {
  if (n_samples < 1) throw DimensionError("need at least one sample");
  std::mt19937_64 gen(seed);
  auto uniform = [&gen]() {
    // 53-bit mantissa in [0, 1); bit-identical across platforms
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  SignalSeries out;
  out.sample_period = sample_period;
  out.samples.reserve(static_cast<size_t>(n_samples));
  while (static_cast<int>(out.samples.size()) < n_samples) {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    out.samples.emplace_back(r * std::cos(th), 0.0);
    if (static_cast<int>(out.samples.size()) < n_samples)
      out.samples.emplace_back(r * std::sin(th), 0.0);
  }
  return out;
}

} // namespace mci

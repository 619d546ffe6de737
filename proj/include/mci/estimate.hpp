#pragma once

#include <cstdint>
#include <vector>

#include "mci/filter.hpp"

namespace mci {

struct SignalSeries {
  std::vector<Complex> samples;
  double sample_period = 1.0;
};

// x_k = A x_{k-1} + B y_k from x_0 = 0; returns one state column per sample
Matrix run_filter(const InputToStateFilter& filter, const SignalSeries& y);

// default transient cut: min(1000, N/10)
int default_burn_in(int n_samples);

// ergodic average (1/(N-burn)) sum_{k>burn} x_k x_k*
Matrix sample_covariance(const Matrix& states, int burn_in);

struct MarkovEstimate {
  Vector markov;
  double truncation_bound; // ||B|| max|h| rho^(l+1) / (1 - rho)
};

// Hhat = sum_k conj(h_k) A^k B from a truncated impulse response h_0..h_l
MarkovEstimate markov_from_impulse(const InputToStateFilter& filter,
                                   const std::vector<Complex>& h);

// smallest eigenvalue of the Hermitian Toeplitz matrix with first column R
double toeplitz_psd(const std::vector<Complex>& R);

// unit-variance real Gaussian draws; Box-Muller over a fixed 64-bit generator
// so a given seed produces identical samples on every platform
SignalSeries white_noise(int n_samples, std::uint64_t seed, double sample_period = 1.0);

} // namespace mci

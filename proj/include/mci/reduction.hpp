#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mci/filter.hpp"
#include "mci/interp.hpp"
#include "mci/model.hpp"
#include "mci/model_io.hpp"
#include "mci/realize.hpp"

namespace mci {

// Tustin map z = (1 - sT/2)/(1 + sT/2): continuous model to the equivalent
// delay-convention discrete model, W_d(z) = W_c(s(z)).
StateSpaceModel bilinear_discretize(const StateSpaceModel& model, double period,
                                    const Tolerances& tol = default_tolerances());

RealVector hankel_singular_values(const StateSpaceModel& model,
                                  const Tolerances& tol = default_tolerances());

// square-root balanced truncation of a stable discrete model to k states
StateSpaceModel balanced_truncation(const StateSpaceModel& model, int k,
                                    const Tolerances& tol = default_tolerances());

struct GridSpec {
  double lo = 1.0;
  double hi = 1000.0;
  int npts = 200;
  bool log_spaced = true;

  static GridSpec parse(const std::string& text); // "lo:hi:npts:log|lin"
  std::vector<double> omegas() const;
};

// CSV rows "omega,magnitude,phase_rad". Continuous models are evaluated at
// s = i*omega, discrete ones at z = (1 - i*omega*T/2)/(1 + i*omega*T/2), so
// both appear over the same omega axis.
void freq_response(std::ostream& out, const StateSpaceModel& model, const GridSpec& grid,
                   double period);
void freq_response(std::ostream& out, const RationalTransferFunction& model,
                   const GridSpec& grid, double period);

struct ReductionOptions {
  std::string filter_spec;
  int degree = -1;              // -1: take the filter order minus one
  double period = 1.0 / 250.0;  // sampling period for the bilinear bridge
  bool strict_sigma = false;
  bool apply_variance = false;  // scale the emitted optimizer by sqrt(lambda)
  std::string out_dir;          // empty: compute only, write nothing
  GridSpec grid;
};

struct ReductionReport {
  double lambda = 0.0;
  double markov_residual = 0.0;
  double covariance_residual = 0.0;
  double sigma_structure_residual = 0.0;
  int multiplicity = 1;
  bool unique = true;
  bool input_stable = true;
  bool reduced_stable = true;
  std::string filter_descriptor;
  int degree = 0;
  std::string form;
  bool applied_variance = false;
  double elapsed_seconds = 0.0; // console diagnostic; not serialized

  std::string serialize() const; // deterministic key=value block
};

struct ReductionResult {
  ReductionReport report;
  std::optional<RationalTransferFunction> rational;
  std::optional<StateSpaceModel> state_space;
  std::optional<Solution> solution;
};

// Full pipeline for a model input: discretize if continuous, build the
// filter, compute (Sigma, H) exactly through the cascade Gramian, solve,
// realize, verify, and (optionally) write models, report and response CSVs.
ReductionResult reduce_model(const StateSpaceModel& input, const ReductionOptions& options,
                             const Tolerances& tol = default_tolerances());

// Same tail of the pipeline for explicit interpolation data.
ReductionResult reduce_data(const InputToStateFilter& filter, const InterpolationData& data,
                            const ReductionOptions& options,
                            const Tolerances& tol = default_tolerances());

ReductionResult reduce_problem(const Problem& problem, const ReductionOptions& options,
                               const Tolerances& tol = default_tolerances());

} // namespace mci

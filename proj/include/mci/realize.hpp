#pragma once

#include "mci/filter.hpp"
#include "mci/interp.hpp"
#include "mci/model.hpp"

namespace mci {

enum class RealizationForm {
  full,               // n states, projector form
  reduced,            // n-1 states via the reachability coordinates
  companion,          // n-1 states, closed-form companion dynamics
  rational_companion  // generic realization of the rational form (fallback)
};

struct RealizationNote {
  RealizationForm requested = RealizationForm::reduced;
  RealizationForm used = RealizationForm::reduced;
  bool fell_back = false;
};

// stable d plus Psi = fbar(A) for f = d/a, the positive-real part of W W*
struct PositiveRealPart {
  Polynomial d;
  Matrix psi;
};

enum class CovRoute { polynomial, statespace };

// W = (sigma_row G)/(xi G) through the determinant formulas; degree <= n-1.
RationalTransferFunction to_rational(const InputToStateFilter& filter,
                                     const Solution& solution,
                                     const Tolerances& tol = default_tolerances());

// State-space realization of the optimizer. When |xi B| is numerically zero
// the requested form is unavailable and the generic realization of the
// rational form is returned instead; `note` reports what happened.
StateSpaceModel to_state_space(const InputToStateFilter& filter, const Solution& solution,
                               RealizationForm form, RealizationNote* note = nullptr,
                               const Tolerances& tol = default_tolerances());

// State-Markov vector of a model against this filter, rational route
// Wbar(A)B and state-space route B D* + A P C* with the cross Stein solve.
Vector markov_check(const InputToStateFilter& filter, const RationalTransferFunction& model,
                    const Tolerances& tol = default_tolerances());
Vector markov_check(const InputToStateFilter& filter, const StateSpaceModel& model,
                    const Tolerances& tol = default_tolerances());

// State covariance Lambda<GW, GW*> of the filtered model output. The
// polynomial route goes through the spectral factor of W W*, the state-space
// route through the Gramian of the cascade realization.
Matrix covariance_check(const InputToStateFilter& filter,
                        const RationalTransferFunction& model, double Lambda,
                        CovRoute route = CovRoute::polynomial,
                        const Tolerances& tol = default_tolerances());
Matrix covariance_check(const InputToStateFilter& filter, const StateSpaceModel& model,
                        double Lambda, CovRoute route = CovRoute::statespace,
                        const Tolerances& tol = default_tolerances());

PositiveRealPart positive_real_part(const InputToStateFilter& filter,
                                    const RationalTransferFunction& model,
                                    const Tolerances& tol = default_tolerances());

// Realization of the product G(z) * model(z); one output per filter state.
StateSpaceModel cascade(const InputToStateFilter& filter, const StateSpaceModel& model);

// Generic delay-convention conversions between the two model types.
StateSpaceModel rational_to_state_space(const RationalTransferFunction& model,
                                        const Tolerances& tol = default_tolerances());
RationalTransferFunction state_space_to_rational(const StateSpaceModel& model);

} // namespace mci

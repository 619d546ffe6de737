#pragma once

namespace mci {

// Every comparison threshold in the library lives here. All tolerances are
// relative to a problem-dependent scale unless noted otherwise.
struct Tolerances {
  double stein_residual = 1e-12;        // solve_stein: ||X - AXM* - Q|| / ||Q||
  double spectral_radius_margin = 1e-9; // stability requires rho(A) < 1 - margin
  double psd = 1e-10;                   // Hermitian / PSD admission checks
  double pencil_post = 1e-9;            // min-eig(S - lambda*M) >= -pencil_post*||S||
  double pencil_rank = 1e-12;           // rank cut when compressing onto range(M)
  double pencil_cluster = 1e-8;         // eigenvalue clustering for multiplicity
  double spectral_factor_check = 1e-9;  // circle-grid residual of b b* = d a* + a d*
  double stability_margin = 1e-9;       // root with modulus <= 1 + margin counts as unstable
  double near_pole = 1e-12;             // eval_G blow-up guard: ||G(z)|| <= ||B||/near_pole
  double sigma_structure = 1e-8;        // residual bound for Sigma - A Sigma A* = BL + L*B*
  double reach_rank = 1e-10;            // smallest/largest singular value of Gamma
  double zero = 1e-12;                  // generic exact-zero detection (xi*B, coefficients)
  double grid_match = 1e-8;             // realization vs rational agreement on the disc grid
  double route_match = 1e-6;            // polynomial vs state-space covariance routes
  double cascade_match = 1e-9;          // cascade transfer vs product of transfers
  double bilinear_match = 1e-8;         // discretized vs continuous transfer on the grid

  int grid_coarse = 64;
  int grid_medium = 128;
  int grid_fine = 512;
  int grid_spectral = 256;
};

const Tolerances& default_tolerances();

} // namespace mci

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "nahm/su2embed.hpp"

namespace nahm {

struct NahmState {
  double y = 0.0;
  std::array<AlgebraElement, 3> phi;
};

struct Trajectory {
  std::vector<NahmState> samples;  // y strictly increasing
  double tol = 0.0;

  /// Max over samples of the Nahm residual ||dphi/dy + phi x phi|| estimated
  /// from the accepted local error (re-evaluated exactly by the tests).
  double max_step_error = 0.0;
};

/// Right-hand side of dphi_a/dy = -1/2 eps_abc [phi_b, phi_c].
std::array<AlgebraElement, 3> nahm_rhs(const NahmState& s);

/// Integrates from the exact initial condition phi(y_start) = t / (y_start -
/// y0_shift) and checks the trajectory stays on the closed pole family.
Trajectory integrate_pole(const Su2Triple& t, double y0_shift, double y_start, double y_end,
                          double tol = 1e-10);

/// Max deviation of a trajectory from phi = t / (y - y0_shift).
double pole_family_deviation(const Trajectory& traj, const Su2Triple& t, double y0_shift);

/// Residual of the linearized flow d psi_a/dy + eps_abc [t_b / y, psi_c] on
/// the shift mode psi_a = t_a / y^2, sampled at the given y values.
double linearized_mode_residual(const Su2Triple& t, const std::vector<double>& ys = {0.5, 1.0, 2.0});

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace nahm

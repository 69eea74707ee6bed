#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace nahm {

enum class SpectralBc { dirichlet, neumann };

/// Radial-sector hemisphere problem
///   W f = -(1/sin^{D-2}) d_psi sin^{D-2} d_psi f + j_eff(j_eff+1)/cos^2 f
/// on 0 <= psi <= pi/2, with j_eff = j - eta_shift and the angular Laplacian
/// replaced by its lowest eigenvalue 0.
struct SpectralProblem {
  int ambient_dim = 4;  // 4 or 5
  double j = 1.0;       // non-negative half-integer
  int eta_shift = 0;    // in {-1, 0, 1}
  SpectralBc bc = SpectralBc::dirichlet;
  int grid_points = 250;      // base resolution, refined x2 and x4
  double cutoff_eps = 1e-4;   // Dirichlet wall at pi/2 - eps

  double j_eff() const { return j - eta_shift; }
};

/// Closed-form lowest eigenvalue: (j_eff+1)(j_eff+3) in 4d,
/// (j_eff+1)(j_eff+4) in 5d; 0 for the Neumann j_eff = 0 sector.
double closed_form_gamma(const SpectralProblem& p);

/// Lowest eigenvalue of one finite-volume discretization (no extrapolation).
double lowest_eigenvalue_raw(const SpectralProblem& p, int points, double eps);

struct SpectralSolve {
  double gamma = 0.0;            // extrapolated lowest eigenvalue
  double observed_order = 0.0;   // log2 slope across the three grids
  std::vector<double> raw;       // eigenvalues at n, 2n, 4n (finest eps)
};

/// Richardson extrapolation over three grid refinements and one cutoff
/// halving; throws if successive extrapolants move by more than 1e-4
/// relatively.
SpectralSolve lowest_eigenvalue(const SpectralProblem& p);

/// Ground eigenvector at one resolution, with the cell centers.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ground_eigenvector(const SpectralProblem& p,
                                                               int points, double eps);

/// Applies the continuous operator to f = cos^{j_eff+1} psi analytically and
/// returns max |W f - gamma f| / |f| over interior sample points.
double verify_ground_state(const SpectralProblem& p);

struct DecayResult {
  double gamma = 0.0;
  double s_decay = 0.0;
  double s_grow = 0.0;
};

/// Radial exponents r^s: s(s+2) = gamma in 4d, s(s+3) = gamma in 5d.
DecayResult decay_exponent(double gamma, int ambient_dim);

struct EtaCoupledModes {
  std::array<double, 2> eigenvalues;  // {j+1, -j}
  std::array<double, 2> j_effective;  // W-shift expressed as j -> j - eta
};

/// Eigenvalues of M = [[1, sqrt(j(j+1))], [sqrt(j(j+1)), 0]] coupling the
/// eta = 0 pair (u, a_y), and the equivalent shifts of the W potential.
EtaCoupledModes eta_coupled_modes(double j);

}  // namespace nahm

#pragma once

#include <complex>
#include <map>
#include <vector>

#include "nahm/indicial.hpp"

namespace nahm {

/// The reduced model operator L1(k) = d/dy + B0/y + B1(k) obtained from the
/// linearized equations on momentum eigenstates e^{i k x}.  B1 is complex,
/// block-off-diagonal between the two sectors, Hermitian for the gram form,
/// with B1(k)^2 = |k|^2 and N B1 N^{-1} = -B1.
class ReducedOperator {
 public:
  ReducedOperator(const IndicialSystem& sys, const Eigen::Vector3d& k);

  const IndicialSystem& system() const { return *sys_; }
  const Eigen::Vector3d& k() const { return k_; }
  double kmag() const { return k_.norm(); }

  /// B1 in the orthonormal frame; identical to the original-frame matrix
  /// since B1 acts trivially on the algebra factor.
  const Eigen::MatrixXcd& B1() const { return b1_; }
  /// B0/y + B1 in the orthonormal frame.
  Eigen::MatrixXcd B_sym(double y) const;

  double invariant_residual() const;

 private:
  const IndicialSystem* sys_;
  Eigen::Vector3d k_;
  Eigen::MatrixXcd b1_;
};

ReducedOperator assemble_symbol(const IndicialSystem& sys, const Eigen::Vector3d& k);

/// Frobenius solution about y = 0: sum over m <= order and log powers p of
/// c_{m,p} y^{root+m} log(y)^p / p!.  Log levels appear exactly at the
/// resonant steps where root+m is again an indicial root.
class FrobeniusSeries {
 public:
  double root = 0.0;
  int order = 0;
  /// coefficient levels in the orthonormal frame, coeffs[m][p]
  std::vector<std::map<int, Eigen::VectorXcd>> coeffs;

  bool has_log_terms() const;
  Eigen::VectorXcd evaluate_sym(double y) const;
  Eigen::VectorXcd derivative_sym(double y) const;
  /// Exact residual L1(k) Psi(y) of the truncated series; decays like
  /// y^{root+order} (times logs) as y -> 0.
  double residual_norm(const ReducedOperator& op, double y) const;
};

/// Expands the solution seeded by an eigenvector of the root eigenspace
/// (seed in the orthonormal frame; defaults to the first eigenvector).
FrobeniusSeries frobenius_expand(const ReducedOperator& op, double root, int order,
                                 const Eigen::VectorXcd* seed_sym = nullptr);

/// One series per eigenvector of the root eigenspace.
std::vector<FrobeniusSeries> frobenius_eigenbasis(const ReducedOperator& op, double root,
                                                  int order);

struct Dichotomy {
  int n_decay = 0;
  int n_grow = 0;
};

/// Signature of B1(k): solutions decaying at infinity pair with the positive
/// eigenvalues, growing ones with the negative.  Requires |k| > 0.
Dichotomy dichotomy_at_infinity(const ReducedOperator& op);

struct ShootingOptions {
  int series_order = 10;
  double ode_rtol = 1e-12;
  double ode_atol = 1e-14;
  double y_seed_factor = 0.1;    // series handoff at y = factor / |k|
  double y_large_factor = 20.0;  // decay seeding at y = factor / |k|
};

struct ShootingResult {
  double sigma_min = 0.0;  // smallest singular value of [Y0 | Yinf] at y_match
  int dim_y0 = 0;
  int dim_yinf = 0;
  int nullity = 0;  // numerical nullity of the matching matrix
};

/// Matches the subspace admitted at y -> 0 (Frobenius solutions with root >
/// lambda0 plus the boundary-selected lambda = 0 modes) against the subspace
/// decaying at infinity.  A smallest singular value bounded away from zero
/// certifies that L1(k) has trivial kernel on the weighted space.
ShootingResult kernel_test_shooting(const ReducedOperator& op, double lambda0, double y_match,
                                    const BoundarySubspace& bc = {},
                                    const ShootingOptions& opt = {});

}  // namespace nahm

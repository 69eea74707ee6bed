#pragma once

#include <array>

#include "nahm/rng.hpp"
#include "nahm/su2embed.hpp"
#include "nahm/tensors.hpp"

namespace nahm {

// Index conventions, fixed once for the whole project: four-dimensional
// indices 0,1,2 are tangent to the boundary, index 3 is y, and the
// orientation is eps(0,1,2,3) = +1 (so eps_{abcy} = eps_{abc}).  In five
// dimensions index 0 is time, 1..3 spatial, 4 is y.

/// Pointwise 2-jet of a connection/one-form pair (A, phi) on R^4_+.
/// dA[i][j] = d_j A_i and ddA[i][j][k] = d_j d_k A_i (symmetric in j,k).
struct FieldJet2 {
  AlgebraPtr algebra;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  double y = 1.0;
  std::array<Eigen::VectorXd, 4> A, phi;
  std::array<std::array<Eigen::VectorXd, 4>, 4> dA, dphi;
  std::array<std::array<std::array<Eigen::VectorXd, 4>, 4>, 4> ddA, ddphi;

  static FieldJet2 zero(const AlgebraPtr& alg);
};

/// Pointwise 2-jet of (A, B) on R^5_+; B is stored through its independent
/// components beta_a = B_{0a}, with B_{ab} = eps_abc beta_c.
struct FieldJet5 {
  AlgebraPtr algebra;
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  double y = 1.0;
  std::array<Eigen::VectorXd, 5> A;
  std::array<Eigen::VectorXd, 3> B;
  std::array<std::array<Eigen::VectorXd, 5>, 5> dA;
  std::array<std::array<Eigen::VectorXd, 5>, 3> dB;
  std::array<std::array<std::array<Eigen::VectorXd, 5>, 5>, 5> ddA;
  std::array<std::array<std::array<Eigen::VectorXd, 5>, 5>, 3> ddB;

  static FieldJet5 zero(const AlgebraPtr& alg);
};

/// V^+(t), V^-(t), V^0 of the t-family evaluated on a jet, plus the
/// divergence gauge functional of the connection.
struct ResidualSet {
  std::array<std::array<Eigen::VectorXd, 4>, 4> Vplus, Vminus;  // antisymmetric
  Eigen::VectorXd V0;
  Eigen::VectorXd gauge;

  double max_norm(const LieAlgebra& alg) const;
};

ResidualSet kw_residual(const FieldJet2& j, double t = 1.0);

/// Self-dual / anti-self-dual projection of an antisymmetric tensor of
/// algebra elements.
std::array<std::array<Eigen::VectorXd, 4>, 4> project_selfdual(
    const std::array<std::array<Eigen::VectorXd, 4>, 4>& T, int sign, int dim_g);

/// Exact analytic jets of the Nahm pole solution A = 0, phi = t_a dx^a / y.
class NahmPoleField2 {
 public:
  explicit NahmPoleField2(Su2Triple t) : t_(std::move(t)) {}
  FieldJet2 jet_at(const Eigen::Vector3d& x, double y) const;

 private:
  Su2Triple t_;
};

/// Five-dimensional model solution A = 0, B_{0a} = t_a / y.
class NahmPoleField5 {
 public:
  explicit NahmPoleField5(Su2Triple t) : t_(std::move(t)) {}
  FieldJet5 jet_at(const Eigen::Vector4d& x, double y) const;

 private:
  Su2Triple t_;
};

enum class WeitzenbockVariant { basic, tfamily, primed };

struct WeitzenbockResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 1.0;  // max magnitude among the assembled terms
  double residual() const { return lhs - rhs; }
  double relative() const;
};

/// Pointwise divergence form of the Weitzenbock identities: the square sum
/// of the equations against the positive functional plus explicit divergence
/// currents.  Vanishes identically on any 2-jet; the returned relative
/// residual is pure roundoff.
WeitzenbockResult weitzenbock_residual(const FieldJet2& j, WeitzenbockVariant variant,
                                       double t = 1.0);

/// Pointwise form of the rearrangement identity
/// Tr(sum (D_y phi_a)^2 + 1/2 sum [phi_a,phi_b]^2) = sum Tr W_a^2
///   - 1/3 d_y eps^{abc} Tr phi_a [phi_b, phi_c].
WeitzenbockResult gosum_residual(const FieldJet2& j);

struct Residual5 {
  std::array<Eigen::VectorXd, 3> E1;  // components of F+ - 1/4 BxB - 1/2 D_y B
  std::array<Eigen::VectorXd, 5> E2;  // F_{y mu} + D^nu B_{nu mu}; E2[4] = 0
  double max_norm(const LieAlgebra& alg) const;
};

Residual5 kw5d_residual(const FieldJet5& j);

/// Time-independent five-dimensional jet built from a four-dimensional one
/// by the dictionary beta_a = phi_a, A_0 = -phi_y.  On such jets
/// E1_{0a} = 1/2 (star V)_{ay}, E2_0 = -V^0, E2_a = -V_{ay}.
FieldJet5 lift_time_independent(const FieldJet2& j);

FieldJet2 random_jet2(const AlgebraPtr& alg, SplitMix64& rng, double ymin = 0.5,
                      double ymax = 2.0);
FieldJet5 random_jet5(const AlgebraPtr& alg, SplitMix64& rng, double ymin = 0.5,
                      double ymax = 2.0);

}  // namespace nahm

#include "nahm/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "nahm/tensors.hpp"

namespace nahm {

FrameConnection FrameConnection::flat() { return {}; }

FrameConnection FrameConnection::round_s3(double c) {
  FrameConnection fc;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int cc = 0; cc < 3; ++cc) fc.omega[cc][a][b] = c * eps3(a, b, cc);
  return fc;
}

double FrameConnection::compatibility_residual() const {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, std::abs(omega[c][a][b] + omega[b][a][c]));
  return worst;
}

InducedConnection induced_boundary_connection(const FrameConnection& fc, const Su2Triple& t) {
  if (t.is_zero()) throw std::invalid_argument("induced connection requires a nonzero triple");
  if (fc.compatibility_residual() > 1e-12)
    throw std::invalid_argument("frame connection is not metric compatible");

  // [A0_a, t_b] = omega^c_ab t_c with A0_a = alpha_{ad} t_d reduces, through
  // [t_d, t_b] = eps_dbc t_c, to eps_dbc alpha_{ad} = omega^c_ab; the 3x3
  // system per frame index has the explicit inverse alpha_{ad} =
  // 1/2 eps_dbc omega^c_ab.
  InducedConnection out;
  Eigen::Matrix3d alpha = Eigen::Matrix3d::Zero();
  for (int a = 0; a < 3; ++a)
    for (int dd = 0; dd < 3; ++dd) {
      double v = 0.0;
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) v += 0.5 * eps3(dd, b, c) * fc.omega[c][a][b];
      alpha(a, dd) = v;
    }
  for (int a = 0; a < 3; ++a) {
    AlgebraElement acc = zero_element(t.algebra);
    for (int dd = 0; dd < 3; ++dd) acc = acc + alpha(a, dd) * t.t[dd];
    out.A0[a] = acc;
  }

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      AlgebraElement r = bracket(out.A0[a], t.t[b]);
      for (int c = 0; c < 3; ++c) r = r - fc.omega[c][a][b] * t.t[c];
      out.residual = std::max(out.residual, r.norm());
    }
  {
    AlgebraElement r = zero_element(t.algebra);
    for (int a = 0; a < 3; ++a) {
      r = r + bracket(out.A0[a], t.t[a]);
      for (int c = 0; c < 3; ++c) r = r - fc.omega[c][a][a] * t.t[c];
    }
    out.divergence_residual = r.norm();
  }

  // kernel of the determining system: alpha with eps_dbc alpha_d = 0 for all
  // b, c per frame index; zero for any nonzero triple
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(9, 3);
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c)
      for (int dd = 0; dd < 3; ++dd) sys(b * 3 + c, dd) = eps3(dd, b, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys);
  for (int i = 0; i < 3; ++i)
    if (svd.singularValues()(i) < 1e-12) ++out.kernel_dim;
  return out;
}

ManifoldTopology ManifoldTopology::from_euler(int chi) { return {chi}; }

ManifoldTopology ManifoldTopology::from_alternating_sum(const std::vector<int>& counts) {
  int chi = 0;
  int sign = 1;
  for (int c : counts) {
    chi += sign * c;
    sign = -sign;
  }
  return {chi};
}

long kw_index(const LieAlgebra& algebra, const ManifoldTopology& topo) {
  return -static_cast<long>(algebra.dim()) * topo.euler;
}

int cylinder_index_check(const IndicialSystem& sys, const BoundarySubspace& bc,
                         const Eigen::Vector3d& k) {
  const auto roots = indicial_roots_closed_form(
      spin_decomposition(sys.algebra(), sys.triple()));
  const BoundaryCounts counts = boundary_counts(sys, roots, bc);
  const ReducedOperator op = assemble_symbol(sys, k);
  const Dichotomy dich = dichotomy_at_infinity(op);
  const int index = counts.d0 + dich.n_decay - counts.total;
  if (index != 0) throw std::runtime_error("cylinder index is nonzero");
  return index;
}

}  // namespace nahm

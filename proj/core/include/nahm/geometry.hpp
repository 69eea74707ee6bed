#pragma once

#include "nahm/indicial.hpp"
#include "nahm/modelop.hpp"

namespace nahm {

/// Levi-Civita coefficients omega^c_{ab} of an orthonormal boundary frame,
/// nabla_{e_a} e_b = sum_c omega^c_{ab} e_c; metric compatibility means
/// antisymmetry in (b, c).
struct FrameConnection {
  double omega[3][3][3] = {};  // omega[c][a][b]

  static FrameConnection flat();
  /// Left-invariant frame on the round S^3, nabla_{e_a} e_b = c eps_abc e_c.
  static FrameConnection round_s3(double c = 1.0);

  double compatibility_residual() const;
};

struct InducedConnection {
  std::array<AlgebraElement, 3> A0;  // boundary connection, valued in rho(TW)
  double residual = 0.0;             // max | [A0_a, t_b] - omega^c_ab t_c |
  double divergence_residual = 0.0;  // the trace part, equation ii)
  int kernel_dim = 0;                // of the determining linear system
};

/// Solves d_{A0} phi_rho = 0 for the boundary connection induced by the
/// Nahm pole, pushing the frame coefficients through the embedding.
InducedConnection induced_boundary_connection(const FrameConnection& fc, const Su2Triple& t);

struct ManifoldTopology {
  int euler = 0;

  static ManifoldTopology from_euler(int chi);
  /// chi as the alternating sum of Betti numbers or cell counts.
  static ManifoldTopology from_alternating_sum(const std::vector<int>& counts);
};

/// ind(L) = -dim(g) chi(M), independent of the boundary embedding.
long kw_index(const LieAlgebra& algebra, const ManifoldTopology& topo);

/// d0 + dinf - d for the reduced operator on the cylinder; always 0.
int cylinder_index_check(const IndicialSystem& sys, const BoundarySubspace& bc,
                         const Eigen::Vector3d& k = Eigen::Vector3d(1, 0, 0));

}  // namespace nahm

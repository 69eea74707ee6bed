#pragma once

#include <vector>

#include "nahm/su2embed.hpp"

namespace nahm {

enum class Sector { a_system, phi_system };

std::string sector_name(Sector s);

/// One indicial root with its multiplicity and su(2)_f labels.  Roots of the
/// (a, phi_y) system carry sector a_system; the (phi, a_y) system mirrors it
/// with the opposite sign of lambda.  The eta = 0 modes of the phi system are
/// pure gauge and flagged as such; they stay in all counts.
struct RootRecord {
  double lambda = 0;
  int multiplicity = 0;
  Sector sector = Sector::a_system;
  double j = 0;
  int eta = 0;
  bool pure_gauge = false;
};

/// The linearized operator data at the Nahm pole: the 8d x 8d matrix B0 of
/// the 1/y coefficient, the intertwiner N with N^2 = -1 exchanging the two
/// sectors, and the fixed block layout (a1,a2,a3,phi_y,phi1,phi2,phi3,a_y).
class IndicialSystem {
 public:
  IndicialSystem(AlgebraPtr algebra, Su2Triple triple);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Su2Triple& triple() const { return triple_; }
  int block_dim() const { return d_; }
  int total_dim() const { return 8 * d_; }

  const Eigen::MatrixXd& B0() const { return b0_; }
  const Eigen::MatrixXd& Nmap() const { return nmap_; }

  /// Change of frame making the gram form the identity: x_tilde = U x per
  /// block, with U the upper Cholesky factor of the algebra gram matrix.
  Eigen::MatrixXd to_orthonormal_frame(const Eigen::MatrixXd& op) const;
  Eigen::VectorXd to_orthonormal_frame(const Eigen::VectorXd& x) const;
  Eigen::VectorXd from_orthonormal_frame(const Eigen::VectorXd& x) const;

  /// B0 in the orthonormal frame (symmetric), with its eigendecomposition.
  const Eigen::MatrixXd& B0_sym() const { return b0_sym_; }
  const Eigen::VectorXd& B0_sym_eigenvalues() const { return b0_evals_; }
  const Eigen::MatrixXd& B0_sym_eigenvectors() const { return b0_evecs_; }

  /// 4d x 4d diagonal sector block of B0 (a_system: blocks 0..3).
  Eigen::MatrixXd sector_block(Sector s) const;

  double invariant_residual() const;  // worst violation among the N/B0 identities

 private:
  AlgebraPtr algebra_;
  Su2Triple triple_;
  int d_ = 0;
  Eigen::MatrixXd b0_, nmap_;
  Eigen::MatrixXd b0_sym_, b0_evecs_;
  Eigen::VectorXd b0_evals_;
};

IndicialSystem assemble_indicial_system(const AlgebraPtr& algebra, const Su2Triple& t);

/// Eigenvalues of the two sector matrices of -B0 with (j, eta) labels
/// assigned by projecting eigenspaces onto the Casimir eigenspaces of
/// su(2)_t and su(2)_f.
std::vector<RootRecord> indicial_roots_numeric(const IndicialSystem& sys);

/// The closed-form root table generated from a spin decomposition, with the
/// omission rules for j < 1.
std::vector<RootRecord> indicial_roots_closed_form(const SpinDecomposition& dec);

/// Canonical order: sector, then lambda, then j, then eta.
void sort_roots(std::vector<RootRecord>& roots);

/// True when the two tables agree as labelled multisets (lambda within tol).
bool roots_equal(std::vector<RootRecord> a, std::vector<RootRecord> b, double tol = 1e-8);

/// Subalgebra h of the commutant selecting the lambda = 0 modes admitted by
/// the generalized Nahm pole boundary condition.  h = 0 is the strict case.
struct BoundarySubspace {
  std::vector<AlgebraElement> h_basis;
  int dim() const { return static_cast<int>(h_basis.size()); }
};

BoundarySubspace strict_boundary();
BoundarySubspace commutant_boundary(const CommutantData& c);

/// Validates h: closed under bracket and inside the commutant of the triple.
void check_boundary_subspace(const BoundarySubspace& bc, const Su2Triple& t, double tol = 1e-10);

struct BoundaryCounts {
  int d0 = 0;     // solutions admitted at y -> 0
  int total = 0;  // 8 dim g
};

/// Counts the admitted solutions: strictly positive roots of both sectors
/// plus the lambda = 0 modes selected by h (h parts of a_a, phi_y and h-perp
/// parts of phi_a, a_y).  Asserts d0 = total / 2.
BoundaryCounts boundary_counts(const IndicialSystem& sys, const std::vector<RootRecord>& roots,
                               const BoundarySubspace& bc);

}  // namespace nahm

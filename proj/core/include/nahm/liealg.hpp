#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace nahm {

enum class Family { su, so, sp };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// A compact classical Lie algebra su(N), so(N) or sp(2k), realized as a
/// matrix algebra with a fixed real basis.  The basis matrices are
/// anti-Hermitian; the pairing Tr(XY) in the fundamental representation is
/// negative definite, and gram(a,b) = -Tr(e_a e_b) is the positive form used
/// everywhere downstream.
class LieAlgebra {
 public:
  LieAlgebra(Family family, int n);

  Family family() const { return family_; }
  int n() const { return n_; }
  int dim() const { return dim_; }
  std::string name() const;

  const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }

  /// ad(e_a) in basis coordinates: column b holds the coordinates of [e_a, e_b].
  const Eigen::MatrixXd& ad_basis(int a) const { return ad_[a]; }
  Eigen::MatrixXd ad(const Eigen::VectorXd& coords) const;

  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Upper-triangular U with gram = U^T U; maps coordinates to an orthonormal
  /// frame of the gram form.
  const Eigen::MatrixXd& gram_chol_upper() const { return gram_u_; }

  Eigen::MatrixXcd to_matrix(const Eigen::VectorXd& coords) const;
  /// Expands a matrix known to lie in the algebra; throws if the expansion
  /// residual exceeds tol.
  Eigen::VectorXd from_matrix(const Eigen::MatrixXcd& m, double tol = 1e-9) const;

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  double trace_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Max residual of ad([e_a,e_b]) = [ad e_a, ad e_b] over all basis pairs
  /// (the Jacobi identity in tensor form).
  double jacobi_residual() const;
  /// Max of |Tr([x,y]z) + Tr(y,[x,z])| over seeded random triples.
  double ad_invariance_residual(int samples, std::uint64_t seed) const;
  double gram_min_eigenvalue() const;

 private:
  void build_su();
  void build_so();
  void build_sp();
  void finish_construction();

  Family family_;
  int n_ = 0;
  int dim_ = 0;
  std::vector<Eigen::MatrixXcd> basis_;
  std::vector<Eigen::MatrixXd> ad_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd gram_u_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

AlgebraPtr make_algebra(Family family, int n);

/// An element of a LieAlgebra in basis coordinates.
struct AlgebraElement {
  Eigen::VectorXd coeffs;
  AlgebraPtr owner;

  AlgebraElement() = default;
  AlgebraElement(Eigen::VectorXd c, AlgebraPtr alg);

  Eigen::MatrixXcd matrix() const { return owner->to_matrix(coeffs); }
  double norm() const;
};

AlgebraElement zero_element(const AlgebraPtr& alg);
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
double trace_form(const AlgebraElement& x, const AlgebraElement& y);

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator*(double s, const AlgebraElement& x);

}  // namespace nahm

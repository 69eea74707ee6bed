#include "nahm/liealg.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "nahm/rng.hpp"

namespace nahm {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

namespace {
constexpr cplx kI{0.0, 1.0};

MatrixXcd unit(int n, int r, int c) {
  MatrixXcd m = MatrixXcd::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}
}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::su: return "su";
    case Family::so: return "so";
    case Family::sp: return "sp";
  }
  throw std::logic_error("bad family");
}

Family family_from_name(const std::string& name) {
  if (name == "su") return Family::su;
  if (name == "so") return Family::so;
  if (name == "sp") return Family::sp;
  throw std::invalid_argument("unsupported family: " + name);
}

LieAlgebra::LieAlgebra(Family family, int n) : family_(family), n_(n) {
  if (n < 2) throw std::invalid_argument("matrix size must be at least 2");
  switch (family) {
    case Family::su:
      dim_ = n * n - 1;
      build_su();
      break;
    case Family::so:
      dim_ = n * (n - 1) / 2;
      build_so();
      break;
    case Family::sp:
      if (n % 2 != 0) throw std::invalid_argument("sp(n) requires even n");
      dim_ = (n / 2) * (n + 1);
      build_sp();
      break;
  }
  finish_construction();
}

std::string LieAlgebra::name() const { return family_name(family_) + std::to_string(n_); }

void LieAlgebra::build_su() {
  // Generalized Gell-Mann style: real and imaginary off-diagonal pairs plus
  // traceless imaginary diagonals.
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) {
      basis_.push_back(unit(n_, a, b) - unit(n_, b, a));
      basis_.push_back(kI * (unit(n_, a, b) + unit(n_, b, a)));
    }
  for (int k = 1; k < n_; ++k) {
    MatrixXcd m = MatrixXcd::Zero(n_, n_);
    for (int l = 0; l < k; ++l) m(l, l) = kI;
    m(k, k) = -kI * static_cast<double>(k);
    basis_.push_back(m);
  }
}

void LieAlgebra::build_so() {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      basis_.push_back(unit(n_, a, b) - unit(n_, b, a));
}

void LieAlgebra::build_sp() {
  // Anti-Hermitian X with X^T J + J X = 0, block form [[A, B], [-conj(B), conj(A)]],
  // A anti-Hermitian, B complex symmetric.
  const int k = n_ / 2;
  auto embed = [&](const MatrixXcd& A, const MatrixXcd& B) {
    MatrixXcd m = MatrixXcd::Zero(n_, n_);
    m.topLeftCorner(k, k) = A;
    m.topRightCorner(k, k) = B;
    m.bottomLeftCorner(k, k) = -B.conjugate();
    m.bottomRightCorner(k, k) = A.conjugate();
    return m;
  };
  const MatrixXcd zero = MatrixXcd::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      basis_.push_back(embed(unit(k, a, b) - unit(k, b, a), zero));
      basis_.push_back(embed(kI * (unit(k, a, b) + unit(k, b, a)), zero));
    }
  for (int a = 0; a < k; ++a) basis_.push_back(embed(kI * unit(k, a, a), zero));
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      const MatrixXcd s = unit(k, a, b) + unit(k, b, a);
      basis_.push_back(embed(zero, s));
      basis_.push_back(embed(zero, kI * s));
    }
}

void LieAlgebra::finish_construction() {
  if (static_cast<int>(basis_.size()) != dim_)
    throw std::logic_error("basis size does not match algebra dimension");

  MatrixXcd J;
  if (family_ == Family::sp) {
    const int k = n_ / 2;
    J = MatrixXcd::Zero(n_, n_);
    J.topRightCorner(k, k) = MatrixXcd::Identity(k, k);
    J.bottomLeftCorner(k, k) = -MatrixXcd::Identity(k, k);
  }
  for (const auto& m : basis_) {
    if ((m + m.adjoint()).norm() > 1e-12) throw std::logic_error("basis matrix not anti-Hermitian");
    if (family_ == Family::su && std::abs(m.trace()) > 1e-12)
      throw std::logic_error("su basis matrix not traceless");
    if (family_ == Family::so && (m.imag().norm() > 1e-12 || (m.real() + m.real().transpose()).norm() > 1e-12))
      throw std::logic_error("so basis matrix not real antisymmetric");
    if (family_ == Family::sp && (m.transpose() * J + J * m).norm() > 1e-12)
      throw std::logic_error("sp basis matrix violates the symplectic condition");
  }

  gram_.resize(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = a; b < dim_; ++b) {
      const cplx t = (basis_[a] * basis_[b]).trace();
      if (std::abs(t.imag()) > 1e-12) throw std::logic_error("trace form has an imaginary part");
      gram_(a, b) = gram_(b, a) = -t.real();
    }
  Eigen::LLT<MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success) throw std::logic_error("gram matrix not positive definite");
  gram_u_ = llt.matrixU();

  // Structure constants by expanding each bracket in the basis; the expansion
  // residual certifies closure.
  ad_.assign(dim_, MatrixXd::Zero(dim_, dim_));
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      if (a == b) continue;
      const MatrixXcd br = basis_[a] * basis_[b] - basis_[b] * basis_[a];
      VectorXd rhs(dim_);
      for (int c = 0; c < dim_; ++c) {
        const cplx t = (basis_[c] * br).trace();
        rhs(c) = -t.real();
      }
      VectorXd coords = llt.solve(rhs);
      MatrixXcd rebuilt = MatrixXcd::Zero(n_, n_);
      for (int c = 0; c < dim_; ++c) rebuilt += coords(c) * basis_[c];
      if ((rebuilt - br).norm() > 1e-10 * (1.0 + br.norm()))
        throw std::logic_error("algebra does not close on its basis");
      ad_[a].col(b) = coords;
    }
}

Eigen::MatrixXd LieAlgebra::ad(const VectorXd& coords) const {
  MatrixXd m = MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    if (coords(a) != 0.0) m += coords(a) * ad_[a];
  return m;
}

MatrixXcd LieAlgebra::to_matrix(const VectorXd& coords) const {
  MatrixXcd m = MatrixXcd::Zero(n_, n_);
  for (int a = 0; a < dim_; ++a)
    if (coords(a) != 0.0) m += coords(a) * basis_[a];
  return m;
}

VectorXd LieAlgebra::from_matrix(const MatrixXcd& m, double tol) const {
  VectorXd rhs(dim_);
  for (int c = 0; c < dim_; ++c) rhs(c) = -(basis_[c] * m).trace().real();
  VectorXd coords = gram_.llt().solve(rhs);
  if ((to_matrix(coords) - m).norm() > tol * (1.0 + m.norm()))
    throw std::invalid_argument("matrix does not lie in the algebra");
  return coords;
}

VectorXd LieAlgebra::bracket(const VectorXd& x, const VectorXd& y) const {
  VectorXd out = VectorXd::Zero(dim_);
  for (int a = 0; a < dim_; ++a)
    if (x(a) != 0.0) out += x(a) * (ad_[a] * y);
  return out;
}

double LieAlgebra::trace_form(const VectorXd& x, const VectorXd& y) const {
  return -x.dot(gram_ * y);
}

double LieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b) {
      MatrixXd lhs = MatrixXd::Zero(dim_, dim_);
      for (int c = 0; c < dim_; ++c) {
        const double s = ad_[a](c, b);
        if (s != 0.0) lhs += s * ad_[c];
      }
      const MatrixXd rhs = ad_[a] * ad_[b] - ad_[b] * ad_[a];
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

double LieAlgebra::ad_invariance_residual(int samples, std::uint64_t seed) const {
  SplitMix64 rng(seed);
  auto draw = [&] {
    VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v(i) = rng.uniform(-1.0, 1.0);
    return v;
  };
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const VectorXd x = draw(), y = draw(), z = draw();
    const double r = trace_form(bracket(x, y), z) + trace_form(y, bracket(x, z));
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double LieAlgebra::gram_min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

AlgebraPtr make_algebra(Family family, int n) {
  return std::make_shared<const LieAlgebra>(family, n);
}

AlgebraElement::AlgebraElement(VectorXd c, AlgebraPtr alg) : coeffs(std::move(c)), owner(std::move(alg)) {
  if (!owner) throw std::invalid_argument("element requires an algebra");
  if (coeffs.size() != owner->dim()) throw std::invalid_argument("coefficient size mismatch");
  if (!coeffs.allFinite()) throw std::invalid_argument("non-finite coefficients");
}

double AlgebraElement::norm() const { return std::sqrt(coeffs.dot(owner->gram() * coeffs)); }

AlgebraElement zero_element(const AlgebraPtr& alg) {
  return AlgebraElement(VectorXd::Zero(alg->dim()), alg);
}

namespace {
void check_same(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.owner.get() != y.owner.get()) throw std::invalid_argument("elements from different algebras");
}
}  // namespace

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  check_same(x, y);
  return AlgebraElement(x.owner->bracket(x.coeffs, y.coeffs), x.owner);
}

double trace_form(const AlgebraElement& x, const AlgebraElement& y) {
  check_same(x, y);
  return x.owner->trace_form(x.coeffs, y.coeffs);
}

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  check_same(x, y);
  return AlgebraElement(x.coeffs + y.coeffs, x.owner);
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  check_same(x, y);
  return AlgebraElement(x.coeffs - y.coeffs, x.owner);
}

AlgebraElement operator*(double s, const AlgebraElement& x) {
  return AlgebraElement(s * x.coeffs, x.owner);
}

}  // namespace nahm

#include "nahm/modelop.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nahm/ode.hpp"
#include "nahm/tensors.hpp"

namespace nahm {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

namespace {

constexpr cplx kI{0.0, 1.0};

// 8x8 symbol factor: rows/cols (a1,a2,a3,phi_y,phi1,phi2,phi3,a_y)
Eigen::Matrix<cplx, 8, 8> symbol_factor(const Eigen::Vector3d& k) {
  Eigen::Matrix<cplx, 8, 8> m = Eigen::Matrix<cplx, 8, 8>::Zero();
  for (int a = 0; a < 3; ++a) {
    m(a, 7) = -kI * k(a);
    m(4 + a, 3) = -kI * k(a);
    m(3, 4 + a) = kI * k(a);
    m(7, a) = kI * k(a);
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double e = eps3(a, b, c);
        if (e == 0.0) continue;
        m(a, 4 + c) -= kI * e * k(b);
        m(4 + a, c) -= kI * e * k(b);
      }
  }
  return m;
}

}  // namespace

ReducedOperator::ReducedOperator(const IndicialSystem& sys, const Eigen::Vector3d& k)
    : sys_(&sys), k_(k) {
  if (!k.allFinite()) throw std::invalid_argument("momentum must be finite");
  const int d = sys.block_dim();
  const auto m8 = symbol_factor(k);
  b1_ = MatrixXcd::Zero(8 * d, 8 * d);
  for (int i = 0; i < 8; ++i)
    for (int jb = 0; jb < 8; ++jb)
      if (m8(i, jb) != cplx(0.0))
        b1_.block(i * d, jb * d, d, d) = m8(i, jb) * MatrixXcd::Identity(d, d);
  if (invariant_residual() > 1e-12 * std::max(1.0, k.squaredNorm()))
    throw std::runtime_error("symbol invariants violated (sign or layout bug)");
}

MatrixXcd ReducedOperator::B_sym(double y) const {
  return sys_->B0_sym().cast<cplx>() / y + b1_;
}

double ReducedOperator::invariant_residual() const {
  const int n = 8 * sys_->block_dim();
  const double k2 = k_.squaredNorm();
  double worst = 0.0;
  worst = std::max(worst, (b1_ - b1_.adjoint()).cwiseAbs().maxCoeff());
  worst = std::max(worst, (b1_ * b1_ - k2 * MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  worst = std::max(worst, std::abs(b1_.trace()));
  const MatrixXcd nm = sys_->Nmap().cast<cplx>();
  worst = std::max(worst, (nm * b1_ + b1_ * nm).cwiseAbs().maxCoeff());
  return worst;
}

ReducedOperator assemble_symbol(const IndicialSystem& sys, const Eigen::Vector3d& k) {
  return ReducedOperator(sys, k);
}

bool FrobeniusSeries::has_log_terms() const {
  for (const auto& level : coeffs)
    for (const auto& [p, c] : level)
      if (p > 0) return true;
  return false;
}

VectorXcd FrobeniusSeries::evaluate_sym(double y) const {
  if (y <= 0.0) throw std::invalid_argument("series defined for y > 0");
  VectorXcd out = VectorXcd::Zero(coeffs.front().begin()->second.size());
  const double ly = std::log(y);
  for (size_t m = 0; m < coeffs.size(); ++m) {
    const double ym = std::pow(y, root + static_cast<double>(m));
    for (const auto& [p, c] : coeffs[m]) {
      double lp = 1.0;
      for (int q = 1; q <= p; ++q) lp *= ly / q;
      out += (ym * lp) * c;
    }
  }
  return out;
}

VectorXcd FrobeniusSeries::derivative_sym(double y) const {
  VectorXcd out = VectorXcd::Zero(coeffs.front().begin()->second.size());
  const double ly = std::log(y);
  for (size_t m = 0; m < coeffs.size(); ++m) {
    const double lam = root + static_cast<double>(m);
    const double ym = std::pow(y, lam - 1.0);
    for (const auto& [p, c] : coeffs[m]) {
      double lp = 1.0;
      for (int q = 1; q <= p; ++q) lp *= ly / q;
      out += (lam * ym * lp) * c;
      if (p > 0) {
        double lpm = 1.0;
        for (int q = 1; q <= p - 1; ++q) lpm *= ly / q;
        out += (ym * lpm) * c;
      }
    }
  }
  return out;
}

double FrobeniusSeries::residual_norm(const ReducedOperator& op, double y) const {
  const VectorXcd r = derivative_sym(y) + op.B_sym(y) * evaluate_sym(y);
  return r.norm();
}

namespace {

// Solves the cascade (B0 + lam + m) c_{m,p} + c_{m,p+1} = -B1 c_{m-1,p} in
// the eigenbasis of B0_sym; resonant steps force new log levels through the
// kernel components.
FrobeniusSeries expand_from_seed(const ReducedOperator& op, double root, int order,
                                 const VectorXcd& seed_sym) {
  const IndicialSystem& sys = op.system();
  const MatrixXd& q = sys.B0_sym_eigenvectors();
  const VectorXd& ev = sys.B0_sym_eigenvalues();
  const int n = static_cast<int>(ev.size());
  const MatrixXcd qc = q.cast<cplx>();

  FrobeniusSeries s;
  s.root = root;
  s.order = order;
  s.coeffs.resize(order + 1);
  s.coeffs[0][0] = seed_sym;

  for (int m = 1; m <= order; ++m) {
    const double shift = root + m;
    Eigen::ArrayXd diag = ev.array() + shift;
    const bool singular = (diag.abs() < 1e-9).any();
    const auto& prev = s.coeffs[m - 1];
    int pmax = 0;
    for (const auto& [p, c] : prev) pmax = std::max(pmax, p);

    std::map<int, VectorXcd> cur;  // eigenbasis coordinates
    auto rhs_eig = [&](int p) -> VectorXcd {
      auto it = prev.find(p);
      if (it == prev.end()) return VectorXcd::Zero(n);
      return qc.adjoint() * (-(op.B1() * it->second));
    };
    for (int p = pmax + 1; p >= 0; --p) {
      const VectorXcd rp = rhs_eig(p);
      VectorXcd c = VectorXcd::Zero(n);
      const VectorXcd rpm1 = (p >= 1) ? rhs_eig(p - 1) : VectorXcd::Zero(n);
      const VectorXcd cnext = cur.count(p + 1) ? cur[p + 1] : VectorXcd::Zero(n);
      for (int i = 0; i < n; ++i) {
        if (std::abs(diag(i)) < 1e-9) {
          if (!singular) throw std::logic_error("inconsistent resonance detection");
          c(i) = (p >= 1) ? rpm1(i) : cplx(0.0);  // kernel component forced one level up
        } else {
          c(i) = (rp(i) - cnext(i)) / diag(i);
        }
      }
      if (c.norm() > 1e-300) cur[p] = c;
    }
    // consistency: kernel part of equation p must be balanced by c_{m,p+1}
    for (int p = 0; p <= pmax + 1; ++p) {
      const VectorXcd rp = rhs_eig(p);
      const VectorXcd cnext = cur.count(p + 1) ? cur[p + 1] : VectorXcd::Zero(n);
      for (int i = 0; i < n; ++i)
        if (std::abs(diag(i)) < 1e-9 && std::abs(rp(i) - cnext(i)) > 1e-7 * (1.0 + rp.norm()))
          throw std::runtime_error("resonant step without log augmentation");
    }
    auto& out = s.coeffs[m];
    for (auto& [p, c] : cur) {
      VectorXcd v = qc * c;
      if (v.norm() > 1e-14 * (1.0 + seed_sym.norm())) out[p] = v;
    }
    if (out.empty()) out[0] = VectorXcd::Zero(n);
  }
  return s;
}

MatrixXcd root_eigenbasis_sym(const IndicialSystem& sys, double root) {
  const VectorXd& ev = sys.B0_sym_eigenvalues();
  // indicial roots are eigenvalues of -B0
  std::vector<int> idx;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(-ev(i) - root) < 1e-8) idx.push_back(i);
  if (idx.empty()) throw std::invalid_argument("not an indicial root: " + std::to_string(root));
  MatrixXcd out(ev.size(), idx.size());
  for (size_t c = 0; c < idx.size(); ++c)
    out.col(c) = sys.B0_sym_eigenvectors().col(idx[c]).cast<cplx>();
  return out;
}

}  // namespace

FrobeniusSeries frobenius_expand(const ReducedOperator& op, double root, int order,
                                 const VectorXcd* seed_sym) {
  if (order < 0 || order > 12) throw std::invalid_argument("series order must be in [0, 12]");
  VectorXcd seed;
  if (seed_sym) {
    seed = *seed_sym;
  } else {
    seed = root_eigenbasis_sym(op.system(), root).col(0);
  }
  // seed must lie in the root eigenspace of -B0
  const VectorXcd check =
      op.system().B0_sym().cast<cplx>() * seed + root * seed;
  if (check.norm() > 1e-8 * std::max(1.0, seed.norm()))
    throw std::invalid_argument("seed is not in the eigenspace of the root");
  return expand_from_seed(op, root, order, seed);
}

std::vector<FrobeniusSeries> frobenius_eigenbasis(const ReducedOperator& op, double root,
                                                  int order) {
  const MatrixXcd basis = root_eigenbasis_sym(op.system(), root);
  std::vector<FrobeniusSeries> out;
  for (int c = 0; c < basis.cols(); ++c) {
    const VectorXcd seed = basis.col(c);
    out.push_back(expand_from_seed(op, root, order, seed));
  }
  return out;
}

Dichotomy dichotomy_at_infinity(const ReducedOperator& op) {
  if (op.kmag() <= 0.0) throw std::invalid_argument("dichotomy requires |k| > 0");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(op.B1(), Eigen::EigenvaluesOnly);
  const VectorXd ev = es.eigenvalues();
  Dichotomy out;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < 1e-9)
      throw std::runtime_error("symbol eigenvalue at zero with |k| > 0 (ellipticity violated)");
    (ev(i) > 0 ? out.n_decay : out.n_grow)++;
  }
  const int expect = 4 * op.system().block_dim();
  if (out.n_decay != expect || out.n_grow != expect)
    throw std::runtime_error("dichotomy counts are not half/half");
  return out;
}

namespace {

MatrixXcd orthonormalize(const MatrixXcd& m) {
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(m.rows(), m.cols());
  return q;
}

MatrixXcd integrate_bundle(const ReducedOperator& op, MatrixXcd cols, double y0, double y1,
                           const ShootingOptions& opt) {
  const auto rhs = [&](double y, const MatrixXcd& f) -> MatrixXcd { return -(op.B_sym(y) * f); };
  OdeOptions oo;
  oo.rtol = opt.ode_rtol;
  oo.atol = opt.ode_atol;
  // renormalize the frame in stages so the bundle never degenerates
  const int stages = 16;
  for (int s = 0; s < stages; ++s) {
    const double a = y0 + (y1 - y0) * s / stages;
    const double b = y0 + (y1 - y0) * (s + 1) / stages;
    cols = integrate_dopri5<MatrixXcd>(rhs, cols, a, b, oo);
    cols = orthonormalize(cols);
  }
  return cols;
}

}  // namespace

ShootingResult kernel_test_shooting(const ReducedOperator& op, double lambda0, double y_match,
                                    const BoundarySubspace& bc, const ShootingOptions& opt) {
  const double kn = op.kmag();
  if (kn <= 0.0) throw std::invalid_argument("shooting requires |k| > 0");
  const IndicialSystem& sys = op.system();
  const int n = 8 * sys.block_dim();
  const int d = sys.block_dim();

  // distinct indicial roots
  std::set<double> roots;
  for (int i = 0; i < n; ++i) {
    const double r = -sys.B0_sym_eigenvalues()(i);
    bool found = false;
    for (double x : roots)
      if (std::abs(x - r) < 1e-8) found = true;
    if (!found) roots.insert(r);
  }
  for (double r : roots)
    if (std::abs(r - lambda0) < 1e-9)
      throw std::invalid_argument("weight lambda0 must be non-indicial");

  const double y_seed = opt.y_seed_factor / kn;
  const double y_large = opt.y_large_factor / kn;
  if (!(y_seed < y_match && y_match < y_large))
    throw std::invalid_argument("y_match must lie between the seed and decay stations");

  // Y0: series solutions of every root above the weight
  std::vector<VectorXcd> cols;
  for (double r : roots) {
    if (!(r > lambda0) || std::abs(r) < 1e-9) continue;
    for (const auto& s : frobenius_eigenbasis(op, r, opt.series_order))
      cols.push_back(s.evaluate_sym(y_seed));
  }
  // lambda = 0 modes admitted by the boundary condition
  const bool has_zero_root =
      std::any_of(roots.begin(), roots.end(), [](double r) { return std::abs(r) < 1e-9; });
  if (has_zero_root && 0.0 > lambda0) {
    const AlgebraPtr& alg = sys.algebra();
    const CommutantData cdata = commutant(alg, sys.triple());
    check_boundary_subspace(bc, sys.triple());
    const int hd = bc.dim();
    // gram-orthonormal basis of c split into h and its orthocomplement
    MatrixXd cbasis(d, cdata.dim);
    for (int i = 0; i < cdata.dim; ++i) cbasis.col(i) = cdata.basis[i].coeffs;
    MatrixXd hpart(d, hd);
    for (int i = 0; i < hd; ++i) hpart.col(i) = bc.h_basis[i].coeffs;
    // orthonormal basis of the commutant in the orthonormal frame, h first
    const MatrixXd& u = sys.algebra()->gram_chol_upper();
    MatrixXd call(d, cdata.dim);
    int have = 0;
    auto add = [&](VectorXd v) {
      for (int i = 0; i < have; ++i) v -= call.col(i).dot(v) * call.col(i);
      if (v.norm() > 1e-8) call.col(have++) = v / v.norm();
    };
    for (int i = 0; i < hd; ++i) add(u * hpart.col(i));
    if (have != hd) throw std::invalid_argument("h basis is degenerate");
    for (int i = 0; i < cdata.dim; ++i) add(u * cbasis.col(i));
    if (have != cdata.dim) throw std::runtime_error("commutant completion failed");
    auto block_vector = [&](int blk, const VectorXd& v) {
      VectorXcd w = VectorXcd::Zero(n);
      w.segment(blk * d, d) = v.cast<cplx>();
      return w;
    };
    for (int i = 0; i < cdata.dim; ++i) {
      const VectorXd v = call.col(i);
      const bool in_h = (i < hd);
      // h parts of (a_a, phi_y); h-perp parts of (phi_a, a_y)
      const std::array<int, 4> blocks =
          in_h ? std::array<int, 4>{0, 1, 2, 3} : std::array<int, 4>{4, 5, 6, 7};
      for (int blk : blocks) {
        const auto s = expand_from_seed(op, 0.0, opt.series_order, block_vector(blk, v));
        cols.push_back(s.evaluate_sym(y_seed));
      }
    }
  }

  MatrixXcd y0mat(n, cols.size());
  for (size_t c = 0; c < cols.size(); ++c) y0mat.col(c) = cols[c];
  y0mat = orthonormalize(y0mat);
  MatrixXcd y0m = integrate_bundle(op, y0mat, y_seed, y_match, opt);

  // Yinf: positive eigenspace of B1 seeded at y_large, integrated backward
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(op.B1());
  std::vector<int> pos;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0) pos.push_back(i);
  MatrixXcd yinf(n, pos.size());
  for (size_t c = 0; c < pos.size(); ++c) yinf.col(c) = es.eigenvectors().col(pos[c]);
  MatrixXcd yinfm = integrate_bundle(op, yinf, y_large, y_match, opt);

  MatrixXcd match(n, y0m.cols() + yinfm.cols());
  match.leftCols(y0m.cols()) = y0m;
  match.rightCols(yinfm.cols()) = yinfm;
  Eigen::JacobiSVD<MatrixXcd> svd(match);
  const VectorXd sv = svd.singularValues();

  ShootingResult out;
  out.dim_y0 = static_cast<int>(y0m.cols());
  out.dim_yinf = static_cast<int>(yinfm.cols());
  out.sigma_min = sv(sv.size() - 1);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  out.nullity = static_cast<int>(match.cols()) - rank;
  return out;
}

}  // namespace nahm

#include "nahm/indicial.hpp"

#include "nahm/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nahm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr int kBlkA = 0;     // a_1, a_2, a_3
constexpr int kBlkPhiY = 3;  // phi_y
constexpr int kBlkPhi = 4;   // phi_1, phi_2, phi_3
constexpr int kBlkAY = 7;    // a_y

int half_int_from_casimir(double mu, double tol, const char* what) {
  const double jr = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * mu)));
  const int two_j = static_cast<int>(std::lround(2.0 * jr));
  const double jj = 0.5 * two_j;
  if (two_j < 0 || std::abs(mu - jj * (jj + 1.0)) > tol)
    throw std::runtime_error(std::string(what) + " Casimir eigenvalue " + std::to_string(mu) +
                             " not of the form j(j+1)");
  return two_j;
}

}  // namespace

std::string sector_name(Sector s) {
  return s == Sector::a_system ? "a-system" : "phi-system";
}

IndicialSystem::IndicialSystem(AlgebraPtr algebra, Su2Triple triple)
    : algebra_(std::move(algebra)), triple_(std::move(triple)), d_(algebra_->dim()) {
  if (triple_.commutation_residual() > 1e-10)
    throw std::invalid_argument("triple does not satisfy the su(2) relations");
  const int d = d_;
  std::array<MatrixXd, 3> adT;
  for (int a = 0; a < 3; ++a) adT[a] = algebra_->ad(triple_.t[a].coeffs);

  b0_ = MatrixXd::Zero(8 * d, 8 * d);
  auto blk = [&](int r, int c) { return b0_.block(r * d, c * d, d, d); };
  // L1(0) = d/dy + B0/y acting on (a, phi_y, phi, a_y); rows are the 1/y
  // coefficients of the linearized equations in the gauge (2.19)-form.
  for (int a = 0; a < 3; ++a) {
    blk(kBlkA + a, kBlkPhiY) += adT[a];
    blk(kBlkPhi + a, kBlkAY) -= adT[a];
    blk(kBlkPhiY, kBlkA + a) -= adT[a];
    blk(kBlkAY, kBlkPhi + a) += adT[a];
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double e = eps3(a, b, c);
        if (e == 0.0) continue;
        blk(kBlkA + a, kBlkA + c) -= e * adT[b];
        blk(kBlkPhi + a, kBlkPhi + c) += e * adT[b];
      }
  }

  nmap_ = MatrixXd::Zero(8 * d, 8 * d);
  nmap_.topRightCorner(4 * d, 4 * d) = -MatrixXd::Identity(4 * d, 4 * d);
  nmap_.bottomLeftCorner(4 * d, 4 * d) = MatrixXd::Identity(4 * d, 4 * d);

  b0_sym_ = to_orthonormal_frame(b0_);
  if ((b0_sym_ - b0_sym_.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("B0 is not symmetric for the gram form (sign error in assembly)");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (b0_sym_ + b0_sym_.transpose()));
  b0_evals_ = es.eigenvalues();
  b0_evecs_ = es.eigenvectors();

  if (invariant_residual() > 1e-10)
    throw std::runtime_error("indicial system invariants violated");
}

MatrixXd IndicialSystem::to_orthonormal_frame(const MatrixXd& op) const {
  const MatrixXd& u = algebra_->gram_chol_upper();
  const int blocks = static_cast<int>(op.rows()) / d_;
  MatrixXd out = op;
  for (int i = 0; i < blocks; ++i)
    for (int jb = 0; jb < blocks; ++jb) {
      MatrixXd blk = u * op.block(i * d_, jb * d_, d_, d_);
      out.block(i * d_, jb * d_, d_, d_) =
          u.triangularView<Eigen::Upper>().solve(blk.transpose()).transpose();
    }
  return out;
}

VectorXd IndicialSystem::to_orthonormal_frame(const VectorXd& x) const {
  const MatrixXd& u = algebra_->gram_chol_upper();
  VectorXd out(x.size());
  for (int i = 0; i * d_ < x.size(); ++i) out.segment(i * d_, d_) = u * x.segment(i * d_, d_);
  return out;
}

VectorXd IndicialSystem::from_orthonormal_frame(const VectorXd& x) const {
  const MatrixXd& u = algebra_->gram_chol_upper();
  VectorXd out(x.size());
  for (int i = 0; i * d_ < x.size(); ++i)
    out.segment(i * d_, d_) = u.triangularView<Eigen::Upper>().solve(x.segment(i * d_, d_));
  return out;
}

MatrixXd IndicialSystem::sector_block(Sector s) const {
  const int off = (s == Sector::a_system) ? 0 : 4 * d_;
  return b0_.block(off, off, 4 * d_, 4 * d_);
}

double IndicialSystem::invariant_residual() const {
  const int n = 8 * d_;
  double worst = 0.0;
  worst = std::max(worst, (nmap_ * nmap_ + MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  // gram-antisymmetry of N: (G N)^T = -G N with G = I_8 (x) gram
  MatrixXd gn = nmap_;
  const MatrixXd& g = algebra_->gram();
  for (int i = 0; i < 8; ++i)
    for (int jb = 0; jb < 8; ++jb)
      gn.block(i * d_, jb * d_, d_, d_) = g * nmap_.block(i * d_, jb * d_, d_, d_);
  worst = std::max(worst, (gn + gn.transpose()).cwiseAbs().maxCoeff());
  worst = std::max(worst, (nmap_ * b0_ + b0_ * nmap_).cwiseAbs().maxCoeff());
  worst = std::max(worst, std::abs(b0_.trace()));
  return worst;
}

IndicialSystem assemble_indicial_system(const AlgebraPtr& algebra, const Su2Triple& t) {
  return IndicialSystem(algebra, t);
}

std::vector<RootRecord> indicial_roots_numeric(const IndicialSystem& sys) {
  const int d = sys.block_dim();
  const AlgebraPtr& alg = sys.algebra();

  std::array<MatrixXd, 3> adT;
  for (int a = 0; a < 3; ++a) adT[a] = alg->ad(sys.triple().t[a].coeffs);
  MatrixXd casT = MatrixXd::Zero(d, d);
  for (int a = 0; a < 3; ++a) casT -= adT[a] * adT[a];

  // Sector operators on (x_1,x_2,x_3,w): Delta_T acts blockwise; the f_b
  // generators rotate the vector index on the x blocks and act by ad(t_b)
  // everywhere.
  MatrixXd deltaT = MatrixXd::Zero(4 * d, 4 * d);
  for (int i = 0; i < 4; ++i) deltaT.block(i * d, i * d, d, d) = casT;
  MatrixXd deltaF = MatrixXd::Zero(4 * d, 4 * d);
  for (int b = 0; b < 3; ++b) {
    MatrixXd fb = MatrixXd::Zero(4 * d, 4 * d);
    for (int i = 0; i < 4; ++i) fb.block(i * d, i * d, d, d) = adT[b];
    for (int c = 0; c < 3; ++c)
      for (int cc = 0; cc < 3; ++cc) {
        const double s = -eps3(b, c, cc);  // (s_b)_{c,cc}
        if (s != 0.0) fb.block(c * d, cc * d, d, d) += s * MatrixXd::Identity(d, d);
      }
    deltaF -= fb * fb;
  }

  std::vector<RootRecord> out;
  for (Sector sec : {Sector::a_system, Sector::phi_system}) {
    const MatrixXd raw = -sys.sector_block(sec);

    // the stated error condition: eigenvalues must be real
    Eigen::EigenSolver<MatrixXd> ges(raw);
    if (ges.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-9)
      throw std::runtime_error("complex indicial root beyond tolerance");

    const MatrixXd sym = sys.to_orthonormal_frame(raw);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sym + sym.transpose()));
    const VectorXd ev = es.eigenvalues();
    const MatrixXd evec = es.eigenvectors();
    const MatrixXd dT = sys.to_orthonormal_frame(deltaT);
    const MatrixXd dF = sys.to_orthonormal_frame(deltaF);

    int i = 0;
    while (i < 4 * d) {
      int k = i;
      while (k < 4 * d && ev(k) - ev(i) < 1e-8) ++k;
      const double lambda = ev.segment(i, k - i).mean();
      const MatrixXd v = evec.middleCols(i, k - i);

      // split the lambda-eigenspace by Delta_T, then by Delta_F
      const MatrixXd a1 = v.transpose() * dT * v;
      Eigen::SelfAdjointEigenSolver<MatrixXd> esT(0.5 * (a1 + a1.transpose()));
      const VectorXd evT = esT.eigenvalues();
      int p = 0;
      while (p < evT.size()) {
        int q = p;
        while (q < evT.size() && evT(q) - evT(p) < 1e-4) ++q;
        const int two_j = half_int_from_casimir(evT.segment(p, q - p).mean(), 1e-6, "Delta_T");
        const MatrixXd w = v * esT.eigenvectors().middleCols(p, q - p);
        const MatrixXd a2 = w.transpose() * dF * w;
        Eigen::SelfAdjointEigenSolver<MatrixXd> esF(0.5 * (a2 + a2.transpose()));
        const VectorXd evF = esF.eigenvalues();
        int r = 0;
        while (r < evF.size()) {
          int s = r;
          while (s < evF.size() && evF(s) - evF(r) < 1e-4) ++s;
          const int two_f = half_int_from_casimir(evF.segment(r, s - r).mean(), 1e-6, "Delta_F");
          RootRecord rec;
          rec.lambda = lambda;
          rec.multiplicity = s - r;
          rec.sector = sec;
          rec.j = 0.5 * two_j;
          rec.eta = (two_f - two_j) / 2;
          rec.pure_gauge = (sec == Sector::phi_system && rec.eta == 0 && two_j > 0);
          out.push_back(rec);
          r = s;
        }
        p = q;
      }
      i = k;
    }
  }
  sort_roots(out);
  return out;
}

std::vector<RootRecord> indicial_roots_closed_form(const SpinDecomposition& dec) {
  std::vector<RootRecord> out;
  auto push = [&](Sector sec, double lambda, int mult, double j, int eta, bool gauge) {
    if (mult <= 0) return;
    out.push_back({lambda, mult, sec, j, eta, gauge});
  };
  for (const auto& e : dec.entries) {
    const double j = e.j;
    const int m = e.mult;
    const int two_j = static_cast<int>(std::lround(2 * j));
    // a-system: eta=1 -> -j; eta=0 -> {j+1, -j}; eta=-1 -> j+1, with
    // dimension 2(j+eta)+1 each; for j = 1/2 the eta=-1 mode is dropped and
    // for j = 0 both lambda = j+1 modes are dropped.  phi-system: negate
    // lambda; its eta=0 modes are pure gauge.
    const double mj = (two_j == 0) ? 0.0 : -j;  // avoid -0
    push(Sector::a_system, mj, m * (two_j + 3), j, 1, false);
    push(Sector::phi_system, j, m * (two_j + 3), j, 1, false);
    if (two_j >= 1) {
      push(Sector::a_system, j + 1, m * (two_j + 1), j, 0, false);
      push(Sector::phi_system, -(j + 1), m * (two_j + 1), j, 0, true);
    }
    push(Sector::a_system, mj, m * (two_j + 1), j, 0, false);
    push(Sector::phi_system, j, m * (two_j + 1), j, 0, two_j >= 1);
    if (two_j >= 2) {
      push(Sector::a_system, j + 1, m * (two_j - 1), j, -1, false);
      push(Sector::phi_system, -(j + 1), m * (two_j - 1), j, -1, false);
    }
  }
  sort_roots(out);
  return out;
}

void sort_roots(std::vector<RootRecord>& roots) {
  std::sort(roots.begin(), roots.end(), [](const RootRecord& x, const RootRecord& y) {
    if (x.sector != y.sector) return x.sector < y.sector;
    if (std::abs(x.lambda - y.lambda) > 1e-12) return x.lambda < y.lambda;
    if (std::abs(x.j - y.j) > 1e-12) return x.j < y.j;
    return x.eta < y.eta;
  });
}

bool roots_equal(std::vector<RootRecord> a, std::vector<RootRecord> b, double tol) {
  sort_roots(a);
  sort_roots(b);
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].sector != b[i].sector) return false;
    if (std::abs(a[i].lambda - b[i].lambda) > tol) return false;
    if (a[i].multiplicity != b[i].multiplicity) return false;
    if (std::abs(a[i].j - b[i].j) > 1e-9) return false;
    if (a[i].eta != b[i].eta) return false;
  }
  return true;
}

BoundarySubspace strict_boundary() { return {}; }

BoundarySubspace commutant_boundary(const CommutantData& c) {
  BoundarySubspace bc;
  bc.h_basis = c.basis;
  return bc;
}

void check_boundary_subspace(const BoundarySubspace& bc, const Su2Triple& t, double tol) {
  if (bc.h_basis.empty()) return;
  const AlgebraPtr alg = bc.h_basis.front().owner;
  const int hd = bc.dim();
  Eigen::MatrixXd h(alg->dim(), hd);
  for (int i = 0; i < hd; ++i) h.col(i) = bc.h_basis[i].coeffs;
  for (int i = 0; i < hd; ++i)
    for (int a = 0; a < 3; ++a)
      if (alg->bracket(h.col(i), t.t[a].coeffs).norm() > tol * std::max(1.0, t.t[a].coeffs.norm()))
        throw std::invalid_argument("h is not inside the commutant");
  // closure under bracket: project [h_i, h_j] back onto span(h)
  const Eigen::MatrixXd gh = alg->gram() * h;
  const Eigen::MatrixXd hth = h.transpose() * gh;
  const auto solver = hth.ldlt();
  for (int i = 0; i < hd; ++i)
    for (int jj = 0; jj < hd; ++jj) {
      const Eigen::VectorXd br = alg->bracket(h.col(i), h.col(jj));
      const Eigen::VectorXd proj = h * solver.solve(gh.transpose() * br);
      if ((br - proj).norm() > tol * (1.0 + br.norm()))
        throw std::invalid_argument("h is not closed under the bracket");
    }
}

BoundaryCounts boundary_counts(const IndicialSystem& sys, const std::vector<RootRecord>& roots,
                               const BoundarySubspace& bc) {
  check_boundary_subspace(bc, sys.triple());
  BoundaryCounts out;
  out.total = sys.total_dim();
  int positive = 0, zero_a = 0, zero_phi = 0;
  for (const auto& r : roots) {
    if (r.lambda > 1e-9) positive += r.multiplicity;
    else if (std::abs(r.lambda) <= 1e-9)
      (r.sector == Sector::a_system ? zero_a : zero_phi) += r.multiplicity;
  }
  if (zero_a != zero_phi || zero_a % 4 != 0)
    throw std::runtime_error("count mismatch: inconsistent lambda = 0 blocks");
  const int m0 = zero_a / 4;  // dim of the commutant
  const int hdim = bc.dim();
  if (hdim > m0) throw std::invalid_argument("h larger than the commutant");
  // h parts of (a_a, phi_y) admitted, h-perp parts of (phi_a, a_y) admitted
  out.d0 = positive + 4 * hdim + 4 * (m0 - hdim);
  if (2 * out.d0 != out.total)
    throw std::runtime_error("count mismatch: d0 is not half the total");
  return out;
}

}  // namespace nahm

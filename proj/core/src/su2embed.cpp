#include "nahm/su2embed.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nahm {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

namespace {
constexpr cplx kI{0.0, 1.0};
}

Partition::Partition(Family f, int n_, std::vector<int> parts_)
    : family(f), n(n_), parts(std::move(parts_)) {
  std::sort(parts.begin(), parts.end(), std::greater<int>());
  if (parts.empty()) throw std::invalid_argument("empty partition");
  for (int p : parts)
    if (p < 1) throw std::invalid_argument("partition parts must be positive");
  if (std::accumulate(parts.begin(), parts.end(), 0) != n)
    throw std::invalid_argument("partition does not sum to " + std::to_string(n));
  std::map<int, int> mult;
  for (int p : parts) mult[p]++;
  if (family == Family::so)
    for (auto [p, m] : mult)
      if (p % 2 == 0 && m % 2 != 0)
        throw std::invalid_argument("so(N): even part " + std::to_string(p) +
                                    " must have even multiplicity");
  if (family == Family::sp)
    for (auto [p, m] : mult)
      if (p % 2 == 1 && m % 2 != 0)
        throw std::invalid_argument("sp(2k): odd part " + std::to_string(p) +
                                    " must have even multiplicity");
}

std::string Partition::str() const {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += "+";
    s += std::to_string(parts[i]);
  }
  return s;
}

bool Su2Triple::is_zero(double tol) const {
  return t[0].norm() < tol && t[1].norm() < tol && t[2].norm() < tol;
}

double Su2Triple::commutation_residual() const {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    worst = std::max(worst, (bracket(t[a], t[b]) - t[c]).norm());
  }
  return worst;
}

std::array<MatrixXcd, 3> spin_triple_matrices(int two_j) {
  if (two_j < 0) throw std::invalid_argument("negative spin");
  const int n = two_j + 1;
  const double j = two_j / 2.0;
  MatrixXcd jp = MatrixXcd::Zero(n, n), j3 = MatrixXcd::Zero(n, n);
  // basis ordered m = j, j-1, ..., -j
  for (int r = 0; r < n; ++r) j3(r, r) = j - r;
  for (int r = 0; r < n - 1; ++r) {
    const double m = j - r - 1;  // raise from m to m+1
    jp(r, r + 1) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const MatrixXcd jm = jp.adjoint();
  const MatrixXcd j1 = 0.5 * (jp + jm);
  const MatrixXcd j2 = -0.5 * kI * (jp - jm);
  return {-kI * j1, -kI * j2, -kI * j3};
}

namespace {

// Intertwiner C with rho_a C = C conj(rho_a); unique up to phase on an
// irreducible block, normalized unitary.  C * conj(C) = sigma * Id with
// sigma = +1 for integer spin and -1 for half-integer spin.
MatrixXcd conjugation_intertwiner(const std::array<MatrixXcd, 3>& rho, double* sigma) {
  const int n = static_cast<int>(rho[0].rows());
  const int nn = n * n;
  // vec(rho_a C - C conj(rho_a)) = 0, three stacked Sylvester blocks
  MatrixXcd sys = MatrixXcd::Zero(3 * nn, nn);
  for (int a = 0; a < 3; ++a) {
    const MatrixXcd rc = rho[a].conjugate();
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) {
        const int eq = a * nn + col * n + row;
        for (int k = 0; k < n; ++k) {
          sys(eq, col * n + k) += rho[a](row, k);
          sys(eq, k * n + row) -= rc(k, col);
        }
      }
  }
  Eigen::JacobiSVD<MatrixXcd> svd(sys, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(nn - 1) > 1e-8 * sv(0))
    throw std::runtime_error("no conjugation intertwiner found");
  if (nn >= 2 && sv(nn - 2) < 1e-8 * std::max(1.0, sv(0)))
    throw std::runtime_error("conjugation intertwiner not unique (reducible block?)");
  VectorXcd v = svd.matrixV().col(nn - 1);
  MatrixXcd C(n, n);
  for (int col = 0; col < n; ++col) C.col(col) = v.segment(col * n, n);
  // scale to unitary: C^dag C = c Id
  const cplx c = (C.adjoint() * C).trace() / static_cast<double>(n);
  C /= std::sqrt(c.real());
  const MatrixXcd ccbar = C * C.conjugate();
  const cplx s = ccbar.trace() / static_cast<double>(n);
  if ((ccbar - s * MatrixXcd::Identity(n, n)).norm() > 1e-9)
    throw std::runtime_error("C * conj(C) is not scalar");
  if (std::abs(s.imag()) > 1e-9 || std::abs(std::abs(s.real()) - 1.0) > 1e-9)
    throw std::runtime_error("C * conj(C) is not +-1");
  *sigma = s.real();
  return C;
}

// Orthonormal basis of the fixed subspace of the antiunitary v -> M conj(v)
// (requires M conj(M) = +1).  The returned unitary R has J-fixed columns, so
// R^dag rho R is real for any rho commuting with the antiunitary.
MatrixXcd real_form_basis(const MatrixXcd& M) {
  const int n = static_cast<int>(M.rows());
  std::vector<VectorXcd> basis;
  auto add_candidate = [&](VectorXcd v) {
    for (const auto& b : basis) v -= (b.dot(v)) * b;
    if (v.norm() > 1e-6) basis.push_back(v / v.norm());
  };
  for (int k = 0; k < n && static_cast<int>(basis.size()) < n; ++k) {
    VectorXcd e = VectorXcd::Zero(n);
    e(k) = 1.0;
    add_candidate(e + M * e.conjugate());
    add_candidate(kI * (e - M * e.conjugate()));
  }
  if (static_cast<int>(basis.size()) != n)
    throw std::runtime_error("real form basis incomplete");
  MatrixXcd R(n, n);
  for (int k = 0; k < n; ++k) R.col(k) = basis[k];
  return R;
}

// Basis (u_1..u_k, -J u_1..-J u_k) adapted to the antiunitary v -> M conj(v)
// with M conj(M) = -1; in the returned frame the quaternionic structure is
// the standard one of sp(2k).
MatrixXcd quaternionic_form_basis(const MatrixXcd& M) {
  const int n = static_cast<int>(M.rows());
  if (n % 2 != 0) throw std::logic_error("quaternionic space must be even dimensional");
  const int k = n / 2;
  std::vector<VectorXcd> us, vs;
  auto orth = [&](VectorXcd v) {
    for (const auto& b : us) v -= (b.dot(v)) * b;
    for (const auto& b : vs) v -= (b.dot(v)) * b;
    return v;
  };
  for (int c = 0; c < n && static_cast<int>(us.size()) < k; ++c) {
    VectorXcd e = VectorXcd::Zero(n);
    e(c) = 1.0;
    VectorXcd u = orth(e);
    if (u.norm() < 1e-6) continue;
    u /= u.norm();
    VectorXcd v = M * u.conjugate();
    v = orth(v);  // numerically clean; exactly orthogonal in theory
    v /= v.norm();
    us.push_back(u);
    vs.push_back(v);
  }
  if (static_cast<int>(us.size()) != k)
    throw std::runtime_error("quaternionic basis incomplete");
  MatrixXcd Q(n, n);
  for (int c = 0; c < k; ++c) {
    Q.col(c) = us[c];
    Q.col(k + c) = -vs[c];
  }
  return Q;
}

std::array<MatrixXcd, 3> block_diagonal_rep(const std::vector<int>& parts, int n) {
  std::array<MatrixXcd, 3> rho;
  for (auto& m : rho) m = MatrixXcd::Zero(n, n);
  int off = 0;
  for (int p : parts) {
    const auto blk = spin_triple_matrices(p - 1);
    for (int a = 0; a < 3; ++a) rho[a].block(off, off, p, p) = blk[a];
    off += p;
  }
  return rho;
}

}  // namespace

Su2Triple embed_from_partition(const AlgebraPtr& algebra, const Partition& p) {
  if (p.family != algebra->family() || p.n != algebra->n())
    throw std::invalid_argument("partition does not target this algebra");
  const int n = algebra->n();
  auto rho = block_diagonal_rep(p.parts, n);

  if (algebra->family() != Family::su) {
    // Assemble the block-diagonal antiunitary structure and change basis so
    // the image lands in the real (so) or symplectic (sp) form.
    //
    // so: odd parts carry their own real structure; equal even parts are
    // paired, the pair carrying a real structure built from the block's
    // pseudoreal one.  sp: the roles of odd and even are exchanged.
    const bool want_real = (algebra->family() == Family::so);
    MatrixXcd M = MatrixXcd::Zero(n, n);
    std::map<int, std::pair<int, double>> pending;  // part -> (offset of unpaired block, sigma)
    int off = 0;
    for (int part : p.parts) {
      double sigma;
      MatrixXcd C;
      if (part == 1) {
        C = MatrixXcd::Identity(1, 1);
        sigma = 1.0;
      } else {
        C = conjugation_intertwiner(spin_triple_matrices(part - 1), &sigma);
      }
      const bool self = want_real ? (sigma > 0) : (sigma < 0);
      if (self) {
        M.block(off, off, part, part) = C;
      } else if (auto it = pending.find(part); it != pending.end()) {
        const int prev = it->second.first;
        M.block(prev, off, part, part) = -C;
        M.block(off, prev, part, part) = C;
        pending.erase(it);
      } else {
        pending.emplace(part, std::make_pair(off, sigma));
      }
      off += part;
    }
    if (!pending.empty())
      throw std::invalid_argument("reality constraint violated: unpaired block of size " +
                                  std::to_string(pending.begin()->first));
    const MatrixXcd mmbar = M * M.conjugate();
    if ((mmbar - MatrixXcd::Identity(n, n)).norm() > 1e-9)
      throw std::runtime_error("assembled structure is not a real structure");
    const MatrixXcd Q = want_real ? real_form_basis(M) : quaternionic_form_basis(M);
    for (int a = 0; a < 3; ++a) rho[a] = Q.adjoint() * rho[a] * Q;
  }

  Su2Triple out;
  out.algebra = algebra;
  out.source = p;
  for (int a = 0; a < 3; ++a)
    out.t[a] = AlgebraElement(algebra->from_matrix(rho[a]), algebra);
  if (out.commutation_residual() > 1e-10)
    throw std::runtime_error("embedded triple violates the su(2) relations");
  return out;
}

Su2Triple zero_triple(const AlgebraPtr& algebra) {
  Su2Triple out;
  out.algebra = algebra;
  out.source = Partition(algebra->family(), algebra->n(),
                         std::vector<int>(algebra->n(), 1));
  for (int a = 0; a < 3; ++a) out.t[a] = zero_element(algebra);
  return out;
}

SpinDecomposition spin_decomposition(const AlgebraPtr& algebra, const Su2Triple& t) {
  if (t.commutation_residual() > 1e-10)
    throw std::invalid_argument("triple does not satisfy the su(2) relations");
  const int d = algebra->dim();
  MatrixXd casimir = MatrixXd::Zero(d, d);
  for (int a = 0; a < 3; ++a) {
    const MatrixXd ad = algebra->ad(t.t[a].coeffs);
    casimir -= ad * ad;
  }
  const MatrixXd& u = algebra->gram_chol_upper();
  const MatrixXd sym = u * casimir * u.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(d, d));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sym + sym.transpose()));
  const VectorXd ev = es.eigenvalues();

  std::map<int, int> counts;  // 2j -> real eigenspace dimension
  for (int i = 0; i < d; ++i) {
    const double mu = ev(i);
    const double jr = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * mu)));
    const int two_j = static_cast<int>(std::lround(2.0 * jr));
    if (two_j < 0 || two_j > 2 * algebra->n())
      throw std::runtime_error("Casimir eigenvalue out of range");
    const double jj = 0.5 * two_j;
    if (std::abs(mu - jj * (jj + 1.0)) > 1e-6)
      throw std::runtime_error("Casimir eigenvalue " + std::to_string(mu) +
                               " is not close to any j(j+1)");
    counts[two_j]++;
  }

  SpinDecomposition dec;
  for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
    const int two_j = it->first, dim = it->second;
    const int nj = two_j + 1;
    if (dim % nj != 0)
      throw std::runtime_error("non-integer multiplicity for spin " + std::to_string(two_j / 2.0));
    const int mult = dim / nj;
    if (two_j % 2 == 1 && mult % 2 != 0)
      throw std::runtime_error("half-integer spin with odd complexified multiplicity");
    dec.entries.push_back({0.5 * two_j, mult});
    dec.total_dim += mult * nj;
  }
  if (dec.total_dim != d) throw std::runtime_error("spin decomposition dimension mismatch");
  return dec;
}

CommutantData commutant(const AlgebraPtr& algebra, const Su2Triple& t) {
  const int d = algebra->dim();
  MatrixXd stacked(3 * d, d);
  for (int a = 0; a < 3; ++a) stacked.middleRows(a * d, d) = algebra->ad(t.t[a].coeffs);
  Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const VectorXd sv = svd.singularValues();
  CommutantData out;
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  for (int i = 0; i < d; ++i) {
    const double s = (i < sv.size()) ? sv(i) : 0.0;
    if (s > 1e-10 * scale && s < 1e-6 * scale)
      throw std::runtime_error("numerically ambiguous commutant null space");
    if (s <= 1e-8 * scale) out.basis.emplace_back(svd.matrixV().col(i), algebra);
  }
  out.dim = static_cast<int>(out.basis.size());
  out.rank = commutant_rank_from_partition(t.source);
  for (const auto& c : out.basis)
    for (int a = 0; a < 3; ++a)
      if (bracket(AlgebraElement(c.coeffs, algebra), t.t[a]).norm() > 1e-10 * std::max(1.0, t.t[a].norm()))
        throw std::runtime_error("commutant basis element fails to commute");
  return out;
}

int commutant_rank_from_partition(const Partition& p) {
  std::map<int, int> mult;
  for (int part : p.parts) mult[part]++;
  if (p.family == Family::su) {
    // C = S(prod U(d_i)): rank sum d_i - 1
    return p.num_parts() - 1;
  }
  // so(N): a part of multiplicity m contributes SO(m) (odd part) or Sp(m)
  // (even part); sp(2k) exchanges the roles.  Either way the factor has rank
  // floor(m/2), the Sp case having even m by the reality constraint.
  int rank = 0;
  for (auto [part, m] : mult) rank += m / 2;
  return rank;
}

std::vector<PartitionClass> classify_partitions(Family family, int n) {
  if (n > 12) throw std::invalid_argument("classification capped at n = 12");
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int maxpart) -> void {
    if (rem == 0) {
      all.push_back(cur);
      return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      cur.push_back(p);
      self(self, rem - p, p);
      cur.pop_back();
    }
  };
  rec(rec, n, n);

  const Partition principal = principal_partition(family, n);
  std::vector<PartitionClass> out;
  for (const auto& parts : all) {
    Partition p;
    try {
      p = Partition(family, n, parts);
    } catch (const std::invalid_argument&) {
      continue;  // reality constraint violated
    }
    PartitionClass pc;
    pc.partition = p;
    pc.commutant_rank = commutant_rank_from_partition(p);
    std::map<int, int> mult;
    for (int part : p.parts) mult[part]++;
    bool distinct = true;
    for (auto [part, m] : mult)
      if (m > 1) distinct = false;
    switch (family) {
      case Family::su: pc.quasiregular = (p.num_parts() == 1); break;
      case Family::so:
      case Family::sp: pc.quasiregular = distinct; break;
    }
    pc.principal = (p.parts == principal.parts);
    out.push_back(std::move(pc));
  }
  return out;
}

Partition principal_partition(Family family, int n) {
  switch (family) {
    case Family::su:
    case Family::sp: return Partition(family, n, {n});
    case Family::so:
      if (n % 2 == 1) return Partition(family, n, {n});
      return Partition(family, n, {n - 1, 1});
  }
  throw std::logic_error("bad family");
}

}  // namespace nahm

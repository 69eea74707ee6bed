#include "nahm/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace nahm {

using Eigen::VectorXd;

namespace {

void check_problem(const SpectralProblem& p) {
  if (p.ambient_dim != 4 && p.ambient_dim != 5)
    throw std::invalid_argument("ambient dimension must be 4 or 5");
  if (p.j < 0 || std::abs(2 * p.j - std::lround(2 * p.j)) > 1e-12)
    throw std::invalid_argument("j must be a non-negative half-integer");
  if (p.eta_shift < -1 || p.eta_shift > 1) throw std::invalid_argument("eta in {-1,0,1}");
  if (p.j_eff() < 0) throw std::invalid_argument("shifted spin j - eta is negative");
  if (p.grid_points < 16) throw std::invalid_argument("grid too coarse");
  if (!(p.cutoff_eps > 0 && p.cutoff_eps < 0.1)) throw std::invalid_argument("bad cutoff");
}

struct Tridiag {
  VectorXd diag, off;  // symmetric tridiagonal after the weight similarity
  VectorXd centers, weights;
};

// Cell-centered finite volumes on [0, pi/2 - eps]: faces at i h, centers at
// (i-1/2) h.  The weight sin^{D-2} vanishes at psi = 0, which encodes the
// regularity condition there; the last face carries the wall condition.
Tridiag discretize(const SpectralProblem& p, int n, double eps) {
  const double length = M_PI / 2 - eps;
  const double h = length / n;
  const int dpow = p.ambient_dim - 2;
  const double q = p.j_eff() * (p.j_eff() + 1.0);
  auto w = [&](double psi) { return std::pow(std::sin(psi), dpow); };

  VectorXd centers(n), wc(n);
  for (int i = 0; i < n; ++i) {
    centers(i) = (i + 0.5) * h;
    wc(i) = w(centers(i));
  }
  VectorXd main = VectorXd::Zero(n), off = VectorXd::Zero(n - 1);
  for (int i = 0; i < n; ++i) {
    double flux = 0.0;
    if (i > 0) flux += w(i * h) / (h * h);
    if (i < n - 1) flux += w((i + 1) * h) / (h * h);
    if (i == n - 1 && p.bc == SpectralBc::dirichlet) flux += 2.0 * w(length) / (h * h);
    const double c = std::cos(centers(i));
    main(i) = flux / wc(i) + q / (c * c);
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double f = -w((i + 1) * h) / (h * h);
    off(i) = f / std::sqrt(wc(i) * wc(i + 1));
  }
  Tridiag t;
  t.diag = main;
  t.off = off;
  t.centers = centers;
  t.weights = wc;
  return t;
}

// eigenvalues of the symmetric tridiagonal below x, by the Sturm count
int sturm_count(const Tridiag& t, double x) {
  const int n = static_cast<int>(t.diag.size());
  int count = 0;
  double d = t.diag(0) - x;
  if (d < 0) ++count;
  for (int i = 1; i < n; ++i) {
    const double b2 = t.off(i - 1) * t.off(i - 1);
    if (std::abs(d) < 1e-300) d = -1e-300;
    d = t.diag(i) - x - b2 / d;
    if (d < 0) ++count;
  }
  return count;
}

double smallest_eigenvalue(const Tridiag& t) {
  double lo = t.diag.minCoeff(), hi = t.diag.maxCoeff();
  const int n = static_cast<int>(t.diag.size());
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off(i - 1));
    if (i < n - 1) r += std::abs(t.off(i));
    lo = std::min(lo, t.diag(i) - r);
    hi = std::max(hi, t.diag(i) + r);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double closed_form_gamma(const SpectralProblem& p) {
  check_problem(p);
  const double je = p.j_eff();
  if (p.bc == SpectralBc::neumann && je == 0.0) return 0.0;
  return (p.ambient_dim == 4) ? (je + 1) * (je + 3) : (je + 1) * (je + 4);
}

double lowest_eigenvalue_raw(const SpectralProblem& p, int points, double eps) {
  check_problem(p);
  return smallest_eigenvalue(discretize(p, points, eps));
}

SpectralSolve lowest_eigenvalue(const SpectralProblem& p) {
  check_problem(p);
  auto extrapolate_h = [&](double eps, double* order) {
    const double g1 = lowest_eigenvalue_raw(p, p.grid_points, eps);
    const double g2 = lowest_eigenvalue_raw(p, 2 * p.grid_points, eps);
    const double g4 = lowest_eigenvalue_raw(p, 4 * p.grid_points, eps);
    const double d1 = g1 - g2, d2 = g2 - g4;
    double pord = 2.0;
    if (std::abs(d2) > 1e-14 && d1 / d2 > 1.0) pord = std::log2(d1 / d2);
    if (order) *order = pord;
    const double extr = g4 - d2 / (std::pow(2.0, pord) - 1.0);
    return std::make_pair(extr, std::array<double, 3>{g1, g2, g4});
  };
  double order = 0.0;
  auto [e_full, raw] = extrapolate_h(p.cutoff_eps, &order);
  auto [e_half, raw2] = extrapolate_h(0.5 * p.cutoff_eps, nullptr);
  if (std::abs(e_half - e_full) > 1e-4 * (1.0 + std::abs(e_half)) + 1e-4)
    throw std::runtime_error("eigenvalue not converged across cutoff refinement");

  SpectralSolve out;
  out.gamma = e_half + (e_half - e_full) / 3.0;  // wall error is at worst O(eps^2)
  out.observed_order = order;
  out.raw = {raw2[0], raw2[1], raw2[2]};
  return out;
}

std::pair<VectorXd, VectorXd> ground_eigenvector(const SpectralProblem& p, int points,
                                                 double eps) {
  check_problem(p);
  const Tridiag t = discretize(p, points, eps);
  const double lam = smallest_eigenvalue(t);
  const int n = points;
  // inverse iteration on the shifted tridiagonal
  VectorXd v = VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const double shift = lam - std::max(1e-10, 1e-10 * std::abs(lam));
  for (int it = 0; it < 50; ++it) {
    // Thomas solve (T - shift) w = v
    VectorXd c(n), dd(n);
    double beta = t.diag(0) - shift;
    dd(0) = v(0) / beta;
    for (int i = 1; i < n; ++i) {
      c(i - 1) = t.off(i - 1) / beta;
      beta = t.diag(i) - shift - t.off(i - 1) * c(i - 1);
      dd(i) = (v(i) - t.off(i - 1) * dd(i - 1)) / beta;
    }
    for (int i = n - 2; i >= 0; --i) dd(i) -= c(i) * dd(i + 1);
    v = dd / dd.norm();
  }
  // undo the weight similarity: eigenvector of the original operator
  VectorXd f(n);
  for (int i = 0; i < n; ++i) f(i) = v(i) / std::sqrt(t.weights(i));
  if (f(n / 4) < 0) f = -f;  // fix the overall sign away from the wall
  return {f, t.centers};
}

double verify_ground_state(const SpectralProblem& p) {
  check_problem(p);
  const double je = p.j_eff();
  const double q = je * (je + 1.0);
  const double gamma = closed_form_gamma(p);
  const double pw = (p.bc == SpectralBc::neumann && je == 0.0) ? 0.0 : je + 1.0;
  const int dpow = p.ambient_dim - 2;
  double worst = 0.0;
  for (int s = 1; s <= 60; ++s) {
    const double psi = s * (M_PI / 2 - 0.05) / 61.0 + 0.02;
    const double cp = std::cos(psi), sp = std::sin(psi);
    const double f = std::pow(cp, pw);
    const double fp = (pw == 0.0) ? 0.0 : -pw * std::pow(cp, pw - 1.0) * sp;
    const double fpp = (pw == 0.0) ? 0.0
                                   : pw * (pw - 1.0) * std::pow(cp, std::max(pw - 2.0, 0.0)) *
                                             sp * sp -
                                         pw * std::pow(cp, pw);
    const double wf = -(dpow * (cp / sp) * fp + fpp) + q * f / (cp * cp);
    worst = std::max(worst, std::abs(wf - gamma * f) / std::max(std::abs(f), 1e-300));
  }
  return worst;
}

DecayResult decay_exponent(double gamma, int ambient_dim) {
  if (gamma < 0) throw std::invalid_argument("gamma must be non-negative");
  DecayResult out;
  out.gamma = gamma;
  if (ambient_dim == 4) {
    out.s_decay = -1.0 - std::sqrt(1.0 + gamma);
    out.s_grow = -1.0 + std::sqrt(1.0 + gamma);
  } else if (ambient_dim == 5) {
    out.s_decay = 0.5 * (-3.0 - std::sqrt(9.0 + 4.0 * gamma));
    out.s_grow = 0.5 * (-3.0 + std::sqrt(9.0 + 4.0 * gamma));
  } else {
    throw std::invalid_argument("ambient dimension must be 4 or 5");
  }
  return out;
}

EtaCoupledModes eta_coupled_modes(double j) {
  if (!(j > 0)) throw std::invalid_argument("the coupled system assumes j > 0");
  Eigen::Matrix2d m;
  const double s = std::sqrt(j * (j + 1.0));
  m << 1.0, s, s, 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  EtaCoupledModes out;
  // descending: j+1 first, then -j
  out.eigenvalues = {es.eigenvalues()(1), es.eigenvalues()(0)};
  // substituting an eigenvalue nu for M shifts W by 2 nu / cos^2, the same as
  // j -> j - eta with eta = -1 for nu = j+1 and eta = +1 for nu = -j
  out.j_effective = {j + 1.0, j - 1.0};
  return out;
}

}  // namespace nahm

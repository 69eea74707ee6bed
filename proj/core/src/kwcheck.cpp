#include "nahm/kwcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace nahm {

using Eigen::VectorXd;

namespace {

template <class Jet>
void fill_zero(Jet& j, int dim, int nd) {
  const VectorXd z = VectorXd::Zero(dim);
  for (auto& v : j.A) v = z;
  for (auto& r : j.dA)
    for (int k = 0; k < nd; ++k) r[k] = z;
  for (auto& r : j.ddA)
    for (auto& rr : r)
      for (int k = 0; k < nd; ++k) rr[k] = z;
}

}  // namespace

FieldJet2 FieldJet2::zero(const AlgebraPtr& alg) {
  FieldJet2 j;
  j.algebra = alg;
  fill_zero(j, alg->dim(), 4);
  const VectorXd z = VectorXd::Zero(alg->dim());
  for (auto& v : j.phi) v = z;
  for (auto& r : j.dphi)
    for (auto& v : r) v = z;
  for (auto& r : j.ddphi)
    for (auto& rr : r)
      for (auto& v : rr) v = z;
  return j;
}

FieldJet5 FieldJet5::zero(const AlgebraPtr& alg) {
  FieldJet5 j;
  j.algebra = alg;
  fill_zero(j, alg->dim(), 5);
  const VectorXd z = VectorXd::Zero(alg->dim());
  for (auto& v : j.B) v = z;
  for (auto& r : j.dB)
    for (auto& v : r) v = z;
  for (auto& r : j.ddB)
    for (auto& rr : r)
      for (auto& v : rr) v = z;
  return j;
}

namespace {

/// Covariant data assembled once per jet: curvature, its covariant
/// derivative, and the first two covariant derivatives of phi.
struct Jet2Data {
  const LieAlgebra* alg;
  double y;
  std::array<VectorXd, 4> A, phi;
  std::array<std::array<VectorXd, 4>, 4> F;                   // F[i][j]
  std::array<std::array<std::array<VectorXd, 4>, 4>, 4> DF;   // DF[k][i][j] = D_k F_ij
  std::array<std::array<VectorXd, 4>, 4> Dphi;                // Dphi[i][j] = D_i phi_j
  std::array<std::array<std::array<VectorXd, 4>, 4>, 4> DDphi;  // DDphi[i][k][j] = D_i D_k phi_j

  explicit Jet2Data(const FieldJet2& jet, bool second_order = true) {
    alg = jet.algebra.get();
    y = jet.y;
    A = jet.A;
    phi = jet.phi;
    auto br = [&](const VectorXd& x, const VectorXd& z) { return alg->bracket(x, z); };
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        F[i][j] = jet.dA[j][i] - jet.dA[i][j] + br(jet.A[i], jet.A[j]);
        Dphi[i][j] = jet.dphi[j][i] + br(jet.A[i], jet.phi[j]);
      }
    if (!second_order) return;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          // d_k F_ij + [A_k, F_ij]
          VectorXd dF = jet.ddA[j][i][k] - jet.ddA[i][j][k] + br(jet.dA[i][k], jet.A[j]) +
                        br(jet.A[i], jet.dA[j][k]);
          DF[k][i][j] = dF + br(jet.A[k], F[i][j]);
          // d_i (D_k phi_j) + [A_i, D_k phi_j]
          VectorXd dD = jet.ddphi[j][k][i] + br(jet.dA[k][i], jet.phi[j]) +
                        br(jet.A[k], jet.dphi[j][i]);
          DDphi[i][k][j] = dD + br(jet.A[i], Dphi[k][j]);
        }
  }

  double tr(const VectorXd& x, const VectorXd& z) const { return alg->trace_form(x, z); }
  VectorXd br(const VectorXd& x, const VectorXd& z) const { return alg->bracket(x, z); }
};

}  // namespace

std::array<std::array<VectorXd, 4>, 4> project_selfdual(
    const std::array<std::array<VectorXd, 4>, 4>& T, int sign, int dim_g) {
  std::array<std::array<VectorXd, 4>, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      VectorXd star = VectorXd::Zero(dim_g);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double e = eps4(i, j, k, l);
          if (e != 0.0) star += 0.5 * e * T[k][l];
        }
      out[i][j] = 0.5 * (T[i][j] + sign * star);
    }
  return out;
}

ResidualSet kw_residual(const FieldJet2& jet, double t) {
  if (t == 0.0) throw std::invalid_argument("the t = 0 member requires a rescaled system");
  const Jet2Data d(jet, false);
  const int dg = jet.algebra->dim();

  std::array<std::array<VectorXd, 4>, 4> G, H;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      G[i][j] = d.F[i][j] - d.br(d.phi[i], d.phi[j]);
      H[i][j] = d.Dphi[i][j] - d.Dphi[j][i];
    }
  std::array<std::array<VectorXd, 4>, 4> Vp, Vm;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Vp[i][j] = G[i][j] + t * H[i][j];
      Vm[i][j] = G[i][j] - (1.0 / t) * H[i][j];
    }
  ResidualSet out;
  out.Vplus = project_selfdual(Vp, +1, dg);
  out.Vminus = project_selfdual(Vm, -1, dg);
  out.V0 = VectorXd::Zero(dg);
  out.gauge = VectorXd::Zero(dg);
  for (int i = 0; i < 4; ++i) {
    out.V0 += d.Dphi[i][i];
    out.gauge += jet.dA[i][i];
  }
  return out;
}

double ResidualSet::max_norm(const LieAlgebra& alg) const {
  auto n = [&](const VectorXd& v) { return std::sqrt(std::abs(alg.trace_form(v, v))); };
  double worst = std::max(n(V0), n(gauge));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max({worst, n(Vplus[i][j]), n(Vminus[i][j])});
  return worst;
}

FieldJet2 NahmPoleField2::jet_at(const Eigen::Vector3d& x, double y) const {
  if (y <= 0.0) throw std::invalid_argument("Nahm pole field lives on y > 0");
  FieldJet2 j = FieldJet2::zero(t_.algebra);
  j.x = x;
  j.y = y;
  for (int a = 0; a < 3; ++a) {
    j.phi[a] = t_.t[a].coeffs / y;
    j.dphi[a][3] = -t_.t[a].coeffs / (y * y);
    j.ddphi[a][3][3] = 2.0 * t_.t[a].coeffs / (y * y * y);
  }
  return j;
}

FieldJet5 NahmPoleField5::jet_at(const Eigen::Vector4d& x, double y) const {
  if (y <= 0.0) throw std::invalid_argument("Nahm pole field lives on y > 0");
  FieldJet5 j = FieldJet5::zero(t_.algebra);
  j.x = x;
  j.y = y;
  for (int a = 0; a < 3; ++a) {
    j.B[a] = t_.t[a].coeffs / y;
    j.dB[a][4] = -t_.t[a].coeffs / (y * y);
    j.ddB[a][4][4] = 2.0 * t_.t[a].coeffs / (y * y * y);
  }
  return j;
}

double WeitzenbockResult::relative() const {
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), scale, 1e-30});
}

WeitzenbockResult weitzenbock_residual(const FieldJet2& jet, WeitzenbockVariant variant,
                                       double t) {
  if (t == 0.0) throw std::invalid_argument("t must be nonzero");
  if (variant != WeitzenbockVariant::tfamily) t = 1.0;
  const Jet2Data d(jet);
  auto tr = [&](const VectorXd& a, const VectorXd& b) { return d.tr(a, b); };

  // equation tensors
  std::array<std::array<VectorXd, 4>, 4> G, H;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      G[i][j] = d.F[i][j] - d.br(d.phi[i], d.phi[j]);
      H[i][j] = d.Dphi[i][j] - d.Dphi[j][i];
    }
  const int dg = jet.algebra->dim();
  std::array<std::array<VectorXd, 4>, 4> Vp, Vm;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Vp[i][j] = G[i][j] + t * H[i][j];
      Vm[i][j] = G[i][j] - (1.0 / t) * H[i][j];
    }
  Vp = project_selfdual(Vp, +1, dg);
  Vm = project_selfdual(Vm, -1, dg);
  VectorXd V0 = VectorXd::Zero(dg);
  for (int i = 0; i < 4; ++i) V0 += d.Dphi[i][i];

  const double wp = (1.0 / t) / (t + 1.0 / t);
  const double wm = t / (t + 1.0 / t);
  double lhs = -tr(V0, V0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      lhs -= wp * tr(Vp[i][j], Vp[i][j]) + wm * tr(Vm[i][j], Vm[i][j]);

  // positive functional
  double action = 0.0;  // I (basic/tfamily) or I' (primed)
  double scale = 0.0;
  auto acc = [&](double v) {
    action -= v;
    scale = std::max(scale, std::abs(v));
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) acc(0.5 * tr(d.F[i][j], d.F[i][j]));
  if (variant == WeitzenbockVariant::primed) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc(tr(d.Dphi[a][b], d.Dphi[a][b]));
    for (int i = 0; i < 4; ++i) acc(tr(d.Dphi[i][3], d.Dphi[i][3]));
    for (int a = 0; a < 3; ++a) {
      const VectorXd c = d.br(d.phi[3], d.phi[a]);
      acc(tr(c, c));
    }
    for (int a = 0; a < 3; ++a) {
      VectorXd w = d.Dphi[3][a];
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const double e = eps3(a, b, c);
          if (e != 0.0) w += 0.5 * e * d.br(d.phi[b], d.phi[c]);
        }
      acc(tr(w, w));
    }
  } else {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        acc(tr(d.Dphi[i][j], d.Dphi[i][j]));
        acc(0.5 * tr(d.br(d.phi[i], d.phi[j]), d.br(d.phi[i], d.phi[j])));
      }
  }

  // divergence currents, expanded by the product rule through the jet
  double div_delta = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      div_delta += tr(d.Dphi[i][j], d.Dphi[j][i]) + tr(d.phi[j], d.DDphi[i][j][i]) -
                   tr(d.Dphi[i][i], d.Dphi[j][j]) - tr(d.phi[i], d.DDphi[i][j][j]);

  double div_x = 0.0, div_t3 = 0.0, div_z = 0.0, pontryagin = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double e = eps4(i, j, k, l);
          if (e == 0.0) continue;
          div_x += e * (tr(d.DF[k][i][j], d.phi[l]) + tr(d.F[i][j], d.Dphi[k][l]));
          div_t3 += (e / 3.0) * (tr(d.Dphi[k][i], d.br(d.phi[j], d.phi[l])) +
                                 tr(d.phi[i], d.br(d.Dphi[k][j], d.phi[l])) +
                                 tr(d.phi[i], d.br(d.phi[j], d.Dphi[k][l])));
          div_z += e * (tr(d.Dphi[i][j], d.Dphi[k][l]) + tr(d.phi[j], d.DDphi[i][k][l]));
          pontryagin += e * tr(d.F[i][j], d.F[k][l]);
        }

  const double kappa = (t - 1.0 / t) / (2.0 * (t + 1.0 / t));
  const double mu = (t + 1.0 / t - 2.0) / (t + 1.0 / t);

  double rhs = action + div_delta + (1.0 - mu) * (div_t3 - div_x) - 2.0 * kappa * div_z +
               0.5 * kappa * pontryagin;
  if (variant == WeitzenbockVariant::primed) {
    // the rearrangement moves the cubic y-current into the positive terms;
    // 1/3 d_y (eps Tr phi [phi,phi]) has three chain-rule terms that coincide
    double dy_cubic = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          const double e = eps3(a, b, c);
          if (e != 0.0) dy_cubic += e * tr(d.Dphi[3][a], d.br(d.phi[b], d.phi[c]));
        }
    rhs += dy_cubic;
  }

  WeitzenbockResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.scale = std::max({scale, std::abs(div_delta), std::abs(div_x), std::abs(div_t3)});
  return out;
}

WeitzenbockResult gosum_residual(const FieldJet2& jet) {
  const Jet2Data d(jet, false);
  auto tr = [&](const VectorXd& a, const VectorXd& b) { return d.tr(a, b); };

  double lhs = 0.0;
  for (int a = 0; a < 3; ++a) lhs += tr(d.Dphi[3][a], d.Dphi[3][a]);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      lhs += 0.5 * tr(d.br(d.phi[a], d.phi[b]), d.br(d.phi[a], d.phi[b]));

  double rhs = 0.0;
  for (int a = 0; a < 3; ++a) {
    VectorXd w = d.Dphi[3][a];
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double e = eps3(a, b, c);
        if (e != 0.0) w += 0.5 * e * d.br(d.phi[b], d.phi[c]);
      }
    rhs += tr(w, w);
  }
  double dy_cubic = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double e = eps3(a, b, c);
        if (e != 0.0) dy_cubic += e * tr(d.Dphi[3][a], d.br(d.phi[b], d.phi[c]));
      }
  rhs -= dy_cubic;

  WeitzenbockResult out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.scale = std::max(std::abs(lhs), std::abs(rhs));
  return out;
}

namespace {

struct Jet5Data {
  const LieAlgebra* alg;
  std::array<VectorXd, 5> A;
  std::array<VectorXd, 3> beta;
  std::array<std::array<VectorXd, 5>, 5> F;     // F[m][n]
  std::array<std::array<VectorXd, 5>, 3> Dbeta;  // Dbeta[a][m] = D_m beta_a

  explicit Jet5Data(const FieldJet5& jet) {
    alg = jet.algebra.get();
    A = jet.A;
    beta = jet.B;
    auto br = [&](const VectorXd& x, const VectorXd& z) { return alg->bracket(x, z); };
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n) F[m][n] = jet.dA[n][m] - jet.dA[m][n] + br(jet.A[m], jet.A[n]);
    for (int a = 0; a < 3; ++a)
      for (int m = 0; m < 5; ++m) Dbeta[a][m] = jet.dB[a][m] + br(jet.A[m], jet.B[a]);
  }

  // two-form components of B over the X directions (0..3)
  VectorXd Bc(int m, int n) const {
    const int dg = static_cast<int>(beta[0].size());
    if (m == 0 && n == 0) return VectorXd::Zero(dg);
    if (m == 0) return beta[n - 1];
    if (n == 0) return -beta[m - 1];
    VectorXd out = VectorXd::Zero(dg);
    const double e = eps3(m - 1, n - 1, 3 - (m - 1) - (n - 1));
    if (m != n) out = e * beta[3 - (m - 1) - (n - 1)];
    return out;
  }

  VectorXd DBc(int s, int m, int n) const {
    const int dg = static_cast<int>(beta[0].size());
    if (m == 0 && n == 0) return VectorXd::Zero(dg);
    if (m == 0) return Dbeta[n - 1][s];
    if (n == 0) return -Dbeta[m - 1][s];
    if (m == n) return VectorXd::Zero(dg);
    const double e = eps3(m - 1, n - 1, 3 - (m - 1) - (n - 1));
    return e * Dbeta[3 - (m - 1) - (n - 1)][s];
  }
};

}  // namespace

Residual5 kw5d_residual(const FieldJet5& jet) {
  const Jet5Data d(jet);
  const int dg = jet.algebra->dim();
  auto br = [&](const VectorXd& x, const VectorXd& z) { return jet.algebra->bracket(x, z); };

  Residual5 out;
  for (int a = 0; a < 3; ++a) {
    // F+_{0a} = (F_{0a} + 1/2 eps_abc F_bc) / 2 over the X star
    VectorXd fplus = d.F[0][a + 1];
    VectorXd bxb = VectorXd::Zero(dg);
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double e = eps3(a, b, c);
        if (e != 0.0) fplus += 0.5 * e * d.F[b + 1][c + 1];
        if (e != 0.0) bxb += e * br(d.beta[b], d.beta[c]);
      }
    fplus *= 0.5;
    out.E1[a] = fplus - 0.25 * bxb - 0.5 * d.Dbeta[a][4];
  }
  for (int mu = 0; mu < 4; ++mu) {
    VectorXd e2 = d.F[4][mu];
    for (int nu = 0; nu < 4; ++nu) e2 += d.DBc(nu, nu, mu);
    out.E2[mu] = e2;
  }
  out.E2[4] = VectorXd::Zero(dg);
  return out;
}

double Residual5::max_norm(const LieAlgebra& alg) const {
  auto n = [&](const VectorXd& v) { return std::sqrt(std::abs(alg.trace_form(v, v))); };
  double worst = 0.0;
  for (const auto& v : E1) worst = std::max(worst, n(v));
  for (const auto& v : E2) worst = std::max(worst, n(v));
  return worst;
}

FieldJet5 lift_time_independent(const FieldJet2& j) {
  FieldJet5 out = FieldJet5::zero(j.algebra);
  out.x << 0.0, j.x(0), j.x(1), j.x(2);
  out.y = j.y;
  // 5d derivative index: 0 -> time (all zero), 1..3 -> spatial, 4 -> y(=3)
  auto dmap = [](int m) { return m == 4 ? 3 : m - 1; };
  for (int m = 0; m < 5; ++m) {
    if (m == 0)
      out.A[m] = -j.phi[3];
    else
      out.A[m] = j.A[dmap(m)];
  }
  for (int a = 0; a < 3; ++a) out.B[a] = j.phi[a];
  for (int m = 0; m < 5; ++m)
    for (int s = 1; s < 5; ++s) {
      if (m == 0)
        out.dA[m][s] = -j.dphi[3][dmap(s)];
      else
        out.dA[m][s] = j.dA[dmap(m)][dmap(s)];
    }
  for (int a = 0; a < 3; ++a)
    for (int s = 1; s < 5; ++s) out.dB[a][s] = j.dphi[a][dmap(s)];
  for (int m = 0; m < 5; ++m)
    for (int s = 1; s < 5; ++s)
      for (int r = 1; r < 5; ++r) {
        if (m == 0)
          out.ddA[m][s][r] = -j.ddphi[3][dmap(s)][dmap(r)];
        else
          out.ddA[m][s][r] = j.ddA[dmap(m)][dmap(s)][dmap(r)];
      }
  for (int a = 0; a < 3; ++a)
    for (int s = 1; s < 5; ++s)
      for (int r = 1; r < 5; ++r) out.ddB[a][s][r] = j.ddphi[a][dmap(s)][dmap(r)];
  return out;
}

namespace {
VectorXd random_vec(int d, SplitMix64& rng) {
  VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform(-1.0, 1.0);
  return v;
}
}  // namespace

FieldJet2 random_jet2(const AlgebraPtr& alg, SplitMix64& rng, double ymin, double ymax) {
  FieldJet2 j = FieldJet2::zero(alg);
  const int d = alg->dim();
  j.x << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
  j.y = rng.uniform(ymin, ymax);
  for (int i = 0; i < 4; ++i) {
    j.A[i] = random_vec(d, rng);
    j.phi[i] = random_vec(d, rng);
    for (int k = 0; k < 4; ++k) {
      j.dA[i][k] = random_vec(d, rng);
      j.dphi[i][k] = random_vec(d, rng);
    }
    for (int k = 0; k < 4; ++k)
      for (int l = k; l < 4; ++l) {
        j.ddA[i][k][l] = random_vec(d, rng);
        j.ddA[i][l][k] = j.ddA[i][k][l];
        j.ddphi[i][k][l] = random_vec(d, rng);
        j.ddphi[i][l][k] = j.ddphi[i][k][l];
      }
  }
  return j;
}

FieldJet5 random_jet5(const AlgebraPtr& alg, SplitMix64& rng, double ymin, double ymax) {
  FieldJet5 j = FieldJet5::zero(alg);
  const int d = alg->dim();
  j.x << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
  j.y = rng.uniform(ymin, ymax);
  for (int m = 0; m < 5; ++m) {
    j.A[m] = random_vec(d, rng);
    for (int s = 0; s < 5; ++s) j.dA[m][s] = random_vec(d, rng);
    for (int s = 0; s < 5; ++s)
      for (int r = s; r < 5; ++r) {
        j.ddA[m][s][r] = random_vec(d, rng);
        j.ddA[m][r][s] = j.ddA[m][s][r];
      }
  }
  for (int a = 0; a < 3; ++a) {
    j.B[a] = random_vec(d, rng);
    for (int s = 0; s < 5; ++s) j.dB[a][s] = random_vec(d, rng);
    for (int s = 0; s < 5; ++s)
      for (int r = s; r < 5; ++r) {
        j.ddB[a][s][r] = random_vec(d, rng);
        j.ddB[a][r][s] = j.ddB[a][s][r];
      }
  }
  return j;
}

}  // namespace nahm

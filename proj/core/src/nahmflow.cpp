#include "nahm/nahmflow.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "nahm/ode.hpp"
#include "nahm/report.hpp"

namespace nahm {

using Eigen::VectorXd;

std::array<AlgebraElement, 3> nahm_rhs(const NahmState& s) {
  // -1/2 eps_abc [phi_b, phi_c] summed over b, c = -[phi_{a+1}, phi_{a+2}]
  std::array<AlgebraElement, 3> out;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    out[a] = -1.0 * bracket(s.phi[b], s.phi[c]);
  }
  return out;
}

Trajectory integrate_pole(const Su2Triple& t, double y0_shift, double y_start, double y_end,
                          double tol) {
  if (!(y_start > y0_shift)) throw std::invalid_argument("y_start must exceed the pole location");
  if (!(y_end > y_start)) throw std::invalid_argument("empty integration range");
  const AlgebraPtr alg = t.algebra;
  const int d = alg->dim();

  VectorXd state(3 * d);
  for (int a = 0; a < 3; ++a) state.segment(a * d, d) = t.t[a].coeffs / (y_start - y0_shift);

  auto rhs = [&](double /*y*/, const VectorXd& v) -> VectorXd {
    VectorXd out(3 * d);
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      out.segment(a * d, d) = -alg->bracket(v.segment(b * d, d), v.segment(c * d, d));
    }
    return out;
  };

  Trajectory traj;
  traj.tol = tol;
  auto record = [&](double y, const VectorXd& v, double err) {
    NahmState s;
    s.y = y;
    for (int a = 0; a < 3; ++a) s.phi[a] = AlgebraElement(v.segment(a * d, d), alg);
    traj.samples.push_back(std::move(s));
    traj.max_step_error = std::max(traj.max_step_error, err);
  };
  record(y_start, state, 0.0);

  // run the integrator two digits below the requested tolerance so the
  // closed-family deviation stays under 10 tol
  OdeOptions opt;
  opt.rtol = 1e-2 * tol;
  opt.atol = 1e-4 * tol;
  integrate_dopri5<VectorXd>(rhs, state, y_start, y_end, opt, record);

  if (!t.is_zero() && pole_family_deviation(traj, t, y0_shift) > 10.0 * tol)
    throw std::runtime_error("trajectory left the pole family");
  return traj;
}

double pole_family_deviation(const Trajectory& traj, const Su2Triple& t, double y0_shift) {
  double worst = 0.0;
  for (const auto& s : traj.samples)
    for (int a = 0; a < 3; ++a)
      worst = std::max(worst,
                       (s.phi[a] - (1.0 / (s.y - y0_shift)) * t.t[a]).norm());
  return worst;
}

double linearized_mode_residual(const Su2Triple& t, const std::vector<double>& ys) {
  if (t.is_zero()) throw std::invalid_argument("linearized mode requires a nonzero triple");
  double worst = 0.0;
  for (double y : ys) {
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      // d psi_a/dy + eps_abc [t_b/y, psi_c] with psi = t/y^2; the eps sum
      // over both index orders gives 2 [t_b, t_c] / y^3
      const AlgebraElement dpsi = (-2.0 / (y * y * y)) * t.t[a];
      const AlgebraElement comm = (2.0 / (y * y * y)) * bracket(t.t[b], t.t[c]);
      worst = std::max(worst, (dpsi + comm).norm());
    }
  }
  return worst;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.samples.empty()) return;
  const int d = traj.samples.front().phi[0].owner->dim();
  CsvWriter csv(os);
  std::vector<std::string> head{"y"};
  for (int a = 1; a <= 3; ++a)
    for (int i = 0; i < d; ++i)
      head.push_back("phi" + std::to_string(a) + "_" + std::to_string(i));
  csv.row(head);
  for (const auto& s : traj.samples) {
    std::vector<std::string> row{format_double(s.y)};
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < d; ++i) row.push_back(format_double(s.phi[a].coeffs(i)));
    csv.row(row);
  }
}

}  // namespace nahm

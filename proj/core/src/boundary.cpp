#include <algorithm>
#include <cmath>
#include <iomanip>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "intercept/game.hpp"

namespace intercept::game {

BoundaryTable::BoundaryTable(const DelayModel& delays, const GameParams& p, double tau_max,
                             double panel)
    : delays_(delays), params_(p), onset_(find_tau_s(delays, p, std::min(tau_max, 20.0))) {
  if (!(panel > 0.0)) throw std::invalid_argument("BoundaryTable: panel must be positive");
  const double ts = onset_.tau_s;
  if (!(tau_max > ts)) throw std::invalid_argument("BoundaryTable: tau_max below tau_s");
  const auto n = static_cast<std::size_t>(std::ceil((tau_max - ts) / panel));
  h_ = (tau_max - ts) / static_cast<double>(n);
  auto R = [&](double t) { return r_func(t, delays_, params_); };

  nodes_.resize(n + 1);
  value_.resize(n + 1);
  slope_.resize(n + 1);
  nodes_[0] = ts;
  value_[0] = 0.0;
  slope_[0] = R(ts);
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = ts + static_cast<double>(i - 1) * h_;
    const double b = ts + static_cast<double>(i) * h_;
    nodes_[i] = b;
    value_[i] = value_[i - 1] + boost::math::quadrature::gauss<double, 10>::integrate(R, a, b);
    slope_[i] = R(b);
  }
}

double BoundaryTable::boundary(double tau) const {
  if (nodes_.empty()) throw std::logic_error("BoundaryTable: empty table");
  if (tau <= nodes_.front()) return 0.0;
  if (tau >= nodes_.back()) {
    auto R = [&](double t) { return r_func(t, delays_, params_); };
    return value_.back() + boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                               R, nodes_.back(), tau, 15, 1e-10);
  }
  const auto i = std::min(static_cast<std::size_t>((tau - nodes_.front()) / h_),
                          nodes_.size() - 2);
  const double x0 = nodes_[i];
  const double s = (tau - x0) / h_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * value_[i] + h10 * h_ * slope_[i] + h01 * value_[i + 1] + h11 * h_ * slope_[i + 1];
}

void BoundaryTable::write_csv(std::ostream& os, double tau_hi, int points) const {
  os << "tau,boundary,R\n";
  os << std::setprecision(17);
  for (int j = 0; j <= points; ++j) {
    const double t = tau_hi * j / points;
    os << t << ',' << boundary(t) << ',' << r_func(t, delays_, params_) << '\n';
  }
}

double pursuer_command(double z_bar, double tau, const BoundaryTable& table, double k) {
  const double sign = (z_bar > 0.0) - (z_bar < 0.0);
  // Below tau_s the regular region covers everything.
  if (tau < table.tau_s()) return sign;
  const double B = table.boundary(tau);
  if (std::abs(z_bar) >= B) return sign;
  return std::clamp(z_bar / (k * B), -1.0, 1.0);
}

double command_tv_dglcc(const GuidanceInputs& in, double delta1, double delta2,
                        const BoundaryTable& table, const GameParams& p) {
  const ZemValue z = zem_dglcc(in, delta1, delta2, p);
  return pursuer_command(z.z_bar, in.t_go / p.tau_P, table, p.k);
}

double command_dgl1(const GuidanceInputs& in, const BoundaryTable& table, const GameParams& p) {
  const ZemValue z = zem_dgl1(in, p);
  return pursuer_command(z.z_bar, in.t_go / p.tau_P, table, p.k);
}

double command_dglc(const GuidanceInputs& in, double delta_t, const BoundaryTable& table,
                    const GameParams& p) {
  const ZemValue z = zem_dglcc(in, 0.0, delta_t, p);
  return pursuer_command(z.z_bar, in.t_go / p.tau_P, table, p.k);
}

}  // namespace intercept::game

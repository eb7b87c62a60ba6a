#include <cmath>
#include <string>

#include "intercept/game.hpp"

namespace intercept::game {

double history_integral(std::span<const double> samples, double dt, double span) {
  if (span <= 0.0) return 0.0;
  if (!(dt > 0.0)) throw std::invalid_argument("history_integral: dt must be positive");
  const std::size_t n = samples.size();
  const double available = n == 0 ? 0.0 : static_cast<double>(n - 1) * dt;
  if (available < span - 1e-9 * std::max(1.0, span)) {
    throw HistoryError("history covers " + std::to_string(available) + " s, need " +
                       std::to_string(span) + " s");
  }
  const double steps = span / dt;
  auto m = static_cast<std::size_t>(std::floor(steps + 1e-9));
  if (m > n - 1) m = n - 1;
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    sum += 0.5 * dt * (samples[n - 1 - j] + samples[n - 2 - j]);
  }
  const double rem = span - static_cast<double>(m) * dt;
  if (rem > 1e-12 * dt && m + 1 < n) {
    const double a = samples[n - 1 - m];
    const double b = samples[n - 2 - m];
    const double mid = a + (b - a) * (rem / dt);
    sum += 0.5 * rem * (a + mid);
  }
  return sum;
}

ZemValue zem_dgl1(const GuidanceInputs& in, const GameParams& p) {
  const double tP = p.tau_P;
  const double tE = p.tau_E;
  const double z = in.x1 + in.t_go * in.x2_delayed - tP * tP * psi(in.t_go / tP) * in.x3 +
                   tE * tE * psi(in.t_go / tE) * in.x4_delayed;
  return {z, z / p.zem_scale()};
}

ZemValue zem_dglcc(const GuidanceInputs& in, double delta1, double delta2, const GameParams& p) {
  if (delta1 < 0.0 || delta2 < delta1) {
    throw std::invalid_argument("zem_dglcc: need 0 <= delta1 <= delta2");
  }
  const double tP = p.tau_P;
  const double tE = p.tau_E;
  const double tg = in.t_go;
  const double integral = history_integral(in.x3_history, in.x3_dt, delta1);
  // tau_E^2 e^{-D2/tE} [tg e^{D1/tE}/tE + e^{-tg/tE} - 1], regrouped so the
  // delay-free limit is exactly tau_E^2 Psi(tg/tE).
  const double c4 =
      tE * tE * std::exp(-delta2 / tE) * ((tg / tE) * std::expm1(delta1 / tE) + psi(tg / tE));
  const double z = in.x1 + tg * in.x2_delayed - tP * tP * psi(tg / tP) * in.x3 -
                   tg * integral + c4 * in.x4_delayed;
  return {z, z / p.zem_scale()};
}

double zem_cc_normalized(double x1, double x2_at_d1, double x3, double x3_integral,
                         double x4_at_d2, double tau, double d1, double d2,
                         const GameParams& p) {
  const double eps = p.epsilon;
  const double c4 = eps * std::exp(-d2 / eps) * (tau * std::expm1(d1 / eps) + eps * psi(tau / eps));
  return x1 + tau * x2_at_d1 - p.mu * psi(tau) * x3 - p.mu * tau * x3_integral + c4 * x4_at_d2;
}

double dzcc_dtau(double tau, double u, const EvaderControlIntegrals& v, const DelaySample& d,
                 const GameParams& p) {
  const double eps = p.epsilon;
  const double mid = std::exp(d.d1 / eps) * ((tau + d.tg1) / eps + 1.0);
  const double tail =
      std::exp(-d.d2 / eps) * (tau * std::expm1(d.d1 / eps) + eps * psi(tau / eps));
  return p.mu * psi(tau) * u - v.plain_d1 + v.exp_d2 - mid * v.exp_d1d2 -
         tail * v.v_at_d2 * (1.0 + d.g2);
}

}  // namespace intercept::game

#include "mpsylv/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mpsylv {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::mp_orth_sylv:
      return "mp_orth_sylv";
    case Algorithm::mp_orth_lyap:
      return "mp_orth_lyap";
    case Algorithm::mp_inv_sylv:
      return "mp_inv_sylv";
    case Algorithm::mp_inv_lyap:
      return "mp_inv_lyap";
  }
  return "unknown";
}

void CostModel::validate() const {
  if (m == 0 || n == 0) throw std::invalid_argument("cost model: m and n must be positive");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("cost model: rho must lie in [0, 1]");
}

namespace {

struct Dims {
  double alpha, beta, gamma;
};

Dims dims(std::size_t m, std::size_t n) {
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  return {dm * dm * dm + dn * dn * dn, dm * dn * (dm + dn), dn * dn * dn};
}

// phi(rho) = a - b rho
struct Linear {
  double a, b;
};

Linear phi_coefficients(Algorithm alg, std::size_t m, std::size_t n) {
  const Dims d = dims(m, n);
  switch (alg) {
    case Algorithm::mp_orth_sylv:
      return {(19.0 * d.alpha + d.beta) / (3.0 * d.beta), (25.0 * d.alpha + d.beta) / (3.0 * d.beta)};
    case Algorithm::mp_inv_sylv:
      return {((61.0 / 3.0) * d.alpha + d.beta) / (3.0 * d.beta),
              (25.0 * d.alpha + d.beta) / (3.0 * d.beta)};
    case Algorithm::mp_orth_lyap:
      return {21.0 / 6.0, 27.0 / 6.0};
    case Algorithm::mp_inv_lyap:
      return {(67.0 / 3.0) / 6.0, 27.0 / 6.0};
  }
  return {0.0, 0.0};
}

}  // namespace

double phi(const CostModel& cm) {
  cm.validate();
  const Linear l = phi_coefficients(cm.algorithm, cm.m, cm.n);
  return l.a - l.b * cm.rho;
}

int k_star(const CostModel& cm) {
  const double p = phi(cm);
  // Absorb the rounding error of evaluating phi at an exact integer.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(p));
  const double k = std::floor(p + slack);
  return k < 0.0 ? -1 : static_cast<int>(k);
}

FlopCount flops(Algorithm a, std::size_t m, std::size_t n, int k) {
  if (k < 0) throw std::invalid_argument("flops: k must be non-negative");
  const Dims d = dims(m, n);
  const double dk = k;
  switch (a) {
    case Algorithm::mp_orth_sylv:
      return {25.0 * d.alpha + d.beta, 6.0 * d.alpha + (4.0 + 3.0 * dk) * d.beta};
    case Algorithm::mp_inv_sylv:
      return {25.0 * d.alpha + d.beta, (14.0 / 3.0) * d.alpha + (4.0 + 3.0 * dk) * d.beta};
    case Algorithm::mp_orth_lyap:
      return {27.0 * d.gamma, (14.0 + 6.0 * dk) * d.gamma};
    case Algorithm::mp_inv_lyap:
      return {27.0 * d.gamma, (38.0 / 3.0 + 6.0 * dk) * d.gamma};
  }
  return {};
}

FlopCount flops_gmres_ir(GmresVariant v, bool lyapunov, std::size_t m, std::size_t n,
                         std::span<const int> ell) {
  for (int l : ell) {
    if (l < 1) throw std::invalid_argument("flops_gmres_ir: inner iteration counts must be >= 1");
  }
  const Dims d = dims(m, n);
  const double k = static_cast<double>(ell.size());
  const double sum = std::accumulate(ell.begin(), ell.end(), 0.0);
  if (lyapunov) {
    if (v == GmresVariant::ug_low) return {(25.0 + 10.0 * k) * d.gamma, (14.0 * sum + 4.0 * k) * d.gamma};
    return {25.0 * d.gamma, (14.0 * sum + 14.0 * k) * d.gamma};
  }
  if (v == GmresVariant::ug_low) return {25.0 * d.alpha + 5.0 * k * d.beta, (7.0 * sum + 2.0 * k) * d.beta};
  return {25.0 * d.alpha, (7.0 * sum + 7.0 * k) * d.beta};
}

double bartels_stewart_flops(std::size_t m, std::size_t n) {
  const Dims d = dims(m, n);
  return 25.0 * d.alpha + 5.0 * d.beta;
}

double bartels_stewart_lyapunov_flops(std::size_t n) { return 35.0 * dims(n, n).gamma; }

double hermitian_solver_flops(std::size_t n) { return 26.0 * dims(n, n).gamma; }

Crossover crossover_rho(Algorithm a, std::size_t m, std::size_t n, int k) {
  if (k < 0) throw std::invalid_argument("crossover_rho: k must be non-negative");
  const Linear l = phi_coefficients(a, m, n);
  const double r = (l.a - k) / l.b;
  if (r < 0.0) return {0.0, true};
  if (r > 1.0) return {1.0, true};
  return {r, false};
}

}  // namespace mpsylv

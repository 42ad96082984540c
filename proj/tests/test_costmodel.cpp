#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mpsylv/costmodel.hpp"

using namespace mpsylv;

namespace {

constexpr Algorithm kAll[] = {Algorithm::mp_orth_sylv, Algorithm::mp_orth_lyap, Algorithm::mp_inv_sylv,
                              Algorithm::mp_inv_lyap};

bool is_lyap(Algorithm a) { return a == Algorithm::mp_orth_lyap || a == Algorithm::mp_inv_lyap; }

double phi_at(Algorithm a, std::size_t m, std::size_t n, double rho) {
  return phi(CostModel{m, n, rho, a});
}

// The published formulas, evaluated directly.
double phi_formula(Algorithm a, double m, double n, double rho) {
  const double al = m * m * m + n * n * n, be = m * n * (m + n);
  switch (a) {
    case Algorithm::mp_orth_sylv:
      return ((19 - 25 * rho) * al + (1 - rho) * be) / (3 * be);
    case Algorithm::mp_inv_sylv:
      return ((20 + 1.0 / 3 - 25 * rho) * al + (1 - rho) * be) / (3 * be);
    case Algorithm::mp_orth_lyap:
      return (21 - 27 * rho) / 6;
    case Algorithm::mp_inv_lyap:
      return (22 + 1.0 / 3 - 27 * rho) / 6;
  }
  return 0;
}

}  // namespace

TEST(Phi, Examples) {
  EXPECT_NEAR(phi_at(Algorithm::mp_orth_lyap, 10, 10, 0), 3.5, 1e-12);
  EXPECT_NEAR(phi_at(Algorithm::mp_inv_lyap, 10, 10, 0), 67.0 / 18, 1e-12);
  EXPECT_NEAR(phi_at(Algorithm::mp_orth_sylv, 50, 50, 0), 40.0 / 6, 1e-12);
  EXPECT_NEAR(phi_at(Algorithm::mp_orth_lyap, 10, 10, 21.0 / 27), 0.0, 1e-12);
}

TEST(Phi, MatchesFormulasOnGrid) {
  for (Algorithm a : kAll)
    for (std::size_t m : {1u, 3u, 10u, 100u})
      for (std::size_t n : {1u, 7u, 100u}) {
        const std::size_t nn = is_lyap(a) ? m : n;
        for (int i = 0; i <= 100; ++i) {
          const double rho = i / 100.0;
          EXPECT_NEAR(phi_at(a, m, nn, rho), phi_formula(a, m, nn, rho), 1e-12);
        }
      }
}

TEST(KStar, Examples) {
  EXPECT_EQ(k_star(CostModel{10, 10, 0, Algorithm::mp_orth_lyap}), 3);
  EXPECT_EQ(k_star(CostModel{10, 10, 0, Algorithm::mp_orth_sylv}), 6);
  EXPECT_EQ(k_star(CostModel{10, 10, 0, Algorithm::mp_inv_lyap}), 3);
  EXPECT_EQ(k_star(CostModel{10, 10, 0.9, Algorithm::mp_orth_lyap}), -1);
  // exact integer value of phi at a grid point must not be floored away
  EXPECT_EQ(k_star(CostModel{10, 10, 21.0 / 27, Algorithm::mp_orth_lyap}), 0);
}

TEST(KStar, MonotoneInRho) {
  for (Algorithm a : kAll)
    for (std::size_t m : {2u, 10u, 64u})
      for (std::size_t n : {3u, 10u, 200u}) {
        const std::size_t nn = is_lyap(a) ? m : n;
        int prev = k_star(CostModel{m, nn, 0.0, a});
        for (int i = 1; i <= 100; ++i) {
          const int k = k_star(CostModel{m, nn, i / 100.0, a});
          EXPECT_LE(k, prev);
          EXPECT_GE(k, -1);
          prev = k;
        }
      }
}

TEST(Phi, InversionVariantMoreFavorable) {
  for (std::size_t m : {4u, 32u})
    for (std::size_t n : {4u, 64u})
      for (int i = 0; i <= 10; ++i) {
        const double rho = i / 10.0;
        const double diff = phi_at(Algorithm::mp_inv_sylv, m, n, rho) - phi_at(Algorithm::mp_orth_sylv, m, n, rho);
        const double al = double(m * m * m + n * n * n), be = double(m * n * (m + n));
        EXPECT_NEAR(diff, (4.0 / 3) * al / (3 * be), 1e-12);
        EXPECT_GT(diff, 0.0);
      }
}

TEST(Flops, TableEntries) {
  const auto f = flops(Algorithm::mp_orth_sylv, 100, 100, 2);
  EXPECT_DOUBLE_EQ(f.low, 52e6);
  EXPECT_DOUBLE_EQ(f.high, 32e6);
  const double al = 2e6, be = 2e6;
  const auto g = flops(Algorithm::mp_inv_sylv, 100, 100, 3);
  EXPECT_DOUBLE_EQ(g.low, 25 * al + be);
  EXPECT_NEAR(g.high, (4 + 2.0 / 3) * al + 13 * be, 1e-6);
  const double ga = 1e6;
  const auto h = flops(Algorithm::mp_orth_lyap, 100, 100, 1);
  EXPECT_DOUBLE_EQ(h.low, 27 * ga);
  EXPECT_DOUBLE_EQ(h.high, 20 * ga);
  const auto q = flops(Algorithm::mp_inv_lyap, 100, 100, 1);
  EXPECT_NEAR(q.high, (12 + 2.0 / 3 + 6) * ga, 1e-6);
  EXPECT_DOUBLE_EQ(bartels_stewart_lyapunov_flops(10), 35000);
  EXPECT_DOUBLE_EQ(hermitian_solver_flops(10), 26000);
  EXPECT_DOUBLE_EQ(bartels_stewart_flops(100, 100), 25 * al + 5 * be);
}

TEST(Flops, GmresTable) {
  const std::vector<int> ell{3, 2};
  const double al = 2e6, be = 2e6, ga = 1e6;
  const auto lo = flops_gmres_ir(GmresVariant::ug_low, false, 100, 100, ell);
  EXPECT_DOUBLE_EQ(lo.low, 25 * al + 5 * 2 * be);
  EXPECT_DOUBLE_EQ(lo.high, (7 * 5 + 2 * 2) * be);
  const auto hi = flops_gmres_ir(GmresVariant::ug_high, false, 100, 100, ell);
  EXPECT_DOUBLE_EQ(hi.low, 25 * al);
  EXPECT_DOUBLE_EQ(hi.high, (7 * 5 + 7 * 2) * be);
  const auto ll = flops_gmres_ir(GmresVariant::ug_low, true, 100, 100, ell);
  EXPECT_DOUBLE_EQ(ll.low, (25 + 10 * 2) * ga);
  const std::vector<int> bad{0};
  EXPECT_THROW(flops_gmres_ir(GmresVariant::ug_low, false, 4, 4, bad), std::invalid_argument);
}

// At k = k*, rho low + high <= the high-precision Bartels-Stewart cost; at
// k* + 1 it is not.
TEST(Flops, KStarIsTheBudget) {
  for (Algorithm a : {Algorithm::mp_orth_sylv, Algorithm::mp_inv_sylv})
    for (std::size_t m : {8u, 50u})
      for (std::size_t n : {8u, 120u})
        for (int i = 0; i <= 20; ++i) {
          const double rho = i / 20.0;
          const int k = k_star(CostModel{m, n, rho, a});
          const double bs = bartels_stewart_flops(m, n);
          if (k >= 0) {
            EXPECT_LE(flops(a, m, n, k).weighted(rho), bs * (1 + 1e-12));
          }
          EXPECT_GT(flops(a, m, n, k + 1).weighted(rho), bs * (1 - 1e-12));
        }
}

TEST(Crossover, Examples) {
  const auto a = crossover_rho(Algorithm::mp_orth_lyap, 10, 10, 0);
  EXPECT_NEAR(a.rho, 21.0 / 27, 1e-12);
  EXPECT_FALSE(a.clamped);
  EXPECT_NEAR(crossover_rho(Algorithm::mp_orth_sylv, 10, 10, 1).rho, 34.0 / 52, 1e-12);
  EXPECT_NEAR(crossover_rho(Algorithm::mp_inv_lyap, 10, 10, 0).rho, 67.0 / 81, 1e-12);
  const auto c = crossover_rho(Algorithm::mp_orth_lyap, 10, 10, 5);
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(c.rho, 0.0);
  // phi(crossover) = k
  for (Algorithm a2 : kAll) {
    const auto x = crossover_rho(a2, 10, 10, 2);
    if (!x.clamped) EXPECT_NEAR(phi_at(a2, 10, 10, x.rho), 2.0, 1e-12);
  }
}

TEST(CostModel, Validation) {
  EXPECT_THROW((CostModel{0, 1, 0.5, Algorithm::mp_orth_sylv}).validate(), std::invalid_argument);
  EXPECT_THROW((CostModel{1, 1, 1.5, Algorithm::mp_orth_sylv}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((CostModel{1, 1, 1.0, Algorithm::mp_orth_sylv}).validate());
}

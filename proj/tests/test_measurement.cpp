#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pntomo/errors.hpp"
#include "pntomo/grid.hpp"
#include "pntomo/measurement.hpp"

using namespace pntomo;

namespace {

std::vector<double> poisson(double mean, int len) {
  std::vector<double> p(len);
  for (int n = 0; n < len; ++n) p[n] = std::exp(-mean) * std::pow(mean, n) / oracle::factorial(n);
  return p;
}

std::vector<double> delta_at(int k, int len) {
  std::vector<double> p(len, 0.0);
  p[k] = 1.0;
  return p;
}

}  // namespace

TEST(displaced_probabilities, vacuum_at_origin) {
  const auto rho = build_state(state::Fock{0}, 10);
  const auto pv = displaced_number_probabilities(rho, 0.0, 9);
  EXPECT_NEAR(pv.p[0], 1.0, 1e-15);
  for (int n = 1; n <= 9; ++n) EXPECT_NEAR(pv.p[n], 0.0, 1e-15);
  EXPECT_NEAR(pv.tail_mass, 0.0, 1e-15);
}

TEST(displaced_probabilities, fock_one_zero_count) {
  const auto rho = build_state(state::Fock{1}, 10);
  const auto pv = displaced_number_probabilities(rho, 1.0, 9);
  EXPECT_NEAR(pv.p[0], 0.367879, 1e-6);
  EXPECT_NEAR(pv.p[0], std::exp(-1.0), 1e-13);
}

TEST(displaced_probabilities, coherent_shift_is_poisson) {
  // dim 30 so the truncated amplitudes of coherent(1) do not show up at 1e-12.
  const auto rho = build_state(state::Coherent{1.0}, 30);
  const auto pv = displaced_number_probabilities(rho, 1.0, 19);
  const auto ref = poisson(4.0, 20);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(pv.p[n], ref[n], 1e-12) << n;
}

TEST(displaced_probabilities, coherent_nulled) {
  const Complex beta(0.8, -0.6);
  const auto rho = build_state(state::Coherent{beta}, 25);
  const auto pv = displaced_number_probabilities(rho, -beta, 20);
  EXPECT_NEAR(pv.p[0], 1.0 - pv.tail_mass, 1e-12);
  EXPECT_NEAR(pv.p[0], rho.trace(), 1e-12);
  for (int n = 1; n <= 20; ++n) EXPECT_LE(pv.p[n], 1e-10);
}

TEST(displaced_probabilities, zero_count_is_overlap_with_minus_alpha) {
  const auto rho = build_state(state::Thermal{0.7}, 40);
  for (Complex alpha : {Complex(0.5, 0.2), Complex(-1.0, 1.3)}) {
    const CVector ket = oracle::coherent_vector(-alpha, 40);
    const double q = (ket.adjoint() * rho.matrix() * ket)(0, 0).real();
    EXPECT_NEAR(displaced_number_probabilities(rho, alpha, 10).p[0], q, 1e-10);
  }
}

TEST(displaced_probabilities, agrees_with_expm_displacement) {
  const auto rho = build_state(state::Cat{Complex(1.0, 0.3), 0.0}, 20);
  const Complex alpha(-0.9, 0.4);
  const CMatrix d = oracle::displacement_expm(alpha, 60, 120);
  CMatrix big = CMatrix::Zero(60, 60);
  big.topLeftCorner(20, 20) = rho.matrix();
  const CMatrix kicked = d * big * d.adjoint();
  const auto pv = displaced_number_probabilities(rho, alpha, 19);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(pv.p[n], kicked(n, n).real(), 1e-11);
}

TEST(displaced_probabilities, tail_warning) {
  const auto rho = build_state(state::Fock{0}, 10);
  EXPECT_TRUE(displaced_number_probabilities(rho, 0.5, 9).warnings.empty());
  EXPECT_FALSE(displaced_number_probabilities(rho, 3.0, 5).warnings.empty());
}

TEST(efficiency, unit_efficiency_is_identity) {
  const auto p = poisson(1.3, 12);
  const auto q = apply_efficiency(p, 1.0);
  for (int n = 0; n < 12; ++n) EXPECT_EQ(p[n], q[n]);
}

TEST(efficiency, binomial_examples) {
  const auto one = apply_efficiency(delta_at(1, 4), 0.8);
  EXPECT_NEAR(one[0], 0.2, 1e-15);
  EXPECT_NEAR(one[1], 0.8, 1e-15);
  EXPECT_NEAR(one[2], 0.0, 1e-15);

  const auto two = apply_efficiency(delta_at(2, 5), 0.5);
  EXPECT_NEAR(two[0], 0.25, 1e-15);
  EXPECT_NEAR(two[1], 0.5, 1e-15);
  EXPECT_NEAR(two[2], 0.25, 1e-15);
  EXPECT_NEAR(two[3], 0.0, 1e-15);
}

TEST(efficiency, matches_normal_ordered_form) {
  const auto p = poisson(2.0, 16);
  for (double eta : {0.9, 0.6, 0.3}) {
    const auto got = apply_efficiency(p, eta);
    const auto ref = oracle::normal_ordered_smear(p, eta);
    for (int n = 0; n < 16; ++n) EXPECT_NEAR(got[n], ref[n], 1e-12) << eta << " " << n;
  }
}

TEST(efficiency, preserves_mass) {
  const auto rho = build_state(state::Thermal{1.2}, 60);
  const auto p = displaced_number_probabilities(rho, Complex(0.7, 0.1), 40).p;
  const double before = std::accumulate(p.begin(), p.end(), 0.0);
  for (double eta : {0.95, 0.7, 0.4, 0.1}) {
    const auto q = apply_efficiency(p, eta);
    EXPECT_NEAR(std::accumulate(q.begin(), q.end(), 0.0), before, 1e-12);
    for (double v : q) EXPECT_GE(v, 0.0);
  }
}

TEST(efficiency, thinning_composes) {
  const auto p = poisson(3.0, 30);
  for (auto [e1, e2] : {std::pair{0.9, 0.8}, std::pair{0.5, 0.7}, std::pair{0.3, 0.95}}) {
    const auto twice = apply_efficiency(apply_efficiency(p, e1), e2);
    const auto once = apply_efficiency(p, e1 * e2);
    for (int n = 0; n < 30; ++n) EXPECT_NEAR(twice[n], once[n], 1e-12);
  }
}

TEST(efficiency, poisson_thins_to_poisson) {
  const auto rho = build_state(state::Coherent{1.0}, 30);
  auto p = displaced_number_probabilities(rho, 0.0, 29).p;
  const auto q = apply_efficiency(p, 0.5);
  const auto ref = poisson(0.5, 30);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(q[n], ref[n], 1e-12);
}

TEST(efficiency, rejects_bad_eta) {
  const auto p = delta_at(0, 3);
  EXPECT_THROW(apply_efficiency(p, 0.0), ValidationError);
  EXPECT_THROW(apply_efficiency(p, 1.2), ValidationError);
  EXPECT_THROW(invert_efficiency(p, -0.5, 2), ValidationError);
}

TEST(inversion, unit_efficiency_is_identity) {
  const auto p = poisson(0.8, 10);
  const auto inv = invert_efficiency(p, 1.0, 9);
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(inv.p[n], p[n], 1e-15);
}

TEST(inversion, round_trip_on_finite_support) {
  // Support on [0, n_max - k] with the smeared vector kept to full length.
  for (double eta : {0.8, 0.6, 0.4}) {
    const auto rho = build_state(state::Fock{2}, 5);
    std::vector<double> p(11, 0.0);
    for (int n = 0; n < 5; ++n) p[n] = rho(n, n).real();
    const auto smeared = apply_efficiency(p, eta);
    const auto inv = invert_efficiency(smeared, eta, 10);
    for (int n = 0; n <= 10; ++n) EXPECT_NEAR(inv.p[n], p[n], 1e-10) << eta << " " << n;
  }
}

TEST(inversion, conditioning_report) {
  const auto smeared = apply_efficiency(delta_at(2, 11), 0.4);
  const auto inv = invert_efficiency(smeared, 0.4, 10);
  EXPECT_GT(inv.amplification, 1.0);
  // Low photon numbers sum the most alternating terms; the top entries keep few.
  for (std::size_t n = 1; n <= inv.amplification_by_n.size() / 2; ++n) {
    EXPECT_GE(inv.amplification_by_n[n], inv.amplification_by_n[n - 1]) << n;
  }
  EXPECT_FALSE(inv.warnings.empty());
  EXPECT_TRUE(invert_efficiency(apply_efficiency(delta_at(2, 11), 0.8), 0.8, 10).warnings.empty());
}

TEST(pre_squeeze, zero_is_noop) {
  const auto rho = build_state(state::Thermal{0.3}, 15);
  const auto out = pre_squeeze(rho, {0.0, 0.0});
  EXPECT_LT(oracle::max_abs(out.matrix() - rho.matrix()), 1e-15);
}

TEST(pre_squeeze, vacuum_parity_and_purity) {
  const auto rho = build_state(state::Fock{0}, 30);
  const auto out = pre_squeeze(rho, {0.5, 0.0});
  for (int n = 1; n < 30; n += 2) EXPECT_LT(out(n, n).real(), 1e-12);
  EXPECT_NEAR(out.purity(), 1.0, 1e-8);
}

TEST(pre_squeeze, matches_oracle) {
  const auto rho = build_state(state::Fock{1}, 40);
  const SqueezeSpec z{0.4, 0.9};
  const CMatrix s = oracle::squeeze_expm(z.zeta(), 40, 200);
  const CMatrix ref = s * rho.matrix() * s.adjoint();
  EXPECT_LT(oracle::max_abs(pre_squeeze(rho, z).matrix() - ref), 1e-10);
}

TEST(pre_squeeze, leakage_reports_required_dim) {
  const auto rho = build_state(state::Fock{3}, 6);
  try {
    pre_squeeze(rho, {1.0, 0.0});
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.required_dim(), 6);
    EXPECT_NO_THROW(pre_squeeze(rho, {1.0, 0.0}, e.required_dim()));
  }
}

TEST(sampling, point_mass) {
  const auto c = sample_counts(delta_at(0, 5), 1000, 7);
  EXPECT_EQ(c.counts[0], 1000u);
  EXPECT_EQ(c.overflow, 0u);
}

TEST(sampling, fixed_seed_reproducible) {
  const auto p = poisson(2.0, 8);
  const auto a = sample_counts(p, 50000, 42);
  const auto b = sample_counts(p, 50000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.overflow, b.overflow);
  EXPECT_NE(a.counts, sample_counts(p, 50000, 43).counts);
}

TEST(sampling, law_of_large_numbers) {
  const auto p = poisson(1.5, 6);  // the remaining mass goes to overflow
  const std::uint64_t shots = 1000000;
  const auto c = sample_counts(p, shots, 2024);
  std::uint64_t total = c.overflow;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double freq = static_cast<double>(c.counts[n]) / shots;
    const double sigma = std::sqrt(p[n] * (1.0 - p[n]) / shots);
    EXPECT_LE(std::abs(freq - p[n]), 5.0 * sigma + 1e-12) << n;
    total += c.counts[n];
  }
  EXPECT_EQ(total, shots);
  const double tail = 1.0 - std::accumulate(p.begin(), p.end(), 0.0);
  EXPECT_NEAR(static_cast<double>(c.overflow) / shots, tail, 5.0 * std::sqrt(tail * (1 - tail) / shots));
}

TEST(table, exact_unit_efficiency_is_raw_probabilities) {
  const auto rho = build_state(state::Coherent{Complex(0.5, 0.5)}, 20);
  const auto grid = make_grid(3.0, 4, 8);
  const auto table = build_table(rho, grid, {1.0, std::nullopt, 12, std::nullopt, 0});
  ASSERT_EQ(table.alphas.size(), grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_EQ(table.alphas[j], grid.nodes[j]);
    const auto pv = displaced_number_probabilities(rho, grid.nodes[j], 12);
    for (int n = 0; n <= 12; ++n) EXPECT_NEAR(table.probs[j][n], pv.p[n], 1e-14);
  }
}

TEST(table, lossy_examples_at_origin) {
  PhaseSpaceGrid origin;
  origin.spec = {1.0, 2, 4};
  origin.nodes = {0.0};
  origin.weights = {1.0};
  const auto vac = build_table(build_state(state::Fock{0}, 10), origin, {0.5, std::nullopt, 9, std::nullopt, 0});
  EXPECT_NEAR(vac.probs[0][0], 1.0, 1e-15);

  const auto coh = build_table(build_state(state::Coherent{1.0}, 25), origin, {0.5, std::nullopt, 15, std::nullopt, 0});
  const auto ref = poisson(0.5, 16);
  for (int n = 0; n <= 15; ++n) EXPECT_NEAR(coh.probs[0][n], ref[n], 1e-12);

  const auto f1 = build_table(build_state(state::Fock{1}, 10), origin, {0.8, std::nullopt, 9, std::nullopt, 0});
  EXPECT_NEAR(f1.probs[0][0], 0.2, 1e-14);
  EXPECT_NEAR(f1.probs[0][1], 0.8, 1e-14);
}

TEST(table, sampled_mode_is_deterministic) {
  const auto rho = build_state(state::Fock{1}, 12);
  const auto grid = make_grid(3.0, 3, 4);
  const TableOptions opts{0.9, std::nullopt, 8, 2000, 99};
  const auto a = build_table(rho, grid, opts);
  const auto b = build_table(rho, grid, opts);
  EXPECT_EQ(a.counts, b.counts);
  for (std::size_t j = 0; j < a.alphas.size(); ++j) {
    std::uint64_t sum = 0;
    for (auto c : a.counts[j]) sum += c;
    EXPECT_NEAR(a.tail_mass[j], static_cast<double>(2000 - sum) / 2000.0, 1e-15);
  }
}

TEST(table, validation) {
  const auto rho = build_state(state::Fock{0}, 5);
  const auto grid = make_grid(2.0, 2, 4);
  auto table = build_table(rho, grid, {1.0, std::nullopt, 4, std::nullopt, 0});
  EXPECT_NO_THROW(table.validate());
  table.alphas[1] = table.alphas[0];
  EXPECT_THROW(table.validate(), ValidationError);
}

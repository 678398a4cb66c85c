#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "pntomo/config.hpp"
#include "pntomo/errors.hpp"
#include "pntomo/io.hpp"
#include "pntomo/reconstruction.hpp"

using namespace pntomo;
using nlohmann::json;

TEST(io, format_double_round_trips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, std::exp(-20.0)}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_THROW(io::format_double(std::nan("")), ValidationError);
}

TEST(io, density_json_round_trip) {
  const auto rho = build_state(state::Cat{Complex(0.7, 0.4), 1.0}, 12);
  const json j = io::density_to_json(rho);
  EXPECT_EQ(j.at("dim"), 12);
  EXPECT_EQ(j.at("re").size(), 12u);
  const auto back = io::density_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.matrix(), rho.matrix());
}

TEST(io, density_json_rejects_bad_input) {
  EXPECT_THROW(io::density_from_json(json{{"dim", 2}, {"re", {{1, 0}}}, {"im", {{0, 0}}}}), ValidationError);
  EXPECT_THROW(io::density_from_json(json{{"dim", 1}, {"re", {{0.5}}}, {"im", {{0.0}}}}), ValidationError);
  EXPECT_THROW(io::density_from_json(json{{"re", {{1.0}}}}), ValidationError);
}

TEST(io, table_round_trip_exact) {
  const auto rho = build_state(state::Fock{1}, 10);
  const auto grid = make_grid(2.5, 3, 5);
  const auto table = build_table(rho, grid, {0.8, SqueezeSpec{0.2, 0.5}, 6, std::nullopt, 0});
  const auto csv = io::table_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha_re,alpha_im,n,p");
  const auto sidecar = io::table_sidecar(table);
  EXPECT_EQ(sidecar.at("shots"), "exact");
  EXPECT_EQ(sidecar.at("grid").at("n_theta"), 5);

  const auto back = io::table_from(csv, json::parse(sidecar.dump()));
  EXPECT_EQ(back.alphas, table.alphas);
  EXPECT_EQ(back.probs, table.probs);
  EXPECT_EQ(back.eta, table.eta);
  ASSERT_TRUE(back.squeeze.has_value());
  EXPECT_EQ(back.squeeze->magnitude, 0.2);
  EXPECT_EQ(back.grid, table.grid);
  EXPECT_EQ(io::table_csv(back), csv);
}

TEST(io, table_round_trip_sampled) {
  const auto rho = build_state(state::Coherent{1.5}, 20);
  const auto grid = make_grid(2.0, 2, 4);
  const auto table = build_table(rho, grid, {1.0, std::nullopt, 3, 500, 11});
  const auto csv = io::table_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha_re,alpha_im,n,count");
  const auto back = io::table_from(csv, io::table_sidecar(table));
  EXPECT_EQ(back.counts, table.counts);
  EXPECT_EQ(*back.shots, 500u);
  for (std::size_t j = 0; j < table.alphas.size(); ++j) EXPECT_NEAR(back.tail_mass[j], table.tail_mass[j], 1e-15);
}

TEST(io, table_rejects_malformed_rows) {
  const json sidecar{{"eta", 1.0}, {"n_max", 1}, {"shots", "exact"}, {"grid", {{"r_max", 1.0}, {"n_r", 2}, {"n_theta", 4}}}};
  EXPECT_THROW(io::table_from("alpha_re,alpha_im,n,p\n0,0,1,0.5\n", sidecar), ValidationError);
  EXPECT_THROW(io::table_from("alpha_re,alpha_im,n,p\n0,0,0,0.5\n", sidecar), ValidationError);
  EXPECT_THROW(io::table_from("wrong,header\n", sidecar), ValidationError);
  EXPECT_THROW(io::table_from("alpha_re,alpha_im,n,p\n0,0,0,abc\n0,0,1,0\n", sidecar), ValidationError);
  EXPECT_NO_THROW(io::table_from("alpha_re,alpha_im,n,p\n0,0,0,0.5\n0,0,1,0.25\n", sidecar));
}

TEST(io, report_json_fields) {
  const auto rho = build_state(state::Fock{0}, 6);
  const auto grid = make_grid(3.0, 8, 8);
  const auto table = build_table(rho, grid, {1.0, std::nullopt, 5, std::nullopt, 0});
  const auto report = reconstruct(table, {-0.5, 1.0, 1.0}, grid, 6);
  const json j = io::report_to_json(report);
  for (const char* key : {"rho_hat", "raw_trace", "hermiticity_defect", "min_eig_before_clip", "params", "grid",
                          "n_trunc_err"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.at("params").at("s"), -0.5);
  EXPECT_EQ(j.at("grid").at("n_r"), 8);
  EXPECT_EQ(io::density_from_json(j).matrix(), report.rho_hat.matrix());
}

TEST(io, scan_csv_headers) {
  const std::vector<Complex> nodes{{0.5, -0.25}};
  const std::vector<double> values{2.0};
  const std::vector<Complex> chis{{1.0, 0.5}};
  EXPECT_EQ(io::weight_scan_csv(nodes, values), "alpha_re,alpha_im,value\n0.5,-0.25,2\n");
  EXPECT_EQ(io::characteristic_scan_csv(nodes, chis), "xi_re,xi_im,chi_re,chi_im\n0.5,-0.25,1,0.5\n");
}

TEST(io, sidecar_path) {
  EXPECT_EQ(io::sidecar_path("out/table.csv"), std::filesystem::path("out/table.json"));
}

TEST(config, parses_fields_and_overrides) {
  const json j = json::parse(R"({"state": {"type": "coherent", "beta": [1.0, 0.5]}, "dim": 20,
                                 "eta": 0.7, "s": "auto", "grid": {"r_max": 4.5, "n_r": 48, "n_theta": 64},
                                 "nmax": 15, "shots": "exact", "seed": 3})");
  auto cfg = config_from_json(j);
  EXPECT_EQ(cfg.resolved_dim(), 20);
  EXPECT_FALSE(cfg.s.has_value());
  EXPECT_FALSE(cfg.shots.has_value());
  EXPECT_EQ(cfg.resolved_grid(0.0), (GridSpec{4.5, 48, 64}));
  EXPECT_NO_THROW(cfg.validate());

  apply_override(cfg, "s", "-0.6");
  apply_override(cfg, "shots", "1000");
  apply_override(cfg, "squeeze-mag", "0.3");
  EXPECT_EQ(*cfg.s, -0.6);
  EXPECT_EQ(*cfg.shots, 1000u);
  EXPECT_EQ(cfg.squeeze->magnitude, 0.3);
  EXPECT_THROW(apply_override(cfg, "bogus", "1"), ValidationError);
  EXPECT_THROW(apply_override(cfg, "dim", "twenty"), ValidationError);
}

TEST(config, defaults) {
  RunConfig cfg;
  cfg.state = state::Coherent{Complex(0.0, 1.5)};
  EXPECT_EQ(cfg.resolved_dim(), 20);
  EXPECT_EQ(cfg.resolved_n_max(), 19);
  EXPECT_EQ(cfg.resolved_grid(max_amplitude(*cfg.state)), (GridSpec{5.5, 48, 64}));
}

TEST(config, rejects_inconsistent_combinations) {
  auto invalid = [](const char* text) {
    EXPECT_THROW(config_from_json(json::parse(text)).validate(), ValidationError) << text;
  };
  invalid(R"({"eta": 0.0})");
  invalid(R"({"eta": 1.2})");
  invalid(R"({"dim": 10, "nmax": 10})");
  invalid(R"({"dim": 10, "nmax": 12})");
  invalid(R"({"s": 0.1})");
  invalid(R"({"s": -1.0})");
  invalid(R"({"eta": 0.7, "s": -0.3})");
  invalid(R"({"eta": 0.4, "s": -0.7})");
  invalid(R"({"squeeze_phase": 7.0})");
  invalid(R"({"shots": 0})");
  invalid(R"({"nr": 1})");
  EXPECT_THROW(config_from_json(json::parse(R"({"unknown": 1})")), ValidationError);
  EXPECT_THROW(config_from_json(json::parse(R"({"state": {"type": "banana"}})")), ValidationError);
  EXPECT_NO_THROW(config_from_json(json::parse(R"({"eta": 0.4, "squeeze_mag": 0.5493, "s": -0.7})")).validate());
}

TEST(config, state_json_round_trip) {
  const StateSpec specs[] = {state::Fock{2}, state::Coherent{Complex(1.0, -0.5)}, state::Thermal{0.5},
                             state::Cat{1.2, 0.0}, state::SqueezedVacuum{{0.3, 1.0}}};
  for (const auto& spec : specs) {
    const auto back = state_from_json(state_to_json(spec));
    EXPECT_EQ(describe(back), describe(spec));
  }
  EXPECT_EQ(describe(state_from_json(json{{"type", "vacuum"}})), describe(StateSpec{state::Fock{0}}));
}

TEST(convergence, fock_sum_reports_failure) {
  EXPECT_THROW(t_operator_fock_sum(4.0, 0.9, 4), ConvergenceError);
}

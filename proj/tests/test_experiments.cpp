#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "mps/experiments.hpp"
#include "oracles.hpp"

using namespace mps;

TEST_CASE("rate computation: conventions, guards, and invariances") {
  // a factor-4 error drop across a resolution doubling is second order
  auto r = compute_rates({1e-2, 2.5e-3}, {100.0, 200.0}, rate_convention::grid_points);
  REQUIRE(r.size() == 2);
  CHECK(std::isnan(r[0]));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));

  // equal errors have rate zero; zero errors leave the rate undefined
  CHECK(compute_rates({1e-3, 1e-3}, {100.0, 200.0}, rate_convention::grid_points)[1] == 0.0);
  auto rz = compute_rates({1e-3, 0.0, 1e-5}, {100.0, 200.0, 400.0}, rate_convention::grid_points);
  CHECK(std::isnan(rz[1]));
  CHECK(std::isnan(rz[2]));
  for (double v : rz) CHECK(!std::isinf(v));

  // intervals convention divides by the (N-1) ratio
  auto ri = compute_rates({1e-2, 2.5e-3}, {101.0, 201.0}, rate_convention::intervals);
  CHECK(ri[1] == doctest::Approx(2.0).epsilon(1e-12));

  // level-gap normalization for the halving convention
  auto rh = compute_rates({1e-2, 2.5e-3}, {0.25, 0.125}, rate_convention::h_halving);
  CHECK(rh[1] == doctest::Approx(2.0).epsilon(1e-12));
  auto rh2 = compute_rates({1e-2, 6.25e-4}, {0.25, 0.0625}, rate_convention::h_halving);
  CHECK(rh2[1] == doctest::Approx(2.0).epsilon(1e-12));

  // scale invariance is exact
  std::vector<double> e{3.7e-1, 5.1e-2, 6.9e-3};
  std::vector<double> res{100.0, 200.0, 400.0};
  auto a = compute_rates(e, res, rate_convention::grid_points);
  for (double& v : e) v *= 1e6;
  auto b = compute_rates(e, res, rate_convention::grid_points);
  CHECK(a[1] == b[1]);
  CHECK(a[2] == b[2]);

  CHECK_THROWS_AS(compute_rates({1e-2}, {100.0}, rate_convention::grid_points),
                  dimension_error);
  CHECK_THROWS_AS(compute_rates({1e-2, 1e-3}, {100.0}, rate_convention::grid_points),
                  dimension_error);
}

TEST_CASE("rate computation reproduces a published rate column from its errors") {
  std::vector<double> log10e{-0.94, -1.93, -3.11, -4.31, -5.51};
  std::vector<double> errors;
  for (double le : log10e) errors.push_back(std::pow(10.0, le));
  auto rates = compute_rates(errors, {100.0, 200.0, 400.0, 800.0, 1600.0},
                             rate_convention::grid_points);
  const double expect[] = {3.32, 3.93, 3.99, 4.00};
  for (int i = 1; i <= 4; ++i)
    CHECK(rates[static_cast<size_t>(i)] == doctest::Approx(expect[i - 1]).epsilon(0.02));
}

TEST_CASE("window study: single cell reproduces the published order") {
  window_study_report rep =
      run_window_study({std::numbers::pi}, {4}, {0.5}, 1);
  REQUIRE(rep.cells.size() == 1);
  const window_cell& cell = rep.cells[0];
  CHECK(cell.q == 4);
  CHECK(cell.conjectured_p == doctest::Approx(1.0).epsilon(1e-12));  // q - 1 - q w
  CHECK(cell.observed_p == doctest::Approx(1.9).epsilon(0.3 / 1.9));
  CHECK(cell.observed_p >= cell.conjectured_p - 0.1);
  REQUIRE(cell.h.size() == 7);  // h = 2^-4 .. 2^-10
  CHECK(cell.h.front() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(cell.h.back() == doctest::Approx(1.0 / 1024.0).epsilon(1e-15));
  CHECK(std::isnan(cell.p_h[0]));
  for (double e : cell.error) CHECK(e >= 0.0);
}

TEST_CASE("window study parallel run matches the sequential run") {
  std::vector<double> ks{std::numbers::pi, 0.75 * std::numbers::pi};
  window_study_report seq = run_window_study(ks, {4, 6}, {0.25, 0.5}, 1);
  window_study_report par = run_window_study(ks, {4, 6}, {0.25, 0.5}, 4);
  REQUIRE(seq.cells.size() == par.cells.size());
  for (size_t i = 0; i < seq.cells.size(); ++i) {
    CHECK(seq.cells[i].observed_p == par.cells[i].observed_p);
    CHECK(seq.cells[i].error == par.cells[i].error);
  }
}

TEST_CASE("advection ladder: small-grid anchor values and metadata") {
  ladder_options opt;
  convergence_report rep = run_advection_ladder(2, {100, 200, 400}, opt);
  CHECK(rep.order == 2);
  CHECK(rep.q == 6);  // 2p + 2
  CHECK(rep.k_star == doctest::Approx(1.8954942670339809).epsilon(1e-10));
  CHECK(!rep.trajectory_id.empty());
  REQUIRE(rep.errors.size() == 3);
  CHECK(std::log10(rep.errors[0]) == doctest::Approx(-0.30).epsilon(0.5));
  CHECK(std::log10(rep.errors[1]) == doctest::Approx(-0.65).epsilon(0.23));
  CHECK(std::log10(rep.errors[2]) == doctest::Approx(-1.25).epsilon(0.12));
  CHECK(rep.rates[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("advection ladder is deterministic") {
  ladder_options opt;
  convergence_report a = run_advection_ladder(2, {64, 128}, opt);
  convergence_report b = run_advection_ladder(2, {64, 128}, opt);
  CHECK(a.errors == b.errors);
}

TEST_CASE("advection ladder rates are insensitive to doubling the window prefactor") {
  ladder_options narrow, wide;
  wide.cl = 8.0;
  convergence_report a = run_advection_ladder(4, {100, 200, 400}, narrow);
  convergence_report b = run_advection_ladder(4, {100, 200, 400}, wide);
  for (size_t i = 1; i < a.rates.size(); ++i)
    CHECK(std::abs(a.rates[i] - b.rates[i]) < 0.1);
}

TEST_CASE("advection ladder input validation") {
  CHECK_THROWS_AS(run_advection_ladder(4, {200, 100}, {}), dimension_error);
  CHECK_THROWS_AS(run_advection_ladder(4, {100}, {}), dimension_error);
}

TEST_CASE("2D ladder with a silent source reports zero errors") {
  ladder_options opt;
  opt.windowed = false;
  opt.g_override = [](double) { return 0.0; };
  convergence_report rep = run_wave2d_ladder(4, {11, 21}, 41, opt);
  for (double e : rep.errors) CHECK(e == 0.0);
  for (double r : rep.rates) CHECK(std::isnan(r));
  CHECK(rep.max_boundary_level == 0.0);
}

TEST_CASE("2D ladder rejects grids that do not nest in the reference") {
  CHECK_THROWS_AS(run_wave2d_ladder(4, {101, 301}, 401, {}), config_error);
  CHECK_THROWS_AS(run_wave2d_ladder(4, {101, 201}, 201, {}), config_error);
}

TEST_CASE("convergence CSV: schema, rounding, and empty undefined rates") {
  convergence_report rep;
  rep.resolutions = {100, 200};
  rep.errors = {1.234567890e-2, 0.0};
  rep.rates = {std::nan(""), std::nan("")};
  std::ostringstream os;
  write_convergence_csv(rep, os);
  std::istringstream is(os.str());
  std::string header, row1, row2;
  std::getline(is, header);
  std::getline(is, row1);
  std::getline(is, row2);
  CHECK(header == "resolution,error,log10_error,rate");
  CHECK(row1 == "100,0.0123457,-1.90849,");  // 6 significant digits, rate empty
  CHECK(row2.substr(0, 6) == "200,0,");
}

TEST_CASE("window CSV schema") {
  window_cell cell;
  cell.k_star = std::numbers::pi;
  cell.q = 4;
  cell.w = 0.5;
  cell.h = {0.0625, 0.03125};
  cell.error = {1e-3, 2.5e-4};
  cell.p_h = {std::nan(""), 2.0};
  cell.observed_p = 2.0;
  cell.conjectured_p = 1.0;
  std::ostringstream os;
  write_window_csv({cell}, os);
  std::istringstream is(os.str());
  std::string header, row1;
  std::getline(is, header);
  std::getline(is, row1);
  CHECK(header == "q,w,h,error,p_h,observed_p,conjectured_p");
  CHECK(row1 == "4,0.5,0.0625,0.001,,2,1");
}

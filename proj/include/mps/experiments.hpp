#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mps/solvers.hpp"

namespace mps {

// Rate between consecutive ladder entries:
//   grid_points: log(e1/e2) / log(M2/M1)
//   intervals:   log(e1/e2) / log((N2-1)/(N1-1))
//   h_halving:   log2(e_{2h}/e_h), normalized by the level gap
enum class rate_convention { grid_points, intervals, h_halving };

// rates[0] is NaN; zero errors make the touching rates NaN (undefined, not
// infinite). For h_halving pass the h values as `resolutions`.
std::vector<double> compute_rates(const std::vector<double>& errors,
                                  const std::vector<double>& resolutions, rate_convention conv);

struct convergence_report {
  int order = 0;
  int q = 0;
  double k_star = 0.0;
  std::string trajectory_id;
  std::vector<int> resolutions;
  std::vector<double> errors;
  std::vector<double> rates;
  // 2D ladders: worst seam-strip field level across all solves (incl. the
  // reference); must stay below 1e-9 for the errors to be meaningful
  double max_boundary_level = 0.0;
};

// One (kstar, q, w) ladder of the windowing-error study.
struct window_cell {
  double k_star = 0.0;
  int q = 0;
  double w = 0.0;
  std::vector<double> h;
  std::vector<double> error;
  std::vector<double> p_h;  // NaN where undefined or excluded
  double observed_p = 0.0;
  double conjectured_p = 0.0;  // q - 1 - q*w
};

struct window_study_report {
  std::vector<window_cell> cells;
};

// Windowed-vs-global delta error ladder on L = 1, x0 = 1/2 + 1/29, for
// h in {2^-4 .. 2^-10}, with C_l fixed so that l = 1/2 at h = 1/16. Errors
// below 1e-9 are excluded before averaging p_h.
window_study_report run_window_study(const std::vector<double>& k_stars,
                                     const std::vector<int>& qs, const std::vector<double>& ws,
                                     int jobs = 1);

struct ladder_options {
  int q = 0;  // 0 = 2*order + 2
  double w = 0.5;
  double cl = 4.0;
  double vmax_factor = 1.0;
  double cfl = 0.0;  // 0 = experiment default
  bool windowed = true;
  int jobs = 1;
  // test hook: replaces the experiment's source time function when set
  std::function<double(double)> g_override;
};

// Advection test problem: c = 1, source moving at v0 = 0.5 from x = 1 on
// [0, 4], Gaussian g(t0 = 1, sigma = 0.15), error at t = 2 against the exact
// solution. Default cfl = 0.1.
convergence_report run_advection_ladder(int order, const std::vector<int>& Ms,
                                        const ladder_options& opt = {});

// 2D acoustic problem: unit-speed medium on a periodic square of side 2.5,
// source circling (1.25, 1.25) at speed 0.5, Gaussian g(t0 = 1, sigma = 1/25),
// error at t = 1 against a reference solved at N_ref (restriction by
// injection; every N-1 must divide N_ref-1). Default cfl = 0.1.
convergence_report run_wave2d_ladder(int order, const std::vector<int>& Ns, int N_ref,
                                     const ladder_options& opt = {});

// 1D acoustic demo: source at x0(t) = 1.6 + 0.3t on [0, 4], Gaussian
// g(t0 = 2, sigma = 1/5), global (unwindowed) source with q = 4. The pressure
// snapshot and its spectral split are taken at t = 2 (peak radiation). While
// the source is radiating the field carries a kink at x0(t), so bulk
// self-convergence is measured at t = 3, after the source has died off.
struct wave1d_demo_result {
  double k_star = 0.0;
  // pressure spectral energy above the cutoff over total, at the snapshot
  double high_mode_energy_fraction = 0.0;
  // self-convergence at t = 3: errors at M and 2M against the 4M solution
  // restricted by injection, plus the implied order
  double error_coarse = 0.0;
  double error_mid = 0.0;
  double self_convergence_order = 0.0;
  solution_field field;  // the base-resolution snapshot at t = 2
};

wave1d_demo_result run_wave1d_demo(int M = 400, int order = 4, double cfl = 0.2);

// CSV emission, 6 significant digits; NaN rates become empty cells.
// Convergence schema: resolution,error,log10_error,rate.
// Window-study schema: q,w,h,error,p_h,observed_p,conjectured_p.
void write_convergence_csv(const convergence_report& report, std::ostream& os);
void write_window_csv(const std::vector<window_cell>& cells, std::ostream& os);

}  // namespace mps

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mps/experiments.hpp"
#include "mps/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
constexpr double pi = std::numbers::pi;

namespace {

std::string num(double v, const char* fmt = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// ---- SVG line plots (convenience output; CSV is canonical) ---------------

struct svg_series {
  std::string label;
  std::vector<double> x, y;
};

void write_svg(const fs::path& path, const std::vector<svg_series>& series,
               const std::string& x_label, const std::string& y_label) {
  const double W = 720, H = 480, mL = 70, mR = 20, mT = 24, mB = 48;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmin > xmax) { xmin = 0; xmax = 1; }
  if (ymin > ymax) { ymin = 0; ymax = 1; }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double v) { return mL + (v - xmin) / (xmax - xmin) * (W - mL - mR); };
  auto Y = [&](double v) { return H - mB - (v - ymin) / (ymax - ymin) * (H - mT - mB); };

  std::ofstream os(path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << mL << "\" y1=\"" << H - mB << "\" x2=\"" << W - mR << "\" y2=\""
     << H - mB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << mL << "\" y1=\"" << mT << "\" x2=\"" << mL << "\" y2=\"" << H - mB
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4, fy = ymin + (ymax - ymin) * i / 4;
    os << "<line x1=\"" << X(fx) << "\" y1=\"" << H - mB << "\" x2=\"" << X(fx) << "\" y2=\""
       << H - mB + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << X(fx) << "\" y=\"" << H - mB + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << num(fx, "%.4g") << "</text>\n";
    os << "<line x1=\"" << mL - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << mL << "\" y2=\""
       << Y(fy) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << mL - 8 << "\" y=\"" << Y(fy) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(fy, "%.4g") << "</text>\n";
  }
  os << "<text x=\"" << (mL + W - mR) / 2 << "\" y=\"" << H - 10
     << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (mT + H - mB) / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (mT + H - mB) / 2 << ")\">" << y_label << "</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[s % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) continue;
      os << num(X(series[s].x[i]), "%.2f") << ',' << num(Y(series[s].y[i]), "%.2f") << ' ';
    }
    os << "\"/>\n";
    if (!series[s].label.empty())
      os << "<text x=\"" << W - mR - 8 << "\" y=\"" << mT + 16 + 16 * s
         << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << colors[s % 6] << "\">"
         << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
}

// ---- run manifests --------------------------------------------------------

json environment_info() {
  return {{"compiler", __VERSION__}, {"fft", mps::fft_backend_version()}};
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const json& results) {
  json m{{"command", command},
         {"config", config},
         {"results", results},
         {"environment", environment_info()}};
  std::ofstream os(dir / "manifest.json");
  os << m.dump(2) << '\n';
}

fs::path prepare_out(std::string& out, const std::string& command) {
  if (out.empty()) out = "runs/" + command;
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_convergence_files(const fs::path& dir, const mps::convergence_report& rep) {
  {
    std::ofstream os(dir / "convergence.csv");
    mps::write_convergence_csv(rep, os);
  }
  svg_series s;
  s.label = "order " + std::to_string(rep.order);
  for (size_t i = 0; i < rep.errors.size(); ++i) {
    s.x.push_back(std::log10(static_cast<double>(rep.resolutions[i])));
    s.y.push_back(std::log10(rep.errors[i]));
  }
  write_svg(dir / "convergence.svg", {s}, "log10(resolution)", "log10(error)");
}

json report_json(const mps::convergence_report& rep) {
  return {{"order", rep.order},
          {"q", rep.q},
          {"k_star", rep.k_star},
          {"trajectory", rep.trajectory_id},
          {"resolutions", rep.resolutions},
          {"errors", rep.errors},
          {"rates", rep.rates}};
}

double demo_g_tail() { return mps::source_time_function::gaussian(0.2, 2.0)(0.0); }
double ladder_g_tail() { return mps::source_time_function::gaussian(0.15, 1.0)(0.0); }
double wave2d_g_tail() { return mps::source_time_function::gaussian(0.04, 0.75)(0.0); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-consistent moving point sources for finite-difference wave solvers"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file with one section per subcommand");
  app.allow_config_extras(false);

  // ---- kstar ----
  auto* cmd_kstar = app.add_subcommand("kstar", "Cutoff wavenumber for an operator order");
  int ks_order = 4;
  double ks_ratio = 0.5, ks_gamma = 1.0;
  std::string ks_out;
  cmd_kstar->add_option("-p,--order", ks_order, "FD order (2, 4, 6)");
  cmd_kstar->add_option("--ratio", ks_ratio, "v_max / c");
  cmd_kstar->add_option("--vmax-factor", ks_gamma, "safety factor on v_max");
  cmd_kstar->add_option("--out", ks_out, "output directory");
  cmd_kstar->callback([&] {
    mps::fd_operator op(ks_order);
    double kstar = mps::find_k_star(op, ks_ratio * ks_gamma);
    std::cout << "kstar = " << num(kstar, "%.12g") << " (order " << ks_order << ", ratio "
              << num(ks_ratio * ks_gamma) << ")\n";
    fs::path dir = prepare_out(ks_out, "kstar");
    write_manifest(dir, "kstar",
                   {{"order", ks_order}, {"ratio", ks_ratio}, {"vmax_factor", ks_gamma}},
                   {{"k_star", kstar}});
  });

  // ---- shape ----
  auto* cmd_shape = app.add_subcommand("shape", "Tabulate the spectral shape F on [0, kstar]");
  int sh_q = 0, sh_order = 0, sh_samples = 512;
  double sh_kstar = pi, sh_ratio = -1.0, sh_gamma = 1.0;
  std::string sh_out;
  cmd_shape->add_option("--q", sh_q, "conditions per end (0 = derive 2p+2 from --order)");
  cmd_shape->add_option("-p,--order", sh_order, "FD order; sets q = 2p+2 when --q omitted");
  cmd_shape->add_option("--kstar", sh_kstar, "cutoff wavenumber");
  cmd_shape->add_option("--ratio", sh_ratio, "v_max / c; with --order, overrides --kstar");
  cmd_shape->add_option("--vmax-factor", sh_gamma, "safety factor on v_max");
  cmd_shape->add_option("--samples", sh_samples, "rows in F.csv");
  cmd_shape->add_option("--out", sh_out, "output directory");
  cmd_shape->callback([&] {
    int q = sh_q > 0 ? sh_q : (sh_order > 0 ? 2 * sh_order + 2 : 0);
    if (q <= 0) throw mps::config_error("shape: give --q or --order");
    if (sh_samples < 2) throw mps::config_error("shape: need at least 2 samples");
    double kstar = sh_kstar;
    if (sh_ratio >= 0.0) {
      if (sh_order <= 0) throw mps::config_error("shape: --ratio needs --order");
      kstar = mps::find_k_star(mps::fd_operator(sh_order), sh_ratio * sh_gamma);
    }
    mps::spectral_shape shape = mps::build_shape(q, q, kstar);
    fs::path dir = prepare_out(sh_out, "shape");
    svg_series s;
    s.label = "q = " + std::to_string(q);
    {
      std::ofstream os(dir / "F.csv");
      os << "kappa,F\n";
      for (int i = 0; i <= sh_samples; ++i) {
        double kappa = kstar * i / sh_samples;
        double F = shape.eval(kappa);
        os << num(kappa, "%.12g") << ',' << num(F, "%.12g") << '\n';
        s.x.push_back(kappa);
        s.y.push_back(F);
      }
    }
    write_svg(dir / "F.svg", {s}, "kh", "F");
    write_manifest(dir, "shape",
                   {{"q", q}, {"k_star", kstar}, {"samples", sh_samples}},
                   {{"F_at_0", shape.eval(0.0)}, {"F_at_kstar", shape.eval(kstar)}});
  });

  // ---- delta ----
  auto* cmd_delta = app.add_subcommand("delta", "Assemble a source vector on a periodic grid");
  int dl_M = 100, dl_q = 14, dl_order = 0;
  double dl_L = 1.0, dl_kstar = pi, dl_ratio = -1.0, dl_gamma = 1.0, dl_x0 = 0.5;
  double dl_w = 0.5, dl_cl = 4.0;
  bool dl_windowed = false;
  std::string dl_out;
  cmd_delta->add_option("--M", dl_M, "grid points");
  cmd_delta->add_option("--L", dl_L, "domain length");
  cmd_delta->add_option("--q", dl_q, "conditions per end");
  cmd_delta->add_option("-p,--order", dl_order, "FD order (used with --ratio)");
  cmd_delta->add_option("--kstar", dl_kstar, "cutoff wavenumber");
  cmd_delta->add_option("--ratio", dl_ratio, "v_max / c; with --order, overrides --kstar");
  cmd_delta->add_option("--vmax-factor", dl_gamma, "safety factor on v_max");
  cmd_delta->add_option("--x0", dl_x0, "source position");
  cmd_delta->add_flag("--windowed", dl_windowed, "truncate with the rectangular window");
  cmd_delta->add_option("--w", dl_w, "window width exponent");
  cmd_delta->add_option("--cl", dl_cl, "window width prefactor");
  cmd_delta->add_option("--out", dl_out, "output directory");
  cmd_delta->callback([&] {
    double kstar = dl_kstar;
    if (dl_ratio >= 0.0) {
      if (dl_order <= 0) throw mps::config_error("delta: --ratio needs --order");
      kstar = mps::find_k_star(mps::fd_operator(dl_order), dl_ratio * dl_gamma);
    }
    mps::periodic_grid grid{dl_L, dl_M};
    auto shape = std::make_shared<mps::spectral_shape>(mps::build_shape(dl_q, dl_q, kstar));
    mps::delta_vector delta = mps::build_delta(grid, shape, dl_x0);
    if (dl_windowed)
      delta = mps::apply_window(delta, grid, dl_x0, mps::window_spec(dl_w, dl_cl));
    fs::path dir = prepare_out(dl_out, "delta");
    svg_series s;
    double mass = 0.0;
    {
      std::ofstream os(dir / "delta.csv");
      os << "x,value\n";
      for (int j = 0; j < grid.M; ++j) {
        os << num(grid.point(j), "%.17g") << ',' << num(delta.values[j], "%.17g") << '\n';
        s.x.push_back(grid.point(j));
        s.y.push_back(delta.values[j]);
        mass += delta.values[j] * grid.h;
      }
    }
    write_svg(dir / "delta.svg", {s}, "x", "delta");
    write_manifest(dir, "delta",
                   {{"M", dl_M},
                    {"L", dl_L},
                    {"q", dl_q},
                    {"k_star", kstar},
                    {"x0", dl_x0},
                    {"windowed", dl_windowed},
                    {"w", dl_w},
                    {"cl", dl_cl}},
                   {{"mass", mass}, {"nonzero_count", delta.nonzero_count}});
  });

  // ---- window-study ----
  auto* cmd_ws = app.add_subcommand("window-study", "Windowing error rates over (kstar, q, w)");
  std::vector<double> ws_kstars{pi, 0.75 * pi};
  std::vector<int> ws_qs{4, 6, 8};
  std::vector<double> ws_ws{0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75};
  int ws_jobs = 1;
  std::string ws_out;
  cmd_ws->add_option("--kstars", ws_kstars, "cutoff wavenumbers");
  cmd_ws->add_option("--qs", ws_qs, "q values");
  cmd_ws->add_option("--ws", ws_ws, "window width exponents");
  cmd_ws->add_option("--jobs", ws_jobs, "worker threads");
  cmd_ws->add_option("--out", ws_out, "output directory");
  cmd_ws->callback([&] {
    mps::window_study_report report = mps::run_window_study(ws_kstars, ws_qs, ws_ws, ws_jobs);
    fs::path dir = prepare_out(ws_out, "window-study");
    json summary = json::array();
    for (size_t i = 0; i < ws_kstars.size(); ++i) {
      std::vector<mps::window_cell> cells;
      for (const auto& cell : report.cells)
        if (cell.k_star == ws_kstars[i]) cells.push_back(cell);
      std::string name = "window-" + std::to_string(i + 1) + ".csv";
      std::ofstream os(dir / name);
      mps::write_window_csv(cells, os);
      for (const auto& cell : cells)
        summary.push_back({{"k_star", cell.k_star},
                           {"q", cell.q},
                           {"w", cell.w},
                           {"observed_p", cell.observed_p},
                           {"conjectured_p", cell.conjectured_p},
                           {"file", name}});
    }
    write_manifest(dir, "window-study",
                   {{"kstars", ws_kstars}, {"qs", ws_qs}, {"ws", ws_ws}, {"jobs", ws_jobs}},
                   summary);
    std::cout << "window-study: " << report.cells.size() << " cells -> " << dir.string() << '\n';
  });

  // ---- converge-advect ----
  auto* cmd_adv = app.add_subcommand("converge-advect", "1D advection convergence ladder");
  int adv_order = 4, adv_jobs = 1;
  std::vector<int> adv_res{100, 200, 400, 800, 1600};
  mps::ladder_options adv_opt;
  bool adv_global = false;
  std::string adv_out;
  cmd_adv->add_option("-p,--order", adv_order, "FD order (2, 4, 6)");
  cmd_adv->add_option("--resolutions", adv_res, "grid sizes M");
  cmd_adv->add_option("--q", adv_opt.q, "conditions per end (0 = 2p+2)");
  cmd_adv->add_option("--w", adv_opt.w, "window width exponent");
  cmd_adv->add_option("--cl", adv_opt.cl, "window width prefactor");
  cmd_adv->add_option("--vmax-factor", adv_opt.vmax_factor, "safety factor on v_max");
  cmd_adv->add_option("--cfl", adv_opt.cfl, "time step over h (0 = default 0.1)");
  cmd_adv->add_flag("--global", adv_global, "disable the window (global source)");
  cmd_adv->add_option("--jobs", adv_jobs, "worker threads");
  cmd_adv->add_option("--out", adv_out, "output directory");
  cmd_adv->callback([&] {
    adv_opt.windowed = !adv_global;
    adv_opt.jobs = adv_jobs;
    mps::convergence_report rep = mps::run_advection_ladder(adv_order, adv_res, adv_opt);
    fs::path dir = prepare_out(adv_out, "converge-advect");
    write_convergence_files(dir, rep);
    json cfg{{"order", adv_order},     {"resolutions", adv_res},
             {"q", rep.q},             {"w", adv_opt.w},
             {"cl", adv_opt.cl},       {"vmax_factor", adv_opt.vmax_factor},
             {"cfl", adv_opt.cfl > 0 ? adv_opt.cfl : 0.1},
             {"windowed", adv_opt.windowed}};
    json res = report_json(rep);
    res["g_tail"] = ladder_g_tail();
    write_manifest(dir, "converge-advect", cfg, res);
    std::cout << "converge-advect: finest rate " << num(rep.rates.back()) << " -> "
              << dir.string() << '\n';
  });

  // ---- converge-wave2d ----
  auto* cmd_w2 = app.add_subcommand("converge-wave2d", "2D acoustic convergence ladder");
  int w2_order = 4, w2_jobs = 1, w2_ref = 1601;
  std::vector<int> w2_res{101, 201, 401, 801};
  mps::ladder_options w2_opt;
  bool w2_full = false;
  std::string w2_out;
  cmd_w2->add_option("-p,--order", w2_order, "FD order (2, 4, 6)");
  auto* w2_res_opt = cmd_w2->add_option("--resolutions", w2_res, "grid sizes N (per axis)");
  auto* w2_ref_opt = cmd_w2->add_option("--ref", w2_ref, "reference grid size N");
  cmd_w2->add_option("--q", w2_opt.q, "conditions per end (0 = 2p+2)");
  cmd_w2->add_option("--w", w2_opt.w, "window width exponent");
  cmd_w2->add_option("--cl", w2_opt.cl, "window width prefactor");
  cmd_w2->add_option("--vmax-factor", w2_opt.vmax_factor, "safety factor on v_max");
  cmd_w2->add_option("--cfl", w2_opt.cfl, "time step over h (0 = default 0.1)");
  cmd_w2->add_flag("--full", w2_full, "full-scale ladder (N up to 1601, reference 3201)");
  cmd_w2->add_option("--jobs", w2_jobs, "worker threads");
  cmd_w2->add_option("--out", w2_out, "output directory");
  cmd_w2->callback([&] {
    if (w2_full) {
      if (w2_res_opt->count() == 0) w2_res = {101, 201, 401, 801, 1601};
      if (w2_ref_opt->count() == 0) w2_ref = 3201;
    }
    w2_opt.jobs = w2_jobs;
    mps::convergence_report rep = mps::run_wave2d_ladder(w2_order, w2_res, w2_ref, w2_opt);
    fs::path dir = prepare_out(w2_out, "converge-wave2d");
    write_convergence_files(dir, rep);
    json cfg{{"order", w2_order}, {"resolutions", w2_res},
             {"ref", w2_ref},     {"q", rep.q},
             {"w", w2_opt.w},     {"cl", w2_opt.cl},
             {"vmax_factor", w2_opt.vmax_factor},
             {"cfl", w2_opt.cfl > 0 ? w2_opt.cfl : 0.1}};
    json res = report_json(rep);
    res["g_tail"] = wave2d_g_tail();
    res["max_boundary_level"] = rep.max_boundary_level;
    write_manifest(dir, "converge-wave2d", cfg, res);
    std::cout << "converge-wave2d: finest rate " << num(rep.rates.back()) << " -> "
              << dir.string() << '\n';
  });

  // ---- demo-wave1d ----
  auto* cmd_demo = app.add_subcommand("demo-wave1d", "1D acoustic demo with a moving source");
  int dm_M = 400, dm_order = 4;
  double dm_cfl = 0.2;
  std::string dm_out;
  cmd_demo->add_option("--M", dm_M, "grid points at the base resolution");
  cmd_demo->add_option("-p,--order", dm_order, "FD order (2, 4, 6)");
  cmd_demo->add_option("--cfl", dm_cfl, "time step over h");
  cmd_demo->add_option("--out", dm_out, "output directory");
  cmd_demo->callback([&] {
    mps::wave1d_demo_result demo = mps::run_wave1d_demo(dm_M, dm_order, dm_cfl);
    fs::path dir = prepare_out(dm_out, "demo-wave1d");
    mps::periodic_grid grid{4.0, dm_M};
    svg_series s;
    {
      std::ofstream os(dir / "theta.csv");
      os << "x,theta\n";
      for (int j = 0; j < grid.M; ++j) {
        os << num(grid.point(j), "%.12g") << ',' << num(demo.field.theta[j], "%.12g") << '\n';
        s.x.push_back(grid.point(j));
        s.y.push_back(demo.field.theta[j]);
      }
    }
    write_svg(dir / "theta.svg", {s}, "x", "theta");
    {
      mps::mode_map spec = mps::to_fourier(demo.field.theta, grid);
      std::ofstream os(dir / "spectrum.csv");
      os << "mode,kh,magnitude\n";
      for (int m = 0; m <= spec.mode_max(); ++m)
        os << m << ',' << num(grid.wavenumber(m) * grid.h, "%.9g") << ','
           << num(std::abs(spec.at(m)), "%.9g") << '\n';
    }
    write_manifest(dir, "demo-wave1d",
                   {{"M", dm_M}, {"order", dm_order}, {"cfl", dm_cfl}},
                   {{"k_star", demo.k_star},
                    {"high_mode_energy_fraction", demo.high_mode_energy_fraction},
                    {"error_coarse", demo.error_coarse},
                    {"error_mid", demo.error_mid},
                    {"self_convergence_order", demo.self_convergence_order},
                    {"g_tail", demo_g_tail()}});
    std::cout << "demo-wave1d: high-mode energy fraction "
              << num(demo.high_mode_energy_fraction, "%.3g") << ", self-convergence order "
              << num(demo.self_convergence_order) << " -> " << dir.string() << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const mps::dimension_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mps::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mps::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

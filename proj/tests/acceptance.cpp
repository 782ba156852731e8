// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"
#include "uio/cli.hpp"
#include "uio/errors.hpp"
#include "uio/lqr.hpp"
#include "uio/model_io.hpp"
#include "uio/scenarios.hpp"

using namespace uio;
using testing::max_abs;
using testing::rows;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

void criterion(const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
  try {
    const auto [ok, detail] = f();
    report(name, ok, detail);
  } catch (const std::exception& ex) {
    report(name, false, std::string("exception: ") + ex.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Reference values, four significant digits in units of 1e3.
const Matrix kQuarterCarA1 = rows({{-0.0533, -0.0026, 0.8450, 0.0031},
                                   {-0.1067, -0.0069, 0.8983, 0.0064},
                                   {-0.0533, -0.0036, 0.8450, 0.0041},
                                   {0.2133, 0.0131, -2.5883, -0.0136}});
const Matrix kQuarterCarK1 = rows({{-0.0493, -0.0026, 0.8450, 0.0031},
                                   {-0.1067, -0.0029, 0.8983, 0.0064},
                                   {-0.0533, -0.0036, 0.8490, 0.0041},
                                   {0.2133, 0.0131, -2.5883, -0.0096}});
const Matrix kQuarterCarK = rows({{-0.0503, -0.0036, 0.8440, 0.0021},
                                  {-0.1077, -0.0039, 0.8973, 0.0054},
                                  {-0.0543, -0.0046, 0.8480, 0.0031},
                                  {0.2123, 0.0121, -2.5893, -0.0106}});

}  // namespace

int main() {
  criterion("example1 decoupling matrices", [] {
    const Scenario s = builtin_scenario("example1");
    const auto t0 = std::chrono::steady_clock::now();
    const Decoupling d = compute_decoupling(s.system);
    const double elapsed = seconds_since(t0);
    const double err = std::max({max_abs(d.H - rows({{1, 0}, {0, 0}, {0, 0}})),
                                 max_abs(d.T - rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 1}})),
                                 max_abs(d.A1 - rows({{0, 0, 0}, {-1, 0, 0}, {0, -1, -1}}))});
    return std::pair{err <= 1e-9 && elapsed < 1e-3,
                     "max err " + fmt(err) + ", runtime " + fmt(elapsed * 1e3) + " ms"};
  });

  criterion("example2 decoupling and full-measurement gains", [] {
    const Scenario s = builtin_scenario("example2");
    const Decoupling d = compute_decoupling(s.system);
    const DesignResult dr = design_scenario(s);
    const double h_err = max_abs(d.H - 0.25 * Matrix::Ones(4, 4));
    const double a1_raw = max_abs(d.A1 - 1e3 * kQuarterCarA1);
    const double k1_raw = max_abs(dr.gains.K1 - 1e3 * kQuarterCarK1);
    const double k_raw = max_abs(dr.gains.K - 1e3 * kQuarterCarK);
    const double kk = max_abs(dr.gains.K - dr.gains.K1 + Matrix::Ones(4, 4));
    const bool ok = h_err <= 1e-12 && a1_raw <= 5e-2 && k1_raw <= 5e-2 && k_raw <= 5e-2 &&
                    kk <= 1e-12;
    return std::pair{ok, "H " + fmt(h_err) + ", A1 " + fmt(a1_raw) + ", k1 " + fmt(k1_raw) +
                             ", k " + fmt(k_raw) + ", k-k1+1 " + fmt(kk)};
  });

  criterion("example3 decoupling matrices", [] {
    const Scenario s = builtin_scenario("example3");
    const Decoupling d = compute_decoupling(s.system);
    Matrix h = Matrix::Zero(4, 4);
    h(3, 3) = 1.0;
    Matrix t = Matrix::Identity(4, 4);
    t(3, 3) = 0.0;
    Matrix a1 = s.system.A();
    a1.row(3).setZero();
    const double err = std::max({max_abs(d.H - h), max_abs(d.T - t), max_abs(d.A1 - a1)});
    const int r = numlin::rank(numlin::obsv_matrix(d.A1, s.system.C()));
    return std::pair{err <= 1e-9 && r == 4,
                     "max err " + fmt(err) + ", rank obsv " + std::to_string(r)};
  });

  criterion("pole placement", [] {
    double worst = 0.0;
    for (const auto& n : builtin_scenario_names()) {
      const Scenario s = builtin_scenario(n);
      const DesignResult dr = design_scenario(s);
      ComplexList want;
      if (const auto* p = std::get_if<ComplexList>(&s.placement)) {
        want = *p;
      } else {
        want = numlin::eigvals(std::get<Matrix>(s.placement));
      }
      worst = std::max(worst, numlin::spectrum_distance(numlin::eigvals(dr.gains.F), want));
    }
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> pole(-8.0, -0.5);
    int placed = 0;
    while (placed < 100) {
      const int n = 1 + placed % 6;
      const int m = 1 + placed % std::min(3, n);
      const Matrix a = testing::random_matrix(rng, n, n, 2.0);
      const Matrix c = testing::random_matrix(rng, m, n);
      if (numlin::rank(numlin::obsv_matrix(a, c)) < n) continue;
      ComplexList poles;
      for (int i = 0; i < n; ++i) poles.emplace_back(pole(rng), 0.0);
      const Matrix k1 = place_poles(a, c, PoleSet(poles));
      worst = std::max(worst, numlin::spectrum_distance(numlin::eigvals(a - k1 * c), poles));
      ++placed;
    }
    return std::pair{worst <= 1e-6, "3 scenarios + 100 random pairs, worst " + fmt(worst)};
  });

  criterion("decoupling property", [] {
    double pair_worst = 0.0, oracle_worst = 0.0, slowest = 0.0;
    for (const auto& n : builtin_scenario_names()) {
      const Scenario s = builtin_scenario(n);
      const DesignResult dr = design_scenario(s);
      const auto t0 = std::chrono::steady_clock::now();
      const Trajectory step = simulate_scenario(s, Signal::step(1.0, 5.0));
      slowest = std::max(slowest, seconds_since(t0));
      const Trajectory sine = simulate_scenario(s, Signal::sine(1.0, 1.0));
      const Trajectory zero = simulate_scenario(s, Signal::zero());
      pair_worst = std::max({pair_worst, max_abs(step.e - sine.e), max_abs(step.e - zero.e),
                             max_abs(sine.e - zero.e)});
      const Vector e0 = step.e.row(0).transpose();
      for (Eigen::Index k = 0; k < step.times.size(); k += 100) {
        const Matrix ft = dr.gains.F * step.times(k);
        const Vector want = ft.exp() * e0;
        oracle_worst = std::max(oracle_worst,
                                max_abs(step.e.row(k).transpose() - want));
      }
    }
    return std::pair{pair_worst <= 1e-6 && oracle_worst <= 1e-6 && slowest < 5.0,
                     "pairwise " + fmt(pair_worst) + ", vs exp(Ft)e0 " + fmt(oracle_worst) +
                         ", slowest run " + fmt(slowest) + " s"};
  });

  criterion("convergence claims", [] {
    const double t1 = convergence_time(simulate_scenario(builtin_scenario("example1")), 0.01);
    const double t2 = convergence_time(simulate_scenario(builtin_scenario("example2")), 0.01);
    return std::pair{t1 <= 5.0 && t2 <= 1.5,
                     "example1 " + fmt(t1) + " s (<= 5), example2 " + fmt(t2) + " s (<= 1.5)"};
  });

  criterion("LQR", [] {
    const Scenario s3 = builtin_scenario("example3");
    const LqrProblem p3(s3.system.A(), s3.system.B(), s3.lqr->Q, s3.lqr->R);
    const double gain_err = max_abs(lqr_gain(p3) - rows({{-1.3620, 10.4615, 2.0165, 10.0419}}));
    double residual = care_residual(p3, solve_care(p3));
    const Scenario s2 = builtin_scenario("example2");
    const LqrProblem p2(s2.system.A(), s2.system.B(), s2.lqr->Q, s2.lqr->R);
    residual = std::max(residual, care_residual(p2, solve_care(p2)));
    const LqrProblem one(rows({{0}}), rows({{1}}), rows({{1}}), rows({{1}}));
    const LqrProblem root(rows({{-1}}), rows({{1}}), rows({{1}}), rows({{1}}));
    const double scalar_err =
        std::max(std::abs(solve_care(one)(0, 0) - 1.0),
                 std::abs(solve_care(root)(0, 0) - (std::sqrt(2.0) - 1.0)));
    residual = std::max({residual, care_residual(one, solve_care(one)),
                         care_residual(root, solve_care(root))});
    return std::pair{gain_err <= 1e-3 && residual <= 1e-8 && scalar_err <= 1e-10,
                     "gain " + fmt(gain_err) + ", residual " + fmt(residual) + ", scalar " +
                         fmt(scalar_err)};
  });

  criterion("existence logic", [] {
    const LinearSystem stable(rows({{-1, 0}, {0, -7}}), Matrix(2, 0), rows({{1, 0}}),
                              rows({{1}, {0}}));
    const DesignResult dr = design(stable, {{-3, 0}});
    const double eig_err = numlin::spectrum_distance(numlin::eigvals(dr.gains.F), {{-3, 0}, {-7, 0}});
    const bool verified = verify_gains(stable, dr.gains).passed;

    const LinearSystem unstable(rows({{-1, 0}, {0, 2}}), Matrix(2, 0), rows({{1, 0}}),
                                rows({{1}, {0}}));
    const ExistenceReport rep = check_existence(unstable);
    bool rejected = false;
    try {
      design(unstable, {{-3, 0}});
    } catch (const NoUioError&) {
      rejected = true;
    }
    bool reported = rep.unstable_unobservable_modes.size() == 1;
    if (reported) {
      const Complex mode = rep.unstable_unobservable_modes[0];
      reported = std::abs(mode - Complex(2, 0)) < 1e-9 &&
                 !testing::mode_observable(compute_decoupling(unstable).A1, unstable.C(), mode);
    }
    return std::pair{eig_err <= 1e-6 && verified && rejected && reported && !rep.uio_exists,
                     "detectable eig err " + fmt(eig_err) + ", unstable mode reported " +
                         (reported ? "yes" : "no") + ", rejected " + (rejected ? "yes" : "no")};
  });

  criterion("disturbance reconstruction", [] {
    const Trajectory tr = simulate_scenario(builtin_scenario("example1"));
    double dhat = 0.0, dtrue = 0.0;
    int count = 0;
    for (Eigen::Index k = 1; k + 1 < tr.times.size(); ++k) {
      if (tr.times(k) < 15.0) continue;
      dhat += tr.dhat(k, 0);
      dtrue += tr.d(k, 0);
      ++count;
    }
    const double err = std::abs(dhat - dtrue) / count;
    return std::pair{err <= 0.05, "mean |dhat - d| over [15, 20) s = " + fmt(err)};
  });

  criterion("CLI", [] {
    bool round_trip = true;
    for (const auto& n : builtin_scenario_names()) {
      const Scenario s = builtin_scenario(n);
      round_trip = round_trip && identical(s, parse_model_text(export_model(s).dump(2)));
    }
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "uio_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream out, err;
    const std::string model = (dir / "ex1.json").string();
    const int c_export = cli::cmd_scenario_export("example1", model, out, err);
    const int c_check = cli::cmd_check(model, out, err);
    {
      std::ofstream(dir / "none.json") << R"({"A": [[-1, 0], [0, -2]], "C": [[1, 0]],
        "E": [[0], [1]], "poles": [-1.5, -3], "sim": {"x0": [1, 1]}})";
      std::ofstream(dir / "bad.json") << R"({"A": [[-1, 0], [0)";
    }
    const int c_none = cli::cmd_check((dir / "none.json").string(), out, err);
    const int c_bad = cli::cmd_check((dir / "bad.json").string(), out, err);
    const int c_unwritable =
        cli::cmd_design(model, (dir / "missing" / "g.json").string(), out, err);
    const bool codes = c_export == cli::kOk && c_check == cli::kOk &&
                       c_none == cli::kNoObserver && c_bad == cli::kBadInput &&
                       c_unwritable == cli::kBadOutput;

    bool columns = true;
    for (const auto& n : builtin_scenario_names()) {
      Scenario s = builtin_scenario(n);
      s.cfg.t_end = 0.01;
      const Trajectory tr = simulate_scenario(s);
      std::ostringstream csv;
      write_csv(csv, tr);
      const std::string header = csv.str().substr(0, csv.str().find('\n'));
      const auto cols = std::count(header.begin(), header.end(), ',') + 1;
      const auto& sys = s.system;
      columns = columns && cols == 1 + 3 * sys.n() + sys.m() + sys.r() + 2 * sys.q();
    }
    fs::remove_all(dir);
    return std::pair{round_trip && codes && columns,
                     std::string("round trip ") + (round_trip ? "ok" : "mismatch") +
                         ", exit codes " + (codes ? "ok" : "wrong") + ", csv columns " +
                         (columns ? "ok" : "wrong")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures;
}

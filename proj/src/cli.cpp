#include "uio/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "uio/model_io.hpp"

namespace uio::cli {

namespace {

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << content;
  f.close();
  return static_cast<bool>(f);
}

std::optional<Scenario> load(const std::string& path, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot read model file '" << path << "'\n";
    return std::nullopt;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    return parse_model_text(buf.str(), default_dt());
  } catch (const ModelError& ex) {
    err << "error: " << path << ": " << ex.what() << '\n';
  } catch (const Error& ex) {
    err << "error: " << path << ": " << ex.what() << '\n';
  }
  return std::nullopt;
}

std::string format_modes(const ComplexList& modes) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) os << ", ";
    os << format_double(modes[i].real());
    if (modes[i].imag() != 0.0) {
      os << (modes[i].imag() > 0 ? "+" : "-") << format_double(std::abs(modes[i].imag()))
         << 'i';
    }
  }
  os << ']';
  return os.str();
}

}  // namespace

double default_dt() {
  if (const char* env = std::getenv("UIO_LAB_DT")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) return v;
  }
  return kDefaultDt;
}

int cmd_check(const std::string& model_path, std::ostream& out, std::ostream& err) {
  const auto sc = load(model_path, err);
  if (!sc) return kBadInput;
  ExistenceReport rep;
  try {
    rep = check_existence(sc->system);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kNoObserver;
  }
  out << "rank_CE: " << rep.rank_ce << '\n'
      << "rank_E: " << rep.rank_e << '\n'
      << "rank_condition_ok: " << std::boolalpha << rep.rank_condition_ok << '\n'
      << "detectable: " << rep.detectable << '\n'
      << "unstable_unobservable_modes: " << format_modes(rep.unstable_unobservable_modes)
      << '\n'
      << "uio_exists: " << rep.uio_exists << '\n';
  return rep.uio_exists ? kOk : kNoObserver;
}

int cmd_design(const std::string& model_path, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  const auto sc = load(model_path, err);
  if (!sc) return kBadInput;
  std::string text;
  bool passed = false;
  try {
    const DesignResult dr = design_scenario(*sc);
    const GainCheck chk = verify_gains(sc->system, dr.gains);
    passed = chk.passed;
    text = gains_to_json(dr, chk).dump(2) + "\n";
    out << "eig(F): " << format_modes(numlin::eigvals(dr.gains.F)) << '\n'
        << "constraints: " << (chk.passed ? "pass" : "FAIL") << '\n';
    if (dr.e_reduced) out << "note: E replaced by its full-column-rank factor E1\n";
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kNoObserver;
  }
  if (!write_file(out_path, text)) {
    err << "error: cannot write '" << out_path << "'\n";
    return kBadOutput;
  }
  return passed ? kOk : kNoObserver;
}

int cmd_simulate(const std::string& model_path, const std::string& csv_path,
                 const std::optional<std::string>& plot_path, bool strict,
                 std::ostream& out, std::ostream& err) {
  const auto sc = load(model_path, err);
  if (!sc) return kBadInput;
  Trajectory traj;
  try {
    traj = simulate_scenario(*sc);
    if (strict) {
      traj.dhat = estimate_disturbance(traj, sc->system, design_scenario(*sc).gains, true);
    }
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kNoObserver;
  }

  std::ostringstream csv;
  write_csv(csv, traj);
  if (!write_file(csv_path, csv.str())) {
    err << "error: cannot write '" << csv_path << "'\n";
    return kBadOutput;
  }
  if (plot_path) {
    std::ostringstream svg;
    write_svg_plot(svg, traj, sc->name);
    if (!write_file(*plot_path, svg.str())) {
      err << "error: cannot write '" << *plot_path << "'\n";
      return kBadOutput;
    }
  }

  const Eigen::Index last = traj.times.size() - 1;
  out << "samples: " << traj.times.size() << '\n'
      << "initial_error_norm: " << format_double(traj.e.row(0).norm()) << '\n'
      << "final_error_norm: " << format_double(traj.e.row(last).norm()) << '\n';
  if (traj.e.row(0).norm() > 0.0) {
    out << "convergence_time_1pct: " << format_double(convergence_time(traj, 0.01)) << '\n';
  } else {
    out << "convergence_time_1pct: 0\n";
  }
  return kOk;
}

int cmd_scenario_export(const std::string& name, const std::string& out_path,
                        std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = export_model(builtin_scenario(name)).dump(2) + "\n";
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kBadInput;
  }
  if (!write_file(out_path, text)) {
    err << "error: cannot write '" << out_path << "'\n";
    return kBadOutput;
  }
  out << "wrote " << name << " to " << out_path << '\n';
  return kOk;
}

}  // namespace uio::cli

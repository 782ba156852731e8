#include "uio/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

namespace uio {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ModelError(where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "number is not finite");
  return v;
}

Matrix matrix(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) fail(where, "matrix has no rows");
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rw, "expected a row array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rw, "ragged matrix: row has " + std::to_string(row.size()) +
                   " entries, expected " + std::to_string(cols));
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = number(row[static_cast<std::size_t>(k)],
                       rw + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

Vector vector(const json& j, const std::string& where, Eigen::Index n) {
  if (!j.is_array()) fail(where, "expected an array");
  if (static_cast<Eigen::Index>(j.size()) != n) {
    fail(where, "expected " + std::to_string(n) + " entries, got " +
                    std::to_string(j.size()));
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = number(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

ComplexList poles_from_json(const json& j) {
  if (!j.is_array()) fail("poles", "expected an array");
  ComplexList out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = "poles[" + std::to_string(i) + "]";
    const json& p = j[i];
    if (p.is_number()) {
      out.emplace_back(number(p, w), 0.0);
    } else if (p.is_array() && p.size() == 2) {
      out.emplace_back(number(p[0], w + "[0]"), number(p[1], w + "[1]"));
    } else {
      fail(w, "expected a number or a [re, im] pair");
    }
  }
  return out;
}

Vector z0_from_estimate(const LinearSystem& sys, const Vector& x0, const Vector& xhat0) {
  const Matrix e1 = numlin::full_rank_factorization(sys.E()).first;
  const LinearSystem reduced = sys.with_e(e1);
  Matrix h;
  try {
    h = compute_decoupling(reduced).H;
  } catch (const Error&) {
    // No decoupling exists; the least-squares H keeps z0 well defined.
    h = e1 * numlin::pinv(sys.C() * e1);
  }
  return xhat0 - h * sys.C() * x0;
}

void check_dims(const std::string& where, const Matrix& m, Eigen::Index rows,
                Eigen::Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << "expected " << rows << " x " << cols << ", got " << m.rows() << " x "
       << m.cols();
    fail(where, os.str());
  }
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json signal_to_json(const Signal& s) {
  json j;
  j["kind"] = std::string(to_string(s.kind));
  j["amplitude"] = s.amplitude;
  j["start_time"] = s.start_time;
  j["frequency"] = s.frequency;
  j["phase"] = s.phase;
  j["width"] = s.width;
  return j;
}

Signal signal_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  reject_unknown_keys(j, where,
                      {"kind", "amplitude", "start_time", "frequency", "phase", "width"});
  const json& kind = require(j, "kind", where);
  if (!kind.is_string()) fail(where + ".kind", "expected a string");
  Signal s;
  try {
    s.kind = signal_kind_from_string(kind.get<std::string>());
  } catch (const InputError& ex) {
    fail(where + ".kind", ex.what());
  }
  auto opt = [&](const char* key, double& field) {
    if (auto it = j.find(key); it != j.end()) field = number(*it, where + "." + key);
  };
  opt("amplitude", s.amplitude);
  opt("start_time", s.start_time);
  opt("frequency", s.frequency);
  opt("phase", s.phase);
  opt("width", s.width);
  try {
    s.validate();
  } catch (const InputError& ex) {
    fail(where, ex.what());
  }
  return s;
}

Scenario parse_model(const json& doc, double default_dt) {
  if (!doc.is_object()) fail("<root>", "expected a JSON object");
  reject_unknown_keys(doc, "", {"name", "A", "B", "C", "E", "poles", "Fdes", "lqr",
                                "sim", "signals"});
  std::string name = "model";
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) fail("name", "expected a string");
    name = it->get<std::string>();
  }

  const Matrix a = matrix(require(doc, "A", ""), "A");
  const Eigen::Index n = a.rows();
  check_dims("A", a, n, n);
  Matrix b(n, 0);
  if (auto it = doc.find("B"); it != doc.end()) {
    if (it->is_array() && it->empty()) {
      b = Matrix(n, 0);
    } else {
      b = matrix(*it, "B");
      if (b.rows() != n) check_dims("B", b, n, b.cols());
    }
  }
  const Matrix c = matrix(require(doc, "C", ""), "C");
  if (c.cols() != n) check_dims("C", c, c.rows(), n);
  const Matrix e = matrix(require(doc, "E", ""), "E");
  if (e.rows() != n) check_dims("E", e, n, e.cols());

  std::optional<LinearSystem> sys;
  try {
    sys.emplace(a, b, c, e);
  } catch (const InputError& ex) {
    fail("<system>", ex.what());
  }

  const bool has_poles = doc.contains("poles");
  const bool has_fdes = doc.contains("Fdes");
  if (has_poles == has_fdes) fail("<root>", "exactly one of 'poles' or 'Fdes' is required");
  Placement placement;
  if (has_poles) {
    placement = poles_from_json(doc["poles"]);
  } else {
    Matrix f = matrix(doc["Fdes"], "Fdes");
    check_dims("Fdes", f, n, n);
    placement = std::move(f);
  }

  std::optional<LqrWeights> lqr;
  if (auto it = doc.find("lqr"); it != doc.end()) {
    if (!it->is_object()) fail("lqr", "expected an object");
    reject_unknown_keys(*it, "lqr", {"Q", "R"});
    LqrWeights w{matrix(require(*it, "Q", "lqr"), "lqr.Q"),
                 matrix(require(*it, "R", "lqr"), "lqr.R")};
    check_dims("lqr.Q", w.Q, n, n);
    check_dims("lqr.R", w.R, b.cols(), b.cols());
    lqr = std::move(w);
  }

  SimConfig cfg;
  cfg.dt = default_dt;
  const json& simj = require(doc, "sim", "");
  if (!simj.is_object()) fail("sim", "expected an object");
  reject_unknown_keys(simj, "sim", {"t_end", "dt", "x0", "xhat0", "z0", "control_mode"});
  if (auto it = simj.find("t_end"); it != simj.end()) cfg.t_end = number(*it, "sim.t_end");
  if (auto it = simj.find("dt"); it != simj.end()) cfg.dt = number(*it, "sim.dt");
  cfg.x0 = vector(require(simj, "x0", "sim"), "sim.x0", n);
  if (simj.contains("xhat0") && simj.contains("z0")) {
    fail("sim", "give either xhat0 or z0, not both");
  }
  if (auto it = simj.find("z0"); it != simj.end()) {
    cfg.z0 = vector(*it, "sim.z0", n);
  } else {
    Vector xhat0 = Vector::Zero(n);
    if (auto jt = simj.find("xhat0"); jt != simj.end()) {
      xhat0 = vector(*jt, "sim.xhat0", n);
    }
    cfg.z0 = z0_from_estimate(*sys, cfg.x0, xhat0);
  }
  if (auto it = simj.find("control_mode"); it != simj.end()) {
    if (!it->is_string()) fail("sim.control_mode", "expected a string");
    try {
      cfg.control_mode = control_mode_from_string(it->get<std::string>());
    } catch (const InputError& ex) {
      fail("sim.control_mode", ex.what());
    }
  }
  try {
    cfg.validate(n);
  } catch (const InputError& ex) {
    fail("sim", ex.what());
  }
  if (cfg.control_mode == ControlMode::kEstimateFeedback && !lqr) {
    fail("sim.control_mode", "estimate_feedback requires an 'lqr' section");
  }

  Signal u_ref;
  Signal d_sig;
  if (auto it = doc.find("signals"); it != doc.end()) {
    if (!it->is_object()) fail("signals", "expected an object");
    reject_unknown_keys(*it, "signals", {"input", "disturbance"});
    if (auto jt = it->find("input"); jt != it->end()) {
      u_ref = signal_from_json(*jt, "signals.input");
    }
    if (auto jt = it->find("disturbance"); jt != it->end()) {
      d_sig = signal_from_json(*jt, "signals.disturbance");
    }
  }

  return Scenario{std::move(name), std::move(*sys), std::move(placement), std::move(lqr),
                  std::move(cfg), u_ref, d_sig};
}

Scenario parse_model_text(const std::string& text, double default_dt) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ModelError(std::string("parse error: ") + ex.what());
  }
  return parse_model(doc, default_dt);
}

json export_model(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["A"] = matrix_to_json(s.system.A());
  j["B"] = s.system.r() == 0 ? json::array() : matrix_to_json(s.system.B());
  j["C"] = matrix_to_json(s.system.C());
  j["E"] = matrix_to_json(s.system.E());
  if (const auto* poles = std::get_if<ComplexList>(&s.placement)) {
    json arr = json::array();
    for (const Complex& p : *poles) {
      if (p.imag() == 0.0) {
        arr.push_back(p.real());
      } else {
        arr.push_back(json::array({p.real(), p.imag()}));
      }
    }
    j["poles"] = std::move(arr);
  } else {
    j["Fdes"] = matrix_to_json(std::get<Matrix>(s.placement));
  }
  if (s.lqr) {
    j["lqr"] = {{"Q", matrix_to_json(s.lqr->Q)}, {"R", matrix_to_json(s.lqr->R)}};
  }
  auto vec = [](const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
  };
  j["sim"] = {{"t_end", s.cfg.t_end},
              {"dt", s.cfg.dt},
              {"x0", vec(s.cfg.x0)},
              {"z0", vec(s.cfg.z0)},
              {"control_mode", std::string(to_string(s.cfg.control_mode))}};
  j["signals"] = {{"input", signal_to_json(s.u_ref)},
                  {"disturbance", signal_to_json(s.d_sig)}};
  return j;
}

json gains_to_json(const DesignResult& dr, const GainCheck& chk) {
  const UioGains& g = dr.gains;
  json j;
  j["F"] = matrix_to_json(g.F);
  j["T"] = matrix_to_json(g.T);
  j["K"] = matrix_to_json(g.K);
  j["H"] = matrix_to_json(g.H);
  j["K1"] = matrix_to_json(g.K1);
  j["K2"] = matrix_to_json(g.K2);
  json eig = json::array();
  for (const Complex& v : numlin::eigvals(g.F)) eig.push_back(json::array({v.real(), v.imag()}));
  j["eig_F"] = std::move(eig);
  j["residuals"] = {{"decoupling", chk.decoupling},
                    {"T", chk.t_residual},
                    {"F", chk.f_residual},
                    {"K2", chk.k2_residual},
                    {"K", chk.k_residual},
                    {"spectral_abscissa", chk.spectral_abscissa},
                    {"tol", chk.tol},
                    {"passed", chk.passed}};
  j["observable_rank"] = dr.n1;
  j["e_reduced"] = dr.e_reduced;
  if (dr.e_reduced) j["E_used"] = matrix_to_json(dr.e_used);
  return j;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  auto header = [&os](const char* prefix, Eigen::Index count) {
    for (Eigen::Index i = 1; i <= count; ++i) os << ',' << prefix << i;
  };
  os << 't';
  header("x", traj.x.cols());
  header("xhat", traj.xhat.cols());
  header("e", traj.e.cols());
  header("y", traj.y.cols());
  header("u", traj.u.cols());
  header("d", traj.d.cols());
  header("dhat", traj.dhat.cols());
  os << '\n';
  std::string line;
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    line.clear();
    line += format_double(traj.times(k));
    for (const Matrix* series : {&traj.x, &traj.xhat, &traj.e, &traj.y, &traj.u,
                                 &traj.d, &traj.dhat}) {
      for (Eigen::Index i = 0; i < series->cols(); ++i) {
        line += ',';
        line += format_double((*series)(k, i));
      }
    }
    line += '\n';
    os << line;
  }
}

void write_svg_plot(std::ostream& os, const Trajectory& traj, const std::string& title) {
  const Eigen::Index samples = traj.times.size();
  const Eigen::Index n = traj.x.cols();
  const int width = 800;
  const int panel_h = 160;
  const int margin = 50;
  const int panels = static_cast<int>(n) + 1;
  const int height = margin + panels * (panel_h + margin);
  const Eigen::Index stride = std::max<Eigen::Index>(1, samples / 2000);
  const double t0 = samples ? traj.times(0) : 0.0;
  const double t1 = samples ? traj.times(samples - 1) : 1.0;
  const double tspan = t1 > t0 ? t1 - t0 : 1.0;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
     << title << "</text>\n";

  auto polyline = [&](const std::vector<double>& values, double lo, double hi, int top,
                      const char* style) {
    const double span = hi > lo ? hi - lo : 1.0;
    os << "<polyline fill=\"none\" " << style << " points=\"";
    std::size_t idx = 0;
    for (Eigen::Index k = 0; k < samples; k += stride, ++idx) {
      const double px = margin + (traj.times(k) - t0) / tspan * (width - 2 * margin);
      const double py = top + panel_h - (values[idx] - lo) / span * panel_h;
      os << format_double(std::round(px * 10) / 10) << ','
         << format_double(std::round(py * 10) / 10) << ' ';
    }
    os << "\"/>\n";
  };
  auto frame = [&](int top, const std::string& label, double lo, double hi) {
    os << "<rect x=\"" << margin << "\" y=\"" << top << "\" width=\"" << width - 2 * margin
       << "\" height=\"" << panel_h << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"" << top - 6 << "\">" << label << "</text>\n";
    os << "<text x=\"" << margin - 4 << "\" y=\"" << top + 10
       << "\" text-anchor=\"end\">" << format_double(hi) << "</text>\n";
    os << "<text x=\"" << margin - 4 << "\" y=\"" << top + panel_h
       << "\" text-anchor=\"end\">" << format_double(lo) << "</text>\n";
    os << "<text x=\"" << width - margin << "\" y=\"" << top + panel_h + 14
       << "\" text-anchor=\"end\">t = " << format_double(t1) << " s</text>\n";
  };
  auto sampled = [&](auto&& fn) {
    std::vector<double> out;
    for (Eigen::Index k = 0; k < samples; k += stride) out.push_back(fn(k));
    return out;
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    const int top = margin + static_cast<int>(i) * (panel_h + margin);
    const auto xs = sampled([&](Eigen::Index k) { return traj.x(k, i); });
    const auto xh = sampled([&](Eigen::Index k) { return traj.xhat(k, i); });
    double lo = 0.0, hi = 0.0;
    if (!xs.empty()) {
      lo = std::min(*std::min_element(xs.begin(), xs.end()),
                    *std::min_element(xh.begin(), xh.end()));
      hi = std::max(*std::max_element(xs.begin(), xs.end()),
                    *std::max_element(xh.begin(), xh.end()));
    }
    frame(top, "x" + std::to_string(i + 1) + " (solid) and estimate (dashed)", lo, hi);
    polyline(xs, lo, hi, top, "stroke=\"#1f77b4\" stroke-width=\"1.5\"");
    polyline(xh, lo, hi, top, "stroke=\"#d62728\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"");
  }
  const int top = margin + static_cast<int>(n) * (panel_h + margin);
  const auto loge = sampled([&](Eigen::Index k) {
    return std::log10(std::max(traj.e.row(k).norm(), 1e-16));
  });
  double lo = 0.0, hi = 0.0;
  if (!loge.empty()) {
    lo = *std::min_element(loge.begin(), loge.end());
    hi = *std::max_element(loge.begin(), loge.end());
  }
  frame(top, "log10 ||e||", lo, hi);
  polyline(loge, lo, hi, top, "stroke=\"#2ca02c\" stroke-width=\"1.5\"");
  os << "</svg>\n";
}

}  // namespace uio

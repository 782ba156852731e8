#include "uio/scenarios.hpp"

#include "uio/errors.hpp"

namespace uio {

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
  const auto r = static_cast<Eigen::Index>(values.size());
  const auto c = static_cast<Eigen::Index>(values.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : values) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Scenario example1() {
  const Matrix a = rows({{-1, 1, 0}, {-1, 0, 0}, {0, -1, -1}});
  const Matrix c = rows({{1, 0, 0}, {0, 0, 1}});
  const Matrix e = rows({{-1}, {0}, {0}});
  SimConfig cfg;
  cfg.x0 = vec({100, -100, 1});
  cfg.z0 = Vector::Zero(3);
  cfg.control_mode = ControlMode::kOpenLoop;
  return Scenario{"example1",
                  LinearSystem(a, Matrix(3, 0), c, e),
                  ComplexList{{-2, 0}, {-10, 0}, {-5, 0}},
                  std::nullopt,
                  cfg,
                  Signal::zero(),
                  Signal::step(1.0, 10.0)};
}

Scenario example2() {
  const double mb = 300, mw = 60, bs = 1000, ks = 16000, kt = 190000;
  Matrix a(4, 4);
  a << 0, 1, 0, 0,
       -ks / mb, -bs / mb, ks / mb, bs / mb,
       0, 0, 0, 1,
       ks / mw, bs / mw, (-ks - kt) / mw, -bs / mw;
  Matrix b(4, 2);
  b << 0, 0,
       0, 10000 / mb,
       0, 0,
       kt / mw, -10000 / mw;
  SimConfig cfg;
  cfg.x0 = vec({-1, 10, 3, 5});
  cfg.z0 = Vector::Zero(4);
  cfg.control_mode = ControlMode::kEstimateFeedback;
  Matrix q = Vector(vec({0.25, 4, 1, 4})).asDiagonal();
  return Scenario{"example2",
                  LinearSystem(a, b, Matrix::Identity(4, 4), Matrix::Ones(4, 1)),
                  Matrix(-4.0 * Matrix::Identity(4, 4)),
                  LqrWeights{q, 50.0 * Matrix::Identity(2, 2)},
                  cfg,
                  Signal::zero(),
                  Signal::step(1.0, 5.0)};
}

Scenario example3() {
  const double k = 1, m = 1, c = 1;
  Matrix a(4, 4);
  a << 0, 0, 1, 0,
       0, 0, 0, 1,
       -2 * k / m, k / m, -c / m, 0,
       k / m, -2 * k / m, 0, -c / m;
  const Matrix b = rows({{0}, {0}, {0}, {k / m}});
  const Matrix e = rows({{0}, {0}, {0}, {1}});
  SimConfig cfg;
  cfg.x0 = vec({-1, -5, 1, 1});
  cfg.z0 = Vector::Zero(4);
  cfg.control_mode = ControlMode::kEstimateFeedback;
  return Scenario{"example3",
                  LinearSystem(a, b, Matrix::Identity(4, 4), e),
                  ComplexList{{-2, 0}, {-10, 0}, {-5, 0}, {-3, 0}},
                  LqrWeights{100.0 * Matrix::Identity(4, 4), Matrix::Identity(1, 1)},
                  cfg,
                  Signal::sine(1.0, 1.0),
                  Signal::step(1.0, 5.0)};
}

bool same(const Matrix& l, const Matrix& r) {
  return l.rows() == r.rows() && l.cols() == r.cols() && (l.array() == r.array()).all();
}

}  // namespace

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names{"example1", "example2", "example3"};
  return names;
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  throw InputError("unknown scenario '" + name + "'");
}

DesignResult design_scenario(const Scenario& s) {
  if (const auto* poles = std::get_if<ComplexList>(&s.placement)) {
    return design(s.system, *poles);
  }
  return design_full_measurement(s.system, std::get<Matrix>(s.placement));
}

std::optional<Matrix> scenario_controller(const Scenario& s) {
  if (!s.lqr) return std::nullopt;
  return lqr_gain(LqrProblem(s.system.A(), s.system.B(), s.lqr->Q, s.lqr->R));
}

Trajectory simulate_scenario(const Scenario& s, const std::optional<Signal>& d_override,
                             const std::optional<Signal>& u_override) {
  const DesignResult dr = design_scenario(s);
  std::optional<Matrix> kctrl;
  if (s.cfg.control_mode == ControlMode::kEstimateFeedback) {
    kctrl = scenario_controller(s);
    if (!kctrl) {
      throw InputError("estimate_feedback mode needs LQR weights");
    }
  }
  return simulate(s.system, dr.gains, kctrl, u_override.value_or(s.u_ref),
                  d_override.value_or(s.d_sig), s.cfg);
}

bool identical(const Scenario& lhs, const Scenario& rhs) {
  if (lhs.name != rhs.name) return false;
  const LinearSystem& a = lhs.system;
  const LinearSystem& b = rhs.system;
  if (!same(a.A(), b.A()) || !same(a.B(), b.B()) || !same(a.C(), b.C()) ||
      !same(a.E(), b.E())) {
    return false;
  }
  if (lhs.placement.index() != rhs.placement.index()) return false;
  if (const auto* p = std::get_if<ComplexList>(&lhs.placement)) {
    if (*p != std::get<ComplexList>(rhs.placement)) return false;
  } else if (!same(std::get<Matrix>(lhs.placement), std::get<Matrix>(rhs.placement))) {
    return false;
  }
  if (lhs.lqr.has_value() != rhs.lqr.has_value()) return false;
  if (lhs.lqr && (!same(lhs.lqr->Q, rhs.lqr->Q) || !same(lhs.lqr->R, rhs.lqr->R))) {
    return false;
  }
  const SimConfig& c = lhs.cfg;
  const SimConfig& d = rhs.cfg;
  return c.t_end == d.t_end && c.dt == d.dt && same(c.x0, d.x0) && same(c.z0, d.z0) &&
         c.control_mode == d.control_mode && lhs.u_ref == rhs.u_ref &&
         lhs.d_sig == rhs.d_sig;
}

}  // namespace uio

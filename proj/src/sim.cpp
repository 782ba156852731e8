#include "uio/sim.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "uio/errors.hpp"

namespace uio {

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kZero: return "zero";
    case SignalKind::kConstant: return "constant";
    case SignalKind::kStep: return "step";
    case SignalKind::kSine: return "sine";
    case SignalKind::kPulse: return "pulse";
  }
  return "zero";
}

SignalKind signal_kind_from_string(std::string_view name) {
  for (SignalKind k : {SignalKind::kZero, SignalKind::kConstant, SignalKind::kStep,
                       SignalKind::kSine, SignalKind::kPulse}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown signal kind '" + std::string(name) + "'");
}

std::string_view to_string(ControlMode mode) {
  return mode == ControlMode::kOpenLoop ? "open_loop" : "estimate_feedback";
}

ControlMode control_mode_from_string(std::string_view name) {
  if (name == "open_loop") return ControlMode::kOpenLoop;
  if (name == "estimate_feedback") return ControlMode::kEstimateFeedback;
  throw InputError("unknown control mode '" + std::string(name) + "'");
}

Signal Signal::constant(double amplitude) {
  Signal s;
  s.kind = SignalKind::kConstant;
  s.amplitude = amplitude;
  return s;
}

Signal Signal::step(double amplitude, double start_time) {
  Signal s;
  s.kind = SignalKind::kStep;
  s.amplitude = amplitude;
  s.start_time = start_time;
  return s;
}

Signal Signal::sine(double amplitude, double frequency, double phase,
                    double start_time) {
  Signal s;
  s.kind = SignalKind::kSine;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.phase = phase;
  s.start_time = start_time;
  return s;
}

Signal Signal::pulse(double amplitude, double start_time, double width) {
  Signal s;
  s.kind = SignalKind::kPulse;
  s.amplitude = amplitude;
  s.start_time = start_time;
  s.width = width;
  return s;
}

void Signal::validate() const {
  for (double v : {amplitude, start_time, frequency, phase, width}) {
    if (!std::isfinite(v)) throw InputError("signal parameters must be finite");
  }
  if (start_time < 0.0) throw InputError("signal start_time must be >= 0");
  if (width < 0.0) throw InputError("signal width must be >= 0");
  if (kind == SignalKind::kSine && !(frequency > 0.0)) {
    throw InputError("sine signal needs frequency > 0");
  }
}

double Signal::operator()(double t) const {
  switch (kind) {
    case SignalKind::kZero:
      return 0.0;
    case SignalKind::kConstant:
      return amplitude;
    case SignalKind::kStep:
      return t >= start_time ? amplitude : 0.0;
    case SignalKind::kSine:
      return t >= start_time
                 ? amplitude * std::sin(frequency * (t - start_time) + phase)
                 : 0.0;
    case SignalKind::kPulse:
      return (t >= start_time && t < start_time + width) ? amplitude : 0.0;
  }
  return 0.0;
}

void SimConfig::validate(Eigen::Index n) const {
  if (!std::isfinite(t_end) || !std::isfinite(dt) || !(dt > 0.0) || dt > t_end) {
    throw InputError("simulation needs 0 < dt <= t_end");
  }
  if (dt > kMaxDt) throw InputError("simulation dt must not exceed 1e-2 s");
  if (x0.size() != n || z0.size() != n) {
    throw InputError("initial states must have n entries");
  }
  numlin::require_finite(x0, "x0");
  numlin::require_finite(z0, "z0");
}

Eigen::Index SimConfig::num_samples() const {
  return static_cast<Eigen::Index>(std::floor(t_end / dt + 1e-9)) + 1;
}

Trajectory simulate(const LinearSystem& sys, const UioGains& g,
                    const std::optional<Matrix>& kctrl, const Signal& u_ref,
                    const Signal& d_sig, const SimConfig& cfg) {
  const Eigen::Index n = sys.n();
  const Eigen::Index r = sys.r();
  const Eigen::Index m = sys.m();
  const Eigen::Index q = sys.q();
  cfg.validate(n);
  u_ref.validate();
  d_sig.validate();
  const GainCheck chk = verify_gains(sys, g, kVerifyTol);
  if (!chk.passed) {
    throw InputError("simulate: observer gains fail the decoupling checks");
  }
  const bool feedback = cfg.control_mode == ControlMode::kEstimateFeedback;
  if (feedback != kctrl.has_value()) {
    throw InputError(
        "simulate: a controller gain is required exactly in estimate_feedback mode");
  }
  if (feedback && (kctrl->rows() != r || kctrl->cols() != n)) {
    throw InputError("simulate: controller gain must be r x n");
  }

  const Matrix& A = sys.A();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix& E = sys.E();
  const Matrix tb = g.T * B;

  auto input = [&](double t, const Vector& xhat) -> Vector {
    Vector u = Vector::Constant(r, u_ref(t));
    if (feedback) u -= *kctrl * xhat;
    return u;
  };
  // Stacked derivative of [x; z].
  auto deriv = [&](double t, const Vector& s) -> Vector {
    const auto x = s.head(n);
    const auto z = s.tail(n);
    const Vector y = C * x;
    const Vector xhat = z + g.H * y;
    const Vector u = input(t, xhat);
    const Vector d = Vector::Constant(q, d_sig(t));
    Vector ds(2 * n);
    ds.head(n) = A * x + B * u + E * d;
    ds.tail(n) = g.F * z + tb * u + g.K * y;
    return ds;
  };

  const Eigen::Index samples = cfg.num_samples();
  Trajectory tr;
  tr.times.resize(samples);
  tr.x.resize(samples, n);
  tr.xhat.resize(samples, n);
  tr.e.resize(samples, n);
  tr.y.resize(samples, m);
  tr.u.resize(samples, r);
  tr.d.resize(samples, q);

  Vector s(2 * n);
  s << cfg.x0, cfg.z0;
  const double h = cfg.dt;
  for (Eigen::Index k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) * h;
    if (!s.allFinite()) {
      std::ostringstream os;
      os << "simulation diverged: non-finite state at t = " << t;
      throw InstabilityError(os.str(), t);
    }
    const Vector x = s.head(n);
    const Vector y = C * x;
    const Vector xhat = s.tail(n) + g.H * y;
    tr.times(k) = t;
    tr.x.row(k) = x.transpose();
    tr.y.row(k) = y.transpose();
    tr.xhat.row(k) = xhat.transpose();
    tr.e.row(k) = (x - xhat).transpose();
    tr.u.row(k) = input(t, xhat).transpose();
    tr.d.row(k) = Vector::Constant(q, d_sig(t)).transpose();
    if (k + 1 == samples) break;

    const Vector k1 = deriv(t, s);
    const Vector k2 = deriv(t + 0.5 * h, s + 0.5 * h * k1);
    const Vector k3 = deriv(t + 0.5 * h, s + 0.5 * h * k2);
    const Vector k4 = deriv(t + h, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  tr.dhat = estimate_disturbance(tr, sys, g);
  return tr;
}

Matrix estimate_disturbance(const Trajectory& traj, const LinearSystem& sys,
                            const UioGains& g, bool strict) {
  const Eigen::Index samples = traj.times.size();
  const Eigen::Index n = sys.n();
  if (traj.x.rows() != samples || traj.xhat.cols() != n ||
      traj.y.cols() != sys.m() || traj.u.cols() != sys.r()) {
    throw InputError("estimate_disturbance: trajectory does not match the plant");
  }
  if (samples == 0) return Matrix(0, sys.q());
  const double dt = samples > 1 ? traj.times(1) - traj.times(0) : 0.0;
  if (strict && dt > kMaxDt) {
    throw InputError(
        "estimate_disturbance: sample spacing too coarse for differentiation");
  }

  const Matrix& A = sys.A();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix ce_pinv = numlin::pinv(C * sys.E());
  const Matrix ch = C * g.H;
  const Matrix tb = g.T * B;

  Matrix ydot = Matrix::Zero(samples, sys.m());
  if (samples > 1) {
    ydot.row(0) = (traj.y.row(1) - traj.y.row(0)) / dt;
    ydot.row(samples - 1) = (traj.y.row(samples - 1) - traj.y.row(samples - 2)) / dt;
    for (Eigen::Index k = 1; k + 1 < samples; ++k) {
      ydot.row(k) = (traj.y.row(k + 1) - traj.y.row(k - 1)) / (2.0 * dt);
    }
  }

  Matrix dhat(samples, sys.q());
  for (Eigen::Index k = 0; k < samples; ++k) {
    const Vector y = traj.y.row(k).transpose();
    const Vector xhat = traj.xhat.row(k).transpose();
    const Vector u = traj.u.row(k).transpose();
    const Vector z = xhat - g.H * y;
    const Vector zdot = g.F * z + tb * u + g.K * y;
    const Vector yhat_dot = C * zdot + ch * ydot.row(k).transpose();
    dhat.row(k) = (ce_pinv * (yhat_dot - C * A * xhat - C * B * u)).transpose();
  }
  return dhat;
}

double convergence_time(const Trajectory& traj, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InputError("convergence_time: fraction must lie in (0, 1)");
  }
  const Eigen::Index samples = traj.e.rows();
  if (samples == 0) throw InputError("convergence_time: empty trajectory");
  const double e0 = traj.e.row(0).norm();
  if (!(e0 > 0.0)) {
    throw InputError("convergence_time: initial error is zero");
  }
  const double threshold = fraction * e0;
  for (Eigen::Index k = samples - 1; k >= 0; --k) {
    if (traj.e.row(k).norm() > threshold) {
      if (k == samples - 1) return std::numeric_limits<double>::infinity();
      return traj.times(k + 1);
    }
  }
  return traj.times(0);
}

}  // namespace uio

#pragma once

#include <optional>
#include <string_view>

#include "uio/numlin.hpp"
#include "uio/observer.hpp"

namespace uio {

enum class SignalKind { kZero, kConstant, kStep, kSine, kPulse };

std::string_view to_string(SignalKind kind);
SignalKind signal_kind_from_string(std::string_view name);

/// Scalar time signal, broadcast to every channel it drives.
///
///   zero      0
///   constant  amplitude
///   step      amplitude for t >= start_time
///   sine      amplitude * sin(frequency * (t - start_time) + phase)
///             for t >= start_time
///   pulse     amplitude for start_time <= t < start_time + width
///
/// Signals are evaluated at integrator stage times; events are not snapped
/// to the sample grid, so place them on multiples of dt for exact
/// reproducibility.
struct Signal {
  SignalKind kind = SignalKind::kZero;
  double amplitude = 0.0;
  double start_time = 0.0;
  double frequency = 0.0;  // rad/s
  double phase = 0.0;      // rad
  double width = 0.0;      // s

  static Signal zero() { return {}; }
  static Signal constant(double amplitude);
  static Signal step(double amplitude, double start_time);
  static Signal sine(double amplitude, double frequency, double phase = 0.0,
                     double start_time = 0.0);
  static Signal pulse(double amplitude, double start_time, double width);

  void validate() const;
  double operator()(double t) const;

  bool operator==(const Signal&) const = default;
};

enum class ControlMode { kOpenLoop, kEstimateFeedback };

std::string_view to_string(ControlMode mode);
ControlMode control_mode_from_string(std::string_view name);

inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDefaultTEnd = 20.0;
inline constexpr double kMaxDt = 1e-2;

struct SimConfig {
  double t_end = kDefaultTEnd;
  double dt = kDefaultDt;
  Vector x0;
  Vector z0;
  ControlMode control_mode = ControlMode::kOpenLoop;

  void validate(Eigen::Index n) const;
  /// floor(t_end / dt) + 1, robust to representation error in dt.
  Eigen::Index num_samples() const;
};

/// Sampled run of plant and observer. Each series stores one sample per row.
struct Trajectory {
  Vector times;
  Matrix x, xhat, e, y, u, d, dhat;
};

/// Integrates x' = A x + B u + E d together with z' = F z + T B u + K y,
/// x_hat = z + H y, using classic fixed-step RK4 on the stacked state.
/// In estimate-feedback mode u = u_ref - kctrl x_hat, otherwise u = u_ref.
/// The returned trajectory already carries the disturbance estimate.
Trajectory simulate(const LinearSystem& sys, const UioGains& g,
                    const std::optional<Matrix>& kctrl, const Signal& u_ref,
                    const Signal& d_sig, const SimConfig& cfg);

/// d_hat = (CE)^+ (y_hat' - C A x_hat - C B u), where
/// y_hat' = C (F z + T B u + K y) + C H y' and y' is a central difference of
/// the measured outputs. In strict mode a sample spacing above 1e-2 s is
/// rejected.
Matrix estimate_disturbance(const Trajectory& traj, const LinearSystem& sys,
                            const UioGains& g, bool strict = false);

/// Earliest t* with ||e(t)|| <= fraction ||e(0)|| for all t >= t*;
/// +inf if the final sample still exceeds the threshold.
double convergence_time(const Trajectory& traj, double fraction);

}  // namespace uio

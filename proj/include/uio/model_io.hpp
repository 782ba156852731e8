#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "uio/errors.hpp"
#include "uio/observer.hpp"
#include "uio/scenarios.hpp"
#include "uio/sim.hpp"

namespace uio {

/// Malformed model file. The message starts with the JSON field path
/// (e.g. "sim.x0[2]") or the parser's line/column position.
class ModelError : public InputError {
 public:
  using InputError::InputError;
};

/// Model file (JSON) -> Scenario.
///
///   {
///     "name": "...",                         optional
///     "A": [[...]], "B": [[...]] | [],       B optional (no known inputs)
///     "C": [[...]], "E": [[...]],
///     "poles": [-2, [-1, 3], [-1, -3]]       or "Fdes": [[...]]
///     "lqr": {"Q": [[...]], "R": [[...]]},   optional
///     "sim": {"t_end": 20, "dt": 1e-3, "x0": [...],
///             "xhat0": [...] | "z0": [...],
///             "control_mode": "open_loop" | "estimate_feedback"},
///     "signals": {"input": {...}, "disturbance": {...}}
///   }
///
/// Matrices are row-major nested arrays. Unknown keys are rejected. A
/// missing dt falls back to `default_dt`. xhat0 is converted to the observer
/// state z0 = xhat0 - H C x0.
Scenario parse_model(const nlohmann::json& doc, double default_dt = kDefaultDt);

/// Parses text; syntax errors carry line and column.
Scenario parse_model_text(const std::string& text, double default_dt = kDefaultDt);

/// Inverse of parse_model. Writes z0 so the observer state survives exactly.
nlohmann::json export_model(const Scenario& s);

nlohmann::json signal_to_json(const Signal& s);
Signal signal_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json matrix_to_json(const Matrix& m);

/// Gains file: F, T, K, H, K1, K2, eig_F as [re, im] pairs, and residuals.
nlohmann::json gains_to_json(const DesignResult& dr, const GainCheck& chk);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Header t,x1..xn,xhat1..xhatn,e1..en,y1..ym,u1..ur,d1..dq,dhat1..dhatq.
void write_csv(std::ostream& os, const Trajectory& traj);

/// Static SVG: one panel per state (x solid, x_hat dashed) and a panel with
/// log10 ||e||.
void write_svg_plot(std::ostream& os, const Trajectory& traj,
                    const std::string& title);

}  // namespace uio

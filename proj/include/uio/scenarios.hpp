#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uio/lqr.hpp"
#include "uio/observer.hpp"
#include "uio/sim.hpp"

namespace uio {

/// State weights for an LQR controller on the scenario's (A, B).
struct LqrWeights {
  Matrix Q;
  Matrix R;
};

/// Either closed-loop observer poles or a prescribed F (square invertible C).
using Placement = std::variant<ComplexList, Matrix>;

struct Scenario {
  std::string name;
  LinearSystem system;
  Placement placement;
  std::optional<LqrWeights> lqr;
  SimConfig cfg;
  Signal u_ref;
  Signal d_sig;
};

/// Names accepted by builtin_scenario.
const std::vector<std::string>& builtin_scenario_names();

/// example1: third-order plant without known inputs.
/// example2: quarter-car suspension, prescribed F = -4 I.
/// example3: coupled mass-spring pair with C = I.
Scenario builtin_scenario(const std::string& name);

/// Runs design or design_full_measurement, whichever the placement asks for.
DesignResult design_scenario(const Scenario& s);

/// LQR gain when the scenario carries weights.
std::optional<Matrix> scenario_controller(const Scenario& s);

/// Designs, then simulates with the scenario's signals and configuration.
/// Any argument given overrides the scenario's own value.
Trajectory simulate_scenario(const Scenario& s,
                             const std::optional<Signal>& d_override = {},
                             const std::optional<Signal>& u_override = {});

/// Exact equality of every field, used for export/parse round trips.
bool identical(const Scenario& lhs, const Scenario& rhs);

}  // namespace uio

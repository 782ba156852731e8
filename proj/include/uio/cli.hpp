#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace uio::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNoObserver = 2;  // existence or design failure
inline constexpr int kBadInput = 3;    // unreadable or malformed model
inline constexpr int kBadOutput = 4;   // output path not writable

/// dt used when a model omits sim.dt: UIO_LAB_DT if set and valid, else 1e-3.
double default_dt();

int cmd_check(const std::string& model_path, std::ostream& out, std::ostream& err);

int cmd_design(const std::string& model_path, const std::string& out_path,
               std::ostream& out, std::ostream& err);

int cmd_simulate(const std::string& model_path, const std::string& csv_path,
                 const std::optional<std::string>& plot_path, bool strict,
                 std::ostream& out, std::ostream& err);

int cmd_scenario_export(const std::string& name, const std::string& out_path,
                        std::ostream& out, std::ostream& err);

}  // namespace uio::cli

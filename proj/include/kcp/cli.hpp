#pragma once

// Command-line front end: verify, simulate, audit, transform.
//
// Exit codes: 0 success, 1 verification or audit failure, 2 invalid input,
// 3 domain exit during a simulation (partial output is still written).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcp/dynamics.hpp"
#include "kcp/models.hpp"
#include "kcp/report.hpp"

namespace kcp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kDomainExit = 3,
};

// Initial state of a simulation, tagged by chart.
struct InitialState {
    std::string chart = "canonical"; // canonical, klein, x, action_angle
    nlohmann::json data;             // chart-specific fields
};

struct RunConfig {
    SystemKind system = SystemKind::Oscillator;
    std::optional<std::size_t> dimension;
    double g = 1.0;
    double omega = 1.0;
    double gamma = 1.0;
    std::vector<Rational> weights; // empty: n = (1, ..., 1)
    std::optional<NamedPreset> preset;
    bool shifted = false;
    InitialState initial;
    IntegratorConfig integrator;
    std::uint64_t seed = 7;
    double drift_tol = 1e-6;
    std::string csv_path;   // empty: stdout
    std::string audit_path; // empty: not written

    // Angular model, parameters and system the config describes.
    AngularModel model() const;
    HamiltonianSystem system_built() const;
    // Initial canonical state (validated against the model dimension).
    RadialCanonicalPoint initial_canonical() const;
};

// Throws std::invalid_argument on unknown keys or ill-typed values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// SEED from the environment, or 7.
std::uint64_t default_seed();

// %.17g
std::string format_double(double x);

// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

nlohmann::json report_json(const AlgebraReport& r);

// Trajectory table with the header
// t,r,p_r,phi_*,pi_*,Re_w,Im_w,Re_z*,Im_z*,E,K,D,Re_<integral>,Im_<integral>...
// (commas in integral labels become '_'). Throws DomainError when a row
// violates the chart invariants.
std::string trajectory_csv(const Trajectory& traj, const HamiltonianSystem& sys);

// Reads back the canonical columns of a trajectory table.
Trajectory read_trajectory_csv(const std::string& text, const HamiltonianSystem& sys);

nlohmann::json audit_json(const InvariantAudit& a, const Trajectory& traj, const RunConfig& cfg);

// Point conversion used by `transform`. Charts: klein, poincare, canonical, x.
nlohmann::json transform_point(const std::string& from, const std::string& to, const nlohmann::json& point,
                               double g, bool dual);

// Entry point; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kcp::cli

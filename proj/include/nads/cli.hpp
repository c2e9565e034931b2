#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nads::cli {

enum class Command { Orbit, Lyapunov, Sensitivity, Stability, Hypotheses, ReproducePaper };

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndetermined = 2;

inline constexpr std::size_t kDefaultHorizon = 1000;
inline constexpr std::size_t kDefaultSensitivityHorizon = 10'000;

struct RunConfig {
    Command command = Command::Orbit;
    std::filesystem::path specPath;
    double x0 = 0.0;
    /// Unset: 10^4 for sensitivity, 10^3 otherwise.
    std::optional<std::size_t> horizon;
    std::filesystem::path outDir = ".";

    /// Unset: domain width / 20.
    std::optional<double> delta;
    double radius = 1e-3;
    std::size_t probes = 16;
    /// Scan delta over width 2^-j, j = 1..10, instead of a single value.
    bool deltaScan = false;

    double eta = 0.01;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::size_t c0Horizon = 1000;

    double tailFraction = 0.5;

    /// T31, T32 or T41.
    std::string theorem = "T31";
    /// Subinterval for set-valued runs (sensitivity over a set, T32); unset ends
    /// default to the domain.
    std::optional<double> setLo;
    std::optional<double> setHi;
    std::size_t points = 16;
};

/// Range checks on the numeric options; ConfigError on violation.
void validate(const RunConfig& config);

/// Runs one command, writing artifacts under config.outDir and a short summary
/// to `log`. Library errors are reported on `err` and mapped to exit status 1.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace nads::cli

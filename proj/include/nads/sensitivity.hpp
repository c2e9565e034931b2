#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nads/map_sequence.hpp"

namespace nads {

enum class SensitivityVerdict { StronglySensitive, NotDetected, Undetermined };

std::string_view to_string(SensitivityVerdict v) noexcept;

struct ProbeResult {
    double y0 = 0.0;
    double initialGap = 0.0;
    /// First n in [0, horizon] with |y_n - x_n| > delta.
    std::optional<std::size_t> escapeTime;
    double maxSeparation = 0.0;
    /// Max separation over the last quarter of the run exceeds that of the first quarter.
    bool growing = false;
};

struct SensitivityReport {
    double x0 = 0.0;
    double delta = 0.0;
    double radius = 0.0;
    std::size_t horizon = 0;
    std::vector<ProbeResult> probes;
    SensitivityVerdict verdict = SensitivityVerdict::NotDetected;
};

struct SetSensitivityReport {
    double delta = 0.0;
    std::vector<SensitivityReport> points;
    SensitivityVerdict verdict = SensitivityVerdict::NotDetected;
};

/// width / 20, the default candidate sensitivity constant.
double default_delta(const Interval& domain) noexcept;

/// |y_n - x_n| for n = 0..horizon.
std::vector<double> probe_separation(const MapSequence& seq, double x0, double y0,
                                     std::size_t horizon);

/// x0 + radius 2^-j and x0 - radius 2^-j for j = 0..probeCount/2 - 1 (in that
/// order), clamped to the domain, dropping any that coincide with x0.
std::vector<double> probe_points(const Interval& domain, double x0, double radius,
                                 std::size_t probeCount);

/// Samples the neighbourhood quantifier of strong sensitivity at x0 with
/// geometrically spaced probes and records when each one escapes delta.
SensitivityReport strong_sensitivity_test(const MapSequence& seq, double x0, double delta,
                                          double radius, std::size_t probeCount,
                                          std::size_t horizon);

/// Runs the point test at every sample with one shared delta.
SetSensitivityReport sensitivity_in_set_test(const MapSequence& seq,
                                             const std::vector<double>& samplePoints, double delta,
                                             double radius, std::size_t probeCount,
                                             std::size_t horizon);

/// Separation table for a finished report: row n holds |y_n - x_n| per probe.
std::vector<std::vector<double>> separation_table(const MapSequence& seq,
                                                  const SensitivityReport& report);

struct ProbeReplay {
    std::size_t probeIndex = 0;
    std::size_t escapeTime = 0;
    double originalSeparation = 0.0;
    double replayedSeparation = 0.0;
    bool exceedsDelta = false;
    bool bitwiseEqual = false;
};

struct ShiftReplayResult {
    std::size_t k = 0;
    std::vector<ProbeReplay> replays;
    /// Escaping probes with escapeTime <= k, which cannot be replayed.
    std::size_t skipped = 0;
    bool pass = false;
};

/// Replays every probe with escapeTime N > k through the system shifted by k,
/// started from (x_k, y_k), and checks the separation at step N - k exceeds
/// delta and equals the original separation at step N bit for bit.
/// PreconditionError when no probe escapes after step k.
ShiftReplayResult shift_sensitivity_check(const MapSequence& seq, double x0, std::size_t k,
                                          const SensitivityReport& report);

}  // namespace nads

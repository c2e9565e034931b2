#pragma once
// JSON and CSV emission. Every float is printed with 17 significant digits so
// outputs are byte-identical across runs and round-trip exactly.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nads/hypotheses.hpp"
#include "nads/lyapunov.hpp"
#include "nads/orbit.hpp"
#include "nads/sensitivity.hpp"
#include "nads/stability.hpp"

namespace nads::io {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become "Infinity", "-Infinity", "NaN".
std::string format_double(double v);

/// Two-space indented JSON with fixed float formatting; non-finite numbers
/// are emitted as the strings above.
std::string dump(const Json& j);

Json to_json(const ExponentEstimate& e);
Json to_json(const SensitivityReport& r);
Json to_json(const SetSensitivityReport& r);
Json to_json(const ShiftReplayResult& r);
Json to_json(const StabilityCertificate& c);
Json to_json(const EnvelopeVerification& v);
Json to_json(const CertificationResult& r);
Json to_json(const HypothesisReport& r);
Json to_json(const ModulusEstimate& m);

/// Accumulates a CSV document: one header row, then numeric rows.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    /// Leading integer column (step index) followed by reals.
    void row(std::size_t n, const std::vector<double>& values);

    const std::string& str() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

std::string orbit_csv(const Orbit& orbit);
std::string exponents_csv(const ExponentEstimate& e);
std::string separations_csv(const std::vector<std::vector<double>>& rows);
std::string envelope_csv(const EnvelopeVerification& v);
std::string modulus_csv(const ModulusEstimate& m);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nads::io

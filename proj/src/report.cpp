#include "nads/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "nads/counter_rng.hpp"
#include "nads/errors.hpp"

namespace nads::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_into(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
    const std::string closePad(2 * static_cast<std::size_t>(depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += ": ";
                dump_into(it.value(), out, depth + 1);
            }
            out += "\n" + closePad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_into(v, out, depth + 1);
            }
            out += "\n" + closePad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v))
                out += format_double(v);
            else
                out += "\"" + format_double(v) + "\"";
            return;
        }
        default:
            out += j.dump();
    }
}

Json versioned() {
    Json j;
    j["schema_version"] = kSchemaVersion;
    return j;
}

Json optional_size(const std::optional<std::size_t>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json probe_json(const ProbeResult& p) {
    Json j;
    j["y0"] = p.y0;
    j["initial_gap"] = p.initialGap;
    j["escape_time"] = optional_size(p.escapeTime);
    j["max_separation"] = p.maxSeparation;
    j["growing"] = p.growing;
    return j;
}

Json sensitivity_body(const SensitivityReport& r) {
    Json j;
    j["x0"] = r.x0;
    j["delta"] = r.delta;
    j["radius"] = r.radius;
    j["horizon"] = r.horizon;
    j["verdict"] = std::string(to_string(r.verdict));
    Json probes = Json::array();
    for (const auto& p : r.probes) probes.push_back(probe_json(p));
    j["probes"] = std::move(probes);
    return j;
}

Json certificate_body(const StabilityCertificate& c) {
    Json j;
    j["lambda_upper"] = c.lambdaUpper;
    j["lambda_lower"] = c.lambdaLower;
    j["epsilon0"] = c.epsilon0;
    j["lambda"] = c.lambda;
    j["lambda_tilde"] = c.lambdaTilde;
    j["M"] = c.M;
    j["C0"] = c.C0;
    j["eta"] = c.eta;
    j["D_eta"] = c.Deta;
    j["delta"] = c.delta;
    j["c0_horizon"] = c.c0Horizon;
    j["exponent_horizon"] = c.exponentHorizon;
    return j;
}

Json verification_body(const EnvelopeVerification& v) {
    Json j;
    j["pass"] = v.pass;
    j["margin"] = v.margin;
    j["relative_margin"] = v.relativeMargin;
    j["samples"] = v.samples;
    j["skipped"] = v.skipped;
    j["horizon"] = v.horizon;
    j["tightest_y0"] = v.tightestY0;
    return j;
}

}  // namespace

std::string dump(const Json& j) {
    std::string out;
    dump_into(j, out, 0);
    out += "\n";
    return out;
}

Json to_json(const ExponentEstimate& e) {
    Json j = versioned();
    j["upper"] = e.upper;
    j["lower"] = e.lower;
    j["tail_start"] = e.tailStart;
    j["horizon"] = e.horizon;
    j["converged"] = e.converged;
    j["oscillation_width"] = e.oscillationWidth;
    j["hit_sentinel"] = e.hitSentinel;
    return j;
}

Json to_json(const SensitivityReport& r) {
    Json j = versioned();
    j.update(sensitivity_body(r));
    return j;
}

Json to_json(const SetSensitivityReport& r) {
    Json j = versioned();
    j["delta"] = r.delta;
    j["verdict"] = std::string(to_string(r.verdict));
    Json points = Json::array();
    for (const auto& p : r.points) points.push_back(sensitivity_body(p));
    j["points"] = std::move(points);
    return j;
}

Json to_json(const ShiftReplayResult& r) {
    Json j = versioned();
    j["k"] = r.k;
    j["pass"] = r.pass;
    j["skipped"] = r.skipped;
    Json rows = Json::array();
    for (const auto& p : r.replays) {
        Json row;
        row["probe"] = p.probeIndex;
        row["escape_time"] = p.escapeTime;
        row["original_separation"] = p.originalSeparation;
        row["replayed_separation"] = p.replayedSeparation;
        row["exceeds_delta"] = p.exceedsDelta;
        row["bitwise_equal"] = p.bitwiseEqual;
        rows.push_back(std::move(row));
    }
    j["replays"] = std::move(rows);
    return j;
}

Json to_json(const StabilityCertificate& c) {
    Json j = versioned();
    j.update(certificate_body(c));
    return j;
}

Json to_json(const EnvelopeVerification& v) {
    Json j = versioned();
    j.update(verification_body(v));
    return j;
}

Json to_json(const CertificationResult& r) {
    Json j = versioned();
    j["status"] = std::string(to_string(r.status));
    j["verdict"] = r.status == CertificationStatus::Certified ? "pass" : "indeterminate";
    j["retried"] = r.retried;
    j["sampling_rng"] = std::string(kCounterRngName) + " v" + std::to_string(kCounterRngVersion);
    j["certificate"] = certificate_body(r.certificate);
    j["verification"] = verification_body(r.verification);
    return j;
}

Json to_json(const HypothesisReport& r) {
    Json j = versioned();
    j["theorem"] = std::string(to_string(r.theorem));
    j["pass"] = r.pass;
    j["sampled"] = r.sampled;
    j["suggested_delta"] = r.suggestedDelta;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json row;
        row["name"] = c.name;
        row["pass"] = c.pass;
        row["sampled"] = c.sampled;
        row["evidence"] = c.evidence;
        checks.push_back(std::move(row));
    }
    j["checks"] = std::move(checks);
    return j;
}

Json to_json(const ModulusEstimate& m) {
    Json j = versioned();
    j["grid_spacing"] = m.gridSpacing;
    j["index_horizon"] = m.indexHorizon;
    j["exact_for_periodic"] = m.exactForPeriodic;
    j["domain_width"] = m.domainWidth;
    Json rows = Json::array();
    for (const auto& r : m.table) rows.push_back(Json{{"epsilon", r.epsilon}, {"delta", r.delta}});
    j["table"] = std::move(rows);
    return j;
}

CsvWriter::CsvWriter(const std::vector<std::string>& columns) : columns_(columns.size()) {
    text_ = "# schema_version: " + std::to_string(kSchemaVersion) + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw ConfigError("CSV row width does not match the header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
}

void CsvWriter::row(std::size_t n, const std::vector<double>& values) {
    if (values.size() + 1 != columns_) throw ConfigError("CSV row width does not match the header");
    text_ += std::to_string(n);
    for (double v : values) {
        text_ += ',';
        text_ += format_double(v);
    }
    text_ += '\n';
}

std::string orbit_csv(const Orbit& orbit) {
    CsvWriter w({"n", "x_n", "S_n"});
    for (std::size_t n = 0; n < orbit.points.size(); ++n)
        w.row(n, {orbit.points[n], orbit.partialSums[n]});
    return w.str();
}

std::string exponents_csv(const ExponentEstimate& e) {
    CsvWriter w({"n", "finite_time_exponent"});
    for (std::size_t i = 0; i < e.finiteTimeSeries.size(); ++i) w.row(i + 1, {e.finiteTimeSeries[i]});
    return w.str();
}

std::string separations_csv(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> cols{"n"};
    const std::size_t probes = rows.empty() ? 0 : rows.front().size();
    for (std::size_t i = 0; i < probes; ++i) cols.push_back("sep_probe" + std::to_string(i));
    CsvWriter w(cols);
    for (std::size_t n = 0; n < rows.size(); ++n) w.row(n, rows[n]);
    return w.str();
}

std::string envelope_csv(const EnvelopeVerification& v) {
    CsvWriter w({"n", "sep", "bound"});
    for (const auto& r : v.tightest) w.row(r.n, {r.sep, r.bound});
    return w.str();
}

std::string modulus_csv(const ModulusEstimate& m) {
    CsvWriter w({"epsilon", "delta"});
    for (const auto& r : m.table) w.row({r.epsilon, r.delta});
    return w.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw ConfigError("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError("cannot move output into place at " + path.string());
    }
}

}  // namespace nads::io

#include "nads/cli.hpp"

#include <cmath>
#include <ostream>

#include "nads/counter_rng.hpp"
#include "nads/errors.hpp"
#include "nads/hypotheses.hpp"
#include "nads/lyapunov.hpp"
#include "nads/report.hpp"
#include "nads/sensitivity.hpp"
#include "nads/stability.hpp"
#include "nads/system_file.hpp"
#include "nads/systems.hpp"

namespace nads::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

constexpr int kDeltaScanSteps = 10;

std::size_t horizon_of(const RunConfig& c) {
    if (c.horizon) return *c.horizon;
    return c.command == Command::Sensitivity ? kDefaultSensitivityHorizon : kDefaultHorizon;
}

int sensitivity_exit(SensitivityVerdict v) {
    return v == SensitivityVerdict::Undetermined ? kExitUndetermined : kExitOk;
}

Interval set_of(const RunConfig& c, const Interval& domain) {
    const Interval sub(c.setLo.value_or(domain.lo()), c.setHi.value_or(domain.hi()));
    if (!domain.contains(sub)) throw ConfigError("set [set-lo, set-hi] must lie inside the domain");
    return sub;
}

std::vector<double> cell_midpoints(const Interval& set, std::size_t count) {
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i)
        xs[i] = set.lo() + set.width() * ((static_cast<double>(i) + 0.5) / static_cast<double>(count));
    return xs;
}

void write_json(const fs::path& path, const Json& j) { io::write_atomic(path, io::dump(j)); }

struct SensitivityRun {
    SensitivityReport report;
    ExponentEstimate exponents;
};

SensitivityRun point_sensitivity(const MapSequence& seq, double x0, double delta, double radius,
                                 std::size_t probes, std::size_t horizon, double tailFraction,
                                 const fs::path& dir) {
    SensitivityRun r;
    r.report = strong_sensitivity_test(seq, x0, delta, radius, probes, horizon);
    r.exponents = estimate_exponents(iterate_orbit(seq, x0, horizon), tailFraction);
    Json j = io::to_json(r.report);
    j["exponents"] = io::to_json(r.exponents);
    j["exponents"].erase("schema_version");
    write_json(dir / "sensitivity.json", j);
    io::write_atomic(dir / "separations.csv", io::separations_csv(separation_table(seq, r.report)));
    io::write_atomic(dir / "exponents.csv", io::exponents_csv(r.exponents));
    return r;
}

int cmd_orbit(const RunConfig& c, const MapSequence& seq, std::ostream& log) {
    const Orbit orbit = iterate_orbit(seq, c.x0, horizon_of(c));
    io::write_atomic(c.outDir / "orbit.csv", io::orbit_csv(orbit));
    log << "orbit: " << orbit.horizon() << " steps, x_N = " << io::format_double(orbit.points.back())
        << "\n";
    return kExitOk;
}

int cmd_lyapunov(const RunConfig& c, const MapSequence& seq, std::ostream& log) {
    const Orbit orbit = iterate_orbit(seq, c.x0, horizon_of(c));
    const ExponentEstimate e = estimate_exponents(orbit, c.tailFraction);
    io::write_atomic(c.outDir / "orbit.csv", io::orbit_csv(orbit));
    io::write_atomic(c.outDir / "exponents.csv", io::exponents_csv(e));
    write_json(c.outDir / "lyapunov.json", io::to_json(e));
    log << "lyapunov: upper " << io::format_double(e.upper) << ", lower "
        << io::format_double(e.lower) << (e.converged ? "" : " (not converged)") << "\n";
    return kExitOk;
}

int cmd_sensitivity(const RunConfig& c, const MapSequence& seq, std::ostream& log) {
    const std::size_t horizon = horizon_of(c);
    const Interval& dom = seq.domain();

    if (c.setLo || c.setHi) {
        const auto xs = cell_midpoints(set_of(c, dom), c.points);
        const double delta = c.delta.value_or(default_delta(dom));
        const auto rep = sensitivity_in_set_test(seq, xs, delta, c.radius, c.probes, horizon);
        write_json(c.outDir / "sensitivity.json", io::to_json(rep));
        log << "sensitivity on set: " << to_string(rep.verdict) << "\n";
        return sensitivity_exit(rep.verdict);
    }

    if (!c.deltaScan) {
        const double delta = c.delta.value_or(default_delta(dom));
        const auto r = point_sensitivity(seq, c.x0, delta, c.radius, c.probes, horizon,
                                         c.tailFraction, c.outDir);
        log << "sensitivity: " << to_string(r.report.verdict) << " (delta "
            << io::format_double(delta) << ")\n";
        return sensitivity_exit(r.report.verdict);
    }

    // Largest delta in the scan for which every probe escapes; otherwise the smallest one tried.
    Json scan = Json::array();
    std::optional<double> chosen;
    for (int j = 1; j <= kDeltaScanSteps; ++j) {
        const double delta = std::ldexp(dom.width(), -j);
        const auto rep = strong_sensitivity_test(seq, c.x0, delta, c.radius, c.probes, horizon);
        scan.push_back(Json{{"delta", delta}, {"verdict", std::string(to_string(rep.verdict))}});
        if (!chosen && rep.verdict == SensitivityVerdict::StronglySensitive) chosen = delta;
    }
    const double delta = chosen.value_or(std::ldexp(dom.width(), -kDeltaScanSteps));
    const auto r = point_sensitivity(seq, c.x0, delta, c.radius, c.probes, horizon, c.tailFraction,
                                     c.outDir);
    Json j = io::to_json(r.report);
    j["exponents"] = io::to_json(r.exponents);
    j["exponents"].erase("schema_version");
    j["delta_scan"] = std::move(scan);
    write_json(c.outDir / "sensitivity.json", j);
    log << "sensitivity scan: " << to_string(r.report.verdict) << " at delta "
        << io::format_double(delta) << "\n";
    return sensitivity_exit(r.report.verdict);
}

struct StabilityRun {
    CertificationResult result;
    ExponentEstimate exponents;
};

StabilityRun stability_run(const MapSequence& seq, double x0, double eta, std::size_t horizon,
                           std::size_t samples, std::uint64_t seed, std::size_t c0Horizon,
                           double tailFraction, const fs::path& dir) {
    StabilityRun r;
    r.exponents = estimate_exponents(iterate_orbit(seq, x0, horizon), tailFraction);
    CertifyOptions opt;
    opt.certificate.c0Horizon = c0Horizon;
    opt.samples = samples;
    opt.horizon = horizon;
    opt.seed = seed;
    r.result = certify(seq, x0, eta, r.exponents, opt);
    write_json(dir / "certificate.json", io::to_json(r.result));
    io::write_atomic(dir / "envelope.csv", io::envelope_csv(r.result.verification));
    io::write_atomic(dir / "exponents.csv", io::exponents_csv(r.exponents));
    return r;
}

int cmd_stability(const RunConfig& c, const MapSequence& seq, std::ostream& log) {
    const auto r = stability_run(seq, c.x0, c.eta, horizon_of(c), c.samples, c.seed, c.c0Horizon,
                                 c.tailFraction, c.outDir);
    log << "stability: " << to_string(r.result.status) << ", delta "
        << io::format_double(r.result.certificate.delta) << ", margin "
        << io::format_double(r.result.verification.margin) << ", relative margin "
        << io::format_double(r.result.verification.relativeMargin) << "\n";
    return r.result.status == CertificationStatus::Certified ? kExitOk : kExitUndetermined;
}

int cmd_hypotheses(const RunConfig& c, const MapSequence& seq, std::ostream& log) {
    HypothesisConfig cfg;
    cfg.orbitHorizon = horizon_of(c);
    cfg.tailFraction = c.tailFraction;

    HypothesisReport rep;
    Interval where = seq.domain();
    if (c.theorem == "T32") {
        where = set_of(c, seq.domain());
        rep = check_theorem(seq, where, cell_midpoints(where, c.points), cfg);
    } else if (c.theorem == "T31" || c.theorem == "T41") {
        const auto e = estimate_exponents(iterate_orbit(seq, c.x0, cfg.orbitHorizon), c.tailFraction);
        rep = check_theorem(seq, c.theorem == "T31" ? Theorem::T31 : Theorem::T41, c.x0, e, cfg);
    } else {
        throw ConfigError("unknown theorem '" + c.theorem + "' (expected T31, T32 or T41)");
    }
    write_json(c.outDir / "hypotheses.json", io::to_json(rep));

    const auto mod = estimate_modulus(seq, where, cfg.epsilons,
                                      where.width() / static_cast<double>(kDefaultGridCells),
                                      seq.sample_indices(kDefaultIndexHorizon));
    io::write_atomic(c.outDir / "modulus.csv", io::modulus_csv(mod));

    log << "hypotheses " << to_string(rep.theorem) << ": " << (rep.pass ? "hold" : "fail")
        << (rep.sampled ? " (sampled)" : "") << "\n";
    for (const auto& chk : rep.checks)
        log << "  " << chk.name << ": " << (chk.pass ? "pass" : "FAIL") << "\n";
    return kExitOk;
}

int cmd_reproduce(const RunConfig& c, std::ostream& log) {
    const auto sensitive = systems::logistic(ParamSequence::periodic({2.0, 3.0, 4.0}));
    const auto stable = systems::logistic(ParamSequence::seeded_uniform(0.5, 0.7, c.seed));

    const auto s = point_sensitivity(sensitive, 0.0, 0.1, 1e-3, 16, kDefaultSensitivityHorizon,
                                     c.tailFraction, c.outDir / "sensitive");
    const auto t = stability_run(stable, 0.0, 0.01, kDefaultHorizon, 1000, c.seed, kDefaultHorizon,
                                 c.tailFraction, c.outDir / "stable");

    Json j;
    j["schema_version"] = io::kSchemaVersion;
    Json a;
    a["system"] = "logistic, r periodic (2, 3, 4)";
    a["x0"] = 0.0;
    a["delta"] = s.report.delta;
    a["verdict"] = std::string(to_string(s.report.verdict));
    a["lambda_upper"] = s.exponents.upper;
    a["lambda_lower"] = s.exponents.lower;
    a["lambda_exact"] = (std::log(2.0) + std::log(3.0) + std::log(4.0)) / 3.0;
    j["sensitive"] = std::move(a);
    Json b;
    b["system"] = "logistic, r uniform on [0.5, 0.7]";
    b["seed"] = c.seed;
    b["rng"] = std::string(kCounterRngName) + " v" + std::to_string(kCounterRngVersion);
    b["x0"] = 0.0;
    b["eta"] = t.result.certificate.eta;
    b["verdict"] = t.result.status == CertificationStatus::Certified ? "pass" : "indeterminate";
    b["lambda_upper"] = t.exponents.upper;
    b["lambda_lower"] = t.exponents.lower;
    b["delta"] = t.result.certificate.delta;
    b["margin"] = t.result.verification.margin;
    b["relative_margin"] = t.result.verification.relativeMargin;
    j["stable"] = std::move(b);
    write_json(c.outDir / "paper_repro.json", j);

    log << "sensitive regime: " << to_string(s.report.verdict) << ", stable regime: "
        << to_string(t.result.status) << "\n";
    const bool definitive = s.report.verdict != SensitivityVerdict::Undetermined &&
                            t.result.status == CertificationStatus::Certified;
    return definitive ? kExitOk : kExitUndetermined;
}

}  // namespace

void validate(const RunConfig& c) {
    if (c.horizon && *c.horizon < 1) throw ConfigError("--horizon must be at least 1");
    if (c.delta && !(*c.delta > 0.0)) throw ConfigError("--delta must be positive");
    if (!(c.radius > 0.0)) throw ConfigError("--radius must be positive");
    if (c.probes < 8) throw ConfigError("--probes must be at least 8");
    if (!(c.eta > 0.0)) throw ConfigError("--eta must be positive");
    if (c.samples < 10) throw ConfigError("--samples must be at least 10");
    if (!(c.tailFraction > 0.0 && c.tailFraction < 1.0))
        throw ConfigError("--tail-fraction must lie in (0, 1)");
    if (c.points < 1) throw ConfigError("--points must be at least 1");
    if (!std::isfinite(c.x0)) throw ConfigError("--x0 must be finite");
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        validate(config);
        fs::create_directories(config.outDir);
        if (config.command == Command::ReproducePaper) return cmd_reproduce(config, log);

        if (config.specPath.empty()) throw ParseError("missing --spec");
        const MapSequence seq = io::load_system(config.specPath);
        if (!seq.domain().contains(config.x0)) throw DomainError("x0 outside the system domain");
        switch (config.command) {
            case Command::Orbit: return cmd_orbit(config, seq, log);
            case Command::Lyapunov: return cmd_lyapunov(config, seq, log);
            case Command::Sensitivity: return cmd_sensitivity(config, seq, log);
            case Command::Stability: return cmd_stability(config, seq, log);
            case Command::Hypotheses: return cmd_hypotheses(config, seq, log);
            case Command::ReproducePaper: break;
        }
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

}  // namespace nads::cli

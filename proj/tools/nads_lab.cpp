#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "nads/cli.hpp"

namespace {

using nads::cli::Command;
using nads::cli::RunConfig;

void common(CLI::App* sub, RunConfig& c, bool needsSpec = true) {
    auto* spec = sub->add_option("--spec", c.specPath, "system description file");
    if (needsSpec) spec->required();
    sub->add_option("--x0", c.x0, "initial condition");
    sub->add_option("--horizon", c.horizon, "number of steps N");
    sub->add_option("--out", c.outDir, "output directory");
    sub->add_option("--tail-fraction", c.tailFraction, "tail window start as a fraction of N");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nads-lab: numerical lab for non-autonomous discrete dynamical systems"};
    app.require_subcommand(1);
    RunConfig c;
    std::map<CLI::App*, Command> commands;

    auto* orbit = app.add_subcommand("orbit", "iterate an orbit; writes orbit.csv");
    common(orbit, c);
    commands[orbit] = Command::Orbit;

    auto* lyap = app.add_subcommand("lyapunov", "finite-time exponents; writes exponents.csv");
    common(lyap, c);
    commands[lyap] = Command::Lyapunov;

    auto* sens = app.add_subcommand("sensitivity", "strong sensitivity probe test");
    common(sens, c);
    sens->add_option("--delta", c.delta, "candidate sensitivity constant (default width/20)");
    sens->add_option("--radius", c.radius, "probe neighbourhood radius");
    sens->add_option("--probes", c.probes, "number of probes");
    sens->add_flag("--delta-scan", c.deltaScan, "scan delta over width * 2^-j");
    sens->add_option("--set-lo", c.setLo, "test every point of a set: left end");
    sens->add_option("--set-hi", c.setHi, "test every point of a set: right end");
    sens->add_option("--points", c.points, "sample points in the set");
    commands[sens] = Command::Sensitivity;

    auto* stab = app.add_subcommand("stability", "exponential stability certificate");
    common(stab, c);
    stab->add_option("--eta", c.eta, "envelope amplitude");
    stab->add_option("--samples", c.samples, "verification samples");
    stab->add_option("--seed", c.seed, "sampling seed");
    stab->add_option("--c0-horizon", c.c0Horizon, "horizon for the constant C0");
    commands[stab] = Command::Stability;

    auto* hyp = app.add_subcommand("hypotheses", "check the hypotheses of a theorem");
    common(hyp, c);
    hyp->add_option("--theorem", c.theorem, "T31, T32 or T41");
    hyp->add_option("--set-lo", c.setLo, "invariant set, left end (T32)");
    hyp->add_option("--set-hi", c.setHi, "invariant set, right end (T32)");
    hyp->add_option("--points", c.points, "sample points in the set (T32)");
    commands[hyp] = Command::Hypotheses;

    auto* repro = app.add_subcommand("reproduce-paper", "run both worked examples");
    repro->add_option("--out", c.outDir, "output directory");
    repro->add_option("--seed", c.seed, "seed of the random parameters");
    repro->add_option("--tail-fraction", c.tailFraction, "tail window start as a fraction of N");
    commands[repro] = Command::ReproducePaper;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : nads::cli::kExitError;
    }
    for (const auto& [sub, cmd] : commands)
        if (sub->parsed()) c.command = cmd;
    return nads::cli::run(c, std::cout, std::cerr);
}

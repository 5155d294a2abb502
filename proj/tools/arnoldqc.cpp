#include <cstdio>

#include <CLI11.hpp>

#include "arnoldqc/io/config.hpp"
#include "arnoldqc/version.hpp"
#include "commands.hpp"

using namespace arnoldqc::cli;

namespace {

void add_source(CLI::App* cmd, PotentialSource& src)
{
    auto* group = cmd->add_option_group("potential", "exactly one of --alpha, --increments, --potential");
    group->add_option("--alpha", src.alpha, "N=2 shape: alpha (with --mu2 or --delta)");
    group->add_option("--increments", src.increments, "shape increments s_k - s_{k-1}, comma-separated");
    group->add_option("--potential", src.coefficients, "coefficients in descending powers, comma-separated");
    cmd->add_option("--mu2", src.mu2, "beta^2 / alpha^2");
    cmd->add_option("--delta", src.delta, "mu^2 - 2");
    cmd->add_option("--epsilon", src.epsilon, "parity-breaking cubic coupling");
    cmd->add_option("--lambda", src.lambda, "kinetic scale Lambda")->capture_default_str();
}

void add_grid(CLI::App* cmd, GridOptions& grid)
{
    cmd->add_option("--grid-step", grid.step, "finite-difference spacing h")->capture_default_str();
    cmd->add_option("--half-width", grid.half_width, "domain [-L, L]; chosen automatically when omitted");
}

void add_common(CLI::App* cmd, Common& common, std::vector<std::string> formats)
{
    cmd->add_option("--format", common.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
    cmd->add_option("-o,--output", common.output, "output file (stdout by default)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra and relocalization catastrophes of Arnold polynomial potentials"};
    app.set_version_flag("--version", arnoldqc::version);
    app.require_subcommand(1);
    Common common;
    app.add_flag("-v,--verbose", common.verbose, "progress and timings on stderr");

    Table1Options t1;
    auto* table = app.add_subcommand("table1", "avoided-crossing deltas for the twelve (m, n) pairs");
    table->add_option("--alpha", t1.alpha, "shape parameter alpha")->capture_default_str();
    table->add_flag("--compare", t1.compare, "add published values (alpha = 4 only)");
    table->add_option("--backend", t1.backend)->check(CLI::IsMember({"harmonic", "numerical"}))->capture_default_str();
    add_common(table, common, {"csv", "json"});

    SpectrumOptions sp;
    auto* spectrum = app.add_subcommand("spectrum", "labeled low-lying levels");
    add_source(spectrum, sp.source);
    add_grid(spectrum, sp.grid);
    spectrum->add_option("--levels", sp.levels, "number of levels")->capture_default_str();
    spectrum->add_option("--backend", sp.backend)->check(CLI::IsMember({"harmonic", "numerical"}))->capture_default_str();
    spectrum->add_flag("--compare", sp.compare, "add the other backend and the difference");
    add_common(spectrum, common, {"csv", "json"});

    DensityOptions dn;
    auto* density = app.add_subcommand("density", "probability density of one level");
    add_source(density, dn.source);
    add_grid(density, dn.grid);
    density->add_option("--level", dn.level, "level index, 0 = ground")->capture_default_str();
    add_common(density, common, {"csv", "svg"});

    LocusOptions lc;
    auto* locus = app.add_subcommand("locus", "asymmetric catastrophe locus delta(epsilon)");
    locus->add_option("--alpha", lc.alpha)->capture_default_str();
    locus->add_option("--eps-lo", lc.eps_lo)->capture_default_str();
    locus->add_option("--eps-hi", lc.eps_hi)->capture_default_str();
    locus->add_option("--steps", lc.steps)->capture_default_str();
    locus->add_option("--method", lc.method)->check(CLI::IsMember({"both", "linearized", "cubic"}))->capture_default_str();
    add_common(locus, common, {"csv", "json"});

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "parameter scans from a key = value file");
    sweep->add_option("--config", sw.config, "config file")->required();
    sweep->add_option("--output-dir", sw.output_dir, "directory for CSV files and manifest.json")->capture_default_str();
    sweep->add_option("-j,--jobs", sw.jobs, "worker threads, 0 = all cores")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*table)
            return run_table1(t1, common);
        if (*spectrum)
            return run_spectrum(sp, common);
        if (*density)
            return run_density(dn, common);
        if (*locus)
            return run_locus(lc, common);
        return run_sweep(sw, common);
    } catch (const arnoldqc::io::ConfigError& e) {
        for (const auto& d : e.diagnostics())
            std::fprintf(stderr, "%s\n", d.c_str());
        return exit_usage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return exit_numeric;
    }
}

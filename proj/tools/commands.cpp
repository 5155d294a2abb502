#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "arnoldqc/io/config.hpp"
#include "arnoldqc/io/format.hpp"
#include "arnoldqc/io/svg.hpp"

namespace arnoldqc::cli {

using nlohmann::json;

json json_number(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return io::rounded(x);
}

namespace {

std::string short_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

} // namespace

ResolvedPotential resolve(const PotentialSource& src)
{
    const int given = src.alpha.has_value() + !src.increments.empty() + !src.coefficients.empty();
    if (given != 1)
        throw UsageError("give exactly one of --alpha, --increments, --potential");
    if (!(src.lambda > 0))
        throw UsageError("--lambda must be > 0");
    if (!src.alpha && (src.mu2 || src.delta || src.epsilon))
        throw UsageError("--mu2, --delta and --epsilon need --alpha");

    if (src.alpha) {
        const double alpha = *src.alpha;
        if (!(alpha > 0))
            throw UsageError("--alpha must be > 0");
        if (src.mu2.has_value() == src.delta.has_value())
            throw UsageError("--alpha needs exactly one of --mu2, --delta");
        const double delta = src.mu2 ? *src.mu2 - 2.0 : *src.delta;
        if (!(2.0 + delta > 0))
            throw UsageError("need mu2 = 2 + delta > 0");
        std::string desc = "alpha=" + short_number(alpha) + " delta=" + short_number(delta);
        if (src.epsilon) {
            desc += " epsilon=" + short_number(*src.epsilon);
            return {perturbed_n2_potential(alpha, beta_from_delta(alpha, delta), *src.epsilon), desc};
        }
        return {symmetric_n2(alpha, delta), desc};
    }
    std::vector<double> values;
    if (!src.increments.empty()) {
        if (!io::parse_double_list(src.increments, values))
            throw UsageError("--increments: expected comma-separated numbers, got '" + src.increments + "'");
        try {
            return {build_symmetric(WellShape::from_increments(values)), "increments=" + src.increments};
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--increments: ") + e.what());
        }
    }
    if (!io::parse_double_list(src.coefficients, values))
        throw UsageError("--potential: expected comma-separated numbers, got '" + src.coefficients + "'");
    Polynomial p = Polynomial::from_descending(values);
    if (p.degree() < 2 || p.degree() % 2 != 0 || !(p.leading() > 0))
        throw UsageError("--potential: need even degree >= 2 and a positive leading coefficient");
    return {p, "V=" + to_string(p)};
}

namespace {

struct HarmonicRow
{
    std::string label;
    double energy;
    double well_x;
};

/// Lowest `count` harmonic levels over every well; mirror wells repeat a label.
std::vector<HarmonicRow> harmonic_rows(const Polynomial& p, std::size_t count, double lambda)
{
    std::vector<HarmonicRow> rows;
    for (const auto& w : harmonic_wells(p)) {
        const bool central = std::fabs(w.X) <= 1e-9;
        auto levels = off_central_levels(w, static_cast<int>(count) - 1, lambda);
        for (std::size_t k = 0; k < levels.size(); ++k)
            rows.push_back({(central ? "central-" : "offcentral-") + std::to_string(k), levels[k], w.X});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const HarmonicRow& a, const HarmonicRow& b) {
        return a.energy < b.energy || (a.energy == b.energy && a.well_x < b.well_x);
    });
    if (rows.size() > count)
        rows.resize(count);
    return rows;
}

SolverConfig numerical_config(const Polynomial& p, const GridOptions& grid, std::size_t levels, double lambda)
{
    if (!(grid.step > 0))
        throw UsageError("--grid-step must be > 0");
    double half_width = 0.0;
    if (grid.half_width) {
        if (!(*grid.half_width > 0))
            throw UsageError("--half-width must be > 0");
        half_width = *grid.half_width;
    } else {
        double e_max = 0.0;
        try {
            auto rows = harmonic_rows(p, levels, lambda);
            e_max = rows.empty() ? 1.0 : rows.back().energy;
        } catch (const std::domain_error&) {
            // Flat minimum: fall back to the scale of the critical values.
            for (const auto& cp : critical_points(p))
                e_max = std::max(e_max, std::fabs(cp.value));
            e_max = 10.0 * (1.0 + e_max);
        }
        half_width = choose_domain(p, e_max);
    }
    auto cfg = SolverConfig::with_step(half_width, grid.step, levels, lambda);
    if (cfg.grid_points > 4'000'001)
        throw UsageError("grid of " + std::to_string(cfg.grid_points) + " points is too large; raise --grid-step");
    return cfg;
}

} // namespace

int run_table1(const Table1Options& opt, const Common& common)
{
    if (!(opt.alpha > 0))
        throw UsageError("--alpha must be > 0");
    if (opt.compare && opt.alpha != 4.0)
        throw UsageError("--compare needs --alpha 4 (published values exist only there)");
    const AlcBackend backend = opt.backend == "numerical" ? AlcBackend::numerical : AlcBackend::harmonic;

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = table1(opt.alpha, backend);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto published = [](const AlcSolution& s) {
        for (const auto& r : table1_reference)
            if (r.m == s.m && r.n == s.n)
                return r.delta;
        return std::nan("");
    };

    Output out(common.output);
    double worst = 0.0;
    if (common.format == "json") {
        json rows = json::array();
        for (const auto& s : result.rows) {
            json row{{"m", s.m}, {"n", s.n}, {"delta", json_number(s.delta)}, {"residual", json_number(s.residual)}};
            if (opt.compare) {
                row["paper_delta"] = json_number(published(s));
                row["abs_diff"] = json_number(std::fabs(s.delta - published(s)));
            }
            rows.push_back(row);
        }
        write_json(out.stream(), rows);
    } else {
        std::vector<std::string> header{"m", "n", "delta", "residual"};
        if (opt.compare) {
            header.push_back("paper_delta");
            header.push_back("abs_diff");
        }
        io::CsvWriter csv(out.stream(), header);
        for (const auto& s : result.rows) {
            csv.cell(s.m).cell(s.n).cell(s.delta).cell(s.residual);
            if (opt.compare)
                csv.cell(published(s)).cell(std::fabs(s.delta - published(s)));
            csv.end_row();
        }
    }
    for (const auto& s : result.rows) {
        worst = std::max(worst, std::fabs(s.delta - published(s)));
        if (s.sign_changes > 1)
            std::fprintf(stderr, "warning: (m,n)=(%d,%d) bracket had %d sign changes; took the one nearest 0\n", s.m, s.n,
                         s.sign_changes);
    }
    for (const auto& g : result.gaps)
        std::fprintf(stderr, "pairing gap delta(%d,%d)-delta(%d,%d) = %s\n", g.m + 1, g.n + 2, g.m, g.n,
                     io::format_number(g.gap).c_str());
    if (opt.compare)
        std::fprintf(stderr, "max |delta - published| = %s\n", io::format_number(worst).c_str());
    if (common.verbose)
        std::fprintf(stderr, "table1: %zu rows in %.3f s\n", result.rows.size(), seconds);
    return exit_ok;
}

int run_spectrum(const SpectrumOptions& opt, const Common& common)
{
    if (opt.levels < 1)
        throw UsageError("--levels must be >= 1");
    const auto pot = resolve(opt.source);
    const double lambda = opt.source.lambda;
    const auto levels = static_cast<std::size_t>(opt.levels);
    const bool numerical = opt.backend == "numerical";

    std::vector<HarmonicRow> harmonic;
    if (!numerical || opt.compare)
        harmonic = harmonic_rows(pot.p, levels, lambda);
    std::vector<Eigenpair> pairs;
    std::vector<LabeledLevel> labels;
    if (numerical || opt.compare) {
        pairs = solve_numerical(pot.p, numerical_config(pot.p, opt.grid, levels, lambda));
        labels = classify_levels(pairs, pot.p, lambda);
    }

    Output out(common.output);
    const std::size_t rows = numerical ? labels.size() : harmonic.size();
    auto other = [&](std::size_t i) {
        if (numerical)
            return i < harmonic.size() ? harmonic[i].energy : std::nan("");
        return i < labels.size() ? labels[i].energy : std::nan("");
    };
    auto diff = [&](std::size_t i) {
        return numerical ? labels[i].energy - other(i) : other(i) - harmonic[i].energy;
    };

    if (common.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < rows; ++i) {
            json row;
            row["level"] = i;
            if (numerical) {
                row["label"] = labels[i].label();
                row["energy"] = json_number(labels[i].energy);
                row["w_central"] = json_number(labels[i].w_central);
                row["w_outer"] = json_number(labels[i].w_outer);
                row["parity"] = pairs[i].parity;
            } else {
                row["label"] = harmonic[i].label;
                row["energy"] = json_number(harmonic[i].energy);
                row["well_x"] = json_number(harmonic[i].well_x);
            }
            if (opt.compare) {
                row[numerical ? "harmonic" : "numerical"] = json_number(other(i));
                row["diff"] = json_number(diff(i));
            }
            arr.push_back(row);
        }
        write_json(out.stream(), arr);
    } else {
        std::vector<std::string> header{"level", "label", "energy"};
        if (numerical)
            header.insert(header.end(), {"w_central", "w_outer", "parity"});
        else
            header.push_back("well_x");
        if (opt.compare)
            header.insert(header.end(), {numerical ? "harmonic" : "numerical", "diff"});
        io::CsvWriter csv(out.stream(), header);
        for (std::size_t i = 0; i < rows; ++i) {
            csv.cell(i);
            if (numerical)
                csv.cell(labels[i].label()).cell(labels[i].energy).cell(labels[i].w_central).cell(labels[i].w_outer).cell(pairs[i].parity);
            else
                csv.cell(harmonic[i].label).cell(harmonic[i].energy).cell(harmonic[i].well_x);
            if (opt.compare)
                csv.cell(other(i)).cell(diff(i));
            csv.end_row();
        }
    }
    if (common.verbose)
        std::fprintf(stderr, "spectrum: %s, backend %s\n", pot.description.c_str(), opt.backend.c_str());
    return exit_ok;
}

int run_density(const DensityOptions& opt, const Common& common)
{
    if (opt.level < 0)
        throw UsageError("--level must be >= 0");
    const auto pot = resolve(opt.source);
    const auto levels = static_cast<std::size_t>(opt.level) + 1;
    const auto cfg = numerical_config(pot.p, opt.grid, std::max<std::size_t>(levels, 2), opt.source.lambda);
    const auto pairs = solve_numerical(pot.p, cfg);
    const Eigenpair& pair = pairs[static_cast<std::size_t>(opt.level)];

    Output out(common.output);
    if (common.format == "svg") {
        io::DensityPlot plot;
        for (std::size_t i = 0; i < pair.psi.size(); ++i) {
            plot.x.push_back(pair.grid.x(i));
            plot.density.push_back(pair.psi[i] * pair.psi[i]);
        }
        plot.regions = well_weights(pair, pot.p);
        char energy[64];
        std::snprintf(energy, sizeof energy, "%.6g", pair.energy);
        plot.title = pot.description + ", level " + std::to_string(opt.level) + ", E = " + energy;
        out.stream() << io::render_density_svg(plot);
    } else {
        io::CsvWriter csv(out.stream(), {"x", "psi", "density"});
        for (std::size_t i = 0; i < pair.psi.size(); ++i)
            csv.cell(pair.grid.x(i)).cell(pair.psi[i]).cell(pair.psi[i] * pair.psi[i]).end_row();
    }
    if (common.verbose) {
        for (const auto& r : well_weights(pair, pot.p))
            std::fprintf(stderr, "region [%g, %g]%s weight %.6f\n", r.lo, r.hi, r.central ? " central" : "", r.weight);
    }
    return exit_ok;
}

int run_locus(const LocusOptions& opt, const Common& common)
{
    if (!(opt.alpha > 0))
        throw UsageError("--alpha must be > 0");
    if (opt.steps < 1)
        throw UsageError("--steps must be >= 1");
    if (opt.eps_hi < opt.eps_lo)
        throw UsageError("need --eps-lo <= --eps-hi");
    if (opt.steps == 1 && opt.eps_hi != opt.eps_lo)
        throw UsageError("--steps 1 needs --eps-lo equal to --eps-hi");

    struct Row
    {
        double eps, lin, cubic, gap;
    };
    std::vector<Row> rows;
    int skipped = 0;
    for (int i = 0; i < opt.steps; ++i) {
        const double eps = opt.steps == 1 ? opt.eps_lo : opt.eps_lo + (opt.eps_hi - opt.eps_lo) * i / (opt.steps - 1);
        Row r{eps, std::nan(""), std::nan(""), std::nan("")};
        if (opt.method != "cubic" && std::fabs(eps) <= perturbative_epsilon_bound(opt.alpha))
            r.lin = asym_locus_linearized(eps, opt.alpha).delta;
        if (opt.method != "linearized") {
            try {
                r.cubic = asym_locus_cubic(eps, opt.alpha).delta;
            } catch (const no_crossing_error&) {
                ++skipped;
            }
        }
        r.gap = std::fabs(r.cubic - r.lin);
        rows.push_back(r);
    }
    if (skipped)
        std::fprintf(stderr, "warning: %d epsilon values beyond alpha^3 have no cubic root (nan)\n", skipped);

    Output out(common.output);
    if (common.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"epsilon", json_number(r.eps)},
                           {"delta_lin", json_number(r.lin)},
                           {"delta_cubic", json_number(r.cubic)},
                           {"gap", json_number(r.gap)}});
        write_json(out.stream(), arr);
    } else {
        io::CsvWriter csv(out.stream(), {"epsilon", "delta_lin", "delta_cubic", "gap"});
        for (const auto& r : rows)
            csv.cell(r.eps).cell(r.lin).cell(r.cubic).cell(r.gap).end_row();
    }
    return exit_ok;
}

} // namespace arnoldqc::cli

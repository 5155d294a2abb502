#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "arnoldqc/io/config.hpp"
#include "arnoldqc/io/format.hpp"
#include "arnoldqc/version.hpp"
#include "commands.hpp"

namespace arnoldqc::cli {

using nlohmann::json;

namespace {

/// Typed access to one scan's keys; problems are collected, not thrown, so a
/// single run reports every bad line.
class ScanReader
{
public:
    ScanReader(const io::Config& cfg, std::string scan, std::map<std::string, const io::ConfigEntry*> keys,
               std::vector<std::string>& errors)
        : cfg_(cfg), scan_(std::move(scan)), keys_(std::move(keys)), errors_(errors)
    {
    }

    std::optional<double> number(const std::string& key, std::optional<double> fallback = std::nullopt, bool required = false)
    {
        const auto* e = take(key, required);
        if (!e)
            return fallback;
        double v;
        if (!io::parse_double(e->value, v)) {
            errors_.push_back(cfg_.where(*e) + "'" + e->key + "' expects a number, got '" + e->value + "'");
            return fallback;
        }
        return v;
    }

    std::optional<long> integer(const std::string& key, std::optional<long> fallback = std::nullopt, bool required = false)
    {
        const auto* e = take(key, required);
        if (!e)
            return fallback;
        long v;
        if (!io::parse_int(e->value, v)) {
            errors_.push_back(cfg_.where(*e) + "'" + e->key + "' expects an integer, got '" + e->value + "'");
            return fallback;
        }
        return v;
    }

    std::string choice(const std::string& key, const std::set<std::string>& allowed, const std::string& fallback)
    {
        const auto* e = take(key, false);
        if (!e)
            return fallback;
        if (!allowed.count(e->value)) {
            std::string list;
            for (const auto& a : allowed)
                list += (list.empty() ? "" : "|") + a;
            errors_.push_back(cfg_.where(*e) + "'" + e->key + "' must be one of " + list + ", got '" + e->value + "'");
            return fallback;
        }
        return e->value;
    }

    std::vector<double> numbers(const std::string& key, bool required)
    {
        const auto* e = take(key, required);
        std::vector<double> v;
        if (e && !io::parse_double_list(e->value, v))
            errors_.push_back(cfg_.where(*e) + "'" + e->key + "' expects comma-separated numbers, got '" + e->value + "'");
        return v;
    }

    /// "m:n, m:n, ..." index pairs.
    std::vector<std::array<int, 2>> pairs(const std::string& key)
    {
        const auto* e = take(key, false);
        std::vector<std::array<int, 2>> out;
        if (!e) {
            out.assign(table1_pairs.begin(), table1_pairs.end());
            return out;
        }
        std::size_t start = 0;
        const std::string& s = e->value;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            std::string item = io::detail::trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            auto colon = item.find(':');
            long m = -1, n = -1;
            if (colon == std::string::npos || !io::parse_int(io::detail::trim(item.substr(0, colon)), m)
                || !io::parse_int(io::detail::trim(item.substr(colon + 1)), n) || m < 0 || n < 0) {
                errors_.push_back(cfg_.where(*e) + "'" + e->key + "' expects m:n pairs of non-negative integers, got '"
                                  + item + "'");
                return {};
            }
            out.push_back({static_cast<int>(m), static_cast<int>(n)});
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        return out;
    }

    void check(bool ok, const std::string& key, const std::string& message)
    {
        if (ok)
            return;
        auto it = keys_.find(key);
        errors_.push_back((it != keys_.end() ? cfg_.where(*it->second) : cfg_.source() + ": ") + "scan '" + scan_ + "': " + message);
    }

    /// Reports keys the scan type does not understand.
    void finish(const std::string& type)
    {
        for (const auto& [key, e] : keys_)
            if (!used_.count(key))
                errors_.push_back(cfg_.where(*e) + "unknown key '" + e->key + "' for scan type '" + type + "'");
    }

private:
    const io::ConfigEntry* take(const std::string& key, bool required)
    {
        used_.insert(key);
        auto it = keys_.find(key);
        if (it == keys_.end()) {
            if (required)
                errors_.push_back(cfg_.source() + ": scan '" + scan_ + "' is missing required key '" + key + "'");
            return nullptr;
        }
        return it->second;
    }

    const io::Config& cfg_;
    std::string scan_;
    std::map<std::string, const io::ConfigEntry*> keys_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
};

struct RelocalizationScan
{
    double alpha = 4, lo = 0, hi = 0, step = 0.005, lambda = 1;
    long steps = 0, levels = 4;
    std::optional<double> half_width;
};

struct AlcScan
{
    std::vector<double> alphas;
    std::vector<std::array<int, 2>> pairs;
    std::string backend = "harmonic";
    double lo = -0.05, hi = 0.05, tol = 1e-8, step = 0.005, lambda = 1;
};

struct CuspScan
{
    double a = -2, b_lo = 0, b_hi = 0, step = 0.01, lambda = 1;
    long steps = 0;
    std::optional<double> half_width;
};

struct Scan
{
    std::string name;
    std::string type;
    std::map<std::string, std::string> params;
    RelocalizationScan reloc;
    AlcScan alc;
    CuspScan cusp;
};

bool valid_scan_name(const std::string& s)
{
    return !s.empty()
           && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

/// Unprefixed keys describe a single scan named "scan"; "name.key" lines
/// declare one scan per distinct name.
std::vector<Scan> read_scans(const io::Config& cfg, std::vector<std::string> errors)
{
    bool prefixed = false;
    for (const auto& e : cfg.entries())
        prefixed = prefixed || e.key.find('.') != std::string::npos;

    std::vector<std::string> order;
    std::map<std::string, std::map<std::string, const io::ConfigEntry*>> grouped;
    for (const auto& e : cfg.entries()) {
        std::string scan = "scan", key = e.key;
        if (prefixed) {
            auto dot = e.key.find('.');
            if (dot == std::string::npos) {
                errors.push_back(cfg.where(e) + "expected '<scan>.<key>' once any key is prefixed, got '" + e.key + "'");
                continue;
            }
            scan = e.key.substr(0, dot);
            key = e.key.substr(dot + 1);
            if (!valid_scan_name(scan) || key.empty() || key.find('.') != std::string::npos) {
                errors.push_back(cfg.where(e) + "malformed scan key '" + e.key + "'");
                continue;
            }
        }
        if (!grouped.count(scan))
            order.push_back(scan);
        grouped[scan][key] = &e;
    }
    if (order.empty() && errors.empty())
        errors.push_back(cfg.source() + ": no scans defined");

    std::vector<Scan> scans;
    for (const auto& name : order) {
        ScanReader rd(cfg, name, grouped[name], errors);
        Scan s;
        s.name = name;
        for (const auto& [k, e] : grouped[name])
            s.params[k] = e->value;
        s.type = rd.choice("type", {"relocalization", "alc", "cusp"}, "");
        if (s.type.empty()) {
            if (!grouped[name].count("type"))
                errors.push_back(cfg.source() + ": scan '" + name + "' is missing required key 'type'");
            continue;
        }
        if (s.type == "relocalization") {
            auto& r = s.reloc;
            r.alpha = rd.number("alpha", 4.0, true).value_or(4.0);
            r.lo = rd.number("delta_lo", 0.0, true).value_or(0.0);
            r.hi = rd.number("delta_hi", 0.0, true).value_or(0.0);
            r.steps = rd.integer("steps", 0, true).value_or(0);
            r.step = rd.number("grid_step", 0.005).value_or(0.005);
            r.half_width = rd.number("half_width");
            r.levels = rd.integer("levels", 4).value_or(4);
            r.lambda = rd.number("lambda", 1.0).value_or(1.0);
            rd.check(r.alpha > 0, "alpha", "alpha must be > 0");
            rd.check(r.lo < r.hi, "delta_hi", "need delta_lo < delta_hi");
            rd.check(2.0 + r.lo > 0, "delta_lo", "need 2 + delta_lo > 0");
            rd.check(r.steps >= 3, "steps", "steps must be >= 3");
            rd.check(r.step > 0, "grid_step", "grid_step must be > 0");
            rd.check(!r.half_width || *r.half_width > 0, "half_width", "half_width must be > 0");
            rd.check(r.levels >= 1, "levels", "levels must be >= 1");
            rd.check(r.lambda > 0, "lambda", "lambda must be > 0");
        } else if (s.type == "alc") {
            auto& a = s.alc;
            a.alphas = rd.numbers("alpha", true);
            a.pairs = rd.pairs("pairs");
            a.backend = rd.choice("backend", {"harmonic", "numerical"}, "harmonic");
            a.lo = rd.number("delta_lo", -0.05).value_or(-0.05);
            a.hi = rd.number("delta_hi", 0.05).value_or(0.05);
            a.tol = rd.number("tol", 1e-8).value_or(1e-8);
            a.step = rd.number("grid_step", 0.005).value_or(0.005);
            a.lambda = rd.number("lambda", 1.0).value_or(1.0);
            for (double v : a.alphas)
                rd.check(v > 0, "alpha", "every alpha must be > 0");
            rd.check(a.lo < a.hi, "delta_hi", "need delta_lo < delta_hi");
            rd.check(2.0 + a.lo > 0, "delta_lo", "need 2 + delta_lo > 0");
            rd.check(a.tol > 0, "tol", "tol must be > 0");
            rd.check(a.step > 0, "grid_step", "grid_step must be > 0");
            rd.check(a.lambda > 0, "lambda", "lambda must be > 0");
        } else {
            auto& c = s.cusp;
            c.a = rd.number("a", -2.0).value_or(-2.0);
            c.b_lo = rd.number("b_lo", 0.0, true).value_or(0.0);
            c.b_hi = rd.number("b_hi", 0.0, true).value_or(0.0);
            c.steps = rd.integer("steps", 0, true).value_or(0);
            c.step = rd.number("grid_step", 0.01).value_or(0.01);
            c.half_width = rd.number("half_width");
            c.lambda = rd.number("lambda", 1.0).value_or(1.0);
            rd.check(c.b_lo < c.b_hi, "b_hi", "need b_lo < b_hi");
            rd.check(c.steps >= 3, "steps", "steps must be >= 3");
            rd.check(c.step > 0, "grid_step", "grid_step must be > 0");
            rd.check(!c.half_width || *c.half_width > 0, "half_width", "half_width must be > 0");
            rd.check(c.lambda > 0, "lambda", "lambda must be > 0");
        }
        rd.finish(s.type);
        scans.push_back(std::move(s));
    }
    if (!errors.empty())
        throw io::ConfigError(std::move(errors));
    return scans;
}

std::string utc_timestamp()
{
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ScanOutcome
{
    json summary;
    std::vector<json> results;
    bool failed = false;
};

ScanOutcome run_relocalization(const Scan& s, std::ostream& csv_out, unsigned jobs)
{
    const auto& r = s.reloc;
    double half_width = 0.0;
    if (r.half_width) {
        half_width = *r.half_width;
    } else {
        for (double d : {r.lo, r.hi}) {
            auto h = harmonic_spectrum_n2(r.alpha, beta_from_delta(r.alpha, d), 0, 0, r.lambda);
            const double e_max = (2.0 * static_cast<double>(r.levels) + 1.0) * r.lambda * h.spring_central;
            half_width = std::max(half_width, choose_domain(symmetric_n2(r.alpha, d), e_max));
        }
    }
    const auto cfg = SolverConfig::with_step(half_width, r.step, static_cast<std::size_t>(r.levels), r.lambda);
    const auto scan = relocalization_scan(r.alpha, r.lo, r.hi, static_cast<int>(r.steps), cfg, jobs);

    ScanOutcome out;
    io::CsvWriter csv(csv_out, {"delta", "E0", "w_central", "w_outer", "label"});
    for (const auto& row : scan.rows) {
        csv.cell(row.delta).cell(row.e0).cell(row.w_central).cell(row.w_outer).cell(row.label).end_row();
        out.results.push_back({{"scan", s.name},
                               {"delta", json_number(row.delta)},
                               {"E0", json_number(row.e0)},
                               {"w_central", json_number(row.w_central)},
                               {"w_outer", json_number(row.w_outer)},
                               {"label", row.label}});
    }
    out.summary["crossing"] = scan.crossing ? json_number(*scan.crossing) : json(nullptr);
    out.summary["half_width"] = json_number(cfg.half_width);
    out.summary["grid_points"] = cfg.grid_points;
    if (!scan.crossing)
        std::fprintf(stderr, "sweep: scan '%s': no crossing\n", s.name.c_str());
    return out;
}

ScanOutcome run_alc(const Scan& s, std::ostream& csv_out, unsigned jobs)
{
    const auto& a = s.alc;
    struct Point
    {
        double alpha;
        int m, n;
        std::optional<AlcSolution> sol;
        std::string error;
    };
    std::vector<Point> points;
    for (double alpha : a.alphas)
        for (auto [m, n] : a.pairs)
            points.push_back({alpha, m, n, std::nullopt, {}});
    parallel_for(points.size(), jobs, [&](std::size_t i) {
        AlcQuery q;
        q.m = points[i].m;
        q.n = points[i].n;
        q.alpha = points[i].alpha;
        q.lo = a.lo;
        q.hi = a.hi;
        q.backend = a.backend == "numerical" ? AlcBackend::numerical : AlcBackend::harmonic;
        q.lambda = a.lambda;
        q.grid_step = a.step;
        q.tol = a.tol;
        try {
            points[i].sol = alc_delta(q);
        } catch (const std::exception& e) {
            points[i].error = e.what();
        }
    });

    ScanOutcome out;
    io::CsvWriter csv(csv_out, {"alpha", "m", "n", "delta", "residual"});
    for (const auto& p : points) {
        const double delta = p.sol ? p.sol->delta : std::nan("");
        const double residual = p.sol ? p.sol->residual : std::nan("");
        csv.cell(p.alpha).cell(p.m).cell(p.n).cell(delta).cell(residual).end_row();
        json row{{"scan", s.name},
                 {"alpha", json_number(p.alpha)},
                 {"m", p.m},
                 {"n", p.n},
                 {"delta", json_number(delta)},
                 {"residual", json_number(residual)}};
        if (!p.sol) {
            row["error"] = p.error;
            out.failed = true;
            std::fprintf(stderr, "sweep: scan '%s' (alpha=%g, m=%d, n=%d): %s\n", s.name.c_str(), p.alpha, p.m, p.n,
                         p.error.c_str());
        }
        out.results.push_back(row);
    }
    return out;
}

ScanOutcome run_cusp(const Scan& s, std::ostream& csv_out, unsigned jobs)
{
    const auto& c = s.cusp;
    double half_width = c.half_width.value_or(0.0);
    if (!c.half_width)
        for (double b : {c.b_lo, c.b_hi})
            half_width = std::max(half_width, choose_domain(Polynomial{0.0, b, c.a, 0.0, 1.0}, 10.0 * (1.0 + std::fabs(c.a))));
    const auto cfg = SolverConfig::with_step(half_width, c.step, 1, c.lambda);
    const auto rows = cusp_scan(c.a, c.b_lo, c.b_hi, static_cast<int>(c.steps), cfg, jobs);

    ScanOutcome out;
    io::CsvWriter csv(csv_out, {"b", "E0", "w_left"});
    for (const auto& r : rows) {
        csv.cell(r.b).cell(r.e0).cell(r.w_left).end_row();
        out.results.push_back({{"scan", s.name}, {"b", json_number(r.b)}, {"E0", json_number(r.e0)}, {"w_left", json_number(r.w_left)}});
    }
    out.summary["half_width"] = json_number(cfg.half_width);
    return out;
}

} // namespace

int run_sweep(const SweepOptions& opt, const Common& common)
{
    std::ifstream in(opt.config);
    if (!in)
        throw UsageError("cannot read config file '" + opt.config + "'");
    std::vector<std::string> syntax;
    const auto cfg = io::Config::parse(in, opt.config, syntax);
    const auto scans = read_scans(cfg, std::move(syntax));
    const unsigned jobs = opt.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.jobs;

    std::error_code ec;
    std::filesystem::create_directories(opt.output_dir, ec);
    if (ec)
        throw UsageError("cannot create output directory '" + opt.output_dir + "': " + ec.message());

    json manifest;
    manifest["command"] = "sweep";
    manifest["tool_version"] = version;
    manifest["started"] = utc_timestamp();
    json params;
    params["config"] = opt.config;
    params["jobs"] = jobs;
    params["output_dir"] = opt.output_dir;
    json scan_params = json::object();
    for (const auto& s : scans)
        scan_params[s.name] = s.params;
    params["scans"] = scan_params;
    manifest["params"] = params;
    manifest["results"] = json::array();
    manifest["scans"] = json::array();
    manifest["timings"] = json::object();

    bool failed = false;
    const auto t_all = std::chrono::steady_clock::now();
    for (const auto& s : scans) {
        const std::string csv_name = s.name + ".csv";
        const auto path = std::filesystem::path(opt.output_dir) / csv_name;
        std::ofstream csv(path, std::ios::binary);
        if (!csv)
            throw UsageError("cannot write '" + path.string() + "'");
        const auto t0 = std::chrono::steady_clock::now();
        ScanOutcome outcome;
        if (s.type == "relocalization")
            outcome = run_relocalization(s, csv, jobs);
        else if (s.type == "alc")
            outcome = run_alc(s, csv, jobs);
        else
            outcome = run_cusp(s, csv, jobs);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed = failed || outcome.failed;

        json summary = outcome.summary;
        summary["name"] = s.name;
        summary["type"] = s.type;
        summary["csv"] = csv_name;
        summary["points"] = outcome.results.size();
        summary["status"] = outcome.failed ? "partial" : "ok";
        manifest["scans"].push_back(summary);
        for (auto& r : outcome.results)
            manifest["results"].push_back(std::move(r));
        manifest["timings"][s.name] = seconds;
        if (common.verbose)
            std::fprintf(stderr, "sweep: %s (%s) %zu points in %.3f s\n", s.name.c_str(), s.type.c_str(),
                         outcome.results.size(), seconds);
    }
    manifest["timings"]["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all).count();

    std::ofstream mf(std::filesystem::path(opt.output_dir) / "manifest.json", std::ios::binary);
    if (!mf)
        throw UsageError("cannot write manifest in '" + opt.output_dir + "'");
    mf << manifest.dump(2) << '\n';
    return failed ? exit_numeric : exit_ok;
}

} // namespace arnoldqc::cli

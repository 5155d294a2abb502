#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "arnoldqc/catastrophe.hpp"

namespace arnoldqc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numeric = 2;
inline constexpr int exit_usage = 64;

/// Bad flags or flag combinations; maps to exit_usage.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Common
{
    std::string format = "csv";
    std::string output;
    bool verbose = false;
};

/// stdout unless a path was given.
class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-")
            return;
        file_.open(path, std::ios::binary);
        if (!file_)
            throw UsageError("cannot open output file '" + path + "'");
        os_ = &file_;
    }

    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = &std::cout;
};

/// JSON number at the CSV precision; NaN and infinities become null.
nlohmann::json json_number(double x);

/// Exactly one of: N = 2 couplings (alpha with mu2 or delta, optional
/// epsilon), a shape (increments), or raw coefficients in descending powers.
struct PotentialSource
{
    std::optional<double> alpha;
    std::optional<double> mu2;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::string increments;
    std::string coefficients;
    double lambda = 1.0;
};

struct ResolvedPotential
{
    Polynomial p;
    std::string description;
};

ResolvedPotential resolve(const PotentialSource& src);

struct GridOptions
{
    double step = 0.005;
    std::optional<double> half_width;
};

struct Table1Options
{
    double alpha = 4.0;
    bool compare = false;
    std::string backend = "harmonic";
};

struct SpectrumOptions
{
    PotentialSource source;
    GridOptions grid;
    int levels = 6;
    std::string backend = "harmonic";
    bool compare = false;
};

struct DensityOptions
{
    PotentialSource source;
    GridOptions grid;
    int level = 0;
};

struct LocusOptions
{
    double alpha = 4.0;
    double eps_lo = 0.0;
    double eps_hi = 1.0;
    int steps = 11;
    std::string method = "both";
};

struct SweepOptions
{
    std::string config;
    std::string output_dir = ".";
    unsigned jobs = 1;
};

int run_table1(const Table1Options& opt, const Common& common);
int run_spectrum(const SpectrumOptions& opt, const Common& common);
int run_density(const DensityOptions& opt, const Common& common);
int run_locus(const LocusOptions& opt, const Common& common);
int run_sweep(const SweepOptions& opt, const Common& common);

} // namespace arnoldqc::cli

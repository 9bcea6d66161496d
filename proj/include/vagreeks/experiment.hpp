#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vagreeks/greeks.hpp"

namespace vag {

/// Built-in Heston-CIR parameter sets 'A'..'E' (V0 = theta_V, r0 = theta_r).
/// Throws ConfigError for other ids.
ModelParams builtin_case(char id);

enum class OutputFormat { table, csv };

struct RunConfig {
    std::optional<char> case_id;
    std::optional<ModelParams> params;
    ProductSpec product;
    std::optional<std::string> mortality_file;
    std::vector<Estimator> estimators{Estimator::bump, Estimator::pathwise, Estimator::clrm, Estimator::mixed_pw_lr};
    std::size_t n_paths = 36000;   // bump set-up
    std::size_t n_outer = 10000;   // nested set-up
    std::size_t n_inner = 10;
    int steps_per_year = 20;
    double bump = 0.005;
    BumpScheme scheme = BumpScheme::central;
    Quadrature quadrature = Quadrature::left_riemann;
    std::uint64_t seed = 20100101;
    unsigned threads = 0;
    double s0 = 10000.0;
    std::string out;
    OutputFormat format = OutputFormat::table;

    /// Throws ConfigError: needs exactly one of case id / explicit params and
    /// positive counts.
    void validate() const;
    bool wants(Estimator e) const;
    ModelParams model() const;
    std::string label() const;
};

/// Applies one `key = value` setting (config file or CLI flag). Model keys
/// (kappa_v, ..., rho_vr) switch the config to explicit parameters.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);
/// Flat key-value file: `key = value` per line, '#' starts a comment.
void load_config_file(RunConfig& config, const std::string& path);

struct ResultRow {
    std::string case_id;
    GreekEstimate estimate;
};

/// Runs the requested set-ups and returns one row per (estimator, order).
std::vector<ResultRow> run_case(const RunConfig& config);

inline constexpr std::string_view kCsvHeader = "case,estimator,order,value,std_err,n_outer,n_inner,seed,runtime_s";
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Parses rows written by write_csv; throws std::runtime_error on malformed input.
std::vector<ResultRow> read_csv(std::istream& in);
void write_table(std::ostream& out, const std::vector<ResultRow>& rows);

struct ValidationOptions {
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 7;
    unsigned threads = 0;
    double tolerance_se = 3.0;
    double asian_bump = 0.005;
    /// Test hook: flips the sign of the middle term of the LRM gamma weight.
    bool corrupt_gamma_weight = false;
};

struct ValidationCheck {
    std::string name;
    double estimate = 0.0;
    double std_err = 0.0;
    double expected = 0.0;
    double deviation_se = 0.0;
    bool passed = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double seconds = 0.0;
    bool passed() const;
};

/// Black-Scholes oracle battery (S0 = K = 100, r = 5%, sigma = 20%, T = 1):
/// pathwise/LRM/mixed estimators against closed forms, digital delta on the
/// call's weight stream, weight centering and the Asian LRM delta against a
/// common-random-number bump. Throws ConfigError for samples < 2.
ValidationReport validate(const ValidationOptions& options = {});
void write_report(std::ostream& out, const ValidationReport& report);

}  // namespace vag

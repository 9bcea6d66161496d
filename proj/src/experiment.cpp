#include "vagreeks/experiment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vagreeks/bs_kernel.hpp"
#include "vagreeks/errors.hpp"
#include "vagreeks/parallel.hpp"
#include "vagreeks/rng.hpp"

namespace vag {

ModelParams builtin_case(char id) {
    ModelParams p;  // shared: theta_V = theta_r = 0.04, rho_Sr = -0.3, rho_Vr = 0.2
    switch (id) {
        case 'A': p.kappa_v = 2.0; p.sigma_v = 0.15; p.kappa_r = 0.4; p.sigma_r = 0.1; p.rho_sv = -0.7; break;
        case 'B': p.kappa_v = 1.0; p.sigma_v = 0.30; p.kappa_r = 0.4; p.sigma_r = 0.1; p.rho_sv = -0.7; break;
        case 'C': p.kappa_v = 2.0; p.sigma_v = 0.15; p.kappa_r = 0.2; p.sigma_r = 0.2; p.rho_sv = -0.7; break;
        case 'D': p.kappa_v = 1.0; p.sigma_v = 0.30; p.kappa_r = 0.2; p.sigma_r = 0.2; p.rho_sv = -0.7; break;
        case 'E': p.kappa_v = 1.0; p.sigma_v = 0.30; p.kappa_r = 0.2; p.sigma_r = 0.2; p.rho_sv = -0.9; break;
        default: throw ConfigError(std::string("unknown case '") + id + "' (expected A-E)");
    }
    p.theta_v = 0.04;
    p.theta_r = 0.04;
    p.rho_sr = -0.3;
    p.rho_vr = 0.2;
    p.v0 = p.theta_v;
    p.r0 = p.theta_r;
    return p;
}

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    if (case_id.has_value() == params.has_value()) {
        throw ConfigError("exactly one of a case id or explicit model parameters must be given");
    }
    if (case_id) builtin_case(*case_id);
    if (estimators.empty()) throw ConfigError("no estimators selected");
    if (wants(Estimator::bump) && n_paths < 2) throw ConfigError("paths must be at least 2");
    const bool nested = wants(Estimator::pathwise) || wants(Estimator::clrm) || wants(Estimator::mixed_pw_lr) ||
                        wants(Estimator::nested);
    if (nested && (n_outer < 2 || n_inner < 1)) throw ConfigError("outer must be at least 2 and inner at least 1");
    if (steps_per_year < 1) throw ConfigError("steps-per-year must be positive");
    if (!(bump > 0.0 && bump < 1.0)) throw ConfigError("bump must lie in (0, 1)");
    if (!(s0 > 0.0)) throw ConfigError("s0 must be positive");
    try {
        model().validate();
        product.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

bool RunConfig::wants(Estimator e) const {
    return std::find(estimators.begin(), estimators.end(), e) != estimators.end();
}

ModelParams RunConfig::model() const {
    if (params) return *params;
    if (case_id) return builtin_case(*case_id);
    throw ConfigError("no model parameters configured");
}

std::string RunConfig::label() const { return case_id ? std::string(1, *case_id) : std::string("custom"); }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string normalise_key(std::string_view key) {
    std::string k(trim(key));
    std::replace(k.begin(), k.end(), '-', '_');
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return k;
}

double to_double(std::string_view key, std::string_view v) {
    const std::string s(trim(v));
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used == s.size()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad number for " + std::string(key) + ": '" + s + "'");
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
    const std::string_view s = trim(v);
    Int x{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(s) + "'");
    }
    return x;
}

bool to_bool(std::string_view key, std::string_view v) {
    const std::string s = normalise_key(v);
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("bad boolean for " + std::string(key) + ": '" + s + "'");
}

std::vector<Estimator> parse_estimators(std::string_view v) {
    std::vector<Estimator> out;
    std::string_view rest = v;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string name = normalise_key(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (name.empty()) continue;
        if (name == "all") {
            out = {Estimator::bump, Estimator::pathwise, Estimator::clrm, Estimator::mixed_pw_lr};
            continue;
        }
        const Estimator e = parse_estimator(name);
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
    return out;
}

double* model_field(ModelParams& p, const std::string& key) {
    if (key == "kappa_v") return &p.kappa_v;
    if (key == "theta_v") return &p.theta_v;
    if (key == "sigma_v") return &p.sigma_v;
    if (key == "v0") return &p.v0;
    if (key == "kappa_r") return &p.kappa_r;
    if (key == "theta_r") return &p.theta_r;
    if (key == "sigma_r") return &p.sigma_r;
    if (key == "r0") return &p.r0;
    if (key == "rho_sv") return &p.rho_sv;
    if (key == "rho_sr") return &p.rho_sr;
    if (key == "rho_vr") return &p.rho_vr;
    return nullptr;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view raw_key, std::string_view value) {
    const std::string key = normalise_key(raw_key);
    const std::string v(trim(value));

    ModelParams scratch;
    if (model_field(scratch, key)) {
        if (!c.params) c.params = ModelParams{};
        *model_field(*c.params, key) = to_double(key, v);
        return;
    }

    if (key == "case") {
        if (v.size() != 1) throw ConfigError("unknown case '" + v + "' (expected A-E)");
        const char id = static_cast<char>(std::toupper(static_cast<unsigned char>(v[0])));
        builtin_case(id);
        c.case_id = id;
    } else if (key == "estimators") {
        c.estimators = parse_estimators(v);
    } else if (key == "paths") {
        c.n_paths = to_int<std::size_t>(key, v);
    } else if (key == "outer") {
        c.n_outer = to_int<std::size_t>(key, v);
    } else if (key == "inner") {
        c.n_inner = to_int<std::size_t>(key, v);
    } else if (key == "steps_per_year") {
        c.steps_per_year = to_int<int>(key, v);
    } else if (key == "bump") {
        c.bump = to_double(key, v);
    } else if (key == "scheme") {
        if (v == "central") c.scheme = BumpScheme::central;
        else if (v == "forward") c.scheme = BumpScheme::forward;
        else throw ConfigError("unknown bump scheme '" + v + "'");
    } else if (key == "quadrature") {
        if (v == "left" || v == "left_riemann") c.quadrature = Quadrature::left_riemann;
        else if (v == "trapezoid") c.quadrature = Quadrature::trapezoid;
        else throw ConfigError("unknown quadrature '" + v + "'");
    } else if (key == "seed") {
        c.seed = to_int<std::uint64_t>(key, v);
    } else if (key == "threads") {
        c.threads = to_int<unsigned>(key, v);
    } else if (key == "s0") {
        c.s0 = to_double(key, v);
    } else if (key == "out") {
        c.out = v;
    } else if (key == "format") {
        if (v == "table") c.format = OutputFormat::table;
        else if (v == "csv") c.format = OutputFormat::csv;
        else throw ConfigError("unknown format '" + v + "' (table or csv)");
    } else if (key == "mortality") {
        c.mortality_file = v;
        try {
            c.product.mortality = MortalityTable::load(v);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("mortality table '" + v + "': " + e.what());
        }
    } else if (key == "premium") {
        c.product.premium = to_double(key, v);
    } else if (key == "withdrawal_rate") {
        c.product.withdrawal_rate = to_double(key, v);
    } else if (key == "guarantee_charge") {
        c.product.guarantee_charge = to_double(key, v);
    } else if (key == "fund_charge") {
        c.product.fund_charge = to_double(key, v);
    } else if (key == "ratchet_years") {
        c.product.ratchet_years = to_int<int>(key, v);
    } else if (key == "ratchet_cap") {
        c.product.ratchet_cap = to_double(key, v);
    } else if (key == "term") {
        c.product.term = to_int<int>(key, v);
    } else if (key == "lapse_rate") {
        c.product.lapse_rate = to_double(key, v);
    } else if (key == "issue_age") {
        c.product.issue_age = to_int<int>(key, v);
    } else if (key == "guarantee_follows_equity") {
        c.product.guarantee_follows_equity = to_bool(key, v);
    } else if (key == "floor_rule") {
        if (v == "indicator") c.product.floor_rule = FundFloorRule::indicator;
        else if (v == "literal_max") c.product.floor_rule = FundFloorRule::literal_max;
        else throw ConfigError("unknown floor rule '" + v + "'");
    } else {
        throw ConfigError("unknown setting '" + key + "'");
    }
}

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

// ---------------------------------------------------------------- runs

std::vector<ResultRow> run_case(const RunConfig& config) {
    config.validate();
    const ModelParams params = config.model();
    const std::string label = config.label();
    SimulationSettings sim;
    sim.steps_per_year = config.steps_per_year;
    sim.quadrature = config.quadrature;
    sim.threads = config.threads;
    sim.seed = config.seed;

    std::vector<ResultRow> rows;
    auto push = [&](const GreekEstimate& e) { rows.push_back({label, e}); };

    if (config.wants(Estimator::bump)) {
        const BumpResult b =
            va_bump_revalue(params, config.product, config.s0, config.n_paths, config.bump, config.scheme, sim);
        push(b.value);
        push(b.delta);
        push(b.gamma);
    }
    const bool nested = config.wants(Estimator::pathwise) || config.wants(Estimator::clrm) ||
                        config.wants(Estimator::mixed_pw_lr) || config.wants(Estimator::nested);
    if (nested) {
        const NestedBatch batch(params, config.s0, config.n_outer, config.n_inner, config.product.term, sim);
        const NestedEstimates e = nested_estimates(batch, config.product);
        push(e.liability);
        if (config.wants(Estimator::pathwise)) push(e.pathwise_delta);
        if (config.wants(Estimator::clrm)) {
            push(e.clrm_delta);
            push(e.clrm_gamma);
        }
        if (config.wants(Estimator::mixed_pw_lr)) push(e.mixed_gamma);
    }
    return rows;
}

// ---------------------------------------------------------------- output

namespace {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        const GreekEstimate& e = r.estimate;
        out << r.case_id << ',' << to_string(e.estimator) << ',' << to_string(e.order) << ',' << format_g17(e.value)
            << ',' << format_g17(e.std_err) << ',' << e.n_outer << ',' << e.n_inner << ',' << e.seed << ','
            << format_g17(e.runtime_s) << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 9) throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 9 fields");
        try {
            ResultRow r;
            r.case_id = f[0];
            r.estimate.estimator = parse_estimator(f[1]);
            r.estimate.order = parse_order(f[2]);
            r.estimate.value = std::stod(f[3]);
            r.estimate.std_err = std::stod(f[4]);
            r.estimate.n_outer = std::stoull(f[5]);
            r.estimate.n_inner = std::stoull(f[6]);
            r.estimate.seed = std::stoull(f[7]);
            r.estimate.runtime_s = std::stod(f[8]);
            rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_table(std::ostream& out, const std::vector<ResultRow>& rows) {
    const std::ios::fmtflags flags = out.flags();
    out << std::left << std::setw(6) << "case" << std::setw(13) << "estimator" << std::setw(11) << "order"
        << std::right << std::setw(15) << "value" << std::setw(13) << "std_err" << std::setw(9) << "outer"
        << std::setw(7) << "inner" << std::setw(10) << "time_s" << '\n';
    for (const auto& r : rows) {
        const GreekEstimate& e = r.estimate;
        out << std::left << std::setw(6) << r.case_id << std::setw(13) << to_string(e.estimator) << std::setw(11)
            << to_string(e.order) << std::right << std::setw(15) << std::setprecision(6) << e.value << std::setw(13)
            << std::setprecision(3) << e.std_err << std::setw(9) << e.n_outer << std::setw(7) << e.n_inner
            << std::setw(10) << std::fixed << std::setprecision(2) << e.runtime_s << '\n';
        out.flags(flags);
    }
    out.flags(flags);
}

// ---------------------------------------------------------------- validation

bool ValidationReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ValidationReport validate(const ValidationOptions& opt) {
    if (opt.samples < 2) throw ConfigError("validation needs at least 2 samples");
    const auto start = std::chrono::steady_clock::now();

    const EuropeanSpec call{};  // S0 = K = 100, r = 5%, sigma = 20%, T = 1
    EuropeanSpec digital = call;
    digital.payoff = Payoff::digital;
    AsianSpec asian;
    for (int j = 1; j <= 12; ++j) asian.dates.push_back(j / 12.0);
    const double sqrt_t = std::sqrt(call.maturity);
    const double s0 = call.s0;
    const double h = opt.asian_bump;

    enum Col { price, pw_delta, lrm_delta, lrm_gamma, lr_pw, pw_lr, dig_delta, w_delta, w_gamma, asian_lrm, asian_bump,
               n_cols };
    std::vector<double> samples(opt.samples * n_cols);
    const NormalStream stream(opt.seed);

    parallel_for(opt.samples, opt.threads, [&](std::size_t i) {
        double* row = &samples[i * n_cols];
        const auto idx = static_cast<std::uint32_t>(i);
        const double z = stream.pair(idx, 0, 0, Lane::oracle).first;
        const double s_t = terminal_level(call, z);
        const double payoff = discounted_payoff(call, s_t);
        const double wd = lrm_delta_weight(z, s0, call.vol, call.maturity);
        double wg = lrm_gamma_weight(z, s0, call.vol, call.maturity);
        if (opt.corrupt_gamma_weight) {
            wg += 2.0 * z * call.vol * sqrt_t / (s0 * s0 * call.vol * call.vol * call.maturity);
        }
        row[price] = payoff;
        row[pw_delta] = pathwise_delta_sample(call, s_t);
        row[lrm_delta] = payoff * wd;
        row[lrm_gamma] = payoff * wg;
        row[lr_pw] = mixed_gamma_lr_pw_sample(call, s_t, z);
        row[pw_lr] = mixed_gamma_pw_lr_sample(call, s_t, z);
        row[dig_delta] = discounted_payoff(digital, s_t) * wd;
        row[w_delta] = wd;
        row[w_gamma] = wg;

        std::array<double, 12> shocks{}, levels{}, up{}, down{};
        for (std::size_t j = 0; j < shocks.size(); j += 2) {
            const auto [a, b] = stream.pair(idx, 0, static_cast<std::uint32_t>(j / 2), Lane::asian);
            shocks[j] = a;
            shocks[j + 1] = b;
        }
        AsianSpec bumped = asian;
        asian_path(asian, shocks, levels);
        row[asian_lrm] = asian_lrm_delta_sample(asian, levels, shocks[0]);
        bumped.s0 = asian.s0 * (1.0 + h);
        asian_path(bumped, shocks, up);
        bumped.s0 = asian.s0 * (1.0 - h);
        asian_path(bumped, shocks, down);
        row[asian_bump] = (asian_discounted_payoff(asian, up) - asian_discounted_payoff(asian, down)) /
                          (2.0 * h * asian.s0);
    });

    std::array<SampleAccumulator, n_cols> acc{};
    for (std::size_t i = 0; i < opt.samples; ++i) {
        for (int c = 0; c < n_cols; ++c) acc[c].add(samples[i * n_cols + c]);
    }
    // Asian check compares two estimators on the same draws.
    SampleAccumulator asian_diff;
    for (std::size_t i = 0; i < opt.samples; ++i) {
        asian_diff.add(samples[i * n_cols + asian_lrm] - samples[i * n_cols + asian_bump]);
    }

    ValidationReport report;
    auto check = [&](std::string name, double estimate, double se, double expected) {
        ValidationCheck c{std::move(name), estimate, se, expected, 0.0, false};
        const double diff = estimate - expected;
        c.deviation_se = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
        c.passed = std::abs(c.deviation_se) <= opt.tolerance_se;
        report.checks.push_back(std::move(c));
    };
    auto col = [&](Col c, std::string name, double expected) {
        check(std::move(name), acc[c].mean(), acc[c].std_error(), expected);
    };
    col(price, "call price", bs_call_price(call));
    col(pw_delta, "pathwise delta", bs_call_delta(call));
    col(lrm_delta, "LRM delta", bs_call_delta(call));
    col(lrm_gamma, "LRM gamma", bs_call_gamma(call));
    col(lr_pw, "LR-PW gamma", bs_call_gamma(call));
    col(pw_lr, "PW-LR gamma", bs_call_gamma(call));
    col(dig_delta, "digital LRM delta", bs_digital_delta(digital));
    col(w_delta, "delta weight mean", 0.0);
    col(w_gamma, "gamma weight mean", 0.0);
    check("Asian LRM - bump delta", asian_diff.mean(), asian_diff.std_error(), 0.0);

    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report(std::ostream& out, const ValidationReport& report) {
    const std::ios::fmtflags flags = out.flags();
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(24) << c.name << std::right
            << std::setprecision(8) << " estimate=" << std::setw(14) << c.estimate << " expected=" << std::setw(14)
            << c.expected << " se=" << std::setw(11) << std::setprecision(3) << c.std_err << " dev="
            << std::fixed << std::setprecision(2) << std::setw(7) << c.deviation_se << " SE\n";
        out.flags(flags);
    }
    out << (report.passed() ? "all checks passed" : "validation FAILED") << " (" << std::setprecision(3)
        << report.seconds << " s)\n";
    out.flags(flags);
}

}  // namespace vag

#include "vagreeks/bs_kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vagreeks/errors.hpp"

namespace vag {

double norm_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double norm_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

void EuropeanSpec::validate() const {
    if (!(s0 > 0.0) || !(strike > 0.0) || !(vol > 0.0) || !(maturity > 0.0)) {
        throw std::invalid_argument("European spec needs S0, K, sigma, T > 0");
    }
}

namespace {

struct D12 {
    double d1;
    double d2;
    double vol_sqrt_t;
};

D12 d_terms(double s0, double strike, double rate, double vol, double t) {
    const double vst = vol * std::sqrt(t);
    const double d1 = (std::log(s0 / strike) + (rate + 0.5 * vol * vol) * t) / vst;
    return {d1, d1 - vst, vst};
}

double call_formula(double s0, double strike, double rate, double vol, double t) {
    const auto d = d_terms(s0, strike, rate, vol, t);
    return s0 * norm_cdf(d.d1) - strike * std::exp(-rate * t) * norm_cdf(d.d2);
}

}  // namespace

double bs_call_price(const EuropeanSpec& s) {
    s.validate();
    return call_formula(s.s0, s.strike, s.rate, s.vol, s.maturity);
}

double bs_call_delta(const EuropeanSpec& s) {
    s.validate();
    return norm_cdf(d_terms(s.s0, s.strike, s.rate, s.vol, s.maturity).d1);
}

double bs_call_gamma(const EuropeanSpec& s) {
    s.validate();
    const auto d = d_terms(s.s0, s.strike, s.rate, s.vol, s.maturity);
    return norm_pdf(d.d1) / (s.s0 * d.vol_sqrt_t);
}

double bs_digital_price(const EuropeanSpec& s) {
    s.validate();
    return std::exp(-s.rate * s.maturity) * norm_cdf(d_terms(s.s0, s.strike, s.rate, s.vol, s.maturity).d2);
}

double bs_digital_delta(const EuropeanSpec& s) {
    s.validate();
    const auto d = d_terms(s.s0, s.strike, s.rate, s.vol, s.maturity);
    return std::exp(-s.rate * s.maturity) * norm_pdf(d.d2) / (s.s0 * d.vol_sqrt_t);
}

double terminal_level(const EuropeanSpec& s, double z) noexcept {
    return s.s0 * std::exp((s.rate - 0.5 * s.vol * s.vol) * s.maturity + s.vol * std::sqrt(s.maturity) * z);
}

double discounted_payoff(const EuropeanSpec& s, double s_t) noexcept {
    const double df = std::exp(-s.rate * s.maturity);
    if (s.payoff == Payoff::digital) return s_t > s.strike ? df : 0.0;
    return df * std::max(s_t - s.strike, 0.0);
}

double pathwise_delta_sample(const EuropeanSpec& s, double s_t) {
    if (s.payoff == Payoff::digital) {
        throw UnsupportedPayoff("pathwise delta is inapplicable to the discontinuous digital payoff");
    }
    return s_t > s.strike ? std::exp(-s.rate * s.maturity) * s_t / s.s0 : 0.0;
}

double lrm_delta_weight(double z, double s0, double vol, double maturity) noexcept {
    return z / (s0 * vol * std::sqrt(maturity));
}

double lrm_gamma_weight(double z, double s0, double vol, double maturity) noexcept {
    const double vst = vol * std::sqrt(maturity);
    return (z * z - z * vst - 1.0) / (s0 * s0 * vst * vst);
}

double mixed_gamma_lr_pw_sample(const EuropeanSpec& s, double s_t, double z) {
    if (s.payoff == Payoff::digital) throw UnsupportedPayoff("mixed gamma estimators are defined for the call payoff");
    if (!(s_t > s.strike)) return 0.0;
    return std::exp(-s.rate * s.maturity) * s.strike * z / (s.s0 * s.s0 * s.vol * std::sqrt(s.maturity));
}

double mixed_gamma_pw_lr_sample(const EuropeanSpec& s, double s_t, double z) {
    if (s.payoff == Payoff::digital) throw UnsupportedPayoff("mixed gamma estimators are defined for the call payoff");
    if (!(s_t > s.strike)) return 0.0;
    return std::exp(-s.rate * s.maturity) * (s_t / (s.s0 * s.s0)) * (z / (s.vol * std::sqrt(s.maturity)) - 1.0);
}

void AsianSpec::validate() const {
    if (!(s0 > 0.0) || !(strike > 0.0) || !(vol > 0.0)) throw std::invalid_argument("Asian spec needs S0, K, sigma > 0");
    if (dates.empty()) throw std::invalid_argument("Asian spec needs at least one observation date");
    if (!(dates.front() > 0.0)) throw std::invalid_argument("first observation date must be positive");
    for (std::size_t j = 1; j < dates.size(); ++j) {
        if (!(dates[j] > dates[j - 1])) throw std::invalid_argument("observation dates must be strictly increasing");
    }
}

void asian_path(const AsianSpec& spec, std::span<const double> shocks, std::span<double> levels) {
    double prev_t = 0.0;
    double s = spec.s0;
    const double drift = spec.rate - 0.5 * spec.vol * spec.vol;
    for (std::size_t j = 0; j < spec.dates.size(); ++j) {
        const double h = spec.dates[j] - prev_t;
        s *= std::exp(drift * h + spec.vol * std::sqrt(h) * shocks[j]);
        levels[j] = s;
        prev_t = spec.dates[j];
    }
}

double asian_discounted_payoff(const AsianSpec& spec, std::span<const double> levels) {
    double sum = 0.0;
    for (std::size_t j = 0; j < spec.dates.size(); ++j) sum += levels[j];
    const double average = sum / static_cast<double>(spec.dates.size());
    return std::exp(-spec.rate * spec.maturity()) * std::max(average - spec.strike, 0.0);
}

double asian_lrm_delta_sample(const AsianSpec& spec, std::span<const double> levels, double z1) {
    return asian_discounted_payoff(spec, levels) * lrm_delta_weight(z1, spec.s0, spec.vol, spec.dates.front());
}

double conditional_bs_price(double s0, double strike, const ConditionalBlock& block) {
    if (!(block.sigma_bar > 0.0)) throw DegenerateVolatility("conditional Black-Scholes price needs sigma_bar > 0");
    return call_formula(s0 * block.xi_bar, strike, block.r_bar, block.sigma_bar, block.horizon);
}

}  // namespace vag

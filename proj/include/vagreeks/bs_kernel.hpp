#pragma once

#include <span>
#include <vector>

#include "vagreeks/scenario.hpp"

namespace vag {

double norm_pdf(double x) noexcept;
/// erfc-based, absolute error well below 1e-15.
double norm_cdf(double x) noexcept;

enum class Payoff { call, digital };

/// Single-asset European contract under Black-Scholes. Digital pays 1 unit.
struct EuropeanSpec {
    double s0 = 100.0;
    double strike = 100.0;
    double rate = 0.05;
    double vol = 0.2;
    double maturity = 1.0;
    Payoff payoff = Payoff::call;

    void validate() const;
};

// Closed forms.
double bs_call_price(const EuropeanSpec& spec);
double bs_call_delta(const EuropeanSpec& spec);
double bs_call_gamma(const EuropeanSpec& spec);
double bs_digital_price(const EuropeanSpec& spec);
double bs_digital_delta(const EuropeanSpec& spec);

/// S_T = S0 exp((r - sigma^2/2) T + sigma sqrt(T) Z).
double terminal_level(const EuropeanSpec& spec, double z) noexcept;
double discounted_payoff(const EuropeanSpec& spec, double s_t) noexcept;

/// e^{-rT} 1{S_T > K} S_T / S0. Throws UnsupportedPayoff for digitals,
/// whose pathwise derivative is zero almost surely yet the delta is not.
double pathwise_delta_sample(const EuropeanSpec& spec, double s_t);

/// Z / (S0 sigma sqrt(T)).
double lrm_delta_weight(double z, double s0, double vol, double maturity) noexcept;
/// (Z^2 - Z sigma sqrt(T) - 1) / (S0^2 sigma^2 T).
double lrm_gamma_weight(double z, double s0, double vol, double maturity) noexcept;

/// e^{-rT} 1{S_T > K} K Z / (S0^2 sigma sqrt(T)).
double mixed_gamma_lr_pw_sample(const EuropeanSpec& spec, double s_t, double z);
/// e^{-rT} 1{S_T > K} (S_T / S0^2) (Z / (sigma sqrt(T)) - 1).
double mixed_gamma_pw_lr_sample(const EuropeanSpec& spec, double s_t, double z);

/// Arithmetic-average Asian call observed at dates t1 < ... < tm.
struct AsianSpec {
    double s0 = 100.0;
    double strike = 100.0;
    double rate = 0.05;
    double vol = 0.2;
    std::vector<double> dates;

    void validate() const;
    double maturity() const { return dates.back(); }
};

/// Exact GBM levels at the observation dates; `shocks` are the standardised
/// increments between consecutive dates (first one is Z1).
void asian_path(const AsianSpec& spec, std::span<const double> shocks, std::span<double> levels);
double asian_discounted_payoff(const AsianSpec& spec, std::span<const double> levels);
/// Discounted payoff times Z1 / (S0 sigma sqrt(t1)); only the first
/// transition density depends on S0.
double asian_lrm_delta_sample(const AsianSpec& spec, std::span<const double> levels, double z1);

/// C^BS(S0 xi, K, sigma_bar, r_bar, T): the call price conditional on a
/// variance/rate realisation. Throws DegenerateVolatility if sigma_bar <= 0.
double conditional_bs_price(double s0, double strike, const ConditionalBlock& block);

}  // namespace vag

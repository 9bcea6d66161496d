#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "vagreeks/parallel.hpp"
#include "vagreeks/scenario.hpp"
#include "vagreeks/stats.hpp"
#include "vagreeks/va_product.hpp"

namespace vag {

enum class Estimator { bump, pathwise, clrm, mixed_pw_lr, nested };
enum class Order { liability, delta, gamma };

std::string_view to_string(Estimator e) noexcept;
std::string_view to_string(Order o) noexcept;
/// Throw ConfigError on unknown names.
Estimator parse_estimator(std::string_view name);
Order parse_order(std::string_view name);

struct GreekEstimate {
    Estimator estimator = Estimator::bump;
    Order order = Order::delta;
    double value = 0.0;
    double std_err = 0.0;
    std::size_t n_outer = 1;
    std::size_t n_inner = 1;
    std::uint64_t seed = 0;
    double runtime_s = 0.0;
};

struct SimulationSettings {
    int steps_per_year = 20;
    Quadrature quadrature = Quadrature::left_riemann;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 20100101;
};

enum class BumpScheme { forward, central };

struct BumpResult {
    GreekEstimate value;
    GreekEstimate delta;
    GreekEstimate gamma;
};

namespace detail {

/// S0 levels evaluated per path, in the order the difference formulas expect.
inline std::array<double, 3> bump_levels(double s0, double h, BumpScheme scheme) {
    if (scheme == BumpScheme::central) return {s0 * (1.0 - h), s0, s0 * (1.0 + h)};
    return {s0, s0 * (1.0 + h), s0 * (1.0 + 2.0 * h)};
}

BumpResult reduce_bump_samples(std::span<const double> values, std::span<const double> deltas,
                               std::span<const double> gammas, std::size_t n_paths, std::uint64_t seed,
                               double seconds);

}  // namespace detail

/// Finite-difference Greeks with common random numbers. `evaluate(path,
/// levels, out)` must fill out[j] with the discounted value of path `path`
/// when the initial level is levels[j], reusing one set of draws for all
/// three levels. Central: delta = (L+ - L-)/(2 h S0), gamma = (L+ - 2 L0 +
/// L-)/(h S0)^2. Forward uses S0, S0(1+h), S0(1+2h). Standard errors come
/// from the per-path differenced samples.
template <class PathEvaluator>
BumpResult bump_revalue(PathEvaluator&& evaluate, std::size_t n_paths, double s0, double h, BumpScheme scheme,
                        unsigned threads = 0, std::uint64_t seed = 0) {
    if (!(h > 0.0)) throw std::invalid_argument("bump fraction must be positive");
    const auto start = std::chrono::steady_clock::now();
    const auto levels = detail::bump_levels(s0, h, scheme);
    const double step = h * s0;

    std::vector<double> values(n_paths), deltas(n_paths), gammas(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t i) {
        std::array<double, 3> out{};
        evaluate(i, std::span<const double>(levels), std::span<double>(out));
        if (scheme == BumpScheme::central) {
            values[i] = out[1];
            deltas[i] = (out[2] - out[0]) / (2.0 * step);
        } else {
            values[i] = out[0];
            deltas[i] = (out[1] - out[0]) / step;
        }
        gammas[i] = (out[2] - 2.0 * out[1] + out[0]) / (step * step);
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return detail::reduce_bump_samples(values, deltas, gammas, n_paths, seed, seconds);
}

/// Bump-and-revalue set-up for the VA liability: independent full scenarios
/// (V, r, S), each revalued at the bumped initial levels on the same draws.
BumpResult va_bump_revalue(const ModelParams& params, const ProductSpec& spec, double s0, std::size_t n_paths,
                           double h, BumpScheme scheme, const SimulationSettings& sim);

/// Nested scenario set: n_outer variance/rate paths, each carrying n_inner
/// equity paths that share its year-one conditional block. Paths are
/// generated on demand from counter-based streams, so any (outer, inner)
/// pair can be reproduced independently.
class NestedBatch {
public:
    NestedBatch(const ModelParams& params, double s0, std::size_t n_outer, std::size_t n_inner, int years,
                const SimulationSettings& sim);

    std::size_t n_outer() const noexcept { return n_outer_; }
    std::size_t n_inner() const noexcept { return n_inner_; }
    double s0() const noexcept { return s0_; }
    const TimeGrid& grid() const noexcept { return grid_; }
    const ModelParams& params() const noexcept { return params_; }
    const CholeskyFactor& cholesky() const noexcept { return chol_; }
    const SimulationSettings& settings() const noexcept { return sim_; }

    void outer_path(std::size_t outer, FactorPath& out) const;
    ConditionalBlock block(const FactorPath& outer) const;
    /// Grid equity levels of inner path `inner`; `z3` is scratch of size N.
    void inner_path(const FactorPath& outer, std::size_t outer_index, std::size_t inner, std::span<double> z3,
                    std::span<double> level) const;

private:
    ModelParams params_;
    CholeskyFactor chol_;
    double s0_;
    std::size_t n_outer_;
    std::size_t n_inner_;
    TimeGrid grid_;
    SimulationSettings sim_;
    NormalStream stream_;
};

/// Per-inner-path samples of every nested estimator.
struct InnerSample {
    double liability = 0.0;
    double pathwise_delta = 0.0;
    double clrm_delta = 0.0;
    double clrm_gamma = 0.0;
    double mixed_gamma = 0.0;
    double delta_weight = 0.0;  // Z* / (S0 sigma_bar sqrt(T))
};

/// Evaluates all nested estimators on one inner path given its annual
/// levels, discount factors and the outer conditional block.
InnerSample inner_sample(const ProductSpec& spec, const SurvivalCurve& surv, std::span<const double> annual_equity,
                         std::span<const double> discount, double s0, const ConditionalBlock& block);

/// Cluster (per-outer) means of each InnerSample field.
struct NestedSamples {
    std::vector<double> liability;
    std::vector<double> pathwise_delta;
    std::vector<double> clrm_delta;
    std::vector<double> clrm_gamma;
    std::vector<double> mixed_gamma;
    std::vector<double> delta_weight;
    double seconds = 0.0;
};

NestedSamples nested_samples(const NestedBatch& batch, const ProductSpec& spec);

struct NestedEstimates {
    GreekEstimate liability;
    GreekEstimate pathwise_delta;
    GreekEstimate clrm_delta;
    GreekEstimate clrm_gamma;
    GreekEstimate mixed_gamma;
    MeanSe delta_weight;
};

/// All nested estimators from one pass; standard errors are clustered over
/// outer paths.
NestedEstimates nested_estimates(const NestedBatch& batch, const ProductSpec& spec);

GreekEstimate pathwise_delta(const NestedBatch& batch, const ProductSpec& spec);
GreekEstimate clrm_greek(const NestedBatch& batch, const ProductSpec& spec, Order order);
GreekEstimate mixed_gamma_pw_lr(const NestedBatch& batch, const ProductSpec& spec);

}  // namespace vag

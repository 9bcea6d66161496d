#include "vagreeks/greeks.hpp"

#include <cmath>
#include <string>

#include "vagreeks/bs_kernel.hpp"
#include "vagreeks/errors.hpp"

namespace vag {

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::bump: return "bump";
        case Estimator::pathwise: return "pathwise";
        case Estimator::clrm: return "clrm";
        case Estimator::mixed_pw_lr: return "mixed_pw_lr";
        case Estimator::nested: return "nested";
    }
    return "?";
}

std::string_view to_string(Order o) noexcept {
    switch (o) {
        case Order::liability: return "liability";
        case Order::delta: return "delta";
        case Order::gamma: return "gamma";
    }
    return "?";
}

Estimator parse_estimator(std::string_view name) {
    for (auto e : {Estimator::bump, Estimator::pathwise, Estimator::clrm, Estimator::mixed_pw_lr, Estimator::nested}) {
        if (name == to_string(e)) return e;
    }
    if (name == "mixed") return Estimator::mixed_pw_lr;
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

Order parse_order(std::string_view name) {
    for (auto o : {Order::liability, Order::delta, Order::gamma}) {
        if (name == to_string(o)) return o;
    }
    throw ConfigError("unknown order '" + std::string(name) + "'");
}

namespace detail {

BumpResult reduce_bump_samples(std::span<const double> values, std::span<const double> deltas,
                               std::span<const double> gammas, std::size_t n_paths, std::uint64_t seed,
                               double seconds) {
    auto make = [&](std::span<const double> samples, Order order) {
        const MeanSe m = mean_se(samples);
        return GreekEstimate{Estimator::bump, order, m.mean, m.std_err, n_paths, 1, seed, seconds};
    };
    return {make(values, Order::liability), make(deltas, Order::delta), make(gammas, Order::gamma)};
}

}  // namespace detail

BumpResult va_bump_revalue(const ModelParams& params, const ProductSpec& spec, double s0, std::size_t n_paths,
                           double h, BumpScheme scheme, const SimulationSettings& sim) {
    params.validate();
    spec.validate();
    const CholeskyFactor chol = cholesky_factor(params);
    const TimeGrid grid{sim.steps_per_year, spec.term};
    const NormalStream stream(sim.seed);
    const SurvivalCurve surv = survival_curve(spec);
    const int n = grid.steps();

    auto evaluate = [&](std::size_t path, std::span<const double> levels, std::span<double> out) {
        FactorPath factors;
        simulate_factor_path(params, chol, grid, stream, static_cast<std::uint32_t>(path), factors);
        std::vector<double> z3(n), level(n + 1), unit(grid.years + 1), scaled(grid.years + 1);
        draw_equity_shocks(stream, static_cast<std::uint32_t>(path), 0, z3);
        simulate_equity_path(factors, 1.0, chol, z3, level);
        annual_levels(grid, level, unit);
        for (std::size_t j = 0; j < levels.size(); ++j) {
            for (int y = 0; y <= grid.years; ++y) scaled[y] = levels[j] * unit[y];
            out[j] = liability_sample(project_cashflows(spec, scaled, s0), factors.discount, surv);
        }
    };
    return bump_revalue(evaluate, n_paths, s0, h, scheme, sim.threads, sim.seed);
}

NestedBatch::NestedBatch(const ModelParams& params, double s0, std::size_t n_outer, std::size_t n_inner, int years,
                         const SimulationSettings& sim)
    : params_(params),
      chol_(cholesky_factor(params)),
      s0_(s0),
      n_outer_(n_outer),
      n_inner_(n_inner),
      grid_{sim.steps_per_year, years},
      sim_(sim),
      stream_(sim.seed) {
    params_.validate();
    if (n_outer_ < 1 || n_inner_ < 1) throw std::invalid_argument("nested batch needs n_outer, n_inner >= 1");
    if (!(s0_ > 0.0)) throw std::invalid_argument("initial equity level must be positive");
}

void NestedBatch::outer_path(std::size_t outer, FactorPath& out) const {
    simulate_factor_path(params_, chol_, grid_, stream_, static_cast<std::uint32_t>(outer), out);
}

ConditionalBlock NestedBatch::block(const FactorPath& outer) const {
    return conditional_moments(outer, chol_, 1, sim_.quadrature);
}

void NestedBatch::inner_path(const FactorPath& outer, std::size_t outer_index, std::size_t inner,
                             std::span<double> z3, std::span<double> level) const {
    draw_equity_shocks(stream_, static_cast<std::uint32_t>(outer_index), static_cast<std::uint32_t>(inner), z3);
    simulate_equity_path(outer, s0_, chol_, z3, level);
}

InnerSample inner_sample(const ProductSpec& spec, const SurvivalCurve& surv, std::span<const double> annual_equity,
                         std::span<const double> discount, double s0, const ConditionalBlock& block) {
    const CashflowTrace trace = project_cashflows(spec, annual_equity, s0);
    const CashflowSensitivities sens = pathwise_cashflow_derivatives(spec, trace, annual_equity, s0);

    InnerSample out;
    out.liability = liability_sample(trace, discount, surv);
    out.pathwise_delta = pathwise_liability_delta(trace, sens, discount, surv);

    const double z = implied_shock(annual_equity[1], s0, block);
    const double sqrt_t = std::sqrt(block.horizon);
    out.delta_weight = lrm_delta_weight(z, s0, block.sigma_bar, block.horizon);
    out.clrm_delta = out.delta_weight * out.liability;
    out.clrm_gamma = lrm_gamma_weight(z, s0, block.sigma_bar, block.horizon) * out.liability;
    // d/dS0 of (weight * liability) with Z* held fixed along the path.
    out.mixed_gamma = out.delta_weight * out.pathwise_delta -
                      z / (s0 * s0 * block.sigma_bar * sqrt_t) * out.liability;
    return out;
}

NestedSamples nested_samples(const NestedBatch& batch, const ProductSpec& spec) {
    spec.validate();
    if (batch.grid().years != spec.term) throw std::invalid_argument("nested batch horizon must equal the product term");
    const auto start = std::chrono::steady_clock::now();
    const SurvivalCurve surv = survival_curve(spec);
    const std::size_t n_outer = batch.n_outer();
    const std::size_t n_inner = batch.n_inner();
    const TimeGrid& grid = batch.grid();

    NestedSamples s;
    for (auto* v : {&s.liability, &s.pathwise_delta, &s.clrm_delta, &s.clrm_gamma, &s.mixed_gamma, &s.delta_weight}) {
        v->assign(n_outer, 0.0);
    }

    parallel_for(
        n_outer, batch.settings().threads,
        [&](std::size_t i) {
            FactorPath factors;
            batch.outer_path(i, factors);
            const ConditionalBlock block = batch.block(factors);
            std::vector<double> z3(grid.steps()), level(grid.steps() + 1), annual(grid.years + 1);
            InnerSample sum;
            for (std::size_t k = 0; k < n_inner; ++k) {
                batch.inner_path(factors, i, k, z3, level);
                annual_levels(grid, level, annual);
                const InnerSample x = inner_sample(spec, surv, annual, factors.discount, batch.s0(), block);
                sum.liability += x.liability;
                sum.pathwise_delta += x.pathwise_delta;
                sum.clrm_delta += x.clrm_delta;
                sum.clrm_gamma += x.clrm_gamma;
                sum.mixed_gamma += x.mixed_gamma;
                sum.delta_weight += x.delta_weight;
            }
            const double m = static_cast<double>(n_inner);
            s.liability[i] = sum.liability / m;
            s.pathwise_delta[i] = sum.pathwise_delta / m;
            s.clrm_delta[i] = sum.clrm_delta / m;
            s.clrm_gamma[i] = sum.clrm_gamma / m;
            s.mixed_gamma[i] = sum.mixed_gamma / m;
            s.delta_weight[i] = sum.delta_weight / m;
        },
        8);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

NestedEstimates nested_estimates(const NestedBatch& batch, const ProductSpec& spec) {
    const NestedSamples s = nested_samples(batch, spec);
    auto make = [&](const std::vector<double>& means, Estimator e, Order o) {
        const MeanSe m = clustered_mean_se(means);
        return GreekEstimate{e, o, m.mean, m.std_err, batch.n_outer(), batch.n_inner(), batch.settings().seed,
                             s.seconds};
    };
    NestedEstimates out;
    out.liability = make(s.liability, Estimator::nested, Order::liability);
    out.pathwise_delta = make(s.pathwise_delta, Estimator::pathwise, Order::delta);
    out.clrm_delta = make(s.clrm_delta, Estimator::clrm, Order::delta);
    out.clrm_gamma = make(s.clrm_gamma, Estimator::clrm, Order::gamma);
    out.mixed_gamma = make(s.mixed_gamma, Estimator::mixed_pw_lr, Order::gamma);
    out.delta_weight = clustered_mean_se(s.delta_weight);
    return out;
}

GreekEstimate pathwise_delta(const NestedBatch& batch, const ProductSpec& spec) {
    return nested_estimates(batch, spec).pathwise_delta;
}

GreekEstimate clrm_greek(const NestedBatch& batch, const ProductSpec& spec, Order order) {
    const NestedEstimates e = nested_estimates(batch, spec);
    switch (order) {
        case Order::delta: return e.clrm_delta;
        case Order::gamma: return e.clrm_gamma;
        case Order::liability: break;
    }
    throw std::invalid_argument("clrm estimator covers delta and gamma only");
}

GreekEstimate mixed_gamma_pw_lr(const NestedBatch& batch, const ProductSpec& spec) {
    return nested_estimates(batch, spec).mixed_gamma;
}

}  // namespace vag

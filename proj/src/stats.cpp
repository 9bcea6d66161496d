#include "vagreeks/stats.hpp"

#include <cmath>
#include <string>

#include "vagreeks/errors.hpp"

namespace vag {

void SampleAccumulator::add(double x) noexcept {
    if (n_ == 0) shift_ = x;
    const double d = x - shift_;
    sum_.add(d);
    sum_sq_.add(d * d);
    ++n_;
}

void SampleAccumulator::merge(const SampleAccumulator& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    // Re-centre the other accumulator onto our shift.
    const double delta = other.shift_ - shift_;
    const double m = static_cast<double>(other.n_);
    const double other_sum = other.sum_.value();
    sum_.add(other.sum_);
    sum_.add(m * delta);
    sum_sq_.add(other.sum_sq_);
    sum_sq_.add(2.0 * delta * other_sum);
    sum_sq_.add(m * delta * delta);
    n_ += other.n_;
}

double SampleAccumulator::mean() const noexcept {
    if (n_ == 0) return 0.0;
    return shift_ + sum_.value() / static_cast<double>(n_);
}

double SampleAccumulator::variance() const noexcept {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double s1 = sum_.value();
    const double ss = sum_sq_.value() - s1 * s1 / n;
    return ss > 0.0 ? ss / (n - 1.0) : 0.0;
}

double SampleAccumulator::std_error() const noexcept {
    if (n_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
}

MeanSe mean_se(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw InsufficientSamples("mean_se needs at least 2 samples, got " + std::to_string(samples.size()));
    }
    SampleAccumulator acc;
    for (double x : samples) acc.add(x);
    return {acc.mean(), acc.std_error(), acc.count()};
}

MeanSe clustered_mean_se(std::span<const double> cluster_means) {
    if (cluster_means.size() < 2) {
        throw InsufficientSamples("clustered standard error needs at least 2 outer clusters, got " +
                                  std::to_string(cluster_means.size()));
    }
    return mean_se(cluster_means);
}

double efficiency_gain(double se_a, double seconds_a, double se_b, double seconds_b) {
    const double work_a = se_a * se_a * seconds_a;
    const double work_b = se_b * se_b * seconds_b;
    if (work_a <= 0.0) return work_b > 0.0 ? HUGE_VAL : 1.0;
    return work_b / work_a;
}

}  // namespace vag

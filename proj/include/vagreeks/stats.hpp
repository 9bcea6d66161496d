#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace vag {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void add(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Mergeable mean/variance accumulator. Values are shifted by the first
/// observation before the compensated sum and sum of squares are formed,
/// which keeps the variance stable when the mean dominates the spread.
class SampleAccumulator {
public:
    void add(double x) noexcept;
    void merge(const SampleAccumulator& other) noexcept;

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept;
    /// Unbiased sample variance; 0 when fewer than two samples.
    double variance() const noexcept;
    double std_error() const noexcept;

private:
    std::size_t n_ = 0;
    double shift_ = 0.0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

struct MeanSe {
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t count = 0;
};

/// Mean and sqrt(s^2/n). Throws InsufficientSamples for n < 2.
MeanSe mean_se(std::span<const double> samples);

/// Grand mean and standard error of per-outer cluster means, for inner
/// samples that share an outer realisation. Throws InsufficientSamples when
/// fewer than two clusters are given.
MeanSe clustered_mean_se(std::span<const double> cluster_means);

/// Ratio of work-normalised variances (se^2 * seconds) of estimator b over
/// estimator a. Values above 1 mean a is the more efficient estimator.
double efficiency_gain(double se_a, double seconds_a, double se_b, double seconds_b);

}  // namespace vag

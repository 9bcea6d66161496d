#pragma once

#include <stdexcept>
#include <string>

namespace vag {

/// Correlation triple does not yield a positive-definite 3x3 matrix.
class NonPositiveDefinite : public std::domain_error {
public:
    explicit NonPositiveDefinite(const std::string& what) : std::domain_error(what) {}
};

/// Conditional volatility is zero; likelihood-ratio weights are undefined.
class DegenerateVolatility : public std::domain_error {
public:
    explicit DegenerateVolatility(const std::string& what) : std::domain_error(what) {}
};

/// Estimator requested for a payoff it cannot handle (pathwise on a digital).
class UnsupportedPayoff : public std::invalid_argument {
public:
    explicit UnsupportedPayoff(const std::string& what) : std::invalid_argument(what) {}
};

class InsufficientSamples : public std::invalid_argument {
public:
    explicit InsufficientSamples(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid run configuration (unknown case, non-positive counts, bad keys).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace vag

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fvlab {

struct FvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distance function is not differentiable at the queried point (box ridge,
// ball center). Samplers are expected to skip such points.
struct NonSmoothPointError : FvError {
    using FvError::FvError;
};

struct DomainViolationError : FvError {
    using FvError::FvError;
};

struct InvalidStepError : FvError {
    using FvError::FvError;
};

struct NoDonorError : FvError {
    using FvError::FvError;
};

struct RangeError : FvError {
    using FvError::FvError;
};

struct DimensionError : FvError {
    using FvError::FvError;
};

struct BinError : FvError {
    using FvError::FvError;
};

struct AllKilledError : FvError {
    using FvError::FvError;
};

struct ConvergenceError : FvError {
    using FvError::FvError;
};

struct ExplosionGuardError : FvError {
    ExplosionGuardError(const std::string& msg, long window, long count, long cap)
        : FvError(msg), window(window), count(count), cap(cap) {}
    long window;
    long count;
    long cap;
};

// Carries every violation found while validating a config, not just the first.
struct ConfigError : FvError {
    explicit ConfigError(std::vector<std::string> violations)
        : FvError(join(violations)), violations(std::move(violations)) {}
    explicit ConfigError(const std::string& msg)
        : FvError(msg), violations{msg} {}
    std::vector<std::string> violations;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
};

}  // namespace fvlab

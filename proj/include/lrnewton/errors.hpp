#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A zero pivot was met during factorization. `pivot()` is the 0-based column.
class SingularMatrix : public Error {
public:
    explicit SingularMatrix(std::size_t pivot)
        : Error("singular matrix: zero pivot in column " + std::to_string(pivot)), pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Non-finite values in an input or an iterate. `iteration()` is 0 for plain inputs.
class NonFinite : public Error {
public:
    NonFinite(const std::string& what, std::size_t iteration)
        : Error(what), iteration_(iteration) {}
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

/// The preconditioned spectrum reaches zero or below; no real Chebyshev interval exists.
class IndefinitePencil : public Error {
public:
    IndefinitePencil(double lambda_lo, double lambda_hi)
        : Error("indefinite preconditioned spectrum: real parts in [" + std::to_string(lambda_lo) + ", " +
                std::to_string(lambda_hi) + "]"),
          lambda_lo_(lambda_lo), lambda_hi_(lambda_hi) {}
    double lambda_lo() const noexcept { return lambda_lo_; }
    double lambda_hi() const noexcept { return lambda_hi_; }

private:
    double lambda_lo_;
    double lambda_hi_;
};

/// The Chebyshev iteration's residual grew past the divergence guard.
class Diverged : public Error {
public:
    Diverged(const std::string& what, std::vector<double> residual_log)
        : Error(what), log_(std::move(residual_log)) {}
    const std::vector<double>& residual_log() const noexcept { return log_; }

private:
    std::vector<double> log_;
};

}  // namespace lrn

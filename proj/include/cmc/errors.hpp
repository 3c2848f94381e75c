#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmc {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

// Generator validation failures carry the offending position so callers can
// print a witness.
class NegativeOffDiagonal : public Error {
public:
    NegativeOffDiagonal(std::size_t row, std::size_t col, double value)
        : Error("generator has negative off-diagonal entry at (" + std::to_string(row) + "," +
                std::to_string(col) + "): " + std::to_string(value)),
          row(row), col(col), value(value) {}
    std::size_t row, col;
    double value;
};

class RowSumNonzero : public Error {
public:
    RowSumNonzero(std::size_t row, double residual)
        : Error("generator row " + std::to_string(row) +
                " does not sum to zero, residual " + std::to_string(residual)),
          row(row), residual(residual) {}
    std::size_t row;
    double residual;
};

class NonFiniteEntries : public Error {
public:
    using Error::Error;
};

class NegativeRate : public Error {
public:
    using Error::Error;
};

class NonPositiveRate : public Error {
public:
    using Error::Error;
};

class ConstraintViolated : public Error {
public:
    using Error::Error;
};

class HeterogeneousMarginals : public Error {
public:
    using Error::Error;
};

class AsmViolated : public Error {
public:
    using Error::Error;
};

// Raised when a conditional marginal cannot be formed because the component
// state has (numerically) zero probability.
class SupportViolation : public Error {
public:
    SupportViolation(double t, int component, int state)
        : Error("component " + std::to_string(component) + " state " + std::to_string(state) +
                " has zero probability at t=" + std::to_string(t)),
          t(t), component(component), state(state) {}
    double t;
    int component;
    int state;
};

class WrongKind : public Error {
public:
    using Error::Error;
};

class UnsupportedKind : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class InvalidSeedStream : public Error {
public:
    using Error::Error;
};

class ConfigParse : public Error {
public:
    using Error::Error;
};

}  // namespace cmc

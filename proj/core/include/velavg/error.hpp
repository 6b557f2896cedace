#pragma once
/// @file error.hpp
/// @brief Exception hierarchy shared by all velavg modules.

#include <stdexcept>
#include <string>
#include <vector>

namespace velavg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad sizes, non-finite values, invalid parameters).
class InputError : public Error {
public:
    using Error::Error;
};

/// A velocity or state outside the domain a function is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The hypotheses of an averaging lemma are not met; `inequality` names the violated one.
class LemmaInapplicable : public Error {
public:
    explicit LemmaInapplicable(std::string inequality)
        : Error("lemma inapplicable: " + inequality), inequality_(std::move(inequality)) {}
    const std::string& inequality() const noexcept { return inequality_; }

private:
    std::string inequality_;
};

/// Too few usable dyadic bands (or increments) to fit a decay rate.
class InsufficientResolution : public Error {
public:
    using Error::Error;
};

/// A requested time step exceeds the stability bound.
class CflViolation : public Error {
public:
    CflViolation(const std::string& what, double required_dt)
        : Error(what), required_dt_(required_dt) {}
    double required_dt() const noexcept { return required_dt_; }

private:
    double required_dt_;
};

/// An iterative solver ran out of iterations before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residual_history)
        : Error(what), history_(std::move(residual_history)) {}
    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

}  // namespace velavg

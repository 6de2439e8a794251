#pragma once

#include <stdexcept>
#include <string>

namespace fcone {

/// Malformed or out-of-contract input (bad JSON, coefficient out of range, ...).
/// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematically well-posed computation that has no answer on this input
/// (inconsistent linear system, unbounded truncation, ...). CLI exit code 2.
class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

/// The Q-Gorenstein system for (X, Delta) is inconsistent. Carries the
/// offending equation verbatim.
class NotQGorenstein : public MathError {
public:
    explicit NotQGorenstein(const std::string& what)
        : MathError("not Q-Gorenstein: " + what) {}
};

/// The Q-Gorenstein system does not determine u uniquely.
class AmbiguousGorenstein : public MathError {
public:
    explicit AmbiguousGorenstein(const std::string& what)
        : MathError("ambiguous Q-Gorenstein solution: " + what) {}
};

/// Violated precondition on geometric data (point outside cone, tail
/// mismatch in a Minkowski sum, ...).
class GeometryError : public MathError {
public:
    explicit GeometryError(const std::string& what) : MathError(what) {}
};

}  // namespace fcone

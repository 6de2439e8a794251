#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "fcone/errors.hpp"

namespace fcone {

/// Exact rational scalar. All stored values in the library are exact; no
/// floating point enters any computation path.
using Rat = mpq_class;

/// Vector over Q. The ambient rank is the vector length.
using QVec = std::vector<Rat>;

/// Dense matrix over Q, stored row-major.
using QMat = std::vector<QVec>;

inline Rat rat_of(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q", "p", or "-p/q". Whitespace is not allowed.
Rat parse_rat(const std::string& s);

/// Exact decimal-free rendering: "p/q" with q > 0, or "p" when q == 1.
std::string rat_str(const Rat& r);

/// Approximate rendering for human-readable tables, prefixed with an
/// explicit marker when the value is not integral.
std::string rat_approx_str(const Rat& r);

std::string vec_str(const QVec& v);

QVec vec_add(const QVec& a, const QVec& b);
QVec vec_sub(const QVec& a, const QVec& b);
QVec vec_scale(const Rat& c, const QVec& v);
Rat dot(const QVec& a, const QVec& b);
bool is_zero(const QVec& v);
QVec zero_vec(int rank);

/// Lexicographic comparison, used for canonical orderings.
bool vec_less(const QVec& a, const QVec& b);

/// Divides an integer vector by the gcd of its entries. Input must be
/// integral and nonzero.
QVec integer_primitive(const QVec& v);

/// Smallest k > 0 with k*v integral (multiplicity w.r.t. the standard
/// lattice), together with k*v.
struct PrimitivePoint {
    QVec point;   // mu * v, an integral vector
    Rat mu;       // positive integer as a Rat
};
PrimitivePoint primitive_and_multiplicity_std(const QVec& v);

/// Integral test for every coordinate.
bool is_integral(const QVec& v);

}  // namespace fcone

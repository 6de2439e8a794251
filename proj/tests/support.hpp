#pragma once

#include <initializer_list>
#include <string>

#include "fcone/pdivisor.hpp"

namespace fcone::testing {

inline Rat q(const char* s) { return parse_rat(s); }

inline QVec v(std::initializer_list<const char*> xs) {
    QVec out;
    for (const char* s : xs) out.push_back(parse_rat(s));
    return out;
}

// The even member (k=2) of the degeneration family of xy+z^2: tail spanned
// by (1,0) and (1,4),
// a unit segment over two points and the vertex (1/2,0) over a third.
// Type (1,1,2).
inline PDivisor even_case_k2() {
    Cone tail(2, {v({"1", "0"}), v({"1", "4"})});
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("0", Polyhedron({v({"0", "0"}), v({"0", "1"})}, tail));
    coeffs.emplace("1", Polyhedron({v({"0", "0"}), v({"0", "1"})}, tail));
    coeffs.emplace("oo", Polyhedron({v({"1/2", "0"})}, tail));
    return PDivisor(2, tail, std::move(coeffs));
}

// The odd member (k=2): tail spanned by (1,0) and (1,10), vertices (1/2,0),
// (-2/5,0) and a unit segment. Type (1,2,5).
inline PDivisor odd_case_k2() {
    Cone tail(2, {v({"1", "0"}), v({"1", "10"})});
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("0", Polyhedron({v({"1/2", "0"})}, tail));
    coeffs.emplace("1", Polyhedron({v({"-2/5", "0"})}, tail));
    coeffs.emplace("oo", Polyhedron({v({"0", "0"}), v({"0", "1"})}, tail));
    return PDivisor(2, tail, std::move(coeffs));
}

inline PDivisor trivial_over(const Cone& tail) {
    std::map<std::string, Polyhedron> coeffs;
    coeffs.emplace("0", Polyhedron::cone_at_origin(tail));
    return PDivisor(tail.rank(), tail, std::move(coeffs));
}

}  // namespace fcone::testing

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fcone/pdivisor.hpp"

namespace fcone {

/// Solution of the Q-Gorenstein linear system for (X(D), Delta): the
/// element u of M_Q together with the degree-zero divisor {a_y} and the
/// canonical-divisor choice {k_y} it was solved against (sum k_y = -2).
/// Labels absent from the maps behave as a_y = k_y = 0.
struct GorensteinData {
    QVec u;
    std::map<std::string, Rat> a;
    std::map<std::string, Rat> k;

    Rat a_of(const std::string& y) const;
    Rat k_of(const std::string& y) const;
};

/// Solves the vertex and ray equations with the canonical divisor supported
/// on the first two labels in lexicographic order (fresh labels "__k1",
/// "__k2" are appended when fewer than two exist). Throws NotQGorenstein or
/// AmbiguousGorenstein, each carrying the offending equation.
GorensteinData solve_gorenstein(const PDivisor& d, const Boundary& delta);

/// Same system with the canonical divisor concentrated on the given labels
/// (used by the support-invariance property test).
GorensteinData solve_gorenstein_with_support(const PDivisor& d, const Boundary& delta,
                                             const std::vector<std::string>& k_support);

/// Log discrepancy of a torus-invariant divisor over X(D):
/// horizontal  a = <-u, n_rho>;
/// vertical    a = mu(w) * (<-u, w> - a_z + k_z + 1).
Rat log_discrepancy(const GorensteinData& g, const PDivisor& d, const Boundary& delta,
                    const DivisorSpec& spec);

/// Both sides of the linearity identity
/// a(D_rho) * scale = lambda1 a(D_rho1) + lambda2 a(D_rho2),
/// where scale * n_rho = lambda1 n_rho1 + lambda2 n_rho2.
struct LinearityCheck {
    Rat lhs;
    Rat rhs;
    QVec combined_primitive;
};
LinearityCheck horizontal_linearity_check(const GorensteinData& g, const PDivisor& d,
                                          const Boundary& delta, const QVec& rho1,
                                          const QVec& rho2, const Rat& lambda1,
                                          const Rat& lambda2);

/// Discrepancy of the horizontal divisor induced by a vertex family, via the
/// closed form lambda_rho * (2 - sum_y (mu(v_y)-1+c_{y,v_y})/mu(v_y)),
/// checked against log_discrepancy on the induced ray. Also evaluates the
/// per-type upper bounds.
struct FamilyDiscrepancy {
    Rat value;
    Rat lambda_rho;
    QVec primitive_ray;
    TypeTriple type;
    bool bound_2pq_applies = false;   // type (2,p,q), p,q >= 2: value <= 2
    bool bound_2pq_ok = true;
    bool bound_1pq_applies = false;   // type (1,p,q): value <= (p+q)/gcd(p,q)
    Rat bound_1pq = 0;
    bool bound_1pq_ok = true;
};
FamilyDiscrepancy family_discrepancy(const PDivisor& d, const Boundary& delta,
                                     const VertexFamily& fam);

/// Tail rays rho with rho cap deg D empty (the horizontal prime divisors
/// on X), as primitive generators.
std::vector<QVec> free_tail_rays(const PDivisor& d);

}  // namespace fcone

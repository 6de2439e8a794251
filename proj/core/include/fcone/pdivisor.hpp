#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fcone/polyhedron.hpp"

namespace fcone {

/// A proper polyhedral divisor on P^1 with complete locus: a pointed
/// full-dimensional tail coneic in N_Q = Q^rank and finitely many polyhedral
/// coefficients with that tail. Point labels are opaque strings; labels not
/// present act as the tail cone itself.
class PDivisor {
public:
    PDivisor(int rank, Cone tail, std::map<std::string, Polyhedron> coefficients);

    int rank() const { return rank_; }
    const Cone& tail() const { return tail_; }
    const std::map<std::string, Polyhedron>& coefficients() const { return coeffs_; }

    bool has_label(const std::string& y) const { return coeffs_.count(y) > 0; }

    /// Coefficient at y; the tail cone at the origin for absent labels.
    const Polyhedron& coefficient(const std::string& y) const;

    /// Stored labels in canonical (lexicographic) order.
    std::vector<std::string> labels() const;

    /// deg D = Minkowski sum of all coefficients.
    const Polyhedron& degree() const { return degree_; }

    /// D(u)_y = min_{v in D_y} <u, v> for stored labels; u must lie in the
    /// dual of the tail cone.
    std::map<std::string, Rat> evaluate(const QVec& u) const;

    /// deg D proper subset of the tail cone. The certificate is a point of
    /// tail \ deg (the apex works whenever the divisor is proper).
    struct ProperResult {
        bool proper;
        std::optional<QVec> witness;
    };
    ProperResult is_proper() const;

    /// Max multiplicity mu(v) over the vertices of the coefficient at y
    /// (1 for absent labels).
    Rat multiplicity_over(const std::string& y) const;

private:
    int rank_;
    Cone tail_;
    std::map<std::string, Polyhedron> coeffs_;
    Polyhedron degree_;
    Polyhedron tail_polyhedron_;
};

/// Torus-invariant boundary divisor: coefficients in [0,1) on horizontal
/// rays (tail rays missing the degree) and on (label, vertex) pairs.
struct Boundary {
    // Keyed by the primitive generator of the tail ray.
    std::map<QVec, Rat> horizontal;
    // Keyed by (label, vertex).
    std::map<std::pair<std::string, QVec>, Rat> vertical;

    static Boundary trivial() { return {}; }

    Rat horizontal_coeff(const QVec& primitive_ray) const;
    Rat vertical_coeff(const std::string& y, const QVec& vertex) const;

    /// Smallest nonzero coefficient; 1 when the boundary is trivial.
    Rat min_positive_or_one() const;

    /// Checks keys against d: rays must be tail rays missing the degree,
    /// vertices must be vertices of the labelled coefficient, values in [0,1).
    void validate(const PDivisor& d) const;
};

/// The quotient log pair (P^1, B_Delta): b_y aggregates vertex
/// multiplicities and boundary coefficients label by label.
struct QuotientPair {
    std::map<std::string, Rat> b;
    Rat degree;
};

QuotientPair quotient_pair(const PDivisor& d, const Boundary& delta);

bool is_klt(const PDivisor& d, const Boundary& delta);

/// The type (p,q,r): multiplicities > 1 padded with 1s to length three, or
/// the untyped bucket when more than three labels are multiple.
struct TypeTriple {
    bool typed;
    std::vector<Rat> entries;  // sorted; length 3 when typed, else full multiset
};

TypeTriple type_triple(const PDivisor& d);
bool platonic_filter(const PDivisor& d);
bool is_platonic_triple(const std::vector<Rat>& t);

/// Specification of a torus-invariant prime divisor over X(D).
struct DivisorSpec {
    enum class Kind { Horizontal, Vertical };
    Kind kind = Kind::Horizontal;
    QVec ray;          // Horizontal: a point on the ray (primitivized on use)
    std::string point; // Vertical
    QVec w;            // Vertical: point of the coefficient polyhedron

    static DivisorSpec horizontal(QVec r) {
        return {Kind::Horizontal, std::move(r), {}, {}};
    }
    static DivisorSpec vertical(std::string y, QVec w) {
        return {Kind::Vertical, {}, std::move(y), std::move(w)};
    }
};

/// plt test for (X, Delta + extra). Horizontal extras keep plt whenever the
/// pair is klt; vertical extras need sum_{y != z} b_y < 1.
bool is_plt_with(const PDivisor& d, const Boundary& delta, const DivisorSpec& extra);

/// A choice of one vertex per stored label (the origin for absent ones).
struct VertexFamily {
    std::map<std::string, QVec> choice;

    QVec sum(int rank) const;
    /// Padded mu-multiset, as in TypeTriple.
    TypeTriple family_type(const Lattice& lat) const;
};

/// All vertex families; with target_ray set, only those whose vertex sum
/// spans that ray.
std::vector<VertexFamily> vertex_families(const PDivisor& d,
                                          const std::optional<QVec>& target_ray = std::nullopt);

}  // namespace fcone

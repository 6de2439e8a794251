#pragma once

#include <optional>
#include <string>

#include "fcone/gorenstein.hpp"
#include "fcone/toric.hpp"

namespace fcone {

/// The toric degeneration cone sigma_z in N x Z, with per-ray boundary data.
/// Each extremal ray carries the coefficient from the three-case display
/// (maximized over vertex-family decompositions at height -1) and the
/// Q-Gorenstein-consistent coefficient driving the toric computations; the
/// two agree away from mixed-multiplicity families.
struct DegenRay {
    QVec primitive;        // standard-primitive generator in N x Z
    Rat height;            // last coordinate of the primitive
    Rat display_coeff;
    Rat consistent_coeff;
    bool mismatch;
};

struct DegenCone {
    Cone cone;             // in N x Z
    std::vector<DegenRay> rays;  // one entry per extremal ray (pointed part)
    bool pointed;
    std::string z;

    /// Toric cone singularity on the standard lattice of N x Z, boundary
    /// from the consistent (default) or display coefficients.
    ToricCone toric(bool use_consistent = true) const;
};

DegenCone sigma_z(const PDivisor& d, const Boundary& delta, const std::string& z);

/// Both routes to the same vertical log discrepancy: the complexity-one
/// formula and the toric computation on sigma_z. Throws when they disagree.
struct CrossCheck {
    Rat complexity_one;
    Rat toric;
};
CrossCheck toric_crosscheck(const PDivisor& d, const Boundary& delta, const std::string& z,
                            const QVec& w);

struct VerticalComponent {
    bool is_weak;
    bool is_kollar;
    Rat discrepancy;
};
VerticalComponent vertical_component(const PDivisor& d, const Boundary& delta,
                                     const std::string& z, const QVec& v);

struct HorizontalComponent {
    bool is_kollar;
    Rat discrepancy;
};
HorizontalComponent horizontal_component(const PDivisor& d, const Boundary& delta,
                                         const QVec& rho);

/// nvol of the polarization mu(w)(w,1) on the toric special fibre X(sigma_z);
/// an upper bound for nvol(X, Delta). The product-degeneration case (sigma_z
/// with lineality) is reduced to the quotient by the lineality space.
Rat nvol_via_fibre(const PDivisor& d, const Boundary& delta, const std::string& z,
                   const QVec& w);

/// An f-divisor: a subdivided tail fan with compatible slice subdivisions,
/// encoding the blow-up extracting one torus-invariant divisor.
struct FDivisor {
    int rank;
    std::vector<Cone> tailfan;     // maximal cones
    std::vector<bool> marked;      // maximal cone meets the degree part

    /// A cell of a slice subdivision with its affine support function
    /// x -> <lin, x> + cst. tailfan_index is -1 when the cell's tail cone is
    /// not one of the maximal fan cones.
    struct Cell {
        Polyhedron poly;
        int tailfan_index;
        QVec lin;
        Rat cst;
    };
    std::map<std::string, std::vector<Cell>> slices;

    std::optional<Polyhedron> degree_part;  // the set d when nonempty
    DivisorSpec exceptional;
};

FDivisor fdivisor_vertical(const PDivisor& d, const std::string& z, const QVec& v);
FDivisor fdivisor_horizontal(const PDivisor& d, const QVec& rho);

/// Checks the compatibility identity sigma cap d = sum_y Delta^sigma_y on
/// every marked maximal cone; throws on violation.
void verify_fdivisor_compatibility(const FDivisor& f, const PDivisor& d);

/// The support-function certificate that -E (resp. -mu(v) E) is an ample
/// Q-Cartier divisor on the modification: the piecewise linear h by its ray
/// values, the piecewise affine h_y by vertex values, and per-cone offsets.
struct AmpleCertificate {
    std::map<QVec, Rat> h_ray_values;
    std::map<std::string, std::map<QVec, Rat>> hy_vertex_values;
    std::vector<std::map<std::string, Rat>> cone_offsets;  // per maximal cone
    Rat exceptional_scale;  // mu(v) for a vertical target, 1 for horizontal
};

AmpleCertificate ample_certificate(const FDivisor& f, const PDivisor& d,
                                   const DivisorSpec& target);

/// Re-derives the per-cone linear data from the certificate values and checks
/// the Cartier and ampleness conditions (offsets zero on marked cones,
/// negative on unmarked ones, strict concavity). Throws MathError carrying
/// the violated condition.
void validate_certificate(const AmpleCertificate& cert, const FDivisor& f, const PDivisor& d);

/// Admissible (lambda1, lambda2) with lambda1 v1 + lambda2 v2 integral,
/// 0 < lambda1 < ell, 0 < lambda2 < ell^2 / mu(w). Errors when the bounded
/// search finds none (which the bounded denominators rule out for valid input).
std::pair<Rat, Rat> combine_rays(const QVec& v1, const QVec& v2, const QVec& w, const Rat& ell);

/// Witness search for the bounded-discrepancy Kollar component.
struct MldWitness {
    DivisorSpec spec;
    Rat discrepancy = 0;
    std::string branch;    // "vertical-2d-1" | "horizontal-2-eps" | "m-construction"
    Rat bound = 0;
    bool certified = false;
    std::string diagnostic;
};
MldWitness mld_bound_witness(const PDivisor& d, const Boundary& delta,
                             std::optional<Rat> epsilon = std::nullopt);

}  // namespace fcone

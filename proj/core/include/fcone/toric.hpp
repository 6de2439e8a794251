#pragma once

#include <functional>
#include <map>
#include <optional>

#include "fcone/cone.hpp"
#include "fcone/lattice.hpp"
#include "fcone/volume.hpp"

namespace fcone {

/// A toric cone singularity: pointed full-dimensional cone in N_R with an
/// explicit lattice and boundary coefficients on its extremal rays (keyed by
/// the lattice-primitive ray generator). Coefficients are in [0,1) for klt
/// input; internal constructions may exceed that, in which case the klt
/// accessor reports it.
class ToricCone {
public:
    ToricCone(Cone cone, Lattice lattice, std::map<QVec, Rat> boundary = {});

    const Cone& cone() const { return cone_; }
    const Lattice& lattice() const { return lattice_; }
    int rank() const { return cone_.rank(); }

    /// Lattice-primitive generators of the extremal rays.
    const std::vector<QVec>& ray_primitives() const { return ray_primitives_; }
    Rat boundary_coeff(const QVec& lattice_primitive_ray) const;
    const std::map<QVec, Rat>& boundary() const { return boundary_; }

    /// Extremal rays of the dual cone (standard-primitive), cached.
    const std::vector<QVec>& dual_rays() const { return dual_rays_; }

private:
    Cone cone_;
    Lattice lattice_;
    std::map<QVec, Rat> boundary_;
    std::vector<QVec> ray_primitives_;
    std::vector<QVec> dual_rays_;
};

/// Discrepancy vector a in M_Q: <a, n_rho> = 1 - c_rho on every extremal ray.
QVec toric_gorenstein(const ToricCone& t);

/// a(xi) = <a, xi>; xi must lie in the cone.
Rat log_discrepancy_xi(const ToricCone& t, const QVec& a, const QVec& xi);

/// vol(xi) = n! * lattice-normalized volume of {u in sigma^vee : <u,xi> <= 1},
/// the normalization being the covolume of the dual lattice M. Requires xi
/// in the interior (otherwise the truncation is unbounded).
Rat volume_xi(const ToricCone& t, const QVec& xi);

/// nvol(xi) = a(xi)^n vol(xi); infinite when a(xi) <= 0.
struct Nvol {
    bool finite;
    Rat value;  // meaningful when finite
};
Nvol nvol_xi(const ToricCone& t, const QVec& xi);

/// Normalized-volume minimization over the Reeb cone.
///
/// Simplicial cones take the exact fast path: the minimizer is
/// sum_rho n_rho / (1 - c_rho) (ray-coordinate reduction of
/// (sum t)^n / prod t), and the value is exact. General cones run a
/// projected coordinate descent on the compact slice {<a, xi> = n} with
/// exact evaluations; the returned enclosure [value_lower, value_upper] is
/// certified through concavity of vol^{-1/n}.
struct MinimizeResult {
    QVec xi_star;
    Rat value_upper;
    Rat value_lower;
    bool simplicial_exact;
    int evaluations;
};
MinimizeResult minimize_nvol(const ToricCone& t, const Rat& tolerance);

/// The numeric path regardless of simpliciality (used to cross-check the
/// exact fast path).
MinimizeResult minimize_nvol_numeric(const ToricCone& t, const Rat& tolerance);

namespace detail {

/// Largest rational r with r^n <= x (within precision eps from below) and
/// smallest with r^n >= x; exact comparisons throughout.
Rat nth_root_lower(const Rat& x, int n, const Rat& eps);
Rat nth_root_upper(const Rat& x, int n, const Rat& eps);

/// Dyadic step-halving coordinate descent for a scale-normalized objective
/// on the affine slice {<a, xi> = level} inside the cone. Returns the best
/// point found and the final step size.
struct DescentResult {
    QVec point;
    Rat value;
    Rat final_step;
    int evaluations;
};
DescentResult slice_descent(const Cone& cone, const QVec& a, const Rat& level,
                            const QVec& start, const std::vector<QVec>& directions,
                            const std::function<Rat(const QVec&)>& objective, int max_halvings);

}  // namespace detail

}  // namespace fcone

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcone/cone.hpp"
#include "fcone/toric.hpp"

namespace fcone {
namespace hyper {

/// Weight data (w_0 <= ... <= w_n; d) of a quasi-homogeneous hypersurface of
/// dimension n.
struct WeightSystem {
    std::vector<Rat> weights;  // sorted ascending
    Rat degree;

    WeightSystem(std::vector<Rat> w, Rat d);
    int dim() const { return static_cast<int>(weights.size()) - 1; }
    Rat weight_sum() const;

    /// Scaled so that w_0 = 1.
    WeightSystem normalized() const;
};

/// nvol of the grading valuation: d (sum w - d)^n / prod w.
Rat nvol_weighted(const WeightSystem& ws);

/// Complete-intersection variant: (prod d_j) (sum w - sum d)^n / prod w,
/// with n = #weights - #degrees.
Rat nvol_ci(const std::vector<Rat>& weights, const std::vector<Rat>& degrees);

/// The four boundedness conditions.
struct Conditions {
    bool log_terminal;    // sum w - d > 0 (strict)
    bool lichnerowicz;    // sum w - d <= n w_0
    bool nondegenerate;   // w_0 + w_n <= d (every variable in a non-linear monomial)
    bool volume;          // nvol >= v
    bool all() const { return log_terminal && lichnerowicz && nondegenerate && volume; }
};
Conditions check_conditions(const WeightSystem& ws, const Rat& volume_bound);

/// nvol(v_s) along the Lichnerowicz degeneration curve: the perturbation
/// w_0 -> w_0 + s of the smallest weight.
Rat lichnerowicz_curve(const WeightSystem& ws, const Rat& s);

/// Closed form of d/ds nvol(v_s) at s = 0.
Rat lichnerowicz_derivative_at_zero(const WeightSystem& ws);

/// All gcd-reduced sorted integer weight systems within the caps passing
/// check_conditions, pruned by prod w / d <= n^n / v. Deterministic order.
struct ScreenCaps {
    long max_degree;
    long max_weight;  // <= 0 means max_degree
};
std::vector<WeightSystem> screen(int dim, const Rat& volume_bound, const ScreenCaps& caps);

/// A hypersurface with an M = Z^r multigrading: variable weights u_i, the
/// equation weight u_f, and optionally the monomial support of f (exponent
/// vectors).
struct MultigradedHypersurface {
    QMat variable_weights;          // u_i as rows
    QVec equation_weight;           // u_f
    std::vector<std::vector<long>> monomials;  // optional support of f

    int grading_rank() const { return static_cast<int>(equation_weight.size()); }
    int var_count() const { return static_cast<int>(variable_weights.size()); }
    int dim() const { return var_count() - 2; }

    Cone weight_cone() const;   // omega = pos(u_i)
    Cone reeb_cone() const;     // sigma = omega^vee

    /// Induced weights <u_i, xi> and degree <u_f, xi>.
    WeightSystem weights_at(const QVec& xi) const;
};

/// nvol at a polarization: the weighted formula on the induced weights.
Rat nvol_multigraded(const MultigradedHypersurface& h, const QVec& xi);

/// Minimize nvol over the interior of the Reeb cone by the scale-normalized
/// coordinate descent (exact evaluations; best point within the step budget).
struct MultigradedMinimum {
    QVec xi_star;
    Rat value;
    Rat final_step;
    int evaluations;
};
MultigradedMinimum minimize_nvol_multigraded(const MultigradedHypersurface& h, int halvings);

/// Degrees u in the kernel lattice with T^1(u) != 0: a monomial of full
/// weight u_f + u survives in R/(f). The cap bounds the total exponent of
/// the searched monomials.
std::vector<QVec> t1_support(const MultigradedHypersurface& h, const QMat& kernel_basis,
                             long exponent_cap);

/// Sigma_X = pos(support degrees)^vee.
Cone degeneration_cone(const std::vector<QVec>& support_degrees, int rank);

/// The K-semistability obstruction: fires iff xi_star lies in the relative
/// interior of Sigma_X but outside the subspace N_R of the acting subtorus.
bool kss_obstruction(const Cone& sigma_x, const QVec& xi_star,
                     const std::vector<QVec>& n_subspace);

}  // namespace hyper
}  // namespace fcone

#include "fcone/cone.hpp"

#include <algorithm>

#include "fcone/errors.hpp"

namespace fcone {
namespace detail {

namespace {

struct Ray {
    QVec v;
    std::vector<char> active;  // active[i]: tight at constraint i
};

QVec primitive_or_zero(const QVec& v) {
    if (is_zero(v)) return v;
    // Clear denominators, then divide by content.
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    QVec iv = vec_scale(Rat(l), v);
    return integer_primitive(iv);
}

bool subset_of(const std::vector<char>& a, const std::vector<char>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

}  // namespace

DDResult dd_dual(int rank, const std::vector<QVec>& generators) {
    // Dual cone {u : <u,g> >= 0 for all g}, built constraint by constraint.
    std::vector<QVec> lin;
    for (int i = 0; i < rank; ++i) {
        QVec e = zero_vec(rank);
        e[i] = 1;
        lin.push_back(e);
    }
    std::vector<Ray> rays;
    int processed = 0;

    for (const QVec& a : generators) {
        if (is_zero(a)) continue;

        int pivot = -1;
        for (size_t j = 0; j < lin.size(); ++j)
            if (dot(a, lin[j]) != 0) { pivot = static_cast<int>(j); break; }

        if (pivot >= 0) {
            QVec l = lin[pivot];
            Rat s = dot(a, l);
            if (s < 0) { l = vec_scale(Rat(-1), l); s = -s; }
            lin.erase(lin.begin() + pivot);
            for (auto& lj : lin) {
                Rat t = dot(a, lj) / s;
                if (t != 0) lj = vec_sub(lj, vec_scale(t, l));
            }
            for (auto& r : rays) {
                Rat t = dot(a, r.v) / s;
                if (t != 0) r.v = vec_sub(r.v, vec_scale(t, l));
                r.v = primitive_or_zero(r.v);
            }
            Ray nr;
            nr.v = primitive_or_zero(l);
            nr.active.assign(processed, 1);  // lineality was tight everywhere before
            nr.active.push_back(0);
            for (auto& r : rays) r.active.push_back(1);
            rays.push_back(std::move(nr));
        } else {
            std::vector<int> pos, zer, neg;
            std::vector<Rat> val(rays.size());
            for (size_t i = 0; i < rays.size(); ++i) {
                val[i] = dot(a, rays[i].v);
                if (val[i] > 0) pos.push_back(static_cast<int>(i));
                else if (val[i] < 0) neg.push_back(static_cast<int>(i));
                else zer.push_back(static_cast<int>(i));
            }
            std::vector<Ray> next;
            for (int i : pos) {
                Ray r = rays[i];
                r.active.push_back(0);
                next.push_back(std::move(r));
            }
            for (int i : zer) {
                Ray r = rays[i];
                r.active.push_back(1);
                next.push_back(std::move(r));
            }
            for (int p : pos) {
                for (int n : neg) {
                    // Combinatorial adjacency: the common tight set of p and n
                    // must not be contained in any other ray's tight set.
                    std::vector<char> common(processed);
                    for (int k = 0; k < processed; ++k)
                        common[k] = rays[p].active[k] && rays[n].active[k];
                    bool adjacent = true;
                    for (size_t w = 0; w < rays.size(); ++w) {
                        if (static_cast<int>(w) == p || static_cast<int>(w) == n) continue;
                        if (subset_of(common, rays[w].active)) { adjacent = false; break; }
                    }
                    if (!adjacent) continue;
                    Ray nr;
                    nr.v = primitive_or_zero(
                        vec_sub(vec_scale(val[p], rays[n].v), vec_scale(val[n], rays[p].v)));
                    if (is_zero(nr.v)) continue;
                    nr.active = std::move(common);
                    nr.active.push_back(1);
                    next.push_back(std::move(nr));
                }
            }
            rays = std::move(next);
        }
        ++processed;
    }

    DDResult res;
    for (auto& r : rays) res.rays.push_back(std::move(r.v));
    for (auto& l : lin) res.lineality.push_back(primitive_or_zero(l));
    std::sort(res.rays.begin(), res.rays.end(), vec_less);
    res.rays.erase(std::unique(res.rays.begin(), res.rays.end()), res.rays.end());
    return res;
}

}  // namespace detail

namespace {

// Rational orthogonal projection of v onto the complement of span(sub).
QVec project_off(const QVec& v, const std::vector<QVec>& sub) {
    if (sub.empty()) return v;
    // Solve Gram system: v - sub^T c with (sub sub^T) c = sub v.
    const int k = static_cast<int>(sub.size());
    QMat gram(k, QVec(k));
    QVec rhs(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) gram[i][j] = dot(sub[i], sub[j]);
        rhs[i] = dot(sub[i], v);
    }
    SolveResult sol = solve(gram, rhs);
    QVec out = v;
    for (int i = 0; i < k; ++i) out = vec_sub(out, vec_scale(sol.solution[i], sub[i]));
    return out;
}

std::vector<QVec> canonical_ray_list(std::vector<QVec> rays, const std::vector<QVec>& mod_out) {
    std::vector<QVec> out;
    for (auto& r : rays) {
        QVec p = project_off(r, mod_out);
        if (is_zero(p)) continue;
        mpz_class l = 1;
        for (const auto& x : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        out.push_back(integer_primitive(vec_scale(Rat(l), p)));
    }
    std::sort(out.begin(), out.end(), vec_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<QVec> canonical_basis(const std::vector<QVec>& vecs) {
    if (vecs.empty()) return {};
    QMat m = vecs;
    std::vector<int> piv = rref(m);
    std::vector<QVec> out;
    for (size_t i = 0; i < piv.size(); ++i) {
        mpz_class l = 1;
        for (const auto& x : m[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        out.push_back(integer_primitive(vec_scale(Rat(l), m[i])));
    }
    std::sort(out.begin(), out.end(), vec_less);
    return out;
}

}  // namespace

Cone::Cone(int rank, std::vector<QVec> generators) : rank_(rank) {
    for (const auto& g : generators)
        if (static_cast<int>(g.size()) != rank) throw GeometryError("generator rank mismatch");
    if (rank > 4) throw GeometryError("ambient rank > 4 not supported");

    detail::DDResult d = detail::dd_dual(rank_, generators);
    span_normals_ = canonical_basis(d.lineality);
    normals_ = canonical_ray_list(d.rays, d.lineality);

    std::vector<QVec> dual_gens = normals_;
    for (const auto& l : span_normals_) {
        dual_gens.push_back(l);
        dual_gens.push_back(vec_scale(Rat(-1), l));
    }
    detail::DDResult e = detail::dd_dual(rank_, dual_gens);
    lineality_ = canonical_basis(e.lineality);
    rays_ = canonical_ray_list(e.rays, e.lineality);
    dim_ = rank_ - span_rank(span_normals_);
}

Cone Cone::orthant(int rank) {
    std::vector<QVec> gens;
    for (int i = 0; i < rank; ++i) {
        QVec e = zero_vec(rank);
        e[i] = 1;
        gens.push_back(e);
    }
    return Cone(rank, std::move(gens));
}

Cone Cone::dual() const {
    std::vector<QVec> gens = normals_;
    for (const auto& l : span_normals_) {
        gens.push_back(l);
        gens.push_back(vec_scale(Rat(-1), l));
    }
    return Cone(rank_, std::move(gens));
}

bool Cone::contains(const QVec& v) const {
    for (const auto& s : span_normals_)
        if (dot(s, v) != 0) return false;
    for (const auto& h : normals_)
        if (dot(h, v) < 0) return false;
    return true;
}

bool Cone::rint_contains(const QVec& v) const {
    for (const auto& s : span_normals_)
        if (dot(s, v) != 0) return false;
    for (const auto& h : normals_)
        if (dot(h, v) <= 0) return false;
    return true;
}

std::vector<int> Cone::face_set(const QVec& v) const {
    if (!contains(v)) throw GeometryError("face_set: point not in cone");
    std::vector<int> out;
    for (size_t i = 0; i < normals_.size(); ++i)
        if (dot(normals_[i], v) == 0) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<QVec> Cone::generator_list() const {
    std::vector<QVec> g = rays_;
    for (const auto& l : lineality_) {
        g.push_back(l);
        g.push_back(vec_scale(Rat(-1), l));
    }
    return g;
}

}  // namespace fcone

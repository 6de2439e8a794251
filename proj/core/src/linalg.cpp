#include "fcone/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "fcone/errors.hpp"

namespace fcone {

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw InputError("empty rational literal");
    for (char c : s) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/' || c == '+'))
            throw InputError("bad rational literal: '" + s + "'");
    }
    try {
        Rat r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw InputError("bad rational literal: '" + s + "'");
    }
}

std::string rat_str(const Rat& r) {
    return r.get_str();
}

std::string rat_approx_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_str();
    std::ostringstream os;
    os << "≈" << r.get_d();
    return os.str();
}

std::string vec_str(const QVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += rat_str(v[i]);
    }
    return s + ")";
}

QVec vec_add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec vec_sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec vec_scale(const Rat& c, const QVec& v) {
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

QVec zero_vec(int rank) { return QVec(rank, Rat(0)); }

bool vec_less(const QVec& a, const QVec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

bool is_integral(const QVec& v) {
    for (const auto& x : v)
        if (x.get_den() != 1) return false;
    return true;
}

QVec integer_primitive(const QVec& v) {
    mpz_class g = 0;
    for (const auto& x : v) {
        if (x.get_den() != 1) throw GeometryError("integer_primitive on non-integral vector");
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (g == 0) throw GeometryError("integer_primitive of zero vector");
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] / Rat(g);
    return r;
}

PrimitivePoint primitive_and_multiplicity_std(const QVec& v) {
    if (is_zero(v)) throw GeometryError("multiplicity of the zero vector");
    mpz_class l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    return {vec_scale(Rat(l), v), Rat(l)};
}

std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[r], m[p]);
        Rat inv = 1 / m[r][c];
        for (int j = c; j < cols; ++j) m[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int rank_of(QMat m) { return static_cast<int>(rref(m).size()); }

Rat det(QMat m) {
    const int n = static_cast<int>(m.size());
    Rat d = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != c) { std::swap(m[p], m[c]); d = -d; }
        d *= m[c][c];
        Rat inv = 1 / m[c][c];
        for (int i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] * inv;
            for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return d;
}

SolveResult solve(const QMat& a, const QVec& b) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : static_cast<int>(b.size());
    QMat aug(rows);
    for (int i = 0; i < rows; ++i) {
        aug[i] = a[i];
        aug[i].push_back(b[i]);
    }
    QMat red = aug;
    std::vector<int> pivots = rref(red);

    // Inconsistency: pivot in the augmented column.
    if (!pivots.empty() && pivots.back() == cols) {
        // Recover which original equation conflicts: the reduced row
        // 0 = 1 is a combination; report the last nonzero original row index.
        SolveResult r;
        r.kind = SolveResult::Kind::Inconsistent;
        r.bad_row = rows - 1;
        return r;
    }

    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots)
        if (c < cols) is_pivot[c] = true;

    SolveResult r;
    r.solution = QVec(cols, Rat(0));
    int row = 0;
    for (int c : pivots) {
        if (c >= cols) break;
        r.solution[c] = red[row].back();
        ++row;
    }
    for (int c = 0; c < cols; ++c)
        if (!is_pivot[c]) r.free_columns.push_back(c);
    r.kind = r.free_columns.empty() ? SolveResult::Kind::Unique
                                    : SolveResult::Kind::Underdetermined;
    return r;
}

std::vector<QVec> kernel_basis(const QMat& a) {
    if (a.empty()) return {};
    const int cols = static_cast<int>(a[0].size());
    QMat red = a;
    std::vector<int> pivots = rref(red);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(cols, Rat(0));
        v[f] = 1;
        int row = 0;
        for (int c : pivots) {
            v[c] = -red[row][f];
            ++row;
        }
        basis.push_back(v);
    }
    return basis;
}

QMat inverse(const QMat& m) {
    const int n = static_cast<int>(m.size());
    QMat aug(n, QVec(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<int> pivots = rref(aug);
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1)
        throw GeometryError("singular matrix");
    QMat inv(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

QVec mat_vec(const QMat& m, const QVec& v) {
    QVec r(m.size(), Rat(0));
    for (size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
    return r;
}

QMat transpose(const QMat& m) {
    if (m.empty()) return {};
    QMat t(m[0].size(), QVec(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
    return t;
}

int span_rank(const std::vector<QVec>& vecs) {
    if (vecs.empty()) return 0;
    return rank_of(vecs);
}

std::vector<QVec> orthogonal_complement(const std::vector<QVec>& vecs, int rank) {
    if (vecs.empty()) {
        std::vector<QVec> id;
        for (int i = 0; i < rank; ++i) {
            QVec e = zero_vec(rank);
            e[i] = 1;
            id.push_back(e);
        }
        return id;
    }
    return kernel_basis(vecs);
}

bool in_span(const std::vector<QVec>& vecs, const QVec& v) {
    if (is_zero(v)) return true;
    if (vecs.empty()) return false;
    QMat m = vecs;
    int r0 = rank_of(m);
    m.push_back(v);
    return rank_of(m) == r0;
}

std::vector<QVec> integer_kernel(const QMat& a) {
    if (a.empty()) return {};
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(a[0].size());
    for (const auto& row : a)
        if (!is_integral(row)) throw GeometryError("integer_kernel needs an integral matrix");

    QMat w = a;
    QMat u(cols, QVec(cols, Rat(0)));
    for (int i = 0; i < cols; ++i) u[i][i] = 1;

    auto col_axpy = [&](int dst, int src, const Rat& q) {
        for (int i = 0; i < rows; ++i) w[i][dst] -= q * w[i][src];
        for (int i = 0; i < cols; ++i) u[i][dst] -= q * u[i][src];
    };
    auto col_swap = [&](int c1, int c2) {
        for (int i = 0; i < rows; ++i) std::swap(w[i][c1], w[i][c2]);
        for (int i = 0; i < cols; ++i) std::swap(u[i][c1], u[i][c2]);
    };

    int col = 0;
    for (int row = 0; row < rows && col < cols; ++row) {
        while (true) {
            int nz = -1;
            Rat best;
            for (int j = col; j < cols; ++j) {
                if (w[row][j] == 0) continue;
                Rat a_abs = abs(w[row][j]);
                if (nz < 0 || a_abs < best) { nz = j; best = a_abs; }
            }
            if (nz < 0) break;  // row already clear beyond col
            col_swap(col, nz);
            bool done = true;
            for (int j = col + 1; j < cols; ++j) {
                if (w[row][j] == 0) continue;
                // Integer quotient toward zero is enough for Euclid to make progress.
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), w[row][j].get_num().get_mpz_t(),
                           w[row][col].get_num().get_mpz_t());
                col_axpy(j, col, Rat(q));
                if (w[row][j] != 0) done = false;
            }
            if (done) { ++col; break; }
        }
    }
    std::vector<QVec> kernel;
    for (int j = col; j < cols; ++j) {
        QVec v(cols);
        for (int i = 0; i < cols; ++i) v[i] = u[i][j];
        kernel.push_back(std::move(v));
    }
    return kernel;
}

QMat lattice_basis_from_generators(const std::vector<QVec>& gens) {
    if (gens.empty()) throw GeometryError("no generators for lattice basis");
    const int cols = static_cast<int>(gens[0].size());
    mpz_class den = 1;
    for (const auto& g : gens)
        for (const auto& x : g) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    QMat m;
    for (const auto& g : gens) m.push_back(vec_scale(Rat(den), g));

    // Row-style Hermite reduction with integer operations.
    int row = 0;
    for (int c = 0; c < cols && row < static_cast<int>(m.size()); ++c) {
        while (true) {
            int nz = -1;
            Rat best;
            for (int i = row; i < static_cast<int>(m.size()); ++i) {
                if (m[i][c] == 0) continue;
                Rat a_abs = abs(m[i][c]);
                if (nz < 0 || a_abs < best) { nz = i; best = a_abs; }
            }
            if (nz < 0) break;
            std::swap(m[row], m[nz]);
            bool done = true;
            for (int i = row + 1; i < static_cast<int>(m.size()); ++i) {
                if (m[i][c] == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), m[i][c].get_num().get_mpz_t(),
                           m[row][c].get_num().get_mpz_t());
                for (int j = 0; j < cols; ++j) m[i][j] -= Rat(q) * m[row][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) { ++row; break; }
        }
    }
    QMat basis;
    for (int i = 0; i < row; ++i) basis.push_back(vec_scale(Rat(1) / Rat(den), m[i]));
    return basis;
}

}  // namespace fcone

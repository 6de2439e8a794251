#include "fcone/lattice.hpp"

#include "fcone/errors.hpp"

namespace fcone {

Lattice Lattice::standard(int rank) {
    QMat b(rank, QVec(rank, Rat(0)));
    for (int i = 0; i < rank; ++i) b[i][i] = 1;
    return Lattice(std::move(b));
}

Lattice::Lattice(QMat basis) : rank_(static_cast<int>(basis.size())), basis_(std::move(basis)) {
    for (const auto& row : basis_)
        if (static_cast<int>(row.size()) != rank_)
            throw InputError("lattice basis must be square");
    Rat d = det(basis_);
    if (d == 0) throw InputError("lattice basis is singular");
    covol_ = abs(d);
    // v = c^T * basis  <=>  c = (basis^T)^{-1} v.
    inv_ = inverse(transpose(basis_));
}

QVec Lattice::coords(const QVec& v) const {
    if (static_cast<int>(v.size()) != rank_) throw GeometryError("rank mismatch in lattice coords");
    return mat_vec(inv_, v);
}

bool Lattice::contains(const QVec& v) const { return is_integral(coords(v)); }

Rat Lattice::mu(const QVec& v) const {
    QVec c = coords(v);
    if (is_zero(c)) throw GeometryError("multiplicity of the zero vector");
    mpz_class l = 1;
    for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    return Rat(l);
}

PrimitivePoint Lattice::primitive_point(const QVec& v) const {
    Rat m = mu(v);
    return {vec_scale(m, v), m};
}

QVec Lattice::ray_primitive(const QVec& v) const {
    QVec c = coords(v);
    if (is_zero(c)) throw GeometryError("ray through the origin has no primitive generator");
    mpz_class l = 1;
    for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    QVec ic = vec_scale(Rat(l), c);
    mpz_class g = 0;
    for (const auto& x : ic) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num().get_mpz_t());
    Rat scale = Rat(l) / Rat(g);
    return vec_scale(scale, v);
}

Lattice Lattice::dual() const {
    // Dual basis: rows of (basis)^{-1} transposed appropriately. With rows as
    // basis vectors B, the dual lattice has basis rows (B^{-1})^T.
    QMat binv = inverse(basis_);
    return Lattice(transpose(binv));
}

}  // namespace fcone

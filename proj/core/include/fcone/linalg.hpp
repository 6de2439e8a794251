#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcone/rational.hpp"

namespace fcone {

/// Outcome of an exact linear solve A x = b.
struct SolveResult {
    enum class Kind { Unique, Underdetermined, Inconsistent };
    Kind kind;
    QVec solution;             // valid for Unique (and one solution for Underdetermined)
    std::vector<int> free_columns;  // valid for Underdetermined
    int bad_row = -1;          // valid for Inconsistent: index of an offending equation
};

int rank_of(QMat m);
Rat det(QMat m);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(QMat& m);

SolveResult solve(const QMat& a, const QVec& b);

/// Basis of the right kernel of a.
std::vector<QVec> kernel_basis(const QMat& a);

/// Inverse of a square nonsingular matrix; throws GeometryError if singular.
QMat inverse(const QMat& m);

QVec mat_vec(const QMat& m, const QVec& v);
QMat transpose(const QMat& m);

/// Rank of the matrix whose rows are the given vectors.
int span_rank(const std::vector<QVec>& vecs);

/// Basis of the subspace orthogonal to all given vectors (rational).
std::vector<QVec> orthogonal_complement(const std::vector<QVec>& vecs, int rank);

/// True if v lies in the rational span of the given vectors.
bool in_span(const std::vector<QVec>& vecs, const QVec& v);

/// Basis of {z integral : A z = 0} for an integral matrix A, via a
/// column-style Hermite reduction with transformation.
std::vector<QVec> integer_kernel(const QMat& a);

/// Basis (as rows) of the lattice generated by the given rational vectors.
QMat lattice_basis_from_generators(const std::vector<QVec>& gens);

}  // namespace fcone

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcone/pdivisor.hpp"

namespace fcone {
namespace selftest {

struct Options {
    std::uint64_t seed = 20240801;
    int instances = 100;     // size of the random p-divisor suite
    std::string filter;      // substring match on criterion names; empty = all
};

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

/// Runs the acceptance criteria (filtered), one result per criterion.
std::vector<CriterionResult> run_acceptance(const Options& opt);

/// Deterministic splitmix64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t state_;
};

/// A seeded random proper klt Q-Gorenstein p-divisor: rank 2, at most three
/// stored labels, vertex denominators <= 4, boundary coefficients from
/// {0, 1/2, 2/3}. Q-Gorensteinness holds by construction (the degree touches
/// the first tail ray; extra vertices are added along a lattice direction
/// orthogonal to the solved u).
struct RandomInstance {
    PDivisor divisor;
    Boundary boundary;
};
RandomInstance random_proper_klt(Rng& rng);

/// Hand-built type (2,p,q) instances for the ray-set construction.
std::vector<RandomInstance> handbuilt_2pq_instances();

}  // namespace selftest
}  // namespace fcone

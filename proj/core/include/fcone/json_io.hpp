#pragma once

#include <json.hpp>

#include "fcone/hyper.hpp"
#include "fcone/kollar.hpp"
#include "fcone/pdivisor.hpp"
#include "fcone/toric.hpp"

namespace fcone {
namespace io {

using nlohmann::json;

/// Vectors parse from arrays of exact "p/q" strings or integers; they are
/// always emitted as exact strings. No floats anywhere.
Rat rat_from_json(const json& j);
QVec vec_from_json(const json& j);
QMat mat_from_json(const json& j);

json rat_to_json(const Rat& r);
json vec_to_json(const QVec& v);
json mat_to_json(const QMat& m);

struct PDivisorInput {
    PDivisor divisor;
    Boundary boundary;
};
PDivisorInput pdivisor_from_json(const json& j);
json pdivisor_to_json(const PDivisor& d, const Boundary& delta);

DivisorSpec divisor_spec_from_json(const json& j);
json divisor_spec_to_json(const DivisorSpec& s);

ToricCone toric_cone_from_json(const json& j);
json toric_cone_to_json(const ToricCone& t);

hyper::MultigradedHypersurface hypersurface_from_json(const json& j);

json degen_cone_to_json(const DegenCone& dc);
json mld_witness_to_json(const MldWitness& w);

}  // namespace io
}  // namespace fcone

#pragma once

#include "homkit/hom_structure.hpp"
#include "homkit/lie_algebra.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/reduction.hpp"

#include <json.hpp>

#include <string>

namespace homkit
{

using Json = nlohmann::ordered_json;

/// Exact scalars become "p/q" strings, floats become JSON numbers.
Json to_json(const Scalar &s);
Json to_json(const Rational &q);
/// Strings and integers read as exact rationals, other numbers as floats.
Scalar scalar_from_json(const Json &j, const std::string &field);
Rational rational_from_json(const Json &j, const std::string &field);

/// {"dim", "rank", "valence": ["d", "u", ...], "entries": {"a,b,c": value}}; absent entries are zero.
Json to_json(const Tensor &t);
Tensor tensor_from_json(const Json &j, const std::string &field);

/// Row-major array of rows.
Json to_json(const QMatrix &m);
Json to_json(const DMatrix &m);
QMatrix matrix_from_json(const Json &j, const std::string &field);

/// {"dim", "labels", "brackets": {"a,b": {"c": value}}} with a < b only.
Json to_json(const LieAlgebra &alg);
LieAlgebra algebra_from_json(const Json &j, const std::string &field = "algebra");

Json to_json(const HomogeneousStructure &hs);
HomogeneousStructure structure_from_json(const Json &j, const std::string &field = "structure");
Json to_json(const StructureClass &c);

Json to_json(const PlaneWaveData &pw);
Json to_json(const ASResiduals &r);

Json to_json(const NondegenerateAnsatz &a);
Json to_json(const DegenerateAnsatz &a);
NondegenerateAnsatz nondegenerate_from_json(const Json &j);
DegenerateAnsatz degenerate_from_json(const Json &j);
Json to_json(const ReductionReport &r);

/// Parses a file; failures raise InputError naming the path.
Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);

} // namespace homkit

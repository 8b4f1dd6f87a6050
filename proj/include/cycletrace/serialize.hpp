#pragma once

#include <json.hpp>

#include "cycletrace/oracle.hpp"
#include "cycletrace/traces.hpp"

namespace cycletrace
{

using Json = nlohmann::ordered_json;

/// Integers are emitted as JSON numbers when they fit in 64 bits, else as strings.
Json integer_json(const Integer& n);
Integer integer_from_json(const Json& j);

Json form_json(const BinaryQuadraticForm& Q);
BinaryQuadraticForm form_from_json(const Json& j);

Json to_json(const TraceResult& r);
TraceResult trace_result_from_json(const Json& j);

Json to_json(const QuadratureConfig& cfg);

/// {"D", "exact", "numeric", "rel_diff", "pass", "config"}.
Json verification_json(const Integer& D, const Rational& exact, double numeric, const CompareReport& report,
                       const QuadratureConfig& cfg);

} // namespace cycletrace

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hypermetric/contraction.hpp"
#include "hypermetric/domains.hpp"
#include "hypermetric/fixedpoint.hpp"
#include "hypermetric/metrics.hpp"

namespace hypermetric {

using Json = nlohmann::json;

// Domains: {"kind":"disk"|"polydisc", "centers":[[re,im],...], "radii":[...]}
// or {"kind":"semianalytic", "dim":n, "constraints":[{"map":text,"threshold":t}],
//     "box":{"lo":[[re,im],...], "hi":[[re,im],...]}}.
Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);

/// [[re, im], ...]
Json to_json(const Eigen::VectorXcd& p);
Eigen::VectorXcd point_from_json(const Json& j);

Json to_json(const Bound& b);
Json to_json(const ContractionCertificate& c);
Json to_json(const RangeEvidence& e);
Json to_json(const ContractionReport& r);
Json to_json(const DecayReport& r);
Json to_json(const FixedPointResult& r);

/// {"metric":..., "domain":..., "point":..., "vector":...} -> {"value","kind","tol"}.
Json evaluate_metric_query(const Json& query);

/// "disk:c,r", "polydisc:c1,r1/c2,r2", or a JSON domain object.
Domain parse_domain_literal(std::string_view text);

/// Comma-separated complex values ("0.5,0.9i") or a JSON [[re,im],...] array.
Eigen::VectorXcd parse_point_literal(std::string_view text);

/// Shortest text that reads back as the same double.
std::string format_real(double x);
/// 17 significant digits, locale independent.
std::string format_real17(double x);

/// Columns: iter, re_z1, im_z1, ..., step_euclid, certified_tail.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

}  // namespace hypermetric

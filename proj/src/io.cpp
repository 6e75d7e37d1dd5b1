#include "hypermetric/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace hypermetric {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a complex number as [re, im], a number, or a string; got " +
                    j.dump());
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& text) {
  const Complex z = parse_complex(text);
  if (z.imag() != 0.0) throw ConfigError("expected a real number, got '" + text + "'");
  return z.real();
}

// "c,r" -> (c, r)
std::pair<Complex, double> parse_factor(const std::string& text) {
  const auto comma = text.rfind(',');
  if (comma == std::string::npos) {
    throw ConfigError("domain factor '" + text + "' must be written center,radius");
  }
  return {parse_complex(trim(text.substr(0, comma))), parse_real(trim(text.substr(comma + 1)))};
}

}  // namespace

// ---- domains ----------------------------------------------------------------

Json to_json(const Domain& d) {
  Json j;
  j["kind"] = to_string(d.kind());
  if (d.is_product()) {
    j["centers"] = to_json(d.centers());
    Json radii = Json::array();
    for (Eigen::Index i = 0; i < d.radii().size(); ++i) radii.push_back(d.radii()[i]);
    j["radii"] = radii;
    return j;
  }
  j["dim"] = d.dim();
  Json cons = Json::array();
  for (const auto& c : d.constraints()) {
    cons.push_back({{"map", to_string(c.g)}, {"threshold", c.threshold}});
  }
  j["constraints"] = cons;
  if (!d.box().bounded()) throw ConfigError("cannot serialize a domain with an unbounded box");
  j["box"] = {{"lo", to_json(d.box().lo)}, {"hi", to_json(d.box().hi)}};
  return j;
}

Domain domain_from_json(const Json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "disk" || kind == "polydisc") {
    const Eigen::VectorXcd centers = point_from_json(require(j, "centers"));
    const Json& r = require(j, "radii");
    if (!r.is_array()) throw ConfigError("\"radii\" must be an array");
    Eigen::VectorXd radii(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) radii[static_cast<Eigen::Index>(i)] = r[i].get<double>();
    if (kind == "disk") {
      if (centers.size() != 1 || radii.size() != 1) {
        throw ConfigError("a disk has exactly one center and one radius");
      }
      return Domain::disk(centers[0], radii[0]);
    }
    return Domain::polydisc(centers, radii);
  }
  if (kind == "semianalytic") {
    const int dim = require(j, "dim").get<int>();
    std::vector<Constraint> cons;
    if (j.contains("constraints")) {
      for (const auto& c : j.at("constraints")) {
        cons.push_back({parse(require(c, "map").get<std::string>(), dim),
                        require(c, "threshold").get<double>()});
      }
    }
    const Json& box = require(j, "box");
    return Domain::semianalytic(dim, std::move(cons),
                                Box{point_from_json(require(box, "lo")),
                                    point_from_json(require(box, "hi"))});
  }
  throw ConfigError("unknown domain kind '" + kind + "'");
}

Json to_json(const Eigen::VectorXcd& p) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) j.push_back(complex_json(p[i]));
  return j;
}

Eigen::VectorXcd point_from_json(const Json& j) {
  if (j.is_string()) return parse_point_literal(j.get<std::string>());
  if (j.is_number()) return Eigen::VectorXcd::Constant(1, Complex(j.get<double>(), 0.0));
  if (!j.is_array() || j.empty()) throw ConfigError("expected a nonempty array of coordinates");
  Eigen::VectorXcd p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return p;
}

// ---- results ----------------------------------------------------------------

Json to_json(const Bound& b) {
  Json j{{"value", b.value}, {"kind", to_string(b.kind)}, {"tol", b.tol}};
  if (b.caveat) j["caveat"] = "integrated from a lower-bound metric; direction not certified";
  return j;
}

Json to_json(const ContractionCertificate& c) {
  Json j;
  j["k"] = c.k;
  j["method"] = to_string(c.method);
  j["M"] = c.M ? Json(c.M->value) : Json(nullptr);
  j["R"] = c.R ? Json(*c.R) : Json(nullptr);
  j["r"] = c.r ? Json(*c.r) : Json(nullptr);
  j["rigorous"] = c.rigorous;
  return j;
}

Json to_json(const RangeEvidence& e) {
  Json j{{"checked", e.checked}, {"verdict", to_string(e.verdict)}};
  j["worst_margin"] = std::isfinite(e.worst_margin) ? Json(e.worst_margin) : Json(nullptr);
  if (e.witness) j["witness"] = to_json(*e.witness);
  return j;
}

Json to_json(const ContractionReport& r) {
  Json j;
  j["samples"] = r.samples.size();
  j["holds"] = r.holds;
  j["inconclusive"] = r.inconclusive;
  j["violated"] = r.violated;
  j["max_ratio"] = r.max_ratio;
  if (!r.samples.empty()) {
    const auto& s = r.samples[r.argmax];
    j["argmax"] = {{"point", to_json(s.x)}, {"vector", to_json(s.v)}};
  }
  j["verdict"] = r.violated > 0 ? "violated" : (r.all_hold() ? "holds" : "inconclusive");
  return j;
}

Json to_json(const DecayReport& r) {
  return {{"distances", r.distances},
          {"envelope", r.envelope},
          {"ratios", r.ratios},
          {"verdict", r.consistent() ? "consistent" : "inconclusive"}};
}

Json to_json(const FixedPointResult& r) {
  Json j;
  j["c"] = to_json(r.c);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["certificate"] = to_json(r.certificate);
  j["certified_tail"] = r.certified_tail;
  j["first_step_bound"] =
      r.trace.first_step_bound ? Json(*r.trace.first_step_bound) : Json(nullptr);
  j["range_evidence"] = to_json(r.evidence);
  j["range_overridden"] = r.range_overridden;
  j["stopping_rule"] = to_string(r.stopping_rule);
  Json caveats = Json::array();
  if (r.stopping_rule == StoppingRule::EuclideanSurrogate) {
    caveats.push_back(
        "stopped on the Euclidean step surrogate tol*(1-k)/k; the certified bound is "
        "certified_tail, measured in the invariant distance");
  }
  if (!r.certificate.rigorous) {
    caveats.push_back("contraction constant is heuristic (sampled ingredient)");
  }
  if (r.range_overridden) caveats.push_back("range evidence was inconclusive and overridden");
  j["caveats"] = caveats;
  return j;
}

Json evaluate_metric_query(const Json& query) {
  const std::string metric = require(query, "metric").get<std::string>();
  const Eigen::VectorXcd x = point_from_json(require(query, "point"));
  const Eigen::VectorXcd v = point_from_json(require(query, "vector"));
  Bound b;
  if (metric == "poincare") {
    if (x.size() != 1 || v.size() != 1) throw ArgumentError("poincare metric is one-dimensional");
    b = Bound::exact(poincare_metric(x[0], v[0]));
  } else {
    const Domain d = domain_from_json(require(query, "domain"));
    if (metric == "caratheodory") {
      b = caratheodory_metric(d, x, v);
    } else if (metric == "kobayashi") {
      b = kobayashi_metric(d, x, v);
    } else {
      throw ConfigError("unknown metric '" + metric + "'");
    }
  }
  return to_json(b);
}

// ---- literals ---------------------------------------------------------------

Domain parse_domain_literal(std::string_view text) {
  const std::string s = trim(text);
  if (!s.empty() && s.front() == '{') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("domain JSON: ") + e.what());
    }
    return domain_from_json(j);
  }
  const auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("domain literal '" + s + "' must look like disk:c,r or polydisc:c1,r1/c2,r2");
  }
  const std::string kind = s.substr(0, colon);
  const std::string body = s.substr(colon + 1);
  if (kind == "disk") {
    const auto [c, r] = parse_factor(body);
    return Domain::disk(c, r);
  }
  if (kind == "polydisc") {
    std::vector<std::pair<Complex, double>> factors;
    std::size_t start = 0;
    for (;;) {
      const auto slash = body.find('/', start);
      factors.push_back(parse_factor(body.substr(start, slash - start)));
      if (slash == std::string::npos) break;
      start = slash + 1;
    }
    Eigen::VectorXcd c(static_cast<Eigen::Index>(factors.size()));
    Eigen::VectorXd r(static_cast<Eigen::Index>(factors.size()));
    for (std::size_t i = 0; i < factors.size(); ++i) {
      c[static_cast<Eigen::Index>(i)] = factors[i].first;
      r[static_cast<Eigen::Index>(i)] = factors[i].second;
    }
    return Domain::polydisc(c, r);
  }
  throw ConfigError("unknown domain kind '" + kind + "'");
}

Eigen::VectorXcd parse_point_literal(std::string_view text) {
  const std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    try {
      return point_from_json(Json::parse(s));
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("point JSON: ") + e.what());
    }
  }
  std::vector<Complex> coords;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    coords.push_back(parse_complex(trim(s.substr(start, comma - start))));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  Eigen::VectorXcd p(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p[static_cast<Eigen::Index>(i)] = coords[i];
  return p;
}

// ---- CSV --------------------------------------------------------------------

std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_real17(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  const Eigen::Index n = trace.points.empty() ? 0 : trace.points.front().size();
  os << "iter";
  for (Eigen::Index j = 1; j <= n; ++j) os << ",re_z" << j << ",im_z" << j;
  os << ",step_euclid,certified_tail\n";
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    os << i;
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ',' << format_real17(trace.points[i][j].real()) << ','
         << format_real17(trace.points[i][j].imag());
    }
    os << ',';
    if (i < trace.step_euclid.size()) os << format_real17(trace.step_euclid[i]);
    os << ',';
    if (trace.first_step_bound) os << format_real17(certify_tail(trace, static_cast<int>(i)));
    os << '\n';
  }
}

}  // namespace hypermetric

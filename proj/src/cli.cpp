#include "hypermetric/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

namespace hypermetric::cli {

namespace {

const char* const kCommands[] = {"metric", "distance", "diameter", "contraction", "verify",
                                 "fixpoint"};

bool is_command(const std::string& s) {
  return std::find(std::begin(kCommands), std::end(kCommands), s) != std::end(kCommands);
}

// ---- config access ----------------------------------------------------------

template <class T>
T get(const Json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config field \"") + key + "\" has the wrong type: " +
                      cfg.at(key).dump());
  }
}

template <class T>
T get(const Json& cfg, const char* group, const char* key) {
  try {
    return cfg.at(group).at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("config field \"") + group + "." + key +
                      "\" has the wrong type: " + cfg.at(group).at(key).dump());
  }
}

std::size_t get_count(const Json& cfg, const char* group, const char* key) {
  const auto v = group ? get<long long>(cfg, group, key) : get<long long>(cfg, key);
  if (v < 1) {
    throw ConfigError(std::string("config field \"") + (group ? std::string(group) + "." : "") +
                      key + "\" must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

double get_positive(const Json& cfg, const char* group, const char* key) {
  const double v = group ? get<double>(cfg, group, key) : get<double>(cfg, key);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("config field \"") + (group ? std::string(group) + "." : "") +
                      key + "\" must be a positive real");
  }
  return v;
}

const Json& need(const Json& cfg, const char* key, const std::string& command) {
  if (cfg.at(key).is_null()) {
    throw ConfigError("command '" + command + "' needs \"" + key + "\" (--" + key + ")");
  }
  return cfg.at(key);
}

Domain domain_field(const Json& cfg, const char* key, const std::string& command) {
  return domain_from_json(need(cfg, key, command));
}

Point point_field(const Json& cfg, const char* key, const std::string& command) {
  return point_from_json(need(cfg, key, command));
}

MetricKind metric_kind(const std::string& name) {
  if (name == "caratheodory") return MetricKind::Caratheodory;
  if (name == "kobayashi") return MetricKind::Kobayashi;
  throw ConfigError("metric must be caratheodory, kobayashi or poincare, got '" + name + "'");
}

CertificateMethod method_of(const std::string& name) {
  if (name == "dilation") return CertificateMethod::Dilation;
  if (name == "tanh_diameter") return CertificateMethod::TanhDiameter;
  throw ConfigError("method must be dilation or tanh_diameter, got '" + name + "'");
}

// ---- option structs from config --------------------------------------------

struct Options {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  CompetitorOptions competitors;
  KobayashiOptions kobayashi;
  PathOptions path;
  DiameterOptions diameter;
  VerifyOptions verify;
};

Options options_of(const Json& cfg) {
  Options o;
  o.seed = get<std::uint64_t>(cfg, "seed");
  o.samples = get_count(cfg, nullptr, "samples");
  o.competitors.directions = get<std::size_t>(cfg, "competitors", "directions");
  o.competitors.seed = o.seed;
  o.kobayashi.radius_tol = get_positive(cfg, "kobayashi", "radius_tol");
  o.kobayashi.angles = static_cast<int>(get_count(cfg, "kobayashi", "angles"));
  o.kobayashi.samples = o.samples;
  o.kobayashi.seed = o.seed;
  o.path.segments = static_cast<int>(get_count(cfg, "path", "segments"));
  o.path.refinements = get<int>(cfg, "path", "refinements");
  o.path.rel_tol = get_positive(cfg, "path", "rel_tol");
  o.path.descent_order = static_cast<int>(get_count(cfg, "path", "descent_order"));
  o.path.max_sweeps = static_cast<int>(get_count(cfg, "path", "max_sweeps"));
  o.path.order = static_cast<int>(get_count(cfg, "path", "order"));
  o.path.quad.rel_tol = get_positive(cfg, "quadrature", "rel_tol");
  o.path.quad.max_refinements = get<int>(cfg, "quadrature", "max_refinements");
  if (o.path.refinements < 0 || o.path.quad.max_refinements < 0) {
    throw ConfigError("refinement counts must be nonnegative");
  }
  o.diameter.samples = get_count(cfg, "diameter", "samples");
  o.diameter.seed = o.seed;
  o.diameter.sampled_only = get<bool>(cfg, "diameter", "sampled_only");
  o.diameter.competitors = o.competitors;
  o.verify.samples = get_count(cfg, "verify", "samples");
  o.verify.seed = o.seed;
  o.verify.tol = get<double>(cfg, "verify", "tol");
  o.verify.competitors = o.competitors;
  o.verify.kobayashi = o.kobayashi;
  return o;
}

// ---- commands ---------------------------------------------------------------

Json run_metric(const Json& cfg, const Options& o) {
  const std::string metric = get<std::string>(cfg, "metric");
  const Point x = point_field(cfg, "point", "metric");
  const Vector v = point_field(cfg, "vector", "metric");
  if (metric == "poincare") {
    if (x.size() != 1 || v.size() != 1) throw ArgumentError("poincare metric is one-dimensional");
    return to_json(Bound::exact(poincare_metric(x[0], v[0])));
  }
  const Domain d = domain_field(cfg, "domain", "metric");
  const InfinitesimalMetric m(d, metric_kind(metric), o.competitors, o.kobayashi);
  return to_json(m(x, v));
}

Json run_distance(const Json& cfg, const Options& o) {
  const std::string metric = get<std::string>(cfg, "metric");
  const Point a = point_field(cfg, "a", "distance");
  const Point b = point_field(cfg, "b", "distance");
  Json result;
  if (metric == "poincare") {
    if (a.size() != 1 || b.size() != 1) {
      throw ArgumentError("poincare distance is one-dimensional");
    }
    result = to_json(Bound::exact(poincare_distance(a[0], b[0])));
    result["integrated"] = false;
    return result;
  }
  const Domain d = domain_field(cfg, "domain", "distance");
  const MetricKind kind = metric_kind(metric);
  const bool integrated = get<bool>(cfg, "integrated");
  if (kind == MetricKind::Caratheodory && !integrated) {
    result = to_json(caratheodory_distance(d, a, b, o.competitors));
    result["integrated"] = false;
    return result;
  }
  // The Kobayashi distance is the integrated form of its metric.
  const InfinitesimalMetric m(d, kind, o.competitors, o.kobayashi);
  const OptimizedPath p = shortest_polyline(m, a, b, o.path);
  result = to_json(p.length);
  result["integrated"] = true;
  result["path_vertices"] = p.path.vertices.size();
  return result;
}

Json run_diameter(const Json& cfg, const Options& o) {
  const Domain X = domain_field(cfg, "X", "diameter");
  const Domain U = domain_field(cfg, "U", "diameter");
  const Bound M = caratheodory_diameter(X, U, o.diameter);
  Json result = to_json(M);
  result["k"] = tanh_diameter_constant(M);
  return result;
}

ContractionCertificate certificate_of(const Json& cfg, const Options& o, const Domain& X,
                                      const Domain& U) {
  CertificateOptions co;
  co.samples = o.samples;
  co.seed = o.seed;
  co.diameter = o.diameter;
  return certify_contraction(X, U, method_of(get<std::string>(cfg, "method")), co);
}

Json run_contraction(const Json& cfg, const Options& o) {
  const Domain X = domain_field(cfg, "X", "contraction");
  const Domain U = domain_field(cfg, "U", "contraction");
  return to_json(certificate_of(cfg, o, X, U));
}

Json run_verify(const Json& cfg, const Options& o) {
  const Domain X = domain_field(cfg, "X", "verify");
  const Domain U = domain_field(cfg, "U", "verify");
  const std::string metric = get<std::string>(cfg, "metric");
  if (metric == "poincare") throw ConfigError("verify needs caratheodory or kobayashi");
  Json result;
  double k;
  if (cfg.at("k").is_null()) {
    const ContractionCertificate cert = certificate_of(cfg, o, X, U);
    k = cert.k;
    result["certificate"] = to_json(cert);
  } else {
    k = get<double>(cfg, "k");
    result["certificate"] = nullptr;
  }
  result["k"] = k;
  result["metric"] = metric;
  result["report"] = to_json(verify_metric_contraction(X, U, k, metric_kind(metric), o.verify));
  return result;
}

Json run_fixpoint(const Json& cfg, const Options& o, std::ostream* trace_csv) {
  const Domain X = domain_field(cfg, "X", "fixpoint");
  const Domain U = domain_field(cfg, "U", "fixpoint");
  need(cfg, "map", "fixpoint");
  const int dim = cfg.at("dim").is_null() ? X.dim() : get<int>(cfg, "dim");
  if (dim != X.dim()) {
    throw ConfigError("\"dim\" is " + std::to_string(dim) + " but X has dimension " +
                      std::to_string(X.dim()));
  }
  const HoloMap f = parse(get<std::string>(cfg, "map"), dim);
  const Point x0 = point_field(cfg, "x0", "fixpoint");

  SolveOptions so;
  so.tol = get_positive(cfg, nullptr, "tol");
  so.max_iter = static_cast<int>(get_count(cfg, nullptr, "max_iter"));
  so.method = method_of(get<std::string>(cfg, "method"));
  so.override_range = get<bool>(cfg, "override_range");
  so.step_invariant = get<bool>(cfg, "step_invariant");
  so.samples = o.samples;
  so.seed = o.seed;
  so.range_floor = get<double>(cfg, "range_floor");
  so.path = o.path;
  so.diameter = o.diameter;

  const FixedPointResult r = picard_solve(f, X, U, x0, so);
  if (trace_csv) write_trace_csv(*trace_csv, r.trace);
  Json result = to_json(r);
  result["map"] = to_string(f);
  return result;
}

// ---- argument handling ------------------------------------------------------

Json read_config(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

// Domain and point fields may be literals; store their canonical JSON.
void canonicalize(Json& cfg) {
  for (const char* key : {"domain", "X", "U"}) {
    Json& v = cfg[key];
    if (v.is_string()) v = to_json(parse_domain_literal(v.get<std::string>()));
    else if (!v.is_null()) v = to_json(domain_from_json(v));
  }
  for (const char* key : {"point", "vector", "a", "b", "x0"}) {
    Json& v = cfg[key];
    if (!v.is_null()) v = to_json(point_from_json(v));
  }
  if (!cfg["map"].is_null() && !cfg["map"].is_string()) {
    throw ConfigError("\"map\" must be map source text");
  }
}

}  // namespace

Json default_config() {
  return Json{
      {"command", nullptr},
      {"domain", nullptr},
      {"X", nullptr},
      {"U", nullptr},
      {"point", nullptr},
      {"vector", nullptr},
      {"a", nullptr},
      {"b", nullptr},
      {"metric", "caratheodory"},
      {"integrated", false},
      {"method", "dilation"},
      {"k", nullptr},
      {"map", nullptr},
      {"dim", nullptr},
      {"x0", nullptr},
      {"seed", 0},
      {"samples", 512},
      {"tol", 1e-10},
      {"max_iter", 10000},
      {"override_range", false},
      {"step_invariant", false},
      {"range_floor", 1e-6},
      {"competitors", {{"directions", 64}}},
      {"kobayashi", {{"radius_tol", 1e-6}, {"angles", 64}}},
      {"path",
       {{"segments", 8},
        {"refinements", 5},
        {"rel_tol", 1e-6},
        {"descent_order", 12},
        {"max_sweeps", 400},
        {"order", 32}}},
      {"quadrature", {{"rel_tol", 1e-6}, {"max_refinements", 10}}},
      {"diameter", {{"samples", 256}, {"sampled_only", false}}},
      {"verify", {{"samples", 256}, {"tol", 1e-12}}},
      {"out", nullptr},
      {"trace", nullptr},
  };
}

void overlay(Json& base, const Json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : patch.items()) {
    if (!base.contains(key)) throw ConfigError("unknown field \"" + key + "\" in " + where);
    Json& slot = base[key];
    if (slot.is_object()) {
      overlay(slot, value, where + "." + key);
    } else {
      slot = value;
    }
  }
}

Json execute(const Json& config, std::ostream* trace_csv) {
  Json cfg = config;
  const std::string command =
      cfg.at("command").is_string() ? cfg.at("command").get<std::string>() : "";
  if (!is_command(command)) throw ConfigError("missing or unknown command '" + command + "'");
  canonicalize(cfg);
  const Options o = options_of(cfg);

  Json result;
  if (command == "metric") result = run_metric(cfg, o);
  else if (command == "distance") result = run_distance(cfg, o);
  else if (command == "diameter") result = run_diameter(cfg, o);
  else if (command == "contraction") result = run_contraction(cfg, o);
  else if (command == "verify") result = run_verify(cfg, o);
  else result = run_fixpoint(cfg, o, trace_csv);

  result["command"] = command;
  result["config"] = cfg;
  return result;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Invariant metrics, contraction certificates and Picard fixed points on bounded "
               "complex domains.",
               "hypermetric"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, domain, X, U, point, vector, a, b, metric, method, map, x0, out_path,
      trace_path;
  double k = 0.0, tol = 0.0;
  std::uint64_t seed = 0;
  long long samples = 0, max_iter = 0;

  struct StringFlag {
    CLI::Option* opt;
    const std::string* value;
    const char* key;
  };
  std::vector<StringFlag> string_flags;
  auto str = [&](const char* name, std::string& target, const char* key, const char* help) {
    string_flags.push_back({app.add_option(name, target, help), &target, key});
  };
  auto* config_opt = app.add_option("--config", config_path, "JSON config file, or - for stdin");
  str("--domain", domain, "domain", "domain literal (disk:c,r or polydisc:c1,r1/c2,r2) or JSON");
  str("--X", X, "X", "outer domain");
  str("--U", U, "U", "inner domain, relatively compact in X");
  str("--point", point, "point", "base point, comma-separated complex coordinates");
  str("--vector", vector, "vector", "tangent vector");
  str("--a", a, "a", "first point of a distance query");
  str("--b", b, "b", "second point of a distance query");
  str("--metric", metric, "metric", "caratheodory, kobayashi or poincare");
  str("--method", method, "method", "dilation or tanh_diameter");
  str("--map", map, "map", "holomorphic self-map, components separated by ';'");
  str("--x0", x0, "x0", "starting point of the iteration");
  str("--out", out_path, "out", "write the JSON result here instead of stdout");
  str("--trace", trace_path, "trace", "write the iteration trace as CSV (fixpoint)");
  auto* k_opt = app.add_option("--k", k, "contraction constant to verify (default: certified)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* samples_opt = app.add_option("--samples", samples, "sample count");
  auto* tol_opt = app.add_option("--tol", tol, "Euclidean tolerance of the fixed point");
  auto* iter_opt = app.add_option("--max-iter", max_iter, "iteration cap");
  auto* integrated_opt = app.add_flag("--integrated", "integrate the metric along a polyline");
  auto* override_opt =
      app.add_flag("--override-range", "proceed when range evidence is inconclusive");
  auto* step_opt =
      app.add_flag("--step-invariant", "bound each step in the invariant distance");

  std::string command;
  const char* const summaries[] = {
      "infinitesimal metric of --vector at --point",
      "distance between --a and --b",
      "bound on the diameter of U in the metric of X",
      "contraction certificate for holomorphic maps of X into U",
      "sampled check of the certified contraction",
      "Picard iteration of --map from --x0"};
  for (std::size_t c = 0; c < std::size(kCommands); ++c) {
    const char* name = kCommands[c];
    app.add_subcommand(name, summaries[c])->callback([&command, name] { command = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  Json cfg = default_config();
  std::string out_file, trace_file;
  try {
    if (config_opt->count()) overlay(cfg, read_config(config_path, in));
    cfg["command"] = command;
    for (const auto& f : string_flags) {
      if (f.opt->count()) cfg[f.key] = *f.value;
    }
    if (k_opt->count()) cfg["k"] = k;
    if (seed_opt->count()) cfg["seed"] = seed;
    if (samples_opt->count()) {
      cfg["samples"] = samples;
      if (command == "verify") cfg["verify"]["samples"] = samples;
      if (command == "diameter") cfg["diameter"]["samples"] = samples;
    }
    if (tol_opt->count()) cfg["tol"] = tol;
    if (iter_opt->count()) cfg["max_iter"] = max_iter;
    if (integrated_opt->count()) cfg["integrated"] = true;
    if (override_opt->count()) cfg["override_range"] = true;
    if (step_opt->count()) cfg["step_invariant"] = true;
    if (cfg["out"].is_string()) out_file = cfg["out"].get<std::string>();
    if (cfg["trace"].is_string()) trace_file = cfg["trace"].get<std::string>();
  } catch (const Error& e) {
    err << "hypermetric: " << e.what() << '\n';
    return kUsage;
  }

  std::ofstream trace_stream;
  auto open_trace = [&]() -> std::ostream* {
    if (trace_file.empty()) return nullptr;
    if (trace_stream.is_open()) return &trace_stream;
    trace_stream.open(trace_file);
    if (!trace_stream) throw ConfigError("cannot write trace file '" + trace_file + "'");
    return &trace_stream;
  };

  Json result;
  try {
    result = execute(cfg, command == "fixpoint" ? open_trace() : nullptr);
  } catch (const NonConvergenceError& e) {
    err << "hypermetric: " << e.what() << '\n';
    if (!trace_file.empty()) {
      try {
        if (std::ostream* t = open_trace()) write_trace_csv(*t, e.trace());
      } catch (const Error& inner) {
        err << "hypermetric: " << inner.what() << '\n';
      }
    }
    return kNonConvergence;
  } catch (const ConfigError& e) {
    err << "hypermetric: " << e.what() << '\n';
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "hypermetric: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "hypermetric: " << e.what() << '\n';
    return kPrecondition;
  }

  const std::string text = result.dump(2) + "\n";
  if (out_file.empty()) {
    out << text;
  } else {
    std::ofstream f(out_file);
    if (!f) {
      err << "hypermetric: cannot write output file '" << out_file << "'\n";
      return kUsage;
    }
    f << text;
  }
  return kOk;
}

}  // namespace hypermetric::cli

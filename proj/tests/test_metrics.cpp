#include "doctest.h"

#include <random>

#include "hypermetric/errors.hpp"
#include "hypermetric/io.hpp"
#include "hypermetric/metrics.hpp"
#include "hypermetric/quadrature.hpp"
#include "support.hpp"

using namespace hypermetric;
using testsupport::omega;

namespace {

Point pt(Complex a) { return Point::Constant(1, a); }
Point pt(Complex a, Complex b) {
  Point p(2);
  p << a, b;
  return p;
}

Domain bidisc(double r1, double r2) { return Domain::polydisc(pt(0.0, 0.0), Eigen::Vector2d(r1, r2)); }

const double kAtanhHalf = 0.5493061443340548;

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  const GaussLegendre gl(8);
  CHECK(gl.integrate([](double t) { return std::pow(t, 15); }) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(gl.integrate([](double t) { return std::exp(t); }, 0.0, 2.0) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
  double s = 0.0;
  for (double w : GaussLegendre(32).weights) s += w;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("poincare_distance") {
  CHECK(poincare_distance<double>(0.0, 0.0) == 0.0);
  CHECK(poincare_distance<double>(0.0, 0.5) == doctest::Approx(kAtanhHalf).epsilon(1e-15));
  CHECK(poincare_distance<double>(0.5, -0.5) == doctest::Approx(1.0986122886681098).epsilon(1e-15));
  CHECK_THROWS_AS(poincare_distance<double>(1.0, 0.0), DomainError);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Complex z = testsupport::random_in_disk(rng, 0.95);
    const Complex w = testsupport::random_in_disk(rng, 0.95);
    CHECK(poincare_distance(z, w) == doctest::Approx(omega(z, w)).epsilon(1e-12));
  }
}

TEST_CASE("poincare_metric") {
  CHECK(poincare_metric<double>(0.0, 1.0) == 1.0);
  CHECK(poincare_metric<double>({0.3, 0.1}, 0.0) == 0.0);
  CHECK(poincare_metric<double>(0.5, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(poincare_metric<double>({0.0, 1.0}, 1.0), DomainError);
}

TEST_CASE("poincare_metric at the origin is the sup of |phi'(0)| over self-maps") {
  // Brute force over random self-maps composed with the Mobius map sending
  // phi(0) to 0; the dilations s z push the supremum toward 1.
  std::mt19937_64 rng(2);
  double best = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const HoloMap f(1, {testsupport::random_disk_self_map(rng)});
    const Complex a = f.eval(pt(0.0))[0];
    const Complex d = f.jvp(pt(0.0), pt(1.0))[0];
    best = std::max(best, std::abs(d) / (1.0 - std::norm(a)));
  }
  for (double s : {0.9, 0.99, 0.999, 0.9999}) best = std::max(best, s);
  CHECK(best <= 1.0 + 1e-12);
  CHECK(best >= 0.9999);
  CHECK(poincare_metric<double>(0.0, 1.0) == doctest::Approx(best).epsilon(1e-4));
}

TEST_CASE("closed-form Caratheodory and Kobayashi metrics") {
  CHECK(caratheodory_metric(Domain::unit_disk(), pt(0.0), pt(1.0)).value == 1.0);
  CHECK(caratheodory_metric(Domain::unit_disk(), pt(0.0), pt(1.0)).kind == BoundKind::Exact);
  CHECK(caratheodory_metric(Domain::disk(0.0, 0.5), pt(0.0), pt(1.0)).value == doctest::Approx(2.0));
  CHECK(caratheodory_metric(bidisc(1, 1), pt(0.0, 0.0), pt(1.0, 1.0)).value == doctest::Approx(1.0));
  CHECK(kobayashi_metric(Domain::unit_disk(), pt(0.0), pt(1.0)).value == 1.0);
  CHECK(kobayashi_metric(Domain::unit_disk(), pt(0.0), pt(0.0)).value == 0.0);
  CHECK_THROWS_AS(caratheodory_metric(Domain::unit_disk(), pt(1.5), pt(1.0)), DomainError);
  CHECK_THROWS_AS(kobayashi_metric(Domain::unit_disk(), pt(1.0), pt(1.0)), DomainError);
}

TEST_CASE("Kobayashi upper bound on a re-encoded bidisc") {
  const Domain semi = as_semianalytic(bidisc(1, 1));
  const Bound b = kobayashi_metric(semi, pt(0.0, 0.0), pt(1.0, 0.0));
  CHECK(b.kind == BoundKind::Upper);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(b.value + b.tol >= 1.0);
  CHECK(kobayashi_metric(semi, pt(0.0, 0.0), pt(0.0, 0.0)).value == 0.0);
}

TEST_CASE("Kobayashi upper bound never undercuts the closed form") {
  const Domain d = Domain::polydisc(pt(0.1, {0.0, -0.2}), Eigen::Vector2d(0.5, 1.0));
  const Domain semi = as_semianalytic(d);
  std::mt19937_64 rng(4);
  for (const Point& x : sample(d, 40, 6)) {
    const Vector v = pt(testsupport::random_complex(rng, 1.0), testsupport::random_complex(rng, 1.0));
    const double truth = testsupport::polydisc_metric(d.centers(), d.radii(), x, v);
    const Bound b = kobayashi_metric(semi, x, v);
    CHECK(b.value + b.tol >= truth * (1.0 - 1e-9));
  }
}

TEST_CASE("the inner dilation improvement keeps an upper bound") {
  KobayashiOptions opts;
  opts.inner = as_semianalytic(Domain::disk(0.0, 0.5));
  const Domain X = as_semianalytic(Domain::unit_disk());
  const Bound plain = kobayashi_metric(X, pt(0.1), pt(1.0));
  const Bound improved = kobayashi_metric(X, pt(0.1), pt(1.0), opts);
  CHECK(improved.value <= plain.value);
  CHECK(improved.value + improved.tol >= 1.0 / (1.0 - 0.01) * (1.0 - 1e-9));
}

TEST_CASE("Caratheodory distance examples") {
  CHECK(caratheodory_distance(Domain::unit_disk(), pt(0.0), pt(0.5)).value ==
        doctest::Approx(kAtanhHalf).epsilon(1e-15));
  CHECK(caratheodory_distance(bidisc(1, 1), pt(0.0, 0.0), pt(0.5, -0.5)).value ==
        doctest::Approx(kAtanhHalf).epsilon(1e-15));
  const Domain semi = as_semianalytic(Domain::unit_disk());
  CHECK(caratheodory_distance(semi, pt(0.2), pt(0.2)).value == 0.0);
  CHECK(caratheodory_distance(semi, pt(0.2), pt(0.2)).kind == BoundKind::Exact);
  CHECK(caratheodory_distance(semi, pt(0.0), pt(0.5)).value ==
        doctest::Approx(kAtanhHalf).epsilon(1e-12));
}

TEST_CASE("holomorphic self-maps contract the Poincare metric and distance") {
  std::mt19937_64 rng(6);
  const Domain disk = Domain::unit_disk();
  int checked = 0;
  while (checked < 1000) {
    const HoloMap f(1, {testsupport::random_disk_self_map(rng)});
    if (range_check(f, disk, disk, 64, 1).verdict != RangeVerdict::Supported) continue;
    const Complex z = testsupport::random_in_disk(rng, 0.97);
    const Complex w = testsupport::random_in_disk(rng, 0.97);
    const Complex v = testsupport::random_complex(rng, 1.0);
    const Complex fz = f.eval(pt(z))[0];
    CHECK(poincare_metric(fz, f.jvp(pt(z), pt(v))[0]) <= poincare_metric(z, v) + 1e-9);
    CHECK(poincare_distance(fz, f.eval(pt(w))[0]) <= poincare_distance(z, w) + 1e-9);
    ++checked;
  }
}

TEST_CASE("metrics are absolutely homogeneous in the vector") {
  std::mt19937_64 rng(7);
  const Domain domains[] = {Domain::disk({0.2, 0.1}, 0.7), bidisc(1, 2),
                            as_semianalytic(bidisc(1, 2))};
  for (const Domain& d : domains) {
    const InfinitesimalMetric cara(d, MetricKind::Caratheodory);
    for (const Point& x : sample(d, 20, 3)) {
      Vector v(d.dim());
      for (int j = 0; j < d.dim(); ++j) v[j] = testsupport::random_complex(rng, 1.0);
      const Complex lambda = testsupport::random_complex(rng, 2.0);
      const double base = cara(x, v).value;
      CHECK(cara(x, lambda * v).value == doctest::Approx(std::abs(lambda) * base).epsilon(1e-12));
    }
  }
  // The Kobayashi upper bound bisects along the normalized direction, so
  // homogeneity is exact there too.
  const Domain semi = as_semianalytic(Domain::unit_disk());
  const Bound one = kobayashi_metric(semi, pt(0.3), pt({0.6, 0.8}));
  const Bound three = kobayashi_metric(semi, pt(0.3), pt({1.8, 2.4}));
  CHECK(three.value == doctest::Approx(3.0 * one.value).epsilon(1e-12));
}

TEST_CASE("smaller domains have larger Caratheodory metrics") {
  std::mt19937_64 rng(8);
  struct Pair {
    Domain U, X;
  };
  const Pair pairs[] = {{Domain::disk(0.1, 0.5), Domain::unit_disk()},
                        {bidisc(0.5, 0.9), bidisc(1.0, 1.0)}};
  for (const auto& p : pairs) {
    for (const Point& x : sample(p.U, 100, 2)) {
      Vector v(p.U.dim());
      for (int j = 0; j < p.U.dim(); ++j) v[j] = testsupport::random_complex(rng, 1.0);
      CHECK(caratheodory_metric(p.X, x, v).value <= caratheodory_metric(p.U, x, v).value + 1e-12);
    }
  }
}

TEST_CASE("sampled lower bounds stay below the closed forms") {
  std::mt19937_64 rng(9);
  const Domain d = Domain::polydisc(pt(0.1, {0.0, -0.2}), Eigen::Vector2d(0.5, 1.0));
  const Domain semi = as_semianalytic(d);
  for (const Point& x : sample(d, 100, 1)) {
    const Vector v = pt(testsupport::random_complex(rng, 1.0), testsupport::random_complex(rng, 1.0));
    const double truth = testsupport::polydisc_metric(d.centers(), d.radii(), x, v);
    const Bound b = caratheodory_metric(semi, x, v);
    CHECK(b.kind == BoundKind::Lower);
    CHECK(b.value <= truth + 1e-9 * std::max(1.0, truth));
  }
  const Vector e1 = pt(1.0, 0.0);
  CHECK(caratheodory_metric(semi, d.centers(), e1).value >= 0.95 * 2.0);
}

TEST_CASE("the competitor family has the documented size") {
  const Domain semi = as_semianalytic(bidisc(1, 1));
  CompetitorOptions opts;
  opts.directions = 10;
  CHECK(CompetitorFamily(semi, opts).size() == 2 + 2 + 10);
}

TEST_CASE("path_length of straight segments") {
  const InfinitesimalMetric m(Domain::unit_disk(), MetricKind::Caratheodory);
  const Bound l = path_length(m, Polyline{{pt(0.0), pt(0.5)}, 32});
  CHECK(std::abs(l.value - kAtanhHalf) <= 1e-10);
  CHECK(l.kind == BoundKind::Upper);
  CHECK(std::abs(path_length(m, Polyline{{pt(0.0), pt({0.0, 0.5})}, 32}).value - kAtanhHalf) <= 1e-10);
  CHECK(path_length(m, Polyline{{pt(0.3)}, 32}).value == 0.0);
  CHECK_THROWS_AS(path_length(m, Polyline{{pt(0.0), pt(1.5)}, 32}), PathInvalidError);

  const InfinitesimalMetric lower(as_semianalytic(Domain::unit_disk()), MetricKind::Caratheodory);
  const Bound lb = path_length(lower, Polyline{{pt(0.0), pt(0.5)}, 32});
  CHECK(lb.kind == BoundKind::Lower);
  CHECK(lb.caveat);
}

TEST_CASE("a nonconvex polyline leaving the domain is rejected") {
  const Domain lens = Domain::semianalytic(
      1, {{parse("z1 - 0.5", 1), 1.0}, {parse("z1 + 0.5", 1), 1.0}},
      Box{pt({-0.5, -1.0}), pt({0.5, 1.0})});
  const InfinitesimalMetric m(lens, MetricKind::Caratheodory);
  CHECK_THROWS_AS(path_length(m, Polyline{{pt(0.0), pt({0.0, 0.99})}, 32}), PathInvalidError);
}

TEST_CASE("integrated distances") {
  const InfinitesimalMetric disk(Domain::unit_disk(), MetricKind::Caratheodory);
  CHECK(std::abs(integrated_distance(disk, pt(0.0), pt(0.5)).value - kAtanhHalf) <= 1e-4);
  CHECK(integrated_distance(disk, pt(0.3), pt(0.3)).value == 0.0);
  const InfinitesimalMetric bi(bidisc(1, 1), MetricKind::Kobayashi);
  CHECK(std::abs(integrated_distance(bi, pt(0.0, 0.0), pt(0.5, 0.0)).value - kAtanhHalf) <= 1e-4);
  // Off-center endpoints need a curved geodesic.
  const Bound curved = integrated_distance(disk, pt({-0.6, 0.3}), pt({0.6, 0.3}));
  CHECK(std::abs(curved.value - omega({-0.6, 0.3}, {0.6, 0.3})) <= 1e-4);
  CHECK(curved.value >= omega({-0.6, 0.3}, {0.6, 0.3}) - 1e-9);
}

TEST_CASE("integrated distance is symmetric and satisfies the triangle inequality") {
  const InfinitesimalMetric m(bidisc(1, 1), MetricKind::Caratheodory);
  const Point a = pt({0.3, 0.1}, -0.2), b = pt(-0.4, {0.0, 0.5}), c = pt(0.1, 0.6);
  const double ab = integrated_distance(m, a, b).value;
  const double ba = integrated_distance(m, b, a).value;
  const double bc = integrated_distance(m, b, c).value;
  const double ac = integrated_distance(m, a, c).value;
  const double opt_tol = 1e-6 * (ab + bc + ac);
  CHECK(std::abs(ab - ba) <= 2.0 * opt_tol);
  CHECK(ac <= ab + bc + 2.0 * opt_tol);
  CHECK(ab == doctest::Approx(testsupport::polydisc_distance(pt(0.0, 0.0), Eigen::Vector2d(1, 1), a, b)).epsilon(1e-4));
}

TEST_CASE("integrated Kobayashi distance on a semianalytic lens") {
  const Domain lens = Domain::semianalytic(
      1, {{parse("z1 - 0.5", 1), 1.0}, {parse("z1 + 0.5", 1), 1.0}},
      Box{pt({-0.5, -1.0}), pt({0.5, 1.0})});
  const InfinitesimalMetric m(lens, MetricKind::Kobayashi);
  // Every metric evaluation is a bisection here, so keep the path coarse.
  PathOptions opts;
  opts.segments = 4;
  opts.refinements = 1;
  const Bound d = integrated_distance(m, pt({-0.2, 0.0}), pt({0.2, 0.0}), opts);
  CHECK(d.kind == BoundKind::Upper);
  CHECK(d.value > 0.0);
  CHECK(std::isfinite(d.value));
}

TEST_CASE("metric queries round-trip through JSON") {
  const Json q = Json::parse(R"({"metric":"caratheodory",
      "domain":{"kind":"disk","centers":[[0,0]],"radii":[1]},
      "point":[[0.5,0]], "vector":[[1,0]]})");
  const Json r = evaluate_metric_query(q);
  CHECK(r["value"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(r["kind"] == "exact");
  CHECK(r["tol"].get<double>() == 0.0);
  const Json p = evaluate_metric_query(Json::parse(R"({"metric":"poincare","point":[[0,0]],"vector":[[0,2]]})"));
  CHECK(p["value"].get<double>() == 2.0);
}

TEST_CASE("domains and points round-trip through JSON and literals") {
  const Domain d = Domain::polydisc(pt({0.1, 0.2}, -0.3), Eigen::Vector2d(0.5, 1.0));
  const Domain back = domain_from_json(to_json(d));
  CHECK(back.centers() == d.centers());
  CHECK(back.radii() == d.radii());
  const Domain lit = parse_domain_literal("polydisc:0.1+0.2i,0.5/-0.3,1");
  CHECK(lit.centers() == d.centers());
  CHECK(lit.radii() == d.radii());
  const Domain semi = as_semianalytic(d);
  const Domain semi_back = domain_from_json(to_json(semi));
  CHECK(semi_back.kind() == DomainKind::SemiAnalytic);
  CHECK(semi_back.constraints().size() == 2);
  CHECK(parse_point_literal("0.5, 0.9i") == pt(0.5, {0.0, 0.9}));
  CHECK(point_from_json(to_json(pt({1e-17, 3.0}))) == pt({1e-17, 3.0}));
  CHECK_THROWS_AS(parse_domain_literal("square:0,1"), ConfigError);
  CHECK_THROWS_AS(parse_domain_literal("disk:0"), ConfigError);
}

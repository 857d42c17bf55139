#include <catch2/catch_amalgamated.hpp>

#include "corona/halfplane.hpp"
#include "corona/poly.hpp"

#include <random>

using namespace corona;
using Catch::Approx;

namespace {

// Independent evaluation: expand numerator and denominator polynomials and
// divide once, instead of multiplying factor quotients.
cplx eval_by_polynomials(const std::vector<cplx>& zeros, cplx z) {
  cplx num(1.0), den(1.0);
  for (const cplx& a : zeros) {
    num *= z - a;
    den *= z - std::conj(a);
  }
  return num / den;
}

Blaschke random_symmetric(std::mt19937_64& rng, int pairs, bool axis) {
  std::uniform_real_distribution<double> re(0.05, 3.0), im(0.05, 3.0);
  std::vector<cplx> z;
  for (int k = 0; k < pairs; ++k) {
    cplx a(re(rng), im(rng));
    z.push_back(a);
    z.push_back(reflect(a));
  }
  if (axis) z.push_back(cplx(0.0, im(rng)));
  return make_symmetric_product(z);
}

}  // namespace

TEST_CASE("evaluation at own zero and on the boundary") {
  Blaschke b({cplx(0, 1)});
  CHECK(std::abs(b(cplx(0, 1))) == 0.0);
  cplx v = b(cplx(3, 0));
  CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
  CHECK(std::abs(v - cplx(3, -1) / cplx(3, 1)) < 1e-15);
}

TEST_CASE("symmetric pair evaluates to a real number on the axis") {
  std::vector<cplx> zs{cplx(1, 1), cplx(-1, 1)};
  Blaschke b = make_symmetric_product(zs);
  cplx v = b(cplx(0, 2));
  cplx oracle = eval_by_polynomials(zs, cplx(0, 2));
  CHECK(std::abs(v - oracle) < 1e-15);
  CHECK(std::abs(v.imag()) < 1e-15);
  // |2i - (1+i)|^2 / |2i - (1-i)|^2 = 2 / 10
  CHECK(v.real() == Approx(0.2).epsilon(1e-14));
}

TEST_CASE("empty product is the constant one") {
  Blaschke b;
  CHECK(b(cplx(0.3, 0.7)) == cplx(1.0, 0.0));
}

TEST_CASE("product validation") {
  CHECK_THROWS_AS(make_symmetric_product({cplx(1, 1)}), Error);
  CHECK_THROWS_AS(make_symmetric_product({cplx(0, -1)}), Error);
  CHECK_THROWS_AS(make_symmetric_product({cplx(0, 1), cplx(0, 1)}), Error);
  CHECK_NOTHROW(make_symmetric_product({cplx(0, 1), cplx(2, 1), cplx(-2, 1)}));
}

TEST_CASE("axis reality and boundary unimodularity on random products") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0), y(0.01, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    Blaschke b = random_symmetric(rng, 1 + trial % 4, trial % 2 == 0);
    CHECK(is_symmetric(b));
    CHECK(std::abs(b(cplx(0.0, y(rng))).imag()) < 1e-12);
    CHECK(std::abs(std::abs(b(cplx(u(rng), 0.0))) - 1.0) < 1e-12);
    cplx z(u(rng), y(rng));
    CHECK(std::abs(b(z)) <= 1.0 + 1e-15);
    CHECK(std::abs(b(reflect(z)) - std::conj(b(z))) < 1e-12);
  }
}

TEST_CASE("symmetrize on sampled functions") {
  std::vector<cplx> pts;
  for (int i = -4; i <= 4; ++i)
    for (int j = 1; j <= 5; ++j) pts.push_back(cplx(0.25 * i, 0.3 * j));
  Samples iz{pts, {}}, idz{pts, {}};
  for (const cplx& z : pts) {
    iz.f.push_back(kI * z);
    idz.f.push_back(z);
  }
  Samples a = symmetrize(iz);
  for (size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(a.f[k] - iz.f[k]) < 1e-15);
  Samples b = symmetrize(idz);
  for (size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(b.f[k]) < 1e-15);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Samples r{pts, {}};
  for (size_t k = 0; k < pts.size(); ++k) r.f.push_back(cplx(n01(rng), n01(rng)));
  Samples s1 = symmetrize(r), s2 = symmetrize(s1);
  CHECK(symmetry_defect(s1) == 0.0);
  double sup_in = 0.0, sup_out = 0.0;
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(s2.f[k] == s1.f[k]);
    sup_in = std::max(sup_in, std::abs(r.f[k]));
    sup_out = std::max(sup_out, std::abs(s1.f[k]));
  }
  CHECK(sup_out <= sup_in);

  Samples broken{{cplx(1, 1)}, {cplx(1, 0)}};
  CHECK_THROWS_AS(symmetrize(broken), Error);
}

TEST_CASE("corona constant") {
  Blaschke i1({cplx(0, 1)}), i2({cplx(0, 2)});
  DeltaResult same = corona_delta(i1, i1);
  CHECK(same.common_zero);
  CHECK(same.delta == 0.0);

  DeltaResult d = corona_delta(i1, i2);
  CHECK_FALSE(d.common_zero);
  // axis restriction: |y-1|/(y+1) + |y-2|/(y+2), minimum 1/3 at y = 1 and y = 2
  double axis_min = 1e9;
  for (int k = 0; k <= 200000; ++k) {
    double y = 0.5 + 2.0 * k / 200000.0;
    axis_min = std::min(axis_min, std::abs(y - 1) / (y + 1) + std::abs(y - 2) / (y + 2));
  }
  CHECK(axis_min == Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(d.delta <= axis_min + 1e-9);
  CHECK(d.delta == Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(d.outer_lower_bound >= d.delta);

  Blaschke one;
  CHECK(corona_delta(one, i1).delta == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sign condition") {
  Blaschke f1({cplx(0, 1), cplx(0, 3)}), f2({cplx(0, 2)});
  SignCheck s = axis_sign_condition(f1, f2, 0.1);
  CHECK_FALSE(s.violation);
  CHECK(s.sign == -1);
  REQUIRE(s.intervals.size() == 1);
  CHECK(s.intervals[0].lo < 2.0);
  CHECK(s.intervals[0].hi > 2.0);
  // |(y-2)/(y+2)| < 0.1  <=>  y in (18/11, 22/9)
  CHECK(s.intervals[0].lo == Approx(18.0 / 11.0).epsilon(1e-9));
  CHECK(s.intervals[0].hi == Approx(22.0 / 9.0).epsilon(1e-9));
  CHECK(f1(cplx(0, 2)).real() == Approx(-1.0 / 15.0).epsilon(1e-14));

  Blaschke g1({cplx(0, 2)}), g2({cplx(0, 1), cplx(0, 4)});
  SignCheck v = axis_sign_condition(g1, g2, 0.05);
  CHECK(v.violation);
  CHECK(g1(cplx(0, v.witness_pos)).real() > 0.0);
  CHECK(g1(cplx(0, v.witness_neg)).real() < 0.0);
  CHECK(v.witness_neg == Approx(1.0).margin(0.2));
  CHECK(v.witness_pos == Approx(4.0).margin(0.5));

  Blaschke off = make_symmetric_product({cplx(1, 1), cplx(-1, 1)});
  SignCheck e = axis_sign_condition(g1, off, 0.01);
  CHECK(e.intervals.empty());
  CHECK(e.sign == 1);
  CHECK_FALSE(e.violation);

  CHECK_THROWS_AS(axis_sign_condition(f1, f2, 1.5), Error);
}

TEST_CASE("transfer to the disc and back") {
  cplx a = to_halfplane(cplx(0.0, 0.0));
  CHECK(a.real() == 0.0);
  CHECK(a.imag() == Approx(1.0));

  Blaschke b = make_symmetric_product({cplx(1, 1), cplx(-1, 1)});
  Blaschke back = zeros_from_disc(zeros_to_disc(b));
  REQUIRE(back.degree() == 2);
  for (size_t k = 0; k < 2; ++k) CHECK(std::abs(back.zeros[k] - b.zeros[k]) < 1e-12);

  cplx r(0.3, 0.4);
  cplx h1 = to_halfplane(r), h2 = to_halfplane(std::conj(r));
  CHECK(std::abs(h2 - reflect(h1)) < 1e-15);

  CHECK_THROWS_AS(to_halfplane(cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(to_disc(cplx(0.0, -1.0)), Error);

  // a real-symmetric disc function becomes half-plane symmetric
  auto fd = [](cplx w) { return (w - 0.5) / (1.0 - 0.5 * w) * w; };
  Samples s;
  for (int i = -3; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) s.z.push_back(cplx(0.5 * i, 0.5 * j));
  for (const cplx& z : s.z) s.f.push_back(fd(to_disc(z)));
  CHECK(symmetry_defect(s) < 1e-14);
  Samples rt = samples_from_disc(samples_to_disc(s));
  for (size_t k = 0; k < s.z.size(); ++k) CHECK(std::abs(rt.z[k] - s.z[k]) < 1e-12);
}

TEST_CASE("two-sided log-modulus estimate") {
  Blaschke b({cplx(0, 1)});
  LogModulusBounds e = log_modulus_sum(b, cplx(0, 10), 0.5);
  CHECK(e.lower == Approx(20.0 / 121.0).epsilon(1e-14));
  CHECK(e.actual == Approx(std::log(11.0 / 9.0)).epsilon(1e-14));
  CHECK(e.upper == Approx(40.0 / 121.0).epsilon(1e-14));
  CHECK(e.lower <= e.actual);
  CHECK(e.actual <= e.upper);

  LogModulusBounds z = log_modulus_sum(Blaschke(), cplx(0, 1), 0.5);
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);
  CHECK(z.actual == 0.0);

  CHECK_THROWS_AS(log_modulus_sum(b, cplx(0, 1.1), 0.5), Error);
}

TEST_CASE("log-modulus estimate on random hypothesis-satisfying triples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0), y(0.05, 4.0), g(0.05, 0.95);
  int checked = 0;
  while (checked < 10000) {
    Blaschke b = random_symmetric(rng, 1 + checked % 3, checked % 2 == 1);
    cplx z(u(rng), y(rng));
    double gamma = g(rng);
    double mn = 1.0;
    for (const cplx& a : b.zeros) mn = std::min(mn, std::abs(blaschke_factor(a, z)));
    if (mn < gamma) continue;
    LogModulusBounds e = log_modulus_sum(b, z, gamma);
    REQUIRE(e.lower <= e.actual * (1 + 1e-12));
    REQUIRE(e.actual <= e.upper * (1 + 1e-12));
    ++checked;
  }
}

TEST_CASE("zero file parsing") {
  ZeroFile f = parse_zero_text("# comment\n1 2\n0 3\n");
  CHECK(f.product.degree() == 3);
  REQUIRE(f.added_partners.size() == 1);
  CHECK(f.added_partners[0] == cplx(-1, 2));
  CHECK(is_symmetric(f.product));
  CHECK_THROWS_AS(parse_zero_text("1 x\n"), Error);
  CHECK_THROWS_AS(parse_zero_text("1 -2\n"), Error);
  CHECK_THROWS_AS(parse_zero_text("0 1\n0 1\n"), Error);
}

TEST_CASE("polynomial arithmetic and extended Euclid") {
  using P = Poly<double>;
  P a = from_roots<double>({1.0, 2.0, 3.0});
  P b = from_roots<double>({-1.0, 4.0});
  auto e = extended_euclid(a, b);
  CHECK(e.gcd.degree() == 0);
  P lhs = e.s * a + e.t * b;
  for (double x : {-2.0, 0.5, 7.0}) CHECK(lhs(x) == Approx(e.gcd(x)).epsilon(1e-10));

  P c = from_roots<double>({1.0, 5.0});
  auto e2 = extended_euclid(a, c);
  CHECK(e2.gcd.degree() == 1);
  CHECK(-e2.gcd.c[0] / e2.gcd.c[1] == Approx(1.0).epsilon(1e-10));

  auto roots = poly_roots(Poly<cplx>(std::vector<cplx>{cplx(6), cplx(-5), cplx(1)}));
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
  CHECK(roots[0].real() == Approx(2.0));
  CHECK(roots[1].real() == Approx(3.0));
}

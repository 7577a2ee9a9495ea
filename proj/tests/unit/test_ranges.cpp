#include <doctest.h>

#include "bergman/errors.hpp"
#include "bergman/ranges.hpp"

using namespace bergman::ranges;

namespace {

bool is(const p_range& r, rational lo, std::optional<rational> hi) {
  if (!r.lo().is_exact() || r.lo().exact() != lo) return false;
  if (!hi) return r.hi().is_infinite();
  return r.hi().is_exact() && r.hi().exact() == *hi;
}

}  // namespace

TEST_CASE("exponent decomposition") {
  const auto a = decompose_exponent(rational(0));
  CHECK(a.k == -1);
  CHECK(a.s == rational(2));
  const auto b = decompose_exponent(rational(7, 2));
  CHECK(b.k == 1);
  CHECK(b.s == rational(3, 2));
  const auto c = decompose_exponent(rational(-5));
  CHECK(c.k == -3);
  CHECK(c.s == rational(1));
  const auto d = decompose_exponent(-0.5);
  CHECK(d.k == -1);
  CHECK(d.s == doctest::Approx(1.5));
}

TEST_CASE("punctured disk ranges") {
  CHECK(range_disk_star(rational(-5, 2)) == p_range::all());
  CHECK(is(range_disk_star(rational(2)), rational(4, 3), rational(4)));
  CHECK(is(range_disk_star(rational(-7, 2)), rational(3, 2), rational(3)));
  CHECK(range_disk_star(rational(-4)) == p_range::all());
  CHECK(range_disk_star(rational(0)) == p_range::all());
  // Just above zero the range narrows sharply around 2.
  CHECK(is(range_disk_star(rational(1, 100)), rational(201, 101), rational(201, 100)));
  // s' = -5: k = -3, s = 1, case (5).
  CHECK(is(range_disk_star(rational(-5)), rational(3, 2), rational(3)));
}

TEST_CASE("Hartogs ranges and inflation") {
  CHECK(is(range_hartogs(rational(0)), rational(4, 3), rational(4)));
  CHECK(range_hartogs(rational(-3)) == p_range::all());
  CHECK(is(range_hartogs(rational(2)), rational(3, 2), rational(3)));
  for (int n = -40; n <= 40; ++n) {
    const rational sp(n, 4);
    CHECK(range_hartogs(sp) == range_disk_star(sp + 2));
  }
  CHECK(range_hartogs(0.0) == range_hartogs(rational(0)));
}

TEST_CASE("conjugate endpoints at s' = 0 on the Hartogs triangle") {
  const auto r = range_hartogs(rational(0));
  const rational lo = r.lo().exact(), hi = r.hi().exact();
  CHECK(1 / lo + 1 / hi == rational(1));
}

TEST_CASE("two-weight ranges") {
  CHECK(range_two_weight(rational(0), rational(0)).range == range_hartogs(rational(0)));
  CHECK(is(range_two_weight(rational(0), rational(2)).range, rational(4, 3), rational(6)));
  CHECK_THROWS_AS(range_two_weight(rational(-4), rational(0)), bergman::unsupported_case);
  for (int n = -3; n <= 8; ++n) {
    const rational sp(n, 2);
    CHECK(range_two_weight(sp, sp).range == range_hartogs(sp));
  }
  const auto v = range_two_weight(1.0, 3.0);
  CHECK(v.sharp_predicate(2.0));
  CHECK_FALSE(v.sharp_predicate(1.5));
}

TEST_CASE("generalized Hartogs triangles") {
  generalized_hartogs_spec a{{1}, {rational(0)}};
  CHECK(is(range_generalized(a), rational(4, 3), rational(4)));
  generalized_hartogs_spec b{{}, {rational(0), rational(0)}};
  CHECK(generalized_exponents(b) == std::vector<rational>{rational(0), rational(2)});
  CHECK(is(range_generalized(b), rational(4, 3), rational(4)));
  generalized_hartogs_spec c{{}, {rational(-3)}};
  CHECK(range_generalized(c) == p_range::all());
  CHECK_THROWS_AS(range_generalized(generalized_hartogs_spec{{0}, {rational(1)}}), bergman::invalid_argument);
}

TEST_CASE("alpha example endpoints are conjugate") {
  for (int n = 1; n <= 12; ++n) {
    const rational alpha(n, 3);
    const auto r = alpha_example_range(alpha);
    CHECK(is(r, (2 * alpha + 2) / (alpha + 2), (2 * alpha + 2) / alpha));
    CHECK(1 / r.lo().exact() + 1 / r.hi().exact() == rational(1));
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("4/3") == rational(4, 3));
  CHECK(parse_rational("-0.25") == rational(-1, 4));
  CHECK(parse_rational("2") == rational(2));
  CHECK_FALSE(parse_rational("abc").has_value());
  CHECK(to_string(rational(-7, 2)) == "-7/2");
  CHECK(exact_dyadic(0.375) == rational(3, 8));
  CHECK_FALSE(exact_dyadic(0.1).has_value());
}

TEST_CASE("range membership") {
  const auto r = range_disk_star(rational(1));
  CHECK_FALSE(r.contains(rational(3, 2)));
  CHECK(r.contains(rational(2)));
  CHECK_FALSE(r.contains(rational(3)));
  CHECK(r.contains(2.5));
  const p_range expected(endpoint(rational(3, 2)), endpoint(rational(3)));
  CHECK(intersect_ranges(r, range_disk_star(rational(-7, 2))) == expected);
}

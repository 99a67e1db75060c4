#include <doctest.h>

#include <numeric>
#include <set>

#include "ofront/error.hpp"
#include "ofront/geometry.hpp"

using namespace ofront;

TEST_CASE("direction tables") {
  const Direction d = make_direction(2, 5);
  CHECK(d.sigma_star_sq == 29);
  CHECK(d.sigma_inf == 5);
  CHECK(d.tau == std::array<int, 4>{2, 5, -2, -5});
  CHECK(d.sigma == std::array<int, 4>{5, -2, -5, 2});
  CHECK(d.N == 10);
  CHECK(make_direction(1, 0).N == 2);
}

TEST_CASE("invalid directions") {
  auto code = [](int sh, int sv) {
    try {
      make_direction(sh, sv);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(0, 0) == ErrorCode::ZeroDirection);
  CHECK(code(2, 4) == ErrorCode::NotCoprime);
  CHECK(code(1001, 1) == ErrorCode::DirectionOutOfRange);
}

TEST_CASE("transverse coordinates are a bijection onto the sublattice") {
  for (auto [sh, sv] : {std::pair{1, 0}, {2, 3}, {2, 5}, {-3, 4}}) {
    const Direction d = make_direction(sh, sv);
    std::set<std::pair<long, long>> seen;
    for (long i = -6; i <= 6; ++i)
      for (long j = -6; j <= 6; ++j) {
        const SublatticePoint q = to_transverse(d, i, j);
        CHECK(seen.insert({q.n, q.l}).second);
        const auto back = is_member(d, q.n, q.l);
        REQUIRE(back);
        CHECK(back->first == i);
        CHECK(back->second == j);
        CHECK(transverse_residue(d, q.n) == floor_mod(q.l, d.sigma_star_sq));
        CHECK(longitudinal_residue(d, q.l) == floor_mod(q.n, d.sigma_star_sq));
      }
    // A lattice neighbour moves (n, l) by (tau, sigma).
    const SublatticePoint o = to_transverse(d, 0, 0);
    const SublatticePoint e = to_transverse(d, 1, 0);
    CHECK(e.n - o.n == d.tau[0]);
    CHECK(e.l - o.l == d.sigma[0]);
  }
}

TEST_CASE("non-members are rejected") {
  const Direction d = make_direction(2, 3);
  int members = 0;
  for (long n = 0; n < 13; ++n)
    for (long l = 0; l < 13; ++l) members += is_member(d, n, l).has_value();
  CHECK(members == 13);
}

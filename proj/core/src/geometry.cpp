#include "ofront/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "ofront/error.hpp"

namespace ofront {

namespace {
constexpr int kMaxComponent = 1000;

// Bezout coefficients x, y with x*a + y*b = gcd(a, b).
void bezout(long a, long b, long& x, long& y) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long q = old_r / r;
    long tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s; old_s = s; s = tmp;
    tmp = old_t - q * t; old_t = t; t = tmp;
  }
  if (old_r < 0) { old_s = -old_s; old_t = -old_t; }
  x = old_s;
  y = old_t;
}
}  // namespace

Direction make_direction(int sh, int sv) {
  if (sh == 0 && sv == 0) throw Error(ErrorCode::ZeroDirection, "direction (0,0)");
  if (std::abs(sh) > kMaxComponent || std::abs(sv) > kMaxComponent)
    throw Error(ErrorCode::DirectionOutOfRange, "components limited to |sigma| <= 1000");
  if (std::gcd(std::abs(sh), std::abs(sv)) != 1)
    throw Error(ErrorCode::NotCoprime,
                "(" + std::to_string(sh) + "," + std::to_string(sv) + ") is not coprime");
  Direction d;
  d.sigma_h = sh;
  d.sigma_v = sv;
  d.tau = {sh, sv, -sh, -sv};
  d.sigma = {sv, -sh, -sv, sh};
  d.sigma_star_sq = sh * sh + sv * sv;
  d.sigma_inf = std::max(std::abs(sh), std::abs(sv));
  int big = 0;
  for (int a = 0; a < 4; ++a) {
    big = std::max(big, std::abs(d.sigma[a]));
    for (int b = 0; b < 4; ++b) big = std::max(big, std::abs(d.sigma[a] + d.sigma[b]));
  }
  d.N = big;
  d.angle = std::atan2(static_cast<double>(sv), static_cast<double>(sh));
  return d;
}

SublatticePoint to_transverse(const Direction& dir, long i, long j) {
  return {i * dir.sigma_h + j * dir.sigma_v, i * dir.sigma_v - j * dir.sigma_h, i, j};
}

std::optional<std::pair<long, long>> is_member(const Direction& dir, long n, long l) {
  const long s2 = dir.sigma_star_sq;
  const long ni = n * dir.sigma_h + l * dir.sigma_v;
  const long nj = n * dir.sigma_v - l * dir.sigma_h;
  if (ni % s2 != 0 || nj % s2 != 0) return std::nullopt;
  return std::make_pair(ni / s2, nj / s2);
}

std::array<std::pair<int, int>, 4> stencil_offsets(const Direction& dir) {
  std::array<std::pair<int, int>, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = {dir.tau[k], dir.sigma[k]};
  return out;
}

long transverse_residue(const Direction& dir, long n) {
  // (i, j) = n * (x, y) with x*sh + y*sv = 1 is a member with longitudinal index n.
  long x = 0, y = 0;
  bezout(dir.sigma_h, dir.sigma_v, x, y);
  const long l = n * (x * dir.sigma_v - y * dir.sigma_h);
  return floor_mod(l, dir.sigma_star_sq);
}

long longitudinal_residue(const Direction& dir, long l) {
  // (i, j) = l * (x, -y) with x*sv + y*sh = 1 has transverse index l.
  long x = 0, y = 0;
  bezout(dir.sigma_v, dir.sigma_h, x, y);
  const long n = l * (x * dir.sigma_h - y * dir.sigma_v);
  return floor_mod(n, dir.sigma_star_sq);
}

}  // namespace ofront

#pragma once

#include <array>
#include <optional>
#include <utility>

namespace ofront {

// Rational propagation direction (sigma_h, sigma_v) on Z^2.
// Longitudinal n = i*sh + j*sv, transverse l = i*sv - j*sh.
struct Direction {
  int sigma_h = 1;
  int sigma_v = 0;
  std::array<int, 4> tau{};    // longitudinal shifts of the four neighbours
  std::array<int, 4> sigma{};  // transverse shifts of the four neighbours
  int sigma_star_sq = 1;
  int sigma_inf = 1;
  int N = 2;
  double angle = 0.0;
};

struct SublatticePoint {
  long n = 0;
  long l = 0;
  long i = 0;
  long j = 0;
};

Direction make_direction(int sh, int sv);

SublatticePoint to_transverse(const Direction& dir, long i, long j);

// Returns the original coordinates (i, j) when (n, l) lies on the image lattice.
std::optional<std::pair<long, long>> is_member(const Direction& dir, long n, long l);

std::array<std::pair<int, int>, 4> stencil_offsets(const Direction& dir);

// Smallest non-negative residue of l modulo sigma_star_sq among members with this n.
long transverse_residue(const Direction& dir, long n);

// Smallest non-negative residue of n modulo sigma_star_sq among members with this l.
long longitudinal_residue(const Direction& dir, long l);

inline long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace ofront

#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>

namespace rsplit {

// Element of the free Abelian group over the basis (L, T, M, I).
struct Dimension {
  std::array<int, 4> e{0, 0, 0, 0};

  constexpr Dimension() = default;
  constexpr Dimension(int l, int t, int m, int i) : e{l, t, m, i} {}

  constexpr Dimension operator*(const Dimension& o) const {
    return {e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]};
  }
  constexpr Dimension operator/(const Dimension& o) const { return *this * o.inv(); }
  constexpr Dimension inv() const { return {-e[0], -e[1], -e[2], -e[3]}; }
  constexpr Dimension pow(int k) const { return {k * e[0], k * e[1], k * e[2], k * e[3]}; }
  constexpr bool operator==(const Dimension&) const = default;
  constexpr bool is_one() const { return *this == Dimension{}; }

  std::string str() const;
};

namespace dim {
inline constexpr Dimension One{0, 0, 0, 0};
inline constexpr Dimension L{1, 0, 0, 0};
inline constexpr Dimension T{0, 1, 0, 0};
inline constexpr Dimension M{0, 0, 1, 0};
inline constexpr Dimension I{0, 0, 0, 1};
inline constexpr Dimension U{2, -3, 1, -1};  // voltage
inline constexpr Dimension A{2, -1, 1, 0};   // action
inline constexpr Dimension Velocity = L / T;
inline constexpr Dimension Z0 = U / I;  // impedance
}  // namespace dim

constexpr Dimension dim_mul(const Dimension& a, const Dimension& b) { return a * b; }

// True iff the list is homogeneous.
bool pd_check(std::span<const Dimension> terms);

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_same_dim(const Dimension& a, const Dimension& b, const char* what);

}  // namespace rsplit

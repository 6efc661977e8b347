#include "rsplit/exterior.hpp"

#include <fmt/format.h>

namespace rsplit {

std::string LieValue::str() const {
  auto one = [](int u, int d, const char* a, const char* b) {
    std::string s;
    for (int i = 0; i < d; ++i) s += s.empty() ? std::string(b) : fmt::format("⊗{}", b);
    for (int i = 0; i < u; ++i) s += s.empty() ? std::string(a) : fmt::format("⊗{}", a);
    return s;
  };
  std::string g = one(up[0], down[0], "g", "g*");
  std::string u = one(up[1], down[1], "u", "u*");
  if (g.empty() && u.empty()) return "R";
  if (g.empty()) return u;
  if (u.empty()) return g;
  return g + "⊗" + u;
}

std::string Meta::str() const {
  return fmt::format("(n={}, k={}, {}, twist={}{}, [{}])", n, k, lie.str(), twist_x ? "X" : "-",
                     twist_g ? "G" : "-", pd.str());
}

void require_compatible(const Meta& a, const Meta& b, const char* what) {
  if (a.n != b.n || a.k != b.k || !(a.lie == b.lie) || a.twist_x != b.twist_x || a.twist_g != b.twist_g) {
    if (!(a.pd == b.pd)) require_same_dim(a.pd, b.pd, what);
    throw MetaError(fmt::format("{}: incompatible operands {} vs {}", what, a.str(), b.str()));
  }
  require_same_dim(a.pd, b.pd, what);
}

}  // namespace rsplit

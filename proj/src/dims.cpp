#include "rsplit/dims.hpp"

#include <fmt/format.h>

namespace rsplit {

std::string Dimension::str() const {
  static constexpr const char* names[4] = {"L", "T", "M", "I"};
  std::string out;
  for (int k = 0; k < 4; ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += ' ';
    out += names[k];
    if (e[k] != 1) out += fmt::format("^{}", e[k]);
  }
  return out.empty() ? "1" : out;
}

bool pd_check(std::span<const Dimension> terms) {
  if (terms.empty()) throw std::invalid_argument("pd_check: empty term list");
  for (const auto& t : terms)
    if (!(t == terms.front())) return false;
  return true;
}

void require_same_dim(const Dimension& a, const Dimension& b, const char* what) {
  if (!(a == b))
    throw DimensionError(fmt::format("{}: dimension mismatch {} vs {}", what, a.str(), b.str()));
}

}  // namespace rsplit

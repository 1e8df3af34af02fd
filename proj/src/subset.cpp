#include "stonean/subset.hpp"

namespace stonean {

std::string format_subset(Subset s, const std::vector<std::string>& labels) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int i) {
    if (!first) out += ",";
    first = false;
    out += i < static_cast<int>(labels.size()) ? labels[i] : std::to_string(i);
  });
  return out + "}";
}

}  // namespace stonean

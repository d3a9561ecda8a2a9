#include "dipolecav/types.hpp"

namespace dipolecav {

namespace {
int axis_index(char c) {
  switch (c) {
    case 'x': return 0;
    case 'y': return 1;
    case 'z': return 2;
    default: return -1;
  }
}
}  // namespace

Component parse_component(const std::string& name) {
  if (name.size() == 2) {
    const int r = axis_index(name[0]), c = axis_index(name[1]);
    if (r >= 0 && c >= 0) return {r, c};
  }
  throw std::invalid_argument("invalid tensor component '" + name + "'");
}

std::string component_name(Component c) {
  static constexpr char axes[] = "xyz";
  return {axes[c.row], axes[c.col]};
}

}  // namespace dipolecav

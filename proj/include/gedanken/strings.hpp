#pragma once

#include <sstream>
#include <string>

namespace gedanken::detail {

template <class... Parts>
std::string cat(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace gedanken::detail

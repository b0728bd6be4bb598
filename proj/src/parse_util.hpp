#pragma once

#include <stdexcept>
#include <string>

#include "smci/errors.hpp"

namespace smci::detail {

inline int parse_positive_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("invalid " + what + ": '" + text + "'");
  }
}

}  // namespace smci::detail

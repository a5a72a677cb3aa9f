#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tg {

using index_t = std::int64_t;

/// Thrown when a point cannot be matched to a grid node within h/2.
class SnapError : public std::runtime_error {
public:
  explicit SnapError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an iterative numerical procedure fails to reach its target.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace tg

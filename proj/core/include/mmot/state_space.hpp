#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mmot {

/// Finite state space: ell distinct labeled sites, optionally embedded in
/// R^d for the geometric cost generators.
class StateSpace {
 public:
  /// Sites labeled "a1", "a2", ... with no coordinates.
  explicit StateSpace(int size);

  StateSpace(int size, std::vector<std::string> labels,
             std::optional<std::vector<std::vector<double>>> coordinates =
                 std::nullopt);

  int size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_coordinates() const { return coordinates_.has_value(); }
  const std::vector<std::vector<double>>& coordinates() const;

 private:
  int size_;
  std::vector<std::string> labels_;
  std::optional<std::vector<std::vector<double>>> coordinates_;
};

}  // namespace mmot

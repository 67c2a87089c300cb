#include "mmot/state_space.hpp"

#include <cmath>
#include <unordered_set>

#include "mmot/errors.hpp"

namespace mmot {

namespace {
std::vector<std::string> default_labels(int size) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(size));
  for (int i = 1; i <= size; ++i) labels.push_back("a" + std::to_string(i));
  return labels;
}
}  // namespace

StateSpace::StateSpace(int size) : StateSpace(size, default_labels(size)) {}

StateSpace::StateSpace(int size, std::vector<std::string> labels,
                       std::optional<std::vector<std::vector<double>>> coordinates)
    : size_(size), labels_(std::move(labels)), coordinates_(std::move(coordinates)) {
  if (size_ < 1) throw ValidationError("state space must have at least one site");
  if (labels_.size() != static_cast<std::size_t>(size_))
    throw ValidationError("state space needs exactly one label per site");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw ValidationError("state space labels must be distinct: " + l);
  if (coordinates_) {
    if (coordinates_->size() != static_cast<std::size_t>(size_))
      throw ValidationError("state space needs one coordinate per site");
    const std::size_t dim = coordinates_->front().size();
    if (dim == 0) throw ValidationError("state space coordinates must be nonempty");
    for (const auto& p : *coordinates_) {
      if (p.size() != dim)
        throw ValidationError("state space coordinates must share one dimension");
      for (double v : p)
        if (!std::isfinite(v))
          throw ValidationError("state space coordinates must be finite");
    }
  }
}

const std::vector<std::vector<double>>& StateSpace::coordinates() const {
  if (!coordinates_)
    throw ValidationError("state space carries no coordinates");
  return *coordinates_;
}

}  // namespace mmot

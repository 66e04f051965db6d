#pragma once

#include "censorlab/qmath.hpp"

#include <string>
#include <vector>

namespace censorlab {

/// Finite group of unitaries used for G-twirling. Construction verifies that
/// every element is unitary within 1e-10 and that the list is closed under
/// products and inverses up to a global phase.
class TwirlGroup {
 public:
  TwirlGroup(std::vector<Matrix> unitaries, std::string label);

  const std::vector<Matrix>& unitaries() const { return unitaries_; }
  const std::string& label() const { return label_; }
  int dim() const { return static_cast<int>(unitaries_.front().rows()); }
  int order() const { return static_cast<int>(unitaries_.size()); }

 private:
  std::vector<Matrix> unitaries_;
  std::string label_;
};

}  // namespace censorlab

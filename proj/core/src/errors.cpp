#include "bakerlab/errors.hpp"

namespace bakerlab {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace bakerlab

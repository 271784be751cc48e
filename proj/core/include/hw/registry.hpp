#pragma once

// Constants fitted once at small scale and then frozen. They ship with the
// library so every run and every test sees the same numbers.

#include <string>

#include "hw/expsum.hpp"

namespace hw {

struct FrozenConstants {
  int version = 0;
  EnvelopeConstants vdc_envelope;
  double gap_count_c = 0.0;  // count <= c · bound over the box ladder
  std::string json;          // the registry file verbatim
};

const FrozenConstants& frozen_constants();

}  // namespace hw

#pragma once

#include <stdexcept>
#include <string>

namespace burim {

// Sign convention for the time-harmonic ansatz. Plus: exp(+ikz) travels
// toward +z (and the outgoing kernel is exp(+ikr)/4πr). Minus is the
// complex-conjugate world: exp(-ikz) travels toward +z. Instruments differ;
// every field synthesis, propagation and completion step threads this.
enum class WaveConvention { Plus, Minus };

inline double convention_sign(WaveConvention c) {
  return c == WaveConvention::Plus ? 1.0 : -1.0;
}

inline const char* to_string(WaveConvention c) {
  return c == WaveConvention::Plus ? "plus" : "minus";
}

inline WaveConvention convention_from_string(const std::string& s) {
  if (s == "plus") return WaveConvention::Plus;
  if (s == "minus") return WaveConvention::Minus;
  throw std::invalid_argument("unknown wave convention '" + s + "' (expected plus|minus)");
}

}  // namespace burim

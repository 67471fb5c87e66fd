#pragma once
// Fixed-width basics and the error taxonomy shared across the library.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wada {

inline constexpr int MAXN = 4;       // hard cap on chart dimension
inline constexpr int MAXLEVEL = 19;  // 3^19 still fits in int32

constexpr int64_t pow3(int e) {
  int64_t r = 1;
  for (; e > 0; --e) r *= 3;
  return r;
}

constexpr int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (; e > 0; --e) r *= b;
  return r;
}

// A construction could not be carried out: bad input, fixture too small,
// marker capacity exhausted, no admissible gate.  CLI exit code 2.
struct ConstructionError : std::runtime_error {
  std::string kind;
  ConstructionError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

// A finished object failed one of its stated invariants.  CLI exit code 3.
struct VerificationError : std::runtime_error {
  std::string kind;
  VerificationError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

}  // namespace wada

#pragma once

#include <cmath>
#include <limits>

namespace gie {

// Sign-and-log representation of a real value, for products like cos^n(x)
// with n up to ~1e16 where the value itself under/overflows or loses all
// relative precision in the direct form.
struct SignedLog {
  double logmag = -std::numeric_limits<double>::infinity();  // log|value|
  int sign = 0;                                              // -1, 0, +1

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(logmag); }
};

// cos^n(x) in signed-log form. n must be integer-valued (parity decides the
// sign when cos x < 0); n = 0 gives exactly 1 even at cos x = 0.
SignedLog log_cos_pow(double x, double n);

inline SignedLog sl_mul(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0 || b.sign == 0) return SignedLog{};
  return SignedLog{a.logmag + b.logmag, a.sign * b.sign};
}

inline SignedLog sl_from(double v) {
  if (v == 0.0) return SignedLog{};
  return SignedLog{std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

}  // namespace gie

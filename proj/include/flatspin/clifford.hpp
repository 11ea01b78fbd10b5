#pragma once
#include <cstdint>

#include "flatspin/numeric.hpp"
#include "flatspin/signs.hpp"

namespace flatspin {

// Exact arithmetic in the finite subgroup of Pin(n) generated by the basis
// vectors e_1..e_n of the Clifford algebra with e_i^2 = -1. Elements are
// signed ordered products e_S = e_{s1} e_{s2} ... (s1 < s2 < ...), encoded as
// a subset bitmask. The multiplication sign is the cocycle
// e_S * e_T = (-1)^(m(S,T) + |S&T|) e_{S^T}, where m(S,T) counts pairs
// (s,t) in S x T with s > t. This group has order 2^(n+1); its even-subset
// half is the relevant finite subgroup of Spin(n).

struct PinElement {
  std::uint64_t subset = 0;
  int sign = 1;  // +1 or -1
  int dim = 0;
};

inline PinElement pin_identity(int n) { return PinElement{0, 1, n}; }

/// Number of index pairs (s,t), s in S, t in T, with s > t.
inline int pin_reorder_count(std::uint64_t s, std::uint64_t t) {
  int c = 0;
  while (t) {
    int k = __builtin_ctzll(t);
    t &= t - 1;
    c += __builtin_popcountll(s >> (k + 1));
  }
  return c;
}

inline PinElement pin_multiply(const PinElement& a, const PinElement& b) {
  if (a.dim != b.dim)
    fail("pin_multiply: dimension mismatch");
  int flips = pin_reorder_count(a.subset, b.subset) +
              __builtin_popcountll(a.subset & b.subset);
  int sign = a.sign * b.sign * ((flips & 1) ? -1 : 1);
  return PinElement{a.subset ^ b.subset, sign, a.dim};
}

inline PinElement pin_negate(const PinElement& a) {
  return PinElement{a.subset, -a.sign, a.dim};
}

inline PinElement pin_inverse(const PinElement& a) {
  // e_S * e_S = +-1; the inverse is e_S with that sign folded in.
  int flips = pin_reorder_count(a.subset, a.subset) +
              __builtin_popcountll(a.subset);
  int square_sign = (flips & 1) ? -1 : 1;
  return PinElement{a.subset, a.sign * square_sign, a.dim};
}

inline bool pin_equal(const PinElement& a, const PinElement& b) {
  return a.dim == b.dim && a.subset == b.subset && a.sign == b.sign;
}

/// Even subsets lie in Spin(n).
inline bool is_spin(const PinElement& a) {
  return (__builtin_popcountll(a.subset) & 1) == 0;
}

/// Canonical lift of a diagonal matrix: e_S with S its set of -1 entries.
inline PinElement lift_diagonal(const SignVector& b) {
  return PinElement{b.neg_mask(), 1, b.dim()};
}

/// The covering map Spin(n) -> SO(n) on this finite subgroup:
/// +-e_S conjugates e_j to -e_j exactly for j in S.
inline SignVector lambda(const PinElement& a) {
  if (!is_spin(a))
    fail("lambda: odd subset is not in Spin(n)");
  return SignVector(a.dim, a.subset);
}

// Spin^C(n) = (Spin(n) x S^1) / {1,-1}. The circle factor is stored as an
// additive angle in [0,1); the identification [g,z] = [-g,-z] is resolved by
// keeping the Pin sign at +1 and folding -1 into the angle as a half turn.
struct SpinCElement {
  PinElement pin;  // sign always +1 in canonical form
  Rat angle;       // in [0,1)
};

inline SpinCElement spinc_make(const PinElement& g, const Rat& angle) {
  SpinCElement e{g, mod1(angle)};
  if (e.pin.sign < 0) {
    e.pin.sign = 1;
    e.angle = mod1(e.angle + Rat(1, 2));
  }
  return e;
}

inline SpinCElement spinc_identity(int n) {
  return SpinCElement{pin_identity(n), Rat(0)};
}

inline SpinCElement spinc_multiply(const SpinCElement& a,
                                   const SpinCElement& b) {
  return spinc_make(pin_multiply(a.pin, b.pin), a.angle + b.angle);
}

inline SpinCElement spinc_inverse(const SpinCElement& a) {
  return spinc_make(pin_inverse(a.pin), -a.angle);
}

inline bool spinc_equal(const SpinCElement& a, const SpinCElement& b) {
  return pin_equal(a.pin, b.pin) && a.angle == b.angle;
}

inline SignVector spinc_lambda_bar(const SpinCElement& a) {
  return lambda(a.pin);
}

/// l[g,z] = z^2, i.e. twice the angle mod 1 (well defined on classes).
inline Rat spinc_l(const SpinCElement& a) { return mod1(a.angle * 2); }

}  // namespace flatspin

#pragma once
#include <cstdint>
#include <vector>

#include "flatspin/intmat.hpp"

namespace flatspin {

constexpr int kMaxDim = 62;

/// Diagonal +-1 matrix stored as the bitmask of its -1 entries.
class SignVector {
 public:
  SignVector() = default;
  SignVector(int n, std::uint64_t neg_mask) : n_(n), neg_(neg_mask) {
    if (n < 0 || n > kMaxDim)
      fail("SignVector: dimension out of range");
    if (n < 64 && (neg_mask >> n) != 0)
      fail("SignVector: mask exceeds dimension");
  }
  static SignVector identity(int n) { return SignVector(n, 0); }
  static SignVector from_signs(const std::vector<int>& signs) {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < signs.size(); ++k) {
      if (signs[k] == -1)
        mask |= std::uint64_t(1) << k;
      else if (signs[k] != 1)
        fail("SignVector: entries must be +1 or -1");
    }
    return SignVector(int(signs.size()), mask);
  }

  int dim() const { return n_; }
  std::uint64_t neg_mask() const { return neg_; }
  /// Sign of coordinate k (0-based).
  int sign(int k) const { return (neg_ >> k) & 1 ? -1 : 1; }
  bool is_identity() const { return neg_ == 0; }
  int det() const { return __builtin_popcountll(neg_) & 1 ? -1 : 1; }

  SignVector operator*(const SignVector& o) const {
    if (n_ != o.n_)
      fail("SignVector: dimension mismatch");
    return SignVector(n_, neg_ ^ o.neg_);
  }
  bool operator==(const SignVector& o) const {
    return n_ == o.n_ && neg_ == o.neg_;
  }

  RatVector apply(const RatVector& v) const {
    if (int(v.size()) != n_)
      fail("SignVector: vector dimension mismatch");
    RatVector out(v);
    for (int k = 0; k < n_; ++k)
      if ((neg_ >> k) & 1)
        out[k] = -out[k];
    return out;
  }

  std::vector<int> to_ints() const {
    std::vector<int> s(n_);
    for (int k = 0; k < n_; ++k)
      s[k] = sign(k);
    return s;
  }

 private:
  int n_ = 0;
  std::uint64_t neg_ = 0;
};

}  // namespace flatspin

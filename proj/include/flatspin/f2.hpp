#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "flatspin/numeric.hpp"

namespace flatspin {

/// Bit vector over F2 backed by 64-bit words.
class F2Vec {
 public:
  F2Vec() = default;
  explicit F2Vec(std::size_t size)
      : size_(size), w_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t mask = std::uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= mask;
    else
      w_[i >> 6] &= ~mask;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  /// XOR; `o` may be shorter (treated as zero-padded).
  F2Vec& operator^=(const F2Vec& o) {
    std::size_t n = w_.size() < o.w_.size() ? w_.size() : o.w_.size();
    for (std::size_t i = 0; i < n; ++i)
      w_[i] ^= o.w_[i];
    return *this;
  }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }

  /// Index of first set bit at position >= from, or npos.
  static constexpr std::size_t npos = std::size_t(-1);
  std::size_t first_set(std::size_t from = 0) const {
    if (from >= size_) return npos;
    std::size_t wi = from >> 6;
    std::uint64_t w = w_[wi] & (~std::uint64_t(0) << (from & 63));
    while (true) {
      if (w)
        return (wi << 6) + std::size_t(__builtin_ctzll(w));
      if (++wi >= w_.size()) return npos;
      w = w_[wi];
    }
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_)
      c += std::size_t(__builtin_popcountll(w));
    return c;
  }

  bool operator==(const F2Vec& o) const {
    return size_ == o.size_ && w_ == o.w_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> w_;
};

/// Streaming Gaussian elimination over F2 with row-combination tracking.
///
/// Rows are added one at a time; only rows that enter the echelon basis (or
/// witness the first contradiction) are tracked, so arbitrarily many
/// redundant rows can be streamed through in bounded memory.
class F2Eliminator {
 public:
  explicit F2Eliminator(std::size_t vars) : vars_(vars) {}

  std::size_t vars() const { return vars_; }

  /// Reduce `row` (with right-hand side `rhs`) against the basis and insert
  /// it if independent. `tag` identifies the row for certificates.
  void add(F2Vec row, bool rhs, std::size_t tag);

  bool consistent() const { return !contradiction_; }

  /// Tags of rows whose F2-sum is a contradiction (u*A = 0, u*b = 1).
  /// Valid only when !consistent(); gives the first contradiction found.
  std::vector<std::size_t> certificate() const;

  /// One solution with all free variables 0. Valid only when consistent().
  F2Vec solution() const;

  /// Basis of the homogeneous kernel (one vector per free variable).
  std::vector<F2Vec> kernel_basis() const;

  std::size_t rank() const { return rows_.size(); }

 private:
  static constexpr std::size_t npos_ = std::size_t(-1);
  struct Row {
    F2Vec v;       // length vars_
    bool rhs;
    F2Vec combo;   // over tracked slots
    std::size_t pivot;
  };
  void grow_combos(std::size_t n);

  std::size_t vars_;
  std::vector<Row> rows_;                  // sorted by pivot
  std::vector<std::size_t> pivot_slot_;    // lazily sized; index by pivot col
  std::vector<std::size_t> tags_;          // tracked slot -> caller tag
  std::optional<F2Vec> contradiction_;     // combo over tracked slots
};

struct F2Solve {
  bool consistent = false;
  F2Vec solution;                       // one solution (free vars 0)
  std::vector<F2Vec> kernel;            // basis of homogeneous solutions
  std::vector<std::size_t> certificate; // row indices, when inconsistent
};

/// Solve A*x = b over F2. Rows of `a` must all have size vars; b matches rows.
F2Solve f2_solve(std::size_t vars, const std::vector<F2Vec>& a,
                 const std::vector<bool>& b);

}  // namespace flatspin

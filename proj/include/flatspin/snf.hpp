#pragma once
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "flatspin/intmat.hpp"

namespace flatspin {

/// U*A*V = D with U, V unimodular and D diagonal, d1 | d2 | ... (all di >= 0).
struct SnfDecomposition {
  IntMatrix u, d, v;
};

/// Deterministic Smith normal form: pivots are the smallest nonzero entry in
/// absolute value, ties broken by lowest row then column index.
SnfDecomposition smith_normal_form(const IntMatrix& a);

/// Basis over Z of { u : u*A = 0 }, read off the zero rows of D via U.
std::vector<IntVector> left_kernel_basis(const IntMatrix& a);

/// Fraction-free determinant (Bareiss). Square input.
Int determinant(const IntMatrix& a);

struct TorusSolve {
  bool solvable = false;
  /// Angles in [0,1), one per column; free parameters are 0.
  RatVector solution;
  /// Sparse integer row combination u with u*A = 0 and dot(u,b) not integral;
  /// pairs (row index, coefficient). Valid when !solvable.
  std::vector<std::pair<std::size_t, Int>> certificate;
};

/// Solve A*x = b in the circle group R/Z (angles as rationals mod 1).
/// Solvable iff every integer left-kernel vector pairs integrally with b.
TorusSolve torus_solve(const IntMatrix& a, const RatVector& b);

/// Streaming row-space compressor for tall exact linear systems over R/Z.
///
/// Maintains an integer row-echelon basis of the augmented rows [row | s*rhs]
/// under unimodular row operations, tracking for each basis row a sparse
/// combination of the original rows. Reduces millions of redundant equations
/// to at most cols+1 survivors that torus_solve can handle directly.
class TorusEliminator {
 public:
  /// `scale` must clear every rhs denominator (scale*rhs integral).
  TorusEliminator(std::size_t cols, Int scale);

  void add(const IntVector& row, const Rat& rhs, std::size_t tag);

  std::size_t cols() const { return cols_; }

  /// Equivalent compressed system.
  IntMatrix matrix() const;
  RatVector rhs() const;
  /// Expand a certificate over compressed rows to original tags.
  std::vector<std::pair<std::size_t, Int>> expand(
      const std::vector<std::pair<std::size_t, Int>>& compressed) const;

 private:
  // Rows are sparse (sorted nonzero columns); the augmented entry sits in
  // column cols_. Entries stay small here, but the ops must stay linear in
  // the nonzero count for the quadratically many pairwise-oracle rows.
  using SparseRow = std::vector<std::pair<std::size_t, Int>>;
  struct Row {
    SparseRow v;
    std::map<std::size_t, Int> combo;
    std::size_t pivot;
  };
  std::size_t cols_;
  Int scale_;
  std::vector<Row> rows_;                // sorted by insertion
  std::vector<std::size_t> pivot_slot_;  // per column (incl. augmented)
};

}  // namespace flatspin

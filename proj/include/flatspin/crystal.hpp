#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatspin/intmat.hpp"
#include "flatspin/signs.hpp"

namespace flatspin {

/// Isometry (D, c): x -> D x + c with D a diagonal +-1 matrix.
struct AffineElement {
  SignVector rot;
  RatVector tr;
};

inline AffineElement affine_identity(int n) {
  return AffineElement{SignVector::identity(n), RatVector(n, Rat(0))};
}

/// (A,a)(B,b) = (AB, a + A b)
inline AffineElement compose(const AffineElement& a, const AffineElement& b) {
  AffineElement c{a.rot * b.rot, a.rot.apply(b.tr)};
  for (std::size_t k = 0; k < c.tr.size(); ++k)
    c.tr[k] += a.tr[k];
  return c;
}

/// (A,a)^-1 = (A, -A a)
inline AffineElement inverse(const AffineElement& a) {
  RatVector t = a.rot.apply(a.tr);
  for (auto& v : t)
    v = -v;
  return AffineElement{a.rot, std::move(t)};
}

inline bool affine_equal(const AffineElement& a, const AffineElement& b) {
  return a.rot == b.rot && a.tr == b.tr;
}

inline bool is_integral(const RatVector& v) {
  for (const auto& q : v)
    if (!is_integer(q))
      return false;
  return true;
}

/// Validation failure with the offending element attached when known.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
  validation_error(const std::string& msg, AffineElement witness)
      : std::runtime_error(msg), witness_(std::move(witness)) {}
  const std::optional<AffineElement>& witness() const { return witness_; }

 private:
  std::optional<AffineElement> witness_;
};

/// Refusal of a computation whose cost is exponential in the input.
class resource_guard_error : public std::runtime_error {
 public:
  explicit resource_guard_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Polycyclic relation data over the independent generator basis:
/// squares bhat_i^2 = t^(t_sq[i]), commutators [bhat_i, bhat_j] =
/// t^(t_comm[i][j]) for i < j, and the conjugation action bhat_i t_k
/// bhat_i^-1 = t_k^(action[i].sign(k)). Together with lattice commutativity
/// these present the group.
struct Presentation {
  std::vector<int> indep;          // 0-based indices into the generator list
  std::vector<IntVector> t_sq;     // one per independent generator
  std::vector<std::vector<IntVector>> t_comm;  // [i][j] valid for i < j
  std::vector<SignVector> action;
};

/// Bieberbach group with diagonal holonomy over the lattice Z^n.
///
/// build() selects a maximal independent generator subset by greedy
/// lowest-index-first F2 elimination of the holonomy images, checks dependent
/// generators against their normal-form representatives, and validates that
/// all presentation relation vectors are integral.
class BieberbachGroup {
 public:
  static BieberbachGroup build(int n, std::vector<AffineElement> generators);

  int dimension() const { return n_; }
  const std::vector<AffineElement>& generators() const { return gens_; }
  int holonomy_rank() const { return int(pres_.indep.size()); }
  std::uint64_t holonomy_order() const {
    return std::uint64_t(1) << holonomy_rank();
  }
  const Presentation& presentation() const { return pres_; }
  const AffineElement& independent_generator(int i) const {
    return gens_[std::size_t(pres_.indep[i])];
  }
  bool orientable() const;
  /// Bitmask of coordinates negated by some holonomy element.
  std::uint64_t negated_coordinates() const;

  /// Exponent mask over the independent basis for a holonomy element;
  /// throws if the sign matrix is not in the holonomy group.
  std::uint64_t decompose(const SignVector& h) const;
  /// Holonomy element for an exponent mask (product of images).
  SignVector holonomy_element(std::uint64_t expo) const;
  /// Coset representative: product of independent generators in increasing
  /// index order, as dictated by the exponent mask.
  AffineElement representative(std::uint64_t expo) const;
  /// All coset representatives indexed by exponent mask (2^m entries).
  std::vector<AffineElement> representative_table() const;

 private:
  BieberbachGroup() = default;
  int n_ = 0;
  std::vector<AffineElement> gens_;
  Presentation pres_;
  // F2 echelon of independent images: (image mask, combination mask, pivot)
  struct EchelonRow {
    std::uint64_t image;
    std::uint64_t combo;
    int pivot;
  };
  std::vector<EchelonRow> echelon_;
};

struct TorsionResult {
  bool torsion_free = false;
  std::optional<AffineElement> witness;  // a finite-order element when found
};

/// A holonomy class contains a finite-order element iff its representative's
/// translation is integral on the coordinates fixed by the class rotation.
TorsionResult is_torsion_free(const BieberbachGroup& g);

/// Hantzsche-Wendt: odd dimension, orientable, torsion free, holonomy of
/// order 2^(n-1) (all determinant +1 diagonal sign matrices).
bool is_hw(const BieberbachGroup& g);

/// For groups given by the full cyclic generator pattern (n generators):
/// checks (b_i b_{i+2})^2 = t_{i+1} t_{i+3}^{-1} for all i, indices mod n,
/// by direct affine multiplication.
bool derived_relation_check(const BieberbachGroup& g);

/// p-th Betti number: number of p-subsets T with a +1 sign product under
/// every independent holonomy generator.
std::uint64_t betti(const BieberbachGroup& g, int p);

struct H1Result {
  std::vector<Int> torsion;  // elementary divisors > 1, in divisibility order
  int free_rank = 0;
};

/// H1 as the cokernel of the abelianized presentation
/// (rows: squares, then commutators, then lattice torsion).
H1Result h1_elementary_divisors(const BieberbachGroup& g);

/// The n diagonal-entry characters Gamma -> {+-1}, evaluated on every
/// generator; each is verified to be a homomorphism on all presentation
/// relations. These classify the line bundles splitting the tangent bundle.
std::vector<std::vector<int>> holonomy_characters(const BieberbachGroup& g);

}  // namespace flatspin

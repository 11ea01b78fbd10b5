#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "flatspin/crystal.hpp"

namespace flatspin {

/// Generator data in the standard Hantzsche-Wendt shape: rotations are fixed
/// to B_i = diag(-1,...,-1, +1 at i, -1,...,-1) and only the n-1 translation
/// rows vary, entries in {0, 1/2}.
struct HwSpec {
  int n = 0;
  std::vector<RatVector> b_rows;  // n-1 rows of length n
};

/// B_i (0-based i): +1 exactly at coordinate i.
SignVector hw_rotation(int n, int i);

/// The cyclic group: b_i = (e_i + e_{i+1})/2 for i < n-1, plus the dependent
/// n-th generator (B_n, (1/2, 0, ..., 0, -1/2)).
BieberbachGroup cyclic_hw(int n);

/// The first five-dimensional HW group (CARAT label "1-th 219.1.1" kept as a
/// string only), with its four printed generators over Z^5.
BieberbachGroup hw_5_1();

/// Build and fully validate; throws validation_error carrying a finite-order
/// witness element if the spec has torsion.
BieberbachGroup hw_from_spec(const HwSpec& spec);

/// Row masks <-> HwSpec (bit k of row i set means b_rows[i][k] = 1/2).
HwSpec hw_spec_from_masks(int n, const std::vector<std::uint64_t>& rows);
std::vector<std::uint64_t> hw_spec_to_masks(const HwSpec& spec);

enum class EnumerateMode { kExhaustive, kSample };

struct EnumerateStats {
  std::uint64_t candidates = 0;     // specs examined
  std::uint64_t torsion_free = 0;   // groups visited
};

/// Streams the torsion-free HW groups for the given dimension.
///
/// Exhaustive mode walks all 2^((n-1)n) translation matrices in lexicographic
/// order (row 0 coordinate 0 is the lowest bit) and is only permitted for
/// n = 3 and n = 5. Sample mode draws specs from a seeded generator until
/// `count` distinct torsion-free groups have been visited; exact duplicate
/// specs are skipped. Deduplication is by normalized generator data only;
/// affine equivalence classes are not detected, so the stream over-counts
/// manifolds.
EnumerateStats enumerate_hw(
    int n, EnumerateMode mode, std::uint64_t count, std::uint64_t seed,
    const std::function<void(const HwSpec&, const BieberbachGroup&)>& visit);

}  // namespace flatspin

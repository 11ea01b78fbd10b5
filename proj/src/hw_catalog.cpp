#include "flatspin/hw_catalog.hpp"

#include <random>
#include <set>

namespace flatspin {

SignVector hw_rotation(int n, int i) {
  std::uint64_t all = (std::uint64_t(1) << n) - 1;
  return SignVector(n, all & ~(std::uint64_t(1) << i));
}

BieberbachGroup cyclic_hw(int n) {
  if (n < 3 || n % 2 == 0)
    fail("cyclic_hw: dimension must be odd and >= 3");
  std::vector<AffineElement> gens;
  for (int i = 0; i + 1 < n; ++i) {
    RatVector b(std::size_t(n), Rat(0));
    b[std::size_t(i)] = Rat(1, 2);
    b[std::size_t(i + 1)] = Rat(1, 2);
    gens.push_back(AffineElement{hw_rotation(n, i), std::move(b)});
  }
  RatVector last(std::size_t(n), Rat(0));
  last[0] = Rat(1, 2);
  last[std::size_t(n - 1)] = Rat(-1, 2);
  gens.push_back(AffineElement{hw_rotation(n, n - 1), std::move(last)});
  return BieberbachGroup::build(n, std::move(gens));
}

BieberbachGroup hw_5_1() {
  auto gen = [](std::vector<int> signs, std::vector<int> halves) {
    RatVector tr(5, Rat(0));
    for (std::size_t k = 0; k < 5; ++k)
      if (halves[k])
        tr[k] = Rat(1, 2);
    return AffineElement{SignVector::from_signs(signs), std::move(tr)};
  };
  std::vector<AffineElement> gens = {
      gen({1, 1, 1, -1, -1}, {0, 0, 1, 1, 0}),
      gen({1, 1, -1, -1, 1}, {0, 1, 0, 0, 0}),
      gen({-1, 1, 1, -1, 1}, {0, 0, 0, 0, 1}),
      gen({1, -1, -1, 1, 1}, {1, 0, 0, 0, 0}),
  };
  return BieberbachGroup::build(5, std::move(gens));
}

BieberbachGroup hw_from_spec(const HwSpec& spec) {
  const int n = spec.n;
  if (n < 3 || n % 2 == 0)
    fail("hw_from_spec: dimension must be odd and >= 3");
  if (int(spec.b_rows.size()) != n - 1)
    fail("hw_from_spec: expected n-1 translation rows");
  std::vector<AffineElement> gens;
  for (int i = 0; i + 1 < n; ++i) {
    const RatVector& b = spec.b_rows[std::size_t(i)];
    if (int(b.size()) != n)
      fail("hw_from_spec: translation row has wrong length");
    for (const auto& q : b)
      if (q != 0 && q != Rat(1, 2))
        fail("hw_from_spec: entries must be 0 or 1/2");
    gens.push_back(AffineElement{hw_rotation(n, i), b});
  }
  BieberbachGroup g = BieberbachGroup::build(n, std::move(gens));
  TorsionResult torsion = is_torsion_free(g);
  if (!torsion.torsion_free)
    throw validation_error("hw_from_spec: group has torsion",
                           *torsion.witness);
  return g;
}

HwSpec hw_spec_from_masks(int n, const std::vector<std::uint64_t>& rows) {
  HwSpec spec;
  spec.n = n;
  for (std::uint64_t mask : rows) {
    RatVector b(std::size_t(n), Rat(0));
    for (int k = 0; k < n; ++k)
      if ((mask >> k) & 1)
        b[std::size_t(k)] = Rat(1, 2);
    spec.b_rows.push_back(std::move(b));
  }
  return spec;
}

std::vector<std::uint64_t> hw_spec_to_masks(const HwSpec& spec) {
  std::vector<std::uint64_t> rows;
  for (const auto& b : spec.b_rows) {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b[k] != 0)
        mask |= std::uint64_t(1) << k;
    rows.push_back(mask);
  }
  return rows;
}

namespace {

// Torsion filter on the raw masks; equivalent to is_torsion_free but avoids
// building rationals for the million-candidate exhaustive scan. All
// translations live in (1/2)Z, so a class representative's translation mod 1
// is itself a bitmask of half entries.
bool masks_torsion_free(int n, const std::vector<std::uint64_t>& rows) {
  const int m = n - 1;
  const std::uint64_t all = (std::uint64_t(1) << n) - 1;
  // reps[expo]: (negated-coordinate mask, half-entry mask of translation)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> reps(
      std::size_t(1) << m);
  reps[0] = {0, 0};
  for (std::uint64_t expo = 1; expo < reps.size(); ++expo) {
    int msb = 63 - __builtin_clzll(expo);
    auto [dmask, hmask] = reps[expo ^ (std::uint64_t(1) << msb)];
    std::uint64_t gen_neg = all & ~(std::uint64_t(1) << msb);
    // (D, c)(B, b): rotation D*B, translation c + D b; mod 1 the sign flip
    // is invisible, so the half-mask just xors.
    std::uint64_t neg = dmask ^ gen_neg;
    std::uint64_t half = hmask ^ rows[std::size_t(msb)];
    reps[expo] = {neg, half};
    // Finite order iff the translation is integral on the fixed coordinates.
    if ((half & ~neg & all) == 0)
      return false;
  }
  return true;
}

}  // namespace

EnumerateStats enumerate_hw(
    int n, EnumerateMode mode, std::uint64_t count, std::uint64_t seed,
    const std::function<void(const HwSpec&, const BieberbachGroup&)>& visit) {
  if (n < 3 || n % 2 == 0)
    fail("enumerate_hw: dimension must be odd and >= 3");
  EnumerateStats stats;
  const int m = n - 1;

  if (mode == EnumerateMode::kExhaustive) {
    if (n > 5)
      throw resource_guard_error(
          "enumerate_hw: exhaustive mode is limited to n <= 5 (" +
          std::to_string(std::uint64_t(m) * n) +
          "-bit candidate space); use sampling");
    const std::uint64_t total = std::uint64_t(1) << (m * n);
    const std::uint64_t row_mask = (std::uint64_t(1) << n) - 1;
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(m));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      ++stats.candidates;
      for (int i = 0; i < m; ++i)
        rows[std::size_t(i)] = (idx >> (i * n)) & row_mask;
      if (!masks_torsion_free(n, rows))
        continue;
      ++stats.torsion_free;
      HwSpec spec = hw_spec_from_masks(n, rows);
      visit(spec, hw_from_spec(spec));
    }
    return stats;
  }

  std::mt19937_64 rng(seed);
  const std::uint64_t row_mask = (std::uint64_t(1) << n) - 1;
  std::set<std::vector<std::uint64_t>> seen;
  while (stats.torsion_free < count) {
    ++stats.candidates;
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      rows[std::size_t(i)] = rng() & row_mask;
    if (!seen.insert(rows).second)
      continue;  // exact duplicate spec
    if (!masks_torsion_free(n, rows))
      continue;
    ++stats.torsion_free;
    HwSpec spec = hw_spec_from_masks(n, rows);
    visit(spec, hw_from_spec(spec));
  }
  return stats;
}

}  // namespace flatspin

#include <doctest.h>

#include <optional>
#include <random>

#include "flatspin/crystal.hpp"
#include "flatspin/hw_catalog.hpp"

using namespace flatspin;

namespace {

RatVector halves(const std::vector<int>& numerators) {
  RatVector v;
  for (int x : numerators)
    v.push_back(Rat(x, 2));
  return v;
}

AffineElement random_affine(std::mt19937_64& rng, int n) {
  std::uint64_t mask = rng() & ((std::uint64_t(1) << n) - 1);
  RatVector tr(static_cast<std::size_t>(n));
  for (auto& q : tr)
    q = Rat(int(rng() % 9) - 4, 1 + int(rng() % 3));
  return AffineElement{SignVector(n, mask), std::move(tr)};
}

// Brute-force torsion detector: some class representative composed with a
// small lattice offset has order 2. Offsets in {-1,0,1}^n suffice because
// the order-2 condition is per-coordinate.
bool brute_force_has_torsion(const BieberbachGroup& g) {
  const int n = g.dimension();
  std::vector<AffineElement> reps = g.representative_table();
  std::vector<int> offset(std::size_t(n), -1);
  for (std::uint64_t expo = 1; expo < reps.size(); ++expo) {
    std::fill(offset.begin(), offset.end(), -1);
    while (true) {
      AffineElement el = reps[expo];
      for (int k = 0; k < n; ++k)
        el.tr[std::size_t(k)] += offset[std::size_t(k)];
      AffineElement sq = compose(el, el);
      bool identity = sq.rot.is_identity();
      for (int k = 0; k < n && identity; ++k)
        identity = sq.tr[std::size_t(k)] == 0;
      if (identity)
        return true;
      int k = 0;
      while (k < n && offset[std::size_t(k)] == 1)
        offset[std::size_t(k++)] = -1;
      if (k == n)
        break;
      ++offset[std::size_t(k)];
    }
  }
  return false;
}

}  // namespace

TEST_CASE("affine group law") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + int(rng() % 6);
    AffineElement a = random_affine(rng, n), b = random_affine(rng, n),
                  c = random_affine(rng, n);
    CHECK(affine_equal(compose(compose(a, b), c), compose(a, compose(b, c))));
    CHECK(affine_equal(compose(a, inverse(a)), affine_identity(n)));
    CHECK(affine_equal(compose(inverse(a), a), affine_identity(n)));
    CHECK(affine_equal(compose(affine_identity(n), a), a));
  }
}

TEST_CASE("cyclic n=5 affine facts") {
  BieberbachGroup g = cyclic_hw(5);
  const auto& gens = g.generators();
  REQUIRE(gens.size() == 5);

  // beta_1 beta_3 beta_1^-1 beta_3^-1 = (I, (1,1,-1,-1,0))
  AffineElement comm = compose(compose(gens[0], gens[2]),
                               compose(inverse(gens[0]), inverse(gens[2])));
  CHECK(comm.rot.is_identity());
  CHECK(comm.tr == halves({2, 2, -2, -2, 0}));

  // inverse(beta_1) = (B_1, (-1/2, 1/2, 0, 0, 0))
  AffineElement inv = inverse(gens[0]);
  CHECK(inv.rot == gens[0].rot);
  CHECK(inv.tr == halves({-1, 1, 0, 0, 0}));
}

TEST_CASE("build selects the independent basis lowest-index-first") {
  BieberbachGroup g = cyclic_hw(5);
  CHECK(g.holonomy_rank() == 4);
  CHECK(g.presentation().indep == std::vector<int>{0, 1, 2, 3});
  CHECK(g.holonomy_order() == 16);

  BieberbachGroup torus = BieberbachGroup::build(4, {});
  CHECK(torus.holonomy_rank() == 0);
  CHECK(torus.orientable());

  BieberbachGroup g1 = hw_5_1();
  CHECK(g1.holonomy_rank() == 4);
  CHECK(g1.presentation().indep == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("dependent generator consistency is enforced") {
  // The five cyclic generators with the last translation corrupted by a
  // non-lattice shift is not a subgroup data set.
  BieberbachGroup good = cyclic_hw(5);
  std::vector<AffineElement> gens = good.generators();
  gens[4].tr[2] += Rat(1, 3);
  CHECK_THROWS_AS(BieberbachGroup::build(5, gens), validation_error);
  // A lattice shift keeps it consistent.
  gens = good.generators();
  gens[4].tr[2] += 7;
  CHECK_NOTHROW(BieberbachGroup::build(5, gens));
}

TEST_CASE("presentation relation vectors") {
  BieberbachGroup g = cyclic_hw(5);
  const Presentation& p = g.presentation();
  CHECK(p.t_sq[0] == IntVector{1, 0, 0, 0, 0});
  CHECK(p.t_comm[0][2] == IntVector{1, 1, -1, -1, 0});

  BieberbachGroup g1 = hw_5_1();
  CHECK(g1.presentation().t_comm[1][2] == IntVector{0, 0, 0, 0, 0});
}

TEST_CASE("presentation matches the closed forms") {
  std::mt19937_64 rng(31415);
  int built = 0;
  while (built < 40) {
    int n = 2 + int(rng() % 4);
    std::vector<AffineElement> gens;
    int count = 1 + int(rng() % 3);
    for (int i = 0; i < count; ++i) {
      std::uint64_t mask = rng() & ((std::uint64_t(1) << n) - 1);
      RatVector tr(static_cast<std::size_t>(n));
      for (auto& q : tr)
        q = Rat(int(rng() % 4) - 2, 2);
      gens.push_back(AffineElement{SignVector(n, mask), std::move(tr)});
    }
    std::optional<BieberbachGroup> g;
    try {
      g = BieberbachGroup::build(n, gens);
    } catch (const validation_error&) {
      continue;
    }
    ++built;
    const Presentation& p = g->presentation();
    const int m = g->holonomy_rank();
    for (int i = 0; i < m; ++i) {
      const AffineElement& bi = g->independent_generator(i);
      // (I + B_i) b_i
      for (int k = 0; k < n; ++k) {
        Rat closed = bi.tr[std::size_t(k)] * (1 + bi.rot.sign(k));
        CHECK(Rat(p.t_sq[std::size_t(i)][std::size_t(k)]) == closed);
      }
      for (int j = i + 1; j < m; ++j) {
        const AffineElement& bj = g->independent_generator(j);
        // (I - B_j) b_i - (I - B_i) b_j
        for (int k = 0; k < n; ++k) {
          Rat closed = bi.tr[std::size_t(k)] * (1 - bj.rot.sign(k)) -
                       bj.tr[std::size_t(k)] * (1 - bi.rot.sign(k));
          CHECK(Rat(p.t_comm[std::size_t(i)][std::size_t(j)][std::size_t(k)]) ==
                closed);
        }
      }
    }
  }
}

TEST_CASE("torsion detection") {
  CHECK(is_torsion_free(cyclic_hw(5)).torsion_free);
  CHECK(is_torsion_free(cyclic_hw(7)).torsion_free);
  CHECK(is_torsion_free(hw_5_1()).torsion_free);
  CHECK(is_torsion_free(BieberbachGroup::build(3, {})).torsion_free);

  // Eq.(2) rotations with zero translations: (B_1, 0) has order 2.
  std::vector<AffineElement> gens;
  for (int i = 0; i < 4; ++i)
    gens.push_back(AffineElement{hw_rotation(5, i), RatVector(5, Rat(0))});
  TorsionResult t = is_torsion_free(BieberbachGroup::build(5, gens));
  REQUIRE(!t.torsion_free);
  REQUIRE(t.witness.has_value());
  CHECK(t.witness->rot == hw_rotation(5, 0));
  CHECK(is_integral(t.witness->tr));
}

TEST_CASE("torsion agrees with brute force") {
  std::mt19937_64 rng(2718);
  int built = 0;
  while (built < 80) {
    int n = 2 + int(rng() % 4);
    std::vector<AffineElement> gens;
    int count = 1 + int(rng() % 3);
    for (int i = 0; i < count; ++i) {
      std::uint64_t mask = rng() & ((std::uint64_t(1) << n) - 1);
      RatVector tr(static_cast<std::size_t>(n));
      for (auto& q : tr)
        q = Rat(int(rng() % 2), 2);
      gens.push_back(AffineElement{SignVector(n, mask), std::move(tr)});
    }
    std::optional<BieberbachGroup> g;
    try {
      g = BieberbachGroup::build(n, gens);
    } catch (const validation_error&) {
      continue;
    }
    ++built;
    CHECK(is_torsion_free(*g).torsion_free == !brute_force_has_torsion(*g));
  }
}

TEST_CASE("normal form round trip") {
  for (const BieberbachGroup& g : {cyclic_hw(5), hw_5_1(), cyclic_hw(7)}) {
    for (std::uint64_t expo = 0; expo < g.holonomy_order(); ++expo) {
      CHECK(g.decompose(g.holonomy_element(expo)) == expo);
      CHECK(g.representative(expo).rot == g.holonomy_element(expo));
    }
    // det -1 matrices are outside the orientable holonomy group
    CHECK_THROWS(g.decompose(SignVector(g.dimension(), 1)));
  }
}

TEST_CASE("is_hw") {
  CHECK(is_hw(cyclic_hw(3)));
  CHECK(is_hw(cyclic_hw(5)));
  CHECK(is_hw(cyclic_hw(7)));
  CHECK(is_hw(hw_5_1()));
  CHECK(!is_hw(BieberbachGroup::build(4, {})));
  CHECK(!is_hw(BieberbachGroup::build(5, {})));
}

TEST_CASE("derived relation check") {
  CHECK(derived_relation_check(cyclic_hw(5)));
  CHECK(derived_relation_check(cyclic_hw(7)));
  CHECK(derived_relation_check(cyclic_hw(9)));
  // The index pattern of the relation needs n >= 5; the 3-dimensional
  // construction genuinely fails it (computed, not assumed).
  CHECK(!derived_relation_check(cyclic_hw(3)));
}

TEST_CASE("betti numbers") {
  for (int n : {2, 3, 5}) {
    BieberbachGroup torus = BieberbachGroup::build(n, {});
    std::uint64_t binom = 1;
    for (int p = 0; p <= n; ++p) {
      CHECK(betti(torus, p) == binom);
      binom = binom * std::uint64_t(n - p) / std::uint64_t(p + 1);
    }
  }
  BieberbachGroup g = cyclic_hw(5);
  CHECK(betti(g, 0) == 1);
  CHECK(betti(g, 5) == 1);
  for (int p = 1; p < 5; ++p)
    CHECK(betti(g, p) == 0);
  CHECK(betti(hw_5_1(), 2) == 0);
}

TEST_CASE("h1 elementary divisors") {
  H1Result h5 = h1_elementary_divisors(cyclic_hw(5));
  CHECK(h5.torsion == std::vector<Int>{2, 2, 2, 2});
  CHECK(h5.free_rank == 0);

  H1Result torus = h1_elementary_divisors(BieberbachGroup::build(4, {}));
  CHECK(torus.torsion.empty());
  CHECK(torus.free_rank == 4);

  // Classical 3-dimensional value, computed from the presentation.
  H1Result h3 = h1_elementary_divisors(cyclic_hw(3));
  CHECK(h3.torsion == std::vector<Int>{4, 4});
  CHECK(h3.free_rank == 0);
}

TEST_CASE("holonomy characters") {
  BieberbachGroup g = cyclic_hw(5);
  auto chars = holonomy_characters(g);
  REQUIRE(chars.size() == 5);
  CHECK(chars[0][0] == 1);   // first diagonal entry of B_1
  CHECK(chars[0][1] == -1);  // first diagonal entry of B_2
  for (const auto& chi : chars)
    CHECK(chi.size() == 5);

  auto torus_chars = holonomy_characters(BieberbachGroup::build(3, {}));
  CHECK(torus_chars.size() == 3);
}

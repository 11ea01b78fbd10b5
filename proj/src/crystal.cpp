#include "flatspin/crystal.hpp"

#include <algorithm>

#include "flatspin/snf.hpp"

namespace flatspin {

namespace {

IntVector to_int_vector(const RatVector& v, const char* what) {
  IntVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!is_integer(v[k]))
      fail(std::string(what) + ": non-integral lattice vector");
    out[k] = numerator(v[k]);
  }
  return out;
}

}  // namespace

BieberbachGroup BieberbachGroup::build(int n,
                                       std::vector<AffineElement> generators) {
  if (n < 1 || n > kMaxDim)
    fail("build_group: dimension out of range");
  BieberbachGroup g;
  g.n_ = n;
  g.gens_ = std::move(generators);

  for (const auto& gen : g.gens_) {
    if (gen.rot.dim() != n || int(gen.tr.size()) != n)
      throw validation_error("build_group: generator dimension mismatch");
  }

  // Greedy lowest-index-first F2 elimination of holonomy images.
  for (std::size_t gi = 0; gi < g.gens_.size(); ++gi) {
    std::uint64_t image = g.gens_[gi].rot.neg_mask();
    std::uint64_t combo = 0;
    for (const auto& row : g.echelon_)
      if ((image >> row.pivot) & 1) {
        image ^= row.image;
        combo ^= row.combo;
      }
    if (image != 0) {
      int pivot = __builtin_ctzll(image);
      std::uint64_t slot = std::uint64_t(1) << g.pres_.indep.size();
      g.echelon_.push_back(EchelonRow{image, combo | slot, pivot});
      // Keep echelon sorted by pivot for single-pass reduction.
      std::sort(g.echelon_.begin(), g.echelon_.end(),
                [](const EchelonRow& a, const EchelonRow& b) {
                  return a.pivot < b.pivot;
                });
      g.pres_.indep.push_back(int(gi));
    } else {
      // Dependent generator: must differ from its representative by a
      // lattice translation.
      AffineElement rep = g.representative(combo);
      AffineElement diff = compose(inverse(rep), g.gens_[gi]);
      if (!diff.rot.is_identity() || !is_integral(diff.tr))
        throw validation_error(
            "build_group: dependent generator is inconsistent with its "
            "normal form",
            g.gens_[gi]);
    }
  }

  // Presentation relations; integrality is the lattice-preservation check.
  const int m = int(g.pres_.indep.size());
  g.pres_.t_sq.resize(m);
  g.pres_.t_comm.assign(m, std::vector<IntVector>(m));
  g.pres_.action.reserve(m);
  for (int i = 0; i < m; ++i) {
    const AffineElement& bi = g.independent_generator(i);
    g.pres_.action.push_back(bi.rot);
    AffineElement sq = compose(bi, bi);
    if (!is_integral(sq.tr))
      throw validation_error("build_group: non-integral square relation", bi);
    g.pres_.t_sq[i] = to_int_vector(sq.tr, "t_sq");
    for (int j = i + 1; j < m; ++j) {
      const AffineElement& bj = g.independent_generator(j);
      AffineElement comm =
          compose(compose(bi, bj), compose(inverse(bi), inverse(bj)));
      if (!comm.rot.is_identity())
        fail("build_group: commutator with non-trivial rotation");
      if (!is_integral(comm.tr))
        throw validation_error("build_group: non-integral commutator relation",
                               comm);
      g.pres_.t_comm[i][j] = to_int_vector(comm.tr, "t_comm");
    }
  }
  return g;
}

bool BieberbachGroup::orientable() const {
  for (int i = 0; i < holonomy_rank(); ++i)
    if (pres_.action[std::size_t(i)].det() != 1)
      return false;
  return true;
}

std::uint64_t BieberbachGroup::negated_coordinates() const {
  std::uint64_t mask = 0;
  for (const auto& a : pres_.action)
    mask |= a.neg_mask();
  return mask;
}

std::uint64_t BieberbachGroup::decompose(const SignVector& h) const {
  if (h.dim() != n_)
    fail("decompose: dimension mismatch");
  std::uint64_t image = h.neg_mask();
  std::uint64_t combo = 0;
  for (const auto& row : echelon_)
    if ((image >> row.pivot) & 1) {
      image ^= row.image;
      combo ^= row.combo;
    }
  if (image != 0)
    fail("decompose: sign matrix not in the holonomy group");
  return combo;
}

SignVector BieberbachGroup::holonomy_element(std::uint64_t expo) const {
  std::uint64_t mask = 0;
  for (int i = 0; i < holonomy_rank(); ++i)
    if ((expo >> i) & 1)
      mask ^= independent_generator(i).rot.neg_mask();
  return SignVector(n_, mask);
}

AffineElement BieberbachGroup::representative(std::uint64_t expo) const {
  AffineElement rep = affine_identity(n_);
  for (int i = 0; i < holonomy_rank(); ++i)
    if ((expo >> i) & 1)
      rep = compose(rep, independent_generator(i));
  return rep;
}

std::vector<AffineElement> BieberbachGroup::representative_table() const {
  const int m = holonomy_rank();
  std::vector<AffineElement> table;
  table.reserve(std::size_t(1) << m);
  table.push_back(affine_identity(n_));
  for (std::uint64_t expo = 1; expo < (std::uint64_t(1) << m); ++expo) {
    int msb = 63 - __builtin_clzll(expo);
    table.push_back(compose(table[expo ^ (std::uint64_t(1) << msb)],
                            independent_generator(msb)));
  }
  return table;
}

TorsionResult is_torsion_free(const BieberbachGroup& g) {
  std::vector<AffineElement> reps = g.representative_table();
  for (std::uint64_t expo = 1; expo < reps.size(); ++expo) {
    const AffineElement& rep = reps[expo];
    bool integral_on_fixed = true;
    for (int k = 0; k < g.dimension() && integral_on_fixed; ++k)
      if (rep.rot.sign(k) == 1 && !is_integer(rep.tr[k]))
        integral_on_fixed = false;
    if (integral_on_fixed) {
      // Shift by a lattice vector to produce an element of order 2.
      AffineElement witness = rep;
      for (int k = 0; k < g.dimension(); ++k)
        if (rep.rot.sign(k) == 1)
          witness.tr[k] = 0;
      return TorsionResult{false, witness};
    }
  }
  return TorsionResult{true, std::nullopt};
}

bool is_hw(const BieberbachGroup& g) {
  const int n = g.dimension();
  if (n % 2 == 0 || !g.orientable())
    return false;
  if (g.holonomy_rank() != n - 1)
    return false;
  return is_torsion_free(g).torsion_free;
}

bool derived_relation_check(const BieberbachGroup& g) {
  const int n = g.dimension();
  if (int(g.generators().size()) != n)
    fail("derived_relation_check: expected the full cyclic generator list");
  for (int i = 0; i < n; ++i) {
    AffineElement prod = compose(g.generators()[std::size_t(i)],
                                 g.generators()[std::size_t((i + 2) % n)]);
    AffineElement sq = compose(prod, prod);
    if (!sq.rot.is_identity())
      return false;
    RatVector expected(std::size_t(n), Rat(0));
    expected[std::size_t((i + 1) % n)] = 1;
    expected[std::size_t((i + 3) % n)] = -1;
    if (sq.tr != expected)
      return false;
  }
  return true;
}

std::uint64_t betti(const BieberbachGroup& g, int p) {
  const int n = g.dimension();
  if (p < 0 || p > n)
    fail("betti: degree out of range");
  std::vector<std::uint64_t> masks;
  for (const auto& a : g.presentation().action)
    masks.push_back(a.neg_mask());
  if (p == 0)
    return 1;
  // Gosper's hack over p-subsets of n coordinates.
  std::uint64_t count = 0;
  std::uint64_t t = (std::uint64_t(1) << p) - 1;
  const std::uint64_t limit = n == 64 ? ~std::uint64_t(0)
                                      : (std::uint64_t(1) << n);
  while (t < limit) {
    bool invariant = true;
    for (std::uint64_t m : masks)
      if (__builtin_popcountll(t & m) & 1) {
        invariant = false;
        break;
      }
    if (invariant)
      ++count;
    std::uint64_t c = t & (~t + 1);
    std::uint64_t r = t + c;
    if (r >= limit)
      break;
    t = (((r ^ t) >> 2) / c) | r;
  }
  return count;
}

H1Result h1_elementary_divisors(const BieberbachGroup& g) {
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  const Presentation& p = g.presentation();
  std::uint64_t negated = g.negated_coordinates();

  std::size_t torsion_rows = std::size_t(__builtin_popcountll(negated));
  std::size_t rows = std::size_t(m) + std::size_t(m) * (m - 1) / 2 +
                     torsion_rows;
  IntMatrix rel(rows, std::size_t(m + n));
  std::size_t r = 0;
  for (int i = 0; i < m; ++i, ++r) {
    rel(r, std::size_t(i)) = 2;
    for (int k = 0; k < n; ++k)
      rel(r, std::size_t(m + k)) = -p.t_sq[std::size_t(i)][std::size_t(k)];
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j, ++r)
      for (int k = 0; k < n; ++k)
        rel(r, std::size_t(m + k)) =
            p.t_comm[std::size_t(i)][std::size_t(j)][std::size_t(k)];
  for (int k = 0; k < n; ++k)
    if ((negated >> k) & 1) {
      rel(r, std::size_t(m + k)) = 2;
      ++r;
    }

  SnfDecomposition s = smith_normal_form(rel);
  H1Result out;
  std::size_t diag = std::min(rel.rows(), rel.cols());
  std::size_t rank = 0;
  for (std::size_t i = 0; i < diag; ++i)
    if (s.d(i, i) != 0) {
      ++rank;
      if (s.d(i, i) > 1)
        out.torsion.push_back(s.d(i, i));
    }
  out.free_rank = int(rel.cols() - rank);
  return out;
}

std::vector<std::vector<int>> holonomy_characters(const BieberbachGroup& g) {
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  std::vector<std::vector<int>> chars(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    auto& chi = chars[std::size_t(k)];
    chi.reserve(g.generators().size());
    for (const auto& gen : g.generators())
      chi.push_back(gen.rot.sign(k));
    // Homomorphism check on every presentation relation. Characters are +1
    // on the lattice, so each relation demands a +1 product of signs.
    for (int i = 0; i < m; ++i) {
      int si = g.independent_generator(i).rot.sign(k);
      if (si * si != 1)
        fail("holonomy_characters: square relation violated");
      for (int j = i + 1; j < m; ++j) {
        int sj = g.independent_generator(j).rot.sign(k);
        if (si * sj * si * sj != 1)
          fail("holonomy_characters: commutator relation violated");
      }
    }
  }
  return chars;
}

}  // namespace flatspin

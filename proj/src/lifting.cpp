#include "flatspin/lifting.hpp"

#include <algorithm>
#include <map>

#include "flatspin/f2.hpp"
#include "flatspin/snf.hpp"

namespace flatspin {

std::string to_string(StructureKind k) {
  return k == StructureKind::kSpin ? "spin" : "spinc";
}

std::string to_string(LiftAnswer a) {
  switch (a) {
    case LiftAnswer::kYes: return "YES";
    case LiftAnswer::kNo: return "NO";
    case LiftAnswer::kInconclusive: return "NO_LIFT_INCONCLUSIVE";
  }
  fail("unreachable");
}

RelationName RelationName::square(int i) {
  RelationName r;
  r.kind = Kind::kSquare;
  r.i = i;
  return r;
}
RelationName RelationName::commutator(int i, int j) {
  RelationName r;
  r.kind = Kind::kCommutator;
  r.i = i;
  r.j = j;
  return r;
}
RelationName RelationName::torsion(int k) {
  RelationName r;
  r.kind = Kind::kTorsion;
  r.k = k;
  return r;
}
RelationName RelationName::pair(std::uint64_t f, std::uint64_t g) {
  RelationName r;
  r.kind = Kind::kPair;
  r.f = f;
  r.g = g;
  return r;
}

std::string RelationName::str() const {
  switch (kind) {
    case Kind::kSquare: return "sq(" + std::to_string(i) + ")";
    case Kind::kCommutator:
      return "comm(" + std::to_string(i) + "," + std::to_string(j) + ")";
    case Kind::kTorsion: return "tor(" + std::to_string(k) + ")";
    case Kind::kPair:
      return "pair(" + std::to_string(f) + "," + std::to_string(g) + ")";
  }
  fail("unreachable");
}

RelationName RelationName::parse(const std::string& s) {
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    fail("malformed relation name: '" + s + "'");
  std::string head = s.substr(0, open);
  std::string args = s.substr(open + 1, close - open - 1);
  auto comma = args.find(',');
  auto num = [](const std::string& t) { return std::stoll(t); };
  if (head == "sq")
    return square(int(num(args)));
  if (head == "tor")
    return torsion(int(num(args)));
  if (comma == std::string::npos)
    fail("malformed relation name: '" + s + "'");
  std::string a = args.substr(0, comma), b = args.substr(comma + 1);
  if (head == "comm")
    return commutator(int(num(a)), int(num(b)));
  if (head == "pair")
    return pair(std::uint64_t(num(a)), std::uint64_t(num(b)));
  fail("unknown relation kind: '" + s + "'");
}

namespace {

const Rat kHalf(1, 2);

Rat sign_angle(int sign) { return sign < 0 ? kHalf : Rat(0); }

int square_sign(const PinElement& c) { return pin_multiply(c, c).sign; }

int commutator_sign(const PinElement& a, const PinElement& b) {
  PinElement lhs = pin_multiply(a, b);
  PinElement rhs = pin_multiply(b, a);
  // a b = s * b a with s = +-1; subsets agree, signs compare directly.
  return lhs.sign * rhs.sign;
}

void require_orientable(const BieberbachGroup& g) {
  if (!g.orientable())
    fail("lifting: group is not orientable");
}

}  // namespace

LiftingSystem build_spin_system(const BieberbachGroup& g) {
  require_orientable(g);
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  const Presentation& p = g.presentation();

  LiftingSystem sys;
  sys.kind = StructureKind::kSpin;
  sys.gen_vars = 0;
  sys.lattice_vars = n;
  sys.two_torsion.assign(std::size_t(n), true);  // chi_k are signs

  std::size_t rows = std::size_t(m) + std::size_t(m) * (m - 1) / 2;
  sys.a = IntMatrix(rows, std::size_t(n));
  sys.rhs.resize(rows);
  std::size_t r = 0;
  for (int i = 0; i < m; ++i, ++r) {
    PinElement ci = lift_diagonal(p.action[std::size_t(i)]);
    for (int k = 0; k < n; ++k)
      sys.a(r, std::size_t(k)) = p.t_sq[std::size_t(i)][std::size_t(k)];
    sys.rhs[r] = sign_angle(square_sign(ci));
    sys.names.push_back(RelationName::square(p.indep[std::size_t(i)] + 1));
  }
  for (int i = 0; i < m; ++i) {
    PinElement ci = lift_diagonal(p.action[std::size_t(i)]);
    for (int j = i + 1; j < m; ++j, ++r) {
      PinElement cj = lift_diagonal(p.action[std::size_t(j)]);
      for (int k = 0; k < n; ++k)
        sys.a(r, std::size_t(k)) =
            p.t_comm[std::size_t(i)][std::size_t(j)][std::size_t(k)];
      sys.rhs[r] = sign_angle(commutator_sign(ci, cj));
      sys.names.push_back(RelationName::commutator(
          p.indep[std::size_t(i)] + 1, p.indep[std::size_t(j)] + 1));
    }
  }
  return sys;
}

LiftingSystem build_spinc_system(const BieberbachGroup& g) {
  require_orientable(g);
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  const Presentation& p = g.presentation();
  const std::uint64_t negated = g.negated_coordinates();

  LiftingSystem sys;
  sys.kind = StructureKind::kSpinC;
  sys.gen_vars = m;
  sys.lattice_vars = n;
  sys.two_torsion.assign(std::size_t(n), false);
  for (int k = 0; k < n; ++k)
    sys.two_torsion[std::size_t(k)] = (negated >> k) & 1;

  std::size_t torsion_rows = std::size_t(__builtin_popcountll(negated));
  std::size_t rows =
      torsion_rows + std::size_t(m) + std::size_t(m) * (m - 1) / 2;
  sys.a = IntMatrix(rows, std::size_t(m + n));
  sys.rhs.resize(rows);
  std::size_t r = 0;
  for (int k = 0; k < n; ++k)
    if ((negated >> k) & 1) {
      sys.a(r, std::size_t(m + k)) = 2;
      sys.names.push_back(RelationName::torsion(k + 1));
      ++r;
    }
  for (int i = 0; i < m; ++i, ++r) {
    PinElement ci = lift_diagonal(p.action[std::size_t(i)]);
    sys.a(r, std::size_t(i)) = 2;
    for (int k = 0; k < n; ++k)
      sys.a(r, std::size_t(m + k)) = -p.t_sq[std::size_t(i)][std::size_t(k)];
    sys.rhs[r] = sign_angle(square_sign(ci));
    sys.names.push_back(RelationName::square(p.indep[std::size_t(i)] + 1));
  }
  for (int i = 0; i < m; ++i) {
    PinElement ci = lift_diagonal(p.action[std::size_t(i)]);
    for (int j = i + 1; j < m; ++j, ++r) {
      PinElement cj = lift_diagonal(p.action[std::size_t(j)]);
      for (int k = 0; k < n; ++k)
        sys.a(r, std::size_t(m + k)) =
            -p.t_comm[std::size_t(i)][std::size_t(j)][std::size_t(k)];
      sys.rhs[r] = sign_angle(commutator_sign(ci, cj));
      sys.names.push_back(RelationName::commutator(
          p.indep[std::size_t(i)] + 1, p.indep[std::size_t(j)] + 1));
    }
  }
  return sys;
}

StructureVerdict decide_spin(const BieberbachGroup& g) {
  LiftingSystem sys = build_spin_system(g);
  const int n = g.dimension();
  const int m = g.holonomy_rank();

  std::vector<F2Vec> rows;
  std::vector<bool> rhs;
  for (std::size_t r = 0; r < sys.a.rows(); ++r) {
    F2Vec row(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      if (sys.a(r, std::size_t(k)) % 2 != 0)
        row.set(std::size_t(k), true);
    rows.push_back(std::move(row));
    rhs.push_back(sys.rhs[r] == kHalf);
  }
  F2Solve sol = f2_solve(static_cast<std::size_t>(n), rows, rhs);

  StructureVerdict v;
  v.kind = StructureKind::kSpin;
  v.method = DecisionMethod::kGenerator;
  if (sol.consistent) {
    v.answer = LiftAnswer::kYes;
    v.sigma.assign(std::size_t(m), 1);
    v.chi.resize(std::size_t(n));
    for (int k = 0; k < n; ++k)
      v.chi[std::size_t(k)] = sol.solution.get(std::size_t(k)) ? -1 : 1;
  } else {
    v.answer = LiftAnswer::kNo;
    for (std::size_t idx : sol.certificate)
      v.obstruction.push_back(ObstructionTerm{sys.names[idx], Int(1)});
    v.parity = kHalf;
  }
  return v;
}

StructureVerdict decide_spinc(const BieberbachGroup& g) {
  LiftingSystem sys = build_spinc_system(g);
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  TorusSolve sol = torus_solve(sys.a, sys.rhs);

  StructureVerdict v;
  v.kind = StructureKind::kSpinC;
  v.method = DecisionMethod::kGenerator;
  if (sol.solvable) {
    v.answer = LiftAnswer::kYes;
    v.z.assign(sol.solution.begin(), sol.solution.begin() + m);
    v.zeta.assign(sol.solution.begin() + m, sol.solution.begin() + m + n);
  } else {
    v.answer = betti(g, 2) == 0 ? LiftAnswer::kNo : LiftAnswer::kInconclusive;
    Rat parity;
    for (const auto& [row, coeff] : sol.certificate) {
      v.obstruction.push_back(ObstructionTerm{sys.names[row], coeff});
      parity += Rat(coeff) * sys.rhs[row];
    }
    v.parity = mod1(parity);
  }
  return v;
}

namespace {

SpinCElement spinc_lattice_value(const RatVector& zeta, const IntVector& w,
                                 int n) {
  Rat angle;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] != 0)
      angle += Rat(w[k]) * zeta[k];
  return spinc_make(pin_identity(n), angle);
}

int spin_lattice_sign(const std::vector<int>& chi, const IntVector& w) {
  int s = 1;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] % 2 != 0 && chi[k] == -1)
      s = -s;
  return s;
}

}  // namespace

bool verify_witness(const BieberbachGroup& g, const StructureVerdict& v) {
  if (v.answer != LiftAnswer::kYes)
    fail("verify_witness: verdict carries no witness");
  const int n = g.dimension();
  const int m = g.holonomy_rank();
  const Presentation& p = g.presentation();

  if (v.kind == StructureKind::kSpinC) {
    if (int(v.z.size()) != m || int(v.zeta.size()) != n)
      fail("verify_witness: malformed spinc witness");
    std::vector<SpinCElement> eps;
    for (int i = 0; i < m; ++i)
      eps.push_back(
          spinc_make(lift_diagonal(p.action[std::size_t(i)]), v.z[std::size_t(i)]));
    // Covering condition: lambda_bar of every generator image equals its
    // holonomy; lattice values are circle elements.
    for (int i = 0; i < m; ++i)
      if (!(spinc_lambda_bar(eps[std::size_t(i)]) == p.action[std::size_t(i)]))
        return false;
    for (int i = 0; i < m; ++i) {
      SpinCElement lhs = spinc_multiply(eps[std::size_t(i)], eps[std::size_t(i)]);
      SpinCElement rhs = spinc_lattice_value(v.zeta, p.t_sq[std::size_t(i)], n);
      if (!spinc_equal(lhs, rhs))
        return false;
      for (int j = i + 1; j < m; ++j) {
        SpinCElement c = spinc_multiply(
            spinc_multiply(eps[std::size_t(i)], eps[std::size_t(j)]),
            spinc_multiply(spinc_inverse(eps[std::size_t(i)]),
                           spinc_inverse(eps[std::size_t(j)])));
        SpinCElement rc = spinc_lattice_value(
            v.zeta, p.t_comm[std::size_t(i)][std::size_t(j)], n);
        if (!spinc_equal(c, rc))
          return false;
      }
      // Conjugation: eps_i [1,zeta_k] eps_i^-1 = [1, +-zeta_k].
      for (int k = 0; k < n; ++k)
        if (p.action[std::size_t(i)].sign(k) == -1 &&
            mod1(2 * v.zeta[std::size_t(k)]) != 0)
          return false;
    }
    return true;
  }

  if (int(v.sigma.size()) != m || int(v.chi.size()) != n)
    fail("verify_witness: malformed spin witness");
  for (int x : v.sigma)
    if (x != 1 && x != -1)
      fail("verify_witness: malformed spin witness");
  for (int x : v.chi)
    if (x != 1 && x != -1)
      fail("verify_witness: malformed spin witness");
  std::vector<PinElement> eps;
  for (int i = 0; i < m; ++i) {
    PinElement c = lift_diagonal(p.action[std::size_t(i)]);
    c.sign *= v.sigma[std::size_t(i)];
    if (!is_spin(c))
      return false;  // lift must land in Spin(n)
    eps.push_back(c);
  }
  for (int i = 0; i < m; ++i)
    if (!(lambda(eps[std::size_t(i)]) == p.action[std::size_t(i)]))
      return false;
  for (int i = 0; i < m; ++i) {
    PinElement sq = pin_multiply(eps[std::size_t(i)], eps[std::size_t(i)]);
    int rhs = spin_lattice_sign(v.chi, p.t_sq[std::size_t(i)]);
    if (!pin_equal(sq, PinElement{0, rhs, n}))
      return false;
    for (int j = i + 1; j < m; ++j) {
      PinElement c = pin_multiply(
          pin_multiply(eps[std::size_t(i)], eps[std::size_t(j)]),
          pin_multiply(pin_inverse(eps[std::size_t(i)]),
                       pin_inverse(eps[std::size_t(j)])));
      int rhs2 = spin_lattice_sign(
          v.chi, p.t_comm[std::size_t(i)][std::size_t(j)]);
      if (!pin_equal(c, PinElement{0, rhs2, n}))
        return false;
    }
  }
  return true;
}

namespace {

// Pairwise-system context shared by the oracle and certificate replay.
struct PairwiseContext {
  int n = 0;
  int m = 0;
  std::size_t vars = 0;  // (2^m - 1) generator slots + n lattice slots
  std::vector<AffineElement> reps;
  std::vector<PinElement> pins;

  explicit PairwiseContext(const BieberbachGroup& g)
      : n(g.dimension()), m(g.holonomy_rank()) {
    reps = g.representative_table();
    pins.reserve(reps.size());
    for (std::uint64_t f = 0; f < reps.size(); ++f)
      pins.push_back(lift_diagonal(g.holonomy_element(f)));
    vars = (reps.size() - 1) + std::size_t(n);
  }

  std::size_t gen_slot(std::uint64_t f) const { return std::size_t(f - 1); }
  std::size_t lattice_slot(int k) const {
    return reps.size() - 1 + std::size_t(k);
  }

  /// Row for gamma_f gamma_g = t(f,g) gamma_{fg}:
  /// z_f + z_g - z_{fg} - sum t(f,g)_k zeta_k = angle(sign cocycle).
  void pair_row(std::uint64_t f, std::uint64_t g, IntVector& row,
                Rat& rhs) const {
    row.assign(vars, Int(0));
    std::uint64_t fg = f ^ g;
    row[gen_slot(f)] += 1;
    row[gen_slot(g)] += 1;
    if (fg != 0)
      row[gen_slot(fg)] -= 1;
    AffineElement prod = compose(reps[f], reps[g]);
    for (int k = 0; k < n; ++k) {
      Rat t = prod.tr[std::size_t(k)] - reps[fg].tr[std::size_t(k)];
      if (!is_integer(t))
        fail("pairwise system: non-integral cocycle");
      if (numerator(t) != 0)
        row[lattice_slot(k)] -= numerator(t);
    }
    rhs = sign_angle(pin_multiply(pins[f], pins[g]).sign);
  }

  void torsion_row(int k, IntVector& row, Rat& rhs) const {
    row.assign(vars, Int(0));
    row[lattice_slot(k)] = 2;
    rhs = 0;
  }

  // Tags encode the source relation so certificates can be decoded without
  // materializing the full equation list.
  std::size_t pair_tag(std::uint64_t f, std::uint64_t g) const {
    return std::size_t((f << (m + 1)) | g);
  }
  std::size_t torsion_tag(int k) const {
    return (std::size_t(1) << (2 * m + 2)) + std::size_t(k);
  }
  RelationName decode_tag(std::size_t tag) const {
    if (tag >= (std::size_t(1) << (2 * m + 2)))
      return RelationName::torsion(int(tag - (std::size_t(1) << (2 * m + 2))) + 1);
    std::uint64_t f = tag >> (m + 1);
    std::uint64_t g = tag & ((std::uint64_t(1) << (m + 1)) - 1);
    return RelationName::pair(f, g);
  }
};

}  // namespace

StructureVerdict cocycle_oracle_decide(const BieberbachGroup& g,
                                       StructureKind kind) {
  require_orientable(g);
  if (g.holonomy_order() > (std::uint64_t(1) << 12))
    throw resource_guard_error(
        "cocycle oracle: holonomy group too large (guard at 2^12)");
  PairwiseContext ctx(g);
  const std::uint64_t order = std::uint64_t(ctx.reps.size());
  const int n = ctx.n;
  const int m = ctx.m;

  StructureVerdict v;
  v.kind = kind;
  v.method = DecisionMethod::kPairwise;

  if (kind == StructureKind::kSpin) {
    F2Eliminator elim(ctx.vars);
    IntVector row;
    Rat rhs;
    for (std::uint64_t f = 1; f < order; ++f)
      for (std::uint64_t gmask = 1; gmask < order; ++gmask) {
        ctx.pair_row(f, gmask, row, rhs);
        F2Vec frow(ctx.vars);
        for (std::size_t c = 0; c < ctx.vars; ++c)
          if (row[c] % 2 != 0)
            frow.set(c, true);
        elim.add(std::move(frow), rhs == kHalf, ctx.pair_tag(f, gmask));
      }
    if (elim.consistent()) {
      v.answer = LiftAnswer::kYes;
      F2Vec sol = elim.solution();
      v.sigma.resize(std::size_t(m));
      for (int i = 0; i < m; ++i)
        v.sigma[std::size_t(i)] =
            sol.get(ctx.gen_slot(std::uint64_t(1) << i)) ? -1 : 1;
      v.chi.resize(std::size_t(n));
      for (int k = 0; k < n; ++k)
        v.chi[std::size_t(k)] = sol.get(ctx.lattice_slot(k)) ? -1 : 1;
    } else {
      v.answer = LiftAnswer::kNo;
      for (std::size_t tag : elim.certificate())
        v.obstruction.push_back(ObstructionTerm{ctx.decode_tag(tag), Int(1)});
      v.parity = kHalf;
    }
    return v;
  }

  TorusEliminator elim(ctx.vars, Int(2));
  IntVector row;
  Rat rhs;
  const std::uint64_t negated = g.negated_coordinates();
  for (int k = 0; k < n; ++k)
    if ((negated >> k) & 1) {
      ctx.torsion_row(k, row, rhs);
      elim.add(row, rhs, ctx.torsion_tag(k));
    }
  for (std::uint64_t f = 1; f < order; ++f)
    for (std::uint64_t gmask = 1; gmask < order; ++gmask) {
      ctx.pair_row(f, gmask, row, rhs);
      elim.add(row, rhs, ctx.pair_tag(f, gmask));
    }
  TorusSolve sol = torus_solve(elim.matrix(), elim.rhs());
  if (sol.solvable) {
    v.answer = LiftAnswer::kYes;
    v.z.resize(std::size_t(m));
    for (int i = 0; i < m; ++i)
      v.z[std::size_t(i)] = sol.solution[ctx.gen_slot(std::uint64_t(1) << i)];
    v.zeta.resize(std::size_t(n));
    for (int k = 0; k < n; ++k)
      v.zeta[std::size_t(k)] = sol.solution[ctx.lattice_slot(k)];
  } else {
    v.answer = betti(g, 2) == 0 ? LiftAnswer::kNo : LiftAnswer::kInconclusive;
    Rat parity;
    RatVector all_rhs = elim.rhs();
    for (const auto& [slot, coeff] : sol.certificate)
      parity += Rat(coeff) * all_rhs[slot];
    v.parity = mod1(parity);
    for (const auto& [tag, coeff] : elim.expand(sol.certificate))
      v.obstruction.push_back(ObstructionTerm{ctx.decode_tag(tag), coeff});
  }
  return v;
}

bool verify_obstruction(const BieberbachGroup& g, const StructureVerdict& v) {
  if (v.obstruction.empty())
    fail("verify_obstruction: verdict carries no certificate");
  if (v.parity != kHalf)
    return false;

  IntVector acc;
  Rat parity;
  if (v.method == DecisionMethod::kGenerator) {
    LiftingSystem sys = v.kind == StructureKind::kSpin ? build_spin_system(g)
                                                       : build_spinc_system(g);
    acc.assign(sys.a.cols(), Int(0));
    for (const auto& term : v.obstruction) {
      auto it = std::find(sys.names.begin(), sys.names.end(), term.relation);
      if (it == sys.names.end())
        return false;  // names an equation the system does not contain
      std::size_t r = std::size_t(it - sys.names.begin());
      for (std::size_t c = 0; c < sys.a.cols(); ++c)
        acc[c] += term.coefficient * sys.a(r, c);
      parity += Rat(term.coefficient) * sys.rhs[r];
    }
  } else {
    PairwiseContext ctx(g);
    acc.assign(ctx.vars, Int(0));
    IntVector row;
    Rat rhs;
    for (const auto& term : v.obstruction) {
      if (term.relation.kind == RelationName::Kind::kPair)
        ctx.pair_row(term.relation.f, term.relation.g, row, rhs);
      else if (term.relation.kind == RelationName::Kind::kTorsion)
        ctx.torsion_row(term.relation.k - 1, row, rhs);
      else
        return false;
      for (std::size_t c = 0; c < ctx.vars; ++c)
        acc[c] += term.coefficient * row[c];
      parity += Rat(term.coefficient) * rhs;
    }
  }

  const bool mod2 = v.kind == StructureKind::kSpin;
  for (const auto& c : acc)
    if (mod2 ? (c % 2 != 0) : (c != 0))
      return false;
  return mod1(parity) == kHalf;
}

}  // namespace flatspin

#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "flatspin/clifford.hpp"
#include "flatspin/crystal.hpp"
#include "flatspin/intmat.hpp"

namespace flatspin {

enum class StructureKind { kSpin, kSpinC };
enum class LiftAnswer { kYes, kNo, kInconclusive };
enum class DecisionMethod { kGenerator, kPairwise };

std::string to_string(StructureKind k);
std::string to_string(LiftAnswer a);

/// Names tie every equation back to a presentation relation (or, for the
/// pairwise oracle, to a product of coset representatives).
struct RelationName {
  enum class Kind { kSquare, kCommutator, kTorsion, kPair };
  Kind kind = Kind::kSquare;
  int i = 0;  // 1-based generator index (kSquare/kCommutator)
  int j = 0;  // second generator index (kCommutator)
  int k = 0;  // 1-based lattice coordinate (kTorsion)
  std::uint64_t f = 0, g = 0;  // exponent masks (kPair)

  static RelationName square(int i);
  static RelationName commutator(int i, int j);
  static RelationName torsion(int k);
  static RelationName pair(std::uint64_t f, std::uint64_t g);

  std::string str() const;              // e.g. "sq(2)", "comm(2,3)", "tor(4)"
  static RelationName parse(const std::string& s);
  bool operator==(const RelationName&) const = default;
};

/// Exact linear system over the circle group whose solvability is the
/// lifting criterion. Variables: one circle variable per independent
/// generator (z_i, spinc only), then one per lattice basis vector (zeta_k,
/// or the sign chi_k for spin). Every right-hand side is 0 or 1/2.
struct LiftingSystem {
  StructureKind kind = StructureKind::kSpinC;
  int gen_vars = 0;
  int lattice_vars = 0;
  std::vector<bool> two_torsion;   // per lattice variable
  IntMatrix a;
  RatVector rhs;
  std::vector<RelationName> names;  // one per equation row
};

/// F2 system for the Spin criterion. Generator sign unknowns cancel
/// identically (every relation contains each generator an even number of
/// times: squares obviously, commutators with exponent sum 0), so only the
/// lattice signs chi_k remain. Rows keep the raw integer exponent vectors;
/// the solver reduces them mod 2.
LiftingSystem build_spin_system(const BieberbachGroup& g);

/// Circle system for the Spin^C criterion: torsion rows 2*zeta_k = 0 for
/// every coordinate negated by the holonomy, then square rows
/// 2 z_i - sum_k t_sq[i]_k zeta_k = angle(c_i^2), then commutator rows
/// -sum_k t_comm[i][j]_k zeta_k = angle of the lift commutator sign.
LiftingSystem build_spinc_system(const BieberbachGroup& g);

struct ObstructionTerm {
  RelationName relation;
  Int coefficient;
};

struct StructureVerdict {
  StructureKind kind = StructureKind::kSpin;
  DecisionMethod method = DecisionMethod::kGenerator;
  LiftAnswer answer = LiftAnswer::kNo;
  // Spin witness: signs for the independent generators and lattice basis.
  std::vector<int> sigma, chi;
  // Spin^C witness: angles in [0,1).
  RatVector z, zeta;
  // Obstruction certificate: an integer combination of named relations whose
  // exponent vectors cancel while the right-hand sides pair to 1/2 mod 1.
  std::vector<ObstructionTerm> obstruction;
  Rat parity;  // 1/2 when an obstruction is present
};

/// Spin decision (two-valued; no cohomology hypothesis involved).
StructureVerdict decide_spin(const BieberbachGroup& g);

/// Spin^C decision. YES is always conclusive; NO is only claimed when
/// b_2 = 0 (the hypothesis under which the criterion is complete), otherwise
/// the verdict is NO_LIFT_INCONCLUSIVE.
StructureVerdict decide_spinc(const BieberbachGroup& g);

/// Re-derives the lift from the witness and evaluates every presentation
/// relation in Pin(n) / Spin^C(n); also checks that the lift covers the
/// holonomy homomorphism. Throws on a malformed witness.
bool verify_witness(const BieberbachGroup& g, const StructureVerdict& v);

/// Replays an obstruction certificate: the named rows are rebuilt, the
/// integer combination must cancel exactly (mod 2 for spin) and pair to a
/// half turn with the right-hand sides.
bool verify_obstruction(const BieberbachGroup& g, const StructureVerdict& v);

/// Independent oracle: builds the full pairwise-product system over all
/// holonomy coset representatives (gamma_f gamma_g = t(f,g) gamma_{fg}) and
/// solves it with the same exact backends. Exponential in the holonomy rank;
/// guarded to |F| <= 2^12.
StructureVerdict cocycle_oracle_decide(const BieberbachGroup& g,
                                       StructureKind kind);

}  // namespace flatspin

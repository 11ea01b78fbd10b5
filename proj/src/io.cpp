#include "flatspin/io.hpp"

#include <chrono>

#include "flatspin/hw_catalog.hpp"

namespace flatspin {

const std::set<std::string> kAllChecks = {"spin",  "spinc", "betti",
                                          "h1",    "torsion", "characters"};

namespace {

std::string path_of(const std::string& base, std::size_t idx,
                    const char* field) {
  return base + "[" + std::to_string(idx) + "]." + field;
}

}  // namespace

GroupFile parse_group_file(const std::string& text) {
  Json j = Json::parse(text);  // nlohmann reports byte positions on errors
  GroupFile gf;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    fail("group file: missing integer 'dimension'");
  gf.dimension = j["dimension"].get<int>();
  if (gf.dimension < 1 || gf.dimension > kMaxDim)
    fail("group file: dimension out of range");
  gf.label = j.value("label", std::string());
  if (!j.contains("generators") || !j["generators"].is_array())
    fail("group file: missing 'generators' array");
  const auto& gens = j["generators"];
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& e = gens[i];
    if (!e.contains("signs") || !e["signs"].is_array() ||
        int(e["signs"].size()) != gf.dimension)
      fail("group file: " + path_of("generators", i, "signs") +
           " must be an array of length " + std::to_string(gf.dimension));
    std::vector<int> signs;
    for (std::size_t k = 0; k < e["signs"].size(); ++k) {
      if (!e["signs"][k].is_number_integer())
        fail("group file: " + path_of("generators", i, "signs") + "[" +
             std::to_string(k) + "] must be an integer");
      int s = e["signs"][k].get<int>();
      if (s != 1 && s != -1)
        fail("group file: " + path_of("generators", i, "signs") + "[" +
             std::to_string(k) + "] must be +1 or -1 (diagonal holonomy)");
      signs.push_back(s);
    }
    if (!e.contains("translation") || !e["translation"].is_array() ||
        int(e["translation"].size()) != gf.dimension)
      fail("group file: " + path_of("generators", i, "translation") +
           " must be an array of length " + std::to_string(gf.dimension));
    RatVector tr;
    for (std::size_t k = 0; k < e["translation"].size(); ++k) {
      if (!e["translation"][k].is_string())
        fail("group file: " + path_of("generators", i, "translation") + "[" +
             std::to_string(k) + "] must be a rational string like \"1/2\"");
      tr.push_back(parse_rational(e["translation"][k].get<std::string>()));
    }
    gf.generators.push_back(
        AffineElement{SignVector::from_signs(signs), std::move(tr)});
  }
  return gf;
}

Json affine_to_json(const AffineElement& a) {
  Json e;
  e["signs"] = a.rot.to_ints();
  Json tr = Json::array();
  for (const auto& q : a.tr)
    tr.push_back(to_string(q));
  e["translation"] = std::move(tr);
  return e;
}

AffineElement affine_from_json(const Json& j, int n) {
  std::vector<int> signs = j.at("signs").get<std::vector<int>>();
  if (int(signs.size()) != n)
    fail("affine element: wrong signs length");
  RatVector tr;
  for (const auto& s : j.at("translation"))
    tr.push_back(parse_rational(s.get<std::string>()));
  if (int(tr.size()) != n)
    fail("affine element: wrong translation length");
  return AffineElement{SignVector::from_signs(signs), std::move(tr)};
}

std::string serialize_group_file(const GroupFile& gf) {
  Json j;
  j["dimension"] = gf.dimension;
  if (!gf.label.empty())
    j["label"] = gf.label;
  Json gens = Json::array();
  for (const auto& g : gf.generators)
    gens.push_back(affine_to_json(g));
  j["generators"] = std::move(gens);
  return j.dump(2) + "\n";
}

GroupFile group_file_from(const BieberbachGroup& g, const std::string& label) {
  GroupFile gf;
  gf.dimension = g.dimension();
  gf.label = label;
  gf.generators = g.generators();
  return gf;
}

std::optional<GroupFile> catalog_group(const std::string& name) {
  auto suffix_int = [](const std::string& s, const std::string& prefix,
                       int& out) {
    if (s.rfind(prefix, 0) != 0)
      return false;
    try {
      std::size_t pos = 0;
      std::string tail = s.substr(prefix.size());
      out = std::stoi(tail, &pos);
      return pos == tail.size();
    } catch (const std::exception&) {
      return false;
    }
  };
  int n = 0;
  if (suffix_int(name, "torus-", n)) {
    if (n < 1 || n > kMaxDim)
      return std::nullopt;
    GroupFile gf;
    gf.dimension = n;
    gf.label = name;
    return gf;
  }
  if (suffix_int(name, "cyclic-hw-", n)) {
    if (n < 3 || n % 2 == 0 || n > kMaxDim)
      return std::nullopt;
    return group_file_from(cyclic_hw(n), name);
  }
  if (name == "hw-5-1")
    return group_file_from(hw_5_1(), name);
  if (name == "hw-5-2")
    return group_file_from(cyclic_hw(5), name);
  return std::nullopt;
}

std::vector<std::string> catalog_names() {
  return {"torus-<n>", "cyclic-hw-<n>", "hw-5-1", "hw-5-2"};
}

Json verdict_to_json(const StructureVerdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["method"] =
      v.method == DecisionMethod::kGenerator ? "generator" : "pairwise";
  j["answer"] = to_string(v.answer);
  if (v.answer == LiftAnswer::kYes) {
    Json w;
    if (v.kind == StructureKind::kSpin) {
      w["sigma"] = v.sigma;
      w["chi"] = v.chi;
    } else {
      Json z = Json::array(), zeta = Json::array();
      for (const auto& q : v.z)
        z.push_back(to_string(q));
      for (const auto& q : v.zeta)
        zeta.push_back(to_string(q));
      w["z"] = std::move(z);
      w["zeta"] = std::move(zeta);
    }
    j["witness"] = std::move(w);
  } else {
    Json terms = Json::array();
    for (const auto& t : v.obstruction) {
      Json term;
      term["relation"] = t.relation.str();
      term["coefficient"] = to_string(t.coefficient);
      terms.push_back(std::move(term));
    }
    j["obstruction"] = Json{{"terms", std::move(terms)},
                            {"parity", to_string(v.parity)}};
  }
  return j;
}

StructureVerdict verdict_from_json(const Json& j) {
  StructureVerdict v;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "spin")
    v.kind = StructureKind::kSpin;
  else if (kind == "spinc")
    v.kind = StructureKind::kSpinC;
  else
    fail("verdict: unknown kind '" + kind + "'");
  std::string method = j.value("method", "generator");
  v.method = method == "pairwise" ? DecisionMethod::kPairwise
                                  : DecisionMethod::kGenerator;
  std::string answer = j.at("answer").get<std::string>();
  if (answer == "YES")
    v.answer = LiftAnswer::kYes;
  else if (answer == "NO")
    v.answer = LiftAnswer::kNo;
  else if (answer == "NO_LIFT_INCONCLUSIVE")
    v.answer = LiftAnswer::kInconclusive;
  else
    fail("verdict: unknown answer '" + answer + "'");
  if (v.answer == LiftAnswer::kYes) {
    const Json& w = j.at("witness");
    if (v.kind == StructureKind::kSpin) {
      v.sigma = w.at("sigma").get<std::vector<int>>();
      v.chi = w.at("chi").get<std::vector<int>>();
    } else {
      for (const auto& s : w.at("z"))
        v.z.push_back(parse_rational(s.get<std::string>()));
      for (const auto& s : w.at("zeta"))
        v.zeta.push_back(parse_rational(s.get<std::string>()));
    }
  } else {
    const Json& o = j.at("obstruction");
    for (const auto& term : o.at("terms"))
      v.obstruction.push_back(ObstructionTerm{
          RelationName::parse(term.at("relation").get<std::string>()),
          Int(term.at("coefficient").get<std::string>())});
    v.parity = parse_rational(o.at("parity").get<std::string>());
  }
  return v;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::pair<Json, bool> analyze_report(const GroupFile& gf,
                                     const std::set<std::string>& checks) {
  for (const auto& c : checks)
    if (!kAllChecks.count(c))
      fail("unknown check '" + c + "'");

  Json rep;
  rep["schema"] = "flatspin-report-v1";
  if (!gf.label.empty())
    rep["label"] = gf.label;
  {
    Json grp;
    grp["dimension"] = gf.dimension;
    Json gens = Json::array();
    for (const auto& g : gf.generators)
      gens.push_back(affine_to_json(g));
    grp["generators"] = std::move(gens);
    rep["group"] = std::move(grp);
  }
  Json timing;

  std::optional<BieberbachGroup> group;
  try {
    group = BieberbachGroup::build(gf.dimension, gf.generators);
  } catch (const validation_error& e) {
    Json v;
    v["ok"] = false;
    v["reason"] = e.what();
    if (e.witness())
      v["witness"] = affine_to_json(*e.witness());
    rep["validation"] = std::move(v);
    return {rep, false};
  }

  // Torsion is a validity precondition for the manifold-level verdicts, so
  // it is always computed.
  auto t0 = std::chrono::steady_clock::now();
  TorsionResult torsion = is_torsion_free(*group);
  timing["torsion"] = ms_since(t0);
  if (!torsion.torsion_free) {
    Json v;
    v["ok"] = false;
    v["reason"] = "group has torsion (not a Bieberbach group)";
    v["witness"] = affine_to_json(*torsion.witness);
    rep["validation"] = std::move(v);
    rep["timing_ms"] = std::move(timing);
    return {rep, false};
  }
  rep["validation"] = Json{{"ok", true}};

  Json inv;
  if (checks.count("torsion")) {
    inv["torsion_free"] = true;
    inv["is_hw"] = is_hw(*group);
  }
  if (checks.count("betti")) {
    t0 = std::chrono::steady_clock::now();
    Json profile = Json::array();
    for (int p = 0; p <= group->dimension(); ++p)
      profile.push_back(betti(*group, p));
    inv["betti"] = std::move(profile);
    timing["betti"] = ms_since(t0);
  }
  if (checks.count("h1")) {
    t0 = std::chrono::steady_clock::now();
    H1Result h1 = h1_elementary_divisors(*group);
    Json tor = Json::array();
    for (const auto& d : h1.torsion)
      tor.push_back(to_string(d));
    inv["h1"] = Json{{"torsion", std::move(tor)},
                     {"free_rank", h1.free_rank}};
    timing["h1"] = ms_since(t0);
  }
  if (checks.count("characters")) {
    t0 = std::chrono::steady_clock::now();
    inv["characters"] = holonomy_characters(*group);
    timing["characters"] = ms_since(t0);
  }
  if (!inv.is_null())
    rep["invariants"] = std::move(inv);

  Json verdicts;
  if (checks.count("spin")) {
    t0 = std::chrono::steady_clock::now();
    verdicts["spin"] = verdict_to_json(decide_spin(*group));
    timing["spin"] = ms_since(t0);
  }
  if (checks.count("spinc")) {
    t0 = std::chrono::steady_clock::now();
    verdicts["spinc"] = verdict_to_json(decide_spinc(*group));
    timing["spinc"] = ms_since(t0);
  }
  if (!verdicts.is_null())
    rep["verdicts"] = std::move(verdicts);
  rep["timing_ms"] = std::move(timing);
  return {rep, true};
}

namespace {

std::string witness_or_obstruction_text(const Json& v) {
  if (v.contains("witness")) {
    const Json& w = v["witness"];
    std::string s = "  witness:";
    for (auto it = w.begin(); it != w.end(); ++it) {
      s += " " + it.key() + "=[";
      bool first = true;
      for (const auto& x : it.value()) {
        if (!first) s += ",";
        first = false;
        s += x.is_string() ? x.get<std::string>() : x.dump();
      }
      s += "]";
    }
    return s + "\n";
  }
  if (v.contains("obstruction")) {
    const Json& o = v["obstruction"];
    std::string s = "  obstruction:";
    for (const auto& t : o["terms"])
      s += " " + t["coefficient"].get<std::string>() + "*" +
           t["relation"].get<std::string>();
    s += " (parity " + o["parity"].get<std::string>() + ")";
    return s + "\n";
  }
  return "";
}

}  // namespace

std::string report_to_text(const Json& rep) {
  std::string s;
  if (rep.contains("label"))
    s += "label: " + rep["label"].get<std::string>() + "\n";
  s += "dimension: " + std::to_string(rep["group"]["dimension"].get<int>()) +
       "\n";
  s += "generators: " + std::to_string(rep["group"]["generators"].size()) +
       "\n";
  const Json& val = rep["validation"];
  if (!val["ok"].get<bool>()) {
    s += "validation: FAILED (" + val["reason"].get<std::string>() + ")\n";
    if (val.contains("witness")) {
      s += witness_or_obstruction_text(
          Json{{"witness", val["witness"]}});
    }
    return s;
  }
  s += "validation: ok\n";
  if (rep.contains("invariants")) {
    const Json& inv = rep["invariants"];
    if (inv.contains("torsion_free")) {
      s += std::string("torsion_free: ") +
           (inv["torsion_free"].get<bool>() ? "true" : "false") + "\n";
      s += std::string("is_hw: ") +
           (inv["is_hw"].get<bool>() ? "true" : "false") + "\n";
    }
    if (inv.contains("betti")) {
      s += "betti:";
      for (const auto& b : inv["betti"])
        s += " " + b.dump();
      s += "\n";
    }
    if (inv.contains("h1")) {
      s += "h1_torsion:";
      for (const auto& d : inv["h1"]["torsion"])
        s += " " + d.get<std::string>();
      s += "\nh1_free_rank: " +
           std::to_string(inv["h1"]["free_rank"].get<int>()) + "\n";
    }
    if (inv.contains("characters")) {
      s += "characters:\n";
      for (const auto& chi : inv["characters"]) {
        s += " ";
        for (const auto& x : chi)
          s += " " + std::to_string(x.get<int>());
        s += "\n";
      }
    }
  }
  if (rep.contains("verdicts")) {
    for (auto it = rep["verdicts"].begin(); it != rep["verdicts"].end();
         ++it) {
      s += it.key() + ": " + it.value()["answer"].get<std::string>() + "\n";
      s += witness_or_obstruction_text(it.value());
    }
  }
  return s;
}

ReplayResult replay_report(const Json& rep) {
  ReplayResult out;
  auto note = [&out](bool ok, const std::string& what) {
    out.ok = out.ok && ok;
    out.messages.push_back((ok ? "ok: " : "FAIL: ") + what);
  };

  GroupFile gf;
  gf.dimension = rep.at("group").at("dimension").get<int>();
  for (const auto& e : rep.at("group").at("generators"))
    gf.generators.push_back(affine_from_json(e, gf.dimension));

  const Json& val = rep.at("validation");
  if (!val.at("ok").get<bool>()) {
    // A failed-validation report carries a finite-order witness.
    if (val.contains("witness")) {
      AffineElement w = affine_from_json(val["witness"], gf.dimension);
      AffineElement sq = compose(w, w);
      bool order2 = sq.rot.is_identity() && is_integral(sq.tr) &&
                    !(w.rot.is_identity() && is_integral(w.tr));
      for (const auto& q : sq.tr)
        order2 = order2 && q == 0;
      note(order2, "torsion witness has order 2");
    } else {
      note(false, "failed validation without witness");
    }
    return out;
  }

  BieberbachGroup g = BieberbachGroup::build(gf.dimension, gf.generators);
  if (!rep.contains("verdicts")) {
    note(true, "nothing to replay (no verdicts)");
    return out;
  }
  for (auto it = rep["verdicts"].begin(); it != rep["verdicts"].end(); ++it) {
    StructureVerdict v = verdict_from_json(it.value());
    if (v.answer == LiftAnswer::kYes) {
      note(verify_witness(g, v), it.key() + " witness verifies");
    } else {
      note(verify_obstruction(g, v), it.key() + " obstruction replays");
      if (v.kind == StructureKind::kSpinC && v.answer == LiftAnswer::kNo)
        note(betti(g, 2) == 0, "spinc NO is backed by b2 = 0");
    }
  }
  return out;
}

}  // namespace flatspin

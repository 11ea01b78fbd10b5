// flatspin: decide Spin / Spin^C structures on flat manifolds with diagonal
// holonomy, with exact witnesses and replayable obstruction certificates.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "flatspin/hw_catalog.hpp"
#include "flatspin/io.hpp"
#include "flatspin/lifting.hpp"

namespace {

using namespace flatspin;

constexpr int kExitOk = 0;
constexpr int kExitIoError = 1;     // I/O, parse, usage
constexpr int kExitValidation = 2;  // validation failure, guard, mismatch

GroupFile resolve_input(const std::string& input) {
  if (input.rfind("catalog:", 0) == 0) {
    std::string name = input.substr(8);
    auto gf = catalog_group(name);
    if (!gf)
      fail("unknown catalog name '" + name + "'");
    return *gf;
  }
  std::ifstream in(input);
  if (!in)
    fail("cannot open '" + input + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  GroupFile gf = parse_group_file(buf.str());
  if (gf.label.empty())
    gf.label = input;
  return gf;
}

void write_output(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out)
    fail("cannot write '" + output + "'");
  out << text;
}

int cmd_analyze(const std::string& input, const std::string& checks_csv,
                const std::string& format, const std::string& output) {
  GroupFile gf = resolve_input(input);
  std::set<std::string> checks;
  if (checks_csv.empty()) {
    checks = kAllChecks;
  } else {
    std::stringstream ss(checks_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty())
        checks.insert(item);
  }
  auto [report, ok] = analyze_report(gf, checks);
  write_output(output, format == "json" ? report.dump(2) + "\n"
                                        : report_to_text(report));
  return ok ? kExitOk : kExitValidation;
}

int cmd_enumerate(int n, bool exhaustive, std::uint64_t sample,
                  std::uint64_t seed, const std::string& format,
                  const std::string& output) {
  std::ostringstream lines;
  Json records = Json::array();
  std::uint64_t spin_yes = 0, spinc_yes = 0, spinc_inconclusive = 0;

  auto visit = [&](const HwSpec& spec, const BieberbachGroup& g) {
    StructureVerdict spin = decide_spin(g);
    StructureVerdict spinc = decide_spinc(g);
    spin_yes += spin.answer == LiftAnswer::kYes;
    spinc_yes += spinc.answer == LiftAnswer::kYes;
    spinc_inconclusive += spinc.answer == LiftAnswer::kInconclusive;
    std::string spec_hex;
    for (std::uint64_t mask : hw_spec_to_masks(spec)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%llx",
                    static_cast<unsigned long long>(mask));
      if (!spec_hex.empty())
        spec_hex += ".";
      spec_hex += buf;
    }
    if (format == "json") {
      records.push_back(Json{{"spec", spec_hex},
                             {"spin", to_string(spin.answer)},
                             {"spinc", to_string(spinc.answer)}});
    } else {
      lines << "spec=" << spec_hex << " spin=" << to_string(spin.answer)
            << " spinc=" << to_string(spinc.answer) << "\n";
    }
  };

  EnumerateStats stats =
      enumerate_hw(n, exhaustive ? EnumerateMode::kExhaustive
                                 : EnumerateMode::kSample,
                   sample, seed, visit);

  if (format == "json") {
    Json out;
    out["dimension"] = n;
    out["mode"] = exhaustive ? "exhaustive" : "sample";
    if (!exhaustive) {
      out["sample"] = sample;
      out["seed"] = seed;
    }
    out["records"] = std::move(records);
    out["summary"] = Json{{"candidates", stats.candidates},
                          {"torsion_free", stats.torsion_free},
                          {"spin_yes", spin_yes},
                          {"spinc_yes", spinc_yes},
                          {"spinc_inconclusive", spinc_inconclusive},
                          {"note", "counts normalized generator data; affine "
                                   "equivalence classes are not merged"}};
    write_output(output, out.dump(2) + "\n");
  } else {
    lines << "candidates: " << stats.candidates << "\n"
          << "torsion_free: " << stats.torsion_free << "\n"
          << "spin_yes: " << spin_yes << "\n"
          << "spinc_yes: " << spinc_yes << "\n"
          << "spinc_inconclusive: " << spinc_inconclusive << "\n"
          << "note: counts normalized generator data; affine equivalence "
             "classes are not merged\n";
    write_output(output, lines.str());
  }
  return kExitOk;
}

int cmd_cross_check(const std::string& input, const std::string& format,
                    const std::string& output) {
  GroupFile gf = resolve_input(input);
  BieberbachGroup g = BieberbachGroup::build(gf.dimension, gf.generators);
  Json out;
  if (!gf.label.empty())
    out["label"] = gf.label;
  bool all_match = true;
  for (StructureKind kind : {StructureKind::kSpin, StructureKind::kSpinC}) {
    StructureVerdict direct = kind == StructureKind::kSpin ? decide_spin(g)
                                                           : decide_spinc(g);
    StructureVerdict oracle = cocycle_oracle_decide(g, kind);
    bool match = direct.answer == oracle.answer;
    all_match = all_match && match;
    out[to_string(kind)] = Json{{"generator", to_string(direct.answer)},
                                {"pairwise", to_string(oracle.answer)},
                                {"match", match}};
  }
  out["match"] = all_match;
  if (format == "json") {
    write_output(output, out.dump(2) + "\n");
  } else {
    std::string text;
    if (out.contains("label"))
      text += "label: " + out["label"].get<std::string>() + "\n";
    for (const char* kind : {"spin", "spinc"})
      text += std::string(kind) + ": generator=" +
              out[kind]["generator"].get<std::string>() +
              " pairwise=" + out[kind]["pairwise"].get<std::string>() +
              (out[kind]["match"].get<bool>() ? " match" : " MISMATCH") +
              "\n";
    text += all_match ? "match: true\n" : "match: false\n";
    write_output(output, text);
  }
  return all_match ? kExitOk : kExitValidation;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json report = Json::parse(buf.str());
  ReplayResult result = replay_report(report);
  for (const auto& msg : result.messages)
    std::cout << msg << "\n";
  std::cout << (result.ok ? "verify: ok\n" : "verify: FAILED\n");
  return result.ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin / Spin^C structure decisions for flat manifolds with "
               "diagonal holonomy (exact arithmetic)"};
  app.require_subcommand(1);

  std::string input, checks, format = "text", output;

  auto* analyze = app.add_subcommand(
      "analyze", "Analyze a group file or catalog:<name>");
  analyze->add_option("input", input, "path or catalog:<name>")->required();
  analyze->add_option("--checks", checks,
                      "comma list: spin,spinc,betti,h1,torsion,characters");
  analyze->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--output", output, "write to file instead of stdout");

  int enum_n = 0;
  bool exhaustive = false;
  std::uint64_t sample = 0, seed = 0;
  auto* enumerate = app.add_subcommand(
      "enumerate", "Enumerate torsion-free HW candidates for odd n");
  enumerate->add_option("n", enum_n, "dimension (odd)")->required();
  enumerate->add_flag("--exhaustive", exhaustive,
                      "walk all translation matrices (n <= 5 only)");
  enumerate->add_option("--sample", sample, "number of sampled groups");
  enumerate->add_option("--seed", seed, "sampling seed");
  enumerate->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  enumerate->add_option("--output", output, "write to file instead of stdout");

  auto* cross = app.add_subcommand(
      "cross-check", "Compare generator-relation and pairwise-cocycle "
                     "decisions");
  cross->add_option("input", input, "path or catalog:<name>")->required();
  cross->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  cross->add_option("--output", output, "write to file instead of stdout");

  std::string report_path;
  auto* verify = app.add_subcommand(
      "verify", "Replay witnesses and obstruction certificates in a saved "
                "report");
  verify->add_option("report", report_path, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIoError;
  }

  try {
    if (analyze->parsed())
      return cmd_analyze(input, checks, format, output);
    if (enumerate->parsed()) {
      if (exhaustive == (sample > 0))
        fail("choose exactly one of --exhaustive or --sample N");
      return cmd_enumerate(enum_n, exhaustive, sample, seed, format, output);
    }
    if (cross->parsed())
      return cmd_cross_check(input, format, output);
    if (verify->parsed())
      return cmd_verify(report_path);
  } catch (const validation_error& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    if (e.witness()) {
      std::cerr << "witness: " << affine_to_json(*e.witness()).dump() << "\n";
    }
    return kExitValidation;
  } catch (const resource_guard_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}

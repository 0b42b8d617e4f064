// dmlab command line: Luxemburg norms, atomic decompositions, Walsh-Fourier
// transforms, and seeded verification campaigns on the dyadic grid.
//
// Exit codes: 0 success / campaign passed, 2 verification failure (rejected
// hypothesis, broken ceiling, or failed report rows), 1 usage or input error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmlab/atoms.hpp"
#include "dmlab/grid.hpp"
#include "dmlab/harness.hpp"
#include "dmlab/musielak.hpp"
#include "dmlab/walsh.hpp"

namespace {

using namespace dmlab;

std::string g12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit_error(const std::string& message, bool as_json) {
  if (as_json) {
    nlohmann::json j;
    j["error"] = message;
    std::cout << j.dump() << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

/// Print one sampled function, one leaf value per line, or write it as CSV.
int emit_function(const SampledFunction& f, const std::string& out_path) {
  if (out_path.empty()) {
    for (double v : f.values) std::cout << g12(v) << "\n";
  } else {
    write_function_csv(f, out_path);
    std::cout << "wrote " << f.values.size() << " leaf values to " << out_path << "\n";
  }
  return 0;
}

int run_norm(const std::string& phi_spec, const std::string& input) {
  MusielakFunction phi = parse_phi(phi_spec);
  SampledFunction f = read_function_csv(input);
  std::cout << g12(luxemburg_norm(phi, f)) << "\n";
  return 0;
}

int run_decompose(const std::string& kind_code, const std::string& phi_spec,
                  const std::string& input, const std::string& out, double r, double t_star) {
  DecomposeKind kind = parse_decompose_kind(kind_code);
  MusielakFunction phi = parse_phi(phi_spec);
  SampledFunction f = read_function_csv(input);
  // The constructions need a vanishing start, so the input is centered here.
  DyadicMartingale m = martingale_of(f, true);
  AtomicDecomposition dec = atomic_decompose(m, phi, kind, t_star, r);
  write_decomposition_json(dec, f.grid, out);
  std::cout << "kind=" << kind_code << " resolution=" << f.grid.resolution
            << " triples=" << dec.triples.size() << " atomic_norm=" << g12(atomic_norm(dec))
            << " -> " << out << "\n";
  return 0;
}

int run_walsh(const std::string& mode, const std::string& input, std::int64_t n,
              const std::string& out) {
  SampledFunction f = read_function_csv(input);
  if (mode == "coeffs") {
    WalshSpectrum spec = analyze(f);
    if (out.empty()) {
      for (std::size_t m = 0; m < spec.coeffs.size(); ++m)
        std::cout << m << "," << g12(spec.coeffs[m]) << "\n";
    } else {
      write_spectrum_json(spec, out);
      std::cout << "wrote " << spec.coeffs.size() << " coefficients to " << out << "\n";
    }
    return 0;
  }
  if (mode == "partial-sum") return emit_function(partial_sum(f, n), out);
  if (mode == "fejer") return emit_function(fejer_mean(f, n), out);
  if (mode == "maximal") return emit_function(maximal_fejer(f), out);
  throw std::invalid_argument("unknown walsh mode: " + mode);
}

void print_report_text(const VerificationReport& rep) {
  std::cout << "campaign " << rep.name << " on phi " << rep.phi_spec << ", seed " << rep.seed
            << "\n";
  if (rep.hypothesis.checked) {
    std::cout << "hypothesis: " << (rep.hypothesis.pass ? "pass" : "FAIL") << " — "
              << rep.hypothesis.detail << "\n";
  } else {
    std::cout << "hypothesis: none — " << rep.hypothesis.detail << "\n";
  }
  if (rep.hypothesis_rejected) {
    std::cout << "strict mode: campaign rejected before sampling\nFAIL\n";
    return;
  }
  for (const ResolutionStats& row : rep.rows) {
    std::cout << "  N=" << row.resolution << ": trials=" << row.trials
              << " max_ratio=" << g12(row.max_ratio) << " median=" << g12(row.median_ratio)
              << " worst_seed_index=" << row.worst_index << "\n";
  }
  if (rep.has_ceiling) {
    bool under = true;
    for (const ResolutionStats& row : rep.rows)
      if (row.max_ratio > rep.ceiling) under = false;
    std::cout << "ceiling " << g12(rep.ceiling) << ": " << (under ? "satisfied" : "EXCEEDED")
              << "\n";
  }
  std::cout << "stability spread " << g12(rep.stability_spread) << " (allowed "
            << g12(rep.stability_factor) << ")\n";
  std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
}

int run_verify(const ExperimentConfig& cfg, const std::string& out, bool as_json) {
  VerificationReport rep = verify(cfg);
  if (!out.empty()) {
    if (out.size() >= 5 && out.compare(out.size() - 5, 5, ".json") == 0) {
      std::ofstream file(out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open report file: " + out);
      file << report_json(rep);
    } else {
      write_report_csv(rep, out);
    }
  }
  if (as_json)
    std::cout << report_json(rep);
  else
    print_report_text(rep);
  return rep.pass ? 0 : 2;
}

struct ReportRow {
  std::string name;
  std::string phi;
  std::string resolution, trials, max_ratio, median_ratio, worst, pass;
};

/// Parse one CSV data row; the phi field may be double-quoted (and holds
/// commas when it is).
ReportRow parse_report_row(const std::string& line) {
  ReportRow row;
  std::size_t pos = line.find(',');
  if (pos == std::string::npos) throw std::runtime_error("malformed report row: " + line);
  row.name = line.substr(0, pos);
  ++pos;
  if (pos < line.size() && line[pos] == '"') {
    std::size_t close = line.find('"', pos + 1);
    if (close == std::string::npos || close + 1 >= line.size() || line[close + 1] != ',')
      throw std::runtime_error("malformed quoted field: " + line);
    row.phi = line.substr(pos + 1, close - pos - 1);
    pos = close + 2;
  } else {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) throw std::runtime_error("malformed report row: " + line);
    row.phi = line.substr(pos, next - pos);
    pos = next + 1;
  }
  std::string rest = line.substr(pos);
  std::vector<std::string> fields;
  std::istringstream in(rest);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() != 6) throw std::runtime_error("expected 8 columns: " + line);
  row.resolution = fields[0];
  row.trials = fields[1];
  row.max_ratio = fields[2];
  row.median_ratio = fields[3];
  row.worst = fields[4];
  row.pass = fields[5];
  return row;
}

int run_report(const std::string& input, bool as_json) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + input);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty report: " + input);
  const std::string header =
      "inequality,phi_spec,resolution,trials,max_ratio,median_ratio,worst_seed_index,pass";
  if (line != header) throw std::runtime_error("unrecognized report header: " + line);

  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_report_row(line));
  }

  bool all_pass = true;
  for (const ReportRow& row : rows)
    if (row.pass != "1") all_pass = false;

  if (as_json) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const ReportRow& row : rows) {
      j["rows"].push_back({{"inequality", row.name},
                           {"phi_spec", row.phi},
                           {"resolution", row.resolution},
                           {"trials", row.trials},
                           {"max_ratio", row.max_ratio},
                           {"median_ratio", row.median_ratio},
                           {"worst_seed_index", row.worst},
                           {"pass", row.pass}});
    }
    j["pass"] = all_pass;
    std::cout << j.dump(2) << "\n";
  } else {
    if (rows.empty()) {
      std::cout << "no data rows (hypothesis rejected before sampling?)\n";
    }
    for (const ReportRow& row : rows) {
      std::cout << row.name << "  phi=" << row.phi << "  N=" << row.resolution
                << "  trials=" << row.trials << "  max=" << row.max_ratio
                << "  median=" << row.median_ratio << "  worst_seed_index=" << row.worst
                << "  " << (row.pass == "1" ? "pass" : "FAIL") << "\n";
    }
    std::cout << (all_pass && !rows.empty() ? "PASS" : "FAIL") << "\n";
  }
  return all_pass && !rows.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for dyadic martingales and Walsh series"};
  app.require_subcommand(1);

  std::string norm_phi, norm_input;
  CLI::App* norm_cmd = app.add_subcommand("norm", "Luxemburg norm of a leaf-sampled function");
  norm_cmd->add_option("--phi", norm_phi, "integrand spec, e.g. power:p=2")->required();
  norm_cmd->add_option("--input", norm_input, "CSV with 2^N leaf values")->required();

  std::string dec_kind, dec_phi, dec_input, dec_out;
  double dec_r = 1.0;
  double dec_tstar = 1.0;
  CLI::App* dec_cmd =
      app.add_subcommand("decompose", "atomic decomposition of the input's dyadic martingale");
  dec_cmd->add_option("--kind", dec_kind, "construction: s, P, Q, M, or S")->required();
  dec_cmd->add_option("--phi", dec_phi, "integrand spec")->required();
  dec_cmd->add_option("--input", dec_input, "CSV with 2^N leaf values")->required();
  dec_cmd->add_option("--out", dec_out, "decomposition JSON path")->required();
  dec_cmd->add_option("--r", dec_r, "aggregation exponent in (0,1], default 1");
  dec_cmd->add_option("--t-star", dec_tstar, "weighted-stopping evaluation point, default 1");

  CLI::App* walsh_cmd = app.add_subcommand("walsh", "Walsh-Fourier analysis");
  walsh_cmd->require_subcommand(1);
  std::string walsh_input, walsh_out;
  std::int64_t walsh_n = 1;
  CLI::App* w_coeffs = walsh_cmd->add_subcommand("coeffs", "Paley-ordered coefficients");
  w_coeffs->add_option("--input", walsh_input, "CSV with 2^N leaf values")->required();
  w_coeffs->add_option("--out", walsh_out, "spectrum JSON path (default: print)");
  CLI::App* w_partial = walsh_cmd->add_subcommand("partial-sum", "n-th Walsh partial sum");
  w_partial->add_option("--n", walsh_n, "order n >= 1")->required();
  w_partial->add_option("--input", walsh_input, "CSV with 2^N leaf values")->required();
  w_partial->add_option("--out", walsh_out, "output CSV (default: print)");
  CLI::App* w_fejer = walsh_cmd->add_subcommand("fejer", "n-th Fejer mean");
  w_fejer->add_option("--n", walsh_n, "order n >= 1")->required();
  w_fejer->add_option("--input", walsh_input, "CSV with 2^N leaf values")->required();
  w_fejer->add_option("--out", walsh_out, "output CSV (default: print)");
  CLI::App* w_maximal = walsh_cmd->add_subcommand("maximal", "pointwise maximal Fejer function");
  w_maximal->add_option("--input", walsh_input, "CSV with 2^N leaf values")->required();
  w_maximal->add_option("--out", walsh_out, "output CSV (default: print)");

  ExperimentConfig vcfg;
  std::string verify_out;
  bool verify_json = false;
  bool exploratory = false;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run one seeded verification campaign");
  verify_cmd->add_option("name", vcfg.name, "campaign name; see --list");
  verify_cmd->add_option("--phi", vcfg.phi_spec, "integrand spec, default power:p=2");
  verify_cmd->add_option("--trials", vcfg.trials, "seeded trials per resolution, default 100");
  verify_cmd->add_option("--resolutions", vcfg.resolutions, "comma list, default 6,8,10")
      ->delimiter(',');
  verify_cmd->add_option("--seed", vcfg.seed, "root seed, default 1");
  verify_cmd->add_option("--out", verify_out, "report path (.csv, or .json for the mirror)");
  verify_cmd->add_option("--r", vcfg.r, "vector/aggregation exponent where used, default 2");
  verify_cmd->add_option("--t-star", vcfg.t_star, "weighted-stopping point (atoms), default 1");
  verify_cmd->add_option("--kind", vcfg.kind, "decomposition kind (atoms), default s");
  verify_cmd->add_option("--law", vcfg.law, "bounded|gaussian|heavy|sparse|mixed, default mixed");
  verify_cmd->add_flag("--exploratory", exploratory,
                       "annotate a failed hypothesis instead of rejecting the run");
  verify_cmd->add_flag("--json", verify_json, "print the JSON report instead of text");
  verify_cmd->add_option("--stability", vcfg.stability_factor,
                         "allowed max-ratio spread across resolutions, default 4");
  bool list_names = false;
  verify_cmd->add_flag("--list", list_names, "list campaign names and exit");

  std::string report_input;
  bool report_json_flag = false;
  CLI::App* report_cmd = app.add_subcommand("report", "pretty-print a verification CSV");
  report_cmd->add_option("--input", report_input, "CSV written by verify --out")->required();
  report_cmd->add_flag("--json", report_json_flag, "print as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const bool json_errors = verify_json || report_json_flag;
  try {
    if (norm_cmd->parsed()) return run_norm(norm_phi, norm_input);
    if (dec_cmd->parsed())
      return run_decompose(dec_kind, dec_phi, dec_input, dec_out, dec_r, dec_tstar);
    if (walsh_cmd->parsed()) {
      for (CLI::App* sub : walsh_cmd->get_subcommands())
        return run_walsh(sub->get_name(), walsh_input, walsh_n, walsh_out);
    }
    if (verify_cmd->parsed()) {
      if (list_names) {
        for (const std::string& name : verify_names()) std::cout << name << "\n";
        return 0;
      }
      if (vcfg.name.empty()) throw std::invalid_argument("verify: campaign name required");
      vcfg.strict = !exploratory;
      return run_verify(vcfg, verify_out, verify_json);
    }
    if (report_cmd->parsed()) return run_report(report_input, report_json_flag);
  } catch (const std::exception& e) {
    emit_error(e.what(), json_errors);
    return 1;
  }
  return 1;
}

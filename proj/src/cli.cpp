#include "i3322/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "i3322/ascent.hpp"
#include "i3322/bell.hpp"
#include "i3322/bounds.hpp"
#include "i3322/io_format.hpp"
#include "i3322/soscheck.hpp"
#include "i3322/structure.hpp"

namespace i3322 {

namespace {

std::vector<double> parse_list(const std::string& text, const char* field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ValidationError(field, "not a number: \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError(field, "empty list");
  return out;
}

// "A:B" or "A:B:STEP".
std::vector<int> parse_range(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("dims", "expected A:B or A:B:STEP, got \"" + text + "\"");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) throw ValidationError("dims", "expected A:B or A:B:STEP");
  const int step = parts.size() == 3 ? parts[2] : 1;
  if (step < 1 || parts[0] > parts[1]) throw ValidationError("dims", "empty range");
  std::vector<int> dims;
  for (int d = parts[0]; d <= parts[1]; d += step) dims.push_back(d);
  return dims;
}

Branch branch_or_throw(const std::string& name) {
  const auto b = parse_branch(name);
  if (!b) throw ValidationError("branch", "unknown branch \"" + name + "\"");
  return *b;
}

std::string join_g17(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + format_g17(v[i]);
  return s;
}

std::string join_fixed(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_fixed12(v[i]);
  return s;
}

struct ValueOpts {
  std::string strategy;
};

int cmd_value(const ValueOpts& o, std::ostream& out) {
  const Strategy s = load_strategy(o.strategy);
  const BellValue v = i3322_value(s);
  out << format_fixed12(v.value) << "\n";
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    out << "  " << std::left << std::setw(8) << BellValue::labels()[i] << std::right << " "
        << format_fixed12(v.terms[i]) << "\n";
  }
  if (!s.uniform()) out << "entropy (bits): " << format_fixed12(entanglement_entropy(s.schmidt())) << "\n";
  return kExitOk;
}

int cmd_classical(std::ostream& out) {
  const ClassicalResult r = classical_max();
  out << "max = " << r.max << "\n";
  out << "maximizers = " << r.maximizers.size() << "\n";
  out << "evaluated = " << r.evaluated << "\n";
  out << "a1 a2 a3 b1 b2 b3\n";
  for (const Assignment& a : r.maximizers) {
    for (int k = 0; k < 6; ++k) out << (k ? "  " : "") << a[k];
    out << "\n";
  }
  return kExitOk;
}

struct SeesawOpts {
  int dim = 2;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string schmidt = "uniform";
  double tol = 1e-10;
  int max_sweeps = 10000;
  std::string out;
};

int cmd_seesaw(const SeesawOpts& o, std::ostream& out) {
  if (o.dim < 1) throw ValidationError("dim", "must be >= 1");
  if (o.restarts < 1) throw ValidationError("restarts", "must be >= 1");
  if (!(o.tol >= 0.0)) throw ValidationError("tol", "must be >= 0");
  if (o.max_sweeps < 1) throw ValidationError("max-sweeps", "must be >= 1");
  const SeesawOptions opt{o.max_sweeps, o.tol};
  std::vector<double> values;
  Strategy best = Strategy::zero(1);
  int best_index = 0;
  double worst = 0.0;
  int converged = -1;
  if (o.schmidt == "uniform") {
    const RestartRun run = seesaw_restarts(o.dim, o.restarts, o.seed, opt);
    values = run.values;
    best = run.best;
    best_index = run.best_index;
    converged = 0;
    for (const auto& t : run.traces) {
      worst = std::min(worst, t.worst_step());
      converged += t.converged;
    }
  } else if (o.schmidt == "free") {
    const SchmidtRun run = schmidt_seesaw(o.dim, o.restarts, o.seed, true, opt);
    values = run.values;
    best = run.best;
    best_index = run.best_index;
    worst = run.worst_step;
  } else {
    throw ValidationError("schmidt", "expected uniform or free");
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  out << "dim: " << o.dim << "\n";
  out << "schmidt: " << o.schmidt << "\n";
  out << "restarts: " << o.restarts << "\n";
  out << "seed: " << o.seed << "\n";
  out << "best value: " << format_fixed12(values[best_index]) << "\n";
  out << "best restart: " << best_index << "\n";
  out << "mean value: " << format_fixed12(mean) << "\n";
  out << "min value: " << format_fixed12(*std::min_element(values.begin(), values.end())) << "\n";
  if (converged >= 0) out << "converged: " << converged << "/" << o.restarts << "\n";
  out << "worst step: " << format_g17(worst) << "\n";
  out << "entropy (bits): " << format_fixed12(entanglement_entropy(best.schmidt())) << "\n";
  out << "schmidt weights: " << join_fixed(std::vector<double>(best.schmidt().data(), best.schmidt().data() + best.dim()))
      << "\n";
  if (!o.out.empty()) save_strategy(best, o.out);
  return kExitOk;
}

struct NormalFormOpts {
  std::string branch;
  std::string coeffs;
  bool optimize = false;
  int dim = 0;
  double step = 0.05;
  std::string out;
};

int cmd_normal_form(const NormalFormOpts& o, std::ostream& out) {
  const Branch branch = branch_or_throw(o.branch);
  NormalFormSpec spec;
  if (o.optimize) {
    if (o.dim < 1) throw ValidationError("dim", "--optimize needs --dim");
    OmegaSearch search;
    search.step = o.step;
    const OmegaResult r = optimize_omega(branch, o.dim, search);
    spec = r.spec;
    out << "grid points: " << r.grid_points << " (spacing " << format_g17(r.grid_step) << ")\n";
  } else {
    if (o.coeffs.empty()) throw ValidationError("coeffs", "required unless --optimize");
    spec = NormalFormSpec::make(branch, parse_list(o.coeffs, "coeffs"));
    if (o.dim != 0 && o.dim != spec.dim) throw ValidationError("dim", "does not match the coefficient count");
  }
  const Strategy s = build_normal_form(spec);
  const double direct = i3322_value(s).value;
  out << "branch: " << to_string(spec.branch) << "\n";
  out << "dim: " << spec.dim << "\n";
  out << "coeffs: " << join_fixed(spec.coeffs) << "\n";
  if (is_exchanged(spec.branch)) {
    out << "closed form: n/a\n";
  } else {
    const double closed = omega_closed(spec);
    out << "closed form: " << format_fixed12(closed) << "\n";
    out << "direct: " << format_fixed12(direct) << "\n";
    out << "difference: " << format_g17(direct - closed) << "\n";
  }
  if (is_exchanged(spec.branch)) out << "direct: " << format_fixed12(direct) << "\n";
  if (!o.out.empty()) save_strategy(s, o.out);
  return kExitOk;
}

struct NormalizeOpts {
  std::string strategy;
};

int cmd_normalize(const NormalizeOpts& o, std::ostream& out) {
  const NormalizeReport r = normalize(load_strategy(o.strategy));
  out << "old value: " << format_fixed12(r.old_value) << "\n";
  out << "aligned value: " << format_fixed12(r.new_value) << "\n";
  out << "delta: " << format_g17(r.delta) << "\n";
  out << "components: " << r.components.size() << "\n";
  bool mismatch = false;
  for (const Component& c : r.components) {
    out << "  " << (c.kind == ComponentKind::Cycle ? "cycle" : "chain") << " [";
    for (std::size_t i = 0; i < c.vertices.size(); ++i) out << (i ? " " : "") << c.vertices[i];
    out << "] ";
    if (c.spec) {
      out << to_string(c.spec->branch) << " " << join_fixed(c.spec->coeffs) << "\n";
    } else {
      out << "no matching branch: " << c.mismatch << "\n";
      mismatch = true;
    }
  }
  if (r.rebuilt_value) out << "rebuilt value: " << format_fixed12(*r.rebuilt_value) << "\n";
  return mismatch ? kExitClaimFailed : kExitOk;
}

struct BoundsOpts {
  std::string claim;
  double step = 0.0;
  bool csv = false;
};

int cmd_bounds(const BoundsOpts& o, std::ostream& out) {
  const double step = o.step > 0.0 ? o.step : default_step(o.claim);
  const BoundReport r = run_claim(o.claim, step);
  if (o.csv) {
    out << BoundReport::csv_header() << "\n" << r.csv_row() << "\n";
  } else {
    out << r.text();
  }
  return r.holds() ? kExitOk : kExitClaimFailed;
}

struct CertifyOpts {
  std::string cert;
  int samples = 10000;
  std::uint64_t seed = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  std::string dump;
};

int cmd_certify(const CertifyOpts& o, std::ostream& out) {
  Certificate c;
  const auto ids = builtin_certificate_ids();
  if (o.cert == "builtin") {
    c = builtin_certificate("i3322-case3");
  } else if (std::find(ids.begin(), ids.end(), o.cert) != ids.end()) {
    c = builtin_certificate(o.cert);
  } else {
    c = load_certificate(o.cert);
  }
  if (!std::isnan(o.bound)) c = c.with_bound(o.bound);
  if (!o.dump.empty()) write_text_file(o.dump, certificate_to_json(c));
  const Verdict v = verify(c, o.samples, o.seed);
  out << "certificate: " << (c.id.empty() ? o.cert : c.id) << "\n";
  out << "bound: " << format_fixed12(c.bound) << "\n";
  out << v.text();
  return v.accepted ? kExitOk : kExitClaimFailed;
}

struct CrossOpts {
  double step = 1e-4;
  int samples = 10000;
  std::uint64_t seed = 0;
};

int cmd_crosscheck(const CrossOpts& o, std::ostream& out) {
  const CrossCheck r = cross_check_case3(o.step, o.samples, o.seed);
  out << r.text();
  return r.ok ? kExitOk : kExitClaimFailed;
}

struct ScanOpts {
  std::string branch;
  std::string dims;
  std::string out;
  double step = 0.05;
};

int cmd_scan(const ScanOpts& o, std::ostream& out) {
  const Branch branch = branch_or_throw(o.branch);
  const std::vector<int> dims = parse_range(o.dims);
  for (int d : dims) NormalFormSpec::num_coeffs_for(branch, d);  // reject bad dims up front
  OmegaSearch search;
  search.step = o.step;
  std::ostringstream csv;
  csv << "dim,branch,value,coeffs\n";
  for (int d : dims) {
    const OmegaResult r = optimize_omega(branch, d, search);
    csv << d << "," << to_string(branch) << "," << format_fixed12(r.value) << "," << join_g17(r.spec.coeffs, ';') << "\n";
  }
  out << csv.str();
  if (!o.out.empty()) write_text_file(o.out, csv.str());
  return kExitOk;
}

struct AuditOpts {
  std::string dims = "2:12";
  double step = 1e-3;
};

int cmd_audit(const AuditOpts& o, std::ostream& out) {
  const Num2Audit a = lemma_num2_audit(parse_range(o.dims), o.step);
  out << a.text();
  return a.d4.holds() && a.all_below_quarter ? kExitOk : kExitClaimFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"I3322 strategies, normal forms, bound oracles and SOS certificates", "i3322"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  ValueOpts value;
  auto* value_cmd = app.add_subcommand("value", "Evaluate a strategy file");
  value_cmd->add_option("--strategy", value.strategy, "Strategy JSON")->required();

  auto* classical_cmd = app.add_subcommand("classical", "Enumerate deterministic strategies");

  SeesawOpts seesaw_o;
  auto* seesaw_cmd = app.add_subcommand("seesaw", "Best-response ascent from random restarts");
  seesaw_cmd->add_option("--dim", seesaw_o.dim, "Local dimension")->required();
  seesaw_cmd->add_option("--restarts", seesaw_o.restarts, "Number of restarts");
  seesaw_cmd->add_option("--seed", seesaw_o.seed, "Seed");
  seesaw_cmd->add_option("--schmidt", seesaw_o.schmidt, "uniform or free");
  seesaw_cmd->add_option("--tol", seesaw_o.tol, "Per-sweep improvement threshold");
  seesaw_cmd->add_option("--max-sweeps", seesaw_o.max_sweeps, "Sweep cap");
  seesaw_cmd->add_option("--out", seesaw_o.out, "Write the best strategy here");

  NormalFormOpts nf;
  auto* nf_cmd = app.add_subcommand("normal-form", "Build or optimize a joint normal form");
  nf_cmd->add_option("--branch", nf.branch, "chain-even, chain-odd, chain-even-exchanged, chain-odd-exchanged, cyclic")
      ->required();
  nf_cmd->add_option("--coeffs", nf.coeffs, "Comma-separated coefficients");
  nf_cmd->add_flag("--optimize", nf.optimize, "Search the coefficients");
  nf_cmd->add_option("--dim", nf.dim, "Dimension (with --optimize)");
  nf_cmd->add_option("--step", nf.step, "Grid spacing for --optimize");
  nf_cmd->add_option("--out", nf.out, "Write the strategy here");

  NormalizeOpts norm;
  auto* norm_cmd = app.add_subcommand("normalize", "Align bases and split into normal-form components");
  norm_cmd->add_option("--strategy", norm.strategy, "Strategy JSON (uniform weights)")->required();

  BoundsOpts bounds_o;
  auto* bounds_cmd = app.add_subcommand("bounds", "Certified grid check of a bound claim");
  bounds_cmd->add_option("--claim", bounds_o.claim, "f-cap, case1, case2, case3, d4")->required();
  bounds_cmd->add_option("--step", bounds_o.step, "Angle step (default per claim)");
  bounds_cmd->add_flag("--csv", bounds_o.csv, "CSV output");

  CertifyOpts cert;
  auto* cert_cmd = app.add_subcommand("certify", "Verify an SOS certificate");
  cert_cmd->add_option("--cert", cert.cert, "Certificate JSON, \"builtin\", or a built-in id")->required();
  cert_cmd->add_option("--samples", cert.samples, "Identity test points");
  cert_cmd->add_option("--seed", cert.seed, "Seed");
  cert_cmd->add_option("--bound", cert.bound, "Override the claimed bound");
  cert_cmd->add_option("--dump", cert.dump, "Write the certificate JSON here");

  CrossOpts cross;
  auto* cross_cmd = app.add_subcommand("crosscheck", "Case-3 grid oracle against the built-in certificate");
  cross_cmd->add_option("--step", cross.step, "Angle step");
  cross_cmd->add_option("--samples", cross.samples, "Identity test points");
  cross_cmd->add_option("--seed", cross.seed, "Seed");

  ScanOpts scan;
  auto* scan_cmd = app.add_subcommand("scan", "Optimize a branch across dimensions");
  scan_cmd->add_option("--branch", scan.branch, "Branch")->required();
  scan_cmd->add_option("--dims", scan.dims, "A:B[:STEP]")->required();
  scan_cmd->add_option("--out", scan.out, "CSV file");
  scan_cmd->add_option("--step", scan.step, "Grid spacing");

  AuditOpts audit;
  auto* audit_cmd = app.add_subcommand("audit", "Chain maxima, d=4 sub-claim and the odd auxiliary expression");
  audit_cmd->add_option("--dims", audit.dims, "A:B[:STEP]");
  audit_cmd->add_option("--step", audit.step, "Angle step for the d=4 grid");

  std::vector<std::string> argv_store{"i3322"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (value_cmd->parsed()) return cmd_value(value, out);
    if (classical_cmd->parsed()) return cmd_classical(out);
    if (seesaw_cmd->parsed()) return cmd_seesaw(seesaw_o, out);
    if (nf_cmd->parsed()) return cmd_normal_form(nf, out);
    if (norm_cmd->parsed()) return cmd_normalize(norm, out);
    if (bounds_cmd->parsed()) return cmd_bounds(bounds_o, out);
    if (cert_cmd->parsed()) return cmd_certify(cert, out);
    if (cross_cmd->parsed()) return cmd_crosscheck(cross, out);
    if (scan_cmd->parsed()) return cmd_scan(scan, out);
    if (audit_cmd->parsed()) return cmd_audit(audit, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace i3322

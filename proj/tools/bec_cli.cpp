// Command-line front end: spectrum, winding, edge, scan, modes, deform, verify, phase-diagram.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bec/companion.hpp"
#include "bec/fixtures.hpp"
#include "bec/halfspace.hpp"
#include "bec/io.hpp"
#include "bec/loop.hpp"
#include "bec/spectrum.hpp"
#include "bec/verify.hpp"
#include "bec/winding.hpp"

#ifndef BEC_VERSION
#define BEC_VERSION "0.0.0"
#endif

namespace {

using namespace bec;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Options {
  std::string model_path;
  std::string fixture;
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
  int cells = 0;
  int samples = 512;
  Tolerances tol;

  // Subcommand specific.
  std::optional<double> energy;
  std::optional<double> lo, hi;
  std::string gap_json;
  std::string curve_csv;
  std::string surface_csv;
  std::string grid = "64x64";
  std::string ensemble;
  double gap_floor = 0.05;
  double coefficient_scale = 1.0;
};

/// A resolved model source with its provenance for the output metadata.
struct Input {
  std::string label;
  std::string sha256;
  ModelParams model;
  std::optional<ChiralModel> chiral;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad number '" + item + "' in " + what);
    }
  }
  return out;
}

/// dimerized-plus | dimerized-minus | dimerized-trivial | ssh:t1,t2 | appendixB:theta
ChiralModel fixture_model(const std::string& name) {
  if (name == "dimerized-plus") return fixtures::dimerized_plus();
  if (name == "dimerized-minus") return fixtures::dimerized_minus();
  if (name == "dimerized-trivial") return fixtures::dimerized_trivial();
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);
  if (head == "ssh") {
    const auto t = parse_numbers(args, name);
    if (t.size() != 2) throw Error(ErrorCode::ParseError, "ssh fixture needs ssh:t1,t2");
    return fixtures::ssh(t[0], t[1]);
  }
  if (head == "appendixB") {
    const auto t = parse_numbers(args.empty() ? "0" : args, name);
    if (t.size() != 1) throw Error(ErrorCode::ParseError, "appendixB fixture needs appendixB:theta");
    return fixtures::appendix_b(t[0]);
  }
  throw Error(ErrorCode::ParseError, "unknown fixture '" + name + "'");
}

Input resolve_input(const Options& opt) {
  if (!opt.model_path.empty() && !opt.fixture.empty())
    throw Error(ErrorCode::ParseError, "give either a model file or --fixture, not both");
  if (!opt.fixture.empty()) {
    ChiralModel cm = fixture_model(opt.fixture);
    return Input{"fixture:" + opt.fixture, sha256_hex("fixture:" + opt.fixture), cm.base(), cm};
  }
  if (opt.model_path.empty()) throw Error(ErrorCode::ParseError, "no model file or --fixture given");
  const std::string text = read_file(opt.model_path);
  ModelFile file = parse_model(text, opt.tol);
  Input in{opt.model_path, sha256_hex(text), file.model, std::nullopt};
  if (file.grading) in.chiral = chiral_model(file, opt.tol);
  return in;
}

const ChiralModel& require_chiral(const Input& in) {
  if (!in.chiral) throw Error(ErrorCode::ValidationError, "this subcommand needs a chiral model (add \"grading\")");
  return *in.chiral;
}

Json metadata(const Options& opt, const std::string& label, const std::string& sha) {
  Json m;
  m["tool"] = "bec_cli";
  m["version"] = BEC_VERSION;
  m["input"] = label;
  m["input_sha256"] = sha;
  m["seed"] = opt.seed;
  m["tolerances"] = tolerances_to_json(opt.tol);
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

/// CSV with '#' metadata lines followed by the header row.
class Csv {
 public:
  Csv(const Json& meta, const std::vector<std::string>& header) {
    for (auto it = meta.begin(); it != meta.end(); ++it) os_ << "# " << it.key() << ": " << it.value().dump() << "\n";
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::string fmt(double x) { return format_double(x); }

Json edge_json(const EdgeReport& r) {
  Json j;
  j["method"] = std::string(to_string(r.method));
  j["dim_ker_pm"] = r.dim_ker_pm;
  j["dim_ker_mp"] = r.dim_ker_mp;
  j["edge_index"] = r.edge_index;
  j["singular_values_near_zero"] = r.singular_values_near_zero;
  if (r.method != EdgeMethod::Companion) j["truncation_cells"] = r.truncation_cells;
  j["localization_lengths"] = r.localization_lengths;
  if (r.dim_down_plus) j["dim_down_plus"] = *r.dim_down_plus;
  if (r.dim_down_minus) j["dim_down_minus"] = *r.dim_down_minus;
  return j;
}

Json gap_json(const GapReport& g) {
  Json j;
  j["gapped"] = g.gapped;
  j["gap_index"] = g.gap_index ? Json(*g.gap_index) : Json(nullptr);
  j["e_minus"] = g.e_minus;
  j["e_plus"] = g.e_plus;
  j["certificate_margin"] = g.certificate_margin;
  j["certified_minus"] = g.certified_minus;
  j["certified_plus"] = g.certified_plus;
  j["num_k"] = g.num_k;
  return j;
}

Json winding_json(const WindingResult& w) {
  Json j;
  j["winding"] = w.winding;
  j["method_phase"] = w.method_phase;
  j["method_roots"] = w.method_roots ? Json(*w.method_roots) : Json(nullptr);
  j["samples_used"] = w.samples_used;
  j["min_abs_det"] = w.min_abs_det;
  return j;
}

// ---------------------------------------------------------------- subcommands

int run_spectrum(const Options& opt) {
  const Input in = resolve_input(opt);
  const BandStructure bands = band_structure(in.model, opt.samples, opt.threads);
  const GapReport gap = detect_gap(bands, opt.energy);
  Json meta = metadata(opt, in.label, in.sha256);
  meta["gap"] = gap_json(gap);
  std::vector<std::string> header{"k"};
  for (int j = 1; j <= in.model.dim_v(); ++j) header.push_back("E_" + std::to_string(j));
  Csv csv(meta, header);
  for (int i = 0; i < bands.num_k(); ++i) {
    std::vector<std::string> row{fmt(bands.k[static_cast<std::size_t>(i)])};
    const auto& e = bands.energies[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < e.size(); ++j) row.push_back(fmt(e(j)));
    csv.row(row);
  }
  write_text(opt.out, csv.str());
  if (!opt.gap_json.empty()) {
    Json j = metadata(opt, in.label, in.sha256);
    j["gap"] = gap_json(gap);
    write_json(opt.gap_json, j);
  }
  return kExitOk;
}

int run_winding(const Options& opt) {
  const Input in = resolve_input(opt);
  const ChiralModel& cm = require_chiral(in);
  const WindingResult w = compute_winding(cm, opt.samples, opt.tol);
  Json j = metadata(opt, in.label, in.sha256);
  j.update(winding_json(w));
  write_json(opt.out, j);
  if (!opt.curve_csv.empty()) {
    Csv csv(metadata(opt, in.label, in.sha256), {"k", "re_det", "im_det"});
    for (int i = 0; i < opt.samples; ++i) {
      const double k = 2.0 * M_PI * i / opt.samples;
      const cplx d = cm.h_pm(unit(k)).determinant();
      csv.row({fmt(k), fmt(d.real()), fmt(d.imag())});
    }
    write_text(opt.curve_csv, csv.str());
  }
  return kExitOk;
}

int run_edge(const Options& opt) {
  const Input in = resolve_input(opt);
  Json j = metadata(opt, in.label, in.sha256);
  if (opt.energy && *opt.energy != 0.0) {
    j["energy"] = *opt.energy;
    j["edge_modes"] = edge_mode_count(in.model, *opt.energy, opt.tol);
    write_json(opt.out, j);
    return kExitOk;
  }
  const ChiralModel& cm = require_chiral(in);
  require_chiral_gap(cm);
  const EdgeReport truncated =
      opt.cells > 0 ? edge_modes_truncated(cm, 0.0, opt.cells, opt.tol) : edge_modes_auto(cm, opt.tol);
  j["energy"] = 0.0;
  j["edge_index"] = truncated.edge_index;
  j["truncated"] = edge_json(truncated);
  try {
    j["companion"] = edge_json(edge_modes_companion(cm, opt.tol));
  } catch (const Error& e) {
    j["companion"] = Json{{"unavailable", e.what()}};
  }
  write_json(opt.out, j);
  return kExitOk;
}

int run_scan(const Options& opt) {
  const Input in = resolve_input(opt);
  const int cells = opt.cells > 0 ? opt.cells : 100;
  double lo = 0.0, hi = 0.0;
  if (opt.lo && opt.hi) {
    lo = *opt.lo;
    hi = *opt.hi;
  } else {
    const GapReport gap = certify_gap(in.model, opt.energy.value_or(0.0), 512, 1 << 14, opt.threads);
    if (!gap.gapped) throw Error(ErrorCode::GapNotCertified, "no certified band gap around the given energy");
    const double delta = 0.05 * (gap.e_plus - gap.e_minus);
    lo = opt.lo.value_or(gap.e_minus + delta);
    hi = opt.hi.value_or(gap.e_plus - delta);
  }
  const auto states = in.chiral ? in_gap_scan(*in.chiral, cells, lo, hi, opt.tol)
                                : in_gap_scan(in.model, cells, lo, hi, opt.tol);
  Json meta = metadata(opt, in.label, in.sha256);
  meta["cells"] = cells;
  meta["window"] = Json::array({lo, hi});
  Csv csv(meta, {"energy", "side", "localization_length"});
  for (const auto& s : states) csv.row({fmt(s.energy), std::string(to_string(s.side)), fmt(s.localization_length)});
  write_text(opt.out, csv.str());
  return kExitOk;
}

int run_modes(const Options& opt) {
  const Input in = resolve_input(opt);
  const double energy = opt.energy.value_or(0.0);
  const CompanionMatrix c = build_companion(in.model, energy, opt.tol);
  const CompanionSplit split = spectral_split(c, opt.tol);
  Json j = metadata(opt, in.label, in.sha256);
  j["energy"] = energy;
  j["companion_size"] = c.size();
  Json clusters = Json::array();
  for (const auto& cl : split.clusters) {
    const double mod = std::abs(cl.value);
    const std::string cls = mod < 1.0 - opt.tol.unit_circle   ? "decrease"
                            : mod > 1.0 + opt.tol.unit_circle ? "increase"
                                                              : "bloch";
    clusters.push_back(Json{{"value", complex_to_json(cl.value)},
                            {"modulus", mod},
                            {"multiplicity", cl.multiplicity},
                            {"class", cls}});
  }
  j["eigenvalues"] = clusters;
  j["dim_down"] = split.dim_down();
  j["dim_bloch"] = split.dim_bloch();
  j["dim_up"] = split.dim_up();
  j["duality"] = duality_check(split, opt.tol);
  std::vector<cplx> probes;
  for (int i = 0; i < 8; ++i) probes.push_back(std::polar(1.5, 0.7 + 0.8 * i));
  j["char_poly_residual"] = char_poly_residual(c, probes);
  try {
    j["edge_modes"] = edge_mode_count(in.model, energy, opt.tol);
  } catch (const Error& e) {
    j["edge_modes"] = Json{{"unavailable", e.what()}};
  }
  write_json(opt.out, j);
  return kExitOk;
}

int run_deform(const Options& opt) {
  const Input in = resolve_input(opt);
  const ChiralModel& cm = require_chiral(in);
  const DeformationResult d = full_deformation(cm, opt.tol);
  Json j = metadata(opt, in.label, in.sha256);
  j["winding"] = d.winding;
  j["half_rank"] = d.half_rank;
  j["certified"] = d.path.certified();
  j["winding_constant"] = d.path.winding_constant();
  j["min_certificate"] = d.path.min_certificate();
  Json stages = Json::array();
  for (const auto& s : d.path.stages)
    stages.push_back(Json{{"description", s.description},
                          {"size", s.size},
                          {"certificate", s.certificate},
                          {"t_samples", s.t_samples},
                          {"k_samples", s.k_samples},
                          {"winding", s.winding}});
  j["stages"] = stages;
  j["endpoint"] = Json{{"count_lambda", d.count_lambda},
                       {"count_inverse", d.count_inverse},
                       {"count_one", d.count_one},
                       {"edge_index", d.endpoint_edge.edge_index}};
  write_json(opt.out, j);
  if (!opt.surface_csv.empty()) {
    // sigma_min on a 17 x 64 (t, k) grid per stage.
    Csv csv(metadata(opt, in.label, in.sha256), {"stage", "t", "k", "sigma_min"});
    for (std::size_t s = 0; s < d.path.stages.size(); ++s)
      for (int it = 0; it <= 16; ++it)
        for (int ik = 0; ik < 64; ++ik) {
          const double t = it / 16.0, k = 2.0 * M_PI * ik / 64;
          csv.row({std::to_string(s), fmt(t), fmt(k), fmt(min_singular_value(d.path.stages[s].at(t, unit(k))))});
        }
    write_text(opt.surface_csv, csv.str());
  }
  return kExitOk;
}

/// All applicable checks on one model, merged into one verdict map.
/// Errors count as failures only for generated models (`capture_errors`); for
/// user input they propagate as input errors.
Json verify_case(const std::string& label, const ChiralModel& cm, int cells, const Tolerances& tol,
                 bool capture_errors, bool& passed) {
  Json c;
  c["label"] = label;
  std::map<std::string, CheckResult> verdicts;
  try {
    VerificationCase v = verify_bec(cm, tol);
    c["winding"] = v.winding ? Json(v.winding->winding) : Json(nullptr);
    c["edge_index"] = v.edge ? Json(v.edge->edge_index) : Json(nullptr);
    c["dim_ker_pm"] = v.edge ? Json(v.edge->dim_ker_pm) : Json(nullptr);
    c["dim_ker_mp"] = v.edge ? Json(v.edge->dim_ker_mp) : Json(nullptr);
    verdicts = v.verdicts;
    for (auto& [k, r] : verify_two_band_strong(cm, tol).verdicts) verdicts[k] = r;
    for (auto& [k, r] : verify_gap_exclusion(cm, cells, tol).verdicts) verdicts[k] = r;
  } catch (const Error& e) {
    if (!capture_errors) throw;
    verdicts["error"] = CheckResult{Verdict::Fail, e.what()};
  }
  Json jv = Json::object();
  for (const auto& [k, r] : verdicts) {
    if (r.verdict == Verdict::Fail) passed = false;
    jv[k] = Json{{"verdict", std::string(to_string(r.verdict))}, {"diagnostics", r.diagnostics}};
  }
  c["verdicts"] = jv;
  return c;
}

int run_verify(const Options& opt) {
  std::vector<std::pair<std::string, ChiralModel>> cases;
  std::string label, sha;
  const bool generated = !opt.ensemble.empty();
  if (generated) {
    const auto v = parse_numbers(opt.ensemble, "--ensemble");
    if (v.size() != 3) throw Error(ErrorCode::ParseError, "--ensemble expects dim_v,range,count");
    EnsembleSpec spec;
    spec.seed = opt.seed;
    spec.dim_v = static_cast<int>(v[0]);
    spec.range = static_cast<int>(v[1]);
    spec.count = static_cast<int>(v[2]);
    spec.gap_floor = opt.gap_floor;
    spec.coefficient_scale = opt.coefficient_scale;
    if (spec.dim_v < 2 || spec.dim_v % 2 || spec.range < 1 || spec.count < 1)
      throw Error(ErrorCode::ParseError, "--ensemble needs an even dim_v >= 2, range >= 1, count >= 1");
    std::ostringstream os;
    os << "ensemble:dim_v=" << spec.dim_v << ",range=" << spec.range << ",count=" << spec.count
       << ",scale=" << format_double(spec.coefficient_scale) << ",gap_floor=" << format_double(spec.gap_floor);
    label = os.str();
    sha = sha256_hex(label);
    const auto members = random_chiral_ensemble(spec, opt.threads);
    for (std::size_t i = 0; i < members.size(); ++i) cases.emplace_back("model " + std::to_string(i), members[i].model);
  } else if (opt.fixture == "dimerized-all") {
    label = "fixture:dimerized-all";
    sha = sha256_hex(label);
    cases.emplace_back("dimerized-plus", fixtures::dimerized_plus());
    cases.emplace_back("dimerized-minus", fixtures::dimerized_minus());
    cases.emplace_back("dimerized-trivial", fixtures::dimerized_trivial());
  } else {
    const Input in = resolve_input(opt);
    label = in.label;
    sha = in.sha256;
    cases.emplace_back(in.label, require_chiral(in));
  }

  const int cells = opt.cells > 0 ? opt.cells : 100;
  std::vector<Json> results(cases.size());
  std::vector<char> ok(cases.size(), 1);
  parallel_for(cases.size(), opt.threads, [&](std::size_t i) {
    bool p = true;
    results[i] = verify_case(cases[i].first, cases[i].second, cells, opt.tol, generated, p);
    ok[i] = p;
  });

  Json j = metadata(opt, label, sha);
  int npass = 0;
  for (char c : ok) npass += c;
  j["cases"] = results;
  j["summary"] = Json{{"cases", cases.size()}, {"passed", npass}, {"failed", cases.size() - npass}};
  j["passed"] = npass == static_cast<int>(cases.size());
  write_json(opt.out, j);
  return npass == static_cast<int>(cases.size()) ? kExitOk : kExitFailed;
}

int run_phase_diagram(const Options& opt) {
  if (opt.model_path.empty()) throw Error(ErrorCode::ParseError, "phase-diagram needs a family file");
  const std::string text = read_file(opt.model_path);
  const ModelFamily fam = parse_family(text);
  int n1 = 0, n2 = 0;
  char x = 0, extra = 0;
  std::istringstream gs(opt.grid);
  if (!(gs >> n1 >> x >> n2) || x != 'x' || gs >> extra || n1 < 2 || n2 < 2)
    throw Error(ErrorCode::ParseError, "--grid expects N1xN2 with N1, N2 >= 2");

  struct Point {
    double p1, p2, margin;
    std::optional<int> winding, edge;
  };
  std::vector<Point> pts(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  parallel_for(pts.size(), opt.threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n2, k = static_cast<int>(idx) % n2;
    Point& p = pts[idx];
    p.p1 = fam.param1.min + (fam.param1.max - fam.param1.min) * i / (n1 - 1);
    p.p2 = fam.param2.min + (fam.param2.max - fam.param2.min) * k / (n2 - 1);
    const ChiralModel cm = fam.at(p.p1, p.p2, opt.tol);
    const ChiralGapCertificate cert = certify_chiral_gap(cm);
    p.margin = cert.sampled_margin;
    if (!cert.certified()) return;
    try {
      p.winding = compute_winding(cm, 512, opt.tol).winding;
      p.edge = edge_modes_auto(cm, opt.tol).edge_index;
    } catch (const Error&) {
      // Gapless within numerical resolution; reported as NA.
    }
  });

  Json meta = metadata(opt, opt.model_path, sha256_hex(text));
  meta["grid"] = opt.grid;
  Csv csv(meta, {fam.param1.name, fam.param2.name, "W", "edge_index", "gap_margin"});
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("NA"); };
  for (const auto& p : pts) csv.row({fmt(p.p1), fmt(p.p2), opt_int(p.winding), opt_int(p.edge), fmt(p.margin)});
  write_text(opt.out, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bulk-edge correspondence toolkit for 1D chiral tight-binding models"};
  app.set_version_flag("--version", BEC_VERSION);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model,--model", opt.model_path, "Model file (JSON)");
    sub->add_option("--fixture", opt.fixture,
                    "Built-in model: dimerized-plus, dimerized-minus, dimerized-trivial, ssh:t1,t2, appendixB:theta");
    sub->add_option("--out,-o", opt.out, "Output file (default stdout)");
    sub->add_option("--seed", opt.seed, "Seed recorded in the metadata and used by random ensembles");
    sub->add_option("--threads", opt.threads, "Worker threads (does not change the output)")->check(CLI::PositiveNumber);
    sub->add_option("--cells", opt.cells, "Truncation length N")->check(CLI::NonNegativeNumber);
    sub->add_option("--samples", opt.samples, "Brillouin-zone samples")->check(CLI::Range(8, 1 << 20));
    for (const auto& f : tolerance_names())
      sub->add_option("--tol." + std::string(f.name), opt.tol.*(f.member), "Tolerance override")
          ->check(CLI::PositiveNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Band structure CSV (k, E_1..E_d) and gap report");
  add_common(spectrum);
  spectrum->add_option("--energy", opt.energy, "Select the gap containing this energy");
  spectrum->add_option("--gap-json", opt.gap_json, "Also write the gap report as JSON");

  auto* winding = app.add_subcommand("winding", "Winding number of det h_{+-}");
  add_common(winding);
  winding->add_option("--curve", opt.curve_csv, "CSV dump of det h_{+-}(e^{ik})");

  auto* edge = app.add_subcommand("edge", "Edge-mode report of the half-space Hamiltonian");
  add_common(edge);
  edge->add_option("--energy", opt.energy, "Energy (default 0; nonzero uses the companion count)");

  auto* scan = app.add_subcommand("scan", "In-gap eigenvalues of the truncated half-space Hamiltonian");
  add_common(scan);
  scan->add_option("--energy", opt.energy, "Energy inside the gap to scan (default 0)");
  scan->add_option("--lo", opt.lo, "Lower end of the window");
  scan->add_option("--hi", opt.hi, "Upper end of the window");

  auto* modes = app.add_subcommand("modes", "Companion-matrix spectrum and mode splitting at an energy");
  add_common(modes);
  modes->add_option("--energy", opt.energy, "Energy (default 0)");

  auto* deform = app.add_subcommand("deform", "Certified deformation of h_{+-} to a diagonal loop");
  add_common(deform);
  deform->add_option("--surface", opt.surface_csv, "CSV of sigma_min over a (t, k) grid per stage");

  auto* verify = app.add_subcommand("verify", "Theorem-level checks on a model, fixture or random ensemble");
  add_common(verify);
  verify->add_option("--ensemble", opt.ensemble, "Random ensemble dim_v,range,count (uses --seed)");
  verify->add_option("--gap-floor", opt.gap_floor, "Ensemble gap floor")->check(CLI::PositiveNumber);
  verify->add_option("--scale", opt.coefficient_scale, "Ensemble coefficient scale")->check(CLI::PositiveNumber);

  auto* phase = app.add_subcommand("phase-diagram", "W and edge index over a two-parameter family");
  add_common(phase);
  phase->add_option("--grid", opt.grid, "Grid size N1xN2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(opt);
    if (winding->parsed()) return run_winding(opt);
    if (edge->parsed()) return run_edge(opt);
    if (scan->parsed()) return run_scan(opt);
    if (modes->parsed()) return run_modes(opt);
    if (deform->parsed()) return run_deform(opt);
    if (verify->parsed()) return run_verify(opt);
    if (phase->parsed()) return run_phase_diagram(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

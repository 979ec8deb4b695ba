#include "peelkit/construction.hpp"
#include "peelkit/partition.hpp"
#include "peelkit/peeling.hpp"
#include "peelkit/pointset_io.hpp"
#include "peelkit/report_io.hpp"
#include "peelkit/svg.hpp"
#include "peelkit/verifier.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace {

// 0 = success / all hold, 1 = a check failed, 2 = usage or parse error,
// 3 = undecided at the working precision.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUndecided = 3;

struct RunReport {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  long long elapsed_ms = 0;
  std::optional<uint64_t> seed;

  // timings go to stderr so files and stdout stay byte-reproducible
  void emit() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["timings"] = {{"elapsed_ms", elapsed_ms}};
    if (seed) j["seed"] = *seed;
    std::cerr << j.dump() << "\n";
  }
};

class Stopwatch {
 public:
  long long ms() const {
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format_count(double v) {
  double r = std::round(v);
  if (std::abs(v - r) < 1e-9 && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", r);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (cur.empty()) throw std::invalid_argument("bad sequence literal");
      out.push_back(std::stoi(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  if (out.empty()) throw std::invalid_argument("empty sequence");
  return out;
}

int run_construct(const std::string& kind, int n, int ray, const std::string& out_path,
                  const std::string& svg_path, bool unflattened, long spacing,
                  const std::string& flatten_text, int trials, uint64_t seed) {
  Stopwatch sw;
  peelkit::ConstructionParams prm;
  if (spacing > 0) prm.spacing = spacing;
  if (!flatten_text.empty()) prm.flatten = peelkit::parse_fraction(flatten_text);
  prm.self_check_trials = trials;
  prm.self_check_seed = seed;
  if (unflattened) {
    // display mode mirrors the construction before the flattening step; the
    // validator is intentionally skipped because those invariants only hold
    // after flattening
    prm.flatten = 1;
    prm.self_check = false;
  }

  peelkit::BuildResult built = kind == "s" ? peelkit::build_s(n, prm)
                                           : peelkit::build_b(n, ray, prm);

  int exit_code = kExitOk;
  if (!unflattened) {
    peelkit::StructureReport rep =
        peelkit::validate_structure(built.set, built.node, prm.self_check_trials, prm.self_check_seed);
    if (!rep.all_ok()) {
      std::cerr << "validator failed:\n";
      for (const auto& f : rep.failures) std::cerr << "  " << f << "\n";
      exit_code = kExitCheckFailed;
    }
  }

  RunReport report;
  report.command = "construct";
  report.seed = seed;

  std::string json_text = peelkit::dump_json(peelkit::point_set_to_json(built.set));
  if (out_path.empty()) {
    std::cout << json_text;
  } else {
    peelkit::spew_file(out_path, json_text);
    report.outputs.push_back(out_path);
  }

  if (!svg_path.empty()) {
    peelkit::SvgOptions so;
    so.guide_rays = unflattened;  // ray guide-lines belong to the unflattened view
    peelkit::spew_file(svg_path, peelkit::render_svg(built.set, &built.node, so));
    report.outputs.push_back(svg_path);
  }

  std::cerr << "constructed " << (kind == "s" ? "S_" : "B_") << n << ": " << built.set.size()
            << " points, " << built.retries << " retries\n";
  report.elapsed_ms = sw.ms();
  report.emit();
  return exit_code;
}

int run_count(const std::string& in_path, bool do_enumerate, uint64_t limit, bool do_estimate,
              uint64_t samples, uint64_t seed, int threads, int max_n) {
  Stopwatch sw;
  peelkit::PointSet s = peelkit::read_point_set_file(in_path);
  RunReport report;
  report.command = "count";
  report.inputs.push_back(in_path);

  if (do_estimate) {
    peelkit::Estimate e = peelkit::estimate_peelings(s, samples, seed);
    report.seed = seed;
    std::cout << format_count(e.mean) << " \xc2\xb1 " << format_count(e.std_error) << "\n";
  } else {
    peelkit::PeelOptions opt;
    opt.max_exact_n = max_n;
    opt.threads = threads > 0 ? threads
                              : std::max(1u, std::thread::hardware_concurrency());
    peelkit::PeelCount g = peelkit::count_peelings(s, opt);
    std::cout << g.get_str() << "\n";
    if (do_enumerate) {
      uint64_t emitted = 0;
      peelkit::for_each_peeling(s, [&](const std::vector<int>& seq) {
        for (std::size_t i = 0; i < seq.size(); ++i)
          std::cout << (i ? " " : "") << seq[i];
        std::cout << "\n";
        ++emitted;
        return limit == 0 || emitted < limit;
      });
    }
  }
  report.elapsed_ms = sw.ms();
  report.emit();
  return kExitOk;
}

int run_check_sequence(const std::string& in_path, const std::string& seq_text) {
  Stopwatch sw;
  peelkit::PointSet s = peelkit::read_point_set_file(in_path);
  std::vector<int> seq = parse_id_list(seq_text);
  bool ok = peelkit::is_peeling_sequence(s, seq);
  std::cout << (ok ? "valid peeling sequence" : "not a peeling sequence") << "\n";
  RunReport report;
  report.command = "check-sequence";
  report.inputs.push_back(in_path);
  report.elapsed_ms = sw.ms();
  report.emit();
  return ok ? kExitOk : kExitCheckFailed;
}

int run_simplified(const std::string& in_path, const std::string& partition_path, bool by_rays,
                   int threads) {
  Stopwatch sw;
  peelkit::PointSet s = peelkit::read_point_set_file(in_path);
  peelkit::Partition p =
      by_rays ? peelkit::partition_by_rays(s) : peelkit::read_partition_file(partition_path);
  peelkit::validate_partition(s, p);

  std::cout << "n: " << s.size() << ", parts:";
  for (const auto& part : p.parts) std::cout << " " << part.size();
  std::cout << "\n";

  peelkit::BigInt simplified = peelkit::count_simplified(s, p);
  std::cout << "simplified sequences: " << simplified.get_str() << "\n";

  peelkit::PeelOptions opt;
  opt.threads = threads > 0 ? threads : 1;
  std::vector<peelkit::BigInt> per_part;
  for (const auto& part : p.parts)
    per_part.push_back(peelkit::count_peelings(peelkit::subset_by_ids(s, part), opt));
  std::cout << "per-part counts:";
  for (const auto& c : per_part) std::cout << " " << c.get_str();
  std::cout << "\n";
  std::cout << "multinomial bound: " << peelkit::multinomial_bound(p, per_part).get_str() << "\n";

  peelkit::DecompositionCheck dc = peelkit::check_decomposition(s, p, opt);
  std::cout << "decomposition: g = " << dc.lhs.get_str() << " <= " << dc.rhs.get_str() << " : "
            << (dc.holds ? "holds" : "FAILS") << "\n";

  RunReport report;
  report.command = "simplified";
  report.inputs.push_back(in_path);
  if (!partition_path.empty()) report.inputs.push_back(partition_path);
  report.elapsed_ms = sw.ms();
  report.emit();
  return dc.holds ? kExitOk : kExitCheckFailed;
}

int run_verify_lemmas(int nmax, long precision, const std::string& json_path, RunReport& report) {
  long checked = 0, held = 0;
  bool undecided = false;

  long entropy_checked = 0, entropy_held = 0;
  for (long n = 1; n <= nmax; ++n) {
    for (long k = 0; 2 * k <= n; ++k) {
      ++entropy_checked;
      try {
        if (peelkit::check_entropy_bound(n, peelkit::Rational(k, n), precision)) ++entropy_held;
      } catch (const std::runtime_error&) {
        undecided = true;
      }
    }
  }
  std::cout << "entropy bound: " << entropy_held << "/" << entropy_checked << " hold (n <= "
            << nmax << ")\n";

  long ratio_checked = 0, ratio_held = 0;
  const long ratio_nmax = std::min<long>(nmax, 40);
  for (long n = 1; n <= ratio_nmax; ++n) {
    for (long l = 1; l <= 6; ++l) {
      for (long q = 1; q <= 27; ++q) {
        // k = a/q in [n/(l+1), n], reduced fractions only
        long a_lo = static_cast<long>(peelkit::ceil_of(peelkit::Rational(n * q, l + 1)).get_si());
        for (long a = a_lo; a <= n * q; ++a) {
          if (std::gcd(a, q) != 1) continue;
          ++ratio_checked;
          if (peelkit::check_ratio_lemma(n, peelkit::Rational(a, q), l)) ++ratio_held;
        }
      }
    }
  }
  std::cout << "ratio lemma: " << ratio_held << "/" << ratio_checked << " hold (n <= " << ratio_nmax
            << ", denominators <= 27, l <= 6)\n";

  long half_checked = 0, half_held = 0, seventh_checked = 0, seventh_held = 0;
  for (long n = 1; n <= nmax; ++n) {
    auto row = peelkit::check_seventh_bound_detail(n);
    ++half_checked;
    if (row.half) ++half_held;
    if (row.seventh) {
      ++seventh_checked;
      if (*row.seventh) ++seventh_held;
    }
  }
  std::cout << "seventh bound: half " << half_held << "/" << half_checked << " hold (n <= " << nmax
            << "); seventh " << seventh_held << "/" << seventh_checked << " hold (36 <= n <= "
            << nmax << ")\n";

  checked = entropy_checked + ratio_checked + half_checked + seventh_checked;
  held = entropy_held + ratio_held + half_held + seventh_held;
  std::cout << "lemmas: " << held << "/" << checked << " hold\n";

  if (!json_path.empty()) {
    nlohmann::json j;
    j["entropy"] = {{"checked", entropy_checked}, {"held", entropy_held}};
    j["ratio"] = {{"checked", ratio_checked}, {"held", ratio_held}};
    j["seventh"] = {{"half_checked", half_checked},
                    {"half_held", half_held},
                    {"seventh_checked", seventh_checked},
                    {"seventh_held", seventh_held}};
    j["all_hold"] = held == checked && !undecided;
    peelkit::spew_file(json_path, peelkit::dump_json(j));
    report.outputs.push_back(json_path);
  }
  if (undecided) return kExitUndecided;
  return held == checked ? kExitOk : kExitCheckFailed;
}

int run_verify(const std::string& target, int nmax, long precision, const std::string& json_path,
               int threads) {
  Stopwatch sw;
  RunReport report;
  report.command = "verify " + target;
  int code = kExitOk;

  if (target == "lemmas") {
    code = run_verify_lemmas(nmax, precision, json_path, report);
  } else if (target == "base-cases") {
    auto rows = peelkit::base_case_check();
    std::cout << peelkit::render_base_case_table(rows);
    long held = 0;
    for (const auto& r : rows)
      if (r.holds) ++held;
    std::cout << held << "/" << rows.size() << " hold\n";
    if (!json_path.empty()) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) j.push_back(peelkit::base_case_row_to_json(r));
      peelkit::spew_file(json_path, peelkit::dump_json(j));
      report.outputs.push_back(json_path);
    }
    code = held == static_cast<long>(rows.size()) ? kExitOk : kExitCheckFailed;
  } else if (target == "certificate") {
    peelkit::CertificateReport rep = peelkit::check_case_conditions(precision);
    rep.lemma_checks = peelkit::check_exponent_constants(precision);
    std::cout << "exponent constants (13):\n"
              << peelkit::render_case_condition_table(rep.lemma_checks) << "\n";
    std::cout << peelkit::render_certificate(rep);
    long held = 0, total = 0;
    bool undecided = false;
    auto tally = [&](const std::vector<peelkit::CaseCondition>& v) {
      for (const auto& c : v) {
        ++total;
        if (c.verdict == peelkit::Verdict::holds) ++held;
        if (c.verdict == peelkit::Verdict::undecided) undecided = true;
      }
    };
    tally(rep.case_conditions);
    tally(rep.coefficient_values);
    tally(rep.sums);
    std::cout << held << "/" << total << " hold (13 conditions + 13 coefficients + 2 sums)\n";
    for (const auto& c : rep.lemma_checks) {
      if (c.verdict != peelkit::Verdict::holds) {
        if (c.verdict == peelkit::Verdict::undecided) undecided = true;
        held = -1;  // exponent-constant failure poisons the verdict
      }
    }
    if (!json_path.empty()) {
      peelkit::spew_file(json_path, peelkit::dump_json(peelkit::certificate_to_json(rep)));
      report.outputs.push_back(json_path);
    }
    if (undecided) {
      std::cerr << "some checks are undecided at " << precision
                << " bits; retry with a higher --precision\n";
      code = kExitUndecided;
    } else {
      code = (held == total && rep.overall) ? kExitOk : kExitCheckFailed;
    }
  } else if (target == "theorem") {
    peelkit::PeelOptions opt;
    opt.threads = threads > 0 ? threads : 1;
    opt.max_exact_n = std::max(opt.max_exact_n, nmax);
    auto rows = peelkit::empirical_theorem_check(nmax, {}, opt);
    std::cout << peelkit::render_theorem_table(rows);
    bool all = true;
    for (const auto& r : rows) all = all && r.holds;
    std::cout << (all ? "all rows hold" : "SOME ROWS FAIL") << "\n";
    if (!json_path.empty()) {
      peelkit::spew_file(json_path, peelkit::dump_json(peelkit::theorem_table_to_json(rows)));
      report.outputs.push_back(json_path);
    }
    code = all ? kExitOk : kExitCheckFailed;
  } else {
    throw std::invalid_argument("unknown verify target: " + target);
  }

  report.elapsed_ms = sw.ms();
  report.emit();
  return code;
}

int run_render(const std::string& in_path, const std::string& out_path, bool hull, bool labels) {
  Stopwatch sw;
  peelkit::PointSet s = peelkit::read_point_set_file(in_path);
  peelkit::SvgOptions so;
  so.draw_hull = hull;
  so.labels = labels;
  so.guide_rays = false;  // no construction tree is available from a bare file
  peelkit::spew_file(out_path, peelkit::render_svg(s, nullptr, so));
  RunReport report;
  report.command = "render";
  report.inputs.push_back(in_path);
  report.outputs.push_back(out_path);
  report.elapsed_ms = sw.ms();
  report.emit();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peelkit: recursive planar constructions and convex-layer peeling sequences"};
  app.require_subcommand(1);

  // construct
  std::string c_kind;
  int c_n = 0, c_ray = 1, c_trials = 200;
  std::string c_out, c_svg, c_flatten;
  long c_spacing = 0;
  bool c_unflattened = false;
  uint64_t c_seed = 12345;
  auto* construct = app.add_subcommand("construct", "build S_n or B_n and validate it");
  construct->add_option("kind", c_kind, "family: s or b")
      ->required()
      ->check(CLI::IsMember({"s", "b"}));
  construct->add_option("--n", c_n, "number of points")->required();
  construct->add_option("--ray", c_ray, "ray whose smallest subrays are removed (b only)")
      ->check(CLI::Range(1, 3));
  construct->add_option("--out", c_out, "output point-set JSON (stdout when omitted)");
  construct->add_option("--svg", c_svg, "also render an SVG figure");
  construct->add_flag("--unflattened", c_unflattened,
                      "display mode: skip the flattening step and draw ray guide-lines");
  construct->add_option("--spacing", c_spacing, "ray spacing sigma (default 4)");
  construct->add_option("--flatten", c_flatten, "flattening factor as p/q (default 1/64)");
  construct->add_option("--trials", c_trials, "random peel trials in the validator");
  construct->add_option("--seed", c_seed, "validator RNG seed");

  // count
  std::string n_in;
  bool n_enum = false, n_est = false;
  uint64_t n_limit = 0, n_samples = 10000, n_seed = 1;
  int n_threads = 0, n_maxn = 24;
  auto* count = app.add_subcommand("count", "count (or estimate) peeling sequences of a point set");
  count->add_option("--in", n_in, "point-set JSON")->required();
  count->add_flag("--enumerate", n_enum, "also stream the sequences");
  count->add_option("--limit", n_limit, "stop streaming after this many (0 = all)");
  count->add_flag("--estimate", n_est, "Monte Carlo estimate instead of exact count");
  count->add_option("--samples", n_samples, "estimator sample count");
  count->add_option("--seed", n_seed, "estimator RNG seed");
  count->add_option("--threads", n_threads, "worker threads for exact counting (0 = all cores)");
  count->add_option("--max-n", n_maxn, "exact-count size cap");

  // check-sequence
  std::string q_in, q_seq;
  auto* checkseq = app.add_subcommand("check-sequence", "test whether an id list is a peeling sequence");
  checkseq->add_option("--in", q_in, "point-set JSON")->required();
  checkseq->add_option("--seq", q_seq, "comma-separated ids, e.g. 3,1,2")->required();

  // simplified
  std::string s_in, s_partition;
  bool s_by_rays = false;
  int s_threads = 0;
  auto* simplified =
      app.add_subcommand("simplified", "simplified (projected) sequence counts and the decomposition bound");
  simplified->add_option("--in", s_in, "point-set JSON")->required();
  auto* s_popt = simplified->add_option("--partition", s_partition, "partition JSON (list of id lists)");
  auto* s_ropt = simplified->add_flag("--by-rays", s_by_rays, "partition by top-level ray");
  s_popt->excludes(s_ropt);
  simplified->add_option("--threads", s_threads, "worker threads for exact counting");

  // verify
  std::string v_target, v_json;
  int v_nmax = 0;
  long v_precision = 0;
  int v_threads = 0;
  auto* verify = app.add_subcommand("verify", "machine-check the lemmas, base cases, certificate, or theorem");
  verify->add_option("target", v_target, "lemmas | base-cases | certificate | theorem")
      ->required()
      ->check(CLI::IsMember({"lemmas", "base-cases", "certificate", "theorem"}));
  verify->add_option("--nmax", v_nmax, "row limit (theorem: default 12; lemmas: default 64)");
  verify->add_option("--precision", v_precision, "interval precision in bits");
  verify->add_option("--json", v_json, "also write the report as JSON");
  verify->add_option("--threads", v_threads, "worker threads for exact counting");

  // render
  std::string r_in, r_out;
  bool r_hull = false, r_nolabels = false;
  auto* render = app.add_subcommand("render", "render a point-set JSON as SVG");
  render->add_option("--in", r_in, "point-set JSON")->required();
  render->add_option("--out", r_out, "output SVG path")->required();
  render->add_flag("--hull", r_hull, "draw the convex hull");
  render->add_flag("--no-labels", r_nolabels, "omit id labels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*construct)
      return run_construct(c_kind, c_n, c_ray, c_out, c_svg, c_unflattened, c_spacing, c_flatten,
                           c_trials, c_seed);
    if (*count) return run_count(n_in, n_enum, n_limit, n_est, n_samples, n_seed, n_threads, n_maxn);
    if (*checkseq) return run_check_sequence(q_in, q_seq);
    if (*simplified) {
      if (!s_by_rays && s_partition.empty())
        throw std::invalid_argument("one of --partition or --by-rays is required");
      return run_simplified(s_in, s_partition, s_by_rays, s_threads);
    }
    if (*verify) {
      if (v_nmax == 0) v_nmax = v_target == "lemmas" ? 64 : 12;
      if (v_precision == 0) v_precision = peelkit::default_precision_bits();
      return run_verify(v_target, v_nmax, v_precision, v_json, v_threads);
    }
    if (*render) return run_render(r_in, r_out, r_hull, !r_nolabels);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.find("undecided") != std::string::npos) {
      std::cerr << "try a higher --precision\n";
      return kExitUndecided;
    }
    if (msg.find("failed validation") != std::string::npos) return kExitCheckFailed;
    return kExitUsage;
  }
  return kExitUsage;
}

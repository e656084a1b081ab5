#include "pattree_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pattree/basis.hpp"
#include "pattree/enumeration.hpp"
#include "pattree/errors.hpp"
#include "pattree/evaluator.hpp"
#include "pattree/nontrivial.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/permutation.hpp"
#include "pattree/profile.hpp"
#include "pattree/tree_vector.hpp"

namespace pattree::cli {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Brute-force cross-checks are skipped above this many classified subsets.
constexpr double kVerifyLimit = 5e7;

// Reference values of g(s, k) for k = 1..8; the k = 8 entries are beyond what the
// enumerator computes.
const std::map<int, std::vector<long>> kExpectedRanks = {
    {1, {1, 2, 6, 23, 100, 463, 2323, 12173}},
    {2, {1, 2, 6, 24, 120, 720, 5040, 40319}},
};

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    buf << f.rdbuf();
  }
  return buf.str();
}

Permutation read_pi(const std::string& path, std::istream& in) {
  std::string text = read_source(path, in);
  // Drop '#' comment lines so generated files can carry a header.
  std::string body;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    body += line;
    body += ' ';
  }
  return parse_permutation(body);
}

double subset_count(int n, int k) {
  if (k > n) return 0;
  double c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

Json integer_json(const Integer& v) {
  if (v.fits_int64()) return v.to_int64();
  return v.to_string();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void check_format(const std::string& format) {
  if (format != "tsv" && format != "json") throw UsageError("--format must be tsv or json");
}

// Patterns of each layer 1..k in lexicographic order.
std::vector<std::pair<Permutation, Integer>> layer_entries(const PatternVector& v, int j, bool all) {
  std::vector<std::pair<Permutation, Integer>> out;
  if (all) {
    for (const auto& tau : all_permutations(j)) out.emplace_back(tau, v.get(tau));
  } else {
    for (const auto& [tau, c] : v.layer(j)) out.emplace_back(tau, c);
  }
  return out;
}

// Checks a profile against profile_brute layer by layer; returns mismatch count.
int verify_profile(const PatternVector& got, const Permutation& pi, int k, std::ostream& err) {
  int bad = 0;
  for (int j = 1; j <= std::min(k, pi.size()); ++j) {
    const PatternVector want = profile_brute(pi, j);
    const PatternVector have = got.layer(j);
    if (want != have) {
      ++bad;
      err << "verify: layer " << j << " differs from brute force\n";
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------
struct CountArgs {
  std::string pi_path;
  std::string pattern;
  std::string tree_path;
  std::string method = "auto";
  std::string basis_dir = "basis-cache";
  std::string format = "tsv";
  int threads = 0;
  int max_vertex_size = 3;
  bool long_run = false;
  bool verify = false;
};

int run_count(const CountArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  check_format(a.format);
  if (a.pattern.empty() == a.tree_path.empty()) throw UsageError("count needs exactly one of --pattern or --tree");
  if (a.pi_path.empty() && !a.tree_path.empty() && a.tree_path == "-") {
    throw UsageError("--pi and --tree cannot both read stdin");
  }

  Integer count;
  std::string used;
  Permutation pi;
  if (!a.tree_path.empty()) {
    if (a.method != "auto" && a.method != "tree") throw UsageError("--tree counts with the tree evaluator only");
    const PatternTree tree = PatternTree::parse(read_source(a.tree_path, in));
    pi = read_pi(a.pi_path, in);
    EvaluateOptions opts;
    opts.max_vertex_size = a.max_vertex_size;
    if (tree.has_gadgets()) {
      count = evaluate_augmented(tree, pi, opts);
      used = "tree-augmented";
    } else {
      count = evaluate(tree, pi, opts);
      used = "tree";
    }
    if (a.verify) {
      const double cost = std::pow(static_cast<double>(pi.size()), tree.total_size());
      if (cost > kVerifyLimit) {
        err << "verify: skipped (input above the brute-force limit)\n";
      } else if (tree_occurrences_brute(tree, pi) != count) {
        err << "verify: tree count differs from brute force\n";
        return kIntegrity;
      }
    }
  } else {
    const Permutation tau = parse_pattern(a.pattern);
    const int k = tau.size();
    // Resolve the method before touching the input.
    std::string m = a.method;
    if (m == "tree") throw UsageError("method tree needs --tree");
    if (m == "auto") m = k <= 7 ? "auto" : (k == 8 ? "generic" : "brute");
    std::optional<ProfileMethod> pm;
    if (m != "brute" && m != "generic") pm = resolve_profile_method(parse_profile_method(m), k);
    pi = read_pi(a.pi_path, in);
    if (k > pi.size()) {
      count = 0;
      used = pm ? std::string(profile_method_name(*pm)) : m;
    } else if (m == "brute") {
      if (subset_count(pi.size(), k) > 1e11) throw GuardError("brute-force count: too many subsets");
      count = count_pattern_brute(tau, pi);
      used = "brute";
    } else if (m == "generic") {
      if (k < 2) throw UsageError("generic needs a pattern of size >= 2");
      const int half = (k + 1) / 2;
      if (std::pow(static_cast<double>(pi.size()), half) > static_cast<double>(GenericOptions{}.max_cost)) {
        throw GuardError("generic: n^ceil(k/2) exceeds the cost limit");
      }
      EvaluateOptions opts;
      opts.max_vertex_size = half;
      count = evaluate(split_tree(tau), pi, opts);
      used = "generic";
    } else {
      ProfileRequest req;
      req.pi = pi;
      req.k = k;
      req.method = *pm;
      req.basis_dir = a.basis_dir;
      req.threads = a.threads;
      req.long_run = a.long_run;
      count = profile(req).get(tau);
      used = profile_method_name(*pm);
    }
    if (a.verify) {
      if (subset_count(pi.size(), k) > kVerifyLimit) {
        err << "verify: skipped (input above the brute-force limit)\n";
      } else if (count_pattern_brute(tau, pi) != count) {
        err << "verify: count differs from brute force\n";
        return kIntegrity;
      }
    }
  }

  if (a.format == "json") {
    Json j;
    j["count"] = integer_json(count);
    j["method"] = used;
    j["n"] = pi.size();
    if (!a.pattern.empty()) j["pattern"] = parse_pattern(a.pattern).to_string();
    out << j.dump(2) << '\n';
  } else {
    out << count << '\t' << used << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------
struct ProfileArgs {
  std::string pi_path;
  int k = 3;
  std::string method = "auto";
  std::string basis_dir = "basis-cache";
  std::string format = "tsv";
  int threads = 0;
  bool long_run = false;
  bool verify = false;
  bool all = false;
};

int run_profile(const ProfileArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  check_format(a.format);
  const ProfileMethod method = resolve_profile_method(parse_profile_method(a.method), a.k);
  ProfileRequest req;
  req.pi = read_pi(a.pi_path, in);
  req.k = a.k;
  req.method = method;
  req.basis_dir = a.basis_dir;
  req.threads = a.threads;
  req.long_run = a.long_run;
  const PatternVector v = profile(req);

  if (a.verify) {
    double cost = 0;
    for (int j = 1; j <= a.k; ++j) cost += subset_count(req.pi.size(), j);
    if (a.k > 10 || cost > kVerifyLimit) {
      err << "verify: skipped (input above the brute-force limit)\n";
    } else if (verify_profile(v, req.pi, a.k, err) != 0) {
      return kIntegrity;
    }
  }

  const int n = req.pi.size();
  if (a.format == "json") {
    Json j;
    j["n"] = n;
    j["k"] = a.k;
    j["method"] = profile_method_name(method);
    Json layers = Json::object();
    for (int s = 1; s <= a.k; ++s) {
      Json layer = Json::object();
      for (const auto& [tau, c] : layer_entries(v, s, a.all)) layer[tau.to_string()] = integer_json(c);
      layers[std::to_string(s)] = std::move(layer);
    }
    j["layers"] = std::move(layers);
    out << j.dump(2) << '\n';
  } else {
    out << "# n=" << n << " k=" << a.k << " method=" << profile_method_name(method) << '\n';
    for (int s = 1; s <= a.k; ++s) {
      for (const auto& [tau, c] : layer_entries(v, s, a.all)) out << tau.to_string() << '\t' << c << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// basis-build / basis-info
// ---------------------------------------------------------------------------
struct BasisArgs {
  int k = 5;
  std::string method = "subquad5";
  std::string basis_dir = "basis-cache";
  std::string file;
  int threads = 0;
  std::uint64_t seed = 1;
  bool long_run = false;
};

void check_basis_k(BasisMethod m, int k) {
  if (k < 1 || k > basis_method_max_k(m)) {
    throw UsageError("method " + std::string(basis_method_name(m)) + " supports k in 1.." +
                     std::to_string(basis_method_max_k(m)));
  }
}

void describe_basis(const BasisArtifact& a, const std::string& where, std::ostream& out) {
  out << "file\t" << where << '\n';
  out << "method\t" << basis_method_name(a.method) << '\n';
  out << "k\t" << a.k << '\n';
  out << "version\t" << a.version << '\n';
  out << "prime\t" << a.prime << '\n';
  out << "side\t" << a.side() << '\n';
  out << "max_vertex_size\t" << a.max_vertex_size() << '\n';
  std::map<int, int> per_layer;
  int gadgets = 0;
  size_t nnz = 0;
  for (const auto& r : a.rows) {
    ++per_layer[r.layer];
    if (r.tree.has_gadgets()) ++gadgets;
  }
  for (const auto& r : a.matrix) nnz += r.size();
  out << "gadget_rows\t" << gadgets << '\n';
  out << "nonzeros\t" << nnz << '\n';
  for (const auto& [j, c] : per_layer) out << "layer_" << j << "_rows\t" << c << '\n';
}

int run_basis_build(const BasisArgs& a, std::ostream& out, std::ostream& err) {
  const BasisMethod m = parse_basis_method(a.method);
  check_basis_k(m, a.k);
  BasisOptions opts;
  opts.long_run = a.long_run;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.progress = [&err](const std::string& msg) { err << msg << '\n'; };
  const auto t0 = Clock::now();
  const BasisArtifact art = build_profile_basis(a.k, m, opts);
  const double secs = seconds_since(t0);
  std::filesystem::create_directories(a.basis_dir);
  const auto file = std::filesystem::path(a.basis_dir) / basis_cache_name(m, a.k);
  save_basis(art, file);
  err << "built " << basis_tag(m, a.k) << " in " << secs << " s\n";
  describe_basis(art, file.string(), out);
  return kOk;
}

int run_basis_info(const BasisArgs& a, std::ostream& out) {
  std::filesystem::path file = a.file;
  if (file.empty()) {
    const BasisMethod m = parse_basis_method(a.method);
    check_basis_k(m, a.k);
    file = std::filesystem::path(a.basis_dir) / basis_cache_name(m, a.k);
  }
  if (!std::filesystem::exists(file)) throw DataError("no artifact at " + file.string());
  describe_basis(load_basis(file), file.string(), out);
  return kOk;
}

// ---------------------------------------------------------------------------
// rank-table
// ---------------------------------------------------------------------------
struct RankArgs {
  std::vector<int> s{1, 2};
  std::vector<int> k;
  std::uint64_t seed = 1;
  bool long_run = false;
  bool no_certify = false;
};

int run_rank_table(const RankArgs& a, std::ostream& out) {
  std::vector<int> ks = a.k;
  if (ks.empty()) {
    for (int k = 1; k <= (a.long_run ? 7 : 6); ++k) ks.push_back(k);
  }
  for (int s : a.s) {
    if (!kExpectedRanks.count(s)) throw UsageError("--s must be 1 or 2");
  }
  for (int k : ks) {
    if (k < 1 || k > 7) throw UsageError("--k must lie in 1..7");
    if (k == 7 && !a.long_run) throw GuardError("k = 7 needs --long-run");
  }
  bool all_pass = true;
  out << "s\tk\trows\tcertified\texpected\trank\tstatus\n";
  for (int s : a.s) {
    for (int k : ks) {
      RankOptions opts;
      opts.long_run = a.long_run;
      opts.seed = a.seed;
      opts.certify = !a.no_certify;
      const RankResult r = family_rank(s, k, opts);
      const long expected = kExpectedRanks.at(s)[static_cast<size_t>(k - 1)];
      const bool pass = r.rank == expected;
      all_pass = all_pass && pass;
      out << s << '\t' << k << '\t' << r.rows_examined << '\t' << (r.certified ? "yes" : "no") << '\t' << expected
          << '\t' << r.rank << '\t' << (pass ? "PASS" : "FAIL") << '\n';
    }
  }
  return all_pass ? kOk : kIntegrity;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------
struct OracleArgs {
  std::uint64_t seed = 1;
  std::vector<int> n{10, 20};
  int count = 10;
  int k = 4;
  std::vector<std::string> methods;
  std::string basis_dir = "basis-cache";
  int threads = 0;
  bool long_run = false;
};

int run_oracle_check(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<ProfileMethod> methods;
  if (a.methods.empty()) {
    for (auto m : {ProfileMethod::corner, ProfileMethod::quad, ProfileMethod::subquad5, ProfileMethod::generic}) {
      const int limit = m == ProfileMethod::generic ? 4 : basis_method_max_k(parse_basis_method(profile_method_name(m)));
      if (a.k <= limit && !(m == ProfileMethod::quad && a.k == 7 && !a.long_run)) methods.push_back(m);
    }
  } else {
    for (const auto& name : a.methods) methods.push_back(resolve_profile_method(parse_profile_method(name), a.k));
  }
  if (a.k < 1 || a.k > 10) throw UsageError("--k must lie in 1..10");
  if (a.count < 1) throw UsageError("--count must be positive");
  for (int n : a.n) {
    if (n < 1) throw UsageError("--n must be positive");
    double cost = 0;
    for (int j = 1; j <= a.k; ++j) cost += subset_count(n, j);
    if (cost > kVerifyLimit) throw GuardError("oracle-check: n=" + std::to_string(n) + " is above the brute-force limit");
  }

  int failures = 0;
  out << "n\tmethod\tk\tchecked\tmismatches\n";
  for (int n : a.n) {
    // One generator per n so adding sizes does not shift the others.
    std::mt19937_64 rng(a.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));
    std::vector<Permutation> corpus;
    for (int i = 0; i < a.count; ++i) corpus.push_back(random_permutation(n, rng));
    std::vector<PatternVector> oracle;
    for (const auto& pi : corpus) {
      PatternVector v;
      for (int j = 1; j <= std::min(a.k, n); ++j) {
        for (const auto& [tau, c] : profile_brute(pi, j)) v.add(tau, c);
      }
      oracle.push_back(std::move(v));
    }
    for (ProfileMethod m : methods) {
      int bad = 0;
      for (size_t i = 0; i < corpus.size(); ++i) {
        ProfileRequest req;
        req.pi = corpus[i];
        req.k = a.k;
        req.method = m;
        req.basis_dir = a.basis_dir;
        req.threads = a.threads;
        req.long_run = a.long_run;
        if (profile(req) != oracle[i]) {
          ++bad;
          err << "mismatch: n=" << n << " method=" << profile_method_name(m) << " pi=" << corpus[i].to_string() << '\n';
        }
      }
      failures += bad;
      out << n << '\t' << profile_method_name(m) << '\t' << a.k << '\t' << corpus.size() << '\t' << bad << '\n';
    }
  }
  return failures == 0 ? kOk : kIntegrity;
}

// ---------------------------------------------------------------------------
// nontrivial / gen
// ---------------------------------------------------------------------------
int run_nontrivial(int size, bool count_only, std::ostream& out) {
  if (size != 4 && size != 8) throw UsageError("--size must be 4 or 8");
  long total = 0;
  for (const auto& tau : all_permutations(size)) {
    const bool hit = size == 4 ? is_nontrivial_s4(tau) : is_nontrivial_s8(tau);
    if (!hit) continue;
    ++total;
    if (!count_only) out << tau.to_string() << '\n';
  }
  if (count_only) out << total << '\n';
  return kOk;
}

int run_gen(int n, std::uint64_t seed, std::ostream& out) {
  if (n < 1) throw UsageError("--n must be positive");
  std::mt19937_64 rng(seed);
  const Permutation pi = random_permutation(n, rng);
  const auto vals = pi.values();
  for (size_t i = 0; i < vals.size(); ++i) out << (i ? " " : "") << vals[i];
  out << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------
struct BenchArgs {
  std::string method = "quad";
  int k = 4;
  std::vector<int> n{50, 100, 200};
  int reps = 5;
  std::uint64_t seed = 1;
  std::string basis_dir = "basis-cache";
  std::string format = "tsv";
  int threads = 0;
  bool long_run = false;
};

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  check_format(a.format);
  if (a.reps < 5) throw UsageError("--reps must be at least 5");
  const ProfileMethod m = resolve_profile_method(parse_profile_method(a.method), a.k);
  for (int n : a.n) {
    if (n < 1) throw UsageError("--n must be positive");
  }
  std::vector<double> ns, medians;
  Json points = Json::array();
  for (int n : a.n) {
    std::mt19937_64 rng(a.seed ^ static_cast<std::uint64_t>(n));
    ProfileRequest req;
    req.pi = random_permutation(n, rng);
    req.k = a.k;
    req.method = m;
    req.basis_dir = a.basis_dir;
    req.threads = a.threads;
    req.long_run = a.long_run;
    (void)profile(req);  // warm-up; also loads or builds the basis
    std::vector<double> times;
    for (int r = 0; r < a.reps; ++r) {
      const auto t0 = Clock::now();
      (void)profile(req);
      times.push_back(seconds_since(t0));
    }
    const double med = median(times);
    ns.push_back(n);
    medians.push_back(med);
    err << "n=" << n << " median=" << med << " s\n";
    points.push_back({{"n", n},
                      {"median_seconds", med},
                      {"min_seconds", *std::min_element(times.begin(), times.end())},
                      {"max_seconds", *std::max_element(times.begin(), times.end())}});
  }
  const double slope = ns.size() >= 2 ? log_log_slope(ns, medians) : std::nan("");
  if (a.format == "json") {
    Json j;
    j["method"] = profile_method_name(m);
    j["k"] = a.k;
    j["reps"] = a.reps;
    j["threads"] = a.threads;
    j["points"] = std::move(points);
    j["log_log_slope"] = std::isnan(slope) ? Json(nullptr) : Json(slope);
    j["slope_note"] = "informational";
    out << j.dump(2) << '\n';
  } else {
    out << "method\tk\tn\treps\tmedian_seconds\tmin_seconds\tmax_seconds\n";
    for (const auto& p : points) {
      out << profile_method_name(m) << '\t' << a.k << '\t' << p["n"].get<int>() << '\t' << a.reps << '\t'
          << p["median_seconds"].get<double>() << '\t' << p["min_seconds"].get<double>() << '\t'
          << p["max_seconds"].get<double>() << '\n';
    }
    out << "# log-log slope (informational)\t" << slope << '\n';
  }
  return kOk;
}

}  // namespace

double log_log_slope(const std::vector<double>& n, const std::vector<double>& seconds) {
  if (n.size() != seconds.size() || n.size() < 2) throw UsageError("slope needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(n.size());
  for (size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(std::max(seconds[i], 1e-12));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (den == 0) throw UsageError("slope needs at least two distinct n");
  return (m * sxy - sx * sy) / den;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permutation pattern counting and k-profiles with pattern-trees", "pattree"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "pattree 0.1.0");

  const std::vector<std::string> profile_methods{"auto", "brute", "corner", "quad", "subquad5", "generic"};
  const std::vector<std::string> basis_methods{"corner", "quad", "subquad5", "subquad-5", "generic"};

  CountArgs count_args;
  auto* count = app.add_subcommand("count", "Count occurrences of one pattern or one pattern-tree in pi");
  count->add_option("--pi", count_args.pi_path, "Permutation file (default: stdin)");
  count->add_option("--pattern", count_args.pattern, "Pattern, e.g. \"3 2 1 4\" or 3214");
  count->add_option("--tree", count_args.tree_path, "Pattern-tree document");
  count->add_option("--method", count_args.method, "auto, brute, corner, quad, subquad5, generic or tree")
      ->check(CLI::IsMember({"auto", "brute", "corner", "quad", "subquad5", "generic", "tree"}));
  count->add_option("--basis-dir", count_args.basis_dir, "Basis artifact cache directory");
  count->add_option("--threads", count_args.threads, "Worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
  count->add_option("--max-vertex-size", count_args.max_vertex_size, "Largest tree vertex to enumerate")
      ->check(CLI::Range(1, 8));
  count->add_option("--format", count_args.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  count->add_flag("--long-run", count_args.long_run, "Allow building the quad k=7 basis");
  count->add_flag("--verify", count_args.verify, "Cross-check against brute force when small");

  ProfileArgs profile_args;
  auto* prof = app.add_subcommand("profile", "Print every pattern count of sizes 1..k");
  prof->add_option("--pi", profile_args.pi_path, "Permutation file (default: stdin)");
  prof->add_option("--k", profile_args.k, "Largest pattern size")->check(CLI::Range(1, 10));
  prof->add_option("--method", profile_args.method, "auto, brute, corner, quad, subquad5 or generic")
      ->check(CLI::IsMember(profile_methods));
  prof->add_option("--basis-dir", profile_args.basis_dir, "Basis artifact cache directory");
  prof->add_option("--threads", profile_args.threads, "Worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
  prof->add_option("--format", profile_args.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  prof->add_flag("--long-run", profile_args.long_run, "Allow building the quad k=7 basis");
  prof->add_flag("--verify", profile_args.verify, "Cross-check against brute force when small");
  prof->add_flag("--all", profile_args.all, "Also print zero counts");

  BasisArgs build_args;
  auto* build = app.add_subcommand("basis-build", "Build a basis artifact and write it to the cache");
  build->add_option("--k", build_args.k, "Largest pattern size")->check(CLI::Range(1, 8));
  build->add_option("--method", build_args.method, "corner, quad, subquad5 or generic")
      ->check(CLI::IsMember(basis_methods));
  build->add_option("--basis-dir", build_args.basis_dir, "Output directory");
  build->add_option("--threads", build_args.threads, "Worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
  build->add_option("--seed", build_args.seed, "Seed for sampled selection");
  build->add_flag("--long-run", build_args.long_run, "Allow the quad k=7 build");

  BasisArgs info_args;
  auto* info = app.add_subcommand("basis-info", "Describe a stored basis artifact");
  info->add_option("--file", info_args.file, "Artifact file (overrides --k/--method/--basis-dir)");
  info->add_option("--k", info_args.k, "Largest pattern size")->check(CLI::Range(1, 8));
  info->add_option("--method", info_args.method, "corner, quad, subquad5 or generic")
      ->check(CLI::IsMember(basis_methods));
  info->add_option("--basis-dir", info_args.basis_dir, "Cache directory");

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank-table", "Recompute g(s,k) and compare with the reference values");
  rank->add_option("--s", rank_args.s, "Maximum vertex sizes (1 and/or 2)")->check(CLI::Range(1, 2));
  rank->add_option("--k", rank_args.k, "Pattern sizes (default 1..6, or 1..7 with --long-run)")
      ->check(CLI::Range(1, 8));
  rank->add_option("--seed", rank_args.seed, "Seed for row sampling");
  rank->add_flag("--long-run", rank_args.long_run, "Allow k = 7");
  rank->add_flag("--no-certify", rank_args.no_certify, "Skip exact kernel certification of deficient ranks");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle-check", "Compare profile methods with brute force on random inputs");
  oracle->add_option("--seed", oracle_args.seed, "Generator seed");
  oracle->add_option("--n", oracle_args.n, "Permutation sizes");
  oracle->add_option("--count", oracle_args.count, "Permutations per size");
  oracle->add_option("--k", oracle_args.k, "Profile size");
  oracle->add_option("--method", oracle_args.methods, "Methods to check (default: all that apply)")
      ->check(CLI::IsMember(profile_methods));
  oracle->add_option("--basis-dir", oracle_args.basis_dir, "Basis artifact cache directory");
  oracle->add_option("--threads", oracle_args.threads, "Worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
  oracle->add_flag("--long-run", oracle_args.long_run, "Allow building the quad k=7 basis");

  int nt_size = 4;
  bool nt_count = false;
  auto* nt = app.add_subcommand("nontrivial", "List or count the non-trivial patterns of S_4 or S_8");
  nt->add_option("--size", nt_size, "4 or 8")->check(CLI::IsMember({4, 8}));
  nt->add_flag("--count", nt_count, "Print only the number of patterns");

  int gen_n = 10;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Print a uniform random permutation (mt19937_64 + Fisher-Yates)");
  gen->add_option("--n", gen_n, "Size")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "64-bit seed");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time profile computation over a sweep of n");
  bench->add_option("--method", bench_args.method, "Profile method")->check(CLI::IsMember(profile_methods));
  bench->add_option("--k", bench_args.k, "Profile size")->check(CLI::Range(1, 10));
  bench->add_option("--n", bench_args.n, "Sizes to time");
  bench->add_option("--reps", bench_args.reps, "Repetitions per size (>= 5)");
  bench->add_option("--seed", bench_args.seed, "Seed for the timed permutations");
  bench->add_option("--basis-dir", bench_args.basis_dir, "Basis artifact cache directory");
  bench->add_option("--threads", bench_args.threads, "Worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
  bench->add_option("--format", bench_args.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  bench->add_flag("--long-run", bench_args.long_run, "Allow building the quad k=7 basis");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*count) return run_count(count_args, in, out, err);
    if (*prof) return run_profile(profile_args, in, out, err);
    if (*build) return run_basis_build(build_args, out, err);
    if (*info) return run_basis_info(info_args, out);
    if (*rank) return run_rank_table(rank_args, out);
    if (*oracle) return run_oracle_check(oracle_args, out, err);
    if (*nt) return run_nontrivial(nt_size, nt_count, out);
    if (*gen) return run_gen(gen_n, gen_seed, out);
    if (*bench) return run_bench(bench_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const IntegrityError& e) {
    err << "integrity error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const GuardError& e) {
    err << "guard exceeded: " << e.what() << '\n';
    return kGuard;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace pattree::cli

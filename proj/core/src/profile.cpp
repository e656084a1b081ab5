#include "pattree/profile.hpp"

#include <algorithm>
#include <numeric>

#include "pattree/errors.hpp"
#include "pattree/evaluator.hpp"
#include "pattree/parallel.hpp"

namespace pattree {

std::string_view profile_method_name(ProfileMethod m) {
  switch (m) {
    case ProfileMethod::automatic: return "auto";
    case ProfileMethod::brute: return "brute";
    case ProfileMethod::corner: return "corner";
    case ProfileMethod::quad: return "quad";
    case ProfileMethod::subquad5: return "subquad5";
    case ProfileMethod::generic: return "generic";
  }
  return "?";
}

ProfileMethod parse_profile_method(std::string_view name) {
  if (name == "auto") return ProfileMethod::automatic;
  if (name == "brute") return ProfileMethod::brute;
  if (name == "corner") return ProfileMethod::corner;
  if (name == "quad") return ProfileMethod::quad;
  if (name == "subquad5" || name == "subquad-5") return ProfileMethod::subquad5;
  if (name == "generic") return ProfileMethod::generic;
  throw UsageError("unknown profile method '" + std::string(name) + "'");
}

ProfileMethod resolve_profile_method(ProfileMethod m, int k) {
  if (k < 1) throw UsageError("profile size k must be at least 1");
  if (m == ProfileMethod::automatic) {
    if (k <= 5) return ProfileMethod::subquad5;
    if (k <= 7) return ProfileMethod::quad;
    return ProfileMethod::generic;
  }
  int limit = 0;
  switch (m) {
    case ProfileMethod::brute: limit = 10; break;
    case ProfileMethod::corner: limit = basis_method_max_k(BasisMethod::corner); break;
    case ProfileMethod::quad: limit = basis_method_max_k(BasisMethod::quad); break;
    case ProfileMethod::subquad5: limit = basis_method_max_k(BasisMethod::subquad5); break;
    case ProfileMethod::generic: limit = basis_method_max_k(BasisMethod::generic); break;
    case ProfileMethod::automatic: break;
  }
  if (k > limit) {
    throw UsageError("method " + std::string(profile_method_name(m)) + " supports k <= " + std::to_string(limit));
  }
  return m;
}

namespace {

BasisMethod basis_for(ProfileMethod m) {
  switch (m) {
    case ProfileMethod::corner: return BasisMethod::corner;
    case ProfileMethod::quad: return BasisMethod::quad;
    case ProfileMethod::subquad5: return BasisMethod::subquad5;
    default: return BasisMethod::generic;
  }
}

// Rough evaluation cost: the largest enumerated vertex dominates, then the
// number of points.
std::pair<int, int> row_cost(const BasisRow& r) {
  int big = 1;
  for (const auto& v : r.tree.vertices()) big = std::max(big, v.is_gadget() ? 1 : v.size());
  return {big, r.tree.total_size()};
}

std::uint64_t saturating_power(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

}  // namespace

std::vector<Integer> evaluate_basis(const BasisArtifact& a, const Permutation& pi, int threads) {
  std::vector<size_t> order(a.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return row_cost(a.rows[x]) > row_cost(a.rows[y]); });
  std::vector<Integer> values(a.rows.size());
  parallel_for(order.size(), threads, [&](size_t i) {
    const size_t r = order[i];
    values[r] = evaluate_basis_row(a, static_cast<int>(r), pi);
  });
  return values;
}

PatternVector profile_generic(const Permutation& pi, int k, const GenericOptions& options) {
  if (k < 1) throw UsageError("profile size k must be at least 1");
  if (k > basis_method_max_k(BasisMethod::generic)) throw GuardError("generic profile supports k <= 8");
  const int half = (k + 1) / 2;
  if (saturating_power(static_cast<std::uint64_t>(pi.size()), half) > options.max_cost) {
    throw GuardError("generic profile cost n^" + std::to_string(half) + " exceeds the limit " +
                     std::to_string(options.max_cost));
  }
  const auto patterns = all_permutations(k);
  std::vector<Integer> counts(patterns.size());
  const EvaluateOptions eval{half};
  parallel_for(patterns.size(), options.threads,
               [&](size_t i) { counts[i] = evaluate(split_tree(patterns[i]), pi, eval); });
  PatternVector out;
  for (size_t i = 0; i < patterns.size(); ++i) out.add(patterns[i], counts[i]);
  return out;
}

PatternVector profile(const ProfileRequest& request) {
  const int k = request.k;
  const ProfileMethod method = resolve_profile_method(request.method, k);
  const Permutation& pi = request.pi;
  PatternVector out;
  switch (method) {
    case ProfileMethod::brute:
      for (int j = 1; j <= std::min(k, pi.size()); ++j) {
        for (const auto& [tau, c] : profile_brute(pi, j)) out.add(tau, c);
      }
      return out;
    case ProfileMethod::generic: {
      GenericOptions opts;
      opts.threads = request.threads;
      for (int j = 1; j <= std::min(k, pi.size()); ++j) {
        for (const auto& [tau, c] : profile_generic(pi, j, opts)) out.add(tau, c);
      }
      return out;
    }
    default: break;
  }
  BasisOptions bopts;
  bopts.long_run = request.long_run;
  bopts.threads = request.threads;
  const BasisArtifact& basis = cached_basis(k, basis_for(method), request.basis_dir, bopts);
  const auto values = evaluate_basis(basis, pi, request.threads);
  return solve_profile(basis, values, pi.size());
}

}  // namespace pattree

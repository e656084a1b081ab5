#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "pattree/basis.hpp"
#include "pattree/permutation.hpp"

namespace pattree {

/// How a profile is computed.
///   automatic - subquad5 for k <= 5, quad for k <= 7, generic beyond
///   brute     - classify every k-subset (k <= 10)
///   corner / quad / subquad5 - evaluate a basis of trees and solve (k <= 3 / 7 / 5)
///   generic   - one two-vertex tree per pattern
enum class ProfileMethod : std::uint8_t { automatic, brute, corner, quad, subquad5, generic };

std::string_view profile_method_name(ProfileMethod m);
/// UsageError for unknown names.
ProfileMethod parse_profile_method(std::string_view name);
/// The method that runs for (m, k): resolves automatic and checks that k is
/// within the method's range (UsageError otherwise).
ProfileMethod resolve_profile_method(ProfileMethod m, int k);

struct ProfileRequest {
  Permutation pi;
  int k = 3;
  ProfileMethod method = ProfileMethod::automatic;
  /// Where basis artifacts are cached; empty keeps them in memory only.
  std::filesystem::path basis_dir;
  /// Worker cap for tree evaluations; 0 means hardware parallelism.
  int threads = 0;
  /// Permits building the quad-k7 basis when it is not cached.
  bool long_run = false;
};

/// Occurrence counts of every pattern of size 1..k in pi. Layers for sizes
/// above n are zero. UsageError for incompatible method and k,
/// IntegrityError when the basis solve is inconsistent, GuardError from the
/// generic method's cost limit.
PatternVector profile(const ProfileRequest& request);

struct GenericOptions {
  int threads = 0;
  /// Upper limit on n^ceil(k/2), the number of placements of the larger split vertex.
  std::uint64_t max_cost = 1ULL << 17;
};

/// Occurrence counts of the patterns of size exactly k, one split-tree
/// evaluation per pattern with vertices of size at most ceil(k/2).
/// GuardError when n^ceil(k/2) exceeds the cost limit or k > 8.
PatternVector profile_generic(const Permutation& pi, int k, const GenericOptions& options = {});

/// Values of every basis row on pi, evaluated in parallel, most expensive
/// rows first.
std::vector<Integer> evaluate_basis(const BasisArtifact& a, const Permutation& pi, int threads = 0);

}  // namespace pattree

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pattree/integer.hpp"
#include "pattree/modular.hpp"
#include "pattree/pattern_tree.hpp"
#include "pattree/permutation.hpp"

namespace pattree {

/// Tree families a profile basis can be drawn from.
///   corner   - trees with single-point vertices (k <= 3)
///   quad     - trees with vertices of at most two points (k <= 7)
///   subquad5 - corner trees plus trees with one 3214 or 43215 gadget vertex,
///              each taken in all eight D4 orientations (k <= 5)
///   generic  - one two-vertex tree per pattern, splitting it by position
enum class BasisMethod : std::uint8_t { corner, quad, subquad5, generic };

std::string_view basis_method_name(BasisMethod m);
/// Accepts corner, quad, subquad5 (or subquad-5) and generic; UsageError otherwise.
BasisMethod parse_basis_method(std::string_view name);
/// Largest k the method supports.
int basis_method_max_k(BasisMethod m);
/// Human tag such as "quad-k7" or "subquad-5".
std::string basis_tag(BasisMethod m, int k);

/// Bumped whenever selection or evaluation changes; part of the cache key.
inline constexpr std::uint32_t kBasisCodeVersion = 1;

/// One selected tree. Its value on pi is #tree(g.pi), and its row of the
/// matrix is the tree's vector transformed by g^-1.
struct BasisRow {
  PatternTree tree;
  D4 g = D4::identity;
  /// Size of the largest pattern in the row's vector.
  int layer = 1;
};

/// Offset of the S_j block in the S_{<=k} column order (S_1, S_2, ... each in
/// lexicographic order): sum of r! for r < j.
std::uint64_t layer_offset(int j);
/// Column of a pattern in that order.
std::uint64_t pattern_column(const Permutation& tau);

/// A nonsingular square system A c = v linking tree values v to the profile c
/// over S_{<=k}. Rows are grouped by layer with exactly j! rows of layer j, so
/// A is block lower-triangular; each diagonal block is kept factorized mod p
/// and solved exactly by p-adic lifting.
struct BasisArtifact {
  int k = 0;
  BasisMethod method = BasisMethod::quad;
  std::uint32_t version = kBasisCodeVersion;
  std::uint32_t prime = kDefaultPrime;
  std::vector<BasisRow> rows;
  /// Full rows of A over S_{<=k}.
  std::vector<SparseRow> matrix;
  /// blocks[j-1]: recorded factorization of the S_j diagonal block.
  std::vector<ModularEchelon> blocks;

  [[nodiscard]] int side() const noexcept { return static_cast<int>(rows.size()); }
  /// Largest ordinary vertex size among the rows (the evaluation cost exponent).
  [[nodiscard]] int max_vertex_size() const;
};

struct BasisOptions {
  /// Allow quad with k = 7 (about a quarter minute of elimination).
  bool long_run = false;
  std::uint64_t seed = 1;
  int threads = 0;
  /// Called with short progress messages during long builds.
  std::function<void(const std::string&)> progress;
};

/// Selects layer by layer, rank-greedily, sum_{j<=k} j! trees of the method's
/// family whose vectors are independent, and factorizes the diagonal blocks.
/// UsageError when k exceeds the method's limit, GuardError for quad k = 7
/// without long_run, IntegrityError if a layer cannot reach full rank.
BasisArtifact build_profile_basis(int k, BasisMethod method, const BasisOptions& options = {});

/// Exact profile over S_{<=k} from the row values v (v[i] = value of row i
/// on some pi of size n). IntegrityError unless every count is an integer in
/// [0, C(n, j)]. DataError when v has the wrong length.
PatternVector solve_profile(const BasisArtifact& a, std::span<const Integer> values, int n);

/// Value of row i on pi, choosing the plain or gadget-aware evaluator.
Integer evaluate_basis_row(const BasisArtifact& a, int i, const Permutation& pi);

/// The two-vertex tree of a pattern used by the generic method: positions
/// 1..ceil(k/2) form one vertex, the rest the other, and every cross pair is
/// fixed on the edge. Its vector is exactly the pattern itself.
PatternTree split_tree(const Permutation& tau);

// ---------------------------------------------------------------------------
// Persistence. Binary container documented in docs/basis-format.md.
// ---------------------------------------------------------------------------
std::vector<std::uint8_t> serialize_basis(const BasisArtifact& a);
/// DataError on malformed input, IntegrityError on checksum mismatch.
BasisArtifact deserialize_basis(std::span<const std::uint8_t> bytes);
void save_basis(const BasisArtifact& a, const std::filesystem::path& file);
BasisArtifact load_basis(const std::filesystem::path& file);

/// Cache file name for (k, method, code version), e.g. "quad-k7.v1.ptba".
std::string basis_cache_name(BasisMethod m, int k);

/// Loads the artifact from dir when present (an empty dir disables disk
/// caching), otherwise builds it and saves it there. Artifacts are also
/// memoized in-process.
const BasisArtifact& cached_basis(int k, BasisMethod method, const std::filesystem::path& dir,
                                  const BasisOptions& options = {});

}  // namespace pattree

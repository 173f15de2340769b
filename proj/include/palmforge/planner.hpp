#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace palmforge {

/// Grid positions per combination (3x3 blocks).
inline constexpr int kCombinationLength = 9;
/// Largest identity count the fixed-width mask kernels support.
inline constexpr int kMaxPlannerIdentities = 256;

struct PlannerConfig {
  int n = 9;                       ///< source identities
  int m = kCombinationLength;      ///< combination length
  int k = 5;                       ///< max shared identities between accepted subsets

  /// Throws ConfigError unless m == 9, 0 <= k < m and m <= n <= 256.
  void validate() const;
};

/// Strictly increasing identity indices.
class IdentitySubset {
 public:
  IdentitySubset() = default;
  /// Throws ConfigError if `members` is not strictly increasing and non-negative.
  explicit IdentitySubset(std::vector<int> members);

  std::span<const int> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  int operator[](std::size_t i) const { return members_.at(i); }

  /// N-bit membership mask, 64 identities per word.
  std::vector<std::uint64_t> mask() const;

  friend bool operator==(const IdentitySubset&, const IdentitySubset&) = default;

 private:
  std::vector<int> members_;
};

/// Exact C(n, k); throws ConfigError on 64-bit overflow.
std::uint64_t binomial(int n, int k);

/// Lexicographic enumeration of all m-subsets of {0..n-1}, one at a time.
class CandidateStream {
 public:
  /// Throws ConfigError when n < m or m < 1.
  CandidateStream(int n, int m);

  bool done() const noexcept { return done_; }
  std::span<const int> current() const noexcept { return indices_; }
  void advance() noexcept;

  int n() const noexcept { return n_; }
  int m() const noexcept { return static_cast<int>(indices_.size()); }
  /// Index of the current candidate; equals total() once done.
  std::uint64_t position() const noexcept { return position_; }
  std::uint64_t total() const { return binomial(n_, m()); }

 private:
  int n_;
  std::vector<int> indices_;
  std::uint64_t position_ = 0;
  bool done_ = false;
};

/// |a ∩ b|, computed as popcount(mask_a & mask_b).
int duplicates(const IdentitySubset& a, const IdentitySubset& b);

/// First-fit maximal clique: a candidate joins when it shares at most `k`
/// identities with every subset accepted so far. Accepted subsets are checked
/// newest first and the scan stops at the first violation. Consumes `stream`.
std::vector<IdentitySubset> greedy_clique(CandidateStream& stream, int k);

struct Assignment {
  int identity = 0;
  int block = 0;  ///< 1..9, always equal to the position
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// One synthetic identity's ROI recipe: slots[j-1] fills grid position j.
struct Combination {
  std::array<Assignment, kCombinationLength> slots{};

  const Assignment& at_position(int position) const {
    return slots.at(static_cast<std::size_t>(position - 1));
  }
  friend bool operator==(const Combination&, const Combination&) = default;
};

/// Circular shifts of a sorted 9-subset: rotation r gives position j the
/// identity members[(j - 1 + r) mod 9]. Throws ConfigError unless size is 9.
std::array<Combination, kCombinationLength> rotations(const IdentitySubset& subset);

/// Combination for a single rotation.
Combination rotation(const IdentitySubset& subset, int r);

struct PlanEntry {
  Combination combination;
  IdentitySubset subset;
  int rotation = 0;
  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct IdentityPlan {
  std::vector<PlanEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// Number of distinct subsets, in order of first appearance.
  std::size_t clique_size() const;
  friend bool operator==(const IdentityPlan&, const IdentityPlan&) = default;
};

/// greedy_clique over the lexicographic stream, each subset expanded to its
/// nine rotations.
IdentityPlan plan(const PlannerConfig& cfg);

/// Builds a plan from an explicit list of subsets (no distinctness check).
IdentityPlan expand_subsets(std::span<const IdentitySubset> subsets);

/// Minimum number of positions that must differ between two combinations.
inline constexpr int kMinDifferingPositions = 4;

struct PlanReport {
  bool ok = true;
  std::string message;
  /// First violating pair (i < j) in row-major order, if any.
  std::optional<std::pair<std::size_t, std::size_t>> offending;
  std::size_t pairs_checked = 0;
};

/// Brute-force check of every combination (9 distinct identities, block j
/// at position j) and every pair (>= 4 positions assigned differently).
/// The reported violation is the same for any worker count.
PlanReport verify_plan(const IdentityPlan& plan, int workers = 1);

/// Number of positions whose identity differs.
int differing_positions(const Combination& a, const Combination& b) noexcept;

/// One JSON object per line:
/// {"plan_index":i,"subset":[...],"rotation":r,"assignment":[[position,identity],...]}
void write_plan_jsonl(std::ostream& os, const IdentityPlan& plan);
std::string plan_to_jsonl(const IdentityPlan& plan);

/// Parses plan JSONL; throws ConfigError on malformed records or when an
/// assignment disagrees with rotation(subset, rotation).
IdentityPlan read_plan_jsonl(std::istream& is);

}  // namespace palmforge

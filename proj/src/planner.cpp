#include "palmforge/planner.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "palmforge/error.hpp"

namespace palmforge {

void PlannerConfig::validate() const {
  if (m != kCombinationLength)
    throw ConfigError("planner m must be 9 (3x3 grid), got " + std::to_string(m));
  if (k < 0 || k >= m)
    throw ConfigError("planner k must satisfy 0 <= k < m, got " + std::to_string(k));
  if (n < m) throw ConfigError("planner n must be >= m, got n=" + std::to_string(n));
  if (n > kMaxPlannerIdentities)
    throw ConfigError("planner n must be <= " + std::to_string(kMaxPlannerIdentities));
}

IdentitySubset::IdentitySubset(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0) throw ConfigError("identity indices must be non-negative");
    if (i > 0 && members_[i] <= members_[i - 1])
      throw ConfigError("identity subset must be strictly increasing");
  }
}

std::vector<std::uint64_t> IdentitySubset::mask() const {
  const int top = members_.empty() ? 0 : members_.back();
  std::vector<std::uint64_t> words(static_cast<std::size_t>(top / 64 + 1), 0);
  for (int id : members_) words[static_cast<std::size_t>(id / 64)] |= 1ULL << (id % 64);
  return words;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t f = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / f)
      throw ConfigError("binomial coefficient overflows 64 bits");
    r = r * f / static_cast<std::uint64_t>(i);
  }
  return r;
}

CandidateStream::CandidateStream(int n, int m) : n_(n) {
  if (m < 1) throw ConfigError("combination length must be >= 1");
  if (n < m)
    throw ConfigError("need at least m identities (n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + ")");
  indices_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) indices_[static_cast<std::size_t>(i)] = i;
}

void CandidateStream::advance() noexcept {
  if (done_) return;
  ++position_;
  const int m = static_cast<int>(indices_.size());
  int i = m - 1;
  while (i >= 0 && indices_[static_cast<std::size_t>(i)] == n_ - m + i) --i;
  if (i < 0) {
    done_ = true;
    return;
  }
  ++indices_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < m; ++j)
    indices_[static_cast<std::size_t>(j)] = indices_[static_cast<std::size_t>(j - 1)] + 1;
}

int duplicates(const IdentitySubset& a, const IdentitySubset& b) {
  const auto ma = a.mask(), mb = b.mask();
  int shared = 0;
  for (std::size_t w = 0; w < std::min(ma.size(), mb.size()); ++w)
    shared += std::popcount(ma[w] & mb[w]);
  return shared;
}

namespace {

template <std::size_t Words>
std::vector<IdentitySubset> greedy_fixed(CandidateStream& stream, int k) {
  using Mask = std::array<std::uint64_t, Words>;
  std::vector<Mask> masks;
  std::vector<IdentitySubset> accepted;
  for (; !stream.done(); stream.advance()) {
    Mask cand{};
    for (int id : stream.current())
      cand[static_cast<std::size_t>(id) / 64] |= 1ULL << (static_cast<unsigned>(id) % 64);
    bool fits = true;
    for (auto it = masks.rbegin(); it != masks.rend(); ++it) {
      int shared = 0;
      for (std::size_t w = 0; w < Words; ++w) shared += std::popcount(cand[w] & (*it)[w]);
      if (shared > k) {
        fits = false;
        break;
      }
    }
    if (fits) {
      masks.push_back(cand);
      const auto cur = stream.current();
      accepted.emplace_back(std::vector<int>(cur.begin(), cur.end()));
    }
  }
  return accepted;
}

}  // namespace

std::vector<IdentitySubset> greedy_clique(CandidateStream& stream, int k) {
  const int n = stream.n();
  if (n <= 64) return greedy_fixed<1>(stream, k);
  if (n <= 128) return greedy_fixed<2>(stream, k);
  if (n <= 192) return greedy_fixed<3>(stream, k);
  if (n <= kMaxPlannerIdentities) return greedy_fixed<4>(stream, k);
  throw ConfigError("greedy_clique supports at most " + std::to_string(kMaxPlannerIdentities) +
                    " identities");
}

Combination rotation(const IdentitySubset& subset, int r) {
  if (subset.size() != static_cast<std::size_t>(kCombinationLength))
    throw ConfigError("rotations need a 9-identity subset");
  if (r < 0 || r >= kCombinationLength) throw ConfigError("rotation must be in [0,9)");
  Combination c;
  for (int j = 1; j <= kCombinationLength; ++j)
    c.slots[static_cast<std::size_t>(j - 1)] = {
        subset[static_cast<std::size_t>((j - 1 + r) % kCombinationLength)], j};
  return c;
}

std::array<Combination, kCombinationLength> rotations(const IdentitySubset& subset) {
  std::array<Combination, kCombinationLength> out;
  for (int r = 0; r < kCombinationLength; ++r) out[static_cast<std::size_t>(r)] = rotation(subset, r);
  return out;
}

std::size_t IdentityPlan::clique_size() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (i == 0 || !(entries[i].subset == entries[i - 1].subset)) ++count;
  return count;
}

IdentityPlan expand_subsets(std::span<const IdentitySubset> subsets) {
  IdentityPlan p;
  p.entries.reserve(subsets.size() * kCombinationLength);
  for (const auto& s : subsets) {
    const auto rots = rotations(s);
    for (int r = 0; r < kCombinationLength; ++r)
      p.entries.push_back({rots[static_cast<std::size_t>(r)], s, r});
  }
  return p;
}

IdentityPlan plan(const PlannerConfig& cfg) {
  cfg.validate();
  CandidateStream stream(cfg.n, cfg.m);
  const auto clique = greedy_clique(stream, cfg.k);
  return expand_subsets(clique);
}

int differing_positions(const Combination& a, const Combination& b) noexcept {
  int diff = 0;
  for (std::size_t j = 0; j < a.slots.size(); ++j)
    diff += (a.slots[j].identity != b.slots[j].identity || a.slots[j].block != b.slots[j].block);
  return diff;
}

namespace {

std::string describe(const Combination& c) {
  std::ostringstream os;
  os << '{';
  for (std::size_t j = 0; j < c.slots.size(); ++j)
    os << (j ? "," : "") << c.slots[j].identity << '^' << c.slots[j].block;
  os << '}';
  return os.str();
}

}  // namespace

PlanReport verify_plan(const IdentityPlan& plan, int workers) {
  PlanReport report;
  const auto& e = plan.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& c = e[i].combination;
    for (std::size_t j = 0; j < c.slots.size(); ++j) {
      if (c.slots[j].block != static_cast<int>(j) + 1) {
        report.ok = false;
        report.message = "combination " + std::to_string(i) + " places block " +
                         std::to_string(c.slots[j].block) + " at position " +
                         std::to_string(j + 1);
        return report;
      }
      for (std::size_t q = 0; q < j; ++q)
        if (c.slots[q].identity == c.slots[j].identity) {
          report.ok = false;
          report.message = "combination " + std::to_string(i) + " uses identity " +
                           std::to_string(c.slots[j].identity) + " more than once";
          return report;
        }
    }
  }

  const std::size_t n = e.size();
  const std::size_t nw = static_cast<std::size_t>(std::max(1, workers));
  constexpr auto kNone = std::pair<std::size_t, std::size_t>{SIZE_MAX, SIZE_MAX};
  std::vector<std::pair<std::size_t, std::size_t>> first(nw, kNone);
  auto scan = [&](std::size_t w) {
    // Rows interleaved across workers so the triangular work balances.
    for (std::size_t i = w; i < n; i += nw) {
      for (std::size_t j = i + 1; j < n; ++j)
        if (differing_positions(e[i].combination, e[j].combination) < kMinDifferingPositions) {
          first[w] = {i, j};
          return;
        }
    }
  };
  if (nw == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(scan, w);
  }
  report.pairs_checked = n < 2 ? 0 : n * (n - 1) / 2;
  const auto worst = *std::min_element(first.begin(), first.end());
  if (worst != kNone) {
    const auto [i, j] = worst;
    report.ok = false;
    report.offending = worst;
    report.message = "combinations " + std::to_string(i) + " " + describe(e[i].combination) +
                     " and " + std::to_string(j) + " " + describe(e[j].combination) +
                     " differ in only " +
                     std::to_string(differing_positions(e[i].combination, e[j].combination)) +
                     " positions";
  } else {
    report.message = "ok: " + std::to_string(n) + " combinations, " +
                     std::to_string(report.pairs_checked) + " pairs";
  }
  return report;
}

void write_plan_jsonl(std::ostream& os, const IdentityPlan& plan) {
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& entry = plan.entries[i];
    nlohmann::ordered_json rec;
    rec["plan_index"] = i;
    rec["subset"] = std::vector<int>(entry.subset.members().begin(), entry.subset.members().end());
    rec["rotation"] = entry.rotation;
    auto assignment = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < entry.combination.slots.size(); ++j)
      assignment.push_back({static_cast<int>(j) + 1, entry.combination.slots[j].identity});
    rec["assignment"] = std::move(assignment);
    os << rec.dump() << '\n';
  }
}

std::string plan_to_jsonl(const IdentityPlan& plan) {
  std::ostringstream os;
  write_plan_jsonl(os, plan);
  return os.str();
}

IdentityPlan read_plan_jsonl(std::istream& is) {
  IdentityPlan p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = "plan line " + std::to_string(lineno) + ": ";
    try {
      const auto rec = nlohmann::json::parse(line);
      if (rec.at("plan_index").get<std::size_t>() != p.entries.size())
        throw ConfigError(where + "plan_index out of sequence");
      IdentitySubset subset(rec.at("subset").get<std::vector<int>>());
      const int r = rec.at("rotation").get<int>();
      Combination c = rotation(subset, r);
      const auto& assignment = rec.at("assignment");
      if (!assignment.is_array() || assignment.size() != c.slots.size())
        throw ConfigError(where + "assignment must have 9 entries");
      for (std::size_t j = 0; j < c.slots.size(); ++j) {
        const auto pair = assignment[j].get<std::array<int, 2>>();
        if (pair[0] != static_cast<int>(j) + 1 || pair[1] != c.slots[j].identity)
          throw ConfigError(where + "assignment disagrees with subset/rotation");
      }
      p.entries.push_back({c, std::move(subset), r});
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(where + ex.what());
    }
  }
  return p;
}

}  // namespace palmforge

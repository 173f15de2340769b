#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <vector>

#include "palmforge/geometry.hpp"
#include "palmforge/planner.hpp"
#include "palmforge/raster.hpp"
#include "palmforge/rng.hpp"

namespace palmforge {

/// identity index -> edge maps of that identity, one per gesture image.
class EdgeLibrary {
 public:
  /// Throws ConfigError if `maps` is empty or not 256x256 binary.
  void add_identity(int identity, std::vector<EdgeMap> maps);

  /// Throws LookupError for unknown identity or gesture.
  const EdgeMap& at(int identity, int gesture) const;
  std::size_t gesture_count(int identity) const;
  bool contains(int identity) const noexcept { return maps_.contains(identity); }
  std::size_t identity_count() const noexcept { return maps_.size(); }

  /// Loads `{dir}/{identity}/{gesture}.png` for identities 0..n-1.
  static EdgeLibrary load(const std::filesystem::path& dir);

 private:
  std::map<int, std::vector<EdgeMap>> maps_;
};

struct SourceRef {
  int identity = 0;
  int gesture = 0;
  friend bool operator==(const SourceRef&, const SourceRef&) = default;
};

struct AssemblySpec {
  Combination combination;
  /// Gesture used for the block at position j (index j-1).
  std::array<int, kCombinationLength> block_source_gesture{};
  SourceRef background;
  bool flip = false;

  SourceRef block_source(int position) const {
    const auto& slot = combination.at_position(position);
    return {slot.identity, block_source_gesture.at(static_cast<std::size_t>(position - 1))};
  }
  friend bool operator==(const AssemblySpec&, const AssemblySpec&) = default;
};

/// Copies block j of each assigned source onto the background's edge map,
/// then mirrors horizontally if `spec.flip`.
EdgeMap assemble_edge(const AssemblySpec& spec, const EdgeLibrary& lib, const RoiGrid& grid);

struct VariantConfig {
  /// Gesture every source identity contributes its ROI block from.
  int block_gesture = 0;
  /// Grid position (1..9) whose identity donates the backgrounds.
  int donor_position = 1;
  double flip_probability = 0.5;

  void validate() const;
};

/// `count` specs sharing one ROI recipe; background gestures cycle through
/// the donor's gestures. The flip flag is drawn once from `rng`.
std::vector<AssemblySpec> sample_variants(const Combination& combination, const EdgeLibrary& lib,
                                          int count, Rng& rng, const VariantConfig& cfg = {});

}  // namespace palmforge

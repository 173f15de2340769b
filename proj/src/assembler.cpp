#include "palmforge/assembler.hpp"

#include <algorithm>
#include <string>

#include "palmforge/png_io.hpp"

namespace palmforge {

void EdgeLibrary::add_identity(int identity, std::vector<EdgeMap> maps) {
  if (maps.empty())
    throw ConfigError("identity " + std::to_string(identity) + " has no edge maps");
  for (const auto& m : maps) {
    if (m.width() != kFrameSize || m.height() != kFrameSize)
      throw ConfigError("edge maps must be 256x256");
    validate_binary(m);
  }
  maps_[identity] = std::move(maps);
}

const EdgeMap& EdgeLibrary::at(int identity, int gesture) const {
  const auto it = maps_.find(identity);
  if (it == maps_.end()) throw LookupError("identity " + std::to_string(identity) + " not in edge library");
  if (gesture < 0 || static_cast<std::size_t>(gesture) >= it->second.size())
    throw LookupError("identity " + std::to_string(identity) + " has no gesture " +
                      std::to_string(gesture));
  return it->second[static_cast<std::size_t>(gesture)];
}

std::size_t EdgeLibrary::gesture_count(int identity) const {
  const auto it = maps_.find(identity);
  if (it == maps_.end()) throw LookupError("identity " + std::to_string(identity) + " not in edge library");
  return it->second.size();
}

EdgeLibrary EdgeLibrary::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  EdgeLibrary lib;
  for (int id = 0;; ++id) {
    const fs::path idir = dir / std::to_string(id);
    if (!fs::is_directory(idir)) break;
    std::vector<EdgeMap> maps;
    for (int g = 0;; ++g) {
      const fs::path f = idir / (std::to_string(g) + ".png");
      if (!fs::exists(f)) break;
      maps.push_back(read_png_edge(f));
    }
    lib.add_identity(id, std::move(maps));
  }
  if (lib.identity_count() == 0)
    throw IoError("no edge maps found under '" + dir.string() + "'");
  return lib;
}

EdgeMap assemble_edge(const AssemblySpec& spec, const EdgeLibrary& lib, const RoiGrid& grid) {
  EdgeMap out = lib.at(spec.background.identity, spec.background.gesture);
  for (int j = 1; j <= kCombinationLength; ++j) {
    const auto& slot = spec.combination.at_position(j);
    if (slot.block != j)
      throw ConfigError("combination places block " + std::to_string(slot.block) +
                        " at position " + std::to_string(j));
    const EdgeMap& src = lib.at(slot.identity, spec.block_source_gesture[static_cast<std::size_t>(j - 1)]);
    const Rect& b = grid.block(j);
    for (int y = b.y; y < b.y + b.height; ++y)
      std::copy_n(&src.bits(b.x, y), b.width, &out.bits(b.x, y));
  }
  return spec.flip ? mirror_horizontal(out) : out;
}

void VariantConfig::validate() const {
  if (block_gesture < 0) throw ConfigError("block_gesture must be >= 0");
  if (donor_position < 1 || donor_position > kCombinationLength)
    throw ConfigError("donor_position must be in [1,9]");
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
    throw ConfigError("flip_probability must be in [0,1]");
}

std::vector<AssemblySpec> sample_variants(const Combination& combination, const EdgeLibrary& lib,
                                          int count, Rng& rng, const VariantConfig& cfg) {
  cfg.validate();
  if (count < 1) throw ConfigError("variant count must be >= 1");
  const int donor = combination.at_position(cfg.donor_position).identity;
  const std::size_t gestures = lib.gesture_count(donor);
  if (gestures == 0) throw LookupError("donor identity " + std::to_string(donor) + " has no gestures");
  for (const auto& slot : combination.slots) (void)lib.at(slot.identity, cfg.block_gesture);

  const bool flip = std::bernoulli_distribution(cfg.flip_probability)(rng);
  AssemblySpec base;
  base.combination = combination;
  base.block_source_gesture.fill(cfg.block_gesture);
  base.flip = flip;

  std::vector<AssemblySpec> specs(static_cast<std::size_t>(count), base);
  for (int i = 0; i < count; ++i)
    specs[static_cast<std::size_t>(i)].background = {
        donor, static_cast<int>(static_cast<std::size_t>(i) % gestures)};
  return specs;
}

}  // namespace palmforge

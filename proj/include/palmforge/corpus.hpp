#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "palmforge/geometry.hpp"

namespace palmforge {

struct KeypointRecord {
  std::string image_path;  ///< as written in the sidecar
  HandKeyPoints keypoints;
};

/// Sidecar lines are `image_path, x0,y0, ..., x20,y20`. Blank lines and
/// lines starting with '#' are skipped. Throws ConfigError naming the line.
std::vector<KeypointRecord> parse_keypoint_sidecar(std::istream& in);
std::vector<KeypointRecord> read_keypoint_sidecar(const std::filesystem::path& path);

struct CorpusImage {
  std::filesystem::path path;  ///< resolved against the corpus root
  HandKeyPoints keypoints;
};

/// Images grouped by identity. Identity = parent directory name of the image
/// path; identities are numbered in sorted name order and gestures in sorted
/// path order within an identity.
struct CorpusIndex {
  std::vector<std::string> identity_names;
  std::vector<std::vector<CorpusImage>> gestures;  ///< [identity][gesture]

  std::size_t identity_count() const noexcept { return identity_names.size(); }
};

CorpusIndex index_corpus(const std::vector<KeypointRecord>& records,
                         const std::filesystem::path& root);

struct DemoCorpusConfig {
  int identities = 9;
  int gestures = 5;
  int image_size = 400;
  std::uint64_t seed = 7;
};

/// Writes a synthetic hand corpus: `{dir}/corpus/id{NNN}/{g}.png`, the
/// sidecar `{dir}/keypoints.csv` and a starter `{dir}/config.json`.
/// Each identity has a fixed palm texture; each gesture places the hand with
/// a different similarity transform and changes the finger region.
void write_demo_corpus(const std::filesystem::path& dir, const DemoCorpusConfig& cfg = {});

/// Canonical-frame positions of the 21 landmarks used by the demo corpus.
std::array<Point2, kHandKeyPointCount> canonical_hand_layout();

}  // namespace palmforge

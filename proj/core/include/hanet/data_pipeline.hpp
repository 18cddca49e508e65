#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hanet/image.hpp"

namespace hanet {

/// One bi-temporal pair with a pixel-level change label. All three rasters
/// share the same height and width; label values are 0/1 after load-time
/// normalization (any nonzero stored value maps to 1).
struct ImagePairRecord {
    std::string id;
    ByteImage t1;
    ByteImage t2;
    BinaryMask label;
};

enum class PatchCategory : std::uint8_t { Foreground, Background };

const char* to_string(PatchCategory c);
PatchCategory patch_category_from_string(const std::string& s);

/// A fixed-size crop of a pair. Offsets are multiples of the tile size
/// (non-overlapping grid).
struct PatchPair {
    std::string parent_id;
    int offset_row = 0;
    int offset_col = 0;
    ByteImage t1;
    ByteImage t2;
    BinaryMask label;
    PatchCategory category = PatchCategory::Background;

    std::string patch_id() const;
};

struct ClassBalanceReport {
    std::int64_t changed_pixels = 0;
    std::int64_t unchanged_pixels = 0;
    double changed_fraction = 0.0;
    std::int64_t foreground_patches = 0;
    std::int64_t background_patches = 0;
};

/// Cut a pair into non-overlapping tile x tile patches in row-major offset
/// order; partial border tiles are discarded. Throws std::invalid_argument
/// when the three rasters disagree in shape or tile < 1.
std::vector<PatchPair> tile_pair(const ImagePairRecord& pair, int tile);

/// Foreground iff the label contains at least one changed pixel.
PatchCategory classify_patch(const BinaryMask& label);

/// Exact pixel and patch-category counts. Throws std::invalid_argument on
/// an empty input.
ClassBalanceReport dataset_stats(const std::vector<PatchPair>& patches);

struct SplitResult {
    std::vector<PatchPair> train;
    std::vector<PatchPair> val;
};

/// Deterministic seeded split; val gets floor(n * val_fraction) patches.
/// Requires 0 <= val_fraction < 1.
SplitResult split_dataset(std::vector<PatchPair> patches, double val_fraction, std::uint64_t seed);

/// Reassemble patches onto a canvas covering [0, rows) x [0, cols); pixels
/// outside any patch stay zero. Inverse of tile_pair on the covered region.
ImagePairRecord stitch_patches(const std::vector<PatchPair>& patches, int rows, int cols);

// --- dataset directory convention: <root>/{train,val,test}/{A,B,label}/<id>.<png|tif> ---

/// Load every pair of a split. A and B hold T1/T2 rasters with matching
/// filenames; label holds the change maps. Records are sorted by id.
std::vector<ImagePairRecord> load_split(const std::filesystem::path& root, const std::string& split);

/// Write patches to <dir>/{A,B,label}/<patch_id>.png plus a manifest.
void write_patch_directory(const std::filesystem::path& dir, const std::vector<PatchPair>& patches);

/// Load patches back from a directory written by write_patch_directory.
std::vector<PatchPair> load_patch_directory(const std::filesystem::path& dir);

struct ManifestEntry {
    std::string id;
    int offset_row = 0;
    int offset_col = 0;
    PatchCategory category = PatchCategory::Background;
};

/// Line-delimited index (id, offset_row, offset_col, category) so the
/// sampler can address patches without re-tiling.
void write_manifest(const std::filesystem::path& path, const std::vector<PatchPair>& patches);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// Flat key/value text rendering of a balance report.
std::string stats_text(const ClassBalanceReport& report);
/// JSON document with the same fields.
std::string stats_json(const ClassBalanceReport& report);

}  // namespace hanet

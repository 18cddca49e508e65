#include "hanet/data_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hanet/rng.hpp"

namespace fs = std::filesystem;

namespace hanet {

const char* to_string(PatchCategory c) {
    return c == PatchCategory::Foreground ? "foreground" : "background";
}

PatchCategory patch_category_from_string(const std::string& s) {
    if (s == "foreground") return PatchCategory::Foreground;
    if (s == "background") return PatchCategory::Background;
    throw std::invalid_argument("unknown patch category: " + s);
}

std::string PatchPair::patch_id() const {
    return parent_id + "_" + std::to_string(offset_row) + "_" + std::to_string(offset_col);
}

namespace {

ByteImage crop_image(const ByteImage& src, int row0, int col0, int size) {
    ByteImage out = make_image(size, size, src.channels);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            for (int ch = 0; ch < src.channels; ++ch)
                out.at(r, c, ch) = src.at(row0 + r, col0 + c, ch);
    return out;
}

BinaryMask crop_mask(const BinaryMask& src, int row0, int col0, int size) {
    BinaryMask out = make_mask(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) out.at(r, c) = src.at(row0 + r, col0 + c);
    return out;
}

}  // namespace

std::vector<PatchPair> tile_pair(const ImagePairRecord& pair, int tile) {
    if (tile < 1) throw std::invalid_argument("tile size must be >= 1");
    if (pair.t1.height != pair.t2.height || pair.t1.width != pair.t2.width ||
        pair.t1.height != pair.label.height || pair.t1.width != pair.label.width)
        throw std::invalid_argument("tile_pair: raster shapes do not match for pair " + pair.id);

    const int rows = pair.t1.height / tile;
    const int cols = pair.t1.width / tile;
    std::vector<PatchPair> patches;
    patches.reserve(static_cast<std::size_t>(rows) * cols);
    for (int tr = 0; tr < rows; ++tr) {
        for (int tc = 0; tc < cols; ++tc) {
            PatchPair p;
            p.parent_id = pair.id;
            p.offset_row = tr * tile;
            p.offset_col = tc * tile;
            p.t1 = crop_image(pair.t1, p.offset_row, p.offset_col, tile);
            p.t2 = crop_image(pair.t2, p.offset_row, p.offset_col, tile);
            p.label = crop_mask(pair.label, p.offset_row, p.offset_col, tile);
            p.category = classify_patch(p.label);
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

PatchCategory classify_patch(const BinaryMask& label) {
    for (std::uint8_t v : label.values)
        if (v != 0) return PatchCategory::Foreground;
    return PatchCategory::Background;
}

ClassBalanceReport dataset_stats(const std::vector<PatchPair>& patches) {
    if (patches.empty()) throw std::invalid_argument("dataset_stats: empty patch list");
    ClassBalanceReport rep;
    for (const auto& p : patches) {
        std::int64_t changed = 0;
        for (std::uint8_t v : p.label.values) changed += v != 0;
        rep.changed_pixels += changed;
        rep.unchanged_pixels += p.label.pixel_count() - changed;
        if (p.category == PatchCategory::Foreground)
            ++rep.foreground_patches;
        else
            ++rep.background_patches;
    }
    const std::int64_t total = rep.changed_pixels + rep.unchanged_pixels;
    rep.changed_fraction = total > 0 ? static_cast<double>(rep.changed_pixels) / static_cast<double>(total) : 0.0;
    return rep;
}

SplitResult split_dataset(std::vector<PatchPair> patches, double val_fraction, std::uint64_t seed) {
    if (val_fraction < 0.0 || val_fraction >= 1.0)
        throw std::invalid_argument("split_dataset: val_fraction must be in [0, 1)");
    const std::size_t n = patches.size();
    const std::size_t n_val = static_cast<std::size_t>(static_cast<double>(n) * val_fraction);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(mix_seed(seed, 0x5eedu));
    rng.shuffle(order);

    SplitResult out;
    out.val.reserve(n_val);
    out.train.reserve(n - n_val);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < n_val)
            out.val.push_back(std::move(patches[order[i]]));
        else
            out.train.push_back(std::move(patches[order[i]]));
    }
    return out;
}

ImagePairRecord stitch_patches(const std::vector<PatchPair>& patches, int rows, int cols) {
    ImagePairRecord rec;
    rec.id = patches.empty() ? "" : patches.front().parent_id;
    rec.t1 = make_image(rows, cols, 3);
    rec.t2 = make_image(rows, cols, 3);
    rec.label = make_mask(rows, cols);
    for (const auto& p : patches) {
        for (int r = 0; r < p.t1.height; ++r) {
            const int rr = p.offset_row + r;
            if (rr >= rows) continue;
            for (int c = 0; c < p.t1.width; ++c) {
                const int cc = p.offset_col + c;
                if (cc >= cols) continue;
                for (int ch = 0; ch < 3; ++ch) {
                    rec.t1.at(rr, cc, ch) = p.t1.at(r, c, ch);
                    rec.t2.at(rr, cc, ch) = p.t2.at(r, c, ch);
                }
                rec.label.at(rr, cc) = p.label.at(r, c);
            }
        }
    }
    return rec;
}

std::vector<ImagePairRecord> load_split(const fs::path& root, const std::string& split) {
    const fs::path a_dir = root / split / "A";
    const fs::path b_dir = root / split / "B";
    const fs::path label_dir = root / split / "label";
    if (!fs::is_directory(a_dir) || !fs::is_directory(b_dir) || !fs::is_directory(label_dir))
        throw std::runtime_error("dataset split layout not found under " + (root / split).string());

    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(a_dir))
        if (ent.is_regular_file()) files.push_back(ent.path());
    std::sort(files.begin(), files.end());

    std::vector<ImagePairRecord> records;
    records.reserve(files.size());
    for (const auto& a_path : files) {
        ImagePairRecord rec;
        rec.id = a_path.stem().string();
        rec.t1 = read_image(a_path);
        rec.t2 = read_image(b_dir / a_path.filename());
        rec.label = read_mask(label_dir / a_path.filename());
        if (rec.t2.height != rec.t1.height || rec.t2.width != rec.t1.width ||
            rec.label.height != rec.t1.height || rec.label.width != rec.t1.width)
            throw std::runtime_error("raster shapes do not match for pair " + rec.id);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_patch_directory(const fs::path& dir, const std::vector<PatchPair>& patches) {
    fs::create_directories(dir / "A");
    fs::create_directories(dir / "B");
    fs::create_directories(dir / "label");
    for (const auto& p : patches) {
        const std::string name = p.patch_id() + ".png";
        write_image(dir / "A" / name, p.t1);
        write_image(dir / "B" / name, p.t2);
        write_mask(dir / "label" / name, p.label);
    }
    write_manifest(dir / "manifest.csv", patches);
}

std::vector<PatchPair> load_patch_directory(const fs::path& dir) {
    const auto entries = read_manifest(dir / "manifest.csv");
    std::vector<PatchPair> patches;
    patches.reserve(entries.size());
    for (const auto& e : entries) {
        PatchPair p;
        // patch ids are "<parent>_<row>_<col>"; recover the parent prefix.
        const std::string suffix = "_" + std::to_string(e.offset_row) + "_" + std::to_string(e.offset_col);
        p.parent_id = e.id.size() > suffix.size() && e.id.ends_with(suffix)
                          ? e.id.substr(0, e.id.size() - suffix.size())
                          : e.id;
        p.offset_row = e.offset_row;
        p.offset_col = e.offset_col;
        const std::string name = e.id + ".png";
        p.t1 = read_image(dir / "A" / name);
        p.t2 = read_image(dir / "B" / name);
        p.label = read_mask(dir / "label" / name);
        p.category = classify_patch(p.label);
        if (p.category != e.category)
            throw std::runtime_error("manifest category disagrees with label pixels for " + e.id);
        patches.push_back(std::move(p));
    }
    return patches;
}

void write_manifest(const fs::path& path, const std::vector<PatchPair>& patches) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << "id,offset_row,offset_col,category\n";
    for (const auto& p : patches)
        out << p.patch_id() << ',' << p.offset_row << ',' << p.offset_col << ','
            << to_string(p.category) << '\n';
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read manifest: " + path.string());
    std::vector<ManifestEntry> entries;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::stringstream ss(line);
        std::string id, row, col, cat;
        std::getline(ss, id, ',');
        std::getline(ss, row, ',');
        std::getline(ss, col, ',');
        std::getline(ss, cat, ',');
        entries.push_back({id, std::stoi(row), std::stoi(col), patch_category_from_string(cat)});
    }
    return entries;
}

std::string stats_text(const ClassBalanceReport& rep) {
    std::ostringstream out;
    out << "changed_pixels = " << rep.changed_pixels << '\n'
        << "unchanged_pixels = " << rep.unchanged_pixels << '\n'
        << "changed_fraction = " << rep.changed_fraction << '\n'
        << "foreground_patches = " << rep.foreground_patches << '\n'
        << "background_patches = " << rep.background_patches << '\n';
    return out.str();
}

std::string stats_json(const ClassBalanceReport& rep) {
    nlohmann::json j;
    j["changed_pixels"] = rep.changed_pixels;
    j["unchanged_pixels"] = rep.unchanged_pixels;
    j["changed_fraction"] = rep.changed_fraction;
    j["foreground_patches"] = rep.foreground_patches;
    j["background_patches"] = rep.background_patches;
    return j.dump(2);
}

}  // namespace hanet

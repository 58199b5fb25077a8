#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "slr/manifest.hpp"

namespace slr {

enum class SplitMode { signer_independent, random };

const char* split_mode_name(SplitMode m);
SplitMode split_mode_from_name(const std::string& s);

// Disjoint train/val/test sample-id sets. Lists are kept sorted so equal
// splits serialize identically.
struct SplitSpec {
    SplitMode mode = SplitMode::signer_independent;
    int64_t seed = 0;
    std::vector<std::string> train_ids;
    std::vector<std::string> val_ids;
    std::vector<std::string> test_ids;

    bool operator==(const SplitSpec&) const = default;
};

// All samples of `test_signers` become the test set; every other signer's
// samples are split val/train independently per signer, so validation
// covers every training signer.
SplitSpec build_signer_independent_split(const Manifest& manifest,
                                         const std::set<std::string>& test_signers,
                                         double val_fraction, int64_t seed);

// Downsamples over-represented test signers to the minimum per-signer test
// count. Returns the kept sample ids (sorted).
std::vector<std::string> build_balanced_test(const Manifest& manifest,
                                             const SplitSpec& split,
                                             int64_t seed);

// Uniform random partition with largest-remainder rounding, so the three
// counts always sum to the manifest size.
SplitSpec build_random_split(const Manifest& manifest, double train_fraction,
                             double val_fraction, double test_fraction,
                             int64_t seed);

// JSON: {"mode": ..., "seed": ..., "train": [...], "val": [...], "test": [...]}
std::string split_to_json(const SplitSpec& s);
SplitSpec split_from_json(const std::string& json_text);
void save_split(const SplitSpec& s, const std::string& path);
SplitSpec load_split(const std::string& path);

void save_id_list(const std::vector<std::string>& ids, const std::string& path);
std::vector<std::string> load_id_list(const std::string& path);

}  // namespace slr

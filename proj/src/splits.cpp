#include "slr/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "slr/common.hpp"
#include "slr/rng.hpp"

namespace slr {

namespace {

using IdsBySigner = std::map<std::string, std::vector<std::string>>;

IdsBySigner group_by_signer(const std::vector<SampleRecord>& records) {
    IdsBySigner out;
    for (const auto& r : records) out[r.signer_id].push_back(r.sample_id);
    return out;
}

void sort_all(SplitSpec& s) {
    std::sort(s.train_ids.begin(), s.train_ids.end());
    std::sort(s.val_ids.begin(), s.val_ids.end());
    std::sort(s.test_ids.begin(), s.test_ids.end());
}

}  // namespace

const char* split_mode_name(SplitMode m) {
    return m == SplitMode::signer_independent ? "signer_independent" : "random";
}

SplitMode split_mode_from_name(const std::string& s) {
    if (s == "signer_independent") return SplitMode::signer_independent;
    if (s == "random") return SplitMode::random;
    fail_invalid("unknown split mode: ", s);
}

SplitSpec build_signer_independent_split(
    const Manifest& manifest, const std::set<std::string>& test_signers,
    double val_fraction, int64_t seed) {
    if (test_signers.empty()) fail_invalid("test_signers is empty");
    if (!(val_fraction > 0.0 && val_fraction < 1.0))
        fail_invalid("val_fraction must be in (0,1), got ", val_fraction);

    auto by_signer = group_by_signer(manifest.records);
    for (const auto& s : test_signers)
        if (!by_signer.count(s))
            fail_invalid("test signer not in manifest: ", s);
    if (test_signers.size() >= by_signer.size())
        fail_invalid("test_signers covers all ", by_signer.size(),
                     " signers; no training signers left");

    SplitSpec out;
    out.mode = SplitMode::signer_independent;
    out.seed = seed;
    Rng root(static_cast<uint64_t>(seed));
    for (auto& [signer, ids] : by_signer) {
        if (test_signers.count(signer)) {
            out.test_ids.insert(out.test_ids.end(), ids.begin(), ids.end());
            continue;
        }
        Rng rng = root.substream(signer);
        rng.shuffle(ids);
        const auto n_val = static_cast<size_t>(
            std::llround(val_fraction * static_cast<double>(ids.size())));
        for (size_t i = 0; i < ids.size(); ++i)
            (i < n_val ? out.val_ids : out.train_ids).push_back(ids[i]);
    }
    sort_all(out);
    return out;
}

std::vector<std::string> build_balanced_test(const Manifest& manifest,
                                             const SplitSpec& split,
                                             int64_t seed) {
    if (split.mode != SplitMode::signer_independent)
        fail_invalid("balanced test requires a signer_independent split");
    if (split.test_ids.empty()) fail_invalid("split has an empty test set");

    std::map<std::string, std::string> signer_of;
    for (const auto& r : manifest.records) signer_of[r.sample_id] = r.signer_id;

    IdsBySigner by_signer;
    for (const auto& id : split.test_ids) {
        auto it = signer_of.find(id);
        if (it == signer_of.end())
            fail_runtime("test sample not in manifest: ", id);
        by_signer[it->second].push_back(id);
    }

    size_t target = SIZE_MAX;
    for (const auto& [signer, ids] : by_signer)
        target = std::min(target, ids.size());

    std::vector<std::string> kept;
    Rng root(static_cast<uint64_t>(seed));
    for (auto& [signer, ids] : by_signer) {
        Rng rng = root.substream(signer);
        rng.shuffle(ids);
        kept.insert(kept.end(), ids.begin(), ids.begin() + target);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

SplitSpec build_random_split(const Manifest& manifest, double train_fraction,
                             double val_fraction, double test_fraction,
                             int64_t seed) {
    const double fr[3] = {train_fraction, val_fraction, test_fraction};
    for (double f : fr)
        if (!(f > 0.0)) fail_invalid("split fractions must be positive");
    const double sum = fr[0] + fr[1] + fr[2];
    if (std::abs(sum - 1.0) > 1e-9)
        fail_invalid("split fractions sum to ", sum, ", expected 1");

    const size_t n = manifest.records.size();

    // Largest-remainder rounding; ties broken by set order (train, val, test).
    size_t counts[3];
    double rem[3];
    size_t assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = fr[i] * static_cast<double>(n);
        counts[i] = static_cast<size_t>(std::floor(exact));
        rem[i] = exact - std::floor(exact);
        assigned += counts[i];
    }
    while (assigned < n) {
        int best = 0;
        for (int i = 1; i < 3; ++i)
            if (rem[i] > rem[best]) best = i;
        ++counts[best];
        rem[best] = -1.0;
        ++assigned;
    }

    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& r : manifest.records) ids.push_back(r.sample_id);
    Rng rng(static_cast<uint64_t>(seed));
    rng.shuffle(ids);

    SplitSpec out;
    out.mode = SplitMode::random;
    out.seed = seed;
    size_t pos = 0;
    out.train_ids.assign(ids.begin(), ids.begin() + counts[0]);
    pos += counts[0];
    out.val_ids.assign(ids.begin() + pos, ids.begin() + pos + counts[1]);
    pos += counts[1];
    out.test_ids.assign(ids.begin() + pos, ids.end());
    sort_all(out);
    return out;
}

std::string split_to_json(const SplitSpec& s) {
    nlohmann::json j;
    j["mode"] = split_mode_name(s.mode);
    j["seed"] = s.seed;
    j["train"] = s.train_ids;
    j["val"] = s.val_ids;
    j["test"] = s.test_ids;
    return j.dump(2);
}

SplitSpec split_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    SplitSpec s;
    s.mode = split_mode_from_name(j.at("mode").get<std::string>());
    s.seed = j.at("seed").get<int64_t>();
    s.train_ids = j.at("train").get<std::vector<std::string>>();
    s.val_ids = j.at("val").get<std::vector<std::string>>();
    s.test_ids = j.at("test").get<std::vector<std::string>>();
    return s;
}

void save_split(const SplitSpec& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_runtime("cannot write split: ", path);
    out << split_to_json(s) << "\n";
}

SplitSpec load_split(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open split: ", path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return split_from_json(text);
}

void save_id_list(const std::vector<std::string>& ids,
                  const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_runtime("cannot write id list: ", path);
    out << nlohmann::json(ids).dump(2) << "\n";
}

std::vector<std::string> load_id_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open id list: ", path);
    nlohmann::json j = nlohmann::json::parse(in);
    return j.get<std::vector<std::string>>();
}

}  // namespace slr

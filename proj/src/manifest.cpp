#include "slr/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "slr/common.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

const char* kHeader =
    "sample_id,signer_id,sign_id,background_id,rgb_path,depth_path,"
    "skeleton_path,num_frames";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

int parse_int_field(const std::string& s, size_t row, const char* field) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        fail_runtime("manifest row ", row, ": field '", field,
                     "' is not an integer: '", s, "'");
    return v;
}

std::string synth_sign_name(int id) {
    std::ostringstream os;
    os << "sign_";
    os.width(3);
    os.fill('0');
    os << id;
    return os.str();
}

}  // namespace

const SampleRecord& Manifest::find(const std::string& sample_id) const {
    for (const auto& r : records)
        if (r.sample_id == sample_id) return r;
    fail_runtime("sample_id not in manifest: ", sample_id);
}

std::string Manifest::resolve_path(const std::string& rel) const {
    fs::path p(rel);
    if (p.is_absolute() || base_dir.empty()) return rel;
    return (fs::path(base_dir) / p).string();
}

std::vector<std::string> Manifest::distinct_signers() const {
    std::set<std::string> s;
    for (const auto& r : records) s.insert(r.signer_id);
    return {s.begin(), s.end()};
}

void Manifest::validate() const {
    if (num_signs < 1) fail_runtime("manifest: num_signs must be positive");
    if (static_cast<int>(sign_names.size()) != num_signs)
        fail_runtime("manifest: ", sign_names.size(), " sign names for ",
                     num_signs, " signs");
    std::unordered_set<std::string> seen;
    std::vector<std::string> dups;
    for (const auto& r : records) {
        if (!seen.insert(r.sample_id).second) dups.push_back(r.sample_id);
        if (r.sign_id < 0 || r.sign_id >= num_signs)
            fail_runtime("manifest: sample ", r.sample_id, " has sign_id ",
                         r.sign_id, " outside [0, ", num_signs, ")");
        if (r.rgb_path.empty())
            fail_runtime("manifest: sample ", r.sample_id, " has no rgb_path");
    }
    if (!dups.empty()) {
        std::string list;
        for (const auto& d : dups) list += (list.empty() ? "" : ", ") + d;
        fail_runtime("manifest: duplicate sample_id(s): ", list);
    }
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open manifest: ", path);

    Manifest m;
    m.base_dir = fs::path(path).parent_path().string();

    std::string line;
    if (!std::getline(in, line)) fail_runtime("manifest is empty: ", path);
    {
        auto fields = split_fields(line);
        auto expect = split_fields(kHeader);
        if (fields != expect)
            fail_runtime("manifest header mismatch in ", path, " (got '", line,
                         "')");
    }

    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto f = split_fields(line);
        if (f.size() != 8)
            fail_runtime("manifest row ", row, ": expected 8 fields, got ",
                         f.size());
        SampleRecord r;
        r.sample_id = f[0];
        r.signer_id = f[1];
        r.sign_id = parse_int_field(f[2], row, "sign_id");
        r.background_id = f[3];
        r.rgb_path = f[4];
        r.depth_path = f[5];
        r.skeleton_path = f[6];
        r.num_frames = f[7].empty() ? 0 : parse_int_field(f[7], row, "num_frames");
        if (r.sample_id.empty())
            fail_runtime("manifest row ", row, ": field 'sample_id' is empty");
        if (r.signer_id.empty())
            fail_runtime("manifest row ", row, ": field 'signer_id' is empty");
        if (r.rgb_path.empty())
            fail_runtime("manifest row ", row, ": field 'rgb_path' is empty");
        if (r.sign_id < 0)
            fail_runtime("manifest row ", row, ": field 'sign_id' is negative");
        if (r.num_frames < 0)
            fail_runtime("manifest row ", row,
                         ": field 'num_frames' is negative");
        m.records.push_back(std::move(r));
    }

    int max_sign = -1;
    for (const auto& r : m.records) max_sign = std::max(max_sign, r.sign_id);
    m.num_signs = std::max(max_sign + 1, 1);
    m.sign_names.reserve(m.num_signs);
    for (int i = 0; i < m.num_signs; ++i)
        m.sign_names.push_back(synth_sign_name(i));

    m.validate();
    return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_runtime("cannot write manifest: ", path);
    out << kHeader << "\n";
    for (const auto& r : m.records) {
        out << r.sample_id << ',' << r.signer_id << ',' << r.sign_id << ','
            << r.background_id << ',' << r.rgb_path << ',' << r.depth_path
            << ',' << r.skeleton_path << ',';
        if (r.num_frames > 0) out << r.num_frames;
        out << "\n";
    }
    if (!out) fail_runtime("write failed: ", path);
}

}  // namespace slr

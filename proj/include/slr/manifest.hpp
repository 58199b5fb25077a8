#pragma once

#include <string>
#include <vector>

namespace slr {

// One labeled video sample. Optional paths are empty strings when absent;
// num_frames is 0 until known (it is filled in lazily at decode time).
struct SampleRecord {
    std::string sample_id;
    std::string signer_id;
    int sign_id = -1;
    std::string background_id;
    std::string rgb_path;
    std::string depth_path;
    std::string skeleton_path;
    int num_frames = 0;
};

struct Manifest {
    std::vector<SampleRecord> records;
    int num_signs = 0;
    std::vector<std::string> sign_names;

    // Directory of the manifest file; relative sample paths resolve
    // against it. Not serialized.
    std::string base_dir;

    const SampleRecord& find(const std::string& sample_id) const;
    std::string resolve_path(const std::string& rel) const;
    std::vector<std::string> distinct_signers() const;

    // Checks id uniqueness, sign_id range, and rgb_path presence.
    void validate() const;
};

// CSV schema:
//   sample_id,signer_id,sign_id,background_id,rgb_path,depth_path,skeleton_path,num_frames
// Empty string marks an absent optional field. num_signs is inferred as
// max(sign_id)+1 and sign names are synthesized ("sign_000", ...); the CSV
// itself carries no label table.
Manifest load_manifest(const std::string& path);
void save_manifest(const Manifest& m, const std::string& path);

}  // namespace slr

#pragma once

#include <cstdint>
#include <string>

#include "slr/manifest.hpp"
#include "slr/tensor.hpp"

namespace slr {

// Desk-scale stand-in corpus: clips of a colored "hand" blob moving along a
// closed loop in front of a static body/head against varied backgrounds.
// Class identity is (loop shape, repetition count): classes 2j and 2j+1
// share shape j and differ only in how many times the loop is traced.
struct SyntheticCorpusConfig {
    int num_signs = 10;
    int num_signers = 5;
    int samples_per_signer_per_sign = 4;
    int frame_size = 64;
    int frames_min = 12;
    int frames_max = 24;
    int64_t seed = 0;

    void validate() const;
};

int trajectory_shape(int sign_id);        // sign_id / 2
int trajectory_repetitions(int sign_id);  // 1 + sign_id % 2

// Point on the unit loop of a shape at parameter u (loop closes at u=1 and
// winds once per unit of u).
void loop_point(int shape, double u, double& x, double& y);

// Full hand trajectory in pixel coordinates, T x 2 as (x, y). Traces
// trajectory_repetitions(sign_id) windings across the clip.
Tensor gesture_trajectory(int sign_id, int num_frames, double center_x,
                          double center_y, double radius, double phase);

// Renders the corpus under out_dir (frame directories of PNGs, skeleton
// CSVs, manifest.csv) and returns the manifest. Bit-identical output for
// equal configs.
Manifest generate_synthetic_corpus(const SyntheticCorpusConfig& config,
                                   const std::string& out_dir);

SyntheticCorpusConfig synthetic_config_from_json_file(const std::string& path);

}  // namespace slr

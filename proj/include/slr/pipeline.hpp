#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slr/manifest.hpp"
#include "slr/preprocess.hpp"

namespace slr {

// Per-sample preprocessing: [joint crop] -> resize -> [fixed-length
// resample] -> normalize. Depth additionally gets per-clip min-max scaling
// and channel replication before normalization. AUTSL-style runs keep the
// native variable length (fixed_length = 0); Montalbano-style runs crop
// about a joint and resample to a fixed length.
struct PipelineConfig {
    int input_side = 256;
    int fixed_length = 0;  // 0 keeps native length
    int crop_size = 0;     // 0 disables the joint crop
    int crop_joint = 0;
    // Declared backbone pretraining statistics, not hard-coded anywhere else.
    std::vector<double> mean{0.485, 0.456, 0.406};
    std::vector<double> stddev{0.229, 0.224, 0.225};

    void validate() const;
};

struct ModelInput {
    ClipTensor rgb;
    std::optional<ClipTensor> depth;
};

ModelInput load_model_input(const SampleRecord& record, const Manifest& manifest,
                            const PipelineConfig& config, bool need_depth);

}  // namespace slr

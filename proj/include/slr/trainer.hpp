#pragma once

#include <iosfwd>
#include <string>

#include "slr/model.hpp"
#include "slr/pipeline.hpp"
#include "slr/schedule.hpp"
#include "slr/splits.hpp"

namespace slr {

struct TrainResult {
    TrainState state;
    std::string best_checkpoint;
    std::string last_checkpoint;
};

// Full training loop: shuffled per-sample (or small fixed-length batch)
// updates with Adam, per-epoch validation top-1, plateau schedule, early
// stopping, best/last checkpoints, and a JSON-lines epoch log under out_dir.
// An empty validation set is allowed (the metric reads 0); desk-scale
// overfit runs typically validate on the training ids themselves.
TrainResult train_model(Model& model, const Manifest& manifest,
                        const SplitSpec& split, const PipelineConfig& pipeline,
                        const TrainConfig& config, const std::string& out_dir,
                        std::ostream* progress = nullptr);

}  // namespace slr

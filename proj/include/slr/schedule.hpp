#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slr {

// Training regime: per-sample updates, one plateau-triggered learning rate
// reduction, then early stop after a second plateau.
struct TrainConfig {
    double initial_lr = 1e-5;
    double reduced_lr = 2e-6;
    int plateau_patience = 10;
    int stop_patience = 10;
    int batch_size = 1;
    int max_epochs = 100;
    int64_t seed = 0;

    void validate() const;
};

TrainConfig train_config_from_json_file(const std::string& path);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_top1 = 0.0;
    double lr = 0.0;
};

struct TrainState {
    int epoch = 0;
    double current_lr = 0.0;
    double best_val_metric = -1.0;  // any real metric beats this
    int epochs_since_improvement = 0;
    bool lr_reduced = false;
    std::vector<EpochStats> history;
};

// Called once per epoch after validation. Strict improvement (>) resets the
// stall counter; after plateau_patience stalled epochs the learning rate
// drops to reduced_lr (once) and the counter restarts.
TrainState lr_schedule_step(TrainState state, double val_metric,
                            const TrainConfig& config);

// True once the rate has been reduced and stop_patience further epochs have
// passed without improvement.
bool early_stop_check(const TrainState& state, const TrainConfig& config);

}  // namespace slr

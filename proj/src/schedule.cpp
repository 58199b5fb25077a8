#include "slr/schedule.hpp"

#include <fstream>

#include <json.hpp>

#include "slr/common.hpp"

namespace slr {

void TrainConfig::validate() const {
    if (!(initial_lr > 0.0) || !(reduced_lr > 0.0) || reduced_lr >= initial_lr)
        fail_invalid("need 0 < reduced_lr < initial_lr");
    if (plateau_patience < 1 || stop_patience < 1)
        fail_invalid("patiences must be >= 1");
    if (batch_size < 1) fail_invalid("batch_size must be >= 1");
    if (max_epochs < 0) fail_invalid("max_epochs must be >= 0");
}

TrainConfig train_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open train config: ", path);
    nlohmann::json j = nlohmann::json::parse(in);
    TrainConfig c;
    c.initial_lr = j.value("initial_lr", c.initial_lr);
    c.reduced_lr = j.value("reduced_lr", c.reduced_lr);
    c.plateau_patience = j.value("plateau_patience", c.plateau_patience);
    c.stop_patience = j.value("stop_patience", c.stop_patience);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

TrainState lr_schedule_step(TrainState state, double val_metric,
                            const TrainConfig& config) {
    if (state.epoch == 0) state.current_lr = config.initial_lr;
    ++state.epoch;
    if (val_metric > state.best_val_metric) {
        state.best_val_metric = val_metric;
        state.epochs_since_improvement = 0;
    } else {
        ++state.epochs_since_improvement;
    }
    if (!state.lr_reduced &&
        state.epochs_since_improvement >= config.plateau_patience) {
        state.current_lr = config.reduced_lr;
        state.lr_reduced = true;
        state.epochs_since_improvement = 0;
    }
    return state;
}

bool early_stop_check(const TrainState& state, const TrainConfig& config) {
    return state.lr_reduced &&
           state.epochs_since_improvement >= config.stop_patience;
}

}  // namespace slr

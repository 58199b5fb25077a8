#include "slr/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "slr/checkpoint.hpp"
#include "slr/common.hpp"
#include "slr/eval.hpp"
#include "slr/loss.hpp"
#include "slr/optimizer.hpp"

namespace fs = std::filesystem;

namespace slr {

namespace {

const SampleRecord& record_of(const Manifest& manifest, const std::string& id) {
    return manifest.find(id);
}

struct ValScores {
    double loss = 0.0;
    double top1 = 0.0;
};

ValScores run_validation(Model& model, const Manifest& manifest,
                         const std::vector<std::string>& ids,
                         const PipelineConfig& pipeline) {
    ValScores v;
    if (ids.empty()) return v;
    size_t hits = 0;
    for (const auto& id : ids) {
        const auto& rec = record_of(manifest, id);
        ModelInput input =
            load_model_input(rec, manifest, pipeline, model.cfg.use_depth);
        auto res = model.forward(input.rgb,
                                 input.depth ? &*input.depth : nullptr,
                                 Model::Mode::inference);
        v.loss += cross_entropy(res.logits, rec.sign_id);
        hits += ranking_from_logits(res.logits)[0] == rec.sign_id;
    }
    v.loss /= static_cast<double>(ids.size());
    v.top1 = static_cast<double>(hits) / static_cast<double>(ids.size());
    return v;
}

}  // namespace

TrainResult train_model(Model& model, const Manifest& manifest,
                        const SplitSpec& split, const PipelineConfig& pipeline,
                        const TrainConfig& config, const std::string& out_dir,
                        std::ostream* progress) {
    config.validate();
    if (config.batch_size > 1 && pipeline.fixed_length == 0)
        fail_invalid(
            "batch_size > 1 requires a fixed-length pipeline so clips share T");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail_runtime("cannot create ", out_dir, ": ", ec.message());

    const std::string best_path = (fs::path(out_dir) / "ckpt-best").string();
    const std::string last_path = (fs::path(out_dir) / "ckpt-last").string();
    std::ofstream log(fs::path(out_dir) / "train_log.jsonl");
    if (!log) fail_runtime("cannot write training log in ", out_dir);

    Rng root(static_cast<uint64_t>(config.seed));
    Rng shuffle_rng = root.substream("shuffle");
    Rng dropout_rng = root.substream("dropout");

    Adam adam(model.params());
    adam.zero_grads();

    TrainState state;
    state.current_lr = config.initial_lr;

    // max_epochs = 0 returns the initial parameters untouched.
    save_checkpoint(model, best_path);
    save_checkpoint(model, last_path);

    std::vector<std::string> train_ids = split.train_ids;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        shuffle_rng.shuffle(train_ids);

        double train_loss = 0.0;
        size_t in_batch = 0;
        for (size_t si = 0; si < train_ids.size(); ++si) {
            const auto& id = train_ids[si];
            const auto& rec = record_of(manifest, id);
            ModelInput input =
                load_model_input(rec, manifest, pipeline, model.cfg.use_depth);
            auto res = model.forward(input.rgb,
                                     input.depth ? &*input.depth : nullptr,
                                     Model::Mode::train, &dropout_rng);
            const double loss = cross_entropy(res.logits, rec.sign_id);
            if (!std::isfinite(loss))
                fail_runtime("training diverged (non-finite loss) at epoch ",
                             epoch, ", sample ", id);
            train_loss += loss;

            Tensor dlogits = cross_entropy_grad(res.logits, rec.sign_id);
            if (config.batch_size > 1)
                for (size_t i = 0; i < dlogits.size(); ++i)
                    dlogits[i] /= static_cast<double>(config.batch_size);
            model.backward(dlogits);
            ++in_batch;

            const bool last_sample = si + 1 == train_ids.size();
            if (in_batch == static_cast<size_t>(config.batch_size) ||
                last_sample) {
                adam.step(state.current_lr);
                adam.zero_grads();
                in_batch = 0;
            }
        }
        if (!train_ids.empty())
            train_loss /= static_cast<double>(train_ids.size());

        ValScores val = run_validation(model, manifest, split.val_ids, pipeline);
        const double prev_best = state.best_val_metric;
        state = lr_schedule_step(state, val.top1, config);

        EpochStats stats{epoch, train_loss, val.loss, val.top1,
                         state.current_lr};
        state.history.push_back(stats);

        nlohmann::json j;
        j["epoch"] = epoch;
        j["train_loss"] = stats.train_loss;
        j["val_loss"] = stats.val_loss;
        j["val_top1"] = stats.val_top1;
        j["lr"] = stats.lr;
        log << j.dump() << "\n" << std::flush;
        if (progress)
            (*progress) << "epoch " << epoch << " train_loss " << stats.train_loss
                        << " val_top1 " << stats.val_top1 << " lr " << stats.lr
                        << "\n";

        // The schedule also resets its counter at the rate reduction, so the
        // best checkpoint is gated on the metric itself.
        if (val.top1 > prev_best) save_checkpoint(model, best_path);
        save_checkpoint(model, last_path);

        if (early_stop_check(state, config)) break;
    }

    return {state, best_path, last_path};
}

}  // namespace slr

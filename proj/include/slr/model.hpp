#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slr/attention.hpp"
#include "slr/backbone.hpp"
#include "slr/fpm.hpp"
#include "slr/layers.hpp"
#include "slr/preprocess.hpp"
#include "slr/recurrent.hpp"

namespace slr {

// The five baseline architectures.
enum class Variant {
    cnn_lstm,
    cnn_fpm_lstm,
    cnn_lstm_attn,
    cnn_fpm_lstm_attn,
    cnn_fpm_blstm_attn,
};

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& s);
bool variant_has_fpm(Variant v);
bool variant_has_attention(Variant v);
bool variant_bidirectional(Variant v);

struct ModelConfig {
    Variant variant = Variant::cnn_fpm_lstm_attn;
    bool use_depth = false;
    int num_classes = 226;
    int hidden = 512;
    int fpm_branch_channels = 128;
    double dropout = 0.25;
    int finetune_last_k_conv = 2;
    double init_state_std = 0.1;
    BackboneConfig backbone = BackboneConfig::vgg16();
    int input_side = 256;

    // Per-modality feature vector width after global average pooling.
    int frame_feature_dim() const;
    // Recurrent encoder input width (doubled by RGB-D late fusion).
    int encoder_input_dim() const;
    // Hidden state width (doubled for BLSTM).
    int encoder_state_dim() const;

    void validate() const;
    bool operator==(const ModelConfig&) const = default;
};

std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);
ModelConfig model_config_from_json_file(const std::string& path);

// Named view of one parameter tensor. Buffers (initial recurrent states)
// carry no grad pointer; frozen tensors have trainable=false.
struct ParamRef {
    std::string name;
    Tensor* value;
    Tensor* grad;
    bool trainable;
};

enum class FeatureLayer { backbone, fpm };

// One baseline network: owns parameters, gradients, and the activation
// cache of the most recent train/analysis forward pass. Inference-mode
// forwards touch no shared state besides the (read-only) parameters.
struct Model {
    ModelConfig cfg;

    Backbone bb_rgb, bb_depth;
    Fpm fpm_rgb, fpm_depth;
    Lstm lstm_fwd, lstm_bwd;
    Attention attn;
    Linear classifier;

    enum class Mode {
        inference,  // dropout off, no caches
        train,      // dropout on, caches kept
        analysis,   // dropout off, caches kept (for grad inspection)
    };

    struct ForwardResult {
        Tensor logits;
        std::optional<AttentionOutput> attention;
    };

    static Model make(const ModelConfig& cfg);
    void init(Rng& rng);

    ForwardResult forward(const ClipTensor& rgb, const ClipTensor* depth,
                          Mode mode, Rng* dropout_rng = nullptr);

    // Requires a previous train/analysis forward. Accumulates parameter
    // gradients through every unfrozen layer.
    void backward(const Tensor& dlogits);

    // Backward chain stopping at the RGB branch's chosen feature layer;
    // returns per-frame gradients on those feature maps. Parameter grads
    // touched along the way are scratch; callers zero_grads() afterwards.
    std::vector<Tensor> backward_to_features(const Tensor& dlogits,
                                             FeatureLayer layer);
    // Activations cached by the last train/analysis forward.
    const std::vector<Tensor>& rgb_feature_maps(FeatureLayer layer) const;

    void zero_grads();
    std::vector<ParamRef> params();

    size_t cached_frames() const { return cache_.t_len; }

private:
    struct BranchCache {
        std::vector<Backbone::FrameCache> bb;
        std::vector<Tensor> bb_out;
        std::vector<Fpm::Cache> fpm;
        std::vector<Tensor> fpm_out;
        size_t fm_h = 0, fm_w = 0;
    };
    struct Cache {
        bool valid = false;
        size_t t_len = 0;
        BranchCache rgb, depth;
        Tensor dropout1_mask;
        Lstm::Cache lstm_f, lstm_b;
        Tensor states;
        Attention::Cache attn;
        AttentionOutput attn_out;
        Tensor context;
        Tensor dropout2_mask;
        Tensor classifier_in;
    };
    Cache cache_;

    Tensor encode_branch(const ClipTensor& clip, const Backbone& bb,
                         const Fpm& fpm, BranchCache* cache) const;
    std::vector<Tensor> backward_common(const Tensor& dlogits, bool full,
                                        FeatureLayer stop_layer);
};

}  // namespace slr

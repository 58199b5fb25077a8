#include "slr/model.hpp"

#include <fstream>

#include <json.hpp>

#include "slr/common.hpp"

namespace slr {

namespace {
const char* kVariantNames[] = {
    "cnn_lstm", "cnn_fpm_lstm", "cnn_lstm_attn", "cnn_fpm_lstm_attn",
    "cnn_fpm_blstm_attn",
};

std::string conv_index_name(int i) {
    std::string s = std::to_string(i);
    return s.size() < 2 ? "0" + s : s;
}
}  // namespace

const char* variant_name(Variant v) {
    return kVariantNames[static_cast<int>(v)];
}

Variant variant_from_name(const std::string& s) {
    for (int i = 0; i < 5; ++i)
        if (s == kVariantNames[i]) return static_cast<Variant>(i);
    fail_invalid("unknown model variant: ", s);
}

bool variant_has_fpm(Variant v) {
    return v == Variant::cnn_fpm_lstm || v == Variant::cnn_fpm_lstm_attn ||
           v == Variant::cnn_fpm_blstm_attn;
}

bool variant_has_attention(Variant v) {
    return v == Variant::cnn_lstm_attn || v == Variant::cnn_fpm_lstm_attn ||
           v == Variant::cnn_fpm_blstm_attn;
}

bool variant_bidirectional(Variant v) {
    return v == Variant::cnn_fpm_blstm_attn;
}

int ModelConfig::frame_feature_dim() const {
    return variant_has_fpm(variant) ? 4 * fpm_branch_channels
                                    : backbone.out_channels();
}

int ModelConfig::encoder_input_dim() const {
    return use_depth ? 2 * frame_feature_dim() : frame_feature_dim();
}

int ModelConfig::encoder_state_dim() const {
    return variant_bidirectional(variant) ? 2 * hidden : hidden;
}

void ModelConfig::validate() const {
    if (num_classes < 2) fail_invalid("num_classes must be >= 2");
    if (hidden < 1) fail_invalid("hidden must be >= 1");
    if (fpm_branch_channels < 1) fail_invalid("fpm_branch_channels must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) fail_invalid("dropout must be in [0,1)");
    if (input_side < 32 || input_side % 32 != 0)
        fail_invalid("input_side must be a positive multiple of 32");
    if (init_state_std < 0.0) fail_invalid("init_state_std must be >= 0");
    backbone.validate();
}

std::string model_config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["variant"] = variant_name(cfg.variant);
    j["modalities"] = cfg.use_depth
                          ? std::vector<std::string>{"rgb", "depth"}
                          : std::vector<std::string>{"rgb"};
    j["num_classes"] = cfg.num_classes;
    j["hidden"] = cfg.hidden;
    j["fpm_branch_channels"] = cfg.fpm_branch_channels;
    j["dropout"] = cfg.dropout;
    j["finetune_last_k_conv"] = cfg.finetune_last_k_conv;
    j["init_state_std"] = cfg.init_state_std;
    j["input_side"] = cfg.input_side;
    if (cfg.backbone.stages == BackboneConfig::vgg16().stages)
        j["backbone"] = "vgg16";
    else if (cfg.backbone.stages == BackboneConfig::stand_in().stages)
        j["backbone"] = "stand_in";
    else
        j["backbone"] = {{"stages", cfg.backbone.stages}};
    return j.dump(2);
}

ModelConfig model_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ModelConfig cfg;
    cfg.variant = variant_from_name(j.at("variant").get<std::string>());
    if (j.contains("modalities")) {
        cfg.use_depth = false;
        for (const auto& m : j["modalities"]) {
            const auto name = m.get<std::string>();
            if (name == "depth")
                cfg.use_depth = true;
            else if (name != "rgb")
                fail_invalid("unknown modality: ", name);
        }
    }
    cfg.num_classes = j.at("num_classes").get<int>();
    cfg.hidden = j.value("hidden", cfg.hidden);
    cfg.fpm_branch_channels =
        j.value("fpm_branch_channels", cfg.fpm_branch_channels);
    cfg.dropout = j.value("dropout", cfg.dropout);
    cfg.finetune_last_k_conv =
        j.value("finetune_last_k_conv", cfg.finetune_last_k_conv);
    cfg.init_state_std = j.value("init_state_std", cfg.init_state_std);
    cfg.input_side = j.value("input_side", cfg.input_side);
    if (j.contains("backbone")) {
        const auto& bj = j["backbone"];
        if (bj.is_string()) {
            const auto name = bj.get<std::string>();
            if (name == "vgg16")
                cfg.backbone = BackboneConfig::vgg16();
            else if (name == "stand_in")
                cfg.backbone = BackboneConfig::stand_in();
            else
                fail_invalid("unknown backbone preset: ", name);
        } else {
            cfg.backbone.stages =
                bj.at("stages").get<std::vector<std::vector<int>>>();
        }
    }
    cfg.validate();
    return cfg;
}

ModelConfig model_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open model config: ", path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return model_config_from_json(text);
}

Model Model::make(const ModelConfig& cfg) {
    cfg.validate();
    Model m;
    m.cfg = cfg;
    m.bb_rgb = Backbone::make(cfg.backbone, cfg.finetune_last_k_conv);
    if (cfg.use_depth)
        m.bb_depth = Backbone::make(cfg.backbone, cfg.finetune_last_k_conv);
    if (variant_has_fpm(cfg.variant)) {
        m.fpm_rgb = Fpm::make(cfg.backbone.out_channels(), cfg.fpm_branch_channels);
        if (cfg.use_depth)
            m.fpm_depth =
                Fpm::make(cfg.backbone.out_channels(), cfg.fpm_branch_channels);
    }
    m.lstm_fwd = Lstm::make(cfg.encoder_input_dim(), cfg.hidden);
    if (variant_bidirectional(cfg.variant))
        m.lstm_bwd = Lstm::make(cfg.encoder_input_dim(), cfg.hidden);
    if (variant_has_attention(cfg.variant))
        m.attn = Attention::make(cfg.encoder_state_dim());
    m.classifier = Linear::make(cfg.encoder_state_dim(), cfg.num_classes);
    return m;
}

void Model::init(Rng& rng) {
    bb_rgb.init(rng);
    if (cfg.use_depth) bb_depth.init(rng);
    if (variant_has_fpm(cfg.variant)) {
        fpm_rgb.init(rng);
        if (cfg.use_depth) fpm_depth.init(rng);
    }
    lstm_fwd.init(rng, cfg.init_state_std);
    if (variant_bidirectional(cfg.variant))
        lstm_bwd.init(rng, cfg.init_state_std);
    if (variant_has_attention(cfg.variant)) attn.init(rng);
    classifier.init(rng);
}

Tensor Model::encode_branch(const ClipTensor& clip, const Backbone& bb,
                            const Fpm& fpm, BranchCache* cache) const {
    const size_t t_len = clip.frames();
    const size_t frame_sz = clip.height() * clip.width() * clip.channels();
    const bool with_fpm = variant_has_fpm(cfg.variant);

    if (cache) {
        cache->bb.assign(t_len, {});
        cache->bb_out.assign(t_len, Tensor());
        cache->fpm.assign(with_fpm ? t_len : 0, {});
        cache->fpm_out.assign(with_fpm ? t_len : 0, Tensor());
    }

    Tensor vecs;
    for (size_t t = 0; t < t_len; ++t) {
        Tensor frame({clip.height(), clip.width(), clip.channels()});
        std::copy(clip.data.data() + t * frame_sz,
                  clip.data.data() + (t + 1) * frame_sz, frame.data());
        Tensor fm = bb.forward(frame, cache ? &cache->bb[t] : nullptr);
        if (cache) {
            cache->fm_h = fm.dim(0);
            cache->fm_w = fm.dim(1);
            cache->bb_out[t] = fm;
        }
        Tensor pooled_src;
        if (with_fpm) {
            Tensor fo = fpm.forward(fm, cache ? &cache->fpm[t] : nullptr);
            if (cache) cache->fpm_out[t] = fo;
            pooled_src = std::move(fo);
        } else {
            pooled_src = std::move(fm);
        }
        Tensor vec = global_average_pool(pooled_src);
        if (t == 0) vecs = Tensor({t_len, vec.size()});
        std::copy(vec.data(), vec.data() + vec.size(),
                  vecs.data() + t * vec.size());
    }
    return vecs;
}

Model::ForwardResult Model::forward(const ClipTensor& rgb,
                                    const ClipTensor* depth, Mode mode,
                                    Rng* dropout_rng) {
    if (rgb.channels() != 3)
        fail_invalid("model: rgb clip must have 3 channels");
    if (cfg.use_depth) {
        if (!depth)
            fail_invalid("model variant uses depth but no depth clip given");
        if (depth->channels() != 3)
            fail_invalid("model: depth clip must be replicated to 3 channels");
        if (depth->frames() != rgb.frames())
            fail_invalid("model: rgb has ", rgb.frames(), " frames, depth has ",
                         depth->frames());
    }
    const bool train = mode == Mode::train;
    const bool keep = mode != Mode::inference;
    if (train && cfg.dropout > 0.0 && !dropout_rng)
        fail_invalid("training forward needs a dropout rng");

    Cache* cache = keep ? &cache_ : nullptr;
    if (keep) {
        cache_ = Cache{};
        cache_.t_len = rgb.frames();
    }

    Tensor xs = encode_branch(rgb, bb_rgb, fpm_rgb, cache ? &cache->rgb : nullptr);
    if (cfg.use_depth) {
        Tensor dvecs = encode_branch(*depth, bb_depth, fpm_depth,
                                     cache ? &cache->depth : nullptr);
        const size_t t_len = xs.dim(0), d = xs.dim(1);
        Tensor fused({t_len, 2 * d});
        for (size_t t = 0; t < t_len; ++t) {
            for (size_t j = 0; j < d; ++j) {
                fused.at(t, j) = xs.at(t, j);
                fused.at(t, d + j) = dvecs.at(t, j);
            }
        }
        xs = std::move(fused);
    }

    Dropout drop{cfg.dropout};
    if (train && cfg.dropout > 0.0) {
        Tensor mask;
        xs = drop.forward_train(xs, *dropout_rng, mask);
        if (keep) cache->dropout1_mask = std::move(mask);
    }

    Tensor states;
    if (variant_bidirectional(cfg.variant)) {
        states = blstm_forward(lstm_fwd, lstm_bwd, xs,
                               cache ? &cache->lstm_f : nullptr,
                               cache ? &cache->lstm_b : nullptr);
    } else {
        states = lstm_fwd.forward(xs, cache ? &cache->lstm_f : nullptr);
    }

    ForwardResult res;
    Tensor feat;
    if (variant_has_attention(cfg.variant)) {
        AttentionOutput ao =
            attn.forward(states, cache ? &cache->attn : nullptr);
        feat = ao.context;
        res.attention = ao;
        if (keep) cache->attn_out = *res.attention;
    } else {
        const size_t t_last = states.dim(0) - 1, d = states.dim(1);
        feat = Tensor({d});
        for (size_t j = 0; j < d; ++j) feat[j] = states.at(t_last, j);
    }
    if (keep) {
        cache->states = states;
        cache->context = feat;
    }

    Tensor cls_in = feat;
    if (train && cfg.dropout > 0.0) {
        Tensor mask;
        cls_in = drop.forward_train(feat, *dropout_rng, mask);
        if (keep) cache->dropout2_mask = std::move(mask);
    }
    if (keep) {
        cache->classifier_in = cls_in;
        cache->valid = true;
    }

    res.logits = classifier.forward(cls_in);
    return res;
}

std::vector<Tensor> Model::backward_common(const Tensor& dlogits, bool full,
                                           FeatureLayer stop_layer) {
    if (!cache_.valid)
        fail_invalid("model backward without a cached forward pass");
    const size_t t_len = cache_.t_len;
    const bool with_fpm = variant_has_fpm(cfg.variant);

    Tensor dfeat = classifier.backward(cache_.classifier_in, dlogits, true);
    if (!cache_.dropout2_mask.empty())
        dfeat = Dropout::backward(dfeat, cache_.dropout2_mask);

    Tensor dstates;
    if (variant_has_attention(cfg.variant)) {
        dstates = attn.backward(cache_.states, cache_.attn, cache_.attn_out,
                                dfeat);
    } else {
        dstates = Tensor(cache_.states.shape());
        const size_t d = dstates.dim(1);
        for (size_t j = 0; j < d; ++j)
            dstates.at(t_len - 1, j) = dfeat[j];
    }

    Tensor dxs;
    if (variant_bidirectional(cfg.variant)) {
        dxs = blstm_backward(lstm_fwd, lstm_bwd, cache_.lstm_f, cache_.lstm_b,
                             dstates);
    } else {
        dxs = lstm_fwd.backward(cache_.lstm_f, dstates);
    }
    if (!cache_.dropout1_mask.empty())
        dxs = Dropout::backward(dxs, cache_.dropout1_mask);

    const size_t feat_dim = static_cast<size_t>(cfg.frame_feature_dim());

    std::vector<Tensor> captured;
    auto branch_backward = [&](BranchCache& bc, Backbone& bb, Fpm& fpm,
                               size_t col0, bool capture) {
        for (size_t t = 0; t < t_len; ++t) {
            Tensor dvec({feat_dim});
            for (size_t j = 0; j < feat_dim; ++j)
                dvec[j] = dxs.at(t, col0 + j);
            Tensor dmap = global_average_pool_grad(dvec, bc.fm_h, bc.fm_w);
            if (capture && stop_layer == FeatureLayer::fpm) {
                captured.push_back(std::move(dmap));
                continue;
            }
            Tensor dbb = with_fpm ? fpm.backward(bc.fpm[t], dmap)
                                  : std::move(dmap);
            if (capture && stop_layer == FeatureLayer::backbone) {
                captured.push_back(std::move(dbb));
                continue;
            }
            bb.backward(dbb, bc.bb[t]);
        }
    };

    // RGB branch first; a feature capture stops there.
    branch_backward(cache_.rgb, bb_rgb, fpm_rgb, 0, !full);
    if (full && cfg.use_depth)
        branch_backward(cache_.depth, bb_depth, fpm_depth, feat_dim, false);
    return captured;
}

void Model::backward(const Tensor& dlogits) {
    backward_common(dlogits, true, FeatureLayer::backbone);
}

std::vector<Tensor> Model::backward_to_features(const Tensor& dlogits,
                                                FeatureLayer layer) {
    if (layer == FeatureLayer::fpm && !variant_has_fpm(cfg.variant))
        fail_invalid("variant ", variant_name(cfg.variant), " has no fpm layer");
    return backward_common(dlogits, false, layer);
}

const std::vector<Tensor>& Model::rgb_feature_maps(FeatureLayer layer) const {
    if (!cache_.valid)
        fail_invalid("no cached forward pass; run analysis mode first");
    if (layer == FeatureLayer::fpm) {
        if (!variant_has_fpm(cfg.variant))
            fail_invalid("variant has no fpm layer");
        return cache_.rgb.fpm_out;
    }
    return cache_.rgb.bb_out;
}

void Model::zero_grads() {
    bb_rgb.zero_grads();
    if (cfg.use_depth) bb_depth.zero_grads();
    if (variant_has_fpm(cfg.variant)) {
        fpm_rgb.zero_grads();
        if (cfg.use_depth) fpm_depth.zero_grads();
    }
    lstm_fwd.zero_grads();
    if (variant_bidirectional(cfg.variant)) lstm_bwd.zero_grads();
    if (variant_has_attention(cfg.variant)) attn.zero_grads();
    classifier.zero_grads();
}

std::vector<ParamRef> Model::params() {
    std::vector<ParamRef> out;
    auto add_conv = [&](const std::string& prefix, Conv2d& c) {
        out.push_back({prefix + ".w", &c.w, &c.gw, c.trainable});
        out.push_back({prefix + ".b", &c.b, &c.gb, c.trainable});
    };
    auto add_backbone = [&](const std::string& prefix, Backbone& bb) {
        for (size_t i = 0; i < bb.convs.size(); ++i)
            add_conv(prefix + ".conv" + conv_index_name(static_cast<int>(i)),
                     bb.convs[i]);
    };
    auto add_fpm = [&](const std::string& prefix, Fpm& f) {
        add_conv(prefix + ".pool_proj", f.pool_proj);
        add_conv(prefix + ".conv3", f.conv3);
        add_conv(prefix + ".conv3_d2", f.conv3_d2);
        add_conv(prefix + ".conv3_d4", f.conv3_d4);
    };
    auto add_lstm = [&](const std::string& prefix, Lstm& l) {
        out.push_back({prefix + ".wx", &l.wx, &l.gwx, l.trainable});
        out.push_back({prefix + ".wh", &l.wh, &l.gwh, l.trainable});
        out.push_back({prefix + ".b", &l.b, &l.gb, l.trainable});
        out.push_back({prefix + ".h0", &l.h0, nullptr, false});
        out.push_back({prefix + ".c0", &l.c0, nullptr, false});
    };

    add_backbone("backbone_rgb", bb_rgb);
    if (cfg.use_depth) add_backbone("backbone_depth", bb_depth);
    if (variant_has_fpm(cfg.variant)) {
        add_fpm("fpm_rgb", fpm_rgb);
        if (cfg.use_depth) add_fpm("fpm_depth", fpm_depth);
    }
    add_lstm("lstm_fwd", lstm_fwd);
    if (variant_bidirectional(cfg.variant)) add_lstm("lstm_bwd", lstm_bwd);
    if (variant_has_attention(cfg.variant)) {
        out.push_back({"attn.v", &attn.v, &attn.gv, attn.trainable});
        out.push_back({"attn.w", &attn.w, &attn.gw, attn.trainable});
        out.push_back({"attn.b", &attn.b, &attn.gb, attn.trainable});
    }
    out.push_back({"classifier.w", &classifier.w, &classifier.gw,
                   classifier.trainable});
    out.push_back({"classifier.b", &classifier.b, &classifier.gb,
                   classifier.trainable});
    return out;
}

}  // namespace slr

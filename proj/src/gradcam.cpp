#include "slr/gradcam.hpp"

#include <algorithm>

#include "slr/common.hpp"
#include "slr/kernels.hpp"

namespace slr {

FeatureLayer feature_layer_from_name(const std::string& name) {
    if (name == "backbone") return FeatureLayer::backbone;
    if (name == "fpm") return FeatureLayer::fpm;
    fail_invalid("unknown feature layer '", name,
                 "'; valid layers: backbone, fpm");
}

const char* feature_layer_name(FeatureLayer layer) {
    return layer == FeatureLayer::backbone ? "backbone" : "fpm";
}

SaliencyClip gradcam_map(Model& model, const ClipTensor& rgb,
                         const ClipTensor* depth, int target_class,
                         FeatureLayer layer) {
    if (layer == FeatureLayer::fpm && !variant_has_fpm(model.cfg.variant))
        fail_invalid("variant ", variant_name(model.cfg.variant),
                     " has no fpm layer; valid layers: backbone");
    if (target_class < 0 || target_class >= model.cfg.num_classes)
        fail_invalid("target class ", target_class, " outside [0, ",
                     model.cfg.num_classes, ")");

    model.forward(rgb, depth ? depth : nullptr, Model::Mode::analysis);

    Tensor dlogits({static_cast<size_t>(model.cfg.num_classes)});
    dlogits[target_class] = 1.0;
    std::vector<Tensor> grads = model.backward_to_features(dlogits, layer);
    const std::vector<Tensor>& acts = model.rgb_feature_maps(layer);
    model.zero_grads();  // feature-path backward leaves scratch grads behind

    const size_t t_len = grads.size();
    const size_t fh = acts[0].dim(0), fw = acts[0].dim(1), fc = acts[0].dim(2);

    std::vector<Tensor> raw(t_len);
    double clip_max = 0.0;
    Tensor channel_w({fc});
    for (size_t t = 0; t < t_len; ++t) {
        // Positive part of the global-average gradient per channel.
        kernels::global_avg_pool(grads[t].data(), static_cast<int>(fh),
                                 static_cast<int>(fw), static_cast<int>(fc),
                                 channel_w.data());
        for (size_t c = 0; c < fc; ++c)
            channel_w[c] = std::max(0.0, channel_w[c]);

        Tensor m({fh, fw});
        for (size_t y = 0; y < fh; ++y)
            for (size_t x = 0; x < fw; ++x) {
                double acc = 0.0;
                const double* ap = acts[t].data() + (y * fw + x) * fc;
                for (size_t c = 0; c < fc; ++c) acc += channel_w[c] * ap[c];
                acc = std::max(0.0, acc / static_cast<double>(fc));
                m.at(y, x) = acc;
                clip_max = std::max(clip_max, acc);
            }
        raw[t] = std::move(m);
    }

    const size_t side_h = rgb.height(), side_w = rgb.width();
    SaliencyClip out;
    out.source_layer = feature_layer_name(layer);
    out.maps = Tensor({t_len, side_h, side_w});
    for (size_t t = 0; t < t_len; ++t) {
        if (clip_max > 0.0)
            for (size_t i = 0; i < raw[t].size(); ++i) raw[t][i] /= clip_max;
        kernels::bilinear_resize(raw[t].data(), static_cast<int>(fh),
                                 static_cast<int>(fw), 1,
                                 out.maps.data() + t * side_h * side_w,
                                 static_cast<int>(side_h),
                                 static_cast<int>(side_w));
    }
    return out;
}

}  // namespace slr

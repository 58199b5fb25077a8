#include "slr/pipeline.hpp"

#include "slr/common.hpp"

namespace slr {

void PipelineConfig::validate() const {
    if (input_side < 32 || input_side % 32 != 0)
        fail_invalid("pipeline input_side must be a positive multiple of 32");
    if (fixed_length < 0) fail_invalid("fixed_length must be >= 0");
    if (crop_size < 0) fail_invalid("crop_size must be >= 0");
    if (mean.size() != 3 || stddev.size() != 3)
        fail_invalid("pipeline mean/std must have 3 channels");
}

ModelInput load_model_input(const SampleRecord& record,
                            const Manifest& manifest,
                            const PipelineConfig& config, bool need_depth) {
    config.validate();

    std::optional<SkeletonTrack> track;
    if (config.crop_size > 0) {
        if (record.skeleton_path.empty())
            fail_runtime("sample ", record.sample_id,
                         ": joint crop configured but no skeleton file");
        track = load_skeleton_csv(manifest.resolve_path(record.skeleton_path));
    }

    auto run = [&](Modality m) {
        ClipTensor clip = decode_clip(record, m, manifest.base_dir);
        if (track)
            clip = crop_about_joint(clip, *track, config.crop_joint,
                                    config.crop_size);
        clip = resize_frames(clip, config.input_side);
        if (config.fixed_length > 0)
            clip = resample_frames(clip, config.fixed_length);
        if (m == Modality::depth) {
            clip = scale_depth_unit_range(clip);
            clip = replicate_depth_channels(clip);
        }
        return normalize(clip, config.mean, config.stddev);
    };

    ModelInput input;
    input.rgb = run(Modality::rgb);
    if (need_depth) input.depth = run(Modality::depth);
    return input;
}

}  // namespace slr

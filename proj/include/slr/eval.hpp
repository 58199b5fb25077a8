#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slr/manifest.hpp"
#include "slr/model.hpp"
#include "slr/pipeline.hpp"

namespace slr {

// One scored sample: the full class ranking (best first) and the truth.
struct Prediction {
    std::string sample_id;
    std::vector<int> ranking;
    int true_class = -1;
};
using PredictionSet = std::vector<Prediction>;

// Deterministic ranking: descending logit, ties broken by ascending class.
std::vector<int> ranking_from_logits(const Tensor& logits);

// Fraction of samples whose truth appears in the first n ranks.
double top_n_rate(const PredictionSet& preds, int n);

// counts[y][p]: samples of true class y predicted (rank 1) as p.
std::vector<std::vector<int64_t>> confusion_matrix(const PredictionSet& preds,
                                                   int num_classes);

struct EvalReport {
    std::map<int, double> top_n_rates;  // N in {1, 3, 5}
    std::vector<std::vector<int64_t>> confusion;
    std::vector<double> per_sign_top1;
    std::map<std::string, double> per_signer_top1;
    size_t n_samples = 0;
};

// Inference (dropout disabled) over the given sample ids, in id order.
PredictionSet predict_samples(Model& model, const Manifest& manifest,
                              const std::vector<std::string>& ids,
                              const PipelineConfig& pipeline);

EvalReport compute_report(const PredictionSet& preds, const Manifest& manifest,
                          int num_classes);

std::string report_to_json(const EvalReport& report);

// JSON-lines, one prediction per line, for offline rescoring.
void dump_predictions(const PredictionSet& preds, const std::string& path);
PredictionSet load_predictions(const std::string& path);

}  // namespace slr

#include "slr/eval.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "slr/common.hpp"

namespace slr {

std::vector<int> ranking_from_logits(const Tensor& logits) {
    std::vector<int> order(logits.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (logits[a] != logits[b]) return logits[a] > logits[b];
        return a < b;
    });
    return order;
}

double top_n_rate(const PredictionSet& preds, int n) {
    if (n < 1) fail_invalid("top-n requires n >= 1");
    if (preds.empty()) fail_invalid("empty prediction set");
    size_t hits = 0;
    for (const auto& p : preds) {
        const int limit = std::min<int>(n, static_cast<int>(p.ranking.size()));
        for (int i = 0; i < limit; ++i)
            if (p.ranking[i] == p.true_class) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

std::vector<std::vector<int64_t>> confusion_matrix(const PredictionSet& preds,
                                                   int num_classes) {
    if (preds.empty()) fail_invalid("empty prediction set");
    std::vector<std::vector<int64_t>> m(
        num_classes, std::vector<int64_t>(num_classes, 0));
    for (const auto& p : preds) {
        if (p.true_class < 0 || p.true_class >= num_classes ||
            p.ranking.empty())
            fail_invalid("malformed prediction for sample ", p.sample_id);
        ++m[p.true_class][p.ranking[0]];
    }
    return m;
}

PredictionSet predict_samples(Model& model, const Manifest& manifest,
                              const std::vector<std::string>& ids,
                              const PipelineConfig& pipeline) {
    std::vector<std::string> missing;
    PredictionSet preds;
    preds.reserve(ids.size());
    for (const auto& id : ids) {
        const SampleRecord* rec = nullptr;
        for (const auto& r : manifest.records)
            if (r.sample_id == id) {
                rec = &r;
                break;
            }
        if (!rec) {
            missing.push_back(id);
            continue;
        }
        ModelInput input =
            load_model_input(*rec, manifest, pipeline, model.cfg.use_depth);
        auto res = model.forward(input.rgb,
                                 input.depth ? &*input.depth : nullptr,
                                 Model::Mode::inference);
        Prediction p;
        p.sample_id = id;
        p.ranking = ranking_from_logits(res.logits);
        p.true_class = rec->sign_id;
        preds.push_back(std::move(p));
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
        fail_runtime("samples not in manifest: ", list);
    }
    return preds;
}

EvalReport compute_report(const PredictionSet& preds, const Manifest& manifest,
                          int num_classes) {
    EvalReport rep;
    rep.n_samples = preds.size();
    for (int n : {1, 3, 5}) rep.top_n_rates[n] = top_n_rate(preds, n);
    rep.confusion = confusion_matrix(preds, num_classes);

    std::vector<int64_t> sign_total(num_classes, 0), sign_hit(num_classes, 0);
    std::map<std::string, std::pair<int64_t, int64_t>> signer;  // hit, total
    for (const auto& p : preds) {
        const bool hit = !p.ranking.empty() && p.ranking[0] == p.true_class;
        ++sign_total[p.true_class];
        sign_hit[p.true_class] += hit;
        const auto& rec = manifest.find(p.sample_id);
        auto& s = signer[rec.signer_id];
        s.first += hit;
        ++s.second;
    }
    rep.per_sign_top1.assign(num_classes, 0.0);
    for (int c = 0; c < num_classes; ++c)
        if (sign_total[c] > 0)
            rep.per_sign_top1[c] =
                static_cast<double>(sign_hit[c]) / sign_total[c];
    for (const auto& [id, s] : signer)
        rep.per_signer_top1[id] = static_cast<double>(s.first) / s.second;
    return rep;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    for (const auto& [n, rate] : report.top_n_rates)
        j["top_n_rates"][std::to_string(n)] = rate;
    j["confusion"] = report.confusion;
    j["per_sign_top1"] = report.per_sign_top1;
    j["per_signer_top1"] = report.per_signer_top1;
    j["n_samples"] = report.n_samples;
    return j.dump(2);
}

void dump_predictions(const PredictionSet& preds, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_runtime("cannot write predictions: ", path);
    for (const auto& p : preds) {
        nlohmann::json j;
        j["sample_id"] = p.sample_id;
        j["ranking"] = p.ranking;
        j["true_class"] = p.true_class;
        out << j.dump() << "\n";
    }
}

PredictionSet load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_runtime("cannot open predictions: ", path);
    PredictionSet preds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Prediction p;
        p.sample_id = j.at("sample_id").get<std::string>();
        p.ranking = j.at("ranking").get<std::vector<int>>();
        p.true_class = j.at("true_class").get<int>();
        preds.push_back(std::move(p));
    }
    return preds;
}

}  // namespace slr

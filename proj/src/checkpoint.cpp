#include "slr/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "slr/common.hpp"

namespace slr {

namespace {
constexpr char kMagic[8] = {'S', 'L', 'R', 'C', 'K', 'P', 'T', '\n'};
constexpr uint32_t kVersion = 1;
}

void save_checkpoint(Model& model, const std::string& path) {
    auto params = model.params();

    nlohmann::json header;
    header["config"] = nlohmann::json::parse(model_config_to_json(model.cfg));
    auto& table = header["tensors"];
    table = nlohmann::json::array();
    for (const auto& p : params)
        table.push_back({{"name", p.name}, {"shape", p.value->shape()}});
    const std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) fail_runtime("cannot write checkpoint: ", path);
    out.write(kMagic, sizeof(kMagic));
    const uint32_t version = kVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    for (const auto& p : params)
        out.write(reinterpret_cast<const char*>(p.value->data()),
                  static_cast<std::streamsize>(p.value->size() * sizeof(double)));
    if (!out) fail_runtime("write failed: ", path);
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_runtime("cannot open checkpoint: ", path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        fail_runtime("not a checkpoint file: ", path);
    uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (version != kVersion)
        fail_runtime("unsupported checkpoint version ", version, " in ", path);
    uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    if (!in) fail_runtime("truncated checkpoint header: ", path);

    nlohmann::json header = nlohmann::json::parse(htext);
    ModelConfig cfg = model_config_from_json(header.at("config").dump());
    Model model = Model::make(cfg);
    auto params = model.params();

    const auto& table = header.at("tensors");
    if (table.size() != params.size())
        fail_runtime("checkpoint lists ", table.size(), " tensors, model has ",
                     params.size());
    for (size_t i = 0; i < params.size(); ++i) {
        const auto name = table[i].at("name").get<std::string>();
        const auto shape = table[i].at("shape").get<std::vector<size_t>>();
        if (name != params[i].name)
            fail_runtime("checkpoint tensor ", i, " is '", name,
                         "', expected '", params[i].name, "'");
        if (shape != params[i].value->shape())
            fail_runtime("checkpoint tensor '", name,
                         "' has a shape inconsistent with the config");
        in.read(reinterpret_cast<char*>(params[i].value->data()),
                static_cast<std::streamsize>(params[i].value->size() *
                                             sizeof(double)));
        if (!in) fail_runtime("truncated checkpoint data at '", name, "'");
    }
    return model;
}

}  // namespace slr

#pragma once

#include <string>

#include "slr/model.hpp"

namespace slr {

// Single-file parameter container: magic + version, a JSON header holding
// the ModelConfig and the named tensor table, then the raw values. Loading
// rebuilds the model from the stored config and validates every shape.
void save_checkpoint(Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace slr

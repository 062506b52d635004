#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "orthojoint/core.hpp"
#include "orthojoint/eval.hpp"

namespace orthojoint {

inline constexpr int kModelFormatVersion = 1;

std::string_view to_string(KernelKind k);
KernelKind parse_kernel_kind(std::string_view s);

// A trained model plus the metadata needed to reproduce it.
struct ModelFile {
  JointModel model;
  TrainConfig config;
  std::optional<std::uint64_t> seed;
  std::string trace_digest;
};

// FNV-1a over the 17-digit text of every trace entry.
std::string trace_digest(const FitReport& r);

nlohmann::json config_to_json(const TrainConfig& cfg);
// Overlays the keys present in j onto base. Unknown keys are an error.
TrainConfig config_from_json(const nlohmann::json& j, TrainConfig base = {});
TrainConfig load_config(const std::string& path, TrainConfig base = {});

nlohmann::json model_to_json(const ModelFile& m);
ModelFile model_from_json(const nlohmann::json& j);
void save_model(const std::string& path, const ModelFile& m);
ModelFile load_model(const std::string& path);

nlohmann::json report_to_json(const FitReport& r);
nlohmann::json eval_to_json(const EvalResult& r);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace orthojoint

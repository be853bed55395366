#pragma once

#include "somps/harness/early_detection.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/harness/trainer.hpp"

#include <string>

namespace somps {

/// Pretty-printed JSON with a fixed key order, so equal inputs give equal bytes.
std::string report_json(const EvalReport& report, const std::string& config_echo, const std::string& split_name);
std::string curve_json(const EarlyDetectionCurve& curve, const std::string& config_echo);
std::string training_log_json(const TrainingLog& log, ModelVariant variant, const std::string& config_echo);

/// CSV rows `cutoff_hours,accuracy,f1_real,f1_fake,f1_macro,eligible,valid` from curve.json text.
std::string curve_csv(const std::string& curve_json_text, const std::string& source = "<curve>");

} // namespace somps

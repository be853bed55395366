#include "somps/harness/report.hpp"

#include "somps/error.hpp"
#include "somps/harness/artifacts.hpp"

#include <json.hpp>

#include <sstream>

namespace somps {

namespace {

using Json = nlohmann::ordered_json;

Json metrics_json(const Metrics& m) {
    Json j;
    j["accuracy"] = m.accuracy;
    j["f1_real"] = m.f1_real;
    j["f1_fake"] = m.f1_fake;
    j["f1_macro"] = m.f1_macro;
    j["confusion"] = {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"fn", m.confusion.fn}, {"tn", m.confusion.tn}};
    return j;
}

Json cutoff_json(const std::optional<double>& c) { return c ? Json(*c) : Json(nullptr); }

} // namespace

std::string report_json(const EvalReport& report, const std::string& config_echo, const std::string& split_name) {
    Json j;
    j["format_version"] = kReportFormatVersion;
    j["variant"] = std::string(to_string(report.variant));
    j["split"] = split_name;
    j["cutoff_hours"] = cutoff_json(report.cutoff_hours);
    j["articles"] = report.probabilities.size();
    j["skipped"] = report.skipped;
    j.update(metrics_json(report.metrics));
    j["mean_loss"] = report.mean_loss;
    Json probs = Json::array();
    for (const auto& [id, p] : report.probabilities) probs.push_back({{"news_id", id}, {"p_real", p}});
    j["probabilities"] = std::move(probs);
    j["config"] = config_echo;
    return j.dump(2) + "\n";
}

std::string curve_json(const EarlyDetectionCurve& curve, const std::string& config_echo) {
    Json j;
    j["format_version"] = kReportFormatVersion;
    j["variant"] = std::string(to_string(curve.variant));
    Json rows = Json::array();
    for (const auto& p : curve.points) {
        Json row;
        row["cutoff_hours"] = p.cutoff_hours;
        row["valid"] = p.valid();
        if (p.valid()) {
            const auto& m = p.report->metrics;
            row["accuracy"] = m.accuracy;
            row["f1_real"] = m.f1_real;
            row["f1_fake"] = m.f1_fake;
            row["f1_macro"] = m.f1_macro;
            row["test_articles"] = p.report->probabilities.size();
        } else {
            for (const auto* key : {"accuracy", "f1_real", "f1_fake", "f1_macro", "test_articles"}) row[key] = nullptr;
        }
        row["eligible"] = p.eligible;
        row["ineligible"] = p.ineligible;
        row["note"] = p.note;
        rows.push_back(std::move(row));
    }
    j["points"] = std::move(rows);
    j["config"] = config_echo;
    return j.dump(2) + "\n";
}

std::string training_log_json(const TrainingLog& log, ModelVariant variant, const std::string& config_echo) {
    Json j;
    j["format_version"] = kReportFormatVersion;
    j["variant"] = std::string(to_string(variant));
    j["best_epoch"] = log.best_epoch;
    Json rows = Json::array();
    for (const auto& e : log.epochs) {
        rows.push_back({{"epoch", e.epoch},
                        {"train_loss", e.train_loss},
                        {"train_accuracy", e.train_accuracy},
                        {"val_loss", e.val_loss},
                        {"val_f1_macro", e.val_f1_macro},
                        {"improved", e.improved}});
    }
    j["epochs"] = std::move(rows);
    j["config"] = config_echo;
    return j.dump(2) + "\n";
}

std::string curve_csv(const std::string& curve_json_text, const std::string& source) {
    Json j;
    try {
        j = Json::parse(curve_json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!j.contains("points") || !j["points"].is_array()) throw ParseError(source + ": missing 'points' array");
    std::ostringstream out;
    out << "cutoff_hours,accuracy,f1_real,f1_fake,f1_macro,eligible,valid\n";
    auto cell = [](const Json& v) { return v.is_null() ? std::string() : v.dump(); };
    for (const auto& p : j["points"]) {
        try {
            out << p.at("cutoff_hours").dump() << ',' << cell(p.at("accuracy")) << ',' << cell(p.at("f1_real")) << ','
                << cell(p.at("f1_fake")) << ',' << cell(p.at("f1_macro")) << ',' << p.at("eligible").dump() << ','
                << (p.at("valid").get<bool>() ? 1 : 0) << '\n';
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source + ": malformed point: " + e.what());
        }
    }
    return out.str();
}

} // namespace somps

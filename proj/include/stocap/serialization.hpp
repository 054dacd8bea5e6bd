#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "stocap/experiments.hpp"
#include "stocap/traffic.hpp"

namespace stocap {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const IntensityBounds& b);
void from_json(const Json& j, IntensityBounds& b);
void to_json(Json& j, const CfbCurve& c);
void from_json(const Json& j, CfbCurve& c);
void to_json(Json& j, const IntensityHistogram& h);  // [[level, count], ...]
void from_json(const Json& j, IntensityHistogram& h);
void to_json(Json& j, const BreakdownObservation& b);
void from_json(const Json& j, BreakdownObservation& b);
void to_json(Json& j, const DetectionConfig& c);
void from_json(const Json& j, DetectionConfig& c);
void to_json(Json& j, const DetectionResult& r);
void from_json(const Json& j, DetectionResult& r);
void to_json(Json& j, const FitResult& r);
void to_json(Json& j, const PlmCurve& c);
void from_json(const Json& j, PlmCurve& c);
void to_json(Json& j, const ErrorReport& r);
void to_json(Json& j, const RegressionResult& r);
void to_json(Json& j, const SummaryStats& s);
void to_json(Json& j, const ReplicateRecord& r);
void to_json(Json& j, const ExperimentCase& c);
void to_json(Json& j, const CaseSummary& s);
void to_json(Json& j, const RegressionReport& r);
void to_json(Json& j, const CensoringPoint& p);
void to_json(Json& j, const MethodComparison& m);

// Thrown for unreadable or unwritable files, mapped to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
// Parent directories are created as needed.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace stocap

template <>
struct nlohmann::adl_serializer<stocap::WeibullParams> {
  template <typename BasicJson>
  static stocap::WeibullParams from_json(const BasicJson& j) {
    return {j.at("scale").template get<double>(), j.at("shape").template get<double>()};
  }
  template <typename BasicJson>
  static void to_json(BasicJson& j, const stocap::WeibullParams& p) {
    j = {{"scale", p.scale()}, {"shape", p.shape()}};
  }
};

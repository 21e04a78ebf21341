#pragma once

#include "flowcast/forecast.hpp"
#include "flowcast/schedule.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace flowcast {

/// Model file content does not match the expected layout.
class SchemaError : public InputError
{
  public:
    using InputError::InputError;
};

/// Model JSON:
/// `{group, direction, schedule_fingerprint, period_count, reference_period,
///   intercept, coefficients[], diagnostics{...}, fitted_at{from, to} | null}`.
/// Non-finite numbers are written as the strings "inf", "-inf" and "nan".
nlohmann::json to_json(const RegressionModel& model);
RegressionModel model_from_json(const nlohmann::json& doc);

struct LoadedModel
{
    RegressionModel model;
    std::vector<std::string> warnings;
};

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void save_model(const RegressionModel& model, const std::filesystem::path& path);

/// Parses and validates a model file. A schedule fingerprint mismatch against
/// `expected` is reported as a warning, not an error.
LoadedModel load_model(const std::filesystem::path& path, const PeriodSchedule* expected = nullptr);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const DayGrouping& grouping);
DayGrouping grouping_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const stats::AnovaTable<double>& table);

} // namespace flowcast

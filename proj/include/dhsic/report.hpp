#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dhsic/independence_test.hpp"
#include "dhsic/sim.hpp"

namespace dhsic {

inline constexpr const char* kVersion = "0.1.0";

/// Flat object: method, statistic, scale, z_score, p_value, alpha, reject,
/// n, d, gamma, scheme, num_permutations, seed. Absent optionals are null.
nlohmann::json to_json(const TestResult& result);

/// Rates per method plus the config echo; wall time only when requested.
nlohmann::json to_json(const sim::StudyReport& report, bool include_timing);

/// Header "f,lambda,method,replicates,rejections,rate" and one row per method.
std::string study_csv(const sim::StudyReport& report);

/// "square lambda=0 t1=0.040 t2=0.050"
std::string table_row(const sim::StudyReport& report);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace dhsic

#pragma once

#include "fractrans/diagnostics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fractrans {

inline constexpr int series_schema_version = 1;

// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// "# key=value" lines heading every CSV output.
struct CsvProvenance {
    std::string config_hash;
    int registry_version = 0;
};

std::vector<std::string> series_columns(const std::vector<double>& betas, const std::vector<std::string>& residual_ids);
std::string series_csv(const std::vector<DiagnosticsRecord>& records, const std::vector<double>& betas,
                       const CsvProvenance& prov);

// Generic table with the same header block.
std::string table_csv(const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
                      const CsvProvenance& prov);

} // namespace fractrans

#pragma once

#include "otsense/estimate.hpp"
#include "otsense/estimators.hpp"
#include "otsense/sample.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace otsense {

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/// Header row plus numeric rows. Quoted fields ("a,b", doubled quotes) and
/// CRLF endings are accepted. Cells must be finite decimal numbers; a bad
/// cell raises DataError("non-numeric at row R, column NAME") with R counted
/// from the header as row 1.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text);

/// Column positions for a selector: comma-separated names or 1-based
/// positions / ranges ("1-3"). A token that is a column name is taken as a
/// name. Unknown names raise DataError("missing column ...").
std::vector<Index> resolve_columns(const std::vector<std::string>& header, std::string_view selector);

/// Routes selected columns to x and y. An empty input selector means every
/// column not selected as output.
SensitivityDataset read_dataset_csv(const std::filesystem::path& path, std::string_view inputs,
                                    std::string_view outputs);

/// %.17g
std::string format_number(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& values);

struct ResultsDocument {
  IndexEstimate estimate;
  std::optional<double> threshold;
};

/// {method, bound, inputs:[{name, index, components?, ci?}], separations:[...],
///  bootstrap?, threshold?}
std::string results_json(const IndexEstimate& est, std::optional<double> threshold = std::nullopt);
ResultsDocument parse_results_json(std::string_view text);
ResultsDocument read_results_json(const std::filesystem::path& path);

/// indices.json, indices.csv, separations.csv (and bootstrap.csv when a
/// bootstrap is attached); with `plot`, indices.svg and separations.svg.
void write_results(const IndexEstimate& est, std::optional<double> threshold, const std::filesystem::path& dir,
                   bool plot = false);

void write_smap(const SensitivityMap& map, const std::filesystem::path& dir);

/// Bar chart of the indices, CI whiskers when bootstrapped, dashed line at
/// the threshold.
std::string indices_svg(const IndexEstimate& est, std::optional<double> threshold = std::nullopt);

/// One panel per input: scaled separation against class representative.
std::string separations_svg(const IndexEstimate& est, const std::vector<std::string>& inputs = {});

}  // namespace otsense

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace cdrlab::report {

struct ReportResult {
  std::size_t runs = 0;             // runs with readable logs
  std::size_t eval_rows = 0;        // raw eval.csv rows read
  std::size_t final_records = 0;    // rows entering the summary table
  std::size_t summary_rows = 0;
  std::size_t progress_series = 0;
  bool lambda_sweep = false;
  std::vector<std::string> problems;  // missing or corrupt files, one per line
  std::filesystem::path report_dir;
};

// Reads <out_dir>/runs/*/ and writes <out_dir>/report/: the final-evaluation
// summary (CSV and text), training-progress series with phase boundaries,
// the lambda-sweep series when several lambdas are present, SVG charts, and
// report.json with counts. Problems are listed and skipped.
ReportResult generate_report(const std::filesystem::path& out_dir);

}  // namespace cdrlab::report

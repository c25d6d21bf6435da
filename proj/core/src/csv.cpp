#include "cdrlab/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cdrlab/errors.hpp"

namespace cdrlab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

long long parse_int(std::string_view s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw FormatError("not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

void check_header(const std::vector<std::vector<std::string>>& rows, std::string_view header) {
  if (rows.empty()) throw FormatError("csv: missing header");
  std::string joined;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    if (i) joined += ',';
    joined += rows[0][i];
  }
  if (joined != header) throw FormatError("csv: unexpected header '" + joined + "'");
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string> fields;
      std::size_t f = 0;
      while (true) {
        const std::size_t c = line.find(',', f);
        fields.emplace_back(line.substr(f, c == std::string_view::npos ? std::string_view::npos : c - f));
        if (c == std::string_view::npos) break;
        f = c + 1;
      }
      rows.push_back(std::move(fields));
    }
    pos = end + 1;
  }
  return rows;
}

std::string eval_csv(std::span<const eval::EvalRecord> records) {
  std::string out(kEvalCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.run_id + ',' + r.strategy + ',' + r.ordering + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.phase) + ',' + std::to_string(r.timestep) + ',' + eval::to_string(r.eval_env) + ',' +
           std::to_string(r.episode) + ',' + format_double(r.r_ep) + ',' + format_double(r.continuity) + ',' +
           format_double(r.d_tgt) + '\n';
  }
  return out;
}

std::vector<eval::EvalRecord> parse_eval_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  check_header(rows, kEvalCsvHeader);
  std::vector<eval::EvalRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 11) throw FormatError("eval csv: line " + std::to_string(i + 1) + " has " + std::to_string(f.size()) + " fields");
    eval::EvalRecord r;
    r.run_id = f[0];
    r.strategy = f[1];
    r.ordering = f[2];
    r.seed = parse_u64(f[3]);
    r.phase = static_cast<int>(parse_int(f[4]));
    r.timestep = parse_int(f[5]);
    r.eval_env = eval::parse_eval_env(f[6]);
    r.episode = static_cast<int>(parse_int(f[7]));
    r.r_ep = parse_double(f[8]);
    r.continuity = parse_double(f[9]);
    r.d_tgt = parse_double(f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string train_csv(std::span<const strategy::TrainLogRow> rows) {
  std::string out(kTrainCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.run_id + ',' + std::to_string(r.phase) + ',' + std::to_string(r.timestep) + ',' +
           format_double(r.mean_ep_reward) + ',' + format_double(r.actor_loss) + ',' + format_double(r.critic_loss) +
           ',' + format_double(r.penalty) + ',' + format_double(r.entropy) + '\n';
  }
  return out;
}

std::vector<strategy::TrainLogRow> parse_train_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  check_header(rows, kTrainCsvHeader);
  std::vector<strategy::TrainLogRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 8) throw FormatError("train csv: line " + std::to_string(i + 1) + " has wrong field count");
    out.push_back({f[0], static_cast<int>(parse_int(f[1])), parse_int(f[2]), parse_double(f[3]), parse_double(f[4]),
                   parse_double(f[5]), parse_double(f[6]), parse_double(f[7])});
  }
  return out;
}

std::string summary_csv(std::span<const eval::SummaryRow> rows) {
  std::string out(kSummaryCsvHeader);
  out += '\n';
  auto m = [](const eval::MetricSummary& s) {
    return format_double(s.mean) + ',' + format_double(s.std) + ',' + format_double(s.median);
  };
  for (const auto& r : rows) {
    out += r.strategy + ',' + r.ordering + ',' + eval::to_string(r.eval_env) + ',' + std::to_string(r.count) + ',' +
           m(r.r_ep) + ',' + m(r.continuity) + ',' + m(r.d_tgt) + '\n';
  }
  return out;
}

std::string summary_table(std::span<const eval::SummaryRow> rows) {
  std::ostringstream os;
  auto cell = [](const eval::MetricSummary& s, int prec) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(prec) << s.mean << " +- " << s.std;
    return c.str();
  };
  os << std::left << std::setw(16) << "strategy" << std::setw(10) << "ordering" << std::setw(12) << "env"
     << std::setw(7) << "n" << std::setw(24) << "r_ep" << std::setw(20) << "continuity" << "d_tgt\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(16) << r.strategy << std::setw(10) << r.ordering << std::setw(12)
       << eval::to_string(r.eval_env) << std::setw(7) << r.count << std::setw(24) << cell(r.r_ep, 2) << std::setw(20)
       << cell(r.continuity, 2) << cell(r.d_tgt, 4) << '\n';
  }
  return os.str();
}

}  // namespace cdrlab::io

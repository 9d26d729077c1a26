#include "mlebound/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "mlebound/error.hpp"

namespace mlebound::report {

namespace {

std::string optional_field(const std::optional<double>& v) {
  return v ? shortest(*v) : std::string{};
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "human") return Format::Human;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw DomainError("unknown format '" + name + "' (human, csv, json)");
}

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string six_sig(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string three_dp(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

std::string render_bound(const BoundBreakdown& b, long n, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Human:
      os << "formula      " << b.formula_id << '\n'
         << "n            " << n << '\n'
         << "stein_term   " << six_sig(b.stein_term) << '\n'
         << "tail_term    " << six_sig(b.tail_term) << '\n'
         << "taylor_term  " << six_sig(b.taylor_term) << '\n'
         << "total        " << six_sig(b.total) << '\n';
      break;
    case Format::Csv:
      os << kBoundCsvHeader << '\n'
         << b.formula_id << ',' << n << ',' << shortest(b.stein_term) << ','
         << shortest(b.tail_term) << ',' << shortest(b.taylor_term) << ','
         << shortest(b.total) << '\n';
      break;
    case Format::Json: {
      nlohmann::json j = {{"formula", b.formula_id},
                          {"n", n},
                          {"stein_term", b.stein_term},
                          {"tail_term", b.tail_term},
                          {"taylor_term", b.taylor_term},
                          {"total", b.total}};
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string render_simulations(const std::vector<SimulationResult>& rows,
                               Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Human: {
      os << pad_left("n", 8) << pad_left("empirical", 14) << pad_left("std_err", 12)
         << pad_left("new_bound", 11) << pad_left("ar_bound", 10) << '\n';
      for (const auto& r : rows) {
        os << pad_left(std::to_string(r.config.n), 8)
           << pad_left(six_sig(r.empirical_distance), 14)
           << pad_left(six_sig(r.standard_error), 12)
           << pad_left(r.bound_new ? three_dp(*r.bound_new) : "-", 11)
           << pad_left(r.bound_ar ? three_dp(*r.bound_ar) : "-", 10) << '\n';
      }
      break;
    }
    case Format::Csv:
      os << kSimulationCsvHeader << '\n';
      for (const auto& r : rows) {
        os << r.config.n << ',' << shortest(r.empirical_distance) << ','
           << shortest(r.standard_error) << ',' << optional_field(r.bound_new) << ','
           << optional_field(r.bound_ar) << ',' << r.config.seed << ','
           << r.config.trials << '\n';
      }
      break;
    case Format::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) {
        arr.push_back({{"n", r.config.n},
                       {"empirical_distance", r.empirical_distance},
                       {"standard_error", r.standard_error},
                       {"new_bound", optional_json(r.bound_new)},
                       {"ar_bound", optional_json(r.bound_ar)},
                       {"seed", r.config.seed},
                       {"trials", r.config.trials}});
      }
      os << arr.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string render_table1_bounds(const std::vector<Table1BoundRow>& rows,
                                 Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Human:
      os << pad_left("n", 8) << pad_left("new_bound", 11) << pad_left("ar_bound", 10)
         << '\n';
      for (const auto& r : rows) {
        os << pad_left(std::to_string(r.n), 8) << pad_left(three_dp(r.new_bound), 11)
           << pad_left(three_dp(r.ar_bound), 10) << '\n';
      }
      break;
    case Format::Csv:
      os << kTableBoundsCsvHeader << '\n';
      for (const auto& r : rows) {
        os << r.n << ',' << shortest(r.new_bound) << ',' << shortest(r.ar_bound) << '\n';
      }
      break;
    case Format::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) {
        arr.push_back({{"n", r.n}, {"new_bound", r.new_bound}, {"ar_bound", r.ar_bound}});
      }
      os << arr.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

}  // namespace mlebound::report

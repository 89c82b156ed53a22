#pragma once

#include <jumpscope/detector.hpp>
#include <jumpscope/model.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jumpscope {

struct Sample {
  double x = 0.0;
  double value = 0.0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Reads `x,value` rows (optional header, LF or CRLF, blank lines ignored).
inline std::vector<Sample> parse_csv(std::istream& in) {
  std::vector<Sample> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto comma = text.find(',');
    Sample s;
    const bool ok = comma != std::string_view::npos &&
                    detail::parse_double(text.substr(0, comma), s.x) &&
                    detail::parse_double(text.substr(comma + 1), s.value);
    if (!ok) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'x,value'");
    }
    rows.push_back(s);
  }
  return rows;
}

/// Checks that rows sit on the uniform grid k/K of [0,1] and returns the
/// values in order.
inline std::vector<double> validate_unit_grid(const std::vector<Sample>& rows) {
  if (rows.size() < 2) throw Error(ErrorCode::ParseError, "need at least two samples");
  for (const auto& r : rows)
    if (r.x < -kDomainSlack || r.x > 1.0 + kDomainSlack)
      throw Error(ErrorCode::DomainNotUnit,
                  "abscissa " + std::to_string(r.x) +
                      " outside [0,1]; rescale x to [0,1] and multiply M1 by L and M2 by L^2");
  if (std::abs(rows.front().x) > kDomainSlack || std::abs(rows.back().x - 1.0) > kDomainSlack)
    throw Error(ErrorCode::DomainNotUnit,
                "samples must start at x = 0 and end at x = 1; rescale x to [0,1] and multiply "
                "M1 by L and M2 by L^2");
  const double dx = (rows.back().x - rows.front().x) / static_cast<double>(rows.size() - 1);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const double step = rows[k + 1].x - rows[k].x;
    if (!(step > 0.0) || std::abs(step - dx) > 1e-9 * dx)
      throw Error(ErrorCode::NonUniformGrid, "spacing between rows " + std::to_string(k + 1) + " and " +
                                                 std::to_string(k + 2) + " departs from dx = " +
                                                 std::to_string(dx));
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& r : rows) values.push_back(r.value);
  return values;
}

inline SampledGridSource ingest_csv(const std::string& path, double delta_raw, double m1) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open input '" + path + "'");
  return SampledGridSource(validate_unit_grid(parse_csv(in)), delta_raw, m1);
}

/// Plain-text series for plotting tools: x, f_j, flag ("smooth", else the
/// kind of event that masked the node).
inline void write_plot_table(std::ostream& out, const DetectionReport& report) {
  out << "# x\tf_j\tflag\n";
  std::size_t d = 0, m = 0;
  const auto& der = report.derivative;
  const auto& msk = report.masked;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  while (d < der.size() || m < msk.size()) {
    if (m == msk.size() || (d < der.size() && der[d].index < msk[m].index)) {
      out << der[d].x << '\t' << der[d].value << "\tsmooth\n";
      ++d;
    } else {
      out << msk[m].x << '\t' << msk[m].value << '\t' << to_string(msk[m].reason) << '\n';
      ++m;
    }
  }
}

}  // namespace jumpscope

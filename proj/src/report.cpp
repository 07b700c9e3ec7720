#include "lmax/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace lmax {

Rational Rational::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    long long den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rational(std::stoll(digits), den);
  }
  return Rational(std::stoll(s), 1);
}

std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::hypothesis_not_met: return "hypothesis-not-met";
  }
  return "?";
}

void Report::add(const std::string& name, bool ok, json details) {
  assertions.push_back({name, ok ? Status::pass : Status::fail, std::move(details)});
}

void Report::add_hypothesis_flag(const std::string& name, json details) {
  assertions.push_back({name, Status::hypothesis_not_met, std::move(details)});
}

bool Report::all_pass() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.status == Status::pass; });
}

bool Report::any_fail() const {
  return std::any_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.status == Status::fail; });
}

bool Report::any_hypothesis_flag() const {
  return std::any_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.status == Status::hypothesis_not_met; });
}

json Report::to_json() const {
  json j;
  j["experiment"] = experiment;
  json as = json::array();
  for (const auto& a : assertions) {
    json e;
    e["name"] = a.name;
    e["status"] = status_name(a.status);
    if (!a.details.is_null()) e["details"] = a.details;
    as.push_back(std::move(e));
  }
  j["assertions"] = std::move(as);
  if (!data.is_null()) j["data"] = data;
  return j;
}

json make_manifest(const json& config, std::uint64_t seed) {
  json m;
  m["version"] = kVersion;
  m["config_hash"] = config_hash(config);
  m["seed"] = seed;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  m["generated_at"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  return m;
}

namespace {

struct Extent {
  double lo = 0, hi = 1;
  void grow(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::vector<std::string>& series_names,
                           const std::vector<std::vector<double>>& xs,
                           const std::vector<std::vector<double>>& ys, bool log_y) {
  const int W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 40;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (std::size_t s = 0; s < xs.size(); ++s)
    for (std::size_t i = 0; i < xs[s].size(); ++i) {
      double y = log_y ? std::log10(std::max(ys[s][i], 1e-300)) : ys[s][i];
      xlo = std::min(xlo, xs[s][i]);
      xhi = std::max(xhi, xs[s][i]);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (xhi <= xlo) xhi = xlo + 1;
  if (yhi <= ylo) yhi = ylo + 1;
  auto px = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * (W - ML - MR); };
  auto py = [&](double yv) {
    double y = log_y ? std::log10(std::max(yv, 1e-300)) : yv;
    return H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
  out << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
      << "' stroke='black'/>\n";
  out << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
      << "' stroke='black'/>\n";
  for (std::size_t s = 0; s < xs.size(); ++s) {
    out << "<polyline fill='none' stroke='" << colors[s % 6] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs[s].size(); ++i)
      out << px(xs[s][i]) << "," << py(ys[s][i]) << " ";
    out << "'/>\n";
    out << "<text x='" << W - MR - 4 << "' y='" << MT + 16 * (s + 1)
        << "' text-anchor='end' font-size='12' fill='" << colors[s % 6] << "'>" << series_names[s]
        << "</text>\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", log_y ? std::pow(10, ylo) : ylo);
  out << "<text x='" << ML - 6 << "' y='" << H - MB << "' text-anchor='end' font-size='11'>"
      << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", log_y ? std::pow(10, yhi) : yhi);
  out << "<text x='" << ML - 6 << "' y='" << MT + 10 << "' text-anchor='end' font-size='11'>"
      << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", xlo);
  out << "<text x='" << ML << "' y='" << H - MB + 16 << "' font-size='11'>" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.4g", xhi);
  out << "<text x='" << W - MR << "' y='" << H - MB + 16
      << "' text-anchor='end' font-size='11'>" << buf << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string svg_heatmap(const std::string& title, const std::vector<double>& cells,
                        std::int64_t rows, std::int64_t cols) {
  double vmax = 0;
  for (double v : cells) vmax = std::max(vmax, std::isfinite(v) ? v : 0.0);
  if (vmax <= 0) vmax = 1;
  const int px = std::max<int>(1, static_cast<int>(512 / std::max(rows, cols)));
  std::ostringstream out;
  int W = static_cast<int>(cols) * px, H = static_cast<int>(rows) * px;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H + 28
      << "'>\n<text x='4' y='16' font-size='13'>" << title << "</text>\n";
  out << "<g transform='translate(0,24)'>\n";
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t c = 0; c < cols; ++c) {
      double v = cells[r * cols + c];
      int g = 255 - static_cast<int>(std::min(1.0, v / vmax) * 255);
      out << "<rect x='" << c * px << "' y='" << (rows - 1 - r) * px << "' width='" << px
          << "' height='" << px << "' fill='rgb(" << g << "," << g << "," << g << ")'/>\n";
    }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace lmax

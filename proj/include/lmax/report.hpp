#pragma once

#include <string>
#include <vector>

#include "lmax/io.hpp"

namespace lmax {

enum class Status { pass, fail, hypothesis_not_met };

std::string status_name(Status s);

struct Assertion {
  std::string name;
  Status status = Status::pass;
  json details;
};

/// Structured experiment output: per-assertion status plus free-form data,
/// serialized for the CLI. Exit codes derive from the worst status.
struct Report {
  std::string experiment;
  std::vector<Assertion> assertions;
  json data;

  void add(const std::string& name, bool ok, json details = {});
  void add_hypothesis_flag(const std::string& name, json details = {});
  bool all_pass() const;
  bool any_fail() const;
  bool any_hypothesis_flag() const;
  json to_json() const;
};

/// Run manifest written before results: config hash, seed, version. The
/// generated_at stamp is the only non-reproducible field.
json make_manifest(const json& config, std::uint64_t seed);

constexpr const char* kVersion = "lmax 0.1.0";

/// Minimal static SVG polyline chart; every figure mirrors an emitted CSV.
std::string svg_line_chart(const std::string& title, const std::vector<std::string>& series_names,
                           const std::vector<std::vector<double>>& xs,
                           const std::vector<std::vector<double>>& ys, bool log_y = false);

/// Grayscale heatmap of a 2-D field (row-major, dims[0] x dims[1]).
std::string svg_heatmap(const std::string& title, const std::vector<double>& cells,
                        std::int64_t rows, std::int64_t cols);

}  // namespace lmax

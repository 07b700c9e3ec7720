#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lmax/domain.hpp"
#include "lmax/field.hpp"
#include "lmax/whitney.hpp"

namespace lmax {

using json = nlohmann::ordered_json;

// Lengths serialize as exact {mantissa, scale} pairs: value = m * 2^s.
json dyadic_to_json(const Dyadic& d);
Dyadic dyadic_from_json(const json& j);

/// Mask file: 16-byte header (magic "LMAXMASK", u16 n, u16 dims[3],
/// little-endian, unused dims zero), then row-major cell bytes (0/1).
void write_mask(const std::string& path, int n, const std::array<std::int64_t, kMaxDim>& dims,
                const std::vector<std::uint8_t>& cells);
struct MaskData {
  int n = 0;
  std::array<std::int64_t, kMaxDim> dims{};
  std::vector<std::uint8_t> cells;
};
MaskData read_mask(const std::string& path);

/// Field file: 32-byte header (magic "LMAXFLD", u8 n, u32 dims[3],
/// i64 h mantissa, i32 h scale, little-endian), payload f64 row-major.
void write_field(const std::string& path, const Domain& dom, const std::vector<double>& cells);
struct FieldData {
  int n = 0;
  std::array<std::int64_t, kMaxDim> dims{};
  Dyadic h;
  std::vector<double> cells;
};
FieldData read_field(const std::string& path);

/// CSV import for n = 1: one sample per line.
std::vector<double> read_field_csv_1d(const std::string& path);

/// Domain spec JSON: {dimension, kind, shape params or mask path, bbox, h}.
std::shared_ptr<Domain> domain_from_spec(const json& spec, const std::string& base_dir = "");
json domain_to_spec(const Domain& dom);

/// Covering export: list of {center m/s pairs, half-side, band, provenance}.
json covering_to_json(const WhitneyCovering& w, const Domain& dom);

/// Weight spec: {"kind":"constant"|"power"|"field"|"csv", ...}.
ScalarField field_from_spec(std::shared_ptr<const Domain> dom, const json& spec,
                            const std::string& base_dir = "");

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
json read_json(const std::string& path);

/// Minimal CSV writer: header then rows, all values pre-formatted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Deterministic FNV-1a hash of a canonical JSON dump.
std::string config_hash(const json& j);

std::string format_double(double v);

}  // namespace lmax

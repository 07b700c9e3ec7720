#include "lmax/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lmax/errors.hpp"

namespace lmax {

json dyadic_to_json(const Dyadic& d) { return json{{"m", d.mantissa_ll()}, {"s", d.scale()}}; }

Dyadic dyadic_from_json(const json& j) {
  if (j.is_number_integer()) return Dyadic(j.get<long long>());
  if (j.is_number_float()) return Dyadic::from_double(j.get<double>());
  return Dyadic::from_parts(j.at("m").get<long long>(), j.at("s").get<int>());
}

namespace {

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back((v >> 8) & 0xff);
}
void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xff);
}
void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back((v >> (8 * i)) & 0xff);
}
std::uint64_t get_uint(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void dump(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace

void write_mask(const std::string& path, int n, const std::array<std::int64_t, kMaxDim>& dims,
                const std::vector<std::uint8_t>& cells) {
  std::vector<std::uint8_t> b;
  const char magic[] = "LMAXMASK";
  b.insert(b.end(), magic, magic + 8);
  put_u16(b, static_cast<std::uint16_t>(n));
  for (int i = 0; i < kMaxDim; ++i)
    put_u16(b, static_cast<std::uint16_t>(i < n ? dims[i] : 0));
  b.insert(b.end(), cells.begin(), cells.end());
  dump(path, b);
}

MaskData read_mask(const std::string& path) {
  auto b = slurp(path);
  if (b.size() < 16 || std::memcmp(b.data(), "LMAXMASK", 8) != 0)
    throw io_error("bad mask header: " + path);
  MaskData m;
  m.n = static_cast<int>(get_uint(b.data() + 8, 2));
  if (m.n < 1 || m.n > kMaxDim) throw io_error("mask: bad dimension");
  std::int64_t total = 1;
  for (int i = 0; i < m.n; ++i) {
    m.dims[i] = static_cast<std::int64_t>(get_uint(b.data() + 10 + 2 * i, 2));
    total *= m.dims[i];
  }
  if (static_cast<std::int64_t>(b.size()) != 16 + total) throw io_error("mask: payload size");
  m.cells.assign(b.begin() + 16, b.end());
  return m;
}

void write_field(const std::string& path, const Domain& dom, const std::vector<double>& cells) {
  if (static_cast<std::int64_t>(cells.size()) != dom.cell_count())
    throw usage_error("write_field: size mismatch");
  std::vector<std::uint8_t> b;
  const char magic[] = "LMAXFLD";
  b.insert(b.end(), magic, magic + 7);
  b.push_back(static_cast<std::uint8_t>(dom.dim()));
  for (int i = 0; i < kMaxDim; ++i)
    put_u32(b, static_cast<std::uint32_t>(i < dom.dim() ? dom.dims()[i] : 0));
  put_u64(b, static_cast<std::uint64_t>(dom.h().mantissa_ll()));
  put_u32(b, static_cast<std::uint32_t>(dom.h().scale()));
  for (double v : cells) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(b, bits);
  }
  dump(path, b);
}

FieldData read_field(const std::string& path) {
  auto b = slurp(path);
  if (b.size() < 32 || std::memcmp(b.data(), "LMAXFLD", 7) != 0)
    throw io_error("bad field header: " + path);
  FieldData f;
  f.n = b[7];
  if (f.n < 1 || f.n > kMaxDim) throw io_error("field: bad dimension");
  std::int64_t total = 1;
  for (int i = 0; i < f.n; ++i) {
    f.dims[i] = static_cast<std::int64_t>(get_uint(b.data() + 8 + 4 * i, 4));
    total *= f.dims[i];
  }
  auto mantissa = static_cast<long long>(get_uint(b.data() + 20, 8));
  auto scale = static_cast<std::int32_t>(get_uint(b.data() + 28, 4));
  f.h = Dyadic::from_parts(mantissa, scale);
  if (static_cast<std::int64_t>(b.size()) != 32 + 8 * total)
    throw io_error("field: payload size");
  f.cells.resize(total);
  for (std::int64_t i = 0; i < total; ++i) {
    std::uint64_t bits = get_uint(b.data() + 32 + 8 * i, 8);
    std::memcpy(&f.cells[i], &bits, 8);
  }
  return f;
}

std::vector<double> read_field_csv_1d(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(std::stod(line));
  }
  return out;
}

namespace {

Point point_from_json(const json& arr, int n) {
  Point p;
  p.n = n;
  for (int i = 0; i < n; ++i) p.x[i] = dyadic_from_json(arr.at(i));
  return p;
}

json point_to_json(const Point& p) {
  json arr = json::array();
  for (int i = 0; i < p.n; ++i) arr.push_back(dyadic_to_json(p.x[i]));
  return arr;
}

}  // namespace

std::shared_ptr<Domain> domain_from_spec(const json& spec, const std::string& base_dir) {
  int n = spec.at("dimension").get<int>();
  std::string kind = spec.at("kind").get<std::string>();
  Dyadic h = dyadic_from_json(spec.at("h"));
  if (kind == "mask") {
    std::string path = spec.at("mask_path").get<std::string>();
    if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
    MaskData m = read_mask(path);
    if (m.n != n) throw io_error("mask dimension mismatch");
    Point lo = point_from_json(spec.at("bbox").at("lo"), n);
    return Domain::from_mask(n, m.dims, std::move(m.cells), lo, h);
  }
  Point lo = point_from_json(spec.at("bbox").at("lo"), n);
  Point hi = point_from_json(spec.at("bbox").at("hi"), n);
  if (kind == "punctured_space")
    return Domain::punctured_space(n, point_from_json(spec.at("puncture"), n), lo, hi, h);
  if (kind == "half_space")
    return Domain::half_space(n, spec.value("axis", 0), dyadic_from_json(spec.at("offset")), lo,
                              hi, h);
  if (kind == "open_box") {
    if (spec.contains("puncture"))
      return Domain::punctured_box(n, lo, hi, point_from_json(spec.at("puncture"), n), h);
    return Domain::open_box(n, lo, hi, h);
  }
  if (kind == "box_annulus")
    return Domain::box_annulus(n, lo, hi, point_from_json(spec.at("inner_lo"), n),
                               point_from_json(spec.at("inner_hi"), n), h);
  throw usage_error("unknown domain kind: " + kind);
}

json domain_to_spec(const Domain& dom) {
  json j;
  j["dimension"] = dom.dim();
  j["kind"] = kind_name(dom.kind());
  j["bbox"] = {{"lo", point_to_json(dom.bbox_lo())}, {"hi", point_to_json(dom.bbox_hi())}};
  j["h"] = dyadic_to_json(dom.h());
  return j;
}

json covering_to_json(const WhitneyCovering& w, const Domain& dom) {
  json j;
  j["t"] = w.t;
  j["beta"] = w.beta.str();
  j["band_floor"] = w.band_floor;
  j["cube_count"] = w.cubes.size();
  json cubes = json::array();
  for (const auto& wc : w.cubes) {
    Cube q = wc.cube.to_cube(dom.dim());
    json c;
    c["center"] = point_to_json(q.center);
    c["half_side"] = dyadic_to_json(q.half);
    c["band"] = wc.band;
    c["provenance"] = wc.prov == Provenance::kept_whole ? "kept-whole" : "subdivided-child";
    cubes.push_back(std::move(c));
  }
  j["cubes"] = std::move(cubes);
  return j;
}

ScalarField field_from_spec(std::shared_ptr<const Domain> dom, const json& spec,
                            const std::string& base_dir) {
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") return ScalarField::constant(dom, spec.value("value", 1.0));
  if (kind == "power") {
    Point c = point_from_json(spec.at("center"), dom->dim());
    return ScalarField::power(dom, spec.at("alpha").get<double>(), c);
  }
  if (kind == "field") {
    std::string path = spec.at("path").get<std::string>();
    if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
    FieldData f = read_field(path);
    if (f.n != dom->dim()) throw io_error("field dimension mismatch");
    return ScalarField::from_cells(dom, std::move(f.cells));
  }
  if (kind == "csv") {
    std::string path = spec.at("path").get<std::string>();
    if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
    return ScalarField::from_cells(dom, read_field_csv_1d(path));
  }
  throw usage_error("unknown field kind: " + kind);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return json::parse(read_text(path)); }

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  write_text(path, out.str());
}

std::string config_hash(const json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace lmax

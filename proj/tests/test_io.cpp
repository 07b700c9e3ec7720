#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "lmax/errors.hpp"
#include "lmax/report.hpp"
#include "lmax/rng.hpp"
#include "lmax/whitney.hpp"

using namespace lmax;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("lmax_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

}  // namespace

TEST_CASE("dyadic json round trip") {
  Dyadic d = Dyadic::from_parts(13, -7);
  json j = dyadic_to_json(d);
  CHECK(j.at("m") == 13);
  CHECK(j.at("s") == -7);
  CHECK(dyadic_from_json(j) == d);
  CHECK(dyadic_from_json(json(3)) == Dyadic(3));
  CHECK(dyadic_from_json(json(0.25)) == Dyadic::pow2(-2));
}

TEST_CASE("mask file round trip, header checked") {
  TempDir tmp;
  std::array<std::int64_t, kMaxDim> dims{8, 4, 0};
  std::vector<std::uint8_t> cells(32);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i % 3 == 0;
  write_mask(tmp.file("m.mask"), 2, dims, cells);
  MaskData m = read_mask(tmp.file("m.mask"));
  CHECK(m.n == 2);
  CHECK(m.dims[0] == 8);
  CHECK(m.dims[1] == 4);
  CHECK(m.cells == cells);
  write_text(tmp.file("bad.mask"), "NOTAMASKxxxxxxxxxxxx");
  CHECK_THROWS_AS(read_mask(tmp.file("bad.mask")), lmax::io_error);
  CHECK_THROWS_AS(read_mask(tmp.file("missing.mask")), lmax::io_error);
}

TEST_CASE("field file round trip preserves doubles bit for bit") {
  TempDir tmp;
  auto dom = Domain::open_box(2, pt2(0, 0), pt2(1, 1), Dyadic::pow2(-3));
  Rng rng(8);
  std::vector<double> cells(dom->cell_count());
  for (auto& v : cells) v = rng.uniform(0, 1e9);
  write_field(tmp.file("f.bin"), *dom, cells);
  FieldData f = read_field(tmp.file("f.bin"));
  CHECK(f.n == 2);
  CHECK(f.dims[0] == 8);
  CHECK(f.h == dom->h());
  REQUIRE(f.cells.size() == cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(f.cells[i] == cells[i]);
}

TEST_CASE("csv import for one-dimensional fields") {
  TempDir tmp;
  write_text(tmp.file("f.csv"), "# comment\n1.5\n2.5\n0\n");
  auto v = read_field_csv_1d(tmp.file("f.csv"));
  REQUIRE(v.size() == 3);
  CHECK(v[1] == 2.5);
}

TEST_CASE("domain spec json round trips through the factory") {
  json spec;
  spec["dimension"] = 2;
  spec["kind"] = "open_box";
  spec["bbox"] = {{"lo", json::array({json{{"m", 0}, {"s", 0}}, json{{"m", 0}, {"s", 0}}})},
                  {"hi", json::array({json{{"m", 1}, {"s", 0}}, json{{"m", 1}, {"s", 0}}})}};
  spec["h"] = {{"m", 1}, {"s", -4}};
  spec["puncture"] = json::array({json{{"m", 1}, {"s", -1}}, json{{"m", 1}, {"s", -1}}});
  auto dom = domain_from_spec(spec);
  CHECK(dom->dim() == 2);
  CHECK(dom->dims()[0] == 16);
  CHECK(dom->distance(pt2(0.5, 0.5)).is_zero());  // punctured at the center
  json back = domain_to_spec(*dom);
  CHECK(back.at("kind") == "open_box");
}

TEST_CASE("mask-backed domain spec") {
  TempDir tmp;
  std::array<std::int64_t, kMaxDim> dims{16, 16, 0};
  std::vector<std::uint8_t> cells(256, 1);
  write_mask(tmp.file("dom.mask"), 2, dims, cells);
  json spec;
  spec["dimension"] = 2;
  spec["kind"] = "mask";
  spec["mask_path"] = "dom.mask";
  spec["bbox"] = {{"lo", json::array({json{{"m", 0}, {"s", 0}}, json{{"m", 0}, {"s", 0}}})}};
  spec["h"] = {{"m", 1}, {"s", -4}};
  auto dom = domain_from_spec(spec, tmp.path.string());
  CHECK(dom->kind() == DomainKind::mask);
  CHECK(dom->distance(pt2(0.5, 0.5)) == Dyadic::from_double(0.5));
}

TEST_CASE("covering export carries exact centers and provenance") {
  auto dom = Domain::punctured_box(2, pt2(0, 0), pt2(1, 1), pt2(0.5, 0.5), Dyadic::pow2(-5));
  WhitneyCovering w = build_whitney(*dom, Rational(1, 2), 5);
  json j = covering_to_json(w, *dom);
  CHECK(j.at("cube_count").get<std::size_t>() == w.cubes.size());
  const auto& first = j.at("cubes").at(0);
  CHECK(first.contains("center"));
  CHECK(first.contains("half_side"));
  CHECK(first.contains("band"));
  std::string prov = first.at("provenance").get<std::string>();
  CHECK((prov == "kept-whole" || prov == "subdivided-child"));
}

TEST_CASE("config hash is deterministic and order-sensitive input safe") {
  json a = {{"x", 1}, {"y", "z"}};
  json b = {{"x", 1}, {"y", "z"}};
  CHECK(config_hash(a) == config_hash(b));
  b["x"] = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("report json and statuses") {
  Report rep;
  rep.experiment = "demo";
  rep.add("ok", true, {{"v", 1}});
  rep.add_hypothesis_flag("hyp", {{"c", 2}});
  CHECK_FALSE(rep.all_pass());
  CHECK_FALSE(rep.any_fail());
  CHECK(rep.any_hypothesis_flag());
  json j = rep.to_json();
  CHECK(j.at("assertions").size() == 2);
  CHECK(j.at("assertions").at(1).at("status") == "hypothesis-not-met");
}

TEST_CASE("manifest carries version, hash and seed") {
  json m = make_manifest(json{{"a", 1}}, 42);
  CHECK(m.at("seed") == 42);
  CHECK(m.at("version") == kVersion);
  CHECK(m.contains("config_hash"));
  CHECK(m.contains("generated_at"));
}

TEST_CASE("svg emitters produce well-formed documents") {
  std::string chart = svg_line_chart("t", {"a"}, {{1, 2, 3}}, {{1.0, 4.0, 2.0}});
  CHECK(chart.find("<svg") != std::string::npos);
  CHECK(chart.find("polyline") != std::string::npos);
  std::string heat = svg_heatmap("h", {0.0, 1.0, 0.5, 0.25}, 2, 2);
  CHECK(heat.find("rect") != std::string::npos);
}

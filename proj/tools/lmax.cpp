#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "lmax/cloud.hpp"
#include "lmax/cz.hpp"
#include "lmax/errors.hpp"
#include "lmax/parallel.hpp"
#include "lmax/report.hpp"
#include "lmax/verification.hpp"

namespace fs = std::filesystem;
using namespace lmax;

namespace {

constexpr int kExitOk = 0, kExitError = 1, kExitHypothesis = 2, kExitUsage = 64, kExitIo = 74;

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json cfg = path.empty() ? json::object() : read_json(path);
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw usage_error("override must be key=value: " + kv);
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    try {
      cfg[key] = json::parse(val);
    } catch (...) {
      cfg[key] = val;
    }
  }
  return cfg;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

void write_manifest(const std::string& dir, const json& cfg, std::uint64_t seed) {
  write_text(out_path(dir, "manifest.json"), make_manifest(cfg, seed).dump(2) + "\n");
}

std::shared_ptr<Domain> domain_of(const json& cfg, const std::string& base_dir) {
  if (!cfg.contains("domain")) throw usage_error("config: missing \"domain\"");
  return domain_from_spec(cfg.at("domain"), base_dir);
}

Rational beta_of(const json& cfg, const std::string& flag_beta) {
  if (!flag_beta.empty()) return Rational::parse(flag_beta);
  if (cfg.contains("beta")) {
    if (cfg.at("beta").is_string()) return Rational::parse(cfg.at("beta").get<std::string>());
    return Rational::parse(format_double(cfg.at("beta").get<double>()));
  }
  return Rational(1, 2);
}

CandidateLattice lattice_of(const json& cfg, const Domain& dom, const Rational& beta,
                            bool dense_flag) {
  std::string kind = "dyadic";
  std::int64_t step = 1;
  if (cfg.contains("lattice")) {
    kind = cfg.at("lattice").value("widths", "dyadic");
    step = cfg.at("lattice").value("offset_step", 1);
  }
  CandidateLattice lat = (dense_flag || kind == "dense") ? CandidateLattice::dense(dom, beta)
                                                         : CandidateLattice::dyadic_default(dom, beta);
  lat.offset_step = step;
  return lat;
}

ExperimentConfig experiment_config(const json& cfg, const std::string& base_dir,
                                   const std::string& flag_beta, std::uint64_t seed) {
  ExperimentConfig ec;
  ec.domain = domain_of(cfg, base_dir);
  ec.beta = beta_of(cfg, flag_beta);
  if (cfg.contains("u")) ec.u = field_from_spec(ec.domain, cfg.at("u"), base_dir);
  if (cfg.contains("v")) ec.v = field_from_spec(ec.domain, cfg.at("v"), base_dir);
  double p = cfg.value("p", 2.0), q = cfg.value("q", 2.0);
  ec.exps = ExponentPair(p, q);
  ec.seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : seed;
  ec.lattice = lattice_of(cfg, *ec.domain, ec.beta, false);
  if (cfg.contains("bank")) {
    const auto& b = cfg.at("bank");
    ec.bank.whitney_count = b.value("whitney_count", ec.bank.whitney_count);
    ec.bank.bump_count = b.value("bump_count", ec.bank.bump_count);
    if (b.contains("power_profiles"))
      ec.bank.power_profiles = b.at("power_profiles").get<std::vector<double>>();
  }
  if (cfg.contains("tolerances")) {
    const auto& t = cfg.at("tolerances");
    ec.doubling_cap = t.value("doubling_cap", ec.doubling_cap);
    ec.constant_cap = t.value("constant_cap", ec.constant_cap);
    ec.ainfty_delta_min = t.value("ainfty_delta_min", ec.ainfty_delta_min);
  }
  if (cfg.contains("sample_widths"))
    ec.sample_widths = cfg.at("sample_widths").get<std::vector<std::int64_t>>();
  return ec;
}

int exit_for(const Report& rep) {
  if (rep.any_fail()) return kExitError;
  if (rep.any_hypothesis_flag()) return kExitHypothesis;
  return kExitOk;
}

void print_report(const Report& rep) {
  for (const auto& a : rep.assertions)
    std::cout << "[" << status_name(a.status) << "] " << rep.experiment << "/" << a.name << "\n";
}

int cmd_distance(const json& cfg, const std::string& base_dir, const std::string& out,
                 const std::string& point_str, std::uint64_t seed) {
  auto dom = domain_of(cfg, base_dir);
  write_manifest(out, cfg, seed);
  if (!point_str.empty()) {
    Point p;
    p.n = dom->dim();
    std::stringstream ss(point_str);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',') && i < dom->dim()) p.x[i++] = Dyadic::from_double(std::stod(tok));
    Dyadic d = dom->distance(p);
    std::cout << "distance = " << d.to_double() << " (" << d.str() << ")\n";
  }
  // node distance field sampled at cell centers, exported as a field file
  std::vector<double> cells(dom->cell_count());
  for (std::int64_t f = 0; f < dom->cell_count(); ++f)
    cells[f] = dom->cell_center_distance(f).to_double();
  write_field(out_path(out, "distance.bin"), *dom, cells);
  if (dom->dim() == 2)
    write_text(out_path(out, "distance.svg"),
               svg_heatmap("d_inf to complement", cells, dom->dims()[0], dom->dims()[1]));
  std::cout << "wrote " << out << "/distance.bin\n";
  return kExitOk;
}

int cmd_whitney(const json& cfg, const std::string& base_dir, const std::string& out,
                const std::string& flag_beta, int t, std::uint64_t seed) {
  auto dom = domain_of(cfg, base_dir);
  Rational beta = beta_of(cfg, flag_beta);
  if (t <= 0) t = whitney_minimal_t(beta);
  write_manifest(out, cfg, seed);
  WhitneyCovering w = build_whitney(*dom, beta, t);
  auto cov = check_coverage(w, *dom);
  auto inv = check_invariants(w, *dom);
  write_text(out_path(out, "covering.json"), covering_to_json(w, *dom).dump() + "\n");
  json sum;
  sum["t"] = t;
  sum["beta"] = beta.str();
  sum["cubes"] = w.cubes.size();
  sum["covered"] = cov.covered;
  sum["disjoint"] = cov.disjoint;
  sum["interior_nodes"] = cov.interior_nodes;
  sum["property_i"] = inv.property_i;
  sum["band_sandwich"] = inv.band_sandwich;
  write_text(out_path(out, "whitney_summary.json"), sum.dump(2) + "\n");
  std::cout << "covering: " << w.cubes.size() << " cubes, covered=" << cov.covered
            << " disjoint=" << cov.disjoint << " property_i=" << inv.property_i << "\n";
  return cov.covered && cov.disjoint && inv.property_i && inv.band_sandwich ? kExitOk : kExitError;
}

int cmd_cloud(const json& cfg, const std::string& base_dir, const std::string& out,
              const std::string& flag_beta, const std::string& center_str, double half,
              std::uint64_t seed) {
  auto dom = domain_of(cfg, base_dir);
  Rational beta = beta_of(cfg, flag_beta);
  write_manifest(out, cfg, seed);
  Cube q;
  q.center.n = dom->dim();
  std::stringstream ss(center_str);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',') && i < dom->dim())
    q.center.x[i++] = Dyadic::from_double(std::stod(tok));
  q.half = Dyadic::from_double(half);
  Cloud c = compute_cloud(*dom, q, beta);
  write_mask(out_path(out, "cloud.mask"), dom->dim(), dom->dims(), c.cells);
  json sum;
  sum["measure"] = c.measure;
  sum["base_measure"] = std::pow(2 * half, dom->dim());
  sum["ratio"] = c.measure / std::pow(2 * half, dom->dim());
  sum["band_min"] = c.band_min;
  sum["band_max"] = c.band_max;
  sum["refinement"] = c.refinement;
  write_text(out_path(out, "cloud_summary.json"), sum.dump(2) + "\n");
  std::cout << "cloud measure " << c.measure << " (ratio " << sum["ratio"] << ")\n";
  return kExitOk;
}

int cmd_maximal(const json& cfg, const std::string& base_dir, const std::string& out,
                const std::string& flag_beta, const std::string& mode_str,
                const std::string& field_path, bool dense, double alpha_frac,
                std::uint64_t seed) {
  auto dom = domain_of(cfg, base_dir);
  Rational beta = beta_of(cfg, flag_beta);
  write_manifest(out, cfg, seed);
  ScalarField f = [&] {
    if (!field_path.empty()) {
      FieldData fd = read_field(field_path);
      return ScalarField::from_cells(dom, std::move(fd.cells));
    }
    if (cfg.contains("f")) return field_from_spec(dom, cfg.at("f"), base_dir);
    return ScalarField::constant(dom, 1.0);
  }();
  MaxMode mode = MaxMode::uncentered;
  if (mode_str == "centered") mode = MaxMode::centered;
  else if (mode_str == "truncated") mode = MaxMode::truncated;
  else if (mode_str == "weighted") mode = MaxMode::weighted;
  else if (mode_str == "fractional") mode = MaxMode::fractional;
  else if (mode_str != "uncentered") throw usage_error("unknown mode " + mode_str);

  MaximalRequest req;
  req.f = &f;
  req.beta = beta;
  req.mode = mode;
  req.alpha_frac = alpha_frac;
  std::optional<ScalarField> sigma;
  if (mode == MaxMode::weighted) {
    ScalarField v = cfg.contains("v") ? field_from_spec(dom, cfg.at("v"), base_dir)
                                      : ScalarField::constant(dom, 1.0);
    sigma = dual_weight(v, cfg.value("p", 2.0)).sigma;
    req.sigma = &*sigma;
  }
  req.lattice = lattice_of(cfg, *dom, beta, dense);
  MaximalResult m = evaluate(req);
  write_field(out_path(out, "maximal.bin"), *dom, m.value);
  json wit = json::array();
  for (std::int64_t c = 0; c < dom->cell_count(); ++c) {
    if (m.flagged[c]) continue;
    json e;
    e["cell"] = c;
    e["w"] = m.witness[c].w;
    json a = json::array();
    for (int i = 0; i < dom->dim(); ++i) a.push_back(m.witness[c].a[i]);
    e["a"] = a;
    wit.push_back(std::move(e));
  }
  json sidecar;
  sidecar["mode"] = mode_str;
  sidecar["beta"] = beta.str();
  sidecar["flagged"] = m.flagged_count();
  sidecar["witnesses"] = std::move(wit);
  write_text(out_path(out, "maximal_witness.json"), sidecar.dump() + "\n");
  if (dom->dim() == 2)
    write_text(out_path(out, "maximal.svg"),
               svg_heatmap("maximal function (" + mode_str + ")", m.value, dom->dims()[0],
                           dom->dims()[1]));
  std::cout << "maximal field written, flagged cells: " << m.flagged_count() << "\n";
  return kExitOk;
}

int cmd_weights(const json& cfg, const std::string& base_dir, const std::string& out,
                const std::string& flag_beta, std::uint64_t seed) {
  ExperimentConfig ec = experiment_config(cfg, base_dir, flag_beta, seed);
  write_manifest(out, cfg, ec.seed);
  Workbench wb = Workbench::prepare(ec);
  json j;
  auto dbl_u = doubling_constant(wb.u, ec.beta, wb.sample);
  auto dbl_s = doubling_constant(wb.sigma, ec.beta, wb.sample);
  auto apq = apq_constant(wb.u, wb.sigma, ec.exps, wb.sample, true, ec.beta);
  Rng rng(ec.seed);
  auto ain = ainfty_estimate(wb.sigma, ec.beta, wb.sample, rng);
  j["u_doubling"] = dbl_u.unbounded ? -1.0 : dbl_u.constant;
  j["sigma_doubling"] = dbl_s.unbounded ? -1.0 : dbl_s.constant;
  j["apq_beta"] = apq.constant;
  j["ainfty"] = {{"c", ain.c}, {"delta", ain.delta}};
  try {
    auto rhi = reverse_holder_exponent(wb.sigma, ec.beta, wb.sample);
    j["rhi"] = {{"found", rhi.found}, {"eps", rhi.eps}, {"constant", rhi.constant}};
  } catch (const std::exception& e) {
    j["rhi"] = {{"error", e.what()}};
  }
  SawyerOptions sopts;
  sopts.lattice = wb.lattice;
  auto saw = sawyer_testing_constant(wb.u, wb.sigma, ec.exps, ec.beta, wb.sample, sopts);
  j["sawyer"] = saw.constant;
  j["sample_size"] = wb.sample.size();
  write_text(out_path(out, "weights.json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const json& cfg, const std::string& base_dir, const std::string& out,
               const std::string& experiment, const std::string& flag_beta, std::uint64_t seed) {
  write_manifest(out, cfg, seed);
  Report rep;
  if (experiment == "pointwise" || experiment == "lemma_comparison") {
    auto dom = domain_of(cfg, base_dir);
    Rational alpha = cfg.contains("alpha") ? Rational::parse(cfg.at("alpha").get<std::string>())
                                           : Rational(1, 5);
    rep = verify_pointwise_comparison(dom, alpha, cfg.value("fields", 10), seed,
                                      cfg.value("tolerance", 1e-9), cfg.value("dense", true));
  } else if (experiment == "power_dichotomy") {
    auto d = power_dichotomy(cfg.value("levels", 5), beta_of(cfg, flag_beta), seed);
    rep = d.report;
  } else {
    ExperimentConfig ec = experiment_config(cfg, base_dir, flag_beta, seed);
    Workbench wb = Workbench::prepare(ec);
    if (experiment == "theorem2") rep = verify_theorem2(wb);
    else if (experiment == "theorem3" || experiment == "theorem4" || experiment == "theorem3_and_4")
      rep = verify_theorem3_and_4(wb);
    else if (experiment == "prop45") rep = verify_prop45(wb);
    else if (experiment == "beta_independence")
      rep = verify_beta_independence(wb, ec.beta.halved());
    else if (experiment == "self_improvement") rep = verify_self_improvement(wb);
    else throw usage_error("unknown experiment " + experiment);
  }
  write_text(out_path(out, "report_" + experiment + ".json"), rep.to_json().dump(2) + "\n");
  print_report(rep);
  return exit_for(rep);
}

int cmd_sweep(const json& cfg, const std::string& out, const std::string& preset,
              std::uint64_t seed) {
  write_manifest(out, cfg, seed);
  std::vector<int> grids = preset == "quick" ? std::vector<int>{32, 64} : std::vector<int>{64, 128, 256};
  std::vector<Rational> betas = {Rational(1, 4), Rational(1, 2)};
  std::vector<std::pair<double, double>> pqs = {{2, 2}, {2, 3}, {3, 3}};
  std::vector<std::string> domains = {"punctured_square", "box_annulus", "half_plane"};

  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::vector<std::pair<double, double>>> trends;  // series -> (grid, value)
  for (const std::string& dname : domains) {
    for (int g : grids) {
      Dyadic h = Dyadic::from_parts(1, -static_cast<int>(std::round(std::log2(g))));
      std::shared_ptr<Domain> dom;
      Point zero = Point::of(2, {Dyadic(0), Dyadic(0), Dyadic(0)});
      Point one = Point::of(2, {Dyadic(1), Dyadic(1), Dyadic(0)});
      Point half_pt = Point::of(2, {Dyadic::from_parts(1, -1), Dyadic::from_parts(1, -1), Dyadic(0)});
      if (dname == "punctured_square")
        dom = Domain::punctured_space(2, half_pt, zero, one, h);
      else if (dname == "box_annulus")
        dom = Domain::box_annulus(2, zero, one,
                                  Point::of(2, {Dyadic::from_parts(3, -3), Dyadic::from_parts(3, -3), Dyadic(0)}),
                                  Point::of(2, {Dyadic::from_parts(5, -3), Dyadic::from_parts(5, -3), Dyadic(0)}),
                                  h);
      else
        dom = Domain::half_space(2, 1, Dyadic(0), zero, one, h);
      for (const auto& beta : betas) {
        for (auto [p, q] : pqs) {
          ExperimentConfig ec;
          ec.domain = dom;
          ec.beta = beta;
          ec.exps = ExponentPair(p, q);
          ec.seed = seed;
          ec.bank.bump_count = preset == "quick" ? 4 : 8;
          ec.bank.whitney_count = preset == "quick" ? 4 : 8;
          ec.sample_cap = preset == "quick" ? 12 : 24;
          Workbench wb = Workbench::prepare(ec);
          SawyerOptions sopts;
          sopts.lattice = wb.lattice;
          auto testing =
              sawyer_testing_constant(wb.u, wb.sigma, ec.exps, ec.beta, wb.sample, sopts);
          auto norm = estimate_operator_norm(wb, MaxMode::uncentered);
          auto apq = apq_constant(wb.u, wb.sigma, ec.exps, wb.sample, true, ec.beta);
          char key[128];
          std::snprintf(key, sizeof key, "%s b=%s p=%g q=%g", dname.c_str(), beta.str().c_str(),
                        p, q);
          trends[std::string(key) + " norm"].push_back({g, norm.ratio});
          rows.push_back({dname, std::to_string(g), beta.str(), format_double(p),
                          format_double(q), format_double(testing.constant),
                          format_double(norm.ratio), format_double(apq.constant)});
        }
      }
    }
  }
  write_csv(out_path(out, "sweep.csv"),
            {"domain", "grid", "beta", "p", "q", "testing", "norm", "apq_beta"}, rows);
  std::vector<std::string> names;
  std::vector<std::vector<double>> xs, ys;
  for (const auto& [name, pts] : trends) {
    names.push_back(name);
    std::vector<double> x, y;
    for (auto [g, v] : pts) {
      x.push_back(g);
      y.push_back(v);
    }
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
  }
  write_text(out_path(out, "sweep_norms.svg"),
             svg_line_chart("operator norm estimates vs grid", names, xs, ys));
  std::cout << "sweep complete: " << rows.size() << " rows\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lmax: local maximal operators and two-weight diagnostics on grids"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", base_dir = ".", flag_beta, point_str, center_str;
  std::string mode_str = "uncentered", field_path, experiment = "theorem2", preset = "default";
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  int t = 0, workers = 0;
  double half = 0.125, alpha_frac = 0;
  bool dense = false;

  app.add_option("--workers", workers, "worker cap (or LMAX_WORKERS)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config JSON path");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--set", overrides, "override config entries key=value");
  };

  auto* d = app.add_subcommand("distance", "domain distance field");
  add_common(d);
  d->add_option("--point", point_str, "evaluate at a point x,y[,z]");

  auto* w = app.add_subcommand("whitney", "build the covering W_t");
  add_common(w);
  w->add_option("--beta", flag_beta, "family parameter");
  w->add_option("-t,--t", t, "scale parameter (default minimal with 2^-t <= beta/20)");

  auto* c = app.add_subcommand("cloud", "cloud of a cube");
  add_common(c);
  c->add_option("--beta", flag_beta, "family parameter");
  c->add_option("--center", center_str, "cube center x,y[,z]")->required();
  c->add_option("--half", half, "cube half-side");

  auto* m = app.add_subcommand("maximal", "evaluate a maximal operator");
  add_common(m);
  m->add_option("--beta", flag_beta, "family parameter");
  m->add_option("--mode", mode_str, "uncentered|centered|truncated|weighted|fractional");
  m->add_option("--field", field_path, "input field file");
  m->add_option("--alpha-frac", alpha_frac, "fractional exponent");
  m->add_flag("--dense", dense, "dense candidate lattice");

  auto* wg = app.add_subcommand("weights", "weight class diagnostics");
  add_common(wg);
  wg->add_option("--beta", flag_beta, "family parameter");

  auto* v = app.add_subcommand("verify", "run a verification experiment");
  add_common(v);
  v->add_option("--beta", flag_beta, "family parameter");
  v->add_option("--experiment", experiment,
                "theorem2|theorem3_and_4|prop45|beta_independence|self_improvement|pointwise|power_dichotomy");

  auto* s = app.add_subcommand("sweep", "default experiment battery");
  add_common(s);
  s->add_option("--preset", preset, "quick|default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (workers > 0) worker_cap() = workers;

  try {
    std::string base = config_path.empty() ? "." : fs::path(config_path).parent_path().string();
    if (base.empty()) base = ".";
    json cfg = load_config(config_path, overrides);
    if (d->parsed()) return cmd_distance(cfg, base, out_dir, point_str, seed);
    if (w->parsed()) return cmd_whitney(cfg, base, out_dir, flag_beta, t, seed);
    if (c->parsed()) return cmd_cloud(cfg, base, out_dir, flag_beta, center_str, half, seed);
    if (m->parsed())
      return cmd_maximal(cfg, base, out_dir, flag_beta, mode_str, field_path, dense, alpha_frac, seed);
    if (wg->parsed()) return cmd_weights(cfg, base, out_dir, flag_beta, seed);
    if (v->parsed()) return cmd_verify(cfg, base, out_dir, experiment, flag_beta, seed);
    if (s->parsed()) return cmd_sweep(cfg, out_dir, preset, seed);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitError;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "uaext/errors.hpp"
#include "uaext/gallery.hpp"
#include "uaext/io.hpp"
#include "uaext/parallel.hpp"

#ifndef UAEXT_VERSION
#define UAEXT_VERSION "0.0.0"
#endif

namespace uaext::cli {

namespace {

using io::json;

struct Common {
  std::string out;
  std::string format = "json";
  double tol_feas = lp::LpTolerances{}.feas;
  double tol_cert = 0.0;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
};

// What a command hands back: the payload, CSV text when requested, and
// whether every check it ran passed.
struct Outcome {
  json payload = json::object();
  std::string csv;
  bool passed = true;
  std::string summary;
};

struct Context {
  Common common;
  std::string command;
  CLI::App* leaf = nullptr;

  CertTolerances cert_tol() const {
    CertTolerances t;
    if (common.tol_cert > 0.0) {
      for (double* f : {&t.unital, &t.norm, &t.section, &t.pullback_inclusion, &t.image_in_a, &t.onto,
                        &t.adjoint_annihilation, &t.pushforward_inversion, &t.pushforward_annihilation,
                        &t.invariant_intersection, &t.positivity, &t.kelley, &t.module, &t.off_fiber, &t.hull,
                        &t.multiplicative, &t.stability, &t.orbit_measure})
        *f = common.tol_cert;
    }
    return t;
  }
  lp::LpTolerances lp_tol() const {
    lp::LpTolerances t;
    t.feas = common.tol_feas;
    return t;
  }
  bool csv() const { return common.format == "csv"; }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Write the result here instead of standard output");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app->add_option("--tol-feas", c.tol_feas, "LP feasibility tolerance")->capture_default_str();
  app->add_option("--tol-cert", c.tol_cert, "Uniform override for every certificate tolerance (0 keeps defaults)")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Seed for random probes")->capture_default_str();
  app->add_option("--threads", c.threads, "Worker threads (0: UAEXT_THREADS or the OpenMP default)");
}

json manifest_parameters(const CLI::App* leaf) {
  json p = json::object();
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "threads") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (r.size() == 1) p[name] = r.front();
      else p[name] = r;
    } else if (!opt->get_default_str().empty()) {
      p[name] = opt->get_default_str();
    } else if (opt->get_type_size() == 0) {
      p[name] = false;
    }
  }
  return p;
}

io::Manifest manifest(const Context& ctx) {
  io::Manifest m;
  m.command = ctx.command;
  m.parameters = manifest_parameters(ctx.leaf);
  m.seed = ctx.common.seed;
  m.tool_version = UAEXT_VERSION;
  m.tolerances = io::tolerances_to_json(ctx.cert_tol());
  m.tolerances["lp_feas"] = ctx.common.tol_feas;
  return m;
}

Outcome certificate_outcome(const Context& ctx, const Certificate& cert) {
  Outcome o;
  o.payload["certificate"] = io::certificate_to_json(cert);
  if (ctx.csv()) {
    std::ostringstream os;
    io::write_certificate_csv(os, cert);
    o.csv = os.str();
  }
  o.passed = cert.passed();
  std::ostringstream s;
  s << cert.name << ": " << (o.passed ? "PASS" : "FAIL");
  if (!cert.applicable) s << " (not applicable)";
  for (const auto& f : cert.failures()) s << "\n  failed clause: " << f;
  o.summary = s.str();
  return o;
}

io::LoadedBundle load_bundle(const std::string& path) { return io::bundle_from_json(io::read_json_file(path)); }

FunctionSystem load_system(const std::string& bundle_path, const std::string& system_path, const std::string& which) {
  if (!system_path.empty()) {
    const json j = io::read_json_file(system_path);
    if (!j.contains("space") || !j.contains("system")) throw InputError(system_path + ": expected space and system");
    return io::system_from_json(j["system"], io::space_from_json(j["space"]));
  }
  if (bundle_path.empty()) throw InputError("either --bundle or --system-file is required");
  auto loaded = load_bundle(bundle_path);
  if (which == "a") return loaded.bundle.a;
  if (which == "b") return loaded.bundle.b;
  throw InputError("--system must be a or b");
}

void require_t(const ExtensionBundle& b) {
  if (!b.t) throw InputError("bundle " + b.name + " has no averaging operator");
}

// Polynomial in the first coordinate with the given coefficients.
CVector polynomial_table(const SpacePtr& s, const json& coeffs) {
  if (!coeffs.is_array()) throw InputError("coefficients_poly entries must be arrays");
  CVector out = CVector::Zero(static_cast<Eigen::Index>(s->size()));
  for (std::size_t i = 0; i < s->size(); ++i) {
    const Complex z = s->coord(i, 0);
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + io::complex_from_json(*it);
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

ColeSpec cole_spec_from_json(const json& j) {
  std::optional<FunctionSystem> base;
  if (j.contains("disk")) {
    const json& d = j["disk"];
    DiskGridSpec g;
    g.boundary = d.value("boundary", g.boundary);
    g.rings = d.value("rings", g.rings);
    g.ring_size = d.value("ring_size", g.ring_size);
    g.inner_radius = d.value("inner_radius", g.inner_radius);
    g.outer_radius = d.value("outer_radius", g.outer_radius);
    base = build_disk_algebra(g, d.value("cap", 6)).system;
  } else if (j.contains("base")) {
    const json& b = j["base"];
    if (!b.contains("space") || !b.contains("system")) throw InputError("spec: base needs space and system");
    base = io::system_from_json(b["system"], io::space_from_json(b["space"]));
  } else {
    throw InputError("spec: either \"disk\" or \"base\" is required");
  }
  const SpacePtr& x = base->space();
  std::vector<FunctionTable> coeffs;
  if (j.contains("coefficients")) {
    for (const auto& t : j["coefficients"]) coeffs.emplace_back(x, io::table_from_json(t, x->size()));
  } else if (j.contains("coefficients_poly")) {
    for (const auto& t : j["coefficients_poly"]) coeffs.emplace_back(x, polynomial_table(x, t));
  } else {
    throw InputError("spec: either \"coefficients\" or \"coefficients_poly\" is required");
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i].name = "h_" + std::to_string(i);
  ColeSpec spec{*base, std::move(coeffs), j.value("extension_degree_cap", 0), j.value("merge_tol", kDefaultMergeTol)};
  return spec;
}

std::size_t centre_of(const SpacePtr& s) {
  for (std::size_t i = 0; i < s->size(); ++i)
    if (s->coord(i, 0) == Complex(0.0)) return i;
  throw InputError("grid has no centre point");
}

IndexList labels_to_indices(const FiniteSpace& s, const std::vector<std::string>& labels) {
  IndexList out;
  for (const auto& l : labels) out.push_back(s.index_of(l));
  return out;
}

json labels_of(const FiniteSpace& s, const IndexList& idx) {
  json out = json::array();
  for (auto i : idx) out.push_back(s.point(i).label);
  return out;
}

void emit(const Context& ctx, const Outcome& o, std::ostream& out) {
  const io::Manifest m = manifest(ctx);
  std::string text;
  if (ctx.csv() && !o.csv.empty()) {
    text = "# manifest " + m.to_json().dump() + "\n" + o.csv;
  } else {
    json doc = o.payload;
    doc["manifest"] = m.to_json();
    text = io::dump(doc, !doc.contains("bundle"));
  }
  if (ctx.common.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(ctx.common.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + ctx.common.out);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite models of uniform algebra extensions: build, certify and analyse", "uaext"};
  app.require_subcommand(1);
  app.set_version_flag("--version", UAEXT_VERSION);

  Context ctx;
  std::function<Outcome()> action;
  std::map<const CLI::App*, std::string> commands;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& command) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    add_common(sub, ctx.common);
    commands[sub] = command;
    return sub;
  };
  auto bind = [&](CLI::App* sub, std::function<Outcome()> fn) {
    sub->callback([&, sub, fn = std::move(fn)] {
      ctx.command = commands.at(sub);
      ctx.leaf = sub;
      action = fn;
    });
  };

  // gallery build <name>
  CLI::App* gallery = app.add_subcommand("gallery", "Build the standard example bundles")->require_subcommand(1);
  CLI::App* build = gallery->add_subcommand("build", "Build one example")->require_subcommand(1);

  DiskGridSpec disk;
  int disk_cap = 10;
  CLI::App* g_disk = leaf(build, "disk", "Truncated disk algebra on a disk grid", "gallery build disk");
  g_disk->add_option("--boundary", disk.boundary)->capture_default_str();
  g_disk->add_option("--rings", disk.rings)->capture_default_str();
  g_disk->add_option("--ring-size", disk.ring_size)->capture_default_str();
  g_disk->add_option("--inner", disk.inner_radius)->capture_default_str();
  g_disk->add_option("--outer", disk.outer_radius)->capture_default_str();
  g_disk->add_option("--cap", disk_cap)->capture_default_str();
  bind(g_disk, [&] {
    const auto d = build_disk_algebra(disk, disk_cap);
    Outcome o;
    o.payload["space"] = io::space_to_json(*d.system.space());
    o.payload["system"] = io::system_to_json(d.system);
    o.payload["warnings"] = d.warnings;
    o.summary = "disk algebra: dim " + std::to_string(d.system.dim()) + " on " + std::to_string(d.system.size()) + " points";
    return o;
  });

  BasenerSpec basener;
  CLI::App* g_basener = leaf(build, "basener", "Circle bundle over an annulus with Z_M acting", "gallery build basener");
  g_basener->add_option("--r0", basener.r0)->capture_default_str();
  g_basener->add_option("--r1", basener.r1)->capture_default_str();
  g_basener->add_option("--nr", basener.n_r)->capture_default_str();
  g_basener->add_option("--ntheta", basener.n_theta)->capture_default_str();
  g_basener->add_option("--M", basener.m)->capture_default_str();
  g_basener->add_option("--cap", basener.cap)->capture_default_str();
  bind(g_basener, [&] {
    const auto b = build_basener(basener);
    Outcome o;
    o.payload["bundle"] = io::bundle_to_json(b.bundle, nullptr, &b.action);
    o.summary = "basener: |X| = " + std::to_string(b.bundle.a.size()) + ", |Y| = " + std::to_string(b.bundle.b.size());
    return o;
  });

  DiskGridSpec dfp_grid{16, 2, 8, 0.2, 0.7};
  int dfp_base_cap = 6;
  std::size_t dfp_n = 8;
  DfpSpec dfp;
  CLI::App* g_dfp = leaf(build, "dfp", "Distinguished point extension over the disk", "gallery build dfp");
  g_dfp->add_option("--boundary", dfp_grid.boundary)->capture_default_str();
  g_dfp->add_option("--rings", dfp_grid.rings)->capture_default_str();
  g_dfp->add_option("--ring-size", dfp_grid.ring_size)->capture_default_str();
  g_dfp->add_option("--base-cap", dfp_base_cap)->capture_default_str();
  g_dfp->add_option("--N", dfp_n, "Number of null functions (at most 8)")->capture_default_str();
  g_dfp->add_option("--M", dfp.m)->capture_default_str();
  g_dfp->add_option("--cap", dfp.cap, "Degree cap on Y (0: the base cap)")->capture_default_str();
  bind(g_dfp, [&] {
    const auto base = build_disk_algebra(dfp_grid, dfp_base_cap).system;
    const auto b = build_dfp(base, centre_of(base.space()), default_dfp_functions(base.space(), dfp_n), dfp);
    Outcome o;
    o.payload["bundle"] = io::bundle_to_json(b.bundle, nullptr, &b.action);
    o.summary = "dfp: |Y| = " + std::to_string(b.bundle.b.size());
    return o;
  });

  std::size_t tensor_points = 11, tensor_m = 16;
  int tensor_cap = 4;
  CLI::App* g_tensor = leaf(build, "tensor_disk", "Diameter grid times a circle, T = section at w = 1",
                            "gallery build tensor_disk");
  g_tensor->add_option("--points", tensor_points)->capture_default_str();
  g_tensor->add_option("--M", tensor_m)->capture_default_str();
  g_tensor->add_option("--cap", tensor_cap)->capture_default_str();
  bind(g_tensor, [&] {
    const auto b = build_tensor_disk(diameter_grid(tensor_points), tensor_m, tensor_cap);
    Outcome o;
    o.payload["bundle"] = io::bundle_to_json(b);
    o.summary = "tensor_disk: |Y| = " + std::to_string(b.b.size());
    return o;
  });

  std::size_t contraction_n = 7;
  std::vector<std::size_t> contraction_k{1, 2, 3};
  std::string contraction_a0 = "linear";
  CLI::App* g_contr = leaf(build, "contraction", "Points 0..n-1 on a line with K contracted to a point",
                           "gallery build contraction");
  g_contr->add_option("--n", contraction_n)->capture_default_str();
  g_contr->add_option("--k", contraction_k, "Indices of K")->delimiter(',')->capture_default_str();
  g_contr->add_option("--a0", contraction_a0)->check(CLI::IsMember({"linear", "constants", "full"}))->capture_default_str();
  bind(g_contr, [&] {
    std::vector<std::vector<Complex>> raw;
    for (std::size_t i = 0; i < contraction_n; ++i) raw.push_back({Complex(double(i))});
    const auto y = make_space(raw);
    IndexList k(contraction_k.begin(), contraction_k.end());
    std::sort(k.begin(), k.end());
    for (auto v : k)
      if (v >= contraction_n) throw InputError("--k index out of range");
    const auto ks = subspace(y, k);
    FunctionSystem a0 = contraction_a0 == "full" ? full_system(ks)
                        : contraction_a0 == "constants"
                            ? constants_system(ks)
                            : generate_system(ks, {FunctionTable(ks, [&] {
                                                     CVector v(Eigen::Index(ks->size()));
                                                     for (std::size_t i = 0; i < ks->size(); ++i)
                                                       v[Eigen::Index(i)] = ks->coord(i, 0);
                                                     return v;
                                                   }(), "z")},
                                              1);
    const auto b = build_contraction(y, k, a0);
    Outcome o;
    o.payload["bundle"] = io::bundle_to_json(b);
    o.summary = "contraction: dim B = " + std::to_string(b.b.dim());
    return o;
  });

  // cole
  CLI::App* cole = app.add_subcommand("cole", "Cole extensions")->require_subcommand(1);
  std::string spec_path, bundle_path;
  CLI::App* c_extend = leaf(cole, "extend", "Adjoin the roots of a monic polynomial", "cole extend");
  c_extend->add_option("--spec", spec_path, "Extension spec JSON")->required();
  bind(c_extend, [&] {
    const ColeBundle cb = cole_extend(cole_spec_from_json(io::read_json_file(spec_path)));
    Outcome o;
    o.payload["bundle"] = io::bundle_to_json(cb.bundle, &cb);
    o.summary = "cole extend: degree " + std::to_string(cb.degree) + ", |X^q| = " + std::to_string(cb.bundle.b.size());
    return o;
  });
  CLI::App* c_report = leaf(cole, "report", "Certificate suite for a Cole bundle", "cole report");
  c_report->add_option("--bundle", bundle_path)->required();
  bind(c_report, [&] {
    const auto loaded = load_bundle(bundle_path);
    if (!loaded.cole) throw InputError(bundle_path + " has no cole section");
    return certificate_outcome(ctx, cole_report(*loaded.cole, default_probes(loaded.bundle.b, kDefaultRandomProbes,
                                                                            ctx.common.seed),
                                                ctx.cert_tol(), ctx.common.seed));
  });

  // verify
  CLI::App* verify = app.add_subcommand("verify", "Certificate suites")->require_subcommand(1);
  CLI::App* v_gce = leaf(verify, "gce", "Generalised Cole extension clauses", "verify gce");
  v_gce->add_option("--bundle", bundle_path)->required();
  bind(v_gce, [&] {
    const auto loaded = load_bundle(bundle_path);
    const auto probes = default_probes(loaded.bundle.b, kDefaultRandomProbes, ctx.common.seed);
    return certificate_outcome(ctx, gce_certificate(loaded.bundle, probes, ctx.cert_tol(), ctx.common.seed));
  });
  CLI::App* v_avg = leaf(verify, "averaging", "Averaging operator equivalences", "verify averaging");
  v_avg->add_option("--bundle", bundle_path)->required();
  bind(v_avg, [&] {
    const auto loaded = load_bundle(bundle_path);
    require_t(loaded.bundle);
    const auto probes = default_probes(loaded.bundle.b, kDefaultRandomProbes, ctx.common.seed);
    return certificate_outcome(ctx, equivalences_report(*loaded.bundle.t, loaded.bundle.pi, probes, {}, ctx.cert_tol()));
  });
  CLI::App* v_impl = leaf(verify, "implemented", "Implemented-by-group clauses", "verify implemented");
  v_impl->add_option("--bundle", bundle_path)->required();
  bind(v_impl, [&] {
    const auto loaded = load_bundle(bundle_path);
    if (!loaded.action) throw InputError(bundle_path + " has no group action");
    const auto probes = default_probes(loaded.bundle.b, kDefaultRandomProbes, ctx.common.seed);
    return certificate_outcome(ctx, implemented_report(loaded.bundle, *loaded.action, probes, ctx.cert_tol()));
  });

  // group
  CLI::App* group = app.add_subcommand("group", "Projections and reconstruction")->require_subcommand(1);
  std::string projection_path, h0_arg, rho_path;
  int recon_cap = -1;
  CLI::App* g_analyze = leaf(group, "analyze-projection", "Bicontractive projection analysis", "group analyze-projection");
  g_analyze->add_option("--bundle", bundle_path)->required();
  g_analyze->add_option("--projection", projection_path, "Operator JSON on Y (default: pi^* o T)");
  bind(g_analyze, [&] {
    const auto loaded = load_bundle(bundle_path);
    const SpacePtr& y = loaded.bundle.pi.source();
    OperatorTable p = [&] {
      if (!projection_path.empty()) return io::operator_from_json(io::read_json_file(projection_path), y, y);
      require_t(loaded.bundle);
      return OperatorTable::composition_operator(loaded.bundle.pi).after(*loaded.bundle.t);
    }();
    const auto probes = default_probes(loaded.bundle.b, kDefaultRandomProbes, ctx.common.seed);
    const auto res = bicontractive_analyze(p, loaded.bundle.b, probes, ctx.cert_tol());
    Outcome o = certificate_outcome(ctx, res.certificate);
    o.payload["is_bicontractive"] = res.is_bicontractive;
    o.payload["norm_p"] = res.norm_p;
    o.payload["norm_i_minus_p"] = res.norm_i_minus_p;
    o.payload["rho"] = res.rho ? json(*res.rho) : json(nullptr);
    o.passed = res.is_bicontractive && res.certificate.passed();
    o.summary = std::string("bicontractive: ") + (res.is_bicontractive ? "yes" : "no") + "\n" + o.summary;
    return o;
  });
  CLI::App* g_recon = leaf(group, "reconstruct", "Rebuild a bundle as a quadratic Cole extension", "group reconstruct");
  g_recon->add_option("--bundle", bundle_path)->required();
  g_recon->add_option("--h0", h0_arg, "Table JSON ({\"values\": [...]}) or p_q for a stored Cole bundle")->required();
  g_recon->add_option("--rho", rho_path, "Involution JSON ({\"rho\": [...]}); default: recovered from pi^* o T");
  g_recon->add_option("--extension-cap", recon_cap,
                      "Degree cap of the rebuilt extension (-1: the cap of B for Cole bundles, else the default)")
      ->capture_default_str();
  bind(g_recon, [&] {
    const auto loaded = load_bundle(bundle_path);
    const auto& bundle = loaded.bundle;
    const std::size_t ny = bundle.pi.source()->size();
    CVector h0;
    if (h0_arg == "p_q") {
      if (!loaded.cole) throw InputError("--h0 p_q needs a bundle with a cole section");
      h0 = loaded.cole->p_q.values;
    } else {
      const json j = io::read_json_file(h0_arg);
      h0 = io::table_from_json(j.is_object() ? j.at("values") : j, ny);
    }
    IndexList rho;
    if (!rho_path.empty()) {
      const json j = io::read_json_file(rho_path);
      rho = (j.is_object() ? j.at("rho") : j).get<IndexList>();
    } else {
      require_t(bundle);
      const auto res = bicontractive_analyze(OperatorTable::composition_operator(bundle.pi).after(*bundle.t), bundle.b,
                                             {}, ctx.cert_tol());
      if (!res.rho) throw HypothesisError("no involution could be recovered from pi^* o T");
      rho = *res.rho;
    }
    const int cap = recon_cap >= 0 ? recon_cap : loaded.cole ? bundle.b.degree_cap() : 0;
    const auto rec = reconstruct_cole(bundle, rho, h0, 1e-9, cap);
    Outcome o = certificate_outcome(ctx, rec.certificate);
    o.payload["matched"] = rec.matched;
    o.payload["psi"] = rec.psi && rec.cole ? labels_of(*rec.cole->bundle.b.space(), *rec.psi) : json(nullptr);
    o.payload["collision"] =
        rec.collision ? labels_of(*bundle.pi.source(), {rec.collision->first, rec.collision->second}) : json(nullptr);
    o.passed = rec.matched && rec.certificate.passed();
    return o;
  });

  // boundary
  CLI::App* boundary = app.add_subcommand("boundary", "Choquet boundaries and peak sets")->require_subcommand(1);
  std::string system_file, which = "b";
  bool witnesses = false;
  CLI::App* b_choquet = leaf(boundary, "choquet", "Escaping mass at every point", "boundary choquet");
  b_choquet->add_option("--bundle", bundle_path);
  b_choquet->add_option("--system-file", system_file, "JSON with space and system (as written by gallery build disk)");
  b_choquet->add_option("--system", which, "Which system of the bundle")->check(CLI::IsMember({"a", "b"}))->capture_default_str();
  b_choquet->add_flag("--witnesses", witnesses, "Include representing measures in JSON output");
  bind(b_choquet, [&] {
    const auto sys = load_system(bundle_path, system_file, which);
    const auto reports = choquet_scan(sys, kChoquetTol, ctx.lp_tol());
    Outcome o;
    o.payload["choquet"] = io::choquet_to_json(sys, reports, witnesses);
    if (ctx.csv()) {
      std::ostringstream os;
      write_choquet_csv(os, sys, reports);
      o.csv = os.str();
    }
    o.summary = "choquet set: " + std::to_string(choquet_set(reports).size()) + " of " + std::to_string(sys.size());
    return o;
  });
  std::vector<std::string> peak_labels;
  double margin = kPeakMargin;
  int sides = kPeakPolygonSides;
  CLI::App* b_peak = leaf(boundary, "peakset", "Peak set feasibility", "boundary peakset");
  b_peak->add_option("--bundle", bundle_path);
  b_peak->add_option("--system-file", system_file);
  b_peak->add_option("--system", which)->check(CLI::IsMember({"a", "b"}))->capture_default_str();
  b_peak->add_option("--set", peak_labels, "Point labels of E")->delimiter(',')->required();
  b_peak->add_option("--margin", margin)->capture_default_str();
  b_peak->add_option("--sides", sides)->capture_default_str();
  bind(b_peak, [&] {
    const auto sys = load_system(bundle_path, system_file, which);
    const IndexList e = labels_to_indices(*sys.space(), peak_labels);
    const auto res = peak_set_feasible(sys, e, margin, sides, ctx.lp_tol());
    Outcome o;
    o.payload["feasible"] = res.feasible;
    o.payload["set"] = peak_labels;
    if (res.feasible) o.payload["values"] = io::table_to_json(res.values);
    o.passed = res.feasible;
    o.summary = std::string("peak set: ") + (res.feasible ? "feasible" : "no witness found");
    return o;
  });

  // report
  CLI::App* report = leaf(&app, "report", "Every applicable certificate for a bundle", "report");
  report->add_option("--bundle", bundle_path)->required();
  bind(report, [&] {
    const auto loaded = load_bundle(bundle_path);
    const auto& bundle = loaded.bundle;
    const auto probes = default_probes(bundle.b, kDefaultRandomProbes, ctx.common.seed);
    const auto tol = ctx.cert_tol();
    std::vector<Certificate> certs{extension_certificate(bundle, tol)};
    if (bundle.t) {
      certs.push_back(gce_certificate(bundle, probes, tol, ctx.common.seed));
      certs.push_back(equivalences_report(*bundle.t, bundle.pi, probes, {}, tol));
    }
    if (loaded.action) certs.push_back(implemented_report(bundle, *loaded.action, probes, tol));
    if (loaded.cole) certs.push_back(cole_report(*loaded.cole, probes, tol, ctx.common.seed));
    Outcome o;
    o.payload["certificates"] = json::array();
    std::ostringstream csv, summary;
    for (const auto& c : certs) {
      o.payload["certificates"].push_back(io::certificate_to_json(c));
      o.passed = o.passed && c.passed();
      if (ctx.csv()) {
        std::ostringstream part;
        io::write_certificate_csv(part, c);
        std::string body = part.str();
        if (csv.tellp() > 0) body = body.substr(body.find('\n') + 1);
        csv << body;
      }
      summary << c.name << ": " << (c.passed() ? "PASS" : "FAIL") << "\n";
    }
    o.payload["passed"] = o.passed;
    o.csv = csv.str();
    o.summary = summary.str();
    return o;
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    int threads = ctx.common.threads;
    if (threads <= 0) {
      if (const char* env = std::getenv("UAEXT_THREADS")) {
        try {
          threads = std::stoi(env);
        } catch (const std::exception&) {
          throw InputError("UAEXT_THREADS must be an integer");
        }
      }
    }
    if (threads > 0) set_thread_count(threads);
    if (!action) throw InputError("no command selected");
    const Outcome o = action();
    emit(ctx, o, out);
    if (!o.summary.empty()) err << o.summary << (o.summary.back() == '\n' ? "" : "\n");
    return o.passed ? 0 : 1;
  } catch (const HypothesisError& e) {
    err << "hypothesis not satisfied: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const io::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ComputationError& e) {
    err << "computation failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return 3;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace uaext::cli

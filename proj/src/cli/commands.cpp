#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "nnls/dispersive.hpp"
#include "nnls/errors.hpp"
#include "nnls/io.hpp"
#include "nnls/pdeoracle.hpp"
#include "nnls/phase.hpp"
#include "nnls/potential.hpp"
#include "nnls/scattering.hpp"
#include "nnls/soliton.hpp"
#include "nnls/spectrum.hpp"

namespace nnls::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
}

// Anything thrown while turning the config into inputs is an ingestion failure.
template <class F>
auto ingest(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw Error(ErrorKind::ConfigError, e.what());
  }
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << fmt17(v);
      first = false;
    }
    out_ << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json base_manifest(const std::string& command, const RunConfig& c) {
  return {{"command", command},      {"config", c.doc},       {"tolerances", c.tol.to_json()},
          {"threads", c.threads},    {"seed", nullptr},       {"outputs", json::array()}};
}

// Runs the body, writes the manifest on success and a failure manifest if a stage throws.
template <class F>
int pipeline(const std::string& command, const RunConfig& c, F&& body) {
  json manifest = base_manifest(command, c);
  std::string stage = "setup";
  try {
    fs::create_directories(c.out_dir);
    const int code = body(manifest, stage);
    write_json(c.out_dir / (command + "_manifest.json"), manifest);
    return code;
  } catch (const Error& e) {
    json f = manifest;
    f["failure"] = {{"stage", stage}, {"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    try {
      write_json(c.out_dir / "failure.json", f);
    } catch (const std::exception&) {
    }
    std::cerr << "nnls " << command << ": stage '" << stage << "' failed: " << e.what() << '\n';
    return exit_pipeline;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "nnls " << command << ": " << e.what() << '\n';
    return exit_pipeline;
  }
}

VolterraOptions volterra_options(const RunConfig& c) {
  VolterraOptions o;
  o.picard_tol = c.tol.get("picard");
  return o;
}

PhaseOptions phase_options(const RunConfig& c) {
  PhaseOptions o;
  o.quad_tol = c.tol.get("quadrature");
  o.tail_threshold = c.tol.get("nu_tail");
  o.spacing = c.tol.get("nu_spacing");
  return o;
}

SpectrumSearch search_options(const RunConfig& c) {
  const json& s = section(c, "spectrum");
  SpectrumSearch o;
  o.kmax = number(s, "kmax", 4.0);
  o.edge = number(s, "edge", 0.01);
  o.min_imag = number(s, "min_imag", 1e-3);
  if (!(o.edge > 0)) fail("spectrum.edge", "must be positive");
  if (!(o.kmax > o.edge)) fail("spectrum.kmax", "must exceed spectrum.edge");
  if (!(o.min_imag >= 0)) fail("spectrum.min_imag", "must be non-negative");
  o.tol = c.tol.get("zero_contour");
  o.zero.residual_tol = c.tol.get("newton_residual");
  o.volterra = volterra_options(c);
  return o;
}

Potential load_potential(const RunConfig& c) {
  return ingest([&] { return potential_from_json(require_section(c, "potential"), c.base_dir.string()); });
}

json read_json_file(const fs::path& p, const std::string& key) {
  std::ifstream in(p);
  if (!in) fail(key, "cannot open '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(key, std::string("malformed JSON: ") + e.what());
  }
}

DiscreteSpectrum spectrum_from_file(const RunConfig& c, const json& sec, const std::string& key) {
  if (!sec[key].is_string()) fail(key, "expected a path");
  const json j = read_json_file(c.base_dir / sec[key].get<std::string>(), key);
  return spectrum_from_json(j.contains("spectrum") ? j["spectrum"] : j);
}

ReflectionlessData soliton_data(const RunConfig& c) {
  return ingest([&] {
    const json& s = require_section(c, "soliton");
    if (s.contains("synthesize")) {
      const json& y = s["synthesize"];
      if (!y.is_object()) fail("soliton.synthesize", "expected an object");
      const int sigma = integer(s, "sigma", 1);
      if (sigma != 1 && sigma != -1) fail("soliton.sigma", "must be +1 or -1");
      return synthesize(complex_list_from_json(y, "omegas"), complex_list_from_json(y, "b"),
                        complex_list_from_json(y, "gammas"), complex_list_from_json(y, "btilde"), sigma);
    }
    if (s.contains("spectrum")) return from_spectrum(spectrum_from_json(s["spectrum"]));
    if (s.contains("spectrum_file")) return from_spectrum(spectrum_from_file(c, s, "spectrum_file"));
    fail("soliton", "needs one of 'synthesize', 'spectrum' or 'spectrum_file'");
  });
}

// The discrete spectrum used by asymptote/compare: searched, supplied, or empty.
struct SpectrumSource {
  bool search = true;
  DiscreteSpectrum given;
};

SpectrumSource spectrum_source(const RunConfig& c, const json& sec) {
  return ingest([&] {
    SpectrumSource src;
    if (!sec.contains("spectrum")) return src;
    const json& v = sec["spectrum"];
    if (v.is_string() && v == "search") return src;
    src.search = false;
    if (v.is_string() && v == "none") return src;
    if (v.is_object()) {
      src.given = spectrum_from_json(v);
      return src;
    }
    if (sec.contains("spectrum_file")) {
      src.given = spectrum_from_file(c, sec, "spectrum_file");
      return src;
    }
    fail("spectrum", "expected \"search\", \"none\" or a spectrum object");
  });
}

DiscreteSpectrum resolve_spectrum(const SpectrumSource& src, const Potential& q0, const SpectrumSearch& so) {
  if (src.search) return find_spectrum(q0, so).spectrum;
  DiscreteSpectrum s = src.given;
  s.sigma = q0.sigma();
  return s;
}

std::vector<double> positive_times(const json& sec, const std::string& key) {
  const auto ts = ingest([&] { return uniform_grid(sec, key); });
  for (double t : ts)
    if (!(t > 0)) fail(key, "times must be positive");
  return ts;
}

bool is_power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }

// --------------------------------------------------------------------------- scatter

int cmd_scatter(const RunConfig& c) {
  const Potential q0 = load_potential(c);
  const json& s = section(c, "scatter");
  const double kmin = number(s, "kmin", -5.0), kmax = number(s, "kmax", 5.0);
  const int n = integer(s, "n", 101);
  if (n < 2) fail("scatter.n", "need at least two k samples");
  if (!(kmin < kmax)) fail("scatter.kmin", "must be below scatter.kmax");
  const double tol = c.tol.get("identity"), slack = c.tol.get("jost_bound_slack");
  const VolterraOptions vo = volterra_options(c);

  return pipeline("scatter", c, [&](json& manifest, std::string& stage) {
    stage = "reflection_grid";
    const ReflectionGrid g = reflection_grid(q0, kmin, kmax, n, vo, c.threads);
    const bool symmetric = std::abs(kmin + kmax) <= 1e-12 * std::max(1.0, kmax);
    const double sg = q0.sigma();

    stage = "diagnostics";
    const fs::path csv_path = c.out_dir / "scatter.csv";
    Csv csv(csv_path, {"k", "re_a1", "im_a1", "re_a2", "im_a2", "re_b", "im_b", "re_btilde", "im_btilde", "re_r1",
                       "im_r1", "re_r2", "im_r2", "det_residual", "btilde_symmetry_residual",
                       "a1_symmetry_residual", "a2_symmetry_residual", "jump_residual"});
    double m_det = 0, m_bt = 0, m_a1 = 0, m_a2 = 0, m_jump = 0;
    for (int i = 0; i < n; ++i) {
      const ScatteringSample& p = g.samples[i];
      const ScatteringSample partner =
          symmetric ? g.samples[n - 1 - i] : scattering_sample(q0, -std::conj(p.k), vo);
      const double det = std::abs(p.a1 * p.a2 - p.b * p.btilde - 1.0);
      const double bt = std::abs(p.btilde + sg * std::conj(partner.b));
      const double a1 = std::abs(p.a1 - std::conj(partner.a1));
      const double a2 = std::abs(p.a2 - std::conj(partner.a2));
      const double jump = std::abs(1.0 + sg * p.r1 * p.r2 - 1.0 / (p.a1 * p.a2));
      m_det = std::max(m_det, det);
      m_bt = std::max(m_bt, bt);
      m_a1 = std::max(m_a1, a1);
      m_a2 = std::max(m_a2, a2);
      m_jump = std::max(m_jump, jump);
      csv.row({p.k.real(), p.a1.real(), p.a1.imag(), p.a2.real(), p.a2.imag(), p.b.real(), p.b.imag(),
               p.btilde.real(), p.btilde.imag(), p.r1.real(), p.r1.imag(), p.r2.real(), p.r2.imag(), det, bt, a1,
               a2, jump});
    }
    manifest["outputs"].push_back(csv_path.filename().string());

    // Volterra growth bound |Psi| <= exp(||q||_1) checked on a few k samples.
    double worst_ratio = 0.0;
    for (int i = 0; i < 5; ++i) {
      const cplx k = g.samples[(n - 1) * i / 4].k;
      for (const JostMatrix& jm : {jost_left(q0, k, 0.0, vo), jost_right(q0, k, 0.0, vo)})
        worst_ratio = std::max(worst_ratio, jm.sup_norm / jm.bound);
    }

    auto entry = [](double value, double limit) { return json{{"max", value}, {"limit", limit}, {"pass", value <= limit}}; };
    json inv = {{"det_S", entry(m_det, tol)},
                {"btilde_symmetry", entry(m_bt, tol)},
                {"a1_symmetry", entry(m_a1, tol)},
                {"a2_symmetry", entry(m_a2, tol)},
                {"jump_identity", entry(m_jump, tol)},
                {"jost_growth_bound", entry(worst_ratio, slack)}};
    bool ok = true;
    std::string failed;
    for (const auto& [name, e] : inv.items())
      if (!e["pass"].get<bool>()) {
        ok = false;
        failed += (failed.empty() ? "" : ", ") + name;
      }
    const json report = {{"invariants", inv},
                         {"pass", ok},
                         {"potential", potential_summary(q0)},
                         {"reflection",
                          {{"r1_h1_norm", g.r1_h1_norm},
                           {"r2_h1_norm", g.r2_h1_norm},
                           {"max_abs_r1", g.max_abs_r1},
                           {"max_abs_r2", g.max_abs_r2},
                           {"min_abs_jump", g.min_abs_jump}}},
                         {"k_grid", {{"kmin", kmin}, {"kmax", kmax}, {"n", n}, {"symmetric", symmetric}}}};
    write_json(c.out_dir / "scatter_report.json", report);
    manifest["outputs"].push_back("scatter_report.json");
    manifest["pass"] = ok;
    if (!ok) {
      std::cerr << "nnls scatter: invariant diagnostics failed: " << failed << '\n';
      return int(exit_diagnostic);
    }
    return int(exit_ok);
  });
}

// --------------------------------------------------------------------------- spectrum

int cmd_spectrum(const RunConfig& c) {
  const Potential q0 = load_potential(c);
  const SpectrumSearch so = ingest([&] { return search_options(c); });
  const json& s = section(c, "spectrum");
  const std::vector<double> rays = s.contains("rays") ? number_list(s, "rays") : std::vector<double>{};

  return pipeline("spectrum", c, [&](json& manifest, std::string& stage) {
    stage = "find_spectrum";
    const SpectrumResult r = find_spectrum(q0, so);
    json out = {{"spectrum", spectrum_to_json(r.spectrum)},
                {"winding_upper", r.winding_upper},
                {"winding_lower", r.winding_lower},
                {"rejected_near_real", complex_list_to_json(r.rejected)}};
    stage = "classify";
    json parts = json::array();
    for (double xi : rays) parts.push_back(partition_to_json(classify(r.spectrum, xi)));
    out["partitions"] = parts;
    write_json(c.out_dir / "spectrum.json", out);
    manifest["outputs"].push_back("spectrum.json");
    manifest["potential"] = potential_summary(q0);
    return int(exit_ok);
  });
}

// --------------------------------------------------------------------------- soliton

int cmd_soliton(const RunConfig& c) {
  const ReflectionlessData data = soliton_data(c);
  const json& s = section(c, "soliton");
  const std::vector<double> xs = ingest([&] { return uniform_grid(s, "x"); });
  const std::vector<double> ts = ingest([&] { return uniform_grid(s, "t"); });

  return pipeline("soliton", c, [&](json& manifest, std::string& stage) {
    stage = "solve_residues";
    Csv csv(c.out_dir / "soliton.csv", {"x", "t", "re_q", "im_q", "abs_q", "condition"});
    double worst_condition = 0.0;
    for (double t : ts)
      for (double x : xs) {
        const ResidueSolution res = solve_residues(data, x, t);
        const cplx q = cplx(0.0, 2.0) * res.beta1.sum();
        worst_condition = std::max(worst_condition, res.condition);
        csv.row({x, t, q.real(), q.imag(), std::abs(q), res.condition});
      }
    manifest["outputs"].push_back("soliton.csv");
    manifest["data"] = reflectionless_to_json(data);
    manifest["max_condition"] = worst_condition;
    return int(exit_ok);
  });
}

// --------------------------------------------------------------------------- evolve

struct InitialField {
  std::function<cplx(double)> f;
  int sigma = 1;
  std::string kind;
};

InitialField initial_field(const RunConfig& c, const json& sec, double t0) {
  return ingest([&] {
    InitialField init;
    init.kind = "potential";
    if (sec.contains("initial")) {
      if (!sec["initial"].is_string()) fail("initial", "expected \"potential\" or \"soliton\"");
      init.kind = sec["initial"].get<std::string>();
    }
    if (init.kind == "potential") {
      const json& p = require_section(c, "potential");
      init.sigma = potential_from_json(p, c.base_dir.string()).sigma();
      init.f = potential_profile(p, c.base_dir.string());
    } else if (init.kind == "soliton") {
      auto data = std::make_shared<ReflectionlessData>(soliton_data(c));
      init.sigma = data->sigma;
      init.f = [data, t0](double x) { return q_sol(*data, x, t0); };
    } else {
      fail("initial", "expected \"potential\" or \"soliton\"");
    }
    return init;
  });
}

struct GridSpec {
  double L;
  int n;
  double dt;
};

GridSpec grid_spec(const json& sec, const std::string& prefix) {
  GridSpec g{number(sec, "L"), integer(sec, "n"), number(sec, "dt")};
  if (!(g.L > 0)) fail(prefix + "L", "must be positive");
  if (!is_power_of_two(g.n)) fail(prefix + "n", "must be a power of two");
  if (!(g.dt != 0.0) || !std::isfinite(g.dt)) fail(prefix + "dt", "must be finite and nonzero");
  return g;
}

int cmd_evolve(const RunConfig& c) {
  const json& s = require_section(c, "evolve");
  const GridSpec g = ingest([&] { return grid_spec(s, "evolve."); });
  const double t0 = number(s, "t0", 0.0);
  const double t_end = number(s, "t_end");
  const int snapshot_every = integer(s, "snapshot_every", 0);
  const int log_every = integer(s, "log_every", 100);
  if (snapshot_every < 0) fail("evolve.snapshot_every", "must be non-negative");
  if (log_every < 1) fail("evolve.log_every", "must be positive");
  const double steps = (t_end - t0) / g.dt;
  if (steps < 0 || std::abs(steps - std::round(steps)) > 1e-6)
    fail("evolve.t_end", "t_end - t0 must be a non-negative integer multiple of dt");
  const InitialField init = initial_field(c, s, t0);

  return pipeline("evolve", c, [&](json& manifest, std::string& stage) {
    stage = "initial_state";
    const EvolutionState s0 = make_state(init.f, g.L, g.n, init.sigma, t0);
    Csv csv(c.out_dir / "evolve_snapshots.csv", {"t", "x", "re_q", "im_q"});
    auto dump = [&](const EvolutionState& st) {
      for (int j = 0; j < st.n; ++j) csv.row({st.t, st.x(j), st.q[j].real(), st.q[j].imag()});
    };
    manifest["outputs"].push_back("evolve_snapshots.csv");
    dump(s0);
    stage = "evolve";
    EvolveOptions eo;
    eo.log_every = log_every;
    eo.boundary_threshold = c.tol.get("boundary_leak");
    eo.snapshot_every = snapshot_every;
    eo.on_snapshot = dump;
    const EvolutionResult r = evolve(s0, t_end, g.dt, eo);
    const long total = std::lround(steps);
    if (total > 0 && (snapshot_every == 0 || total % snapshot_every != 0)) dump(r.state);
    json m = evolution_manifest(r, g.dt);
    for (const auto& [k, v] : m.items()) manifest[k] = v;
    manifest["initial"] = init.kind;
    return int(exit_ok);
  });
}

// --------------------------------------------------------------------------- asymptote

struct RayModel {
  double xi;
  PhaseContext ctx;
  ScatteringSample at;
  DeltaPartition part;
};

RayModel ray_model(const Potential& q0, const DiscreteSpectrum& spec, double xi, const PhaseOptions& po,
                   const VolterraOptions& vo) {
  PhaseContext ctx = PhaseContext::from_potential(q0, xi, po, vo);
  ScatteringSample at = scattering_sample(q0, cplx(-xi, 0.0), vo);
  DeltaPartition part = classify(spec, xi);
  return {xi, std::move(ctx), at, std::move(part)};
}

int cmd_asymptote(const RunConfig& c) {
  const Potential q0 = load_potential(c);
  const json& s = require_section(c, "asymptote");
  const std::vector<double> rays = number_list(s, "rays");
  if (rays.empty()) fail("asymptote.rays", "need at least one ray");
  const std::vector<double> ts = positive_times(s, "t");
  const SpectrumSource src = spectrum_source(c, s);
  const SpectrumSearch so = ingest([&] { return search_options(c); });
  const PhaseOptions po = phase_options(c);
  const VolterraOptions vo = volterra_options(c);

  return pipeline("asymptote", c, [&](json& manifest, std::string& stage) {
    stage = "spectrum";
    const DiscreteSpectrum spec = resolve_spectrum(src, q0, so);
    manifest["spectrum"] = spectrum_to_json(spec);
    Csv csv(c.out_dir / "asymptote.csv",
            {"x", "t", "xi", "re_q_sol", "im_q_sol", "re_dispersive", "im_dispersive", "declared_order"});
    manifest["outputs"].push_back("asymptote.csv");
    json ray_info = json::array();
    for (double xi : rays) {
      stage = "phase";
      const RayModel m = ray_model(q0, spec, xi, po, vo);
      stage = "asymptotic_q";
      json last;
      for (double t : ts) {
        const AsymptoticField f = asymptotic_q(spec, m.part, m.ctx, m.at, 4.0 * xi * t, t);
        csv.row({f.x, f.t, f.xi, f.q_sol.real(), f.q_sol.imag(), f.dispersive.value.real(),
                 f.dispersive.value.imag(), f.declared_order});
        last = dispersive_to_json(f.dispersive);
      }
      ray_info.push_back({{"xi", xi},
                          {"phase", phase_to_json(m.ctx)},
                          {"r1", complex_to_json(m.at.r1)},
                          {"r2", complex_to_json(m.at.r2)},
                          {"partition", partition_to_json(m.part)},
                          {"dispersive_at_last_t", last}});
    }
    manifest["rays"] = ray_info;
    return int(exit_ok);
  });
}

// --------------------------------------------------------------------------- compare

int cmd_compare(const RunConfig& c) {
  const json& s = require_section(c, "compare");
  const std::vector<double> rays = number_list(s, "rays");
  if (rays.empty()) fail("compare.rays", "need at least one ray");
  const std::vector<double> win = number_list(s, "t_window");
  if (win.size() != 2) fail("compare.t_window", "expected [t_start, t_end]");
  if (!(win[0] > 0) || !(win[0] < win[1])) fail("compare.t_window", "window must be positive, increasing and non-empty");
  const int samples = integer(s, "samples", 10);
  if (samples < 2) fail("compare.samples", "need at least two sample times");
  if (!s.contains("pde") || !s["pde"].is_object()) fail("compare.pde", "missing");
  const GridSpec g = ingest([&] { return grid_spec(s["pde"], "compare.pde."); });
  if (!(g.dt > 0)) fail("compare.pde.dt", "must be positive");
  const InitialField init = initial_field(c, s, 0.0);
  const bool from_potential = init.kind == "potential";

  // Sample times: geometric in the window, snapped to the time step.
  std::vector<double> times;
  for (int i = 0; i < samples; ++i) {
    const double t = win[0] * std::pow(win[1] / win[0], double(i) / (samples - 1));
    const double snapped = g.dt * std::max(1.0, std::round(t / g.dt));
    if (times.empty() || snapped > times.back()) times.push_back(snapped);
  }
  if (times.size() < 2) fail("compare.t_window", "window shorter than two time steps");

  std::optional<Potential> q0;
  std::optional<ReflectionlessData> sol;
  SpectrumSource src;
  SpectrumSearch so;
  if (from_potential) {
    q0 = load_potential(c);
    src = spectrum_source(c, s);
    so = ingest([&] { return search_options(c); });
  } else {
    sol = soliton_data(c);
  }
  const PhaseOptions po = phase_options(c);
  const VolterraOptions vo = volterra_options(c);

  return pipeline("compare", c, [&](json& manifest, std::string& stage) {
    std::vector<RayModel> models;
    DiscreteSpectrum spec;
    if (from_potential) {
      stage = "spectrum";
      spec = resolve_spectrum(src, *q0, so);
      manifest["spectrum"] = spectrum_to_json(spec);
      stage = "phase";
      for (double xi : rays) models.push_back(ray_model(*q0, spec, xi, po, vo));
    }
    for (double xi : rays)
      if (4.0 * std::abs(xi) * times.back() >= 0.95 * g.L)
        throw Error(ErrorKind::InvalidArgument, "ray xi = " + fmt17(xi) + " leaves the PDE domain by t_end");

    std::vector<std::unique_ptr<Csv>> csvs;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      const std::string name = "compare_ray" + std::to_string(r) + ".csv";
      csvs.push_back(std::make_unique<Csv>(
          c.out_dir / name, std::vector<std::string>{"t", "x", "re_q_pde", "im_q_pde", "re_q_asym", "im_q_asym",
                                                     "abs_q_pde", "abs_q_asym", "abs_diff"}));
      manifest["outputs"].push_back(name);
    }
    std::vector<std::vector<double>> abs_pde(rays.size()), abs_diff(rays.size());
    std::vector<double> declared(rays.size(), std::nan(""));

    stage = "pde";
    EvolutionState state = make_state(init.f, g.L, g.n, init.sigma, 0.0);
    EvolveOptions eo;
    eo.boundary_threshold = c.tol.get("boundary_leak");
    double drift = 0.0;
    const cplx p0 = quasi_power(state);
    for (double t : times) {
      stage = "pde";
      const EvolutionResult er = evolve(state, t, g.dt, eo);
      state = er.state;
      drift = std::max(drift, std::abs(quasi_power(state) - p0) / std::max(std::abs(p0), 1e-300));
      stage = "asymptotic_q";
      for (std::size_t r = 0; r < rays.size(); ++r) {
        const double x = 4.0 * rays[r] * t;
        const cplx qp = evaluate(state, x);
        cplx qa;
        if (from_potential) {
          const AsymptoticField f = asymptotic_q(spec, models[r].part, models[r].ctx, models[r].at, x, t);
          qa = f.value;
          declared[r] = f.declared_order;
        } else {
          qa = q_sol(*sol, x, t);
        }
        abs_pde[r].push_back(std::abs(qp));
        abs_diff[r].push_back(std::abs(qp - qa));
        csvs[r]->row({t, x, qp.real(), qp.imag(), qa.real(), qa.imag(), std::abs(qp), std::abs(qa),
                      std::abs(qp - qa)});
      }
    }

    stage = "fit";
    json fits = json::array();
    for (std::size_t r = 0; r < rays.size(); ++r) {
      json f = {{"xi", rays[r]},
                {"csv", "compare_ray" + std::to_string(r) + ".csv"},
                {"fitted_q_exponent", loglog_slope(times, abs_pde[r])},
                {"fitted_diff_exponent", loglog_slope(times, abs_diff[r])},
                {"max_abs_diff", *std::max_element(abs_diff[r].begin(), abs_diff[r].end())}};
      if (from_potential) {
        const cplx nu0 = models[r].ctx.nu_at_xi();
        f["nu"] = complex_to_json(nu0);
        f["leading_exponent"] = -0.5 + nu0.imag();
        f["declared_order"] = declared[r];
        f["solitons_in_model"] = !models[r].part.delta.empty();
      }
      fits.push_back(f);
    }
    const json report = {{"rays", fits},
                         {"times", times},
                         {"pde", {{"L", g.L}, {"n", g.n}, {"dt", g.dt}, {"quasi_power_drift", drift}}},
                         {"initial", init.kind}};
    write_json(c.out_dir / "compare_fit.json", report);
    manifest["outputs"].push_back("compare_fit.json");
    return int(exit_ok);
  });
}

}  // namespace

double loglog_slope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2) return std::nan("");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0) || !(y[i] > 0)) return std::nan("");
    const double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? std::nan("") : (n * sxy - sx * sy) / den;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"scatter", "spectrum", "soliton", "evolve", "asymptote", "compare"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg) {
  try {
    if (name == "scatter") return cmd_scatter(cfg);
    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "soliton") return cmd_soliton(cfg);
    if (name == "evolve") return cmd_evolve(cfg);
    if (name == "asymptote") return cmd_asymptote(cfg);
    if (name == "compare") return cmd_compare(cfg);
    std::cerr << "nnls: unknown command '" << name << "'\n";
    return exit_config;
  } catch (const Error& e) {
    std::cerr << "nnls " << name << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? exit_config : exit_pipeline;
  }
}

}  // namespace nnls::cli

#include "echolab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "echolab/classical_rotor.hpp"
#include "echolab/error.hpp"
#include "echolab/glauber.hpp"
#include "echolab/hilbert.hpp"
#include "echolab/oscillator.hpp"
#include "echolab/qkr.hpp"

namespace echolab {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::optional<FitWindow> fit_window(const ExperimentConfig& c) {
  if (!c.has("fit", "t_min") && !c.has("fit", "t_max")) return std::nullopt;
  FitWindow w;
  w.t_min = c.number("fit", "t_min", 2.0);
  w.t_max = c.number("fit", "t_max", 8.0);
  if (!(w.t_max > w.t_min)) throw ConfigError("fit.t_max", "must exceed fit.t_min");
  return w;
}

long positive(const ExperimentConfig& c, const std::string& s, const std::string& k, long fallback) {
  const long v = c.integer(s, k, fallback);
  if (v <= 0) throw ConfigError(s + "." + k, "must be positive");
  return v;
}

int steps(const ExperimentConfig& c, long fallback) {
  const long T = c.integer("experiment", "T", fallback);
  if (T < 0 || T > 1000000) throw ConfigError("experiment.T", "must be in [0, 1e6]");
  return static_cast<int>(T);
}

std::uint64_t seed_of(const ExperimentConfig& c) {
  const long s = c.integer("experiment", "seed", 1);
  if (s < 0) throw ConfigError("experiment.seed", "must be non-negative");
  return static_cast<std::uint64_t>(s);
}

KickOrder order_of(const ExperimentConfig& c) {
  const std::string o = c.string("rotor", "order", "drift-kick");
  if (o == "drift-kick") return KickOrder::drift_kick;
  if (o == "kick-drift") return KickOrder::kick_drift;
  throw ConfigError("rotor.order", "expected drift-kick or kick-drift, got '" + o + "'");
}

Region region_of(const ExperimentConfig& c) {
  const auto r = c.list("rotor", "region", std::vector<double>{0.2, 0.3, 0.3, 0.4});
  if (r.size() != 4) throw ConfigError("rotor.region", "expected theta_lo,theta_hi,p_lo,p_hi");
  Region reg{r[0], r[1], r[2], r[3]};
  try {
    reg.validate();
  } catch (const InvalidRegion& e) {
    throw ConfigError("rotor.region", e.what());
  }
  return reg;
}

void attach_fit(DecaySeries& s, const std::optional<FitWindow>& w) {
  if (w) s.fit = fit_decay_rate(s, *w);
}

json fits_json(const std::vector<NamedSeries>& all) {
  json out = json::object();
  for (const auto& ns : all) {
    if (ns.series.fit) out[ns.name] = fit_json(*ns.series.fit);
  }
  return out;
}

// ---- rotor -----------------------------------------------------------------

DecaySeries classical_series(const ExperimentConfig& c, const Region& region, double kick, int T,
                             KickOrder order) {
  const long n = positive(c, "classical", "trajectories", 100000);
  const double gamma = c.number("classical", "gamma", 2.0);
  const auto ens = ClassicalEnsemble::uniform(region, static_cast<std::size_t>(n), seed_of(c));
  return angular_correlation(ens, gamma, kick, T, order);
}

ResultBundle run_rotor_echo(const ExperimentConfig& c) {
  const long n = positive(c, "rotor", "N", 2048);
  if (n < 2) throw ConfigError("rotor.N", "must be at least 2");
  const TorusGrid grid = TorusGrid::make(static_cast<std::size_t>(n));
  RotorParams p;
  p.kick = c.number("rotor", "K", 10.0);
  if (c.has("rotor", "sigma") && c.has("rotor", "epsilon")) {
    throw ConfigError("rotor.epsilon", "give either rotor.sigma or rotor.epsilon, not both");
  }
  p.epsilon = c.has("rotor", "epsilon") ? c.number("rotor", "epsilon") : c.number("rotor", "sigma", 1.1) * grid.hbar();
  p.symmetric = c.flag("rotor", "symmetric", false);
  p.order = order_of(c);
  const Region region = region_of(c);
  const long members = positive(c, "rotor", "members", 64);
  const int T = steps(c, 14);
  const auto window = fit_window(c);

  const PacketMixture mixture = uniform_mixture(grid, region, static_cast<std::size_t>(members), seed_of(c));
  EchoOptions opt;
  opt.peres = c.flag("rotor", "peres", true);
  const EchoRecord rec = mixture_echo(mixture, T, p, opt);

  ResultBundle b;
  b.kind = "rotor-echo";
  b.series.push_back({"coherent", rec.coherent_series()});
  b.series.push_back({"incoherent", rec.incoherent_series()});
  if (opt.peres) b.series.push_back({"peres", rec.peres_series()});
  if (c.has("classical", "trajectories")) {
    b.series.push_back({"classical", classical_series(c, region, p.kick, T, p.order)});
  }
  for (auto& ns : b.series) attach_fit(ns.series, window);

  json res = json::object();
  res["hbar"] = grid.hbar();
  res["epsilon"] = p.epsilon;
  res["sigma"] = p.sigma(grid);
  res["cells"] = mixture.cell_count();
  res["members"] = mixture.size();
  res["lyapunov_reference"] = std::log(p.kick / 2.0);
  res["fits"] = fits_json(b.series);
  if (window && b.find("classical")) {
    res["rate_comparison"] =
        report_json(compare_rates(*b.find("coherent")->series.fit, *b.find("classical")->series.fit, p.kick));
  }
  if (c.has("saturation", "t_min") || c.has("saturation", "t_max")) {
    FitWindow sw{c.number("saturation", "t_min", 15.0), c.number("saturation", "t_max", static_cast<double>(T))};
    const double nd = static_cast<double>(n), md = static_cast<double>(mixture.cell_count());
    const double inc = window_mean(b.find("incoherent")->series, sw);
    const double coh = window_mean(b.find("coherent")->series, sw);
    json sat = json::object();
    sat["t_min"] = sw.t_min;
    sat["t_max"] = sw.t_max;
    sat["incoherent_plateau"] = inc;
    sat["incoherent_plateau_times_N"] = inc * nd;
    sat["coherent_plateau"] = coh;
    sat["coherent_plateau_times_NM"] = coh * nd * md;
    res["saturation"] = sat;
  }
  b.summary["results"] = res;
  return b;
}

ResultBundle run_rotor_classical(const ExperimentConfig& c) {
  const double kick = c.number("rotor", "K", 10.0);
  const int T = steps(c, 14);
  const auto window = fit_window(c);
  ResultBundle b;
  b.kind = "rotor-classical";
  b.series.push_back({"classical", classical_series(c, region_of(c), kick, T, order_of(c))});
  for (auto& ns : b.series) attach_fit(ns.series, window);
  json res = json::object();
  res["fits"] = fits_json(b.series);
  res["lyapunov_reference"] = std::log(kick / 2.0);
  if (c.has("classical", "lyapunov_trajectories") || c.has("classical", "lyapunov_steps")) {
    const long nt = positive(c, "classical", "lyapunov_trajectories", 200);
    const long ns = positive(c, "classical", "lyapunov_steps", 2000);
    if (ns < 100) throw ConfigError("classical.lyapunov_steps", "must be at least 100");
    const auto est = lyapunov_exponent(kick, static_cast<std::size_t>(nt), static_cast<std::size_t>(ns), seed_of(c));
    json ly = json::object();
    ly["exponent"] = est.exponent;
    ly["stderr"] = est.standard_error;
    ly["chaotic"] = est.chaotic;
    res["lyapunov"] = ly;
  }
  b.summary["results"] = res;
  return b;
}

// ---- oscillator --------------------------------------------------------------

OscParams osc_params(const ExperimentConfig& c) {
  OscParams p;
  p.omega0 = c.number("oscillator", "omega0", 1.0);
  p.dt = c.number("oscillator", "dt", 1e-3);
  const std::string drive = c.string("oscillator", "drive", "kicked");
  if (drive == "kicked") {
    p.drive = KickedDrive{c.number("oscillator", "g0", 1.0)};
  } else if (drive == "harmonic") {
    HarmonicDrive h;
    h.amplitudes = c.list("oscillator", "amplitudes");
    h.phases = c.list("oscillator", "phases", std::vector<double>(h.amplitudes.size(), 0.0));
    if (h.phases.size() != h.amplitudes.size()) throw ConfigError("oscillator.phases", "length differs from amplitudes");
    p.drive = h;
  } else if (drive == "pulses") {
    p.drive = PulseTrainDrive{c.number("oscillator", "g0", 1.0), c.number("oscillator", "pulse_width", 0.01)};
  } else {
    throw ConfigError("oscillator.drive", "expected kicked, harmonic or pulses, got '" + drive + "'");
  }
  if (!p.kicked() && !(p.dt > 0.0 && p.dt <= 0.01)) throw ConfigError("oscillator.dt", "must be in (0, 0.01]");
  return p;
}

cplx center_of(const ExperimentConfig& c) {
  const auto a = c.list("oscillator", "alpha_c", std::vector<double>{0.0, 0.0});
  if (a.size() != 2) throw ConfigError("oscillator.alpha_c", "expected re,im");
  return {a[0], a[1]};
}

RadialWeight osc_weight(const ExperimentConfig& c, double omega0) {
  const std::string w = c.string("oscillator", "weight", "gaussian");
  try {
    if (w == "gaussian") return RadialWeight::gaussian(c.number("oscillator", "delta", 0.05));
    if (w == "ring") return RadialWeight::ring(c.number("oscillator", "i0"), c.number("oscillator", "width"));
    if (w == "thermal") {
      ThermalOptions o;
      o.tolerance = c.number("oscillator", "tolerance", o.tolerance);
      return thermal_weight(c.number("oscillator", "temperature"), omega0, c.number("oscillator", "hbar"), o);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError("oscillator.weight", e.what());
  }
  throw ConfigError("oscillator.weight", "expected gaussian, ring or thermal, got '" + w + "'");
}

CoherentMixture osc_mixture(const ExperimentConfig& c, const OscParams& p) {
  const long n = positive(c, "oscillator", "samples", 10000);
  return CoherentMixture(center_of(c), osc_weight(c, p.omega0), static_cast<std::size_t>(n), seed_of(c));
}

DecaySeries mean_action_series(const EnsembleHistory& h) {
  DecaySeries s;
  const std::size_t n = h.samples(), steps = h.action.front().size();
  for (std::size_t t = 0; t < steps; ++t) {
    double m = 0.0, v = 0.0;
    for (std::size_t k = 0; k < n; ++k) m += h.action[k][t];
    m /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) v += (h.action[k][t] - m) * (h.action[k][t] - m);
    v = n > 1 ? v / static_cast<double>(n - 1) : 0.0;
    s.times.push_back(static_cast<double>(t));
    s.values.push_back(m);
    s.stderrs.push_back(std::sqrt(v / static_cast<double>(n)));
  }
  return s;
}

DecaySeries chi2_series(const EnsembleHistory& h) {
  DecaySeries s;
  s.values = chi2_from_histories(h.action_integral);
  for (std::size_t t = 0; t < s.values.size(); ++t) s.times.push_back(static_cast<double>(t));
  return s;
}

json diffusion_json(const ActionDiffusion& d) {
  json j = json::object();
  j["D"] = d.rate;
  j["D_stderr"] = d.rate_stderr;
  j["intercept"] = d.intercept;
  j["rms_residual"] = d.rms_residual;
  j["growth"] = d.growth;
  return j;
}

ResultBundle run_osc_correlation(const ExperimentConfig& c) {
  const OscParams p = osc_params(c);
  const int T = steps(c, 20);
  const auto window = fit_window(c);
  const EnsembleHistory h = ensemble_history(osc_mixture(c, p), p, T);
  ResultBundle b;
  b.kind = "osc-correlation";
  b.series.push_back({"correlation", phase_average_squared(h, 1.0)});
  attach_fit(b.series.back().series, window);
  b.series.push_back({"mean_action", mean_action_series(h)});
  b.series.push_back({"chi2", chi2_series(h)});
  json res = json::object();
  res["fits"] = fits_json(b.series);
  res["action_diffusion"] = diffusion_json(mean_action_diffusion(h));
  b.summary["results"] = res;
  return b;
}

ResultBundle run_osc_fgr(const ExperimentConfig& c) {
  const OscParams p = osc_params(c);
  const int T = steps(c, 30);
  const auto window = fit_window(c);
  const auto sigmas = c.list("oscillator", "sigma", std::vector<double>{0.05, 2.0, 4.0});
  const EnsembleHistory h = ensemble_history(osc_mixture(c, p), p, T);

  ResultBundle b;
  b.kind = "osc-fgr";
  b.series.push_back({"correlation", phase_average_squared(h, 1.0)});
  attach_fit(b.series.back().series, window);
  const DecaySeries chi2 = chi2_series(h);
  b.series.push_back({"chi2", chi2});

  const double c_min = c.number("oscillator", "chi2_t_min", T / 2.0);
  const double c_max = c.number("oscillator", "chi2_t_max", static_cast<double>(T));
  std::vector<double> tx, ty;
  for (std::size_t t = 0; t < chi2.size(); ++t) {
    if (chi2.times[t] >= c_min - 1e-9 && chi2.times[t] <= c_max + 1e-9) {
      tx.push_back(chi2.times[t]);
      ty.push_back(chi2.values[t]);
    }
  }
  const LineFit slope = fit_line(tx, ty);
  const double k_action = 0.5 * slope.slope;

  json per_sigma = json::array();
  for (double s : sigmas) {
    NamedSeries ns{"fidelity_sigma_" + fmt(s), phase_average_squared(h, 0.5 * s)};
    attach_fit(ns.series, window);
    json e = json::object();
    e["sigma"] = s;
    e["series"] = ns.name;
    if (ns.series.fit) e["fit"] = fit_json(*ns.series.fit);
    per_sigma.push_back(e);
    b.series.push_back(std::move(ns));
    b.series.push_back({"fgr_sigma_" + fmt(s), fgr_fidelity(s, k_action, T)});
  }
  json res = json::object();
  json kj = json::object();
  kj["K_action"] = k_action;
  kj["chi2_slope"] = slope.slope;
  kj["chi2_slope_stderr"] = slope.slope_stderr;
  kj["t_min"] = c_min;
  kj["t_max"] = c_max;
  res["golden_rule"] = kj;
  res["fits"] = fits_json(b.series);
  res["sigmas"] = per_sigma;
  res["action_diffusion"] = diffusion_json(mean_action_diffusion(h));
  b.summary["results"] = res;
  return b;
}

ResultBundle run_osc_ivr(const ExperimentConfig& c) {
  const OscParams p = osc_params(c);
  const int T = steps(c, 10);
  const cplx alpha0 = center_of(c);
  QuantumCellSampler sampler;
  sampler.hbar = c.number("oscillator", "hbar", 0.01);
  if (sampler.hbar < 0.0) throw ConfigError("oscillator.hbar", "must be non-negative");
  sampler.n_samples = static_cast<std::size_t>(positive(c, "oscillator", "ivr_samples", 4000));
  if (sampler.n_samples < 1000) throw ConfigError("oscillator.ivr_samples", "must be at least 1000");
  sampler.seed = seed_of(c);
  const double sigma = c.list("oscillator", "sigma", std::vector<double>{1.0}).front();

  const IvrAmplitude f = ivr_fidelity_amplitude(alpha0, sigma, sampler, p, T);
  ResultBundle b;
  b.kind = "osc-ivr";
  DecaySeries fid;
  for (std::size_t t = 0; t < f.values.size(); ++t) {
    fid.times.push_back(static_cast<double>(t));
    fid.values.push_back(std::norm(f.values[t]));
    fid.stderrs.push_back(2.0 * std::abs(f.values[t]) * f.stderrs[t] + f.stderrs[t] * f.stderrs[t]);
  }
  b.series.push_back({"ivr_fidelity", fid});

  json res = json::object();
  if (c.has("oscillator", "epsilon")) {
    const double eps = c.number("oscillator", "epsilon");
    const double hb = sampler.hbar > 0.0 ? sampler.hbar : throw ConfigError("oscillator.hbar", "must be positive");
    const long early_T = c.integer("oscillator", "early_T", 6);
    DecaySeries early;
    std::vector<double> tx, grad;
    int valid_until = 0;
    for (long t = 0; t <= early_T; ++t) {
      try {
        const double F = early_time_fidelity(alpha0, eps, hb, p, static_cast<double>(t));
        if (t > 0) {
          const PhaseDerivatives d = phase_derivatives(alpha0, p, static_cast<double>(t));
          if (d.d_alpha > 0.0) {
            tx.push_back(static_cast<double>(t));
            grad.push_back(std::log(d.d_alpha));
          }
        }
        early.times.push_back(static_cast<double>(t));
        early.values.push_back(F);
        valid_until = static_cast<int>(t);
      } catch (const UnreliableDerivative&) {
        break;
      }
    }
    b.series.push_back({"early_fidelity", early});
    json ej = json::object();
    ej["epsilon"] = eps;
    ej["valid_until"] = valid_until;
    if (tx.size() >= 2) {
      const LineFit lf = fit_line(tx, grad);
      ej["stretching_rate"] = lf.slope;
      ej["stretching_rate_stderr"] = lf.slope_stderr;
    }
    res["early_time"] = ej;
  }
  res["sigma"] = sigma;
  res["hbar"] = sampler.hbar;
  b.summary["results"] = res;
  return b;
}

// ---- glauber -----------------------------------------------------------------

ResultBundle run_glauber(const ExperimentConfig& c) {
  const double hbar = c.number("glauber", "hbar", 0.1);
  if (!(hbar > 0.0)) throw ConfigError("glauber.hbar", "must be positive");
  const std::string kind = c.string("glauber", "weight", "thermal");
  std::optional<RadialWeight> w;
  std::vector<double> target;
  try {
    if (kind == "gaussian") {
      w = RadialWeight::gaussian(c.number("glauber", "delta"));
    } else if (kind == "ring") {
      w = RadialWeight::ring(c.number("glauber", "i0"), c.number("glauber", "width"));
    } else if (kind == "thermal") {
      ThermalOptions o;
      o.anharmonic = c.flag("glauber", "anharmonic", true);
      o.tolerance = c.number("glauber", "tolerance", o.tolerance);
      const double temp = c.number("glauber", "temperature"), omega0 = c.number("glauber", "omega0", 1.0);
      w = thermal_weight(temp, omega0, hbar, o);
      target = thermal_populations(temp, omega0, hbar, o.anharmonic);
    } else if (kind == "table") {
      const std::string path = c.string("glauber", "table");
      std::ifstream in(path);
      if (!in) throw ConfigError("glauber.table", "cannot open '" + path + "'");
      w = read_weight_table(in);
    } else {
      throw ConfigError("glauber.weight", "expected gaussian, ring, thermal or table, got '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError("glauber.weight", e.what());
  }
  const long n_max = c.has("glauber", "n_max") ? c.integer("glauber", "n_max") : suggest_n_max(*w, hbar);
  if (n_max < 0) throw ConfigError("glauber.n_max", "must be non-negative");
  const Populations pop = populations_from_weight(*w, hbar, static_cast<int>(n_max));

  ResultBundle b;
  b.kind = "glauber-populations";
  DecaySeries s;
  double total = 0.0, mean_n = 0.0;
  for (std::size_t n = 0; n < pop.values.size(); ++n) {
    s.times.push_back(static_cast<double>(n));
    s.values.push_back(pop.values[n]);
    total += pop.values[n];
    mean_n += static_cast<double>(n) * pop.values[n];
  }
  b.series.push_back({"populations", s});
  json res = json::object();
  res["n_max"] = n_max;
  res["sum"] = total;
  res["tail"] = pop.tail;
  res["clamped"] = pop.clamped;
  res["mean_n"] = mean_n;
  res["mean_action"] = w->mean();
  if (!target.empty()) {
    double worst = 0.0;
    for (std::size_t n = 0; n < target.size() && n < pop.values.size(); ++n) {
      if (target[n] > 1e-6) worst = std::max(worst, std::abs(pop.values[n] - target[n]) / target[n]);
    }
    res["max_relative_error"] = worst;
  }
  if (c.has("glauber", "write_table")) {
    if (w->family() != RadialWeight::Family::tabulated) {
      throw ConfigError("glauber.write_table", "only tabulated weights can be written");
    }
    const std::string path = c.string("glauber", "write_table");
    std::ofstream out(path);
    if (!out) throw ConfigError("glauber.write_table", "cannot write '" + path + "'");
    write_weight_table(out, *w);
  }
  b.summary["results"] = res;
  return b;
}

}  // namespace

const NamedSeries* ResultBundle::find(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ResultBundle run(const ExperimentConfig& config) {
  const std::string kind = config.kind();
  ResultBundle b;
  try {
    if (kind == "rotor-echo") {
      b = run_rotor_echo(config);
    } else if (kind == "rotor-classical") {
      b = run_rotor_classical(config);
    } else if (kind == "osc-correlation") {
      b = run_osc_correlation(config);
    } else if (kind == "osc-fgr") {
      b = run_osc_fgr(config);
    } else if (kind == "osc-ivr") {
      b = run_osc_ivr(config);
    } else if (kind == "glauber-populations") {
      b = run_glauber(config);
    } else {
      throw ConfigError("experiment.kind", "unknown experiment '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(kind + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(kind + ": " + e.what());
  }
  json summary = json::object();
  summary["schema_version"] = kSummarySchemaVersion;
  summary["code_version"] = kCodeVersion;
  summary["experiment"] = kind;
  json files = json::array();
  for (const auto& s : b.series) files.push_back(s.name + ".csv");
  summary["series"] = files;
  summary["results"] = b.summary.value("results", json::object());
  summary["config"] = config.echo();
  b.summary = std::move(summary);
  return b;
}

std::string format_csv(const DecaySeries& s) {
  std::string out = "t,value,stderr\n";
  char buf[96];
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = i < s.stderrs.size() ? s.stderrs[i] : 0.0;
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", s.times[i], s.values[i], e);
    out += buf;
  }
  return out;
}

DecaySeries read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,value", 0) != 0) {
    throw InvalidArgument("'" + path.string() + "' lacks the t,value,stderr header");
  }
  DecaySeries s;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, v, e;
    std::getline(ss, a, ',');
    std::getline(ss, v, ',');
    std::getline(ss, e, ',');
    try {
      s.times.push_back(std::stod(a));
      s.values.push_back(std::stod(v));
      s.stderrs.push_back(e.empty() ? 0.0 : std::stod(e));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed row at line " + std::to_string(lineno) + " of '" + path.string() + "'");
    }
  }
  return s;
}

json fit_json(const RateFit& f) {
  json j = json::object();
  j["rate"] = f.rate;
  j["rate_stderr"] = f.rate_stderr;
  j["intercept"] = f.intercept;
  j["residual"] = f.residual;
  j["t_min"] = f.window.t_min;
  j["t_max"] = f.window.t_max;
  j["points"] = f.points;
  return j;
}

void write_bundle(const ResultBundle& b, const std::filesystem::path& dir, bool gnuplot) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write '" + (dir / name).string() + "'");
    out << text;
  };
  for (const auto& s : b.series) write(s.name + ".csv", format_csv(s.series));
  write("summary.json", b.summary.dump(2) + "\n");
  if (gnuplot) write("plot.gp", gnuplot_script(b));
}

RateReport compare_rates(const RateFit& quantum, const RateFit& classical, double kick) {
  RateReport r;
  r.quantum_rate = quantum.rate;
  r.quantum_stderr = quantum.rate_stderr;
  r.classical_rate = classical.rate;
  r.classical_stderr = classical.rate_stderr;
  r.ratio = classical.rate != 0.0 ? quantum.rate / classical.rate : std::numeric_limits<double>::infinity();
  r.follows_classical = std::abs(r.ratio - 1.0) <= 0.2;
  r.lyapunov = std::log(kick / 2.0);
  r.quantum_minus_lyapunov = quantum.rate - r.lyapunov;
  r.distinct_from_lyapunov = std::abs(r.quantum_minus_lyapunov) > quantum.rate_stderr;
  return r;
}

RateReport compare_rates(const ResultBundle& b) {
  const auto* q = b.find("coherent");
  const auto* c = b.find("classical");
  if (!q || !c) throw Error("rate comparison needs both the coherent and the classical series");
  if (!q->series.fit || !c->series.fit) throw Error("rate comparison needs fitted series");
  double kick = 10.0;
  if (b.summary.contains("config") && b.summary["config"].contains("rotor") &&
      b.summary["config"]["rotor"].contains("K")) {
    kick = std::stod(b.summary["config"]["rotor"]["K"].get<std::string>());
  }
  return compare_rates(*q->series.fit, *c->series.fit, kick);
}

json report_json(const RateReport& r) {
  json j = json::object();
  j["quantum_rate"] = r.quantum_rate;
  j["quantum_stderr"] = r.quantum_stderr;
  j["classical_rate"] = r.classical_rate;
  j["classical_stderr"] = r.classical_stderr;
  j["ratio"] = r.ratio;
  j["follows_classical"] = r.follows_classical;
  j["lyapunov_ln_K_over_2"] = r.lyapunov;
  j["quantum_minus_lyapunov"] = r.quantum_minus_lyapunov;
  j["distinct_from_lyapunov"] = r.distinct_from_lyapunov;
  return j;
}

std::string gnuplot_script(const ResultBundle& b) {
  std::ostringstream g;
  g << "set datafile separator ','\nset logscale y\nset xlabel 't'\nset key top right\n";
  g << "set title '" << b.kind << "'\nplot ";
  for (std::size_t i = 0; i < b.series.size(); ++i) {
    if (i) g << ", \\\n     ";
    g << "'" << b.series[i].name << ".csv' every ::1 using 1:2 with linespoints title '" << b.series[i].name << "'";
  }
  g << "\npause -1\n";
  return g.str();
}

}  // namespace echolab

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "echolab/config.hpp"
#include "echolab/error.hpp"
#include "echolab/harness.hpp"
#include "echolab/parallel.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<long> seed;
  std::optional<unsigned> threads;
  bool gnuplot = false;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "config file, or preset:<name>");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--seed", c.seed, "overrides experiment.seed");
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  sub->add_flag("--gnuplot", c.gnuplot, "also write plot.gp");
}

void print_fits(const echolab::ResultBundle& b) {
  for (const auto& s : b.series) {
    if (!s.series.fit) continue;
    const auto& f = *s.series.fit;
    std::printf("%-24s rate %.6f +- %.6f  (t in [%g, %g])\n", s.name.c_str(), f.rate, f.rate_stderr, f.window.t_min,
                f.window.t_max);
  }
}

int run_experiment(const std::string& kind, const Common& c) {
  auto cfg = echolab::ExperimentConfig::load(c.config);
  if (cfg.kind() != kind) {
    throw echolab::ConfigError("experiment.kind", "config describes '" + cfg.kind() + "', not '" + kind + "'");
  }
  if (c.seed) {
    if (*c.seed < 0) throw echolab::ConfigError("experiment.seed", "must be non-negative");
    cfg.set("experiment", "seed", std::to_string(*c.seed));
  }
  if (c.threads) {
    echolab::set_thread_count(*c.threads);
  } else if (cfg.has("experiment", "threads")) {
    const long n = cfg.integer("experiment", "threads");
    if (n < 0) throw echolab::ConfigError("experiment.threads", "must be non-negative");
    echolab::set_thread_count(static_cast<unsigned>(n));
  }
  const bool gnuplot = c.gnuplot || cfg.flag("output", "gnuplot", false);
  const auto bundle = echolab::run(cfg);
  echolab::write_bundle(bundle, c.out, gnuplot);
  print_fits(bundle);
  if (bundle.summary["results"].contains("rate_comparison")) {
    const auto& r = bundle.summary["results"]["rate_comparison"];
    std::printf("quantum/classical rate ratio %.4f, follows classical: %s, ln(K/2) = %.4f\n",
                r["ratio"].get<double>(), r["follows_classical"].get<bool>() ? "yes" : "no",
                r["lyapunov_ln_K_over_2"].get<double>());
  }
  std::printf("wrote %zu series to %s\n", bundle.series.size(), c.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"echo-lab: fidelity decay of mixed states in chaotic systems"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {"rotor-echo", "rotor-classical", "osc-correlation",
                                          "osc-fgr",    "osc-ivr",         "glauber-populations"};
  std::vector<Common> commons(kinds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    auto* sub = app.add_subcommand(kinds[i], "run the " + kinds[i] + " experiment");
    add_common(sub, commons[i], true);
    subs.push_back(sub);
  }

  Common fit_common;
  std::string fit_input;
  std::optional<double> t_min, t_max;
  auto* fit = app.add_subcommand("fit", "re-fit an existing series CSV over a new window");
  add_common(fit, fit_common, false);
  fit->add_option("--input", fit_input, "series CSV (t,value,stderr)");
  fit->add_option("--t-min", t_min, "window start");
  fit->add_option("--t-max", t_max, "window end");

  std::string presets_out;
  auto* presets = app.add_subcommand("presets", "list shipped presets");
  presets->add_option("--out", presets_out, "also write each preset as <name>.ini here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (subs[i]->parsed()) return run_experiment(kinds[i], commons[i]);
    }
    if (fit->parsed()) {
      std::optional<echolab::ExperimentConfig> cfg;
      if (!fit_common.config.empty()) cfg = echolab::ExperimentConfig::load(fit_common.config);
      if (fit_input.empty() && cfg) fit_input = cfg->string("fit", "input");
      if (fit_input.empty()) throw echolab::ConfigError("fit.input", "no input series given");
      echolab::FitWindow w;
      w.t_min = t_min ? *t_min : cfg ? cfg->number("fit", "t_min", w.t_min) : w.t_min;
      w.t_max = t_max ? *t_max : cfg ? cfg->number("fit", "t_max", w.t_max) : w.t_max;
      if (!(w.t_max > w.t_min)) throw echolab::ConfigError("fit.t_max", "must exceed fit.t_min");
      const auto series = echolab::read_csv(fit_input);
      const auto f = echolab::fit_decay_rate(series, w);
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      j["schema_version"] = echolab::kSummarySchemaVersion;
      j["input"] = fit_input;
      j["fit"] = echolab::fit_json(f);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (presets->parsed()) {
      for (const auto& p : echolab::presets()) {
        std::printf("%-18s %s\n", p.name.c_str(), p.description.c_str());
        if (!presets_out.empty()) {
          std::filesystem::create_directories(presets_out);
          std::ofstream(std::filesystem::path(presets_out) / (p.name + ".ini")) << p.ini;
        }
      }
      return 0;
    }
  } catch (const echolab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const echolab::InvalidArgument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const echolab::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

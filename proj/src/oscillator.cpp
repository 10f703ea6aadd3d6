#include "echolab/oscillator.hpp"

#include <array>
#include <cmath>
#include <string>

#include "echolab/error.hpp"
#include "echolab/parallel.hpp"

namespace echolab {

namespace {

constexpr double kRelStep = 1e-6;
constexpr double kRichardsonTol = 0.1;

// Free nonlinear rotation over a time s; I is untouched.
void rotate(OscState& st, double omega0, double s) {
  const double I = st.action();
  const double rate = omega0 + 2.0 * I;
  st.alpha *= std::polar(1.0, -rate * s);
  st.phase += rate * s;
  st.action_integral += I * s;
}

using Vec = std::array<double, 4>;  // Re alpha, Im alpha, phase, action integral

Vec rhs(const Vec& y, double t, const OscParams& p) {
  const double I = y[0] * y[0] + y[1] * y[1];
  const double w = p.omega0 + 2.0 * I;
  const double g = p.drive_value(t);
  // -i (w alpha - g) = w Im(alpha) - i (w Re(alpha) - g)
  return {w * y[1], -(w * y[0] - g), w, I};
}

void rk4(OscState& st, double t0, double h, int steps, const OscParams& p) {
  Vec y{st.alpha.real(), st.alpha.imag(), st.phase, st.action_integral};
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const Vec k1 = rhs(y, t, p);
    Vec tmp;
    for (int c = 0; c < 4; ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
    const Vec k2 = rhs(tmp, t + 0.5 * h, p);
    for (int c = 0; c < 4; ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
    const Vec k3 = rhs(tmp, t + 0.5 * h, p);
    for (int c = 0; c < 4; ++c) tmp[c] = y[c] + h * k3[c];
    const Vec k4 = rhs(tmp, t + h, p);
    for (int c = 0; c < 4; ++c) y[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  st.alpha = {y[0], y[1]};
  st.phase = y[2];
  st.action_integral = y[3];
}

// Advances a smooth-drive state from t0 by length s in steps no longer than dt.
void smooth_segment(OscState& st, double t0, double s, const OscParams& p) {
  if (s <= 0.0) return;
  const int steps = static_cast<int>(std::ceil(s / p.dt - 1e-9));
  rk4(st, t0, s / steps, steps, p);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double OscParams::drive_value(double t) const {
  if (const auto* h = std::get_if<HarmonicDrive>(&drive)) {
    double g = 0.0;
    for (std::size_t j = 0; j < h->amplitudes.size(); ++j) {
      const double ph = j < h->phases.size() ? h->phases[j] : 0.0;
      g += h->amplitudes[j] * std::cos(kTwoPi * static_cast<double>(j + 1) * t + ph);
    }
    return g;
  }
  if (const auto* pt = std::get_if<PulseTrainDrive>(&drive)) {
    const double m = std::max(1.0, std::round(t));
    double g = 0.0;
    for (double c : {m - 1.0, m, m + 1.0}) {
      if (c < 1.0) continue;
      const double z = (t - c) / pt->width;
      g += pt->g0 / (pt->width * std::sqrt(kTwoPi)) * std::exp(-0.5 * z * z);
    }
    return g;
  }
  return 0.0;  // kicks act only through the exact map
}

Trajectory evolve_classical(const OscState& start, const OscParams& params, double T) {
  if (!(T >= 0.0)) throw InvalidArgument("evolution time must be non-negative");
  const bool kicked = params.kicked();
  if (!kicked && !(params.dt > 0.0)) throw InvalidArgument("integration step dt must be positive");
  const double g0 = kicked ? std::get<KickedDrive>(params.drive).g0 : 0.0;

  const int periods = static_cast<int>(std::floor(T));
  Trajectory tr;
  tr.records.reserve(static_cast<std::size_t>(periods) + 1);
  OscState st = start;
  tr.records.push_back(st);
  for (int m = 1; m <= periods; ++m) {
    if (kicked) {
      rotate(st, params.omega0, 1.0);
      st.alpha += cplx(0.0, g0);
    } else {
      smooth_segment(st, m - 1.0, 1.0, params);
    }
    tr.records.push_back(st);
  }
  const double rest = T - periods;
  if (kicked) {
    rotate(st, params.omega0, rest);
  } else {
    smooth_segment(st, static_cast<double>(periods), rest, params);
  }
  tr.final_state = st;
  return tr;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed), b = splitmix64(a ^ splitmix64(index));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

CoherentMixture::CoherentMixture(cplx center, RadialWeight weight, std::size_t samples, std::uint64_t seed)
    : center_(center), weight_(std::move(weight)), seed_(seed), points_(samples) {
  if (samples == 0) throw EmptyEnsemble("coherent mixture needs at least one sample");
  for (std::size_t k = 0; k < samples; ++k) {
    auto rng = sample_stream(seed, k);
    const double u = weight_.sample(rng);
    const double th = kTwoPi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    points_[k] = center + std::polar(std::sqrt(u), th);
  }
}

EnsembleHistory ensemble_history(const CoherentMixture& mixture, const OscParams& params, int T) {
  if (T < 0) throw InvalidArgument("number of periods must be non-negative");
  const std::size_t n = mixture.size();
  if (n == 0) throw EmptyEnsemble("empty mixture");
  const std::size_t steps = static_cast<std::size_t>(T) + 1;
  EnsembleHistory h;
  h.phase.assign(n, std::vector<double>(steps));
  h.action.assign(n, std::vector<double>(steps));
  h.action_integral.assign(n, std::vector<double>(steps));
  parallel_for(n, [&](std::size_t k) {
    OscState s;
    s.alpha = mixture.points()[k];
    const Trajectory tr = evolve_classical(s, params, T);
    for (std::size_t t = 0; t < steps; ++t) {
      h.phase[k][t] = tr.records[t].phase;
      h.action[k][t] = tr.records[t].action();
      h.action_integral[k][t] = tr.records[t].action_integral;
    }
  });
  return h;
}

DecaySeries phase_average_squared(const EnsembleHistory& history, double factor) {
  const std::size_t n = history.samples();
  if (n == 0) throw EmptyEnsemble("empty ensemble");
  const std::size_t steps = history.phase.front().size();
  DecaySeries out;
  out.times.resize(steps);
  out.values.resize(steps);
  out.stderrs.resize(steps);
  const double nd = static_cast<double>(n);
  for (std::size_t t = 0; t < steps; ++t) {
    CompensatedSum<cplx> s;
    for (std::size_t k = 0; k < n; ++k) s.add(std::polar(1.0, factor * history.phase[k][t]));
    const cplx mean = s.value() / nd;
    const double c = std::norm(mean);
    const double var_mean = std::max(0.0, 1.0 - c) / nd;
    out.times[t] = static_cast<double>(t);
    out.values[t] = c;
    out.stderrs[t] = std::sqrt(2.0 * c * var_mean + var_mean * var_mean);
  }
  return out;
}

DecaySeries phase_autocorrelation(const CoherentMixture& mixture, const OscParams& params, int T,
                                  std::optional<FitWindow> window) {
  DecaySeries s = phase_average_squared(ensemble_history(mixture, params, T), 1.0);
  if (window) s.fit = fit_decay_rate(s, *window);
  return s;
}

ActionDiffusion mean_action_diffusion(const EnsembleHistory& history) {
  const std::size_t n = history.samples();
  if (n == 0) throw EmptyEnsemble("empty ensemble");
  const std::size_t steps = history.action.front().size();
  std::vector<double> t(steps), mean(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    CompensatedSum<double> s;
    for (std::size_t k = 0; k < n; ++k) s.add(history.action[k][i]);
    t[i] = static_cast<double>(i);
    mean[i] = s.value() / static_cast<double>(n);
  }
  const LineFit fit = fit_line(t, mean);
  ActionDiffusion d;
  d.rate = fit.slope;
  d.rate_stderr = fit.slope_stderr;
  d.intercept = fit.intercept;
  d.rms_residual = fit.rms_residual;
  d.growth = mean.back() - mean.front();
  return d;
}

ActionDiffusion mean_action_diffusion(const CoherentMixture& mixture, const OscParams& params, int T) {
  return mean_action_diffusion(ensemble_history(mixture, params, T));
}

std::vector<double> chi2_from_histories(const std::vector<std::vector<double>>& integrals) {
  const std::size_t n = integrals.size();
  if (n < 2) throw InsufficientData("variance needs at least two samples");
  const std::size_t steps = integrals.front().size();
  std::vector<double> out(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    CompensatedSum<double> s;
    for (const auto& h : integrals) s.add(h.at(t));
    const double mean = s.value() / static_cast<double>(n);
    CompensatedSum<double> v;
    for (const auto& h : integrals) v.add((h[t] - mean) * (h[t] - mean));
    out[t] = v.value() / static_cast<double>(n - 1);
  }
  return out;
}

double chi2_cumulant(const CoherentMixture& mixture, const OscParams& params, int t) {
  const EnsembleHistory h = ensemble_history(mixture, params, t);
  return chi2_from_histories(h.action_integral).back();
}

DecaySeries fgr_fidelity(double sigma, double k_action, int T) {
  if (T < 0) throw InvalidArgument("number of periods must be non-negative");
  DecaySeries s;
  for (int t = 0; t <= T; ++t) {
    s.times.push_back(t);
    s.values.push_back(std::exp(-2.0 * sigma * sigma * k_action * t));
  }
  return s;
}

IvrAmplitude ivr_fidelity_amplitude(cplx alpha0, double sigma, const QuantumCellSampler& sampler,
                                    const OscParams& params, int T) {
  if (sampler.n_samples < 1000) throw InvalidArgument("IVR average needs at least 1000 samples");
  if (!(sampler.hbar >= 0.0)) throw InvalidArgument("hbar must be non-negative");
  if (T < 0) throw InvalidArgument("number of periods must be non-negative");
  const std::size_t n = sampler.n_samples;
  const std::size_t steps = static_cast<std::size_t>(T) + 1;
  const double spread = std::sqrt(sampler.hbar / 4.0);

  std::vector<std::vector<double>> phases(n, std::vector<double>(steps));
  parallel_for(n, [&](std::size_t k) {
    cplx delta{0.0, 0.0};
    if (spread > 0.0) {
      auto rng = sample_stream(sampler.seed, k);
      std::normal_distribution<double> normal(0.0, spread);
      const double re = normal(rng);
      delta = {re, normal(rng)};
    }
    OscParams shifted = params;
    shifted.omega0 = params.omega0 - 2.0 * std::norm(delta);
    OscState s;
    s.alpha = alpha0 + delta;
    const Trajectory tr = evolve_classical(s, shifted, T);
    for (std::size_t t = 0; t < steps; ++t) phases[k][t] = tr.records[t].phase;
  });

  IvrAmplitude out;
  out.values.resize(steps);
  out.stderrs.resize(steps);
  const double nd = static_cast<double>(n);
  for (std::size_t t = 0; t < steps; ++t) {
    CompensatedSum<cplx> s;
    for (std::size_t k = 0; k < n; ++k) s.add(std::polar(1.0, 0.5 * sigma * phases[k][t]));
    const cplx f = s.value() / nd;
    out.values[t] = f;
    out.stderrs[t] = std::sqrt(std::max(0.0, 1.0 - std::norm(f)) / nd);
  }
  return out;
}

PhaseDerivatives phase_derivatives(cplx alpha0, const OscParams& params, double t) {
  auto phase_at = [&](cplx a, double omega) {
    OscParams p = params;
    p.omega0 = omega;
    OscState s;
    s.alpha = a;
    return evolve_classical(s, p, t).final_state.phase;
  };
  const double w0 = params.omega0;
  const double phi = phase_at(alpha0, w0);
  const double ha = kRelStep * std::max(1.0, std::abs(alpha0));
  const double hw = kRelStep * std::max(1.0, std::abs(w0));

  // Central difference with step h along one coordinate, at h and h/2.
  auto derivative = [&](auto shifted_phase, double h, const char* what) {
    const double d1 = (shifted_phase(h) - shifted_phase(-h)) / (2 * h);
    const double d2 = (shifted_phase(0.5 * h) - shifted_phase(-0.5 * h)) / h;
    const double noise = 1e3 * 2.2e-16 * (1.0 + std::abs(phi)) / h;
    if (std::abs(d1 - d2) > kRichardsonTol * std::max(std::abs(d2), noise)) {
      throw UnreliableDerivative(std::string("finite-difference derivative of the phase along ") + what +
                                 " did not converge");
    }
    return (4.0 * d2 - d1) / 3.0;
  };

  PhaseDerivatives d;
  d.phase = phi;
  d.d_omega = derivative([&](double h) { return phase_at(alpha0, w0 + h); }, hw, "omega0");
  const double dx = derivative([&](double h) { return phase_at(alpha0 + cplx(h, 0.0), w0); }, ha, "Re alpha");
  const double dy = derivative([&](double h) { return phase_at(alpha0 + cplx(0.0, h), w0); }, ha, "Im alpha");
  d.d_alpha = 0.5 * std::hypot(dx, dy);
  return d;
}

double early_time_fidelity(cplx alpha0, double epsilon, double hbar, const OscParams& params, double t) {
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  if (epsilon == 0.0) return 1.0;
  const PhaseDerivatives d = phase_derivatives(alpha0, params, t);
  const double s = 1.0 + 0.25 * epsilon * epsilon * d.d_omega * d.d_omega;
  return std::exp(-(epsilon * epsilon / (4.0 * hbar)) * d.d_alpha * d.d_alpha / s) / s;
}

DecaySeries classical_mixed_fidelity(const CoherentMixture& mixture, double sigma, const OscParams& params, int T) {
  return phase_average_squared(ensemble_history(mixture, params, T), 0.5 * sigma);
}

}  // namespace echolab

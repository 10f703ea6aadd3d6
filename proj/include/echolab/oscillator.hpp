#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "echolab/decay.hpp"
#include "echolab/glauber.hpp"
#include "echolab/hilbert.hpp"

namespace echolab {

/// Delta kicks g(t) = g0 sum_m delta(t - m), m = 1, 2, ...
struct KickedDrive {
  double g0 = 0.5;
};

/// g(t) = sum_j g_j cos(2 pi j t + phi_j), j = 1..J.
struct HarmonicDrive {
  std::vector<double> amplitudes;
  std::vector<double> phases;
};

/// Gaussian pulses of area g0 and the given width centred at t = 1, 2, ...;
/// the smooth counterpart of KickedDrive.
struct PulseTrainDrive {
  double g0 = 0.5;
  double width = 0.01;
};

using Drive = std::variant<KickedDrive, HarmonicDrive, PulseTrainDrive>;

/// H = omega0 |alpha|^2 + |alpha|^4 - g(t) (alpha + alpha*), drive period 1.
struct OscParams {
  double omega0 = 1.0;
  Drive drive = KickedDrive{};
  double dt = 1e-3;  // RK4 step for smooth drives

  bool kicked() const { return std::holds_alternative<KickedDrive>(drive); }
  double drive_value(double t) const;
};

struct OscState {
  cplx alpha{0.0, 0.0};
  double phase = 0.0;            // int_0^t (omega0 + 2 I) dt
  double action_integral = 0.0;  // int_0^t I dt

  double action() const { return std::norm(alpha); }
  double angle() const { return -std::arg(alpha); }
};

/// States at t = 0, 1, ..., floor(T), plus the state at T itself.
struct Trajectory {
  std::vector<OscState> records;
  OscState final_state;
};

/// dalpha/dt = -i[(omega0 + 2|alpha|^2) alpha - g(t)]. The kicked drive uses
/// the exact map (free rotation over each period, kick at its end, record
/// just after the kick); smooth drives use fixed-step RK4 with params.dt.
/// Throws InvalidArgument for dt <= 0 (smooth drives) or T < 0.
Trajectory evolve_classical(const OscState& start, const OscParams& params, double T);

/// Initial conditions alpha_c + sqrt(u) e^{i theta}, u drawn from the radial
/// weight and theta uniform. Each sample has its own random stream derived
/// from (seed, index).
class CoherentMixture {
 public:
  CoherentMixture(cplx center, RadialWeight weight, std::size_t samples, std::uint64_t seed);

  cplx center() const { return center_; }
  const RadialWeight& weight() const { return weight_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<cplx>& points() const { return points_; }

 private:
  cplx center_;
  RadialWeight weight_;
  std::uint64_t seed_;
  std::vector<cplx> points_;
};

/// Deterministic per-index random stream.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);

/// Histories of the whole ensemble at integer times 0..T.
struct EnsembleHistory {
  std::vector<std::vector<double>> phase;            // [sample][t]
  std::vector<std::vector<double>> action;           // [sample][t]
  std::vector<std::vector<double>> action_integral;  // [sample][t]

  std::size_t samples() const { return phase.size(); }
  int steps() const { return phase.empty() ? -1 : static_cast<int>(phase.front().size()) - 1; }
};

EnsembleHistory ensemble_history(const CoherentMixture& mixture, const OscParams& params, int T);

/// |<exp(i factor phase(t))>|^2 over the ensemble, with delta-method stderr.
DecaySeries phase_average_squared(const EnsembleHistory& history, double factor);

/// C(t) = |<exp(i phi(t))>|^2; a fit is attached when a window is given.
DecaySeries phase_autocorrelation(const CoherentMixture& mixture, const OscParams& params, int T,
                                  std::optional<FitWindow> window = std::nullopt);

struct ActionDiffusion {
  double rate = 0.0;  // D
  double rate_stderr = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double growth = 0.0;  // <I(T)> - <I(0)>
};

/// Linear fit of the ensemble-mean action against t = 0..T.
ActionDiffusion mean_action_diffusion(const CoherentMixture& mixture, const OscParams& params, int T);
ActionDiffusion mean_action_diffusion(const EnsembleHistory& history);

/// Var over samples of int_0^t I dt, per recorded time. Input is [sample][t].
std::vector<double> chi2_from_histories(const std::vector<std::vector<double>>& action_integrals);
/// chi2 at integer time t.
double chi2_cumulant(const CoherentMixture& mixture, const OscParams& params, int t);

/// exp(-2 sigma^2 K t) at t = 0..T.
DecaySeries fgr_fidelity(double sigma, double k_action, int T);

struct QuantumCellSampler {
  double hbar = 0.0;  // 0 disables the fluctuations
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
};

struct IvrAmplitude {
  std::vector<cplx> values;     // f(t), t = 0..T
  std::vector<double> stderrs;  // standard error of f(t)
};

/// f(t) = <exp(i sigma/2 phi~(t))> over delta with density (2/pi hbar) e^{-2|delta|^2/hbar};
/// phi~ follows alpha0 + delta with linear frequency omega0 - 2|delta|^2.
/// Throws InvalidArgument for fewer than 1000 samples.
IvrAmplitude ivr_fidelity_amplitude(cplx alpha0, double sigma, const QuantumCellSampler& sampler,
                                    const OscParams& params, int T);

struct PhaseDerivatives {
  double phase = 0.0;
  double d_omega = 0.0;  // d phi / d omega0
  double d_alpha = 0.0;  // |d phi / d alpha| (Wirtinger), half the real gradient norm
};

/// Central differences at relative step 1e-6, checked against a half step.
/// Throws UnreliableDerivative if the two disagree by more than 10%.
PhaseDerivatives phase_derivatives(cplx alpha0, const OscParams& params, double t);

/// F(t) = exp(-(eps^2/4hbar) |dphi/dalpha|^2 / s) / s, s = 1 + (eps/2)^2 (dphi/domega0)^2.
double early_time_fidelity(cplx alpha0, double epsilon, double hbar, const OscParams& params, double t);

/// |<exp(i sigma/2 phi(t))>|^2 over the mixture.
DecaySeries classical_mixed_fidelity(const CoherentMixture& mixture, double sigma, const OscParams& params, int T);

}  // namespace echolab

#pragma once

#include <cstddef>
#include <vector>

#include "echolab/decay.hpp"
#include "echolab/fft.hpp"
#include "echolab/hilbert.hpp"

namespace echolab {

/// Placement of the kick inside one Floquet period. With drift_kick the
/// recorded state sits just after the kick; with kick_drift just before it.
enum class KickOrder { drift_kick, kick_drift };

/// Kicked rotor H = (1 + eps) p^2/2 + K cos(theta) sum_m delta(t - m).
struct RotorParams {
  double kick = 10.0;
  double epsilon = 0.0;
  /// Split the perturbation as +-eps/2 between the two branches.
  bool symmetric = false;
  KickOrder order = KickOrder::drift_kick;

  /// Quantal perturbation strength eps/hbar.
  double sigma(const TorusGrid& grid) const { return epsilon / grid.hbar(); }
  static RotorParams from_sigma(const TorusGrid& grid, double kick, double sigma) {
    RotorParams p;
    p.kick = kick;
    p.epsilon = sigma * grid.hbar();
    return p;
  }
};

enum class Branch { unperturbed, perturbed };

/// Split-operator Floquet map: diagonal kick phase exp(-i K cos(theta)/hbar)
/// in position space, diagonal kinetic phase exp(-i (1+eps) p^2 / (2 hbar)) in
/// momentum space, joined by FFTs.
class FloquetPropagator {
 public:
  FloquetPropagator(const TorusGrid& grid, const RotorParams& params);

  const TorusGrid& grid() const { return grid_; }
  const RotorParams& params() const { return params_; }

  /// One period in place on raw amplitudes.
  void step(std::span<cplx> amplitudes, Branch branch) const;
  void step(QuantumState& state, Branch branch) const { step(state.amplitudes(), branch); }

 private:
  TorusGrid grid_;
  RotorParams params_;
  Fft fft_;
  std::vector<cplx> kick_phase_;
  std::vector<cplx> drift_unperturbed_;  // includes the 1/N of the inverse DFT
  std::vector<cplx> drift_perturbed_;
};

QuantumState floquet_step(const QuantumState& state, const RotorParams& params, bool perturbed);

/// f(t) = <psi| U_0^dag(t) U_eps(t) |psi>, t = 0..T, by co-propagating the two
/// branches and overlapping after every period.
std::vector<cplx> fidelity_amplitude(const QuantumState& packet, int T, const RotorParams& params);

/// Per-member amplitudes and the three mixed-state fidelities, each indexed by
/// t = 0..T.
struct EchoRecord {
  std::vector<std::vector<cplx>> amplitudes;  // [member][t]
  std::vector<double> weights;
  std::vector<double> coherent;    // |sum_k p_k f_k|^2
  std::vector<double> incoherent;  // sum_k p_k |f_k|^2
  std::vector<double> peres;       // Tr[rho_0(t) rho_eps(t)] / Tr[rho^2]; empty if skipped

  int steps() const { return static_cast<int>(coherent.size()) - 1; }
  DecaySeries coherent_series() const;
  DecaySeries incoherent_series() const;
  DecaySeries peres_series() const;
  /// sum_k p_k |f_k - sum_k' p_k' f_k'|^2 at each t.
  std::vector<double> fluctuation() const;
};

struct EchoOptions {
  bool peres = true;
};

EchoRecord mixture_echo(const PacketMixture& mixture, int T, const RotorParams& params,
                        EchoOptions options = {});

}  // namespace echolab

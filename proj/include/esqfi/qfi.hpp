#pragma once

#include <variant>
#include <vector>

#include <json.hpp>

#include "esqfi/optimize.hpp"
#include "esqfi/resonator.hpp"
#include "esqfi/states.hpp"

namespace esqfi {

enum class QfiMethod { generator, fidelity_limit };

std::string to_string(QfiMethod m);

/// A quantum Fisher information value together with the probe, the
/// frequencies it lives at and the epsilon it was evaluated at.  Values are
/// in units of 1/gamma^2 when epsilon is in units of gamma.
struct QfiResult {
    double value = 0.0;
    QfiMethod method = QfiMethod::generator;
    std::variant<ModeState, NoonSpec> probe;
    std::vector<double> omega_points;
    double epsilon_at = 0.0;
};

/// Coherent-state QFI 4 <beta, A^2 beta> = 4 ||A beta||^2.
QfiResult coherent_qfi(const SystemParams& p, const ModeState& beta);

/// Independent check of coherent_qfi through the Bures-distance limit: the
/// exact output-state fidelity
///   F = exp(-2 ||beta||^2 + 2 Re<beta, K_eps^dag K_{eps+d} beta>)
/// is evaluated at the given steps and the d -> 0 limit of 4 d_B^2 / d^2 is
/// Richardson-extrapolated.  Steps default to {1e-3, 5e-4, 2.5e-4} * gamma.
QfiResult coherent_qfi_fidelity_oracle(const SystemParams& p, const ModeState& beta,
                                       std::vector<double> steps = {});

/// NOON-state QFI 4 Var(A_tot) under (psi1^xN + psi2^xN)/sqrt(2), evaluated
/// from single-particle matrix elements <psi_n, A psi_m>, <psi_n, A^2 psi_m>
/// and overlap powers; exact and O(1) in N.
QfiResult noon_qfi(const SystemParams& p, const NoonSpec& spec);

/// Exact N-photon output overlap
///   <Psi_eps | Psi_{eps+d}> = (1/2) sum_{n,m} <psi_n, K^dag K' psi_m>^N.
/// Equals 1 at d = 0 for a valid NoonSpec.
cd noon_overlap_oracle(const SystemParams& p, const NoonSpec& spec, double delta_eps);

/// Bures-limit oracle for noon_qfi built on noon_overlap_oracle.
QfiResult noon_qfi_overlap_oracle(const SystemParams& p, const NoonSpec& spec,
                                  std::vector<double> steps = {});

/// Frequency-optimized QFI from an already computed spectrum optimum:
/// 4 lambda_abs^2 nbar for coherent probes, N^2 (lambda_max - lambda_min)^2
/// for NOON probes.
double oqfi_from_optimum(const FrequencyOptimum& fo, ProbeKind kind, double photons);

/// Optimizes the probe frequency and evaluates the matching QFI, returning
/// the optimal probe alongside the value.
QfiResult oqfi_value(const SystemParams& p, ProbeKind kind, double photons);

void to_json(nlohmann::json& j, const QfiResult& r);
void from_json(const nlohmann::json& j, QfiResult& r);

}  // namespace esqfi

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "esqfi/resonator.hpp"
#include "esqfi/states.hpp"

namespace esqfi {

/// Frequency-optimized spectrum summary of the generator A:
///   lambda_max = max over omega of lambda_plus(omega) at omega_max,
///   lambda_min = min over omega of lambda_minus(omega) at omega_min,
///   lambda_abs = max(|lambda_min|, |lambda_max|).
/// When the spectrum is antisymmetric (lambda_max = -lambda_min at mirrored
/// frequencies) the report is canonicalized so omega_max is the positive
/// frequency of the pair.  converged is false when an extremum sits on the
/// search window boundary.
struct FrequencyOptimum {
    double lambda_max = 0.0;
    double omega_max = 0.0;
    double lambda_min = 0.0;
    double omega_min = 0.0;
    double lambda_abs = 0.0;
    bool converged = false;
};

struct Window {
    double lo;
    double hi;
};

/// Coarse grid scan of lambda_+- over the window followed by golden-section
/// refinement of each bracketed extremum to |d omega| < 1e-10 * gamma.
/// Grid cells on top of a resolvent pole are skipped.
FrequencyOptimum optimize_spectrum(const SystemParams& p, Window window, int grid_n = 2048);

/// Default window [-10 gamma, 10 gamma]; the spectrum decays like 1/omega^2,
/// so all extrema are well inside.
FrequencyOptimum optimize_spectrum(const SystemParams& p);

/// One sweep axis: `count` samples spanning [min, max] inclusive.
struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    double value(int i) const {
        if (count < 2) return min;
        return min + static_cast<double>(i) * (max - min) / static_cast<double>(count - 1);
    }
};

/// Dense row-major grid of values over two axes (axes[0] indexes rows) with
/// per-cell near-singular flags and the generating configuration in meta.
struct SweepGrid {
    std::vector<AxisSpec> axes;
    std::vector<double> values;        // row-major, axes[0].count * axes[1].count
    std::vector<std::uint8_t> flags;   // 1 where near a resolvent pole
    nlohmann::json meta;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * axes[1].count + j]; }
    bool flagged(int i, int j) const { return flags[static_cast<std::size_t>(i) * axes[1].count + j] != 0; }
};

/// Frequency-optimized QFI over a (rho, phi) grid at fixed epsilon.
/// `photons` is the mean photon number for coherent probes and the photon
/// count N for NOON probes.
SweepGrid sweep_oqfi(ProbeKind kind, const AxisSpec& rho_axis, const AxisSpec& phi_axis,
                     double epsilon, double photons, double gamma = 1.0);

/// A_ll over an (omega, epsilon) grid at fixed phi (and rho, default 1 where
/// A_ll carries the whole spectrum).  Cells at a pole hold NaN and are
/// flagged; cells within the pole guard radius are flagged but keep values.
SweepGrid landscape_all(double phi, const AxisSpec& omega_axis, const AxisSpec& epsilon_axis,
                        double rho = 1.0, double gamma = 1.0);

struct ScanPoint {
    double epsilon = 0.0;
    double oqfi = 0.0;
    bool near_singular = false;
};

/// Frequency-optimized QFI versus epsilon at fixed (gamma, rho, phi).
std::vector<ScanPoint> offsurface_scan(const SystemParams& base, const AxisSpec& epsilon_axis,
                                       ProbeKind kind, double photons);

void to_json(nlohmann::json& j, const AxisSpec& a);
void from_json(const nlohmann::json& j, AxisSpec& a);
void to_json(nlohmann::json& j, const SweepGrid& g);
void from_json(const nlohmann::json& j, SweepGrid& g);

/// CSV rendering: axis header comments, then one row per axes[0] sample with
/// 17-significant-digit values, then flagged cells as comments.
std::string grid_to_csv(const SweepGrid& g);

}  // namespace esqfi

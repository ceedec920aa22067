#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "esqfi/resonator.hpp"
#include "esqfi/smallcomplex.hpp"

namespace esqfi {

/// Normalization convention of a ModeState: coherent amplitudes carry the
/// mean photon number in their squared norm, single-photon mode functions
/// are unit normalized.
enum class StateKind { coherent_amplitude, single_photon_mode };

/// Probe families exposed by the QFI and sweep layers.
enum class ProbeKind { coherent, noon };

std::string to_string(StateKind k);
std::string to_string(ProbeKind k);
StateKind state_kind_from_string(const std::string& s);
ProbeKind probe_kind_from_string(const std::string& s);

/// One monochromatic component: port amplitudes at a single frequency.
/// Components at distinct frequencies are orthogonal by convention.
struct ModeComponent {
    double omega = 0.0;
    CVec2 port;
};

/// A finite superposition of monochromatic port-vector components.
/// Components closer than the merge tolerance in frequency are combined at
/// construction and the list is kept sorted, so equal states have equal
/// component lists.
class ModeState {
public:
    ModeState() = default;
    ModeState(StateKind kind, std::vector<ModeComponent> components);

    StateKind kind() const { return kind_; }
    const std::vector<ModeComponent>& components() const { return components_; }
    bool empty() const { return components_.empty(); }

    double norm2() const;
    double norm() const { return std::sqrt(norm2()); }

    /// Checks the normalization invariant of the kind; throws InvalidParams.
    void validate() const;

    ModeState& operator*=(cd s);

private:
    StateKind kind_ = StateKind::coherent_amplitude;
    std::vector<ModeComponent> components_;
};

inline ModeState operator*(cd s, ModeState st) { return st *= s; }
inline ModeState operator*(double s, ModeState st) { return st *= cd(s, 0.0); }

/// Sesquilinear inner product; frequencies present in only one state
/// contribute nothing.
cd inner(const ModeState& a, const ModeState& b);

/// Applies a frequency-indexed matrix to every component:
/// port(omega) -> m(omega) * port(omega).  Errors from the matrix source
/// (e.g. SingularDenominator) propagate.
ModeState apply_matrix_field(const std::function<CMat2(double)>& m_of_omega,
                             const ModeState& s);

/// N-photon NOON probe over two orthonormal single-photon modes.
struct NoonSpec {
    ModeState psi1;
    ModeState psi2;
    int n_photons = 1;

    /// Checks unit norms, orthogonality and n_photons >= 1.
    void validate() const;
};

/// Coherent probe maximizing the QFI at the given parameters: a single
/// frequency component at the |lambda|-maximizing frequency, scaled to the
/// requested mean photon number along the matching eigenvector of A.
ModeState optimal_coherent_probe(const SystemParams& p, double photon_number);

/// NOON probe achieving N^2 (lambda_max - lambda_min)^2: the two modes carry
/// the extremal eigenvalues of A at their optimizing frequencies (orthogonal
/// either by frequency or, when degenerate, by port vector).
NoonSpec optimal_noon_probe(const SystemParams& p, int n_photons);

void to_json(nlohmann::json& j, const ModeState& s);
void from_json(const nlohmann::json& j, ModeState& s);
void to_json(nlohmann::json& j, const NoonSpec& s);
void from_json(const nlohmann::json& j, NoonSpec& s);

}  // namespace esqfi

// esqfi: model inspection, QFI evaluation, frequency optimization, parameter
// sweeps and Cramer-Rao Monte Carlo for the retro-reflected two-mode ring
// resonator.  Frequencies and epsilon are accepted in units of gamma; grids
// and reports are written as CSV / JSON / JSON-lines artifacts.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "esqfi/estimation.hpp"
#include "esqfi/gwsm.hpp"
#include "esqfi/io.hpp"
#include "esqfi/optimize.hpp"
#include "esqfi/qfi.hpp"
#include "esqfi/resonator.hpp"
#include "esqfi/states.hpp"

namespace {

using nlohmann::json;
using namespace esqfi;

struct ParamOpts {
    double gamma = 1.0;
    double rho = 0.0;
    double phi = 0.0;
    double phi_over_pi = 0.0;
    bool phi_over_pi_set = false;
    double epsilon = 0.0;
};

void add_param_options(CLI::App* cmd, ParamOpts& o) {
    cmd->add_option("--gamma", o.gamma, "cavity coupling rate; sets the unit system")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--rho", o.rho, "mirror reflectivity in [0,1]")->capture_default_str();
    auto* phi = cmd->add_option("--phi", o.phi, "reflection phase in radians");
    auto* phi_pi = cmd->add_option_function<double>(
        "--phi-over-pi",
        [&o](double v) {
            o.phi_over_pi = v;
            o.phi_over_pi_set = true;
        },
        "reflection phase as a multiple of pi");
    phi->excludes(phi_pi);
    cmd->add_option("--epsilon", o.epsilon, "cross coupling in units of gamma")
        ->capture_default_str();
}

SystemParams to_params(const ParamOpts& o) {
    const double phi = o.phi_over_pi_set ? o.phi_over_pi * std::numbers::pi : o.phi;
    return SystemParams::make(o.gamma, o.rho, phi, o.epsilon * o.gamma);
}

json params_to_json(const SystemParams& p) {
    return {{"gamma", p.gamma}, {"rho", p.rho},         {"tau", p.tau},
            {"phi", p.phi},     {"epsilon", p.epsilon}};
}

json cd_to_json(cd z) { return {z.real(), z.imag()}; }

json mat_to_json(const CMat2& m) {
    return {{cd_to_json(m.ll), cd_to_json(m.lr)}, {cd_to_json(m.rl), cd_to_json(m.rr)}};
}

struct AxisOpt {
    std::string text;
    AxisSpec parse(const std::string& name) const {
        AxisSpec a;
        a.name = name;
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw InvalidParams("axis '" + text + "' must be min:max:count");
        }
        try {
            a.min = std::stod(text.substr(0, c1));
            a.max = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
            a.count = std::stoi(text.substr(c2 + 1));
        } catch (const std::exception&) {
            throw InvalidParams("axis '" + text + "' must be min:max:count");
        }
        if (a.count < 1 || !(a.max >= a.min)) {
            throw InvalidParams("axis '" + text + "': bad range or count");
        }
        return a;
    }
};

void emit(const std::string& path, const std::string& contents) {
    if (path.empty()) {
        std::cout << contents;
        if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
    } else {
        atomic_write_file(path, contents);
    }
}

void write_grid(const SweepGrid& grid, const std::string& path, const std::string& format) {
    if (format == "csv") {
        emit(path, grid_to_csv(grid));
    } else {
        emit(path, json(grid).dump(2) + "\n");
    }
}

int cmd_model(const ParamOpts& po, double omega_in, const std::string& out,
              bool closed_form_only) {
    const SystemParams p = to_params(po);
    const double omega = omega_in * p.gamma;
    json j;
    j["params"] = params_to_json(p);
    const ModelMatrices m = build_model(p);
    j["s"] = mat_to_json(m.s);
    j["b"] = mat_to_json(m.b);
    j["h_tilde"] = mat_to_json(m.h_tilde);
    j["h_eff"] = mat_to_json(m.h_eff);
    const auto [op, om] = omega_eigenvalues(p);
    j["omega_plus"] = cd_to_json(op);
    j["omega_minus"] = cd_to_json(om);
    j["omega"] = omega;

    try {
        const CMat2 k = closed_form_only ? transfer_k_closed_form(p, omega) : transfer_k(p, omega);
        const CMat2 kc = transfer_k_closed_form(p, omega);
        j["k"] = mat_to_json(k);
        const CMat2 bbd = m.b * adjoint(m.b);
        const CMat2 im_h = cd(0.0, -0.5) * (m.h_tilde - adjoint(m.h_tilde));
        j["residuals"] = {
            {"k_unitarity", (adjoint(k) * k - CMat2::identity()).fnorm()},
            {"k_closed_form_gap", (k - kc).fnorm()},
            {"im_h_plus_half_bbdag", (im_h + 0.5 * bbd).fnorm()},
            {"h_tilde_identity", (m.h_tilde - (m.h_eff - cd(0.0, 0.5) * bbd)).fnorm()},
        };
    } catch (const SingularMatrix& e) {
        j["singular_point"] = true;
        j["abs_det"] = e.abs_det;
        emit(out, j.dump(2) + "\n");
        return 3;
    } catch (const SingularDenominator& e) {
        j["singular_point"] = true;
        j["abs_det"] = e.abs_den;
        emit(out, j.dump(2) + "\n");
        return 3;
    }
    j["singular_point"] = false;
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_qfi(const ParamOpts& po, const std::string& state, double nbar, int n_noon,
            const std::string& probe_file, bool oracle, const std::string& out) {
    const SystemParams p = to_params(po);
    const ProbeKind kind = probe_kind_from_string(state);
    json j;
    QfiResult gen;
    std::optional<QfiResult> fid;

    if (kind == ProbeKind::coherent) {
        ModeState beta;
        if (!probe_file.empty()) {
            std::ifstream in(probe_file);
            if (!in) throw InvalidParams("cannot read probe file " + probe_file);
            json pj = json::parse(in);
            beta = pj.get<ModeState>();
        } else {
            beta = optimal_coherent_probe(p, nbar);
        }
        gen = coherent_qfi(p, beta);
        if (oracle) fid = coherent_qfi_fidelity_oracle(p, beta);
    } else {
        NoonSpec spec;
        if (!probe_file.empty()) {
            std::ifstream in(probe_file);
            if (!in) throw InvalidParams("cannot read probe file " + probe_file);
            json pj = json::parse(in);
            spec = pj.get<NoonSpec>();
        } else {
            spec = optimal_noon_probe(p, n_noon);
        }
        gen = noon_qfi(p, spec);
        if (oracle) fid = noon_qfi_overlap_oracle(p, spec);
    }

    j["params"] = params_to_json(p);
    j["result"] = gen;
    std::cout << "qfi = " << fmt17(gen.value) << " (generator)\n";
    if (fid) {
        j["oracle"] = *fid;
        const double gap = std::abs(fid->value - gen.value) / std::max(1.0, std::abs(gen.value));
        j["oracle_relative_gap"] = gap;
        std::cout << "qfi = " << fmt17(fid->value) << " (fidelity limit), relative gap = "
                  << fmt17(gap) << "\n";
    }
    if (!out.empty()) emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_oqfi(const ParamOpts& po, const std::string& state, double nbar, int n_noon,
             const std::string& out) {
    const SystemParams p = to_params(po);
    const ProbeKind kind = probe_kind_from_string(state);
    const double photons = kind == ProbeKind::coherent ? nbar : n_noon;
    const QfiResult r = oqfi_value(p, kind, photons);
    std::cout << "o-QFI = " << fmt17(r.value) << "\n";
    if (!out.empty()) {
        json j;
        j["params"] = params_to_json(p);
        j["result"] = r;
        emit(out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_sweep(const ParamOpts& po, const std::string& state, double nbar, int n_noon,
              const AxisOpt& rho_axis, const AxisOpt& phi_axis, const std::string& out,
              const std::string& format) {
    const ProbeKind kind = probe_kind_from_string(state);
    const double photons = kind == ProbeKind::coherent ? nbar : n_noon;
    const SweepGrid grid =
        sweep_oqfi(kind, rho_axis.parse("rho"), phi_axis.parse("phi"),
                   po.epsilon * po.gamma, photons, po.gamma);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : grid.values) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    write_grid(grid, out, format);
    std::cout << "sweep " << grid.axes[0].count << "x" << grid.axes[1].count
              << ": min = " << fmt17(lo) << ", max = " << fmt17(hi) << "\n";
    return 0;
}

int cmd_landscape(const ParamOpts& po, const AxisOpt& omega_axis, const AxisOpt& eps_axis,
                  const std::string& out, const std::string& format) {
    const double phi = po.phi_over_pi_set ? po.phi_over_pi * std::numbers::pi : po.phi;
    AxisSpec wa = omega_axis.parse("omega");
    AxisSpec ea = eps_axis.parse("epsilon");
    wa.min *= po.gamma;
    wa.max *= po.gamma;
    ea.min *= po.gamma;
    ea.max *= po.gamma;
    const SweepGrid grid = landscape_all(phi, wa, ea, po.rho, po.gamma);
    std::size_t flagged = 0;
    for (auto f : grid.flags) flagged += f != 0;
    write_grid(grid, out, format);
    std::cout << "landscape " << grid.axes[0].count << "x" << grid.axes[1].count << ": "
              << flagged << " flagged cell(s)\n";
    return 0;
}

int cmd_scan(const ParamOpts& po, const std::string& state, double nbar, int n_noon,
             const AxisOpt& eps_axis, const std::string& out, const std::string& format) {
    const SystemParams base = to_params(po);
    const ProbeKind kind = probe_kind_from_string(state);
    const double photons = kind == ProbeKind::coherent ? nbar : n_noon;
    AxisSpec ea = eps_axis.parse("epsilon");
    ea.min *= po.gamma;
    ea.max *= po.gamma;
    const auto points = offsurface_scan(base, ea, kind, photons);

    if (format == "csv") {
        std::string csv = "epsilon,oqfi,near_singular\n";
        for (const auto& pt : points) {
            csv += fmt17(pt.epsilon) + "," + fmt17(pt.oqfi) + "," +
                   (pt.near_singular ? "1" : "0") + "\n";
        }
        emit(out, csv);
    } else {
        json j = json::array();
        for (const auto& pt : points) {
            j.push_back({{"epsilon", pt.epsilon},
                         {"oqfi", pt.oqfi},
                         {"near_singular", pt.near_singular}});
        }
        emit(out, j.dump(2) + "\n");
    }
    if (!points.empty()) {
        std::cout << "scan: oqfi(" << fmt17(points.front().epsilon)
                  << ") = " << fmt17(points.front().oqfi) << ", oqfi("
                  << fmt17(points.back().epsilon) << ") = " << fmt17(points.back().oqfi) << "\n";
    }
    return 0;
}

int cmd_simulate(const ParamOpts& po, const std::string& scheme, double nbar, int n_noon,
                 double n_lo, std::int64_t m, std::uint64_t seed,
                 std::optional<double> eps_nominal_in, std::optional<double> eps_true_in,
                 const std::string& out) {
    const SystemParams p = to_params(po);
    TrialReport rep;
    if (scheme == "homodyne") {
        const double eps_nom = eps_nominal_in ? *eps_nominal_in * p.gamma : p.epsilon;
        const double eps_true = eps_true_in ? *eps_true_in * p.gamma : eps_nom;
        const SystemParams pn = p.with_epsilon(eps_nom);
        const ModeState probe = optimal_coherent_probe(pn, nbar);
        const ModeState lo = homodyne_optimal_lo(pn, probe, n_lo);
        const HomodyneConfig cfg = make_homodyne_config(pn, probe, lo);
        rep = homodyne_simulate(cfg, eps_true, m, seed);
    } else if (scheme == "noon") {
        const FrequencyOptimum fo = optimize_spectrum(p);
        const NoonSpec spec = optimal_noon_probe(p, n_noon);
        NoonCountingConfig cfg = make_noon_counting_config(p, spec, fo.omega_max);
        double eps_nom;
        if (eps_nominal_in) {
            eps_nom = *eps_nominal_in * p.gamma;
        } else {
            eps_nom = noon_quarter_fringe_epsilon(cfg, p.epsilon - 0.1 * p.gamma,
                                                  p.epsilon + 0.1 * p.gamma);
        }
        cfg.params = cfg.params.with_epsilon(eps_nom);
        cfg.epsilon_nominal = eps_nom;
        const double eps_true = eps_true_in ? *eps_true_in * p.gamma : eps_nom;
        rep = noon_simulate(cfg, eps_true, m, seed);
    } else {
        throw InvalidParams("unknown scheme: " + scheme);
    }

    std::cout << "ratio (mse*m*I) = " << fmt17(rep.ratio)
              << ", classical FI = " << fmt17(rep.classical_fi)
              << ", qfi = " << fmt17(rep.qfi) << "\n";
    const std::string line = json(rep).dump() + "\n";
    if (out.empty()) {
        std::cout << line;
    } else {
        std::ofstream f(out, std::ios::app | std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + out);
        f << line;
    }
    return 0;
}

int cmd_snr(const ParamOpts& po, double nbar, const std::string& out) {
    const SystemParams p = to_params(po);
    const SystemParams p0 = p.with_epsilon(0.0);
    const ModeState probe = optimal_coherent_probe(p0, nbar);
    const double snr = snr_lau_clerk(p0, p.epsilon, probe);
    const double qfi0 = coherent_qfi(p0, probe).value;
    const double ref = p.epsilon * p.epsilon * qfi0;
    json j = {{"params", params_to_json(p)},
              {"snr", snr},
              {"epsilon2_times_qfi", ref},
              {"ratio", ref != 0.0 ? snr / ref : 1.0}};
    std::cout << "S/N = " << fmt17(snr) << ", epsilon^2 * I_beta(0) = " << fmt17(ref) << "\n";
    if (!out.empty()) emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_plot_script(const std::string& out) {
    const std::string script = R"(#!/usr/bin/env python3
"""Render an esqfi CSV grid artifact as a filled contour plot."""
import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "grid.csv"
axes, rows = [], []
with open(path) as fh:
    for row in csv.reader(fh):
        if not row:
            continue
        if row[0].startswith("#"):
            if row[0].strip() == "# axis" and len(row) == 5:
                axes.append((row[1], float(row[2]), float(row[3]), int(row[4])))
            continue
        rows.append([float(x) for x in row])

values = np.array(rows)
if len(axes) == 2:
    y = np.linspace(axes[0][1], axes[0][2], axes[0][3])
    x = np.linspace(axes[1][1], axes[1][2], axes[1][3])
    plt.contourf(x, y, values, levels=41)
    plt.xlabel(axes[1][0])
    plt.ylabel(axes[0][0])
else:
    plt.imshow(values, origin="lower", aspect="auto")
plt.colorbar()
plt.title(path)
plt.tight_layout()
plt.show()
)";
    emit(out, script);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exceptional-surface QFI toolkit"};
    app.require_subcommand(1);

    ParamOpts po;
    double omega_in = 0.0;
    std::string out;
    std::string format = "csv";
    std::string state = "coherent";
    double nbar = 2.0;
    int n_noon = 2;
    std::string probe_file;
    bool oracle = false;
    bool closed_form_only = false;
    AxisOpt rho_axis{"0:1:41"};
    AxisOpt phi_axis{"0:6.283185307179586:41"};
    AxisOpt omega_axis{"-1:1:41"};
    AxisOpt eps_axis{"-0.6:0:25"};
    std::string scheme = "homodyne";
    double n_lo = 1e6;
    std::int64_t m_trials = 100000;
    std::uint64_t seed = 1;
    std::optional<double> eps_nominal;
    std::optional<double> eps_true;

    auto* model = app.add_subcommand("model", "print the model matrices and K(omega)");
    add_param_options(model, po);
    model->add_option("--omega", omega_in, "probe frequency in units of gamma");
    model->add_option("-o,--output", out, "write the JSON report to a file");
    model->add_flag("--closed-form", closed_form_only, "use the closed-form K only");

    auto* qfi = app.add_subcommand("qfi", "QFI of a probe (optimal or from a file)");
    add_param_options(qfi, po);
    qfi->add_option("--state", state, "coherent | noon")->capture_default_str();
    qfi->add_option("--nbar", nbar, "mean photon number of a coherent probe")
        ->capture_default_str();
    qfi->add_option("--n", n_noon, "photon count of a NOON probe")->capture_default_str();
    qfi->add_option("--probe-file", probe_file, "JSON probe (ModeState or NoonSpec)");
    qfi->add_flag("--oracle", oracle, "also evaluate the fidelity-limit oracle");
    qfi->add_option("-o,--output", out, "write the JSON result to a file");

    auto* oq = app.add_subcommand("oqfi", "frequency-optimized QFI");
    add_param_options(oq, po);
    oq->add_option("--state", state, "coherent | noon")->capture_default_str();
    oq->add_option("--nbar", nbar, "mean photon number of a coherent probe")
        ->capture_default_str();
    oq->add_option("--n", n_noon, "photon count of a NOON probe")->capture_default_str();
    oq->add_option("-o,--output", out, "write the JSON result to a file");

    auto* sweep = app.add_subcommand("sweep", "o-QFI grid over (rho, phi)");
    add_param_options(sweep, po);
    sweep->add_option("--state", state, "coherent | noon")->capture_default_str();
    sweep->add_option("--nbar", nbar, "mean photon number of a coherent probe")
        ->capture_default_str();
    sweep->add_option("--n", n_noon, "photon count of a NOON probe")->capture_default_str();
    sweep->add_option("--rho-axis", rho_axis.text, "rho axis min:max:count")
        ->capture_default_str();
    sweep->add_option("--phi-axis", phi_axis.text, "phi axis min:max:count (radians)")
        ->capture_default_str();
    sweep->add_option("-o,--output", out, "artifact path (stdout when omitted)");
    sweep->add_option("--format", format, "csv | json")->capture_default_str();

    auto* land = app.add_subcommand("landscape", "A_ll grid over (omega, epsilon)");
    add_param_options(land, po);
    land->add_option("--omega-axis", omega_axis.text, "omega axis min:max:count (units of gamma)")
        ->capture_default_str();
    land->add_option("--epsilon-axis", eps_axis.text,
                     "epsilon axis min:max:count (units of gamma)")
        ->capture_default_str();
    land->add_option("-o,--output", out, "artifact path (stdout when omitted)");
    land->add_option("--format", format, "csv | json")->capture_default_str();

    auto* scan = app.add_subcommand("scan", "o-QFI versus epsilon at fixed (rho, phi)");
    add_param_options(scan, po);
    scan->add_option("--state", state, "coherent | noon")->capture_default_str();
    scan->add_option("--nbar", nbar, "mean photon number of a coherent probe")
        ->capture_default_str();
    scan->add_option("--n", n_noon, "photon count of a NOON probe")->capture_default_str();
    scan->add_option("--epsilon-axis", eps_axis.text,
                     "epsilon axis min:max:count (units of gamma)")
        ->capture_default_str();
    scan->add_option("-o,--output", out, "artifact path (stdout when omitted)");
    scan->add_option("--format", format, "csv | json")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimator vs the Cramer-Rao bound");
    add_param_options(sim, po);
    sim->add_option("--scheme", scheme, "homodyne | noon")->capture_default_str();
    sim->add_option("--nbar", nbar, "probe photons (homodyne)")->capture_default_str();
    sim->add_option("--n", n_noon, "NOON photon count")->capture_default_str();
    sim->add_option("--nlo", n_lo, "local oscillator photons (homodyne)")
        ->capture_default_str();
    sim->add_option("--m", m_trials, "number of trials")->capture_default_str();
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option_function<double>(
        "--epsilon-nominal", [&](double v) { eps_nominal = v; },
        "estimator operating point (units of gamma; noon default: quarter fringe)");
    sim->add_option_function<double>(
        "--epsilon-true", [&](double v) { eps_true = v; },
        "true epsilon used to draw samples (default: nominal)");
    sim->add_option("-o,--output", out, "append the report to a JSON-lines file");

    auto* snr = app.add_subcommand("snr", "linear-response SNR against epsilon^2 * QFI");
    add_param_options(snr, po);
    snr->add_option("--nbar", nbar, "probe photons")->capture_default_str();
    snr->add_option("-o,--output", out, "write the JSON result to a file");

    auto* plot = app.add_subcommand("plot-script", "emit a generic grid plotting script");
    plot->add_option("-o,--output", out, "script path (stdout when omitted)");

    try {
        app.parse(argc, argv);
        if (model->parsed()) return cmd_model(po, omega_in, out, closed_form_only);
        if (qfi->parsed()) return cmd_qfi(po, state, nbar, n_noon, probe_file, oracle, out);
        if (oq->parsed()) return cmd_oqfi(po, state, nbar, n_noon, out);
        if (sweep->parsed()) return cmd_sweep(po, state, nbar, n_noon, rho_axis, phi_axis, out, format);
        if (land->parsed()) return cmd_landscape(po, omega_axis, eps_axis, out, format);
        if (scan->parsed()) return cmd_scan(po, state, nbar, n_noon, eps_axis, out, format);
        if (sim->parsed())
            return cmd_simulate(po, scheme, nbar, n_noon, n_lo, m_trials, seed, eps_nominal,
                                eps_true, out);
        if (snr->parsed()) return cmd_snr(po, nbar, out);
        if (plot->parsed()) return cmd_plot_script(out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularMatrix& e) {
        std::cout << nlohmann::json({{"singular_point", true}, {"abs_det", e.abs_det}}).dump()
                  << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SingularDenominator& e) {
        std::cout << nlohmann::json({{"singular_point", true}, {"abs_det", e.abs_den}}).dump()
                  << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include "esqfi/optimize.hpp"

#include <cmath>
#include <limits>

#include "esqfi/gwsm.hpp"
#include "esqfi/io.hpp"
#include "esqfi/parallel.hpp"
#include "esqfi/qfi.hpp"

namespace esqfi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lambda_plus_at(const SystemParams& p, double w) {
    const auto [tr, det] = gwsm_trace_det(p, w);
    return 0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
}

double lambda_minus_at(const SystemParams& p, double w) {
    const auto [tr, det] = gwsm_trace_det(p, w);
    return 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
}

struct Extremum {
    double omega = 0.0;
    double value = kNegInf;
};

// Golden-section maximization on [a, b]; keeps the best sample ever seen so
// the result dominates the coarse grid even if the bracket is imperfect.
template <class F>
Extremum golden_max(const F& f, double a, double b, double tol) {
    constexpr double invphi = 0.61803398874989485;
    constexpr double invphi2 = 0.38196601125010515;
    double h = b - a;
    double c = a + invphi2 * h;
    double d = a + invphi * h;
    double fc = f(c), fd = f(d);
    Extremum best = fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
    while (h > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + invphi2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + invphi * h;
            fd = f(d);
        }
        if (fc > best.value) best = {c, fc};
        if (fd > best.value) best = {d, fd};
    }
    return best;
}

}  // namespace

FrequencyOptimum optimize_spectrum(const SystemParams& p) {
    return optimize_spectrum(p, Window{-10.0 * p.gamma, 10.0 * p.gamma});
}

FrequencyOptimum optimize_spectrum(const SystemParams& p, Window win, int grid_n) {
    if (grid_n < 64) throw InvalidParams("optimize_spectrum: grid_n must be >= 64");
    if (!(win.hi > win.lo)) throw InvalidParams("optimize_spectrum: empty window");

    const double tol = 1e-10 * p.gamma;
    const auto f_plus = [&](double w) {
        try {
            return lambda_plus_at(p, w);
        } catch (const SingularDenominator&) {
            return kNegInf;
        }
    };
    const auto f_minus_neg = [&](double w) {
        try {
            return -lambda_minus_at(p, w);
        } catch (const SingularDenominator&) {
            return kNegInf;
        }
    };

    std::vector<double> w(grid_n);
    int imax = -1, imin = -1;
    double vmax = kNegInf, vmin_neg = kNegInf;
    for (int i = 0; i < grid_n; ++i) {
        w[i] = win.lo + static_cast<double>(i) * (win.hi - win.lo) / (grid_n - 1);
        const double a = f_plus(w[i]);
        if (a > vmax) {
            vmax = a;
            imax = i;
        }
        const double b = f_minus_neg(w[i]);
        if (b > vmin_neg) {
            vmin_neg = b;
            imin = i;
        }
    }
    if (imax < 0 || imin < 0) {
        throw SingularDenominator("optimize_spectrum: window contains no regular point", 0.0);
    }

    const auto refine = [&](int idx, const auto& f, double coarse) {
        if (idx == 0 || idx == grid_n - 1) {
            return std::pair<Extremum, bool>({w[idx], coarse}, false);
        }
        Extremum ex = golden_max(f, w[idx - 1], w[idx + 1], tol);
        if (ex.value < coarse) ex = {w[idx], coarse};
        return std::pair<Extremum, bool>(ex, true);
    };
    const auto [ex_max, ok_max] = refine(imax, f_plus, vmax);
    const auto [ex_min, ok_min] = refine(imin, f_minus_neg, vmin_neg);

    FrequencyOptimum fo;
    fo.lambda_max = ex_max.value;
    fo.omega_max = ex_max.omega;
    fo.lambda_min = -ex_min.value;
    fo.omega_min = ex_min.omega;
    fo.converged = ok_max && ok_min;

    // Antisymmetric spectra have the optimum pair at mirrored frequencies;
    // report the positive frequency as omega_max.
    const double lscale = std::max({std::abs(fo.lambda_max), std::abs(fo.lambda_min), 1e-300});
    const double wscale = std::max({p.gamma, std::abs(fo.omega_max), std::abs(fo.omega_min)});
    if (std::abs(fo.lambda_max + fo.lambda_min) <= 1e-8 * lscale &&
        std::abs(fo.omega_max + fo.omega_min) <= 1e-8 * wscale && fo.omega_max < fo.omega_min) {
        std::swap(fo.omega_max, fo.omega_min);
    }
    fo.lambda_abs = std::max(std::abs(fo.lambda_max), std::abs(fo.lambda_min));
    return fo;
}

SweepGrid sweep_oqfi(ProbeKind kind, const AxisSpec& rho_axis, const AxisSpec& phi_axis,
                     double epsilon, double photons, double gamma) {
    if (rho_axis.count < 1 || phi_axis.count < 1) {
        throw InvalidParams("sweep_oqfi: axis counts must be >= 1");
    }
    SweepGrid g;
    g.axes = {rho_axis, phi_axis};
    g.values.assign(static_cast<std::size_t>(rho_axis.count) * phi_axis.count, 0.0);
    g.flags.assign(g.values.size(), 0);
    g.meta = {{"grid", "oqfi_sweep"},
              {"state", to_string(kind)},
              {"photons", photons},
              {"epsilon", epsilon},
              {"gamma", gamma}};

    parallel_for(static_cast<std::size_t>(rho_axis.count), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            for (int j = 0; j < phi_axis.count; ++j) {
                const std::size_t cell = i * phi_axis.count + j;
                const SystemParams p = SystemParams::make(
                    gamma, rho_axis.value(static_cast<int>(i)), phi_axis.value(j), epsilon);
                try {
                    const FrequencyOptimum fo = optimize_spectrum(p);
                    g.values[cell] = oqfi_from_optimum(fo, kind, photons);
                    g.flags[cell] = near_pole(p, fo.omega_max) || near_pole(p, fo.omega_min) ||
                                    !fo.converged;
                } catch (const SingularDenominator&) {
                    g.values[cell] = std::numeric_limits<double>::quiet_NaN();
                    g.flags[cell] = 1;
                }
            }
        }
    });
    return g;
}

SweepGrid landscape_all(double phi, const AxisSpec& omega_axis, const AxisSpec& epsilon_axis,
                        double rho, double gamma) {
    if (omega_axis.count < 1 || epsilon_axis.count < 1) {
        throw InvalidParams("landscape_all: axis counts must be >= 1");
    }
    SweepGrid g;
    g.axes = {omega_axis, epsilon_axis};
    g.values.assign(static_cast<std::size_t>(omega_axis.count) * epsilon_axis.count, 0.0);
    g.flags.assign(g.values.size(), 0);
    g.meta = {{"grid", "landscape_all"}, {"phi", phi}, {"rho", rho}, {"gamma", gamma}};

    parallel_for(static_cast<std::size_t>(omega_axis.count), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            const double omega = omega_axis.value(static_cast<int>(i));
            for (int j = 0; j < epsilon_axis.count; ++j) {
                const std::size_t cell = i * epsilon_axis.count + j;
                const SystemParams p =
                    SystemParams::make(gamma, rho, phi, epsilon_axis.value(j));
                try {
                    g.values[cell] = gwsm_a(p, omega).ll.real();
                    g.flags[cell] = near_pole(p, omega);
                } catch (const SingularDenominator&) {
                    g.values[cell] = std::numeric_limits<double>::quiet_NaN();
                    g.flags[cell] = 1;
                }
            }
        }
    });
    return g;
}

std::vector<ScanPoint> offsurface_scan(const SystemParams& base, const AxisSpec& epsilon_axis,
                                       ProbeKind kind, double photons) {
    std::vector<ScanPoint> out(static_cast<std::size_t>(std::max(epsilon_axis.count, 0)));
    parallel_for(out.size(), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            const double eps = epsilon_axis.value(static_cast<int>(i));
            const SystemParams p = base.with_epsilon(eps);
            ScanPoint pt;
            pt.epsilon = eps;
            try {
                const FrequencyOptimum fo = optimize_spectrum(p);
                pt.oqfi = oqfi_from_optimum(fo, kind, photons);
                pt.near_singular =
                    near_pole(p, fo.omega_max) || near_pole(p, fo.omega_min) || !fo.converged;
            } catch (const SingularDenominator&) {
                pt.oqfi = std::numeric_limits<double>::quiet_NaN();
                pt.near_singular = true;
            }
            out[i] = pt;
        }
    });
    return out;
}

void to_json(nlohmann::json& j, const AxisSpec& a) {
    j = {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

void from_json(const nlohmann::json& j, AxisSpec& a) {
    a.name = j.at("name").get<std::string>();
    a.min = j.at("min").get<double>();
    a.max = j.at("max").get<double>();
    a.count = j.at("count").get<int>();
}

void to_json(nlohmann::json& j, const SweepGrid& g) {
    j = {{"axes", g.axes}, {"values", g.values}, {"flags", g.flags}, {"meta", g.meta}};
}

void from_json(const nlohmann::json& j, SweepGrid& g) {
    j.at("axes").get_to(g.axes);
    j.at("values").get_to(g.values);
    j.at("flags").get_to(g.flags);
    g.meta = j.at("meta");
    if (g.axes.size() != 2 ||
        g.values.size() != static_cast<std::size_t>(g.axes[0].count) * g.axes[1].count ||
        g.flags.size() != g.values.size()) {
        throw InvalidParams("SweepGrid: inconsistent dimensions");
    }
}

std::string grid_to_csv(const SweepGrid& g) {
    std::string out;
    out += "# esqfi grid\n";
    out += "# meta: " + g.meta.dump() + "\n";
    out += "# axis,name,min,max,count\n";
    for (const auto& a : g.axes) {
        out += "# axis," + a.name + "," + fmt17(a.min) + "," + fmt17(a.max) + "," +
               std::to_string(a.count) + "\n";
    }
    const int rows = g.axes[0].count;
    const int cols = g.axes[1].count;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out += ",";
            out += fmt17(g.at(i, j));
        }
        out += "\n";
    }
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (g.flagged(i, j)) {
                out += "# flagged," + std::to_string(i) + "," + std::to_string(j) + "\n";
            }
        }
    }
    return out;
}

}  // namespace esqfi

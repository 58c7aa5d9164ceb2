#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tcres/green2d.hpp"
#include "tcres/io.hpp"
#include "tcres/radial.hpp"
#include "tcres/resonances.hpp"

namespace tcres {

// ---------------------------------------------------------------------------
// Run configuration for the command-line front end. Exit codes: 0 full
// success, 2 when any grid cell failed (failures are embedded in the output),
// 1 on configuration errors.

enum class Subcommand { angular, radial, resonances_cmd, bifurcation, figure };
enum class OutputFormat { csv, json };

struct RunConfig {
    Subcommand subcommand = Subcommand::resonances_cmd;
    double z_plus = 2.0;
    double z_minus = 0.0;
    double h = 0.01;

    // resonances / figure
    Regime regime = Regime::high_energy;
    int n_min = 0, n_max = 0;
    int m_min = 1, m_max = 1;
    std::optional<double> c_over_h;  // mstart = ceil(C/h) when given
    int m_span = 21;
    resonances::SolveOptions solve_opts;
    std::string figure_id;

    // angular
    double e_real = 1.0;
    double e_imag = 0.0;
    int count = 8;

    // radial
    Complex k{1.0, 0.0};
    Complex mu{1.0, 0.0};

    // bifurcation
    double e_min = 0.0, e_max = 10.0;
    int samples = 100;

    std::string out_path = "-";  // "-" = stdout
    OutputFormat format = OutputFormat::csv;
    int threads = 1;
};

inline int threads_from_env(int fallback) {
    if (const char* env = std::getenv("TCRES_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return fallback;
}

namespace detail {

struct FigurePreset {
    const char* id;
    const char* alias;
    double z_plus, z_minus, h;
    Regime regime;
    int n_min, n_max, m_min, m_max;
    EnergyFamily family;
    bool both_families;
    double c_min;
};

// Caption-faithful parameter presets for the survey figures.
inline const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = {
        {"llsol-pos", "low-lying, Z+ = 2", 2.0, 0.0, 0.01, Regime::low_lying, 0, 4, 1, 250,
         EnergyFamily::small_re, false, 0.5},
        {"llsol-neg", "low-lying, Z+ = -2", -2.0, 0.0, 0.01, Regime::low_lying, 0, 4, 1, 250,
         EnergyFamily::small_re, false, 0.5},
        {"hesol", "high-energy families, h = 0.05", 2.0, 0.0, 0.05, Regime::high_energy, 0, 3,
         200, 220, EnergyFamily::small_re, true, 0.5},
        {"proj-p24", "projection, (Z+, Z-) = (2, 4)", 2.0, 4.0, 0.001, Regime::high_energy, 0, 3,
         400, 430, EnergyFamily::large_re, false, 0.0},
        {"proj-m24", "projection, (Z+, Z-) = (-2, 4)", -2.0, 4.0, 0.001, Regime::high_energy, 0,
         3, 700, 730, EnergyFamily::large_re, false, 0.0},
        {"proj-p42", "projection, (Z+, Z-) = (4, 2)", 4.0, 2.0, 0.001, Regime::high_energy, 0, 3,
         400, 430, EnergyFamily::large_re, false, 0.0},
        {"proj-m42", "projection, (Z+, Z-) = (-4, 2)", -4.0, 2.0, 0.001, Regime::high_energy, 0,
         3, 700, 730, EnergyFamily::large_re, false, 0.0},
        {"lattice", "renormalized lattice, h = 0.001", 2.0, 4.0, 0.001, Regime::high_energy, 0,
         3, 9000, 9010, EnergyFamily::large_re, false, 0.5},
    };
    return presets;
}

inline std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw InvalidParams("output path not writable: " + path);
    return file;
}

}  // namespace detail

inline int run(const RunConfig& cfg) {
    try {
        std::ofstream file;
        std::ostream& os = detail::open_sink(cfg.out_path, file);
        switch (cfg.subcommand) {
            case Subcommand::angular: {
                ProblemParams p = params_from_zpm(cfg.z_plus, cfg.z_minus, cfg.h);
                auto levels =
                    angular::angular_eigenvalues(p, Complex(cfg.e_real, cfg.e_imag), cfg.count);
                if (cfg.format == OutputFormat::csv) {
                    io::write_angular_csv(os, levels);
                } else {
                    nlohmann::json arr = nlohmann::json::array();
                    for (const auto& l : levels)
                        arr.push_back({{"n", l.index},
                                       {"re_mu", l.mu.real()},
                                       {"im_mu", l.mu.imag()},
                                       {"parity", to_string(l.parity)},
                                       {"continuation_guaranteed", l.continuation_guaranteed}});
                    os << arr.dump(1) << '\n';
                }
                return 0;
            }
            case Subcommand::radial: {
                ProblemParams p = params_from_zpm(cfg.z_plus, cfg.z_minus, cfg.h);
                radial::JostData jd = radial::jost(radial::reduce(p, cfg.k, cfg.mu));
                nlohmann::json j{{"re_k", cfg.k.real()},
                                 {"im_k", cfg.k.imag()},
                                 {"re_mu", cfg.mu.real()},
                                 {"im_mu", cfg.mu.imag()},
                                 {"re_f_plus", jd.f_plus.real()},
                                 {"im_f_plus", jd.f_plus.imag()},
                                 {"re_f_minus", jd.f_minus.real()},
                                 {"im_f_minus", jd.f_minus.imag()},
                                 {"re_s", jd.s_matrix.real()},
                                 {"im_s", jd.s_matrix.imag()},
                                 {"wronskian_check", jd.wronskian_check},
                                 {"gamma_plus", jd.gamma_plus},
                                 {"gamma_minus", jd.gamma_minus}};
                os << j.dump(1) << '\n';
                return 0;
            }
            case Subcommand::bifurcation: {
                ProblemParams p = params_from_zpm(cfg.z_plus, cfg.z_minus, cfg.h);
                auto curves = bifurcation_diagram(p, cfg.e_min, cfg.e_max, cfg.samples);
                if (cfg.format == OutputFormat::csv)
                    io::write_bifurcation_csv(os, curves);
                else
                    io::write_bifurcation_json(os, curves);
                return 0;
            }
            case Subcommand::resonances_cmd: {
                ProblemParams p = params_from_zpm(cfg.z_plus, cfg.z_minus, cfg.h);
                resonances::GridRequest req;
                req.regime = cfg.regime;
                req.n_min = cfg.n_min;
                req.n_max = cfg.n_max;
                if (cfg.c_over_h) {
                    req.m_min = static_cast<int>(std::ceil(*cfg.c_over_h / cfg.h));
                    req.m_max = req.m_min + cfg.m_span - 1;
                } else {
                    req.m_min = cfg.m_min;
                    req.m_max = cfg.m_max;
                }
                req.opts = cfg.solve_opts;
                req.threads = cfg.threads;
                auto cells = resonances::resonance_grid(p, req);
                if (cfg.format == OutputFormat::csv)
                    io::write_resonance_csv(os, p, cells, cfg.regime);
                else
                    io::write_resonance_json(os, p, cells, cfg.regime);
                for (const auto& c : cells)
                    if (!c.record) return 2;
                return 0;
            }
            case Subcommand::figure: {
                const detail::FigurePreset* preset = nullptr;
                for (const auto& f : detail::figure_presets())
                    if (cfg.figure_id == f.id) preset = &f;
                if (!preset) {
                    std::cerr << "unknown figure id '" << cfg.figure_id << "'; available:";
                    for (const auto& f : detail::figure_presets()) std::cerr << ' ' << f.id;
                    std::cerr << '\n';
                    return 1;
                }
                ProblemParams p = params_from_zpm(preset->z_plus, preset->z_minus, preset->h);
                resonances::GridRequest req;
                req.regime = preset->regime;
                req.n_min = preset->n_min;
                req.n_max = preset->n_max;
                req.m_min = preset->m_min;
                req.m_max = preset->m_max;
                req.opts.c_min = preset->c_min;
                req.opts.family = preset->family;
                req.threads = cfg.threads;
                auto cells = resonances::resonance_grid(p, req);
                if (preset->both_families) {
                    resonances::GridRequest req2 = req;
                    req2.opts.family = EnergyFamily::large_re;
                    auto more = resonances::resonance_grid(p, req2);
                    cells.insert(cells.end(), more.begin(), more.end());
                }
                if (cfg.format == OutputFormat::csv)
                    io::write_resonance_csv(os, p, cells, preset->regime);
                else
                    io::write_resonance_json(os, p, cells, preset->regime);
                for (const auto& c : cells)
                    if (!c.record) return 2;
                return 0;
            }
        }
        return 1;
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error [" << e.tag() << "]: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace tcres

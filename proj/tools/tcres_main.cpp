// Command-line front end: parameter ingestion, subcommand dispatch and
// CSV/JSON dataset emission for the resonance survey drivers.

#include <CLI11.hpp>

#include "tcres/tcres.hpp"

namespace {

void add_common(CLI::App* cmd, tcres::RunConfig& cfg, std::string& format) {
    cmd->add_option("--out", cfg.out_path, "output path ('-' = stdout)");
    cmd->add_option("--format", format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", cfg.threads, "worker threads (also TCRES_THREADS)")
        ->check(CLI::PositiveNumber);
}

void add_charges(CLI::App* cmd, tcres::RunConfig& cfg) {
    cmd->add_option("--zp", cfg.z_plus, "charge sum Z+ = Z1 + Z2");
    cmd->add_option("--zm", cfg.z_minus, "charge difference Z- = Z2 - Z1 (>= 0)");
    cmd->add_option("--h", cfg.h, "semiclassical parameter h > 0");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-center Coulomb resonance toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file (flags win)");

    tcres::RunConfig cfg;
    cfg.threads = tcres::threads_from_env(1);
    std::string format = "csv";
    std::string regime = "high-energy";
    std::string family = "small";

    auto* ang = app.add_subcommand("angular", "angular Hill-operator spectrum");
    add_charges(ang, cfg);
    ang->add_option("--e", cfg.e_real, "energy E (real part)");
    ang->add_option("--e-im", cfg.e_imag, "energy E (imaginary part)");
    ang->add_option("--count", cfg.count, "number of levels")->check(CLI::PositiveNumber);
    add_common(ang, cfg, format);

    auto* rad = app.add_subcommand("radial", "Jost-function diagnostics at one (k, mu)");
    add_charges(rad, cfg);
    double k_re = 1.0, k_im = 0.0, mu_re = 1.0, mu_im = 0.0;
    rad->add_option("--k-re", k_re, "Re k");
    rad->add_option("--k-im", k_im, "Im k");
    rad->add_option("--mu-re", mu_re, "Re mu");
    rad->add_option("--mu-im", mu_im, "Im mu");
    add_common(rad, cfg, format);

    auto* res = app.add_subcommand("resonances", "resonance grids per regime");
    add_charges(res, cfg);
    res->add_option("--regime", regime, "equal-charges | low-lying | high-energy | direct-jost")
        ->check(CLI::IsMember({"equal-charges", "low-lying", "high-energy", "direct-jost"}));
    res->add_option("--nmin", cfg.n_min, "smallest barrier index n");
    res->add_option("--nmax", cfg.n_max, "largest barrier index n");
    res->add_option("--mmin", cfg.m_min, "smallest angular index m");
    res->add_option("--mmax", cfg.m_max, "largest angular index m");
    double c_value = 0.0;
    auto* c_opt = res->add_option("--C", c_value, "start m at ceil(C/h)");
    res->add_option("--mspan", cfg.m_span, "number of m values when --C is used");
    res->add_option("--family", family, "high-energy root family: small | large")
        ->check(CLI::IsMember({"small", "large"}));
    res->add_option("--cmin", cfg.solve_opts.c_min, "validity floor on (m+1) h");
    res->add_flag("--keep-anti", cfg.solve_opts.keep_anti_resonances,
                  "retain anti-resonance roots (Im E > 0)");
    add_common(res, cfg, format);

    auto* bif = app.add_subcommand("bifurcation", "classical bifurcation diagram");
    add_charges(bif, cfg);
    bif->add_option("--emin", cfg.e_min, "lower energy bound");
    bif->add_option("--emax", cfg.e_max, "upper energy bound");
    bif->add_option("--samples", cfg.samples, "samples per curve")->check(CLI::PositiveNumber);
    add_common(bif, cfg, format);

    auto* fig = app.add_subcommand("figure", "caption-faithful survey dataset presets");
    fig->add_option("--id", cfg.figure_id, "preset id (see --list)");
    bool list = false;
    fig->add_flag("--list", list, "list available presets");
    add_common(fig, cfg, format);

    CLI11_PARSE(app, argc, argv);

    cfg.format = format == "json" ? tcres::OutputFormat::json : tcres::OutputFormat::csv;
    if (regime == "equal-charges") cfg.regime = tcres::Regime::equal_charges;
    else if (regime == "low-lying") cfg.regime = tcres::Regime::low_lying;
    else if (regime == "direct-jost") cfg.regime = tcres::Regime::direct_jost;
    else cfg.regime = tcres::Regime::high_energy;
    cfg.solve_opts.family =
        family == "large" ? tcres::EnergyFamily::large_re : tcres::EnergyFamily::small_re;
    if (*c_opt) cfg.c_over_h = c_value;
    cfg.k = tcres::Complex(k_re, k_im);
    cfg.mu = tcres::Complex(mu_re, mu_im);

    if (ang->parsed()) cfg.subcommand = tcres::Subcommand::angular;
    if (rad->parsed()) cfg.subcommand = tcres::Subcommand::radial;
    if (res->parsed()) cfg.subcommand = tcres::Subcommand::resonances_cmd;
    if (bif->parsed()) cfg.subcommand = tcres::Subcommand::bifurcation;
    if (fig->parsed()) {
        cfg.subcommand = tcres::Subcommand::figure;
        if (list) {
            for (const auto& f : tcres::detail::figure_presets())
                std::printf("%-10s %s\n", f.id, f.alias);
            return 0;
        }
    }
    return tcres::run(cfg);
}

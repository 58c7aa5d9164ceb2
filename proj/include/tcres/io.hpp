#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcres/classical.hpp"
#include "tcres/resonances.hpp"
#include "tcres/types.hpp"

namespace tcres::io {

// Shortest decimal that round-trips to the same double.
inline std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{}) throw InvalidParams("unparsable float: " + s);
    return v;
}

inline const char* resonance_csv_header() {
    return "n,m,h,z_plus,z_minus,regime,re_e,im_e,re_mu,im_mu,k_est,residual,status,reason";
}

inline std::string resonance_csv_row(const ProblemParams& p, const resonances::GridCell& cell,
                                     Regime regime) {
    std::ostringstream os;
    os << cell.n << ',' << cell.m << ',' << fmt(p.h) << ',' << fmt(p.z_plus) << ','
       << fmt(p.z_minus) << ',';
    if (cell.record) {
        const ResonanceRecord& r = *cell.record;
        os << to_string(r.regime) << ',' << fmt(r.energy.e.real()) << ',' << fmt(r.energy.e.imag())
           << ',' << fmt(r.mu.real()) << ',' << fmt(r.mu.imag()) << ',' << fmt(r.k_classical)
           << ',' << fmt(r.residual) << ",ok,";
    } else {
        std::string reason = cell.reason;
        for (auto& c : reason)
            if (c == ',' || c == '\n') c = ';';
        os << to_string(regime) << ",,,,,," << "failed," << reason;
    }
    return os.str();
}

struct ParsedResonanceRow {
    resonances::GridCell cell;
    double h = 0.0, z_plus = 0.0, z_minus = 0.0;
};

inline ParsedResonanceRow parse_resonance_csv_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            f.push_back(cur);
            cur.clear();
        } else
            cur.push_back(c);
    }
    f.push_back(cur);
    if (f.size() != 14) throw InvalidParams("bad CSV row field count");
    ParsedResonanceRow row;
    row.cell.n = std::stoi(f[0]);
    row.cell.m = std::stoi(f[1]);
    row.h = parse_double(f[2]);
    row.z_plus = parse_double(f[3]);
    row.z_minus = parse_double(f[4]);
    row.cell.status = f[12];
    row.cell.reason = f[13];
    if (row.cell.status == "ok") {
        ResonanceRecord r;
        r.n = row.cell.n;
        r.m = row.cell.m;
        for (Regime reg : {Regime::equal_charges, Regime::low_lying, Regime::high_energy,
                           Regime::direct_jost})
            if (f[5] == to_string(reg)) r.regime = reg;
        r.energy.e = Complex(parse_double(f[6]), parse_double(f[7]));
        r.energy.k = std::sqrt(r.energy.e);
        r.energy.sheet = r.energy.k.imag() >= 0.0 ? Sheet::physical : Sheet::second;
        r.mu = Complex(parse_double(f[8]), parse_double(f[9]));
        r.k_classical = parse_double(f[10]);
        r.residual = parse_double(f[11]);
        row.cell.record = r;
    }
    return row;
}

inline void write_resonance_csv(std::ostream& os, const ProblemParams& p,
                                const std::vector<resonances::GridCell>& cells, Regime regime) {
    os << resonance_csv_header() << '\n';
    for (const auto& c : cells) os << resonance_csv_row(p, c, regime) << '\n';
}

inline void write_resonance_json(std::ostream& os, const ProblemParams& p,
                                 const std::vector<resonances::GridCell>& cells, Regime regime) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json row;
        row["n"] = c.n;
        row["m"] = c.m;
        row["h"] = p.h;
        row["z_plus"] = p.z_plus;
        row["z_minus"] = p.z_minus;
        row["status"] = c.status;
        if (c.record) {
            row["regime"] = to_string(c.record->regime);
            row["re_e"] = c.record->energy.e.real();
            row["im_e"] = c.record->energy.e.imag();
            row["re_mu"] = c.record->mu.real();
            row["im_mu"] = c.record->mu.imag();
            row["k_est"] = c.record->k_classical;
            row["residual"] = c.record->residual;
        } else {
            row["regime"] = to_string(regime);
            row["reason"] = c.reason;
        }
        arr.push_back(std::move(row));
    }
    os << arr.dump(1) << '\n';
}

// Bifurcation curves: one block per curve, blank-line separated.
inline void write_bifurcation_csv(std::ostream& os,
                                  const std::vector<BifurcationCurve>& curves) {
    os << "curve,e,k\n";
    for (const auto& c : curves) {
        for (const auto& s : c.samples)
            os << to_string(c.id) << ',' << fmt(s.e) << ','
               << (s.k ? fmt(*s.k) : std::string("unbounded")) << '\n';
        os << '\n';
    }
}

inline void write_bifurcation_json(std::ostream& os,
                                   const std::vector<BifurcationCurve>& curves) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json jc;
        jc["curve"] = to_string(c.id);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& s : c.samples) {
            nlohmann::json pt;
            pt["e"] = s.e;
            if (s.k)
                pt["k"] = *s.k;
            else
                pt["k"] = "unbounded";
            pts.push_back(std::move(pt));
        }
        jc["samples"] = std::move(pts);
        arr.push_back(std::move(jc));
    }
    os << arr.dump(1) << '\n';
}

inline void write_angular_csv(std::ostream& os, const std::vector<AngularLevel>& levels) {
    os << "n,re_mu,im_mu,parity,method,err_estimate,continuation_guaranteed\n";
    for (const auto& l : levels) {
        const char* method = l.method == AngularMethod::matrix ? "matrix"
                             : l.method == AngularMethod::shooting ? "shooting"
                             : l.method == AngularMethod::quasimode ? "quasimode"
                                                                    : "high_energy";
        os << l.index << ',' << fmt(l.mu.real()) << ',' << fmt(l.mu.imag()) << ','
           << to_string(l.parity) << ',' << method << ',' << fmt(l.err_estimate) << ','
           << (l.continuation_guaranteed ? 1 : 0) << '\n';
    }
}

}  // namespace tcres::io

#pragma once

// File outputs: CSV slices and trajectories, JSON summaries, gnuplot scripts.
// All floating-point output uses %.17g so reruns are byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rarewave/ansatz.hpp"
#include "rarewave/geometry.hpp"
#include "rarewave/relative_entropy.hpp"
#include "rarewave/solver2d.hpp"

namespace rarewave {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string slice_filename(double time) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "slice_t%.4f.csv", time);
    return buf;
}

inline void write_field_csv(const std::string& path, const Field2D& f) {
    std::ofstream out(path);
    out << "x1,x2,rho,v1,v2\n";
    const Grid& g = f.grid();
    for (int i = 0; i < g.nx1; ++i)
        for (int j = 0; j < g.nx2; ++j) {
            PrimitiveState s = to_primitive(f.at(i, j));
            out << fmt_double(g.x1(i)) << ',' << fmt_double(g.x2(j)) << ',' << fmt_double(s.rho)
                << ',' << fmt_double(s.v1) << ',' << fmt_double(s.v2) << '\n';
        }
}

// Reads a field written by write_field_csv; grid/time supplied by the caller.
inline Field2D read_field_csv(const std::string& path, const Grid& g, double time) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string header;
    std::getline(in, header);
    Field2D f(g, time);
    for (int i = 0; i < g.nx1; ++i)
        for (int j = 0; j < g.nx2; ++j) {
            std::string line;
            if (!std::getline(in, line)) throw std::runtime_error("read_field_csv: short file");
            double x1, x2, rho, v1, v2;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x1, &x2, &rho, &v1, &v2) != 5)
                throw std::runtime_error("read_field_csv: bad row in " + path);
            f.at(i, j) = to_conserved({rho, v1, v2});
        }
    return f;
}

inline void write_fronts_csv(const std::string& path, const std::vector<FrontLoci>& fronts) {
    std::ofstream out(path);
    out << "t,cbar0,hbar,h,c0,separated\n";
    for (const FrontLoci& fl : fronts) {
        out << fmt_double(fl.time) << ',' << fmt_double(fl.mean[0]) << ',' << fmt_double(fl.mean[1])
            << ',' << fmt_double(fl.mean[2]) << ',' << fmt_double(fl.mean[3]) << ','
            << (fl.separated ? 1 : 0) << '\n';
    }
}

inline void write_trajectories_csv(const std::string& path, const FrontSurface& surf) {
    std::ofstream out(path);
    out << "tau,t,u,theta,p_t,p_u,p_theta,H\n";
    for (std::size_t r = 0; r < surf.rays.size(); ++r) {
        out << "# alpha = " << fmt_double(surf.alphas[r]) << '\n';
        for (const RayPoint& p : surf.rays[r].points) {
            out << fmt_double(p.tau) << ',' << fmt_double(p.y[0]) << ',' << fmt_double(p.y[1])
                << ',' << fmt_double(p.y[2]) << ',' << fmt_double(p.y[3]) << ','
                << fmt_double(p.y[4]) << ',' << fmt_double(p.y[5]) << ',' << fmt_double(p.H)
                << '\n';
        }
        out << '\n';
    }
}

inline void write_slice_dump(const std::string& path, const SliceChart& ch, const TaylorData& td) {
    std::ofstream out(path);
    out << "theta,u,x1,x2,wbar,w,psi2,kappa,That1,That2\n";
    FrameState<Tab2> st = slice_state_tab(ch, td);
    for (int i = 0; i <= ch.n_tab; ++i) {
        double u = i * ch.du_tab;
        for (std::size_t j = 0; j < ch.m; ++j) {
            double th = ch.x1_0.theta(j);
            out << fmt_double(th) << ',' << fmt_double(u) << ','
                << fmt_double(ch.x1_t.row(i)[j]) << ','
                << fmt_double(th + ch.x2_t.row(i)[j]) << ',' << fmt_double(st.wb.row(i)[j]) << ','
                << fmt_double(st.w.row(i)[j]) << ',' << fmt_double(st.p2.row(i)[j]) << ','
                << fmt_double(ch.kappa_t.row(i)[j]) << ',' << fmt_double(ch.that1_t.row(i)[j])
                << ',' << fmt_double(ch.that2_t.row(i)[j]) << '\n';
        }
    }
}

inline nlohmann::json ansatz_json(const AnsatzReport& rep) {
    nlohmann::json j;
    j["eps"] = rep.eps;
    j["delta"] = rep.delta;
    j["u_star"] = rep.u_star;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"name", e.name}, {"measured", e.measured}, {"scale", e.scale},
                           {"ratio", e.ratio}});
    j["entries"] = entries;
    return j;
}

inline nlohmann::json entropy_report_json(const RelEntropyReport& rep) {
    nlohmann::json j;
    j["times"] = rep.times;
    j["integral_alpha"] = rep.integral_alpha;
    j["sup_alpha"] = rep.sup_alpha;
    j["entropy_residual"] = rep.entropy_residual;
    j["gronwall_A"] = rep.gronwall_A;
    j["gronwall_C"] = rep.gronwall_C;
    j["fan_sign_min"] = rep.fan_sign_min;
    j["constants"] = {{"c1", rep.constants.c1},
                      {"c2", rep.constants.c2},
                      {"s0", rep.constants.s0},
                      {"rho_min", rep.constants.rho_min},
                      {"rho_max", rep.constants.rho_max},
                      {"vmax", rep.constants.vmax}};
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string gnuplot_script(const std::vector<double>& slice_times) {
    std::string s;
    s += "# gnuplot script for standard run figures\n";
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set xlabel 'x1'\n";
    s += "set terminal pngcairo size 900,600\n";
    for (double t : slice_times) {
        std::string f = slice_filename(t);
        s += "set output 'rho_" + std::to_string(t).substr(0, 6) + ".png'\n";
        s += "set ylabel 'rho'\n";
        s += "plot '" + f + "' using 1:3 with points pt 7 ps 0.2 title 't=" +
             std::to_string(t).substr(0, 6) + "'\n";
    }
    s += "set output 'fronts.png'\n";
    s += "set xlabel 't'\nset ylabel 'x1'\n";
    s += "plot 'fronts.csv' using 1:2 w l, '' using 1:3 w l, '' using 1:4 w l, '' using 1:5 w l\n";
    return s;
}

}  // namespace rarewave

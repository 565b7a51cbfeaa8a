// polygon-chsh: CHSH optimization and certificate checking for regular
// polygon theories.
//
// Subcommands: theory info, chsh eval, optimize, verify, certify, table, sweep.
// Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
// 3 numeric breakdown.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polygon_chsh/io.hpp"
#include "polygon_chsh/polygon_chsh.hpp"

namespace pc = polygon_chsh;
using nlohmann::json;

namespace {

struct CliConfig {
    double tol = 1e-9;
    int lp_cap = 15;
    int threads = 0;  // 0 = all cores
    std::string output = "text";
};

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v + 0.0);  // +0.0 normalizes -0
    return std::string(buf) == "-0.000000" ? "0.000000" : buf;
}

json quadruple_json(const std::array<int, 4>& q) { return json::array({q[0], q[1], q[2], q[3]}); }

json matrix_json(const pc::Mat3& m) {
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        json row = json::array();
        for (int j = 0; j < 3; ++j) row.push_back(pc::json_round(m[i][j]));
        rows.push_back(row);
    }
    return rows;
}

bool parse_obs(const std::string& s, std::array<int, 4>& out) {
    return std::sscanf(s.c_str(), "%d,%d,%d,%d", &out[0], &out[1], &out[2], &out[3]) == 4;
}

bool parse_range(const std::string& s, int& a, int& b) {
    return std::sscanf(s.c_str(), "%d..%d", &a, &b) == 2 && a <= b;
}

int cmd_theory_info(const CliConfig& cfg, int n) {
    const pc::Theory t = pc::build_theory(n);
    if (cfg.output == "json") {
        json j;
        j["n"] = t.n;
        j["r_n"] = pc::json_round(t.r);
        j["theta_n"] = pc::json_round(t.theta);
        j["vertices"] = json::array();
        for (const pc::Vec3& v : t.pure_states)
            j["vertices"].push_back({pc::json_round(v.x), pc::json_round(v.y), pc::json_round(v.z)});
        j["pure_effects"] = json::array();
        for (const pc::Vec3& e : t.pure_effects)
            j["pure_effects"].push_back({pc::json_round(e.x), pc::json_round(e.y), pc::json_round(e.z)});
        j["T"] = matrix_json(t.T);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "polygon theory n=" << t.n << "\n";
    std::cout << "r_n=" << fmt6(t.r) << " theta_n=" << fmt6(t.theta) << "\n";
    std::cout << "vertices:\n";
    for (int i = 0; i < t.n; ++i) {
        const pc::Vec3 v = t.pure_states[i];
        std::cout << "  omega(" << i << ") = (" << fmt6(v.x) << ", " << fmt6(v.y) << ", "
                  << fmt6(v.z) << ")\n";
    }
    std::cout << "pure effects (" << t.pure_effects.size() << "):\n";
    for (std::size_t i = 0; i < t.pure_effects.size(); ++i) {
        const pc::Vec3 e = t.pure_effects[i];
        std::cout << "  e[" << i << "] = (" << fmt6(e.x) << ", " << fmt6(e.y) << ", " << fmt6(e.z)
                  << ")\n";
    }
    std::cout << "T_n:\n";
    for (int i = 0; i < 3; ++i)
        std::cout << "  [" << fmt6(t.T[i][0]) << ", " << fmt6(t.T[i][1]) << ", " << fmt6(t.T[i][2])
                  << "]\n";
    return 0;
}

int cmd_chsh_eval(const CliConfig& cfg, const std::string& state_file, const std::string& obs) {
    std::array<int, 4> q{};
    if (!parse_obs(obs, q)) {
        std::cerr << "chsh eval: --obs must be i,j,k,l\n";
        return 2;
    }
    std::ifstream in(state_file);
    if (!in) {
        std::cerr << "chsh eval: cannot open " << state_file << "\n";
        return 2;
    }
    json jstate = json::parse(in);
    const pc::Theory t = pc::build_theory(jstate.at("n").get<int>());
    const pc::BipartiteState state = pc::state_from_json(t, jstate, cfg.tol);
    pc::ChshSetting setting{state, pc::binary_observable(t, q[0]), pc::binary_observable(t, q[1]),
                            pc::binary_observable(t, q[2]), pc::binary_observable(t, q[3])};
    const pc::ProbTable table = pc::prob_table(t, setting);
    const double c = pc::chsh_value(table);
    const double pwin = pc::winning_probability(table);
    if (cfg.output == "json") {
        json j;
        j["n"] = t.n;
        j["C"] = pc::json_round(c);
        j["P_win"] = pc::json_round(pwin);
        json tbl = json::array();
        for (int s = 0; s < 2; ++s)
            for (int tt = 0; tt < 2; ++tt) {
                json row = json::array();
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) row.push_back(pc::json_round(table.p[a][b][s][tt]));
                tbl.push_back(row);
            }
        j["table"] = tbl;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "C=" << fmt6(c) << "\n";
    std::cout << "P_win=" << fmt6(pwin) << "\n";
    std::cout << "table (rows s,t; cols a,b in 00,01,10,11):\n";
    for (int s = 0; s < 2; ++s)
        for (int tt = 0; tt < 2; ++tt) {
            std::cout << "  s=" << s << " t=" << tt << ":";
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) std::cout << " " << fmt6(table.p[a][b][s][tt]);
            std::cout << "\n";
        }
    return 0;
}

int cmd_optimize(const CliConfig& cfg, int n, const std::string& obs, bool me_only, bool no_reduce,
                 const std::string& sense) {
    const pc::Theory t = pc::build_theory(n);
    if (!obs.empty()) {
        std::array<int, 4> q{};
        if (!parse_obs(obs, q)) {
            std::cerr << "optimize: --obs must be i,j,k,l\n";
            return 2;
        }
        auto run = [&](pc::Sense s) {
            return pc::max_chsh_fixed_obs(t, q[0], q[1], q[2], q[3], s);
        };
        double value;
        pc::Mat3 state;
        if (sense == "max") std::tie(value, state) = run(pc::Sense::Maximize);
        else if (sense == "min") std::tie(value, state) = run(pc::Sense::Minimize);
        else {
            auto [vmax, smax] = run(pc::Sense::Maximize);
            auto [vmin, smin] = run(pc::Sense::Minimize);
            if (std::abs(vmax) >= std::abs(vmin)) std::tie(value, state) = std::tie(vmax, smax);
            else std::tie(value, state) = std::tie(vmin, smin);
        }
        if (cfg.output == "json") {
            json j;
            j["n"] = n;
            j["obs"] = quadruple_json(std::array<int, 4>{q[0], q[1], q[2], q[3]});
            j["value"] = pc::json_round(value);
            j["matrix"] = matrix_json(state);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "n=" << n << " obs=" << q[0] << "," << q[1] << "," << q[2] << "," << q[3]
                      << " C=" << fmt6(value) << "\n";
        }
        return 0;
    }
    if (me_only) {
        const pc::OptimumReport rep = pc::me_optimum(t);
        if (cfg.output == "json") {
            json j;
            j["n"] = n;
            j["me"] = {{"value", pc::json_round(rep.best_value)},
                       {"group_element", rep.group_element},
                       {"quadruple", quadruple_json(rep.quadruple)}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "n=" << n << " ME optimum |C|=" << fmt6(rep.best_value) << " at obs="
                      << rep.quadruple[0] << "," << rep.quadruple[1] << "," << rep.quadruple[2]
                      << "," << rep.quadruple[3] << " group_element=" << rep.group_element << "\n";
        }
        return 0;
    }
    const pc::OptimumReport rep = pc::global_optimum(t, !no_reduce, cfg.threads, cfg.lp_cap);
    if (cfg.output == "json") {
        json j;
        j["n"] = n;
        j["global"] = {{"value", pc::json_round(rep.best_value)},
                       {"quadruple", quadruple_json(rep.quadruple)},
                       {"matrix", matrix_json(rep.state)}};
        j["is_max_entangled"] = rep.is_max_entangled;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "n=" << n << " global optimum |C|=" << fmt6(rep.best_value) << " (C="
                  << fmt6(rep.signed_value) << ") at obs=" << rep.quadruple[0] << ","
                  << rep.quadruple[1] << "," << rep.quadruple[2] << "," << rep.quadruple[3]
                  << (rep.is_max_entangled ? " [maximally entangled]" : "") << "\n";
    }
    return 0;
}

json certificate_json(const pc::CertificateReport& rep) {
    json jc;
    jc["pass"] = rep.pass;
    json res;
    for (const auto& [name, value] : rep.residuals) res[name] = pc::json_round(value);
    jc["residuals"] = res;
    return jc;
}

int cmd_verify(const CliConfig& cfg, const std::string& range) {
    int a = 0, b = 0;
    if (!parse_range(range, a, b) || a < 3) {
        std::cerr << "verify: --n-range must be A..B with 3 <= A <= B\n";
        return 2;
    }
    bool all_pass = true;
    json out = json::array();
    for (int n = a; n <= b; ++n) {
        const pc::Theory t = pc::build_theory(n);
        const pc::TheoremReport rep = pc::verify_theorem(t, cfg.threads, cfg.lp_cap);
        all_pass = all_pass && rep.pass;
        if (cfg.output == "json") {
            json j;
            j["n"] = n;
            j["global"] = {{"value", pc::json_round(rep.global.best_value)},
                           {"quadruple", quadruple_json(rep.global.quadruple)},
                           {"matrix", matrix_json(rep.global.state)}};
            j["me"] = {{"value", pc::json_round(rep.me.best_value)},
                       {"group_element", rep.me.group_element},
                       {"quadruple", quadruple_json(rep.me.quadruple)}};
            j["theorem_pass"] = rep.pass;
            if (n % 2 == 1 && n >= 5) j["certificate"] = certificate_json(pc::certify(n));
            out.push_back(j);
        } else {
            std::cout << "n=" << n << " global=" << fmt6(rep.global_value) << " me="
                      << fmt6(rep.me_value) << " " << (rep.pass ? "PASS" : "FAIL") << "\n";
        }
    }
    if (cfg.output == "json") std::cout << out.dump(2) << "\n";
    else std::cout << (all_pass ? "all PASS" : "FAILURES present") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_certify(const CliConfig& cfg, int n) {
    const pc::CertificateReport rep = pc::certify(n);
    if (cfg.output == "json") {
        json j;
        j["n"] = n;
        j["certificate"] = certificate_json(rep);
        j["gamma_pass"] = rep.gamma_pass;
        j["delta_pass"] = rep.delta_pass;
        j["H"] = pc::json_round(rep.h_value);
        j["prop2_margin"] = pc::json_round(rep.prop2_margin);
        if (rep.has_c_dual) {
            j["appendix_c_dual"] = json::array();
            for (double y : rep.c_dual) j["appendix_c_dual"].push_back(pc::json_round(y));
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "n=" << n << " certificate " << (rep.pass ? "PASS" : "FAIL") << "\n";
        std::cout << "  optimality (gamma): " << (rep.gamma_pass ? "PASS" : "FAIL")
                  << "  H=" << fmt6(rep.h_value) << "\n";
        std::cout << "  domination (delta): " << (rep.delta_pass ? "PASS" : "FAIL")
                  << "  margin=" << fmt6(rep.prop2_margin) << "\n";
        if (rep.has_c_dual)
            std::cout << "  dual y=(" << fmt6(rep.c_dual[0]) << ", " << fmt6(rep.c_dual[1]) << ", "
                      << fmt6(rep.c_dual[2]) << ", " << fmt6(rep.c_dual[3]) << ")\n";
        for (const auto& [name, value] : rep.residuals)
            std::cout << "  residual " << name << " = " << value << "\n";
    }
    return rep.pass ? 0 : 1;
}

int cmd_table(const std::string& what, int n) {
    const pc::Theory t = pc::build_theory(n);
    const pc::HOpt h = pc::h_opt(n);
    if (what == "hopt") {
        std::cout << "n,n_star,H_opt\n";
        std::cout << n << "," << h.n_star << "," << fmt6(h.H) << "\n";
        return 0;
    }
    std::cout << "n,k,G,H,n_star,H_opt\n";
    const std::vector<double> g = pc::g_table(t);
    const std::vector<double> hh = pc::h_table(t);
    for (std::size_t k = 0; k < g.size(); ++k) {
        std::cout << n << "," << k << ",";
        if (what == "g" || what == "both") std::cout << fmt6(g[k]);
        std::cout << ",";
        if (what == "h" || what == "both") std::cout << fmt6(hh[k]);
        std::cout << "," << h.n_star << "," << fmt6(h.H) << "\n";
    }
    return 0;
}

int cmd_sweep(const CliConfig& cfg, const std::string& parity, int max_n, const std::string& out) {
    pc::Parity p;
    if (parity == "even") p = pc::Parity::Even;
    else if (parity == "odd") p = pc::Parity::Odd;
    else if (parity == "both") p = pc::Parity::Both;
    else {
        std::cerr << "sweep: --parity must be even|odd|both\n";
        return 2;
    }
    const std::vector<pc::SweepRow> rows = pc::sweep(p, max_n, cfg.lp_cap, cfg.threads);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) {
            std::cerr << "sweep: cannot open " << out << "\n";
            return 2;
        }
        os = &file;
    }
    *os << "n,optimum,method\n";
    for (const pc::SweepRow& row : rows)
        *os << row.n << "," << fmt6(row.optimum) << "," << row.method << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH optimization over regular polygon theories"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    CliConfig cfg;
    if (const char* env = std::getenv("POLYGON_CHSH_THREADS")) cfg.threads = std::atoi(env);
    app.add_option("--tol", cfg.tol, "global tolerance")->check(CLI::PositiveNumber);
    app.add_option("--lp-cap", cfg.lp_cap, "max n for LP sweeps")->check(CLI::Range(3, 1000));
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app.add_option("--output", cfg.output, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    auto* theory_cmd = app.add_subcommand("theory", "single-system queries");
    auto* info = theory_cmd->add_subcommand("info", "print vertices, effects, r_n, T_n");
    int info_n = 5;
    info->add_option("--n", info_n, "side count")->required()->check(CLI::Range(3, 100000));

    auto* chsh_cmd = app.add_subcommand("chsh", "CHSH-game arithmetic");
    auto* eval = chsh_cmd->add_subcommand("eval", "evaluate C, P_win and the table");
    std::string eval_state, eval_obs;
    eval->add_option("--state", eval_state, "state JSON file")->required();
    eval->add_option("--obs", eval_obs, "observable quadruple i,j,k,l")->required();

    auto* opt = app.add_subcommand("optimize", "optimize the CHSH value");
    int opt_n = 5;
    std::string opt_obs, opt_sense = "abs";
    bool opt_me_only = false, opt_no_reduce = false;
    opt->add_option("--n", opt_n, "side count")->required()->check(CLI::Range(3, 1000));
    opt->add_option("--obs", opt_obs, "fixed observable quadruple i,j,k,l");
    opt->add_flag("--me-only", opt_me_only, "restrict to maximally entangled states");
    opt->add_flag("--no-reduce", opt_no_reduce, "sweep the full unreduced quadruple space");
    opt->add_option("--sense", opt_sense, "max|min|abs")->check(CLI::IsMember({"max", "min", "abs"}));

    auto* verify = app.add_subcommand("verify", "Theorem-1 verification over a range of n");
    std::string verify_range;
    verify->add_option("--n-range", verify_range, "range A..B")->required();

    auto* certify = app.add_subcommand("certify", "optimality certificates for odd n");
    int certify_n = 5;
    certify->add_option("--n", certify_n, "odd side count")->required()->check(CLI::Range(5, 1000));

    auto* table = app.add_subcommand("table", "closed-form value tables (CSV)");
    std::string table_what = "both";
    int table_n = 5;
    table->add_option("--what", table_what, "g|h|hopt|both")
        ->check(CLI::IsMember({"g", "h", "hopt", "both"}));
    table->add_option("--n", table_n, "odd side count")->required()->check(CLI::Range(5, 100000));

    auto* sweep_cmd = app.add_subcommand("sweep", "convergence sweep (CSV)");
    std::string sweep_parity = "both", sweep_out;
    int sweep_max = 41;
    sweep_cmd->add_option("--parity", sweep_parity, "even|odd|both");
    sweep_cmd->add_option("--max-n", sweep_max, "largest n")->check(CLI::Range(3, 2001));
    sweep_cmd->add_option("--out", sweep_out, "output CSV file");

    for (CLI::App* sub : {theory_cmd, info, chsh_cmd, eval, opt, verify, certify, table, sweep_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (info->parsed()) return cmd_theory_info(cfg, info_n);
        if (eval->parsed()) return cmd_chsh_eval(cfg, eval_state, eval_obs);
        if (opt->parsed()) return cmd_optimize(cfg, opt_n, opt_obs, opt_me_only, opt_no_reduce, opt_sense);
        if (verify->parsed()) return cmd_verify(cfg, verify_range);
        if (certify->parsed()) return cmd_certify(cfg, certify_n);
        if (table->parsed()) return cmd_table(table_what, table_n);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, sweep_parity, sweep_max, sweep_out);
    } catch (const pc::NumericBreakdown& e) {
        std::cerr << "numeric breakdown: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "usage error: no subcommand\n";
    return 2;
}

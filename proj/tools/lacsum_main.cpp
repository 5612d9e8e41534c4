// lacsum: experiments on tail probabilities of lacunary trigonometric sums.
// Subcommands: gen, census, tail-scan, martingale, construct, preset.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lacsum/construction.hpp"
#include "lacsum/diophantine.hpp"
#include "lacsum/ks.hpp"
#include "lacsum/martingale.hpp"
#include "lacsum/normal.hpp"
#include "lacsum/presets.hpp"
#include "lacsum/sampler.hpp"
#include "lacsum/seqio.hpp"

using namespace lacsum;
using nlohmann::json;

namespace {

LacunarySequence make_sequence(const std::string& kind, long N, const std::string& q_str) {
    if (kind == "pow2") return gen_pow2(N);
    if (kind == "erdos-fortet") return gen_erdos_fortet(N);
    if (kind == "geometric") return gen_geometric(rat_from_string(q_str), N);
    throw std::invalid_argument("unknown sequence kind: " + kind +
                                " (want pow2 | erdos-fortet | geometric)");
}

GrowthFunction make_growth(const std::string& spec) {
    if (spec == "identity" || spec == "N") return GrowthFunction::identity();
    if (spec == "sqrt") return GrowthFunction::sqrt_n();
    if (spec.rfind("power:", 0) == 0) return GrowthFunction::power(std::stod(spec.substr(6)));
    if (spec.rfind("logpow:", 0) == 0) return GrowthFunction::log_power(std::stod(spec.substr(7)));
    if (spec == "loglog") return GrowthFunction::iterated_log();
    throw std::invalid_argument("unknown growth spec: " + spec);
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    json j;
    f >> j;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lacunary sum tail experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, seq_file;
    std::optional<uint64_t> seed;
    std::optional<long> samples_override, depth_override;
    std::optional<int> threads;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "RNG seed (mandatory for sampling commands)");
    app.add_option("--out", out_path, "output file or directory");
    app.add_option("--depth", depth_override, "dyadic depth override");
    app.add_option("--samples", samples_override, "approximate sample count override");
    app.add_option("--threads", threads, "OpenMP thread count");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a lacunary sequence (lacuseq v1)");
    std::string gen_kind = "pow2", gen_q = "2";
    long gen_N = 16;
    gen->add_option("kind", gen_kind, "pow2 | erdos-fortet | geometric");
    gen->add_option("-N,--count", gen_N, "number of terms");
    gen->add_option("-q,--ratio", gen_q, "gap ratio for geometric (rational, e.g. 3/2)");

    // construct
    auto* con = app.add_subcommand("construct", "blocked counterexample-style construction");
    int con_I = 2;
    std::string con_scale = "desk", con_growth = "sqrt";
    con->add_option("-I,--max-block", con_I, "largest block index");
    con->add_option("--scale", con_scale, "desk | paper");
    con->add_option("--growth", con_growth, "growth function for M(i)");

    // census
    auto* cen = app.add_subcommand("census", "Diophantine solution census L(N,a,b)");
    std::string cen_Ns = "16", cen_pairs = "1,1", cen_growth = "sqrt";
    cen->add_option("--seq", seq_file, "lacuseq file")->required();
    cen->add_option("--Ns", cen_Ns, "comma-separated index bounds");
    cen->add_option("--pairs", cen_pairs, "a1,b1[;a2,b2;...]");
    cen->add_option("--growth", cen_growth, "growth for the normalized column");

    // tail-scan
    auto* ts = app.add_subcommand("tail-scan", "Monte-Carlo tail ratio scan");
    std::string ts_kind = "pow2", ts_f = "cos:1=1", ts_growth = "identity";
    long ts_N = 1024;
    double ts_mult = 0.6;
    int ts_steps = 13;
    ts->add_option("--kind", ts_kind, "sequence kind");
    ts->add_option("--seq", seq_file, "lacuseq file (overrides --kind)");
    ts->add_option("-N", ts_N, "number of terms");
    ts->add_option("-f", ts_f, "trig polynomial, e.g. cos:1=1,cos:2=1");
    ts->add_option("--growth", ts_growth, "growth function g");
    ts->add_option("--t-max-mult", ts_mult, "grid upper end in units of sqrt(2 log g_N)");
    ts->add_option("--steps", ts_steps, "grid points");

    // martingale
    auto* mg = app.add_subcommand("martingale", "block-martingale diagnostics");
    long mg_N = 512, mg_u = 16, mg_d = 8;
    mg->add_option("-N", mg_N, "number of terms (pow2 sequence)");
    mg->add_option("--undashed", mg_u, "undashed block length");
    mg->add_option("--dashed", mg_d, "dashed block length");

    // preset
    auto* pr = app.add_subcommand("preset", "run a named experiment preset");
    std::string preset_name;
    pr->add_option("name", preset_name,
                   "erdos-fortet | clt-pow2 | theoremA-scan | theoremB-blowup | martingale-diag")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (threads) omp_set_num_threads(*threads);

    try {
        if (*gen) {
            LacunarySequence seq = make_sequence(gen_kind, gen_N, gen_q);
            if (out_path.empty()) {
                write_lacuseq(std::cout, seq);
            } else {
                save_lacuseq(out_path, seq);
                std::cout << "wrote " << out_path << " (" << seq.size() << " terms)\n";
            }
            return 0;
        }

        if (*con) {
            GrowthFunction g = make_growth(con_growth);
            ConstructionPlan plan = con_scale == "paper" ? ConstructionPlan::paper(g)
                                                         : ConstructionPlan::desk(g);
            ConstructedSequence cons = gen_theoremB(plan, con_I);
            GapReport rep = verify_gap(cons.seq, cons.burn_in);
            std::cerr << "terms: " << cons.seq.size() << "  burn_in: " << cons.burn_in
                      << "  min ratio after burn-in: " << rep.min_ratio.get_d() << "\n";
            if (out_path.empty()) {
                write_lacuseq(std::cout, cons.seq);
            } else {
                save_lacuseq(out_path, cons.seq);
                json layout = json::array();
                for (const auto& sb : cons.layout)
                    layout.push_back({{"i", sb.i}, {"m", sb.m}, {"k_first", sb.k_first},
                                      {"k_last", sb.k_last}});
                std::ofstream lf(out_path + ".layout.json");
                lf << json{{"burn_in", cons.burn_in}, {"M", cons.M}, {"subblocks", layout}}.dump(2)
                   << "\n";
                std::cout << "wrote " << out_path << " and " << out_path << ".layout.json\n";
            }
            return 0;
        }

        if (*cen) {
            LacunarySequence seq = load_lacuseq(seq_file);
            std::vector<long> Ns;
            {
                std::stringstream ss(cen_Ns);
                std::string tok;
                while (std::getline(ss, tok, ',')) Ns.push_back(std::stol(tok));
            }
            std::vector<std::pair<long, long>> pairs;
            {
                std::stringstream ss(cen_pairs);
                std::string grp;
                while (std::getline(ss, grp, ';')) {
                    auto comma = grp.find(',');
                    pairs.push_back({std::stol(grp.substr(0, comma)),
                                     std::stol(grp.substr(comma + 1))});
                }
            }
            auto rows = scan_L(seq, Ns, pairs, make_growth(cen_growth));
            std::ostream* os = &std::cout;
            std::ofstream fo;
            if (!out_path.empty()) {
                fo.open(out_path, std::ios::binary);
                os = &fo;
            }
            *os << "N,a,b,L,witness_c,g_N,L_times_g_over_N\n";
            for (const auto& r : rows)
                *os << r.N << "," << r.a << "," << r.b << "," << r.L << ","
                    << r.witness_c.get_str() << "," << format_double(r.g_N) << ","
                    << format_double(r.L_g_over_N) << "\n";
            return 0;
        }

        if (*ts) {
            if (!seed) throw std::invalid_argument("tail-scan: --seed is mandatory");
            TrigPolynomial f = TrigPolynomial::parse(ts_f);
            LacunarySequence seq = seq_file.empty() ? make_sequence(ts_kind, ts_N, "2")
                                                    : load_lacuseq(seq_file);
            SamplerConfig sc;
            sc.seed = *seed;
            if (depth_override) sc.depth = *depth_override;
            if (samples_override) {
                sc.strata_log2 = 12;
                sc.rounds = std::max(1L, *samples_override >> sc.strata_log2);
            }
            TailScan scan = ratio_scan(f, seq, ts_N, make_growth(ts_growth), ts_mult, ts_steps, sc);
            std::ostream* os = &std::cout;
            std::ofstream fo;
            if (!out_path.empty()) {
                fo.open(out_path, std::ios::binary);
                os = &fo;
            }
            write_tailscan_csv(*os, scan);
            if (!out_path.empty()) {
                std::ofstream side(out_path + ".meta.json", std::ios::binary);
                write_tailscan_sidecar(side, scan);
            }
            return 0;
        }

        if (*mg) {
            json cfg = load_config(config_path);
            cfg["N"] = mg_N;
            cfg["undashed"] = mg_u;
            cfg["dashed"] = mg_d;
            if (seed) cfg["seed"] = *seed;
            if (!out_path.empty()) cfg["out_dir"] = out_path;
            PresetResult res = run_preset("martingale-diag", cfg);
            for (const auto& c : res.checks)
                std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " = "
                          << format_double(c.value) << " (" << c.detail << ")\n";
            return res.all_pass() ? 0 : 1;
        }

        if (*pr) {
            json cfg = load_config(config_path);
            if (seed) cfg["seed"] = *seed;
            if (!cfg.contains("seed"))
                throw std::invalid_argument("preset: seed is mandatory (--seed or config)");
            if (!out_path.empty()) cfg["out_dir"] = out_path;
            if (samples_override) {
                cfg["strata_log2"] = 12;
                cfg["rounds"] = std::max(1L, *samples_override >> 12);
            }
            if (depth_override) cfg["depth"] = *depth_override;
            PresetResult res = run_preset(preset_name, cfg);
            for (const auto& c : res.checks)
                std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " = "
                          << format_double(c.value) << " (" << c.detail << ")\n";
            return res.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

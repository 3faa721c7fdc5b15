#include "coszero/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

using namespace coszero;

namespace {

struct PolyInput {
    std::string file, set, coeffs;

    void add(CLI::App* app) {
        app->add_option("--input", file, "JSON file: {\"coeffs\": [...]} or {\"set\": [...]}");
        app->add_option("--set", set, "comma-separated A for f_A");
        app->add_option("--coeffs", coeffs, "comma-separated cosine coefficients C_0,C_1,...");
    }
    bool given() const { return !file.empty() || !set.empty() || !coeffs.empty(); }
    CosinePolynomial get() const {
        if (!file.empty()) return polynomial_from_json(read_json_file(file));
        if (!set.empty()) {
            std::vector<long> A;
            for (const auto& s : split(set)) A.push_back(std::stol(s));
            return CosinePolynomial::from_set(A);
        }
        if (!coeffs.empty()) {
            std::vector<Rational> c;
            for (const auto& s : split(coeffs)) c.push_back(parse_rational(s));
            return CosinePolynomial(c);
        }
        throw std::invalid_argument("no polynomial given; use --input, --set or --coeffs");
    }
    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(item);
        return out;
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void emit(const Json& j, const std::string& path = "") { write_text(path, j.dump(2) + "\n"); }

std::map<std::string, std::string> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, std::string> out;
    for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("parameter '" + p + "' is not key=value");
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

CoefficientSet parse_set(const std::string& s) {
    std::vector<Rational> R;
    for (const auto& x : PolyInput::split(s)) R.push_back(parse_rational(x));
    return CoefficientSet(R);
}

std::string set_string(const CoefficientSet& R) {
    std::string s;
    for (const auto& x : R.elements()) s += (s.empty() ? "" : ",") + to_string(x);
    return s;
}

long measured_zeros(const CosinePolynomial& f, bool& exact) {
    exact = f.degree() <= 2000;
    if (exact) return count_distinct_zeros(f).distinct_zero_count;
    return count_zeros_fast(f, detail::grid_for(f.degree(), 0)).lower_bound;
}

BoundReport floor_report(const std::map<std::string, std::string>& params, const PolyInput& poly) {
    BoundReport rep;
    rep.bound_name = "restricted-zero-floor";
    std::optional<CosinePolynomial> f;
    std::optional<CoefficientSet> R;
    Tower f0;
    if (poly.given()) {
        f = poly.get();
        std::vector<Rational> vals = f->coeffs();
        R = CoefficientSet(vals);
        f0 = Tower::of(abs_value(f->value_at_zero()), MPFR_RNDD);
        rep.inputs["f0"] = to_string(f->value_at_zero());
    }
    if (params.count("R")) R = parse_set(params.at("R"));
    if (params.count("f0")) {
        const Rational v = parse_rational(params.at("f0"));
        f0 = Tower::of(abs_value(v), MPFR_RNDD);
        rep.inputs["f0"] = to_string(v);
    } else if (params.count("f0_tower")) {
        // height:top means 2^2^...^top with `height` twos
        const auto& s = params.at("f0_tower");
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("f0_tower must be height:top");
        f0 = Tower::power(static_cast<unsigned>(std::stoul(s.substr(0, colon))), std::stod(s.substr(colon + 1)));
        rep.inputs["f0_tower"] = s;
    } else if (!f) {
        throw std::invalid_argument("floor needs f0=<rational>, f0_tower=<height>:<top>, or a polynomial");
    }
    if (!R) throw std::invalid_argument("floor needs R=<comma-separated rationals> or a polynomial");
    const auto st = coefficient_stats(*R);
    rep.inputs["R"] = set_string(*R);
    rep.inputs["M"] = to_string(st.M);
    rep.inputs["D"] = st.D.get_str();
    rep.inputs["cardinality"] = st.cardinality;
    const auto b = restricted_zero_bound(f0, *R);
    rep.bound_value = format_double(b.value);
    rep.bound_double = b.value;
    rep.note = b.below_threshold ? b.note : "floor(ratio) = " + b.floor_ratio.get_str();
    if (f) {
        bool exact = false;
        rep.measured = static_cast<double>(measured_zeros(*f, exact));
        rep.tolerance = exact ? "0; exact distinct-zero count against the rounded-down floor"
                              : "0; certified lower bound on the zero count against the rounded-down floor";
        rep.satisfied = *rep.measured >= b.value;
    }
    return rep;
}

BoundReport mps_report(const PolyInput& poly) {
    BoundReport rep;
    rep.bound_name = "mps";
    const auto f = poly.get();
    rep.inputs["degree"] = f.degree();
    const auto c = mps_check(f);
    rep.bound_value = decimal(c.bound);
    rep.bound_double = mps_bound_down(f);
    rep.inputs["bound_exact"] = to_string(c.bound);
    rep.measured = c.l1.lower;
    rep.tolerance = "0; measured is the lower end of a rigorous enclosure of the L1 norm over [0, 2 pi]";
    rep.satisfied = c.holds;
    return rep;
}

BoundReport support_report(const std::map<std::string, std::string>& params) {
    BoundReport rep;
    rep.bound_name = "support";
    for (const char* key : {"k", "R", "eps"})
        if (!params.count(key)) throw std::invalid_argument(std::string("support needs ") + key + "=...");
    const long k = std::stol(params.at("k"));
    const auto R = parse_set(params.at("R"));
    const Rational eps = parse_rational(params.at("eps"));
    rep.inputs["k"] = k;
    rep.inputs["R"] = set_string(R);
    rep.inputs["eps"] = to_string(eps);
    const auto b = support_bound(k, R, eps);
    rep.bound_value = format_double(b.log_log_support);
    rep.bound_double = b.log_log_support;
    rep.inputs["degree_bound"] = b.degree_bound;
    rep.note = "bound on log2 log2 of the support size of Q S_D f; values rounded up";
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coszero: zeros of cosine polynomials with restricted coefficients"};
    app.require_subcommand(1);

    // count-zeros
    auto* cz = app.add_subcommand("count-zeros", "count distinct zeros on [0, 2 pi)");
    PolyInput cz_in;
    cz_in.add(cz);
    bool cz_fast = false;
    std::size_t cz_grid = 0;
    std::string cz_out;
    cz->add_flag("--fast", cz_fast, "FFT grid lower bound instead of the exact count");
    cz->add_option("--grid", cz_grid, "grid size for --fast (default: power of two >= 8 (deg + 1))");
    cz->add_option("--output", cz_out, "output file (default stdout)");

    // decompose
    auto* dc = app.add_subcommand("decompose", "periodic decomposition of a sequence from its window kernel");
    std::string dc_file, dc_seq, dc_out;
    std::size_t dc_window = 0;
    bool dc_short = false;
    long dc_cap = 10000;
    dc->add_option("--input", dc_file, "JSON file: {\"sequence\": [...]} or a polynomial (its coefficients)");
    dc->add_option("--sequence", dc_seq, "comma-separated sequence");
    dc->add_option("--window", dc_window, "window size d")->required();
    dc->add_flag("--allow-short", dc_short, "verify on this input even below the length hypothesis");
    dc->add_option("--max-conductor", dc_cap, "largest cyclotomic conductor to build");
    dc->add_option("--output", dc_out, "output file (default stdout)");

    // bound
    auto* bd = app.add_subcommand("bound", "evaluate an explicit bound");
    std::string bd_which, bd_out;
    std::vector<std::string> bd_params;
    PolyInput bd_in;
    bd->add_option("--which", bd_which, "floor | mps | support")->required()->check(CLI::IsMember({"floor", "mps", "support"}));
    bd->add_option("--params", bd_params, "key=value: f0, f0_tower=height:top, R=a,b,...; k, eps for support");
    bd_in.add(bd);
    bd->add_option("--output", bd_out, "output file (default stdout)");

    // verify
    auto* vf = app.add_subcommand("verify", "run every verification suite");
    std::string vf_scale = "quick", vf_fault, vf_out;
    std::uint64_t vf_seed = 1;
    vf->add_option("--scale", vf_scale, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    vf->add_option("--seed", vf_seed, "seed");
    vf->add_option("--inject-fault", vf_fault, "sabotage a suite on purpose: killing")->check(CLI::IsMember({"killing"}));
    vf->add_option("--output", vf_out, "output file (default stdout)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "zero counts over a family of sets, as CSV");
    SweepOptions so;
    std::string sw_family = "random-subset", sw_out, sw_plot;
    sw->add_option("--family", sw_family, "random-subset | interval | arithmetic-progression")
        ->check(CLI::IsMember({"random-subset", "interval", "arithmetic-progression"}));
    sw->add_option("--n-min", so.n_min, "smallest |A|");
    sw->add_option("--n-max", so.n_max, "largest |A|");
    sw->add_option("--trials", so.trials, "number of rows");
    sw->add_option("--seed", so.seed, "seed");
    sw->add_option("--universe", so.universe, "random subsets of [0, universe] (default 4N)");
    sw->add_option("--grid", so.grid, "fast-path grid size");
    sw->add_option("--exact-max-degree", so.exact_max_degree, "exact count up to this degree, fast path above");
    sw->add_flag("--timing", so.timing, "fill runtime_ms (output then depends on the machine)");
    sw->add_option("--threads", so.threads, "worker threads");
    sw->add_option("--time-budget", so.time_budget_s, "stop starting trials after this many seconds");
    sw->add_option("--output", sw_out, "CSV file (default stdout)");
    sw->add_option("--plot-data", sw_plot, "two-column N / zeros file for gnuplot");

    // search
    auto* se = app.add_subcommand("search", "local search for sets A with few zeros");
    SearchOptions seo;
    std::string se_strategy = "flip", se_out, se_plot;
    se->add_option("--n", seo.N, "|A|")->required();
    se->add_option("--iterations", seo.iterations, "iterations");
    se->add_option("--seed", seo.seed, "seed");
    se->add_option("--strategy", se_strategy, "flip | swap | anneal")->check(CLI::IsMember({"flip", "swap", "anneal"}));
    se->add_option("--universe", seo.universe, "A in [0, universe] (default 2N)");
    se->add_option("--grid", seo.grid, "fast-path grid size");
    se->add_option("--output", se_out, "JSON file (default stdout)");
    se->add_option("--plot-data", se_plot, "two-column iteration / best-zeros file for gnuplot");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cz->parsed()) {
            const auto f = cz_in.get();
            if (cz_fast)
                emit(fast_count_to_json(f, count_zeros_fast(f, detail::grid_for(f.degree(), cz_grid))), cz_out);
            else
                emit(zero_certificate_to_json(f, count_distinct_zeros(f)), cz_out);
        } else if (dc->parsed()) {
            RationalVector x;
            if (!dc_file.empty())
                x = sequence_from_json(read_json_file(dc_file));
            else
                for (const auto& s : PolyInput::split(dc_seq)) x.push_back(parse_rational(s));
            ExpressOptions opt;
            opt.allow_short = dc_short;
            opt.max_conductor = dc_cap;
            emit(decomposition_to_json(periodic_decompose(x, dc_window, opt)), dc_out);
        } else if (bd->parsed()) {
            const auto params = parse_params(bd_params);
            BoundReport rep = bd_which == "floor" ? floor_report(params, bd_in) : bd_which == "mps" ? mps_report(bd_in) : support_report(params);
            emit(to_json(rep), bd_out);
            return rep.satisfied ? 0 : 1;
        } else if (vf->parsed()) {
            VerifyOptions opt;
            opt.seed = vf_seed;
            opt.scale = parse_scale(vf_scale);
            opt.inject_killing_fault = vf_fault == "killing";
            const auto rep = verify_all(opt);
            emit(to_json(rep), vf_out);
            return rep.passed ? 0 : 1;
        } else if (sw->parsed()) {
            so.family = parse_family(sw_family);
            const auto res = sweep(so);
            write_text(sw_out, sweep_csv(res));
            if (!sw_plot.empty()) write_text(sw_plot, sweep_plot_data(res));
            if (!res.all_satisfied) {
                std::cerr << "error: a row has fewer zeros than the zero floor\n";
                return 1;
            }
            return res.partial ? 3 : 0;
        } else if (se->parsed()) {
            seo.strategy = parse_strategy(se_strategy);
            const auto st = search_min_zeros(seo);
            emit(to_json(st, seo), se_out);
            if (!se_plot.empty()) write_text(se_plot, search_plot_data(st));
        }
    } catch (const std::exception& e) {
        Json err{{"schema", kSchema}, {"error", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 2;
    }
    return 0;
}

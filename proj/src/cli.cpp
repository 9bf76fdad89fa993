#include "tate/cli.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tate/harness.hpp"
#include "tate/oracles.hpp"

namespace tate {

namespace {

std::vector<std::string> split_list(const std::string &text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

Scalar parse_rational(const std::string &text)
{
    Scalar q;
    if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0) {
        throw ParseError("\"" + text + "\" is not an integer or fraction", 0);
    }
    q.canonicalize();
    return q;
}

json map_summary(const PolyMap &f)
{
    json comps = json::array();
    for (const auto &c : f.components()) {
        comps.push_back(c.to_string());
    }
    return comps;
}

void emit(std::ostream &out, const ExperimentReport &r, bool as_json)
{
    if (as_json) {
        out << r.to_json().dump(2) << "\n";
    } else {
        out << r.to_text();
    }
}

struct Common {
    bool as_json = false;
};

PolyMap map_input(const std::string &map_path, const std::string &literal, const std::string &domain_text,
                  unsigned cap)
{
    if (!map_path.empty()) {
        return load_map_file(map_path);
    }
    if (literal.empty()) {
        throw ContractError("give --map FILE or --series LITERAL");
    }
    // Components separated by ';' for quick multivariate input.
    const Domain domain = parse_domain(domain_text);
    std::vector<std::string> parts;
    std::stringstream ss(literal);
    for (std::string part; std::getline(ss, part, ';');) {
        parts.push_back(part);
    }
    const unsigned n = static_cast<unsigned>(parts.size());
    std::vector<TateSeries> comps;
    for (const auto &p : parts) {
        comps.push_back(parse_series_literal(p, domain, n, cap));
    }
    return PolyMap(std::move(comps));
}

int cmd_invert(const Common &c, const std::string &map_path, const std::string &literal, const std::string &domain,
               unsigned cap, const std::string &out_path, std::ostream &out)
{
    PolyMap f = map_input(map_path, literal, domain, std::max(cap, 16u));
    if (cap == 0) {
        cap = f.cap();
    }
    PolyMap g = invert_map(f, cap);

    ExperimentReport r;
    r.kind = "invert";
    r.domain = domain_to_json(f.domain());
    r.inputs = json{{"map", map_summary(f)}, {"D", cap}};
    r.outcome = json{{"inverse", map_summary(g)}, {"inverse_is_polynomial", g.is_polynomial()}};
    const PolyMap fc = f.recapped(std::min(f.cap(), cap));
    if (g.is_polynomial() && f.is_polynomial()) {
        const bool right = is_identity(PolyMap(substitute_all(fc.components(), g.components())));
        const bool left = is_identity(PolyMap(substitute_all(g.components(), fc.components())));
        r.outcome["F_o_G_is_identity"] = right;
        r.outcome["G_o_F_is_identity"] = left;
        r.oracles.push_back("polynomial inverse certified by untruncated composition of the normalized map");
        r.oracles.push_back("F o G and G o F recomputed and compared with X modulo degree " + std::to_string(g.cap()));
    } else {
        r.outcome["F_o_G_is_identity"] = is_identity(map_compose(fc, g));
        r.outcome["G_o_F_is_identity"] = is_identity(map_compose(g, fc));
        r.oracles.push_back("two-sided composition check modulo degree " + std::to_string(g.cap()));
        r.caveats.push_back("inverse is a truncation below degree " + std::to_string(cap) +
                            "; whether it is a polynomial or a Tate series is not decided here");
    }
    if (!out_path.empty()) {
        write_file(out_path, map_to_json(g).dump(2) + "\n");
    }
    emit(out, r, c.as_json);
    return 0;
}

int cmd_unit_check(const Common &c, const std::string &literal, const std::string &domain_text, unsigned cap,
                   unsigned n, std::ostream &out)
{
    const Domain domain = parse_domain(domain_text);
    TateSeries f = parse_series_literal(literal, domain, n, cap);
    UnitCertificate cert = tate_is_unit(f);

    ExperimentReport r;
    r.kind = "unit_check";
    r.domain = domain_to_json(domain);
    r.inputs = json{{"series", f.to_string()}, {"D", cap}};
    r.outcome = json{{"verdict", cert.is_unit ? "unit" : "not a unit"}, {"certificate", cert.reason}};
    if (cert.violating) {
        r.outcome["violating_monomial"] = cert.violating->to_string(f.nvars());
    }
    r.oracles.push_back("unit criterion: constant term a unit, other coefficients in the radical of I");
    if (cert.is_unit) {
        TateSeries inv = tate_invert_unit(f);
        TateSeries product = series_mul(f, inv);
        const bool one = product == TateSeries::constant(domain, f.nvars(), product.cap(), Scalar(1));
        r.outcome["inverse"] = inv.to_string();
        r.outcome["inverse_json"] = series_to_json(inv);
        r.outcome["product_is_one"] = one;
        r.oracles.push_back("f * f^-1 recomputed and compared with 1 modulo degree " + std::to_string(product.cap()));
    }
    emit(out, r, c.as_json);
    return 0;
}

json ledger_json(const LiftResult &lift)
{
    json ledger = json::array();
    for (const auto &s : lift.ledger) {
        ledger.push_back(
            json{{"step", s.step}, {"error_valuation", valuation_to_json(s.error_valuation)}, {"required", s.required}});
    }
    return ledger;
}

int cmd_lift(const Common &c, const std::string &map_path, const std::string &g0_path, unsigned precision,
             const std::string &out_path, std::ostream &out)
{
    PolyMap f = load_map_file(map_path);
    PolyMap g0 = load_map_file(g0_path);
    if (precision == 0) {
        precision = f.domain().is_truncated() ? f.domain().precision() : 8;
    }
    LiftResult lift = adic_lift_inverse(f, g0, precision);

    ExperimentReport r;
    r.kind = "lift";
    r.domain = domain_to_json(f.domain());
    r.inputs = json{{"map", map_summary(f)}, {"g0", map_summary(g0)}, {"precision", precision}};
    r.outcome = json{{"inverse", map_summary(lift.inverse)}, {"steps", lift.ledger.size() - 1},
                     {"ledger", ledger_json(lift)}};
    r.oracles.push_back("each step: min valuation of G_k o F - X checked against min(2^k, N)");
    if (!out_path.empty()) {
        write_file(out_path, map_to_json(lift.inverse).dump(2) + "\n");
    }
    emit(out, r, c.as_json);
    return 0;
}

int cmd_transfer(const Common &c, const std::string &map_path, const TransferOptions &options, std::ostream &out)
{
    PolyMap f = load_map_file(map_path);
    TransferReport t = transfer_check(f, options);

    ExperimentReport r;
    r.kind = "transfer";
    r.domain = domain_to_json(f.domain());
    r.inputs = json{{"map", map_summary(f)}, {"D", options.cap}};
    r.outcome = json{{"invertible_mod_I", t.invertible_mod_i}, {"conclusive", t.conclusive}};
    if (t.residue_inverse) {
        r.outcome["residue_inverse"] = map_summary(*t.residue_inverse);
    }
    if (t.lifted) {
        r.outcome["lifted_inverse"] = map_summary(t.lifted->inverse);
        r.outcome["lift_ledger"] = ledger_json(*t.lifted);
        r.oracles.push_back("lifted inverse checked step by step against the doubling bound");
    }
    if (!t.obstruction.empty()) {
        r.outcome["obstruction"] = t.obstruction;
    }
    for (const auto &note : t.notes) {
        r.oracles.push_back(note);
    }
    if (!t.conclusive) {
        r.caveats.push_back("conclusion rests on the stabilization heuristic, not on a proof");
    }
    emit(out, r, c.as_json);
    return 0;
}

int cmd_profile(const Common &c, const std::string &map_path, std::ostream &out)
{
    PolyMap g = load_map_file(map_path);
    DecayProfile p = decay_profile(g);
    ExperimentReport r;
    r.kind = "profile";
    r.domain = domain_to_json(g.domain());
    r.inputs = json{{"map", map_summary(g)}, {"D", g.cap()}};
    r.outcome = profile_to_json(p);
    r.caveats.push_back("evidence through degree " + std::to_string(g.cap() == 0 ? 0 : g.cap() - 1) +
                        " only; consistent with, not proof of, (non-)membership in the Tate algebra");
    if (c.as_json) {
        emit(out, r, true);
        return 0;
    }
    out << "== profile ==\ndomain: " << g.domain().to_string() << "\n";
    out << "degree  min_valuation  tail_floor\n";
    for (std::size_t d = 0; d < p.per_degree.size(); ++d) {
        out << std::to_string(d) << std::string(8 - std::min<std::size_t>(7, std::to_string(d).size()), ' ')
            << p.per_degree[d].to_string()
            << std::string(15 - std::min<std::size_t>(14, p.per_degree[d].to_string().size()), ' ')
            << p.tail_floor[d].to_string() << "\n";
    }
    for (const auto &cv : r.caveats) {
        out << "caveat: " << cv << "\n";
    }
    return 0;
}

struct WitnessArgs {
    std::string map_path;
    std::string literal;
    std::string domain;
    unsigned p = 0;
    std::string primes;
    unsigned precision = 0;
    unsigned cap = 16;
    std::string point;
    unsigned jobs = 1;
};

int cmd_witness(const Common &c, const WitnessArgs &a, std::ostream &out)
{
    PolyMap f = map_input(a.map_path, a.literal, a.domain.empty() ? "q" : a.domain, std::max(a.cap, 16u));
    std::optional<std::vector<Scalar>> point;
    if (!a.point.empty()) {
        std::vector<Scalar> v;
        for (const auto &s : split_list(a.point)) {
            v.push_back(parse_rational(s));
        }
        point = v;
    }
    std::vector<unsigned long> primes;
    if (a.p != 0) {
        primes.push_back(a.p);
    }
    for (const auto &s : split_list(a.primes)) {
        primes.push_back(std::stoul(s));
    }
    const unsigned precision =
        a.precision != 0 ? a.precision : (f.domain().is_truncated() ? f.domain().precision() : 4);

    if (primes.empty()) {
        WitnessOutcome w = unimodular_witness(f, a.cap, point);
        emit(out, witness_report(f, a.cap, w), c.as_json);
        return 0;
    }
    auto run_one = [&](unsigned long p) {
        PolyMap fp = change_domain(f, Domain::truncated_adic(p, precision));
        WitnessOutcome w = unimodular_witness(fp, a.cap, point);
        return witness_report(fp, a.cap, w);
    };
    if (primes.size() == 1) {
        emit(out, run_one(primes.front()), c.as_json);
        return 0;
    }

    // Per-prime experiments are independent; results are stored by index so
    // the aggregate does not depend on scheduling.
    std::vector<json> results(primes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < primes.size(); i = next++) {
            try {
                results[i] = run_one(primes[i]).to_json();
            } catch (const ContractError &e) {
                results[i] = json{{"kind", "unimodular_witness"}, {"p", primes[i]}, {"error", e.what()}};
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(a.jobs, static_cast<unsigned>(primes.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }

    ExperimentReport r;
    r.kind = "unimodular_witness_sweep";
    r.domain = json{{"kind", "truncated_adic"}, {"N", precision}};
    r.inputs = json{{"map", map_summary(f)}, {"primes", primes}, {"D", a.cap}};
    json per = json::array();
    unsigned matched = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        json entry{{"p", primes[i]}};
        if (results[i].contains("error")) {
            entry["error"] = results[i]["error"];
        } else {
            entry["b"] = results[i]["outcome"]["b"];
            entry["F(b)"] = results[i]["outcome"]["F(b)"];
            entry["matches_point"] = results[i]["outcome"]["matches_point"];
            entry["unimodular"] = results[i]["outcome"]["unimodular"];
            matched += results[i]["outcome"]["matches_point"].get<bool>() ? 1 : 0;
        }
        per.push_back(entry);
    }
    r.outcome = json{{"per_prime", per}, {"matched", matched}};
    r.oracles.push_back("each F(b) recomputed by direct polynomial evaluation mod p^N");
    r.caveats.push_back("finite list of primes only; no statement about all but finitely many primes");
    emit(out, r, c.as_json);
    return 0;
}

int cmd_char_p(const Common &c, unsigned cc, unsigned n, unsigned cap, std::ostream &out)
{
    emit(out, char_p_report(cc, n, cap), c.as_json);
    return 0;
}

int cmd_lagrange(const Common &c, const std::string &literal, const std::string &domain_text, unsigned cap,
                 std::ostream &out)
{
    const Domain domain = parse_domain(domain_text);
    TateSeries f = parse_series_literal(literal, domain, 1, std::max(cap, 16u));
    TateSeries g = lagrange_oracle(f, cap);
    ExperimentReport r;
    r.kind = "lagrange_oracle";
    r.domain = domain_to_json(domain);
    r.inputs = json{{"series", f.to_string()}, {"D", cap}};
    json coeffs = json::array();
    for (unsigned k = 1; k < cap; ++k) {
        coeffs.push_back(g.coefficient(MultiIndex::from_exponents(std::vector<unsigned>{k})).get_str());
    }
    r.outcome = json{{"inverse", g.to_string()}, {"coefficients", coeffs}};
    const TateSeries fx = f.recapped(cap);
    const TateSeries back = series_compose(fx, std::vector<TateSeries>{g});
    r.outcome["f_of_g_is_x"] = back == TateSeries::variable(domain, 1, cap, 0);
    r.oracles.push_back("[x^k] g = (1/k) [x^(k-1)] (x/f)^k over Q");
    r.oracles.push_back("substitution f(g(x)) compared with x modulo degree " + std::to_string(cap));
    emit(out, r, c.as_json);
    return 0;
}

int cmd_bijective(const Common &c, const std::string &map_path, unsigned long m, unsigned long long budget,
                  std::ostream &out)
{
    PolyMap f = load_map_file(map_path);
    const bool bij = bijectivity_oracle(f, mpz_class(m), budget == 0 ? default_enumeration_budget() : budget);
    ExperimentReport r;
    r.kind = "bijectivity_oracle";
    r.domain = domain_to_json(f.domain());
    r.inputs = json{{"map", map_summary(f)}, {"m", m}};
    r.outcome = json{{"bijective", bij}};
    r.oracles.push_back("exhaustive enumeration of (Z/" + std::to_string(m) + ")^" + std::to_string(f.dim()));
    emit(out, r, c.as_json);
    return 0;
}

int cmd_gen(const Common &c, std::uint64_t seed, unsigned n, unsigned degree, unsigned length,
            const std::string &domain_text, unsigned cap, const std::string &out_path, const std::string &inverse_path,
            std::ostream &out)
{
    const Domain domain = parse_domain(domain_text);
    TamePair pair = generate_tame(seed, n, degree, length, domain, cap);
    const bool verified = is_identity(map_compose(pair.map, pair.inverse)) &&
                          is_identity(map_compose(pair.inverse, pair.map));
    if (!out_path.empty()) {
        write_file(out_path, map_to_json(pair.map).dump(2) + "\n");
    }
    if (!inverse_path.empty()) {
        write_file(inverse_path, map_to_json(pair.inverse).dump(2) + "\n");
    }
    ExperimentReport r;
    r.kind = "generate_tame";
    r.domain = domain_to_json(domain);
    r.inputs = json{{"seed", seed}, {"n", n}, {"degree_bound", degree}, {"length", length}, {"D", cap}};
    r.outcome = json{{"map", map_summary(pair.map)},
                     {"inverse", map_summary(pair.inverse)},
                     {"compositions_are_identity", verified},
                     {"map_json", map_to_json(pair.map)},
                     {"inverse_json", map_to_json(pair.inverse)}};
    r.oracles.push_back("F o G and G o F recomputed and compared with X modulo degree " + std::to_string(cap));
    if (!pair.map.is_polynomial() || !pair.inverse.is_polynomial()) {
        r.caveats.push_back("degree exceeded the cap; maps are truncations");
    }
    emit(out, r, c.as_json);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Tate algebra and Jacobian-map toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_flag("--json", common.as_json, "Print the report as JSON");

    std::string map_path, literal, domain = "q", out_path;
    unsigned cap = 0;

    auto *invert = app.add_subcommand("invert", "Formal inverse of a map (normalizing first)");
    invert->add_option("--map", map_path, "Map JSON file");
    invert->add_option("--series", literal, "Inline components separated by ';'");
    invert->add_option("--domain", domain, "Domain for --series (z-adic:m:N, z-exact:m, q)");
    invert->add_option("--degree,-D,--D", cap, "Degree cap of the inverse (default: the map's cap)");
    invert->add_option("--out", out_path, "Write the inverse map JSON here");

    std::string uc_series, uc_domain = "q";
    unsigned uc_cap = 16, uc_n = 0;
    auto *unit = app.add_subcommand("unit-check", "Tate unit criterion and constructive inverse");
    unit->add_option("--series", uc_series, "Inline series")->required();
    unit->add_option("--domain", uc_domain, "Domain (z-adic:m:N, z-exact:m, q)");
    unit->add_option("--D,-D,--degree", uc_cap, "Degree cap");
    unit->add_option("--n", uc_n, "Variable count (default: inferred)");

    std::string g0_path;
    unsigned lift_precision = 0;
    std::string lift_out;
    auto *lift = app.add_subcommand("lift", "I-adic lifting of an inverse modulo I");
    lift->add_option("--map", map_path, "Map JSON file")->required();
    lift->add_option("--g0", g0_path, "Inverse modulo I (map JSON file)")->required();
    lift->add_option("--precision,--N", lift_precision, "Target precision N");
    lift->add_option("--out", lift_out, "Write the lifted inverse here");

    TransferOptions topts;
    auto *transfer = app.add_subcommand("transfer", "Invertibility of F mod I and lifting");
    transfer->add_option("--map", map_path, "Map JSON file")->required();
    transfer->add_option("--D,-D,--degree", topts.cap, "Degree cap for the residue inverse");
    transfer->add_option("--window", topts.window, "Stabilization window (default D/2)");
    transfer->add_option("--precision,--N", topts.target_precision, "Lifting precision");
    transfer->add_option("--budget", topts.enumeration_budget, "Enumeration budget");
    topts.enumeration_budget = default_enumeration_budget();

    auto *profile = app.add_subcommand("profile", "Per-degree coefficient valuations");
    profile->add_option("--map", map_path, "Map JSON file")->required();

    WitnessArgs wa;
    auto *witness = app.add_subcommand("witness", "Unimodular witness b = G(1)");
    witness->add_option("--map", wa.map_path, "Map JSON file");
    witness->add_option("--series", wa.literal, "Inline components separated by ';'");
    witness->add_option("--domain", wa.domain, "Domain for --series");
    witness->add_option("--p", wa.p, "Prime p (recasts the map over Z/p^N)");
    witness->add_option("--primes", wa.primes, "Comma-separated primes");
    witness->add_option("--N", wa.precision, "Precision N");
    witness->add_option("--D,-D,--degree", wa.cap, "Degree cap of the inverse");
    witness->add_option("--point", wa.point, "Target point, comma-separated (default all ones)");
    witness->add_option("--jobs", wa.jobs, "Parallel workers for a prime list");

    unsigned cp_c = 2, cp_n = 1, cp_cap = 64;
    auto *charp = app.add_subcommand("char-p", "Diagnostics for F = (X_i - X_i^c)");
    charp->add_option("--c", cp_c, "Characteristic c >= 2");
    charp->add_option("--n", cp_n, "Dimension");
    charp->add_option("--D,-D,--degree", cp_cap, "Degree cap");

    auto *oracle = app.add_subcommand("oracle", "Independent oracles");
    oracle->require_subcommand(1);
    std::string lg_series, lg_domain = "q";
    unsigned lg_cap = 8;
    auto *lagrange = oracle->add_subcommand("lagrange", "Lagrange inversion of a univariate series");
    lagrange->add_option("--series", lg_series, "Inline series")->required();
    lagrange->add_option("--domain", lg_domain, "q or z-exact:m");
    lagrange->add_option("--D,-D,--degree", lg_cap, "Degree cap");
    unsigned long bj_m = 2;
    unsigned long long bj_budget = 0;
    auto *bijective = oracle->add_subcommand("bijective", "Exhaustive bijectivity on (Z/m)^n");
    bijective->add_option("--map", map_path, "Map JSON file")->required();
    bijective->add_option("--m", bj_m, "Modulus")->required();
    bijective->add_option("--budget", bj_budget, "Enumeration budget");

    std::uint64_t gen_seed = 1;
    unsigned gen_n = 2, gen_degree = 2, gen_length = 3, gen_cap = 16;
    std::string gen_domain = "q", gen_out, gen_inverse;
    auto *gen = app.add_subcommand("gen", "Random tame automorphism with its inverse");
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_option("--n", gen_n, "Dimension");
    gen->add_option("--degree", gen_degree, "Degree bound of elementary factors");
    gen->add_option("--length", gen_length, "Number of factors");
    gen->add_option("--domain", gen_domain, "Domain");
    gen->add_option("--D,-D", gen_cap, "Degree cap");
    gen->add_option("--out", gen_out, "Write the map JSON here");
    gen->add_option("--inverse-out", gen_inverse, "Write the inverse JSON here");

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("tate");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &s : storage) {
        argv.push_back(s.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*invert) {
            return cmd_invert(common, map_path, literal, domain, cap, out_path, out);
        }
        if (*unit) {
            return cmd_unit_check(common, uc_series, uc_domain, uc_cap, uc_n, out);
        }
        if (*lift) {
            return cmd_lift(common, map_path, g0_path, lift_precision, lift_out, out);
        }
        if (*transfer) {
            return cmd_transfer(common, map_path, topts, out);
        }
        if (*profile) {
            return cmd_profile(common, map_path, out);
        }
        if (*witness) {
            return cmd_witness(common, wa, out);
        }
        if (*charp) {
            return cmd_char_p(common, cp_c, cp_n, cp_cap, out);
        }
        if (*lagrange) {
            return cmd_lagrange(common, lg_series, lg_domain, lg_cap, out);
        }
        if (*bijective) {
            return cmd_bijective(common, map_path, bj_m, bj_budget, out);
        }
        if (*gen) {
            return cmd_gen(common, gen_seed, gen_n, gen_degree, gen_length, gen_domain, gen_cap, gen_out, gen_inverse,
                           out);
        }
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const IoError &e) {
        err << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error &e) {
        err << "internal check failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace tate

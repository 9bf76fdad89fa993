#include <doctest.h>

#include <cstdlib>

#include "support.hpp"

using namespace tate;
using namespace testing_support;

namespace {

bool is_prime(long p)
{
    if (p < 2) {
        return false;
    }
    for (long d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

// Evaluates a map at an integer point by plain integer arithmetic mod m.
std::vector<mpz_class> eval_mod(const PolyMap &f, const std::vector<mpz_class> &x, const mpz_class &m)
{
    std::vector<mpz_class> out;
    for (const auto &c : f.components()) {
        mpz_class acc = 0;
        for (const auto &t : c.terms()) {
            mpz_class v = t.coeff.get_num();
            for (unsigned i = 0; i < f.dim(); ++i) {
                mpz_class p;
                mpz_pow_ui(p.get_mpz_t(), x[i].get_mpz_t(), t.index.exponent(i));
                v *= p;
            }
            acc += v;
        }
        acc %= m;
        if (acc < 0) {
            acc += m;
        }
        out.push_back(acc);
    }
    return out;
}

} // namespace

TEST_CASE("Lagrange oracle")
{
    const Domain q = qdom();
    const TateSeries g = lagrange_oracle(lit("x - x^2", q, 1, 8), 7);
    for (unsigned k = 1; k < 7; ++k) {
        CHECK(coef1(g, k) == Scalar(catalan(k - 1)));
    }
    // Substituting back.
    CHECK(series_compose(lit("x - x^2", q, 1, 7), std::vector<TateSeries>{g}) == lit("x", q, 1, 7));
    CHECK(lagrange_oracle(lit("x", q, 1, 8), 8) == lit("x", q, 1, 8));
    CHECK(lagrange_oracle(lit("2x", q, 1, 8), 8) == lit("x/2", q, 1, 8));
    const TateSeries gz = lagrange_oracle(lit("x - x^2", zexact(2), 1, 12), 12);
    CHECK(gz.domain() == zexact(2));
    for (unsigned k = 1; k < 12; ++k) {
        CHECK(coef1(gz, k) == Scalar(catalan(k - 1)));
    }

    CHECK_THROWS_WITH_AS(lagrange_oracle(lit("2x", zexact(3), 1, 8), 8), doctest::Contains("unit"), ContractError);
    CHECK_THROWS_AS(lagrange_oracle(lit("1 + x", q, 1, 8), 8), ContractError);
    CHECK_THROWS_AS(lagrange_oracle(lit("x", zadic(5, 2), 1, 8), 8), ContractError);
    CHECK_THROWS_AS(lagrange_oracle(lit("x1", q, 2, 8), 8), ContractError);
}

TEST_CASE("bijectivity oracle")
{
    CHECK(bijectivity_oracle(map_of({"x^3"}, zadic(2, 1), 8), 2));
    CHECK_FALSE(bijectivity_oracle(map_of({"x^2"}, zadic(3, 1), 8), 3));
    for (long m : {2, 6, 7, 10}) {
        CHECK(bijectivity_oracle(PolyMap::identity(zexact(m), 3, 4), m));
    }
    CHECK(bijectivity_oracle(map_of({"x1 + x2^2", "x2"}, qdom(), 8), 5));
    CHECK_THROWS_WITH_AS(bijectivity_oracle(PolyMap::identity(zexact(10), 4, 4), 10, 1000),
                         doctest::Contains("budget"), ContractError);
    CHECK_THROWS_AS(bijectivity_oracle(map_of({"x"}, zexact(2), 4).recapped(4), 1), ContractError);

    setenv("TATE_ENUMERATION_BUDGET", "50", 1);
    CHECK(default_enumeration_budget() == 50);
    CHECK_THROWS_AS(bijectivity_oracle(PolyMap::identity(zexact(10), 2, 4), 10), ContractError);
    setenv("TATE_ENUMERATION_BUDGET", "junk", 1);
    CHECK(default_enumeration_budget() == kDefaultEnumerationBudget);
    unsetenv("TATE_ENUMERATION_BUDGET");
}

TEST_CASE("tame generator")
{
    const Domain q = qdom();
    const TamePair e = elementary_map(q, 2, 8, 0, lit("x2^2", q, 2, 8));
    CHECK(e.map == map_of({"x1 + x2^2", "x2"}, q, 8));
    CHECK(e.inverse == map_of({"x1 - x2^2", "x2"}, q, 8));
    CHECK_THROWS_AS(elementary_map(q, 2, 8, 0, lit("x1^2", q, 2, 8)), ContractError);
    CHECK_THROWS_AS(elementary_map(q, 2, 8, 0, lit("1 + x2", q, 2, 8)), ContractError);

    const TamePair id = generate_tame(9, 3, 3, 0, q, 8);
    CHECK(is_identity(id.map));
    CHECK(is_identity(id.inverse));

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Domain d = std::vector<Domain>{q, zexact(3), zadic(5, 4)}[seed % 3];
        const TamePair p = generate_tame(seed, 1 + seed % 3, 3, 4, d, 16);
        CHECK(is_identity(map_compose(p.map, p.inverse)));
        CHECK(is_identity(map_compose(p.inverse, p.map)));
        CHECK(p.map.constant_terms() == std::vector<Scalar>(p.map.dim(), 0));
        const TateSeries dj = det(jacobian(p.map));
        CHECK(dj.max_degree() <= 0);
        CHECK(d.is_unit(dj.constant_term()));
    }
    // Same seed, same pair.
    CHECK(generate_tame(5, 2, 3, 5, q, 12).map == generate_tame(5, 2, 3, 5, q, 12).map);
}

TEST_CASE("unimodular witness for x + 5x^2")
{
    const Domain d = zadic(5, 4);
    const PolyMap f = map_of({"x + 5x^2"}, d, 16);
    const WitnessOutcome w = unimodular_witness(f, 16);
    REQUIRE(w.b.size() == 1);
    const mpz_class b = w.b[0].value().get_num();
    // Integer recheck of the emitted b.
    CHECK((b + 5 * b * b - 1) % 625 == 0);
    CHECK(b == 46);
    CHECK(w.matches_target);
    CHECK(w.unimodular);
    CHECK(w.agreement.is_top());
    CHECK(w.image[0].value() == 1);
}

TEST_CASE("witness trivial cases and errors")
{
    const Domain d7 = zadic(7, 3);
    const WitnessOutcome id = unimodular_witness(PolyMap::identity(d7, 3, 8), 8);
    for (const auto &v : id.b) {
        CHECK(v.value() == 1);
    }
    CHECK(id.matches_target);
    CHECK(id.exact);

    for (long p : {2, 3, 11}) {
        const WitnessOutcome e = unimodular_witness(map_of({"x1 + x2^2", "x2"}, zadic(p, 2), 8), 8);
        CHECK(e.b[0].value() == 0);
        CHECK(e.b[1].value() == 1);
        CHECK(e.image[0].value() == 1);
        CHECK(e.image[1].value() == 1);
    }

    // Nonzero F(0) is translated away.
    const WitnessOutcome s = unimodular_witness(map_of({"3 + x + 5x^2"}, zadic(5, 4), 16), 16);
    CHECK(s.matches_target);

    CHECK_THROWS_WITH_AS(unimodular_witness(map_of({"x"}, zadic(6, 2), 8), 8), doctest::Contains("prime"),
                         ContractError);
    CHECK_THROWS_WITH_AS(unimodular_witness(map_of({"x + x^2"}, zadic(5, 2), 8), 8),
                         doctest::Contains("not a Tate unit"), ContractError);
    CHECK_THROWS_AS(unimodular_witness(map_of({"x"}, zexact(5), 8), 8), ContractError);
}

TEST_CASE("characteristic-c diagnostics")
{
    const CharPOutcome c2 = char_p_outcome(2, 1, 64);
    CHECK(c2.jacobian_det == lit("1 - 2x", zexact(2), 1, 63));
    CHECK(c2.det_certificate.is_unit);
    CHECK(c2.oracle_agrees);
    REQUIRE(c2.catalan_parity_agrees.has_value());
    CHECK(*c2.catalan_parity_agrees);
    std::vector<unsigned> odd;
    for (unsigned k = 1; k < 64; ++k) {
        if (catalan(k - 1) % 2 == 1) {
            odd.push_back(k);
        }
    }
    CHECK(c2.profile.valuation_zero_degrees == odd);

    const CharPOutcome c3 = char_p_outcome(3, 2, 10);
    CHECK(c3.jacobian_det == lit("(1 - 3x1^2)(1 - 3x2^2)", zexact(3), 2, 9));
    CHECK(c3.det_certificate.is_unit);
    CHECK(c3.oracle_agrees);
    CHECK_FALSE(c3.catalan_parity_agrees.has_value());
    bool late_unit = false;
    for (unsigned k : c3.profile.valuation_zero_degrees) {
        late_unit = late_unit || k >= 3;
    }
    CHECK(late_unit);
    // Coordinatewise: each component is the univariate inverse of x - x^3.
    const TateSeries uni = lagrange_oracle(lit("x - x^3", zexact(3), 1, 10), 10);
    for (unsigned k = 1; k < 10; ++k) {
        CHECK(c3.inverse[0].coefficient(mono({k, 0})) == coef1(uni, k));
        CHECK(c3.inverse[1].coefficient(mono({0, k})) == coef1(uni, k));
    }

    const ExperimentReport r = char_p_report(2, 1, 64);
    CHECK(r.kind == "char_p");
    CHECK(r.outcome["valuation_zero_degrees"] == json::array({1, 2, 4, 8, 16, 32}));
    CHECK(r.outcome["det_is_tate_unit"] == true);
    CHECK_THROWS_AS(char_p_outcome(1, 1, 8), ContractError);
}

TEST_CASE("serialization round trips")
{
    const Domain d = zadic(5, 3);
    CHECK(domain_from_json(domain_to_json(d)) == d);
    CHECK(domain_from_json(domain_to_json(zexact(2))) == zexact(2));
    CHECK(domain_from_json(domain_to_json(qdom())) == qdom());
    CHECK(parse_domain("z-adic:5:3") == d);
    CHECK(parse_domain("z-exact:12") == zexact(12));
    CHECK(parse_domain("q") == qdom());
    CHECK(parse_domain(R"({"kind":"truncated_adic","m":5,"N":3})") == d);
    CHECK_THROWS_AS(parse_domain("z-adic:5"), ParseError);
    CHECK_THROWS_AS(parse_domain("r"), ParseError);

    const TateSeries s = lit("3x1^2 x2 - x2/7 + 4", qdom(), 2, 9);
    CHECK(series_from_json(series_to_json(s), qdom()) == s);
    const PolyMap f = map_of({"x1 + 5x2^2", "x2 - 25x1^3"}, d, 12);
    const PolyMap back = map_from_json(map_to_json(f));
    CHECK(back == f);
    CHECK(back.domain() == d);
    CHECK(back.cap() == 12);
    // Components may be inline strings.
    const PolyMap inl = map_from_json(parse_json_text(
        R"({"domain":{"kind":"exact_integer_adic","m":2},"D":8,"components":["x - x^2"]})"));
    CHECK(inl == map_of({"x - x^2"}, zexact(2), 8));
}

TEST_CASE("literal parser")
{
    const Domain q = qdom();
    CHECK(lit("(x1 + x2)^2", q, 2, 8) == lit("x1^2 + 2x1 x2 + x2^2", q, 2, 8));
    CHECK(lit("x/2 - 3/4", q, 1, 4).coefficient(mono({1})) == Scalar(1, 2));
    CHECK(lit("2*x3", q, 0, 4).nvars() == 3);
    CHECK(lit("1+5x", zadic(5, 3), 0, 4).nvars() == 1);
    CHECK(lit("x^20", q, 1, 8).is_zero());
    CHECK_FALSE(lit("x^20", q, 1, 8).is_polynomial());
    try {
        lit("1 + * x", q, 1, 4);
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(lit("x9", q, 0, 4), ParseError);
    CHECK_THROWS_AS(lit("x2", q, 1, 4), ParseError);
    CHECK_THROWS_AS(lit("(x", q, 1, 4), ParseError);
    CHECK_THROWS_AS(lit("x/0", q, 1, 4), ParseError);
    try {
        parse_json_text("{\"a\": [1, 2,, 3]}");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("reports")
{
    const ExperimentReport r = witness_report(map_of({"x + 5x^2"}, zadic(5, 4), 16), 16,
                                              unimodular_witness(map_of({"x + 5x^2"}, zadic(5, 4), 16), 16));
    const json j = r.to_json();
    CHECK(j["kind"] == "unimodular_witness");
    CHECK(j["outcome"]["b"] == json::array({"46"}));
    CHECK_FALSE(j["oracles"].empty());
    CHECK_FALSE(j["caveats"].empty());
    CHECK(r.to_text().find("b: [\"46\"]") != std::string::npos);
}

TEST_CASE("property: formal inverse agrees with the Lagrange oracle")
{
    std::mt19937_64 rng(83);
    std::uniform_int_distribution<long> num(-6, 6), den(1, 4);
    for (int i = 0; i < 40; ++i) {
        std::vector<Term> ts{{mono({1}), 1}};
        const unsigned deg = 2 + rng() % 4;
        for (unsigned k = 2; k <= deg; ++k) {
            ts.push_back(Term{mono({k}), Scalar(num(rng), den(rng))});
        }
        const unsigned cap = 6 + rng() % 7;
        const TateSeries f = TateSeries::from_terms(qdom(), 1, cap, ts);
        CHECK(formal_inverse(PolyMap({f}), cap)[0] == lagrange_oracle(f, cap));
    }
}

TEST_CASE("property: witness is exact on generated tame maps")
{
    std::uint64_t seed = 1;
    for (long p = 2; p <= 97; ++p) {
        if (!is_prime(p)) {
            continue;
        }
        for (unsigned n = 1; n <= 3; ++n, ++seed) {
            const Domain d = zadic(p, 3);
            const TamePair t = generate_tame(seed, n, 2, 3, d, 16);
            REQUIRE(t.map.is_polynomial());
            const WitnessOutcome w = unimodular_witness(t.map, 16);
            CHECK(w.matches_target);
            CHECK(w.agreement.is_top());
            std::vector<mpz_class> b;
            for (const auto &e : w.b) {
                b.push_back(e.value().get_num());
            }
            CHECK(eval_mod(t.map, b, d.modulus_power()) == std::vector<mpz_class>(n, 1));
        }
    }
}

TEST_CASE("property: generated tame maps reduce to bijections")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const long p = std::vector<long>{2, 3, 5, 7}[seed % 4];
        const TamePair t = generate_tame(seed, 1 + seed % 3, 3, 3, zexact(p), 16);
        if (t.map.is_polynomial()) {
            CHECK(bijectivity_oracle(t.map, p));
        }
    }
}

TEST_CASE("property: reports are deterministic")
{
    const auto run = [] {
        const TamePair t = generate_tame(42, 2, 3, 4, zadic(7, 3), 12);
        return witness_report(t.map, 12, unimodular_witness(t.map, 12)).to_json().dump() +
               char_p_report(3, 2, 10).to_json().dump();
    };
    CHECK(run() == run());
}

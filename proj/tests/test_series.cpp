#include <doctest.h>

#include "support.hpp"

using namespace tate;
using namespace testing_support;

TEST_CASE("multi-index packing follows grlex")
{
    const MultiIndex a = mono({2, 0, 1});
    CHECK(a.degree() == 3);
    CHECK(a.exponent(0) == 2);
    CHECK(a.exponent(2) == 1);
    CHECK(a.exponents(3) == std::vector<unsigned>{2, 0, 1});
    CHECK(a.to_string(3) == "x1^2*x3");
    CHECK(mono({3}).to_string(1) == "x^3");
    CHECK(MultiIndex{}.to_string(2) == "1");
    CHECK((mono({1, 0}) + mono({0, 2})) == mono({1, 2}));
    CHECK(mono({1, 2}).lowered(1) == mono({1, 1}));
    // Higher degree first, then lexicographic with x1 > x2.
    CHECK(mono({0, 0, 3}) > mono({2, 0, 0}));
    CHECK(mono({1, 0}) > mono({0, 1}));
    CHECK(mono({1, 1}) > mono({0, 2}));
    CHECK_THROWS_AS(mono(std::vector<unsigned>(9, 0)), ContractError);
    CHECK_THROWS_AS(mono({200}), ContractError);
}

TEST_CASE("addition")
{
    const Domain q = qdom();
    CHECK(lit("1+x", q, 1, 8) + lit("1-x", q, 1, 8) == lit("2", q, 1, 8));
    const TateSeries f = lit("3x1^2 - x2/5 + 7", q, 2, 6);
    CHECK(f + TateSeries(q, 2, 6) == f);
    const Domain f5 = zadic(5, 1);
    CHECK((lit("3x", f5, 1, 4) + lit("2x", f5, 1, 4)).is_zero());
    // Caps combine to the minimum.
    const TateSeries s = lit("x^5 + x", q, 1, 8) + lit("x", q, 1, 4);
    CHECK(s.cap() == 4);
    CHECK(s == lit("2x", q, 1, 4));
    CHECK_THROWS_AS(lit("x", q, 1, 4) + lit("x", zexact(5), 1, 4), DomainMismatch);
    CHECK_THROWS_AS(lit("x", q, 1, 4) + lit("x", q, 2, 4), ContractError);
}

TEST_CASE("multiplication")
{
    const Domain q = qdom();
    CHECK(lit("1+x", q, 1, 3) * lit("1-x", q, 1, 3) == lit("1-x^2", q, 1, 3));
    const TateSeries f = lit("2 + x1 x2 - x2^3/4", q, 2, 7);
    CHECK(f * TateSeries::constant(q, 2, 7, 1) == f);

    const TateSeries sum = lit("x1 + x2", q, 2, 5);
    const TateSeries sq = sum * sum;
    CHECK(sq == from_dense(dense_mul(to_dense(sum), to_dense(sum), 5), q, 2, 5));
    CHECK(sq.coefficient(mono({1, 1})) == 2);
    CHECK(sq.coefficient(mono({2, 0})) == 1);
    CHECK(sq.coefficient(mono({0, 2})) == 1);

    // Truncation: x^3 * x^3 vanishes below degree 6.
    const TateSeries t = lit("x^3", q, 1, 6) * lit("x^3", q, 1, 6);
    CHECK(t.is_zero());
    CHECK_FALSE(t.is_polynomial());
}

TEST_CASE("derivatives")
{
    const Domain q = qdom();
    const TateSeries d = series_derive(lit("x1^2 x2", q, 2, 6), 0);
    CHECK(d == lit("2 x1 x2", q, 2, 5));
    CHECK(d.cap() == 5);
    CHECK(series_derive(lit("7", q, 3, 4), 2).is_zero());
    CHECK(series_derive(lit("x^2", zadic(2, 1), 1, 4), 0).is_zero());
    CHECK(series_derive(lit("x^3", zadic(2, 1), 1, 5), 0) == lit("x^2", zadic(2, 1), 1, 4));
    CHECK_THROWS_AS(series_derive(lit("x", q, 1, 4), 1), ContractError);
}

TEST_CASE("composition")
{
    const Domain q = qdom();
    const std::vector<TateSeries> g{lit("x + x^2", q, 1, 8)};
    // (x + x^2)^2 expanded by hand
    CHECK(series_compose(lit("x^2", q, 1, 8), g) == lit("x^2 + 2x^3 + x^4", q, 1, 8));

    const TateSeries f = lit("3x1 x2^2 - x3 + 5x1^3", q, 3, 7);
    std::vector<TateSeries> id;
    for (unsigned i = 0; i < 3; ++i) {
        id.push_back(TateSeries::variable(q, 3, 7, i));
    }
    CHECK(series_compose(f, id) == f);

    // Catalan truncation is a right inverse of x - x^2 through degree 5.
    std::vector<TateSeries> cat{lit("x + x^2 + 2x^3 + 5x^4 + 14x^5", q, 1, 6)};
    CHECK(series_compose(lit("x - x^2", q, 1, 6), cat) == lit("x", q, 1, 6));

    std::vector<TateSeries> bad{lit("1 + x", q, 1, 6)};
    CHECK_THROWS_WITH_AS(series_compose(lit("x^2", q, 1, 6), bad),
                         doctest::Contains("composition requires vanishing constant terms"), ContractError);

    // substitute_all accepts a constant shift for polynomial f.
    std::vector<TateSeries> shift{lit("1 + x", q, 1, 6)};
    std::vector<TateSeries> fs{lit("x^2", q, 1, 6)};
    CHECK(substitute_all(fs, shift).front() == lit("1 + 2x + x^2", q, 1, 6));
    std::vector<TateSeries> nonpoly{lit("x^2", q, 1, 6).with_polynomial_flag(false)};
    CHECK_THROWS_AS(substitute_all(nonpoly, shift), ContractError);
}

TEST_CASE("evaluation")
{
    const Domain d = zadic(5, 4);
    const AdicElement one(d, 1);
    const EvalResult r = series_eval(lit("1 + 5x", d, 1, 8), std::span(&one, 1));
    CHECK(r.value.value() == 6);
    CHECK(r.tail_precision.is_top());
    CHECK(r.exact);

    const AdicElement a(d, 123);
    CHECK(series_eval(lit("x", d, 1, 8), std::span(&a, 1)).value == a);

    // Truncated inverse of x + 5x^2: coefficients C_{k-1} (-5)^(k-1).
    std::vector<Term> ts;
    for (unsigned k = 1; k < 16; ++k) {
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), mpz_class(-5).get_mpz_t(), k - 1);
        ts.push_back(Term{mono({k}), Scalar(catalan(k - 1) * p)});
    }
    const TateSeries g = TateSeries::from_terms(d, 1, 16, ts, false);
    const EvalResult w = series_eval(g, std::span(&one, 1));
    mpz_class direct = 0;
    for (unsigned k = 1; k <= 4; ++k) {
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), mpz_class(-5).get_mpz_t(), k - 1);
        direct += catalan(k - 1) * p;
    }
    direct = ((direct % 625) + 625) % 625;
    CHECK(w.value.value() == Scalar(direct));
    CHECK(direct == 46);
    CHECK_FALSE(w.exact);
    CHECK(w.window == 4);

    const AdicElement q1(qdom(), 1);
    CHECK_THROWS_AS(series_eval(lit("x", qdom(), 1, 4).with_polynomial_flag(false), std::span(&q1, 1)),
                    ContractError);
    CHECK(series_eval(lit("x/2 + 1", qdom(), 1, 4), std::span(&q1, 1)).value.value() == Scalar(3, 2));
}

TEST_CASE("unit criterion")
{
    const Domain z5 = zexact(5);
    CHECK(tate_is_unit(lit("3 + 5x", zadic(5, 3), 1, 6)).is_unit);
    const UnitCertificate c = tate_is_unit(lit("1 + x", z5, 1, 6));
    CHECK_FALSE(c.is_unit);
    REQUIRE(c.violating.has_value());
    CHECK(*c.violating == mono({1}));
    CHECK(tate_is_unit(lit("5 + 6x", zadic(12, 2), 1, 6)).is_unit);
    CHECK(tate_is_unit(lit("-1 + 5x", z5, 1, 6)).is_unit);
    // Constant 3 is not a unit of Z.
    const UnitCertificate c3 = tate_is_unit(lit("3 + 5x", z5, 1, 6));
    CHECK_FALSE(c3.is_unit);
    CHECK(*c3.violating == MultiIndex{});
    CHECK(tate_is_unit(lit("2 + x1 x2", qdom(), 2, 6)).is_unit == false);
    CHECK(tate_is_unit(lit("2", qdom(), 2, 6)).is_unit);
}

TEST_CASE("inverting a Tate unit")
{
    const Domain d = zadic(5, 3);
    const TateSeries inv = tate_invert_unit(lit("1 + 5x", d, 1, 3));
    CHECK(inv == lit("1 - 5x + 25x^2", d, 1, 3));
    CHECK(lit("1 + 5x", d, 1, 3) * inv == lit("1", d, 1, 3));
    CHECK(tate_invert_unit(lit("7", zadic(10, 2), 1, 4)) == lit("43", zadic(10, 2), 1, 4));
    CHECK(tate_invert_unit(lit("1", qdom(), 2, 4)) == lit("1", qdom(), 2, 4));
    // 1 + 5x is nilpotent-perturbed over Z/5^3 so the inverse is a polynomial.
    CHECK(tate_invert_unit(lit("1 + 5x", d, 1, 10)).is_polynomial());
    CHECK_THROWS_WITH_AS(tate_invert_unit(lit("1 + x", zexact(5), 1, 4)), doctest::Contains("not a unit"),
                         NotAUnit);
}

namespace {

TateSeries rand_series(std::mt19937_64 &rng, const Domain &d, unsigned n, unsigned cap, bool constant = true)
{
    return random_series(rng, d, n, 4, cap, 5, -9, 9, constant);
}

} // namespace

TEST_CASE("property: ring laws on random sparse series")
{
    std::mt19937_64 rng(101);
    for (const Domain &d : {qdom(), zexact(3), zadic(12, 2)}) {
        for (int i = 0; i < 40; ++i) {
            const TateSeries f = rand_series(rng, d, 2, 7), g = rand_series(rng, d, 2, 7), h = rand_series(rng, d, 2, 7);
            CHECK((f * g) * h == f * (g * h));
            CHECK(f * (g + h) == f * g + f * h);
            CHECK(f * g == g * f);
            CHECK(f + g == g + f);
            CHECK((f - f).is_zero());
            CHECK(f * g == from_dense(dense_mul(to_dense(f), to_dense(g), 7), d, 2, 7));
        }
    }
}

TEST_CASE("property: no term of a product reaches the cap")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const TateSeries f = random_series(rng, qdom(), 3, 6, 5, 6);
        const TateSeries g = random_series(rng, qdom(), 3, 6, 4, 6);
        const TateSeries p = f * g;
        CHECK(p.cap() == 4);
        for (const auto &t : p.terms()) {
            CHECK(t.index.degree() < 4);
        }
    }
}

TEST_CASE("property: the unit criterion is multiplicative")
{
    std::mt19937_64 rng(19);
    for (const Domain &d : {zadic(12, 2), zadic(5, 3), zexact(2)}) {
        const mpz_class r = d.radical();
        for (int i = 0; i < 80; ++i) {
            // Mix guaranteed units (unit constant, radical tail) with arbitrary series.
            auto make = [&](bool unit) {
                TateSeries s = rand_series(rng, d, 2, 6, false);
                if (unit) {
                    s = series_scale(s, Scalar(r));
                    return s + TateSeries::constant(d, 2, 6, (i % 2) ? 1 : -1);
                }
                return s + TateSeries::constant(d, 2, 6, Scalar(static_cast<long>(rng() % 12)));
            };
            const TateSeries f = make(rng() % 2), g = make(rng() % 2);
            CHECK(tate_is_unit(f * g).is_unit == (tate_is_unit(f).is_unit && tate_is_unit(g).is_unit));
        }
    }
}

TEST_CASE("property: unit times its inverse is one in the truncated ring")
{
    std::mt19937_64 rng(23);
    for (const Domain &d : {zadic(12, 3), zadic(2, 4), zexact(5), qdom()}) {
        for (int i = 0; i < 40; ++i) {
            TateSeries u = rand_series(rng, d, 2, 8, false);
            if (d.is_adic()) {
                u = series_scale(u, Scalar(d.radical()));
            }
            const TateSeries f = u + TateSeries::constant(d, 2, 8, d.is_adic() ? 1 : 3);
            if (!tate_is_unit(f).is_unit) {
                continue;
            }
            CHECK(f * tate_invert_unit(f) == TateSeries::constant(d, 2, 8, 1));
        }
    }
}

TEST_CASE("property: composition is associative and strategy independent")
{
    std::mt19937_64 rng(29);
    for (const Domain &d : {qdom(), zadic(6, 2)}) {
        for (int i = 0; i < 20; ++i) {
            const TateSeries f = rand_series(rng, d, 2, 7);
            std::vector<TateSeries> g{rand_series(rng, d, 2, 7, false), rand_series(rng, d, 2, 7, false)};
            std::vector<TateSeries> h{rand_series(rng, d, 2, 7, false), rand_series(rng, d, 2, 7, false)};
            std::vector<TateSeries> gh{series_compose(g[0], h), series_compose(g[1], h)};
            CHECK(series_compose(f, gh) == series_compose(series_compose(f, g), h));
            CHECK(series_compose(f, g, ComposeStrategy::power_table) ==
                  series_compose(f, g, ComposeStrategy::monomialwise));
        }
    }
}

TEST_CASE("property: Leibniz rule")
{
    std::mt19937_64 rng(31);
    for (const Domain &d : {qdom(), zadic(2, 3)}) {
        for (int i = 0; i < 40; ++i) {
            const TateSeries f = rand_series(rng, d, 3, 8), g = rand_series(rng, d, 3, 8);
            for (unsigned j = 0; j < 3; ++j) {
                CHECK(series_derive(f * g, j) == series_derive(f, j) * g.recapped(7) + f.recapped(7) * series_derive(g, j));
            }
        }
    }
}

TEST_CASE("from_terms normalizes")
{
    const Domain d = zadic(5, 1);
    const TateSeries f = TateSeries::from_terms(d, 1, 4, {{mono({1}), 3}, {mono({1}), 2}, {mono({0}), 6}, {mono({5}), 1}});
    CHECK(f.size() == 1);
    CHECK(f.constant_term() == 1);
    CHECK_FALSE(f.is_polynomial());
    CHECK(f.max_degree() == 0);
    CHECK(TateSeries(d, 1, 4).max_degree() == -1);
    CHECK(lit("x^3 + x", qdom(), 1, 8).low_part(2) == lit("x", qdom(), 1, 8));
    CHECK(lit("x^3 + x", qdom(), 1, 8).to_string() == "x + x^3");
}

#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

using namespace tate;
using namespace testing_support;

namespace {

// Sum over permutations with signs.
TateSeries leibniz_det(const SeriesMatrix &m)
{
    const unsigned n = m.dim();
    std::vector<unsigned> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    const TateSeries &first = m.at(0, 0);
    TateSeries total(first.domain(), first.nvars(), first.cap());
    do {
        int inversions = 0;
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) {
                inversions += perm[i] > perm[j] ? 1 : 0;
            }
        }
        TateSeries term = TateSeries::constant(first.domain(), first.nvars(), first.cap(), 1);
        for (unsigned i = 0; i < n; ++i) {
            term = term * m.at(i, perm[i]);
        }
        total = inversions % 2 ? total - term : total + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

SeriesMatrix random_matrix(std::mt19937_64 &rng, const Domain &d, unsigned n, unsigned cap)
{
    std::vector<TateSeries> e;
    for (unsigned i = 0; i < n * n; ++i) {
        e.push_back(random_series(rng, d, n, 3, cap, 3));
    }
    return SeriesMatrix(n, std::move(e));
}

PolyMap random_map(std::mt19937_64 &rng, const Domain &d, unsigned n, unsigned deg, unsigned cap)
{
    std::vector<TateSeries> c;
    for (unsigned i = 0; i < n; ++i) {
        c.push_back(random_series(rng, d, n, deg, cap, 4, -5, 5, false));
    }
    return PolyMap(std::move(c));
}

} // namespace

TEST_CASE("jacobian")
{
    const Domain q = qdom();
    const SeriesMatrix j = jacobian(map_of({"x1 + x2^2", "x2"}, q, 6));
    CHECK(j.at(0, 0) == lit("1", q, 2, 5));
    CHECK(j.at(0, 1) == lit("2x2", q, 2, 5));
    CHECK(j.at(1, 0).is_zero());
    CHECK(j.at(1, 1) == lit("1", q, 2, 5));
    CHECK(jacobian(PolyMap::identity(q, 3, 6)) == SeriesMatrix::identity(q, 3, 3, 5));
    for (unsigned c = 2; c <= 5; ++c) {
        const std::string xc = "x - x^" + std::to_string(c);
        const std::string dx = "1 - " + std::to_string(c) + "x^" + std::to_string(c - 1);
        CHECK(jacobian(map_of({xc}, zexact(c), 10)).at(0, 0) == lit(dx, zexact(c), 1, 9));
    }
}

TEST_CASE("determinant")
{
    const Domain q = qdom();
    CHECK(det(SeriesMatrix::identity(q, 2, 2, 6)) == lit("1", q, 2, 6));
    CHECK(det(SeriesMatrix::identity(q, 4, 4, 6)) == lit("1", q, 4, 6));
    CHECK(det(jacobian(map_of({"x1 + x2^2", "x2"}, q, 6))) == lit("1", q, 2, 5));
    std::mt19937_64 rng(41);
    for (unsigned n = 1; n <= 4; ++n) {
        for (const Domain &d : {q, zadic(6, 2)}) {
            const SeriesMatrix m = random_matrix(rng, d, n, 6);
            CHECK(det(m) == leibniz_det(m));
        }
    }
    const SeriesMatrix big = SeriesMatrix::identity(q, 1, 9, 4);
    CHECK_THROWS_WITH_AS(det(big), doctest::Contains("8"), ContractError);
    CHECK(det(big, 9) == lit("1", q, 1, 4));
}

TEST_CASE("scalar matrices")
{
    const Domain d = zadic(10, 2);
    ScalarMatrix a(d, 2);
    a.set(0, 0, 3);
    a.set(0, 1, 1);
    a.set(1, 0, 2);
    a.set(1, 1, 1);
    CHECK(scalar_det(a) == 1);
    CHECK(matrix_product(a, scalar_inverse(a)) == ScalarMatrix::identity(d, 2));
    ScalarMatrix b(d, 2);
    b.set(0, 0, 2);
    b.set(1, 1, 1);
    CHECK_THROWS_WITH_AS(scalar_inverse(b), doctest::Contains("linear part not invertible over R"), ContractError);
}

TEST_CASE("composition of maps")
{
    const Domain q = qdom();
    const PolyMap f = map_of({"x1 + x2^2", "x2"}, q, 8);
    CHECK(map_compose(f, PolyMap::identity(q, 2, 8)) == f);
    CHECK(map_compose(f, map_of({"x1 - x2^2", "x2"}, q, 8)) == PolyMap::identity(q, 2, 8));
    CHECK_THROWS_WITH_AS(map_compose(f, map_of({"x1 + 1", "x2"}, q, 8)),
                         doctest::Contains("composition requires vanishing constant terms"), ContractError);
    CHECK_THROWS_AS(map_compose(f, PolyMap::identity(q, 3, 8)), ContractError);
}

TEST_CASE("identity test")
{
    const Domain q = qdom();
    CHECK(is_identity(PolyMap::identity(q, 3, 5)));
    CHECK_FALSE(is_identity(map_of({"x1 + x2^2", "x2"}, q, 5)));
    CHECK(is_identity(map_of({"x + 25x^3"}, zadic(5, 2), 6)));
    CHECK_FALSE(is_identity(map_of({"x + 5x^3"}, zadic(5, 2), 6)));
}

TEST_CASE("normalization")
{
    const Domain q = qdom();
    const PolyMap f = map_of({"3 + 2x + x^2"}, q, 8);
    const NormalizedMap nm = normalize(f);
    CHECK(nm.map == map_of({"x + x^2/2"}, q, 8));
    CHECK(nm.shift == std::vector<Scalar>{3});
    CHECK(nm.linear.at(0, 0) == 2);
    CHECK(denormalize(nm) == f);

    const PolyMap g = map_of({"x1 + x2^2", "x2 + x1^3"}, q, 8);
    const NormalizedMap same = normalize(g);
    CHECK(same.map == g);
    CHECK(same.linear == ScalarMatrix::identity(q, 2));
    CHECK(same.shift == std::vector<Scalar>{0, 0});

    const NormalizedMap sw = normalize(map_of({"x2", "x1"}, zexact(3), 6));
    CHECK(is_identity(sw.map));
    CHECK(sw.linear.at(0, 1) == 1);
    CHECK(sw.linear.at(1, 0) == 1);
    CHECK(sw.linear.at(0, 0) == 0);
    CHECK(matrix_product(sw.linear, sw.linear_inverse) == ScalarMatrix::identity(zexact(3), 2));

    CHECK_THROWS_WITH_AS(normalize(map_of({"2x"}, zexact(3), 6)),
                         doctest::Contains("linear part not invertible over R"), ContractError);
    CHECK_NOTHROW(normalize(map_of({"2x"}, zadic(3, 2), 6)));
}

TEST_CASE("property: chain rule")
{
    std::mt19937_64 rng(43);
    for (const Domain &d : {qdom(), zadic(4, 3)}) {
        for (unsigned n = 1; n <= 3; ++n) {
            for (int i = 0; i < 8; ++i) {
                const PolyMap f = random_map(rng, d, n, 4, 8);
                const PolyMap g = random_map(rng, d, n, 4, 8);
                const SeriesMatrix lhs = jacobian(map_compose(f, g));
                const SeriesMatrix rhs = matrix_product(matrix_compose(jacobian(f), g.recapped(7)), jacobian(g));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("property: determinant is multiplicative")
{
    std::mt19937_64 rng(47);
    for (const Domain &d : {qdom(), zadic(12, 2)}) {
        for (unsigned n = 1; n <= 3; ++n) {
            for (int i = 0; i < 10; ++i) {
                const SeriesMatrix a = random_matrix(rng, d, n, 7), b = random_matrix(rng, d, n, 7);
                CHECK(det(matrix_product(a, b)) == det(a) * det(b));
            }
        }
    }
}

TEST_CASE("property: normalize then denormalize returns the map")
{
    std::mt19937_64 rng(53);
    for (const Domain &d : {qdom(), zadic(5, 3)}) {
        for (int i = 0; i < 30; ++i) {
            const unsigned n = 1 + i % 3;
            // Unit-determinant linear part: upper unitriangular plus a shift.
            std::vector<TateSeries> c;
            for (unsigned k = 0; k < n; ++k) {
                const TateSeries s = random_series(rng, d, n, 3, 7, 4);
                std::vector<Term> keep{{MultiIndex::variable(k), 1}};
                for (const auto &t : s.terms()) {
                    // Linear terms only in variables after k.
                    bool allowed = t.index.degree() != 1;
                    for (unsigned j = k + 1; j < n; ++j) {
                        allowed = allowed || t.index == MultiIndex::variable(j);
                    }
                    if (allowed) {
                        keep.push_back(t);
                    }
                }
                c.push_back(TateSeries::from_terms(d, n, 7, keep));
            }
            const PolyMap f(std::move(c));
            if (!d.is_unit(scalar_det(linear_part(f)))) {
                continue;
            }
            const NormalizedMap nm = normalize(f);
            CHECK(denormalize(nm) == f);
            CHECK(nm.map.constant_terms() == std::vector<Scalar>(n, 0));
            CHECK(linear_part(nm.map) == ScalarMatrix::identity(d, n));
        }
    }
}

TEST_CASE("property: Jacobian of a two-sided inverse pair")
{
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const Domain d = seed % 2 ? qdom() : zadic(7, 2);
        const TamePair p = generate_tame(seed, 1 + seed % 3, 3, 4, d, 8);
        const TateSeries lhs = det(jacobian(p.map)) * series_compose(det(jacobian(p.inverse)), p.map.recapped(7).components());
        CHECK(lhs == TateSeries::constant(d, p.map.dim(), 7, 1));
    }
}

TEST_CASE("change of domain")
{
    const PolyMap f = map_of({"x + 7x^2 - 3x^3"}, zexact(5), 6);
    const PolyMap r = change_domain(f, zadic(5, 1));
    CHECK(r == map_of({"x + 2x^2 + 2x^3"}, zadic(5, 1), 6));
    CHECK(r.domain() == zadic(5, 1));
}

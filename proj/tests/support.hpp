#ifndef TATE_TESTS_SUPPORT_HPP
#define TATE_TESTS_SUPPORT_HPP

#include <map>
#include <random>
#include <string>
#include <vector>

#include "tate/harness.hpp"
#include "tate/io.hpp"
#include "tate/oracles.hpp"

namespace testing_support {

using namespace tate;

inline Domain zadic(long m, unsigned n) { return Domain::truncated_adic(mpz_class(m), n); }
inline Domain zexact(long m) { return Domain::exact_integer_adic(mpz_class(m)); }
inline Domain qdom() { return Domain::rational_discrete(); }

inline TateSeries lit(const std::string &text, const Domain &d, unsigned n, unsigned cap)
{
    return parse_series_literal(text, d, n, cap);
}

inline PolyMap map_of(const std::vector<std::string> &comps, const Domain &d, unsigned cap)
{
    std::vector<TateSeries> out;
    for (const auto &c : comps) {
        out.push_back(lit(c, d, static_cast<unsigned>(comps.size()), cap));
    }
    return PolyMap(std::move(out));
}

inline MultiIndex mono(std::vector<unsigned> e) { return MultiIndex::from_exponents(e); }

inline Scalar coef1(const TateSeries &f, unsigned k) { return f.coefficient(mono({k})); }

// C_k = binom(2k, k) / (k + 1).
inline mpz_class catalan(unsigned k)
{
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), 2 * k, k);
    return b / (k + 1);
}

inline int divisibility_valuation(mpz_class v, long m)
{
    if (v == 0) {
        return -1;
    }
    int k = 0;
    while (v % m == 0) {
        v /= m;
        ++k;
    }
    return k;
}

// Random series with small integer coefficients, total degree <= deg.
inline TateSeries random_series(std::mt19937_64 &rng, const Domain &d, unsigned n, unsigned deg, unsigned cap,
                                unsigned terms, long lo = -9, long hi = 9, bool allow_constant = true)
{
    std::uniform_int_distribution<long> coeff(lo, hi);
    std::uniform_int_distribution<unsigned> var(0, n - 1);
    std::uniform_int_distribution<unsigned> dg(allow_constant ? 0 : 1, deg);
    std::vector<Term> ts;
    for (unsigned t = 0; t < terms; ++t) {
        std::vector<unsigned> e(n, 0);
        const unsigned k = dg(rng);
        for (unsigned i = 0; i < k; ++i) {
            ++e[var(rng)];
        }
        ts.push_back(Term{MultiIndex::from_exponents(e), Scalar(coeff(rng))});
    }
    return TateSeries::from_terms(d, n, cap, std::move(ts));
}

// Dense brute-force product on exponent vectors, independent of the packed
// representation.
using DenseSeries = std::map<std::vector<unsigned>, mpq_class>;

inline DenseSeries to_dense(const TateSeries &f)
{
    DenseSeries out;
    for (const auto &t : f.terms()) {
        out[t.index.exponents(f.nvars())] = t.coeff;
    }
    return out;
}

inline DenseSeries dense_mul(const DenseSeries &a, const DenseSeries &b, unsigned cap)
{
    DenseSeries out;
    for (const auto &[ea, ca] : a) {
        for (const auto &[eb, cb] : b) {
            std::vector<unsigned> e(ea.size());
            unsigned deg = 0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
                deg += e[i];
            }
            if (deg < cap) {
                out[e] += ca * cb;
            }
        }
    }
    return out;
}

inline TateSeries from_dense(const DenseSeries &d, const Domain &dom, unsigned n, unsigned cap)
{
    std::vector<Term> ts;
    for (const auto &[e, c] : d) {
        ts.push_back(Term{MultiIndex::from_exponents(e), c});
    }
    return TateSeries::from_terms(dom, n, cap, std::move(ts));
}

} // namespace testing_support

#endif

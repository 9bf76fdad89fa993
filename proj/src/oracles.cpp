#include "tate/oracles.hpp"

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace tate {

unsigned long long default_enumeration_budget()
{
    if (const char *env = std::getenv("TATE_ENUMERATION_BUDGET")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
    }
    return kDefaultEnumerationBudget;
}

namespace {

using Dense = std::vector<mpq_class>;

// Product truncated to `len` coefficients.
Dense dense_mul(const Dense &a, const Dense &b, std::size_t len)
{
    Dense out(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// 1 / a as a power series, a[0] != 0.
Dense dense_reciprocal(const Dense &a, std::size_t len)
{
    Dense out(len, 0);
    out[0] = 1 / a[0];
    for (std::size_t k = 1; k < len; ++k) {
        mpq_class s = 0;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) {
            s += a[j] * out[k - j];
        }
        out[k] = -s / a[0];
    }
    return out;
}

} // namespace

TateSeries lagrange_oracle(const TateSeries &f, unsigned cap)
{
    const Domain &dom = f.domain();
    if (f.nvars() != 1) {
        throw ContractError("the Lagrange oracle is univariate");
    }
    if (dom.is_truncated()) {
        throw ContractError("the Lagrange oracle works over Q or exact Z");
    }
    if (sgn(f.constant_term()) != 0) {
        throw ContractError("the Lagrange oracle needs f(0) = 0");
    }
    const Scalar a1 = f.coefficient(MultiIndex::variable(0));
    if (!dom.is_unit(a1)) {
        throw ContractError("the Lagrange oracle needs f'(0) to be a unit, got " + a1.get_str());
    }
    if (cap > f.cap() && !f.is_polynomial()) {
        throw ContractError("series is only known below degree " + std::to_string(f.cap()));
    }
    if (cap < 2) {
        return TateSeries(dom, 1, cap, false);
    }

    // f / x, as dense coefficients 0 .. cap-2.
    const std::size_t len = cap - 1;
    Dense f_over_x(len, 0);
    for (const auto &t : f.terms()) {
        const unsigned e = t.index.exponent(0);
        if (e >= 1 && e - 1 < len) {
            f_over_x[e - 1] = t.coeff;
        }
    }
    const Dense phi = dense_reciprocal(f_over_x, len);

    std::vector<Term> terms;
    Dense phi_power(len, 0);
    phi_power[0] = 1;
    for (unsigned k = 1; k < cap; ++k) {
        phi_power = dense_mul(phi_power, phi, len);
        mpq_class c = phi_power[k - 1] / k;
        if (dom.kind() == DomainKind::exact_integer_adic && c.get_den() != 1) {
            throw ContractError("inverse coefficient of x^" + std::to_string(k) + " is " + c.get_str() +
                                ", not an integer");
        }
        if (sgn(c) != 0) {
            unsigned e[1] = {k};
            terms.push_back(Term{MultiIndex::from_exponents(e), c});
        }
    }
    return TateSeries::from_terms(dom, 1, cap, std::move(terms), false);
}

bool bijectivity_oracle(const PolyMap &f, const mpz_class &m, unsigned long long budget)
{
    if (m < 2 || m > 0xffffffffUL) {
        throw ContractError("enumeration modulus must lie in [2, 2^32)");
    }
    if (!f.is_polynomial()) {
        throw ContractError("bijectivity enumeration needs a polynomial map");
    }
    const unsigned n = f.dim();
    const std::uint64_t mod = m.get_ui();
    unsigned long long total = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (total > budget / mod) {
            throw ContractError("enumeration of (Z/" + m.get_str() + ")^" + std::to_string(n) +
                                " exceeds the budget " + std::to_string(budget));
        }
        total *= mod;
    }

    struct Mono {
        std::uint64_t coeff;
        std::vector<unsigned> exps;
    };
    const Domain residue = Domain::truncated_adic(m, 1);
    std::vector<std::vector<Mono>> comps(n);
    unsigned max_exp = 0;
    for (unsigned i = 0; i < n; ++i) {
        for (const auto &t : f[i].terms()) {
            Scalar r = residue.normalize(t.coeff);
            if (sgn(r) == 0) {
                continue;
            }
            Mono mono{r.get_num().get_ui(), t.index.exponents(n)};
            for (unsigned e : mono.exps) {
                max_exp = std::max(max_exp, e);
            }
            comps[i].push_back(std::move(mono));
        }
    }

    auto mulmod = [mod](std::uint64_t a, std::uint64_t b) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
    };
    // pow_table[v][e] = v^e mod m
    std::vector<std::vector<std::uint64_t>> pow_table;
    const bool small = mod <= 4096;
    if (small) {
        pow_table.assign(mod, std::vector<std::uint64_t>(max_exp + 1, 1));
        for (std::uint64_t v = 0; v < mod; ++v) {
            for (unsigned e = 1; e <= max_exp; ++e) {
                pow_table[v][e] = mulmod(pow_table[v][e - 1], v);
            }
        }
    }
    auto power = [&](std::uint64_t v, unsigned e) {
        if (small) {
            return pow_table[v][e];
        }
        std::uint64_t r = 1;
        for (unsigned k = 0; k < e; ++k) {
            r = mulmod(r, v);
        }
        return r;
    };

    std::vector<bool> seen(total, false);
    std::vector<std::uint64_t> x(n, 0);
    for (unsigned long long idx = 0; idx < total; ++idx) {
        unsigned long long rest = idx;
        for (unsigned i = 0; i < n; ++i) {
            x[i] = rest % mod;
            rest /= mod;
        }
        unsigned long long image = 0;
        unsigned long long scale = 1;
        for (unsigned i = 0; i < n; ++i) {
            std::uint64_t y = 0;
            for (const auto &mono : comps[i]) {
                std::uint64_t term = mono.coeff;
                for (unsigned j = 0; j < n; ++j) {
                    if (mono.exps[j] != 0) {
                        term = mulmod(term, power(x[j], mono.exps[j]));
                    }
                }
                y = (y + term) % mod;
            }
            image += y * scale;
            scale *= mod;
        }
        if (seen[image]) {
            return false;
        }
        seen[image] = true;
    }
    return true;
}

} // namespace tate

#include "tate/maps.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace tate {

PolyMap::PolyMap(std::vector<TateSeries> components) : components_(std::move(components))
{
    if (components_.empty()) {
        throw ContractError("a map needs at least one component");
    }
    const auto &first = components_.front();
    for (const auto &c : components_) {
        if (c.nvars() != components_.size()) {
            throw ContractError("map components must be series in " + std::to_string(components_.size()) +
                                " variables");
        }
        if (!(c.domain() == first.domain())) {
            throw DomainMismatch("map components");
        }
        if (c.cap() != first.cap()) {
            throw ContractError("map components must share one degree cap");
        }
    }
}

PolyMap PolyMap::identity(Domain domain, unsigned n, unsigned cap)
{
    std::vector<TateSeries> comps;
    for (unsigned i = 0; i < n; ++i) {
        comps.push_back(TateSeries::variable(domain, n, cap, i));
    }
    return PolyMap(std::move(comps));
}

bool PolyMap::is_polynomial() const
{
    return std::all_of(components_.begin(), components_.end(), [](const TateSeries &c) { return c.is_polynomial(); });
}

int PolyMap::max_degree() const
{
    int d = -1;
    for (const auto &c : components_) {
        d = std::max(d, c.max_degree());
    }
    return d;
}

PolyMap PolyMap::recapped(unsigned cap) const
{
    std::vector<TateSeries> comps;
    for (const auto &c : components_) {
        comps.push_back(c.recapped(cap));
    }
    return PolyMap(std::move(comps));
}

std::vector<Scalar> PolyMap::constant_terms() const
{
    std::vector<Scalar> out;
    for (const auto &c : components_) {
        out.push_back(c.constant_term());
    }
    return out;
}

std::string PolyMap::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += components_[i].to_string();
    }
    return out + ")";
}

ScalarMatrix::ScalarMatrix(Domain domain, unsigned n) : domain_(std::move(domain)), n_(n), entries_(n * n, Scalar(0)) {}

ScalarMatrix ScalarMatrix::identity(Domain domain, unsigned n)
{
    ScalarMatrix m(std::move(domain), n);
    for (unsigned i = 0; i < n; ++i) {
        m.set(i, i, 1);
    }
    return m;
}

ScalarMatrix matrix_product(const ScalarMatrix &a, const ScalarMatrix &b)
{
    if (a.dim() != b.dim() || !(a.domain() == b.domain())) {
        throw ContractError("matrix product needs equal dimensions and domains");
    }
    const unsigned n = a.dim();
    ScalarMatrix out(a.domain(), n);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            Scalar s = 0;
            for (unsigned k = 0; k < n; ++k) {
                s += a.at(i, k) * b.at(k, j);
            }
            out.set(i, j, s);
        }
    }
    return out;
}

namespace {

// Laplace expansion along successive rows, memoized by the set of columns
// still available: det of rows [k, n) restricted to `cols`. Works for any
// commutative ring given mul/add/sub.
template <typename T, typename Entry, typename Mul, typename Add, typename Sub>
T laplace_det(unsigned n, Entry entry, T one, T zero, Mul mul, Add add, Sub sub)
{
    std::unordered_map<std::uint32_t, T> memo;
    auto rec = [&](auto &&self, std::uint32_t cols) -> T {
        const unsigned row = n - static_cast<unsigned>(std::popcount(cols));
        if (cols == 0) {
            return one;
        }
        auto it = memo.find(cols);
        if (it != memo.end()) {
            return it->second;
        }
        T acc = zero;
        unsigned position = 0;
        for (unsigned j = 0; j < n; ++j) {
            if ((cols & (1u << j)) == 0) {
                continue;
            }
            T minor = self(self, cols & ~(1u << j));
            T term = mul(entry(row, j), minor);
            acc = (position % 2 == 0) ? add(acc, term) : sub(acc, term);
            ++position;
        }
        memo.emplace(cols, acc);
        return acc;
    };
    return rec(rec, (n == 32 ? 0xffffffffu : ((1u << n) - 1)));
}

} // namespace

Scalar scalar_det(const ScalarMatrix &m)
{
    const Domain &dom = m.domain();
    const unsigned n = m.dim();
    if (n > 16) {
        throw ContractError("determinant dimension " + std::to_string(n) + " exceeds desk-scale limits");
    }
    return laplace_det<Scalar>(
        n, [&](unsigned i, unsigned j) -> const Scalar & { return m.at(i, j); }, Scalar(1), Scalar(0),
        [&](const Scalar &a, const Scalar &b) { return dom.mul(a, b); },
        [&](const Scalar &a, const Scalar &b) { return dom.add(a, b); },
        [&](const Scalar &a, const Scalar &b) { return dom.sub(a, b); });
}

ScalarMatrix scalar_inverse(const ScalarMatrix &m)
{
    const Domain &dom = m.domain();
    const unsigned n = m.dim();
    const Scalar d = scalar_det(m);
    if (!dom.is_unit(d)) {
        throw ContractError("linear part not invertible over R (determinant " + d.get_str() + " in " +
                            dom.to_string() + ")");
    }
    const Scalar d_inv = dom.invert(d);
    ScalarMatrix inv(dom, n);
    if (n == 1) {
        inv.set(0, 0, d_inv);
        return inv;
    }
    // inv(j, i) = (-1)^(i+j) det(minor without row i, column j) / det
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            ScalarMatrix minor(dom, n - 1);
            for (unsigned r = 0, rr = 0; r < n; ++r) {
                if (r == i) {
                    continue;
                }
                for (unsigned c = 0, cc = 0; c < n; ++c) {
                    if (c == j) {
                        continue;
                    }
                    minor.set(rr, cc, m.at(r, c));
                    ++cc;
                }
                ++rr;
            }
            Scalar cof = scalar_det(minor);
            if ((i + j) % 2 == 1) {
                cof = -cof;
            }
            inv.set(j, i, cof * d_inv);
        }
    }
    return inv;
}

SeriesMatrix::SeriesMatrix(unsigned n, std::vector<TateSeries> entries) : n_(n), entries_(std::move(entries))
{
    if (n == 0 || entries_.size() != static_cast<std::size_t>(n) * n) {
        throw ContractError("series matrix must be square and nonempty");
    }
    for (const auto &e : entries_) {
        if (!(e.domain() == entries_.front().domain()) || e.nvars() != entries_.front().nvars()) {
            throw DomainMismatch("series matrix entries");
        }
        if (e.cap() != entries_.front().cap()) {
            throw ContractError("series matrix entries must share one degree cap");
        }
    }
}

SeriesMatrix SeriesMatrix::identity(Domain domain, unsigned nvars, unsigned dim, unsigned cap)
{
    std::vector<TateSeries> entries;
    for (unsigned i = 0; i < dim; ++i) {
        for (unsigned j = 0; j < dim; ++j) {
            entries.push_back(TateSeries::constant(domain, nvars, cap, Scalar(i == j ? 1 : 0)));
        }
    }
    return SeriesMatrix(dim, std::move(entries));
}

SeriesMatrix matrix_product(const SeriesMatrix &a, const SeriesMatrix &b)
{
    if (a.dim() != b.dim()) {
        throw ContractError("matrix product needs equal dimensions");
    }
    const unsigned n = a.dim();
    std::vector<TateSeries> out;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            TateSeries s = series_mul(a.at(i, 0), b.at(0, j));
            for (unsigned k = 1; k < n; ++k) {
                s = series_add(s, series_mul(a.at(i, k), b.at(k, j)));
            }
            out.push_back(std::move(s));
        }
    }
    return SeriesMatrix(n, std::move(out));
}

SeriesMatrix matrix_compose(const SeriesMatrix &m, const PolyMap &g)
{
    auto out = compose_all(m.entries(), g.components());
    return SeriesMatrix(m.dim(), std::move(out));
}

SeriesMatrix jacobian(const PolyMap &f)
{
    const unsigned n = f.dim();
    std::vector<TateSeries> entries;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            entries.push_back(series_derive(f[i], j));
        }
    }
    return SeriesMatrix(n, std::move(entries));
}

TateSeries det(const SeriesMatrix &m, unsigned bound)
{
    const unsigned n = m.dim();
    if (n > bound) {
        throw ContractError("determinant of a " + std::to_string(n) + "x" + std::to_string(n) +
                            " series matrix exceeds the desk-scale bound " + std::to_string(bound));
    }
    const TateSeries &e0 = m.at(0, 0);
    const TateSeries one = TateSeries::constant(e0.domain(), e0.nvars(), e0.cap(), Scalar(1));
    const TateSeries zero(e0.domain(), e0.nvars(), e0.cap(), true);
    return laplace_det<TateSeries>(
        n, [&](unsigned i, unsigned j) -> const TateSeries & { return m.at(i, j); }, one, zero,
        [](const TateSeries &a, const TateSeries &b) { return series_mul(a, b); },
        [](const TateSeries &a, const TateSeries &b) { return series_add(a, b); },
        [](const TateSeries &a, const TateSeries &b) { return series_sub(a, b); });
}

PolyMap map_compose(const PolyMap &f, const PolyMap &g)
{
    if (f.dim() != g.dim()) {
        throw ContractError("map composition needs equal dimensions");
    }
    return PolyMap(compose_all(f.components(), g.components()));
}

bool is_identity(const PolyMap &f)
{
    for (unsigned i = 0; i < f.dim(); ++i) {
        const auto &terms = f[i].terms();
        if (f.cap() < 2) {
            // Only the constant term is visible.
            if (!terms.empty()) {
                return false;
            }
            continue;
        }
        if (terms.size() != 1 || terms.front().index != MultiIndex::variable(i) || terms.front().coeff != 1) {
            return false;
        }
    }
    return true;
}

ScalarMatrix linear_part(const PolyMap &f)
{
    const unsigned n = f.dim();
    ScalarMatrix l(f.domain(), n);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            l.set(i, j, f[i].coefficient(MultiIndex::variable(j)));
        }
    }
    return l;
}

PolyMap affine_map(const ScalarMatrix &a, std::span<const Scalar> b, unsigned cap)
{
    const unsigned n = a.dim();
    std::vector<TateSeries> comps;
    for (unsigned i = 0; i < n; ++i) {
        std::vector<Term> terms;
        terms.push_back(Term{MultiIndex{}, b.empty() ? Scalar(0) : b[i]});
        for (unsigned j = 0; j < n; ++j) {
            terms.push_back(Term{MultiIndex::variable(j), a.at(i, j)});
        }
        comps.push_back(TateSeries::from_terms(a.domain(), n, cap, std::move(terms)));
    }
    return PolyMap(std::move(comps));
}

NormalizedMap normalize(const PolyMap &f)
{
    const Domain &dom = f.domain();
    const unsigned n = f.dim();
    ScalarMatrix l = linear_part(f);
    ScalarMatrix l_inv = scalar_inverse(l);
    std::vector<Scalar> shift = f.constant_terms();

    std::vector<TateSeries> centered;
    for (unsigned i = 0; i < n; ++i) {
        centered.push_back(series_sub(f[i], TateSeries::constant(dom, n, f.cap(), shift[i])));
    }
    std::vector<TateSeries> comps;
    for (unsigned i = 0; i < n; ++i) {
        TateSeries s(dom, n, f.cap(), true);
        for (unsigned j = 0; j < n; ++j) {
            s = series_add(s, series_scale(centered[j], l_inv.at(i, j)));
        }
        comps.push_back(std::move(s));
    }
    return NormalizedMap{PolyMap(std::move(comps)), std::move(shift), std::move(l), std::move(l_inv)};
}

PolyMap denormalize(const NormalizedMap &nm)
{
    const PolyMap &fp = nm.map;
    const Domain &dom = fp.domain();
    const unsigned n = fp.dim();
    std::vector<TateSeries> comps;
    for (unsigned i = 0; i < n; ++i) {
        TateSeries s = TateSeries::constant(dom, n, fp.cap(), nm.shift[i]);
        for (unsigned j = 0; j < n; ++j) {
            s = series_add(s, series_scale(fp[j], nm.linear.at(i, j)));
        }
        comps.push_back(std::move(s));
    }
    return PolyMap(std::move(comps));
}

PolyMap inverse_from_normalized(const NormalizedMap &nm, const PolyMap &normalized_inverse)
{
    const Domain &dom = nm.linear.domain();
    const unsigned n = nm.linear.dim();
    // A(Y) = L^-1 Y - L^-1 F(0)
    std::vector<Scalar> offset(n);
    for (unsigned i = 0; i < n; ++i) {
        Scalar s = 0;
        for (unsigned j = 0; j < n; ++j) {
            s -= nm.linear_inverse.at(i, j) * nm.shift[j];
        }
        offset[i] = dom.normalize(s);
    }
    PolyMap a = affine_map(nm.linear_inverse, offset, normalized_inverse.cap());
    return PolyMap(substitute_all(normalized_inverse.components(), a.components()));
}

TateSeries change_domain(const TateSeries &f, const Domain &target)
{
    std::vector<Term> terms;
    for (const auto &t : f.terms()) {
        terms.push_back(Term{t.index, t.coeff});
    }
    return TateSeries::from_terms(target, f.nvars(), f.cap(), std::move(terms), f.is_polynomial());
}

PolyMap change_domain(const PolyMap &f, const Domain &target)
{
    std::vector<TateSeries> comps;
    for (const auto &c : f.components()) {
        comps.push_back(change_domain(c, target));
    }
    return PolyMap(std::move(comps));
}

} // namespace tate

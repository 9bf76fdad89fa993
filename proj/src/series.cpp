#include "tate/series.hpp"

#include <algorithm>
#include <unordered_map>

namespace tate {

std::vector<unsigned> MultiIndex::exponents(unsigned n) const
{
    std::vector<unsigned> out(n);
    for (unsigned i = 0; i < n; ++i) {
        out[i] = exponent(i);
    }
    return out;
}

MultiIndex MultiIndex::from_exponents(std::span<const unsigned> exponents)
{
    if (exponents.size() > kMaxVariables) {
        throw ContractError("at most " + std::to_string(kMaxVariables) + " variables are supported");
    }
    std::uint64_t bits = 0;
    unsigned degree = 0;
    for (unsigned i = 0; i < exponents.size(); ++i) {
        degree += exponents[i];
        if (exponents[i] >= kMaxDegreeCap || degree >= kMaxDegreeCap) {
            throw ContractError("monomial degree exceeds the supported cap " + std::to_string(kMaxDegreeCap));
        }
        bits |= std::uint64_t{exponents[i]} << shift(i);
    }
    return MultiIndex(bits | (std::uint64_t{degree} << 56));
}

MultiIndex MultiIndex::variable(unsigned i)
{
    if (i >= kMaxVariables) {
        throw ContractError("variable index out of range");
    }
    return MultiIndex((std::uint64_t{1} << 56) | (std::uint64_t{1} << shift(i)));
}

std::string MultiIndex::to_string(unsigned n) const
{
    if (degree() == 0) {
        return "1";
    }
    std::string out;
    for (unsigned i = 0; i < n; ++i) {
        unsigned e = exponent(i);
        if (e == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += n == 1 ? std::string("x") : "x" + std::to_string(i + 1);
        if (e > 1) {
            out += '^' + std::to_string(e);
        }
    }
    return out;
}

// Internal construction from data that is already canonical.
struct SeriesAccess {
    static TateSeries make(Domain domain, unsigned n, unsigned cap, bool polynomial, std::vector<Term> terms)
    {
        TateSeries s(std::move(domain), n, cap, polynomial);
        s.terms_ = std::move(terms);
        return s;
    }

    // Collects an accumulator of unreduced coefficients into canonical form.
    static TateSeries collect(const Domain &domain, unsigned n, unsigned cap, bool polynomial,
                              std::unordered_map<std::uint64_t, Scalar> &acc)
    {
        std::vector<Term> terms;
        terms.reserve(acc.size());
        for (auto &[key, c] : acc) {
            Scalar v = domain.normalize(c);
            if (sgn(v) != 0) {
                terms.push_back(Term{MultiIndex::from_packed(key), std::move(v)});
            }
        }
        std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) { return a.index < b.index; });
        return make(domain, n, cap, polynomial, std::move(terms));
    }
};

namespace {

void check_shape(const TateSeries &f, const TateSeries &g)
{
    if (f.nvars() != g.nvars()) {
        throw ContractError("series have different variable counts (" + std::to_string(f.nvars()) + " vs " +
                            std::to_string(g.nvars()) + ")");
    }
    if (!(f.domain() == g.domain())) {
        throw DomainMismatch(f.domain().to_string() + " vs " + g.domain().to_string());
    }
}

bool fits_below(const TateSeries &f, unsigned cap) { return f.max_degree() < static_cast<int>(cap); }

} // namespace

TateSeries::TateSeries(Domain domain, unsigned nvars, unsigned cap, bool polynomial)
    : domain_(std::move(domain)), n_(nvars), cap_(cap), polynomial_(polynomial)
{
    if (nvars < 1 || nvars > kMaxVariables) {
        throw ContractError("variable count must be in [1, " + std::to_string(kMaxVariables) + "]");
    }
    if (cap > kMaxDegreeCap) {
        throw ContractError("degree cap " + std::to_string(cap) + " exceeds the supported maximum " +
                            std::to_string(kMaxDegreeCap));
    }
}

TateSeries TateSeries::constant(Domain domain, unsigned nvars, unsigned cap, const Scalar &c)
{
    return from_terms(std::move(domain), nvars, cap, {Term{MultiIndex{}, c}});
}

TateSeries TateSeries::variable(Domain domain, unsigned nvars, unsigned cap, unsigned i)
{
    if (i >= nvars) {
        throw ContractError("variable index " + std::to_string(i + 1) + " out of range");
    }
    return from_terms(std::move(domain), nvars, cap, {Term{MultiIndex::variable(i), Scalar(1)}});
}

TateSeries TateSeries::from_terms(Domain domain, unsigned nvars, unsigned cap, std::vector<Term> terms,
                                  bool polynomial)
{
    TateSeries s(std::move(domain), nvars, cap, polynomial);
    std::unordered_map<std::uint64_t, Scalar> acc;
    for (auto &t : terms) {
        for (unsigned i = nvars; i < kMaxVariables; ++i) {
            if (t.index.exponent(i) != 0) {
                throw ContractError("monomial uses a variable beyond x" + std::to_string(nvars));
            }
        }
        acc[t.index.packed()] += t.coeff;
    }
    std::vector<Term> kept;
    for (auto &[key, c] : acc) {
        Scalar v = s.domain_.normalize(c);
        if (sgn(v) == 0) {
            continue;
        }
        MultiIndex idx = MultiIndex::from_packed(key);
        if (idx.degree() >= cap) {
            s.polynomial_ = false;
            continue;
        }
        kept.push_back(Term{idx, std::move(v)});
    }
    std::sort(kept.begin(), kept.end(), [](const Term &a, const Term &b) { return a.index < b.index; });
    s.terms_ = std::move(kept);
    return s;
}

Scalar TateSeries::coefficient(MultiIndex index) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term &t, MultiIndex i) { return t.index < i; });
    if (it != terms_.end() && it->index == index) {
        return it->coeff;
    }
    return Scalar(0);
}

TateSeries TateSeries::recapped(unsigned cap) const
{
    if (cap >= cap_) {
        return SeriesAccess::make(domain_, n_, cap, polynomial_, terms_);
    }
    std::vector<Term> kept;
    for (const auto &t : terms_) {
        if (t.index.degree() < cap) {
            kept.push_back(t);
        }
    }
    bool poly = polynomial_ && kept.size() == terms_.size();
    return SeriesAccess::make(domain_, n_, cap, poly, std::move(kept));
}

TateSeries TateSeries::with_polynomial_flag(bool polynomial) const
{
    return SeriesAccess::make(domain_, n_, cap_, polynomial, terms_);
}

TateSeries TateSeries::low_part(unsigned d) const
{
    std::vector<Term> kept;
    for (const auto &t : terms_) {
        if (t.index.degree() < d) {
            kept.push_back(t);
        }
    }
    bool poly = polynomial_ && kept.size() == terms_.size();
    return SeriesAccess::make(domain_, n_, cap_, poly, std::move(kept));
}

std::string TateSeries::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    for (const auto &t : terms_) {
        std::string c = t.coeff.get_str();
        bool negative = c.front() == '-';
        if (negative) {
            c.erase(0, 1);
        }
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        if (t.index.degree() == 0) {
            out += c;
        } else if (c == "1") {
            out += t.index.to_string(n_);
        } else {
            out += c + "*" + t.index.to_string(n_);
        }
    }
    return out;
}

bool operator==(const TateSeries &a, const TateSeries &b)
{
    if (a.n_ != b.n_ || a.cap_ != b.cap_ || !(a.domain_ == b.domain_) || a.terms_.size() != b.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (a.terms_[i].index != b.terms_[i].index || a.terms_[i].coeff != b.terms_[i].coeff) {
            return false;
        }
    }
    return true;
}

namespace {

TateSeries combine(const TateSeries &f, const TateSeries &g, bool subtract)
{
    check_shape(f, g);
    const unsigned cap = std::min(f.cap(), g.cap());
    const bool poly = f.is_polynomial() && g.is_polynomial() && fits_below(f, cap) && fits_below(g, cap);
    const Domain &dom = f.domain();
    std::vector<Term> out;
    out.reserve(f.size() + g.size());
    auto a = f.terms().begin(), ae = f.terms().end();
    auto b = g.terms().begin(), be = g.terms().end();
    auto push = [&](MultiIndex idx, Scalar v) {
        if (idx.degree() >= cap) {
            return;
        }
        v = dom.normalize(v);
        if (sgn(v) != 0) {
            out.push_back(Term{idx, std::move(v)});
        }
    };
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->index < b->index)) {
            push(a->index, a->coeff);
            ++a;
        } else if (a == ae || b->index < a->index) {
            push(b->index, subtract ? Scalar(-b->coeff) : b->coeff);
            ++b;
        } else {
            push(a->index, subtract ? Scalar(a->coeff - b->coeff) : Scalar(a->coeff + b->coeff));
            ++a;
            ++b;
        }
    }
    return SeriesAccess::make(dom, f.nvars(), cap, poly, std::move(out));
}

} // namespace

TateSeries series_add(const TateSeries &f, const TateSeries &g) { return combine(f, g, false); }

TateSeries series_sub(const TateSeries &f, const TateSeries &g) { return combine(f, g, true); }

TateSeries series_neg(const TateSeries &f) { return series_scale(f, Scalar(-1)); }

TateSeries series_scale(const TateSeries &f, const Scalar &c)
{
    const Domain &dom = f.domain();
    Scalar k = dom.normalize(c);
    std::vector<Term> out;
    out.reserve(f.size());
    for (const auto &t : f.terms()) {
        Scalar v = dom.normalize(t.coeff * k);
        if (sgn(v) != 0) {
            out.push_back(Term{t.index, std::move(v)});
        }
    }
    return SeriesAccess::make(dom, f.nvars(), f.cap(), f.is_polynomial(), std::move(out));
}

TateSeries series_mul(const TateSeries &f, const TateSeries &g)
{
    check_shape(f, g);
    const unsigned cap = std::min(f.cap(), g.cap());
    if ((f.is_zero() && f.is_polynomial()) || (g.is_zero() && g.is_polynomial())) {
        return TateSeries(f.domain(), f.nvars(), cap, true);
    }
    const bool poly = f.is_polynomial() && g.is_polynomial() && f.max_degree() + g.max_degree() < static_cast<int>(cap);

    std::unordered_map<std::uint64_t, Scalar> acc;
    acc.reserve(f.size() * 2 + g.size() * 2);
    Scalar prod;
    for (const auto &a : f.terms()) {
        const unsigned da = a.index.degree();
        if (da >= cap) {
            break;
        }
        // g's terms are sorted by degree, so the first too-large one ends the row.
        for (const auto &b : g.terms()) {
            if (da + b.index.degree() >= cap) {
                break;
            }
            mpq_mul(prod.get_mpq_t(), a.coeff.get_mpq_t(), b.coeff.get_mpq_t());
            acc[(a.index + b.index).packed()] += prod;
        }
    }
    return SeriesAccess::collect(f.domain(), f.nvars(), cap, poly, acc);
}

TateSeries series_derive(const TateSeries &f, unsigned j)
{
    if (j >= f.nvars()) {
        throw ContractError("derivative index " + std::to_string(j + 1) + " out of range for " +
                            std::to_string(f.nvars()) + " variables");
    }
    const Domain &dom = f.domain();
    const unsigned cap = f.cap() == 0 ? 0 : f.cap() - 1;
    std::vector<Term> out;
    for (const auto &t : f.terms()) {
        const unsigned e = t.index.exponent(j);
        if (e == 0) {
            continue;
        }
        Scalar v = dom.normalize(t.coeff * e);
        if (sgn(v) != 0) {
            out.push_back(Term{t.index.lowered(j), std::move(v)});
        }
    }
    std::sort(out.begin(), out.end(), [](const Term &a, const Term &b) { return a.index < b.index; });
    return SeriesAccess::make(dom, f.nvars(), cap, f.is_polynomial(), std::move(out));
}

namespace {

void check_arguments(std::span<const TateSeries> fs, std::span<const TateSeries> g, bool need_zero_constants)
{
    for (const auto &f : fs) {
        if (f.nvars() != g.size()) {
            throw ContractError("composition needs " + std::to_string(f.nvars()) + " arguments, got " +
                                std::to_string(g.size()));
        }
    }
    if (g.empty()) {
        throw ContractError("composition needs at least one argument");
    }
    for (const auto &gi : g) {
        if (gi.nvars() != g.front().nvars()) {
            throw ContractError("composition arguments have different variable counts");
        }
        if (!(gi.domain() == g.front().domain())) {
            throw DomainMismatch("composition arguments");
        }
        if (need_zero_constants && sgn(gi.constant_term()) != 0) {
            throw ContractError("composition requires vanishing constant terms");
        }
    }
    for (const auto &f : fs) {
        if (!(f.domain() == g.front().domain())) {
            throw DomainMismatch(f.domain().to_string() + " vs " + g.front().domain().to_string());
        }
    }
}

// Powers G^a for exponent vectors a, memoized and truncated at `cap`.
class PowerTable {
public:
    PowerTable(std::span<const TateSeries> g, unsigned cap, bool zero_constants)
        : g_(g), cap_(cap), zero_constants_(zero_constants)
    {
        for (const auto &gi : g) {
            gi_capped_.push_back(gi.recapped(std::min(cap, gi.cap())));
        }
    }

    // Returns nullptr when G^a vanishes at the cap (zero constants, |a| >= cap).
    const TateSeries *power(MultiIndex a)
    {
        if (zero_constants_ && a.degree() >= cap_) {
            return nullptr;
        }
        auto it = memo_.find(a.packed());
        if (it != memo_.end()) {
            return &it->second;
        }
        TateSeries value = [&] {
            if (a.degree() == 0) {
                return TateSeries::constant(g_.front().domain(), g_.front().nvars(), cap_, Scalar(1));
            }
            unsigned i = 0;
            while (a.exponent(i) == 0) {
                ++i;
            }
            const TateSeries *lower = power(a.lowered(i));
            return series_mul(*lower, gi_capped_[i]);
        }();
        return &memo_.emplace(a.packed(), std::move(value)).first->second;
    }

private:
    std::span<const TateSeries> g_;
    std::vector<TateSeries> gi_capped_;
    unsigned cap_;
    bool zero_constants_;
    std::unordered_map<std::uint64_t, TateSeries> memo_;
};

unsigned composed_cap(const TateSeries &f, std::span<const TateSeries> g)
{
    unsigned cap = f.cap();
    for (const auto &gi : g) {
        cap = std::min(cap, gi.cap());
    }
    return cap;
}

bool composed_polynomial(const TateSeries &f, std::span<const TateSeries> g, unsigned cap)
{
    if (!f.is_polynomial()) {
        return false;
    }
    if (f.max_degree() <= 0) {
        return f.max_degree() < static_cast<int>(cap) || f.is_zero();
    }
    int gdeg = 0;
    for (const auto &gi : g) {
        if (!gi.is_polynomial()) {
            return false;
        }
        gdeg = std::max(gdeg, gi.max_degree());
    }
    return f.max_degree() * gdeg < static_cast<int>(cap);
}

TateSeries accumulate(const TateSeries &f, std::span<const TateSeries> g, PowerTable &table, unsigned cap)
{
    const Domain &dom = f.domain();
    const unsigned n = g.front().nvars();
    std::unordered_map<std::uint64_t, Scalar> acc;
    Scalar prod;
    for (const auto &t : f.terms()) {
        const TateSeries *p = table.power(t.index);
        if (p == nullptr) {
            continue;
        }
        for (const auto &u : p->terms()) {
            if (u.index.degree() >= cap) {
                break;
            }
            mpq_mul(prod.get_mpq_t(), t.coeff.get_mpq_t(), u.coeff.get_mpq_t());
            acc[u.index.packed()] += prod;
        }
    }
    return SeriesAccess::collect(dom, n, cap, composed_polynomial(f, g, cap), acc);
}

TateSeries compose_monomialwise(const TateSeries &f, std::span<const TateSeries> g, unsigned cap)
{
    const Domain &dom = f.domain();
    const unsigned n = g.front().nvars();
    TateSeries sum(dom, n, cap, true);
    for (const auto &t : f.terms()) {
        if (t.index.degree() >= cap) {
            continue;
        }
        TateSeries term = TateSeries::constant(dom, n, cap, t.coeff);
        for (unsigned i = 0; i < g.size(); ++i) {
            for (unsigned e = 0; e < t.index.exponent(i); ++e) {
                term = series_mul(term, g[i].recapped(std::min(cap, g[i].cap())));
            }
        }
        sum = series_add(sum, term);
    }
    return sum.with_polynomial_flag(composed_polynomial(f, g, cap));
}

} // namespace

TateSeries series_compose(const TateSeries &f, std::span<const TateSeries> g, ComposeStrategy strategy)
{
    check_arguments(std::span<const TateSeries>(&f, 1), g, true);
    const unsigned cap = composed_cap(f, g);
    if (strategy == ComposeStrategy::monomialwise) {
        return compose_monomialwise(f, g, cap);
    }
    PowerTable table(g, cap, true);
    return accumulate(f, g, table, cap);
}

std::vector<TateSeries> compose_all(std::span<const TateSeries> fs, std::span<const TateSeries> g)
{
    check_arguments(fs, g, true);
    std::vector<TateSeries> out;
    if (fs.empty()) {
        return out;
    }
    unsigned table_cap = 0;
    for (const auto &f : fs) {
        table_cap = std::max(table_cap, composed_cap(f, g));
    }
    PowerTable table(g, table_cap, true);
    for (const auto &f : fs) {
        out.push_back(accumulate(f, g, table, composed_cap(f, g)));
    }
    return out;
}

std::vector<TateSeries> substitute_all(std::span<const TateSeries> fs, std::span<const TateSeries> g)
{
    check_arguments(fs, g, false);
    bool zero_constants = std::all_of(g.begin(), g.end(), [](const TateSeries &gi) { return gi.constant_term() == 0; });
    if (!zero_constants) {
        for (const auto &f : fs) {
            if (!f.is_polynomial()) {
                throw ContractError("substituting arguments with nonzero constant terms needs a polynomial");
            }
        }
    }
    std::vector<TateSeries> out;
    if (fs.empty()) {
        return out;
    }
    unsigned table_cap = 0;
    for (const auto &f : fs) {
        table_cap = std::max(table_cap, composed_cap(f, g));
    }
    PowerTable table(g, table_cap, zero_constants);
    for (const auto &f : fs) {
        out.push_back(accumulate(f, g, table, composed_cap(f, g)));
    }
    return out;
}

EvalResult series_eval(const TateSeries &f, std::span<const AdicElement> point, unsigned window)
{
    const Domain &dom = f.domain();
    if (point.size() != f.nvars()) {
        throw ContractError("evaluation point has " + std::to_string(point.size()) + " entries, series has " +
                            std::to_string(f.nvars()) + " variables");
    }
    for (const auto &x : point) {
        if (!(x.domain() == dom)) {
            throw DomainMismatch("evaluation point");
        }
    }
    if (!dom.is_adic() && !f.is_polynomial()) {
        throw ContractError("evaluating a truncated non-polynomial series over Q is meaningless");
    }
    if (window == 0) {
        window = std::max(1u, f.cap() / 4);
    }

    std::vector<std::vector<Scalar>> powers(f.nvars());
    for (unsigned i = 0; i < f.nvars(); ++i) {
        powers[i].push_back(Scalar(1));
    }
    Scalar sum = 0;
    for (const auto &t : f.terms()) {
        Scalar term = t.coeff;
        for (unsigned i = 0; i < f.nvars(); ++i) {
            const unsigned e = t.index.exponent(i);
            auto &pw = powers[i];
            while (pw.size() <= e) {
                pw.push_back(dom.mul(pw.back(), point[i].value()));
            }
            term *= pw[e];
        }
        sum += term;
    }

    Valuation tail = Valuation::top();
    if (!f.is_polynomial()) {
        const unsigned lo = f.cap() > window ? f.cap() - window : 0;
        for (const auto &t : f.terms()) {
            if (t.index.degree() >= lo) {
                tail = std::min(tail, dom.valuation(t.coeff));
            }
        }
    }
    return EvalResult{AdicElement(dom, sum), tail, window, f.is_polynomial()};
}

UnitCertificate tate_is_unit(const TateSeries &f)
{
    const Domain &dom = f.domain();
    UnitCertificate cert;
    Scalar c0 = f.constant_term();
    if (!dom.is_unit(c0)) {
        cert.violating = MultiIndex{};
        cert.reason = "constant term " + c0.get_str() + " is not a unit in " + dom.to_string();
        return cert;
    }
    for (const auto &t : f.terms()) {
        if (t.index.degree() == 0) {
            continue;
        }
        if (!dom.in_radical(t.coeff)) {
            cert.violating = t.index;
            cert.reason = "coefficient " + t.coeff.get_str() + " of " + t.index.to_string(f.nvars()) +
                          " is not in the radical of the ideal";
            return cert;
        }
    }
    cert.is_unit = true;
    cert.reason = "constant term is a unit and every other coefficient lies in the radical";
    return cert;
}

TateSeries tate_invert_unit(const TateSeries &f)
{
    UnitCertificate cert = tate_is_unit(f);
    if (!cert.is_unit) {
        throw NotAUnit(cert.reason);
    }
    const Domain &dom = f.domain();
    const Scalar b = dom.invert(f.constant_term());
    const TateSeries one = TateSeries::constant(dom, f.nvars(), f.cap(), Scalar(1));
    // b f = 1 + u with u(0) = 0; (-u)^i has order >= i, so cap terms suffice.
    const TateSeries minus_u = series_sub(one, series_scale(f, b));
    TateSeries sum = one;
    TateSeries power = one;
    bool terminated = minus_u.is_zero() && minus_u.is_polynomial();
    for (unsigned i = 1; i < f.cap() && !terminated; ++i) {
        power = series_mul(power, minus_u);
        if (power.is_zero()) {
            terminated = power.is_polynomial();
            break;
        }
        sum = series_add(sum, power);
    }
    TateSeries inv = series_scale(sum, b);
    return inv.with_polynomial_flag(f.is_polynomial() && terminated);
}

} // namespace tate

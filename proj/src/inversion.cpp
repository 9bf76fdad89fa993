#include "tate/inversion.hpp"

#include <algorithm>
#include <stdexcept>

#include "tate/oracles.hpp"

namespace tate {

namespace {

void require_normalized(const PolyMap &f)
{
    const unsigned n = f.dim();
    for (unsigned i = 0; i < n; ++i) {
        if (sgn(f[i].constant_term()) != 0) {
            throw ContractError("formal inversion needs F(0) = 0; run normalize first");
        }
    }
    if (!(linear_part(f) == ScalarMatrix::identity(f.domain(), n))) {
        throw ContractError("formal inversion needs an identity linear part; run normalize first");
    }
}

PolyMap subtract_identity(const PolyMap &f)
{
    std::vector<TateSeries> out;
    for (unsigned i = 0; i < f.dim(); ++i) {
        out.push_back(series_sub(f[i], TateSeries::variable(f.domain(), f.dim(), f.cap(), i)));
    }
    return PolyMap(std::move(out));
}

PolyMap contraction_step(const PolyMap &h, const PolyMap &g)
{
    // X - H(G)
    std::vector<TateSeries> hg = compose_all(h.components(), g.components());
    std::vector<TateSeries> out;
    for (unsigned i = 0; i < h.dim(); ++i) {
        out.push_back(series_sub(TateSeries::variable(h.domain(), h.dim(), h.cap(), i), hg[i]));
    }
    return PolyMap(std::move(out));
}

} // namespace

PolyMap formal_inverse(const PolyMap &f, unsigned cap, const FormalInverseOptions &options)
{
    if (cap > f.cap() && !f.is_polynomial()) {
        throw ContractError("map is only known below degree " + std::to_string(f.cap()) +
                            ", cannot invert through degree " + std::to_string(cap - 1));
    }
    require_normalized(f);
    const PolyMap h = subtract_identity(f.recapped(cap));

    if (options.steps) {
        PolyMap g = PolyMap::identity(f.domain(), f.dim(), cap);
        for (unsigned k = 0; k < *options.steps; ++k) {
            g = contraction_step(h, g);
        }
        return g;
    }

    // After the step at working cap c, G is exact modulo degree c; H has
    // order >= 2, so H(G) mod degree c+1 only sees G mod degree c.
    PolyMap g = PolyMap::identity(f.domain(), f.dim(), std::min(cap, 2u));
    for (unsigned c = 3; c <= cap; ++c) {
        g = contraction_step(h.recapped(c), g.recapped(c));
    }
    return g.recapped(cap);
}

std::optional<PolyMap> certify_polynomial_inverse(const PolyMap &f, const PolyMap &g)
{
    if (!f.is_polynomial() || f.dim() != g.dim()) {
        return std::nullopt;
    }
    const long product = static_cast<long>(std::max(f.max_degree(), 1)) * std::max(g.max_degree(), 1) + 1;
    if (product > static_cast<long>(kMaxDegreeCap)) {
        return std::nullopt;
    }
    const unsigned cap = static_cast<unsigned>(std::max<long>(product, g.cap()));
    std::vector<TateSeries> comps;
    for (const auto &c : g.components()) {
        if (sgn(c.constant_term()) != 0) {
            return std::nullopt;
        }
        comps.push_back(c.with_polynomial_flag(true).recapped(std::min<unsigned>(cap, kMaxDegreeCap)));
    }
    PolyMap gp(std::move(comps));
    if (!is_identity(map_compose(f.recapped(gp.cap()), gp))) {
        return std::nullopt;
    }
    return gp.recapped(g.cap());
}

PolyMap invert_map(const PolyMap &f, unsigned cap)
{
    NormalizedMap nm = normalize(f);
    PolyMap g = formal_inverse(nm.map, cap);
    if (auto exact = certify_polynomial_inverse(nm.map, g)) {
        g = *exact;
    } else {
        for (const auto &s : nm.shift) {
            if (sgn(s) != 0) {
                throw ContractError("F(0) != 0 and the inverse of the normalized map is not a polynomial "
                                    "through degree " + std::to_string(cap - 1) + "; translate F first");
            }
        }
    }
    return inverse_from_normalized(nm, g);
}

Valuation min_valuation(const PolyMap &f)
{
    Valuation v = Valuation::top();
    const Domain &dom = f.domain();
    for (const auto &c : f.components()) {
        for (const auto &t : c.terms()) {
            v = std::min(v, dom.valuation(t.coeff));
        }
    }
    return v;
}

LiftResult adic_lift_inverse(const PolyMap &f, const PolyMap &g0, unsigned target_precision)
{
    const Domain &dom = f.domain();
    if (!dom.is_adic()) {
        throw ContractError("adic lifting needs an adic domain");
    }
    if (!(g0.domain() == dom) || g0.dim() != f.dim()) {
        throw DomainMismatch("F and G0 must share domain and dimension");
    }
    if (target_precision < 1) {
        throw ContractError("target precision must be at least 1");
    }
    if (dom.is_truncated() && target_precision > dom.precision()) {
        throw ContractError("target precision " + std::to_string(target_precision) + " exceeds the domain precision " +
                            std::to_string(dom.precision()));
    }
    for (unsigned i = 0; i < f.dim(); ++i) {
        if (sgn(f[i].constant_term()) != 0 || sgn(g0[i].constant_term()) != 0) {
            throw ContractError("adic lifting needs F(0) = 0 and G0(0) = 0");
        }
    }
    const unsigned cap = std::min(f.cap(), g0.cap());
    const PolyMap fc = f.recapped(cap);
    PolyMap g = g0.recapped(cap);

    UnitCertificate cert = tate_is_unit(det(jacobian(fc)));
    if (!cert.is_unit) {
        throw ContractError("Jacobian determinant is not a Tate unit: " + cert.reason);
    }

    const PolyMap x = PolyMap::identity(dom, f.dim(), cap);
    auto error_of = [&](const PolyMap &gk) {
        PolyMap comp = map_compose(gk, fc);
        std::vector<TateSeries> e;
        for (unsigned i = 0; i < f.dim(); ++i) {
            e.push_back(series_sub(comp[i], x[i]));
        }
        return PolyMap(std::move(e));
    };

    PolyMap e = error_of(g);
    if (!min_valuation(e).at_least(1)) {
        throw ContractError("G0 is not an inverse modulo I");
    }

    LiftResult result{g, {}, target_precision};
    const int target = static_cast<int>(target_precision);
    for (unsigned k = 0;; ++k) {
        const Valuation v = min_valuation(e);
        const int required = k >= 30 ? target : std::min(1 << k, target);
        result.ledger.push_back(LiftStep{k, v, required});
        if (!v.at_least(required)) {
            throw std::logic_error("lifting step " + std::to_string(k) + " reached error valuation " + v.to_string() +
                                   ", below the required " + std::to_string(required));
        }
        if (v.at_least(target)) {
            break;
        }
        // G <- G - E(G)
        std::vector<TateSeries> eg = compose_all(e.components(), g.components());
        std::vector<TateSeries> next;
        for (unsigned i = 0; i < f.dim(); ++i) {
            next.push_back(series_sub(g[i], eg[i]));
        }
        g = PolyMap(std::move(next));
        e = error_of(g);
    }
    result.inverse = g;
    return result;
}

DecayProfile decay_profile(const PolyMap &g)
{
    const Domain &dom = g.domain();
    if (!dom.is_adic()) {
        throw ContractError("decay profiles need an adic domain");
    }
    DecayProfile p;
    p.per_degree.assign(g.cap(), Valuation::top());
    for (const auto &c : g.components()) {
        for (const auto &t : c.terms()) {
            auto &slot = p.per_degree[t.index.degree()];
            slot = std::min(slot, dom.valuation(t.coeff));
        }
    }
    p.tail_floor.assign(g.cap(), Valuation::top());
    Valuation running = Valuation::top();
    for (unsigned d = g.cap(); d-- > 0;) {
        running = std::min(running, p.per_degree[d]);
        p.tail_floor[d] = running;
    }
    for (unsigned d = 0; d < g.cap(); ++d) {
        if (!p.per_degree[d].is_top() && p.per_degree[d].value() == 0) {
            p.valuation_zero_degrees.push_back(d);
        }
    }
    return p;
}

TransferReport transfer_check(const PolyMap &f, const TransferOptions &options)
{
    const Domain &dom = f.domain();
    if (!dom.is_adic()) {
        throw ContractError("transfer check needs an adic domain");
    }
    for (unsigned i = 0; i < f.dim(); ++i) {
        if (sgn(f[i].constant_term()) != 0) {
            throw ContractError("transfer check needs F(0) = 0");
        }
    }
    TransferReport report;
    const unsigned n = f.dim();
    const unsigned cap = std::min(options.cap, kMaxDegreeCap);
    const unsigned window = options.window == 0 ? std::max(1u, cap / 2) : options.window;
    const Domain residue = dom.residue_ring();
    const PolyMap fbar = change_domain(f, residue);
    const bool fbar_known = fbar.is_polynomial();
    if (!fbar_known) {
        report.notes.push_back("F is a truncated series; its reduction is only known below degree " +
                               std::to_string(f.cap()));
    }

    std::optional<NormalizedMap> nm;
    try {
        nm = normalize(fbar);
    } catch (const ContractError &) {
        report.obstruction = "the linear part of F mod I is not invertible, so det JF(0) is not a unit mod I";
        report.conclusive = true;
        return report;
    }

    const unsigned work_cap = fbar_known ? cap : std::min(cap, f.cap());
    PolyMap gprime = formal_inverse(nm->map, work_cap);
    const int top = gprime.max_degree();
    const bool stabilized = top < static_cast<int>(work_cap > window ? work_cap - window : 0);

    if (stabilized) {
        std::vector<TateSeries> comps;
        for (const auto &c : gprime.components()) {
            comps.push_back(c.with_polynomial_flag(true));
        }
        PolyMap gbar = inverse_from_normalized(*nm, PolyMap(std::move(comps)));
        // Check F o G = G o F = X beyond the working cap when both are polynomials.
        unsigned verify_cap = work_cap;
        bool exact = false;
        if (fbar_known) {
            const long product = static_cast<long>(std::max(fbar.max_degree(), 1)) * std::max(gbar.max_degree(), 1) + 1;
            verify_cap = static_cast<unsigned>(std::min<long>(product, kMaxDegreeCap));
            exact = product <= static_cast<long>(kMaxDegreeCap);
        }
        const PolyMap fv = fbar.recapped(verify_cap);
        const PolyMap gv = gbar.recapped(verify_cap);
        if (is_identity(map_compose(fv, gv)) && is_identity(map_compose(gv, fv))) {
            report.invertible_mod_i = true;
            report.conclusive = exact;
            report.residue_inverse = gbar;
            report.notes.push_back(exact ? "polynomial inverse of F mod I verified by exact composition"
                                         : "inverse of F mod I verified only modulo degree " +
                                               std::to_string(verify_cap));
            unsigned target = options.target_precision;
            if (target == 0) {
                target = dom.is_truncated() ? dom.precision() : 8;
            }
            if (dom.is_truncated()) {
                target = std::min(target, dom.precision());
            }
            PolyMap g0 = change_domain(gbar.recapped(std::max(f.cap(), gbar.cap())), dom);
            report.lifted = adic_lift_inverse(f, g0, target);
            return report;
        }
        report.notes.push_back("stabilized truncation of degree " + std::to_string(top) +
                               " failed the composition check");
    }

    // No polynomial inverse found: look for rigorous obstructions.
    const mpz_class &m = dom.modulus();
    if (fbar_known && m <= 0xffffffffUL) {
        unsigned long long total = 1;
        bool affordable = true;
        for (unsigned i = 0; i < n && affordable; ++i) {
            if (total > options.enumeration_budget / m.get_ui()) {
                affordable = false;
            } else {
                total *= m.get_ui();
            }
        }
        if (affordable) {
            if (!bijectivity_oracle(fbar, m, options.enumeration_budget)) {
                report.obstruction = "F mod I is not a bijection of (Z/" + m.get_str() + ")^" + std::to_string(n) +
                                     ", so it has no polynomial inverse";
                report.conclusive = true;
            } else {
                report.notes.push_back("F mod I permutes (Z/" + m.get_str() + ")^" + std::to_string(n) +
                                       " (necessary, not sufficient)");
            }
        }
    }
    const bool prime_modulus = dom.prime_factors().size() == 1 && dom.prime_factors().front() == m;
    if (fbar_known && prime_modulus && n == 1 && fbar.max_degree() >= 2) {
        const std::string degree_note = "degree obstruction: over the field Z/" + m.get_str() +
                                        " deg(F o G) = deg F * deg G, which cannot be 1 when deg F = " +
                                        std::to_string(fbar.max_degree());
        if (report.obstruction.empty()) {
            report.obstruction = degree_note;
        } else {
            report.notes.push_back(degree_note);
        }
        report.conclusive = true;
    }
    if (report.obstruction.empty()) {
        report.obstruction = "formal inverse of F mod I has nonzero terms up to degree " + std::to_string(top) +
                             " within the window [" + std::to_string(work_cap - std::min(window, work_cap)) + ", " +
                             std::to_string(work_cap) + "); no polynomial inverse detected (heuristic)";
        report.conclusive = false;
    }
    return report;
}

} // namespace tate

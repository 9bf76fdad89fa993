#include "tate/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace tate {

json domain_to_json(const Domain &d)
{
    switch (d.kind()) {
    case DomainKind::truncated_adic:
        return json{{"kind", "truncated_adic"}, {"m", d.modulus().get_ui()}, {"N", d.precision()}};
    case DomainKind::exact_integer_adic:
        return json{{"kind", "exact_integer_adic"}, {"m", d.modulus().get_ui()}};
    case DomainKind::rational_discrete:
        return json{{"kind", "rational_discrete"}};
    }
    return json{};
}

namespace {

mpz_class json_modulus(const json &j)
{
    if (!j.contains("m")) {
        throw ParseError("domain needs a modulus \"m\"", 0);
    }
    const json &m = j.at("m");
    if (m.is_number_unsigned() || m.is_number_integer()) {
        return mpz_class(std::to_string(m.get<long long>()));
    }
    if (m.is_string()) {
        mpz_class v;
        if (v.set_str(m.get<std::string>(), 10) != 0) {
            throw ParseError("domain modulus is not an integer", 0);
        }
        return v;
    }
    throw ParseError("domain modulus must be an integer", 0);
}

unsigned json_unsigned(const json &j, const char *key)
{
    const json &v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 100000) {
        throw ParseError(std::string("\"") + key + "\" must be a small nonnegative integer", 0);
    }
    return static_cast<unsigned>(v.get<long long>());
}

Scalar parse_scalar(const std::string &text)
{
    Scalar q;
    std::string t = text;
    if (!t.empty() && t.front() == '+') {
        t.erase(0, 1);
    }
    if (t.empty() || q.set_str(t, 10) != 0 || q.get_den() == 0) {
        throw ParseError("coefficient \"" + text + "\" is not a decimal integer or fraction", 0);
    }
    q.canonicalize();
    return q;
}

} // namespace

Domain domain_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ParseError("domain must be an object with a \"kind\"", 0);
    }
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "truncated_adic") {
            if (!j.contains("N")) {
                throw ParseError("truncated_adic domain needs a precision \"N\"", 0);
            }
            return Domain::truncated_adic(json_modulus(j), json_unsigned(j, "N"));
        }
        if (kind == "exact_integer_adic") {
            return Domain::exact_integer_adic(json_modulus(j));
        }
        if (kind == "rational_discrete") {
            return Domain::rational_discrete();
        }
    } catch (const ContractError &e) {
        throw ParseError(std::string("invalid domain: ") + e.what(), 0);
    }
    throw ParseError("unknown domain kind \"" + kind + "\"", 0);
}

Domain parse_domain(std::string_view text)
{
    std::string s(text);
    if (!s.empty() && s.front() == '{') {
        return domain_from_json(parse_json_text(s));
    }
    if (s == "q" || s == "Q") {
        return Domain::rational_discrete();
    }
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ':');) {
        parts.push_back(part);
    }
    auto number = [&](std::size_t i) {
        mpz_class v;
        if (i >= parts.size() || v.set_str(parts[i], 10) != 0) {
            throw ParseError("malformed domain \"" + s + "\"", 0);
        }
        return v;
    };
    try {
        if (parts.size() == 3 && parts[0] == "z-adic") {
            mpz_class n = number(2);
            if (n < 1 || n > 100000) {
                throw ParseError("domain precision out of range in \"" + s + "\"", 0);
            }
            return Domain::truncated_adic(number(1), static_cast<unsigned>(n.get_ui()));
        }
        if (parts.size() == 2 && parts[0] == "z-exact") {
            return Domain::exact_integer_adic(number(1));
        }
    } catch (const ContractError &e) {
        throw ParseError(std::string("invalid domain: ") + e.what(), 0);
    }
    throw ParseError("malformed domain \"" + s + "\" (expected z-adic:m:N, z-exact:m or q)", 0);
}

json series_to_json(const TateSeries &f)
{
    json terms = json::array();
    for (const auto &t : f.terms()) {
        terms.push_back(json::array({t.index.exponents(f.nvars()), t.coeff.get_str()}));
    }
    return json{{"n", f.nvars()}, {"terms", terms}, {"D", f.cap()}, {"polynomial", f.is_polynomial()}};
}

TateSeries series_from_json(const json &j, const Domain &domain, std::optional<unsigned> default_cap,
                            std::optional<unsigned> default_n)
{
    if (j.is_string()) {
        if (!default_cap) {
            throw ParseError("inline series needs a degree cap", 0);
        }
        return parse_series_literal(j.get<std::string>(), domain, default_n.value_or(0), *default_cap);
    }
    if (!j.is_object()) {
        throw ParseError("series must be an object or an inline string", 0);
    }
    unsigned n = 0;
    if (j.contains("n")) {
        n = json_unsigned(j, "n");
    } else if (default_n) {
        n = *default_n;
    } else {
        throw ParseError("series needs a variable count \"n\"", 0);
    }
    unsigned cap = 0;
    if (j.contains("D")) {
        cap = json_unsigned(j, "D");
    } else if (default_cap) {
        cap = *default_cap;
    } else {
        throw ParseError("series needs a degree cap \"D\"", 0);
    }
    if (n < 1 || n > kMaxVariables) {
        throw ParseError("series variable count must lie in [1, 8]", 0);
    }
    if (cap > kMaxDegreeCap) {
        throw ParseError("degree cap exceeds 128", 0);
    }
    const bool polynomial = j.value("polynomial", true);
    if (!j.contains("terms") || !j.at("terms").is_array()) {
        throw ParseError("series needs a \"terms\" array", 0);
    }
    std::vector<Term> terms;
    std::size_t k = 0;
    for (const auto &entry : j.at("terms")) {
        const std::string where = "term " + std::to_string(k++);
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array()) {
            throw ParseError(where + " must be [[exponents...], \"coefficient\"]", 0);
        }
        if (entry[0].size() != n) {
            throw ParseError(where + " has " + std::to_string(entry[0].size()) + " exponents, expected " +
                                 std::to_string(n),
                             0);
        }
        std::vector<unsigned> exps;
        for (const auto &e : entry[0]) {
            if (!e.is_number_integer() || e.get<long long>() < 0 || e.get<long long>() >= kMaxDegreeCap) {
                throw ParseError(where + " has an invalid exponent", 0);
            }
            exps.push_back(static_cast<unsigned>(e.get<long long>()));
        }
        Scalar c;
        if (entry[1].is_string()) {
            c = parse_scalar(entry[1].get<std::string>());
        } else if (entry[1].is_number_integer()) {
            c = Scalar(mpz_class(std::to_string(entry[1].get<long long>())));
        } else {
            throw ParseError(where + " coefficient must be a decimal string", 0);
        }
        try {
            terms.push_back(Term{MultiIndex::from_exponents(exps), c});
        } catch (const ContractError &e) {
            throw ParseError(where + ": " + e.what(), 0);
        }
    }
    try {
        return TateSeries::from_terms(domain, n, cap, std::move(terms), polynomial);
    } catch (const ContractError &e) {
        throw ParseError(std::string("invalid series: ") + e.what(), 0);
    }
}

namespace {

class LiteralParser {
public:
    LiteralParser(std::string_view text, const Domain &domain, unsigned n)
        : text_(text), domain_(domain), n_(n)
    {
    }

    TateSeries parse()
    {
        TateSeries s = expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        }
        return s;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw ParseError("series literal: " + what, pos_);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool peek(char c)
    {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    TateSeries constant(const Scalar &c) const
    {
        return TateSeries::constant(domain_, n_, kMaxDegreeCap, c);
    }

    TateSeries expression()
    {
        skip_space();
        bool negate = false;
        if (peek('+') || peek('-')) {
            negate = text_[pos_] == '-';
            ++pos_;
        }
        TateSeries acc = term();
        if (negate) {
            acc = series_neg(acc);
        }
        while (peek('+') || peek('-')) {
            const bool minus = text_[pos_] == '-';
            ++pos_;
            TateSeries t = term();
            acc = minus ? series_sub(acc, t) : series_add(acc, t);
        }
        return acc;
    }

    bool starts_factor()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == 'x' || c == 'X' || c == '(';
    }

    TateSeries term()
    {
        TateSeries acc = factor();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc = series_mul(acc, factor());
            } else if (peek('/')) {
                ++pos_;
                skip_space();
                Scalar d(integer());
                if (sgn(d) == 0) {
                    fail("division by zero");
                }
                try {
                    acc = series_scale(acc, Scalar(1) / d);
                } catch (const ContractError &e) {
                    fail(e.what());
                }
            } else if (starts_factor()) {
                acc = series_mul(acc, factor());
            } else {
                return acc;
            }
        }
    }

    mpz_class integer()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a number");
        }
        return mpz_class(std::string(text_.substr(start, pos_ - start)));
    }

    unsigned exponent()
    {
        if (!peek('^')) {
            return 1;
        }
        ++pos_;
        skip_space();
        mpz_class e = integer();
        if (e >= kMaxDegreeCap) {
            fail("exponent too large");
        }
        return static_cast<unsigned>(e.get_ui());
    }

    TateSeries power(const TateSeries &base, unsigned e) const
    {
        TateSeries r = constant(1);
        for (unsigned k = 0; k < e; ++k) {
            r = series_mul(r, base);
        }
        return r;
    }

    TateSeries factor()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            TateSeries inner = expression();
            if (!peek(')')) {
                fail("expected ')'");
            }
            ++pos_;
            return power(inner, exponent());
        }
        if (c == 'x' || c == 'X') {
            ++pos_;
            unsigned index = 1;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
                mpz_class i = integer();
                if (i < 1 || i > n_) {
                    fail("variable index out of range");
                }
                index = static_cast<unsigned>(i.get_ui());
            }
            unsigned e = exponent();
            std::vector<unsigned> exps(n_, 0);
            exps[index - 1] = e;
            return TateSeries::from_terms(domain_, n_, kMaxDegreeCap,
                                          {Term{MultiIndex::from_exponents(exps), Scalar(1)}});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            Scalar v(integer());
            try {
                return power(constant(v), exponent());
            } catch (const ContractError &e) {
                fail(e.what());
            }
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const Domain &domain_;
    unsigned n_;
    std::size_t pos_ = 0;
};

unsigned infer_nvars(std::string_view text)
{
    unsigned n = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'x' && text[i] != 'X') {
            continue;
        }
        std::size_t j = i + 1;
        unsigned v = 0;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) != 0 && v < 1000) {
            v = v * 10 + static_cast<unsigned>(text[j] - '0');
            ++j;
        }
        n = std::max(n, v);
    }
    return n;
}

} // namespace

TateSeries parse_series_literal(std::string_view text, const Domain &domain, unsigned n, unsigned cap)
{
    if (n == 0) {
        n = infer_nvars(text);
    }
    if (n > kMaxVariables) {
        throw ParseError("series literal uses more than 8 variables", 0);
    }
    if (cap > kMaxDegreeCap) {
        throw ParseError("degree cap exceeds 128", 0);
    }
    try {
        return LiteralParser(text, domain, n).parse().recapped(cap);
    } catch (const ContractError &e) {
        throw ParseError(std::string("series literal: ") + e.what(), 0);
    }
}

json map_to_json(const PolyMap &f)
{
    json comps = json::array();
    for (const auto &c : f.components()) {
        comps.push_back(series_to_json(c));
    }
    return json{{"domain", domain_to_json(f.domain())}, {"D", f.cap()}, {"components", comps}};
}

PolyMap map_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("domain") || !j.contains("components") || !j.at("components").is_array()) {
        throw ParseError("map must be an object with \"domain\" and \"components\"", 0);
    }
    const Domain domain = domain_from_json(j.at("domain"));
    std::optional<unsigned> cap;
    if (j.contains("D")) {
        cap = json_unsigned(j, "D");
    }
    const auto &comps = j.at("components");
    if (comps.empty() || comps.size() > kMaxVariables) {
        throw ParseError("map needs between 1 and 8 components", 0);
    }
    const unsigned n = static_cast<unsigned>(comps.size());
    std::vector<TateSeries> out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        try {
            out.push_back(series_from_json(comps[i], domain, cap, n));
        } catch (const ParseError &e) {
            throw ParseError("component " + std::to_string(i + 1) + ": " + e.message(), e.position());
        }
    }
    try {
        return PolyMap(std::move(out));
    } catch (const ContractError &e) {
        throw ParseError(std::string("invalid map: ") + e.what(), 0);
    }
}

json parse_json_text(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
    }
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

PolyMap load_map_file(const std::filesystem::path &path)
{
    const std::string text = read_file(path);
    try {
        return map_from_json(parse_json_text(text));
    } catch (const ParseError &e) {
        throw ParseError(path.string() + ": " + e.message(), e.position());
    }
}

} // namespace tate

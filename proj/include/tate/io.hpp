#ifndef TATE_IO_HPP
#define TATE_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tate/maps.hpp"

namespace tate {

using json = nlohmann::json;

// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"kind":"truncated_adic","m":5,"N":8}, {"kind":"exact_integer_adic","m":2},
// {"kind":"rational_discrete"}
json domain_to_json(const Domain &d);
Domain domain_from_json(const json &j);
// CLI shorthand: "z-adic:m:N", "z-exact:m", "q", or a JSON object.
Domain parse_domain(std::string_view text);

// {"n":2,"terms":[[[1,0],"1"],[[0,2],"5"]],"D":16,"polynomial":true}
// Coefficients are decimal strings ("a/b" allowed). "polynomial" defaults
// to true on input: a literal lists every nonzero term.
json series_to_json(const TateSeries &f);
TateSeries series_from_json(const json &j, const Domain &domain, std::optional<unsigned> default_cap = {},
                            std::optional<unsigned> default_n = {});

// Inline syntax: sums of products of integers, fractions a/b, variables
// x (= x1), x1 .. x8 with optional ^k, and parenthesized subexpressions;
// '*' may be omitted ("1+5x", "3*x1^2*x2 - x2/2"). n == 0 infers the
// variable count from the highest index used.
TateSeries parse_series_literal(std::string_view text, const Domain &domain, unsigned n, unsigned cap);

// {"domain":{...},"D":16,"components":[<series json or inline string>, ...]}
json map_to_json(const PolyMap &f);
PolyMap map_from_json(const json &j);

json parse_json_text(std::string_view text);
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);
PolyMap load_map_file(const std::filesystem::path &path);

} // namespace tate

#endif

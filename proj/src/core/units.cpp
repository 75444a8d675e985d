#include "cosim/units.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "cosim/errors.hpp"

namespace cosim {

std::string Dimension::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(exponents[i]);
    }
    out += ')';
    return out;
}

Unit::Unit(Dimension dimension, double scale_to_si, std::string symbol)
    : dimension_(dimension), scale_(scale_to_si), symbol_(std::move(symbol)) {
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw InvalidConfig("unit scale must be positive and finite");
    }
    if (symbol_.empty()) {
        symbol_ = dimension_.dimensionless() && scale_ == 1.0 ? "1" : dimension_.to_string();
    }
}

Unit operator*(const Unit& a, const Unit& b) {
    return Unit(a.dimension_ + b.dimension_, a.scale_ * b.scale_, a.symbol_ + "*" + b.symbol_);
}

Unit operator/(const Unit& a, const Unit& b) {
    return Unit(a.dimension_ - b.dimension_, a.scale_ / b.scale_, a.symbol_ + "/" + b.symbol_);
}

namespace {

struct NamedUnit {
    std::string_view symbol;
    Dimension dimension;
    double scale;
};

constexpr double pi = std::numbers::pi;

// Symbols that may carry an SI prefix.
constexpr NamedUnit prefixable[] = {
    {"g", dimensions::mass, 1e-3},
    {"m", dimensions::length, 1.0},
    {"s", dimensions::time, 1.0},
    {"A", dimensions::current, 1.0},
    {"K", dimensions::temperature, 1.0},
    {"mol", dimensions::amount, 1.0},
    {"cd", dimensions::luminosity, 1.0},
    {"N", Dimension{1, 1, -2}, 1.0},
    {"J", Dimension{1, 2, -2}, 1.0},
    {"W", dimensions::power, 1.0},
    {"V", Dimension{1, 2, -3, -1}, 1.0},
    {"Pa", Dimension{1, -1, -2}, 1.0},
    {"Hz", Dimension{0, 0, -1}, 1.0},
    {"C", Dimension{0, 0, 1, 1}, 1.0},
    {"F", Dimension{-1, -2, 4, 2}, 1.0},
    {"H", Dimension{1, 2, -2, -2}, 1.0},
    {"Ohm", Dimension{1, 2, -3, -2}, 1.0},
    {"rad", dimensions::none, 1.0},
    {"bar", Dimension{1, -1, -2}, 1e5},
};

// Symbols taken verbatim.
constexpr NamedUnit plain[] = {
    {"1", dimensions::none, 1.0},
    {"kg", dimensions::mass, 1.0},
    {"min", dimensions::time, 60.0},
    {"h", dimensions::time, 3600.0},
    {"rpm", Dimension{0, 0, -1}, 2.0 * pi / 60.0},
    {"deg", dimensions::none, pi / 180.0},
    {"percent", dimensions::none, 1e-2},
};

constexpr std::pair<std::string_view, double> prefixes[] = {
    {"G", 1e9}, {"M", 1e6}, {"k", 1e3}, {"h", 1e2}, {"c", 1e-2},
    {"m", 1e-3}, {"u", 1e-6}, {"n", 1e-9}, {"p", 1e-12},
};

std::optional<NamedUnit> lookup(std::string_view symbol) {
    for (const auto& u : plain) {
        if (u.symbol == symbol) return u;
    }
    for (const auto& u : prefixable) {
        if (u.symbol == symbol) return u;
    }
    for (const auto& [prefix, factor] : prefixes) {
        if (symbol.size() <= prefix.size() || symbol.substr(0, prefix.size()) != prefix) continue;
        const auto rest = symbol.substr(prefix.size());
        for (const auto& u : prefixable) {
            if (u.symbol == rest) return NamedUnit{symbol, u.dimension, u.scale * factor};
        }
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

Unit parse_factor(std::string_view token, std::string_view whole) {
    token = trim(token);
    int exponent = 1;
    if (const auto caret = token.find('^'); caret != std::string_view::npos) {
        const auto digits = token.substr(caret + 1);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw InvalidConfig("bad exponent in unit '" + std::string(whole) + "'");
        }
        token = token.substr(0, caret);
    }
    const auto named = lookup(token);
    if (!named) throw InvalidConfig("unknown unit symbol '" + std::string(token) + "'");
    return Unit(exponent * named->dimension, std::pow(named->scale, exponent), std::string(token));
}

}  // namespace

Unit parse_unit(std::string_view text) {
    const auto whole = trim(text);
    if (whole.empty()) throw InvalidConfig("empty unit");

    Dimension dim;
    double scale = 1.0;
    bool dividing = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= whole.size(); ++i) {
        if (i < whole.size() && whole[i] != '*' && whole[i] != '/' && whole[i] != '.') continue;
        const auto factor = parse_factor(whole.substr(start, i - start), whole);
        if (dividing) {
            dim = dim - factor.dimension();
            scale /= factor.scale_to_si();
        } else {
            dim = dim + factor.dimension();
            scale *= factor.scale_to_si();
        }
        if (i < whole.size()) dividing = whole[i] == '/';
        start = i + 1;
    }
    return Unit(dim, scale, std::string(whole));
}

void check_power_bond(const Unit& effort, const Unit& flow) {
    const auto product = effort.dimension() + flow.dimension();
    if (product != dimensions::power) {
        throw DimensionMismatch("effort " + effort.dimension().to_string() + " times flow " +
                                flow.dimension().to_string() + " is not a power (" +
                                product.to_string() + " != " + dimensions::power.to_string() + ")");
    }
}

double convert_value(double value, const Unit& from, const Unit& to) {
    if (!from.convertible_to(to)) {
        throw DimensionMismatch("cannot convert " + from.symbol() + " " + from.dimension().to_string() +
                                " to " + to.symbol() + " " + to.dimension().to_string());
    }
    return value * from.scale_to_si() / to.scale_to_si();
}

}  // namespace cosim

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace cosim {

/// Exponents over the seven SI base dimensions, in the order
/// mass, length, time, current, temperature, amount, luminosity.
struct Dimension {
    std::array<std::int8_t, 7> exponents{};

    constexpr Dimension() = default;
    constexpr Dimension(int mass, int length, int time, int current = 0, int temperature = 0,
                        int amount = 0, int luminosity = 0)
        : exponents{static_cast<std::int8_t>(mass),        static_cast<std::int8_t>(length),
                    static_cast<std::int8_t>(time),        static_cast<std::int8_t>(current),
                    static_cast<std::int8_t>(temperature), static_cast<std::int8_t>(amount),
                    static_cast<std::int8_t>(luminosity)} {}

    constexpr bool dimensionless() const {
        for (auto e : exponents) {
            if (e != 0) return false;
        }
        return true;
    }

    friend constexpr Dimension operator+(const Dimension& a, const Dimension& b) {
        Dimension r;
        for (std::size_t i = 0; i < r.exponents.size(); ++i) {
            r.exponents[i] = static_cast<std::int8_t>(a.exponents[i] + b.exponents[i]);
        }
        return r;
    }
    friend constexpr Dimension operator-(const Dimension& a, const Dimension& b) {
        Dimension r;
        for (std::size_t i = 0; i < r.exponents.size(); ++i) {
            r.exponents[i] = static_cast<std::int8_t>(a.exponents[i] - b.exponents[i]);
        }
        return r;
    }
    friend constexpr Dimension operator*(int n, const Dimension& a) {
        Dimension r;
        for (std::size_t i = 0; i < r.exponents.size(); ++i) {
            r.exponents[i] = static_cast<std::int8_t>(n * a.exponents[i]);
        }
        return r;
    }
    friend constexpr bool operator==(const Dimension&, const Dimension&) = default;

    /// "(1,2,-3,-1,0,0,0)"
    std::string to_string() const;
};

namespace dimensions {
inline constexpr Dimension none{};
inline constexpr Dimension mass{1, 0, 0};
inline constexpr Dimension length{0, 1, 0};
inline constexpr Dimension time{0, 0, 1};
inline constexpr Dimension current{0, 0, 0, 1};
inline constexpr Dimension temperature{0, 0, 0, 0, 1};
inline constexpr Dimension amount{0, 0, 0, 0, 0, 1};
inline constexpr Dimension luminosity{0, 0, 0, 0, 0, 0, 1};
inline constexpr Dimension power{1, 2, -3};
}  // namespace dimensions

/// A multiplicative unit: a dimension plus the factor taking one unit of the
/// quantity to coherent SI. Affine units (degrees Celsius) are not representable.
class Unit {
public:
    Unit() = default;
    Unit(Dimension dimension, double scale_to_si, std::string symbol = {});

    const Dimension& dimension() const noexcept { return dimension_; }
    double scale_to_si() const noexcept { return scale_; }
    /// The symbol the unit was parsed from, or a canonical SI rendering.
    const std::string& symbol() const noexcept { return symbol_; }

    bool convertible_to(const Unit& other) const noexcept { return dimension_ == other.dimension_; }

    friend Unit operator*(const Unit& a, const Unit& b);
    friend Unit operator/(const Unit& a, const Unit& b);

    /// Units compare by dimension and scale; the symbol is cosmetic.
    friend bool operator==(const Unit& a, const Unit& b) noexcept {
        return a.dimension_ == b.dimension_ && a.scale_ == b.scale_;
    }

private:
    Dimension dimension_{};
    double scale_ = 1.0;
    std::string symbol_ = "1";
};

/// Parses expressions such as "N", "kN", "m/s", "rad/s", "rpm", "N*m", "kg*m^2",
/// "N.s/m" or "1". Throws InvalidConfig on unknown symbols.
Unit parse_unit(std::string_view text);

/// Throws DimensionMismatch unless effort x flow has the dimension of watts.
void check_power_bond(const Unit& effort, const Unit& flow);

/// value * from.scale_to_si / to.scale_to_si. Throws DimensionMismatch.
double convert_value(double value, const Unit& from, const Unit& to);

}  // namespace cosim

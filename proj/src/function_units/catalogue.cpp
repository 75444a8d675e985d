#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "cosim/errors.hpp"
#include "cosim/function_units.hpp"

namespace cosim {

FunctionUnit::FunctionUnit(SlaveDescriptor descriptor) : descriptor_(std::move(descriptor)) {
    for (auto& v : descriptor_.variables) {
        if (v.causality == Causality::input) {
            ++inputs_;
        } else {
            v.direct_feedthrough = true;
        }
    }
    check_descriptor(descriptor_);
}

namespace {

// Typed access to the settings of one spec; complains about anything left
// unread.
class Settings {
public:
    explicit Settings(const FunctionUnitSpec& spec) : spec_(spec) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidConfig("function unit '" + spec_.name + "' (" + spec_.kind + "): " + what);
    }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        const auto it = spec_.settings.find(key);
        if (it == spec_.settings.end()) return std::nullopt;
        return it->second;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const auto text = raw(key);
        if (!text) {
            if (fallback) return *fallback;
            fail("missing setting '" + key + "'");
        }
        double value = 0.0;
        const auto* end = text->data() + text->size();
        const auto [ptr, ec] = std::from_chars(text->data(), end, value);
        if (ec != std::errc{} || ptr != end || !std::isfinite(value)) fail("'" + key + "' is not a finite number");
        return value;
    }

    std::size_t count(const std::string& key) {
        const double n = number(key);
        if (n < 1.0 || n > 256.0 || n != std::floor(n)) fail("'" + key + "' must be an integer in 1..256");
        return static_cast<std::size_t>(n);
    }

    Unit unit(const std::string& key, const char* fallback = nullptr) {
        const auto text = raw(key);
        if (!text && !fallback) fail("missing setting '" + key + "'");
        try {
            return parse_unit(text ? *text : fallback);
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    VariableKind type() {
        const auto text = raw("type").value_or("signal");
        if (text == "signal") return VariableKind::signal;
        if (text == "effort") return VariableKind::effort;
        if (text == "flow") return VariableKind::flow;
        fail("type must be signal, effort or flow");
    }

    void finish() const {
        for (const auto& [key, value] : spec_.settings) {
            if (!used_.count(key)) fail("unknown setting '" + key + "'");
        }
    }

private:
    const FunctionUnitSpec& spec_;
    std::set<std::string> used_;
};

VariableDescriptor in(std::string name, VariableKind kind, Unit unit) {
    return {std::move(name), Causality::input, kind, std::move(unit), false};
}

VariableDescriptor out(std::string name, VariableKind kind, Unit unit) {
    return {std::move(name), Causality::output, kind, std::move(unit), true};
}

using Body = std::function<void(std::span<const double>, std::span<double>, double)>;

class GenericUnit final : public FunctionUnit {
public:
    GenericUnit(SlaveDescriptor d, Body body) : FunctionUnit(std::move(d)), body_(std::move(body)) {}

    void evaluate(std::span<const double> inputs, std::span<double> outputs, double t) const override {
        body_(inputs, outputs, t);
    }

private:
    Body body_;
};

std::unique_ptr<FunctionUnit> make(std::vector<VariableDescriptor> variables, Body body) {
    SlaveDescriptor d;
    d.variables = std::move(variables);
    return std::make_unique<GenericUnit>(std::move(d), std::move(body));
}

std::unique_ptr<FunctionUnit> make_constant(Settings& s) {
    const double value = s.number("value");
    return make({out("y", s.type(), s.unit("unit", "1"))},
                [value](std::span<const double>, std::span<double> y, double) { y[0] = value; });
}

std::unique_ptr<FunctionUnit> make_gain(Settings& s) {
    const double gain = s.number("gain");
    const auto kind = s.type();
    const auto unit = s.unit("unit", "1");
    return make({in("u", kind, unit), out("y", kind, unit)},
                [gain](std::span<const double> u, std::span<double> y, double) { y[0] = gain * u[0]; });
}

std::unique_ptr<FunctionUnit> make_sum(Settings& s) {
    const auto n = s.count("arity");
    const auto kind = s.type();
    const auto unit = s.unit("unit", "1");
    std::vector<VariableDescriptor> v;
    for (std::size_t j = 1; j <= n; ++j) v.push_back(in("u" + std::to_string(j), kind, unit));
    v.push_back(out("y", kind, unit));
    return make(std::move(v), [](std::span<const double> u, std::span<double> y, double) {
        double sum = 0.0;
        for (double x : u) sum += x;
        y[0] = sum;
    });
}

std::unique_ptr<FunctionUnit> make_unit_convert(Settings& s) {
    const auto from = s.unit("from");
    const auto to = s.unit("to");
    const auto kind = s.type();
    if (!from.convertible_to(to)) {
        s.fail("cannot convert " + from.dimension().to_string() + " to " + to.dimension().to_string());
    }
    return make({in("u", kind, from), out("y", kind, to)},
                [from, to](std::span<const double> u, std::span<double> y, double) {
                    y[0] = convert_value(u[0], from, to);
                });
}

std::unique_ptr<FunctionUnit> make_splitter(Settings& s) {
    const auto n = s.count("arity");
    const auto kind = s.type();
    const auto unit = s.unit("unit", "1");
    std::vector<VariableDescriptor> v{in("u", kind, unit)};
    for (std::size_t j = 1; j <= n; ++j) v.push_back(out("y" + std::to_string(j), kind, unit));
    return make(std::move(v), [](std::span<const double> u, std::span<double> y, double) {
        for (auto& x : y) x = u[0];
    });
}

// Inputs per attachment point j: F{j}_x, F{j}_y, F{j}_z, r{j}_x, r{j}_y, r{j}_z.
std::unique_ptr<FunctionUnit> make_force_aggregator(Settings& s) {
    const auto n = s.count("arity");
    const auto newton = parse_unit("N");
    const auto metre = parse_unit("m");
    std::vector<VariableDescriptor> v;
    for (std::size_t j = 1; j <= n; ++j) {
        const auto tag = std::to_string(j);
        for (const char* axis : {"_x", "_y", "_z"}) v.push_back(in("F" + tag + axis, VariableKind::signal, newton));
        for (const char* axis : {"_x", "_y", "_z"}) v.push_back(in("r" + tag + axis, VariableKind::signal, metre));
    }
    for (const char* axis : {"_x", "_y", "_z"}) v.push_back(out(std::string("F") + axis, VariableKind::signal, newton));
    for (const char* axis : {"_x", "_y", "_z"}) {
        v.push_back(out(std::string("M") + axis, VariableKind::signal, parse_unit("N*m")));
    }
    return make(std::move(v), [n](std::span<const double> u, std::span<double> y, double) {
        for (auto& x : y) x = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double* f = &u[6 * j];
            const double* r = &u[6 * j + 3];
            y[0] += f[0];
            y[1] += f[1];
            y[2] += f[2];
            y[3] += r[1] * f[2] - r[2] * f[1];
            y[4] += r[2] * f[0] - r[0] * f[2];
            y[5] += r[0] * f[1] - r[1] * f[0];
        }
    });
}

// Bus voltage fanned out to the legs, leg currents summed into the bus.
// A leg whose breaker input is below 0.5 is open: zero voltage, no current.
std::unique_ptr<FunctionUnit> make_switchboard(Settings& s) {
    const auto n = s.count("legs");
    const auto volt = parse_unit("V");
    const auto amp = parse_unit("A");
    std::vector<VariableDescriptor> v{in("v_bus", VariableKind::effort, volt)};
    for (std::size_t j = 1; j <= n; ++j) v.push_back(in("i" + std::to_string(j), VariableKind::flow, amp));
    for (std::size_t j = 1; j <= n; ++j) v.push_back(in("breaker" + std::to_string(j), VariableKind::signal, Unit{}));
    v.push_back(out("i_bus", VariableKind::flow, amp));
    for (std::size_t j = 1; j <= n; ++j) v.push_back(out("v" + std::to_string(j), VariableKind::effort, volt));
    return make(std::move(v), [n](std::span<const double> u, std::span<double> y, double) {
        double bus = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const bool closed = u[1 + n + j] >= 0.5;
            if (closed) bus += u[1 + j];
            y[1 + j] = closed ? u[0] : 0.0;
        }
        y[0] = bus;
    });
}

const std::map<std::string, std::unique_ptr<FunctionUnit> (*)(Settings&)>& catalogue() {
    static const std::map<std::string, std::unique_ptr<FunctionUnit> (*)(Settings&)> kinds{
        {"constant", make_constant},         {"gain", make_gain},
        {"sum", make_sum},                   {"unit_convert", make_unit_convert},
        {"splitter", make_splitter},         {"force_aggregator", make_force_aggregator},
        {"switchboard", make_switchboard},
    };
    return kinds;
}

}  // namespace

std::unique_ptr<FunctionUnit> make_function_unit(const FunctionUnitSpec& spec) {
    const auto it = catalogue().find(spec.kind);
    if (it == catalogue().end()) {
        throw InvalidConfig("function unit '" + spec.name + "': unknown kind '" + spec.kind + "'");
    }
    Settings settings(spec);
    auto unit = it->second(settings);
    settings.finish();
    return unit;
}

std::vector<std::string> function_unit_kinds() {
    std::vector<std::string> kinds;
    for (const auto& [kind, factory] : catalogue()) kinds.push_back(kind);
    return kinds;
}

SlaveDescriptor SourceResolver::function_unit(const FunctionUnitSpec& spec) const {
    auto d = make_function_unit(spec)->descriptor();
    d.model_id = spec.kind;
    return d;
}

}  // namespace cosim

#include "cosim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <list>
#include <map>
#include <set>
#include <sstream>

#include "cosim/errors.hpp"

namespace cosim {

namespace {

std::string_view trim(std::string_view s) {
    const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && space(s.front())) s.remove_prefix(1);
    while (!s.empty() && space(s.back())) s.remove_suffix(1);
    return s;
}

struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
};

struct Section {
    std::string kind;
    std::string name;
    std::size_t line;
    std::vector<Entry> entries;
};

class Parser {
public:
    explicit Parser(std::string_view text) { split(text); }

    ParseResult run() {
        interpret();
        std::stable_sort(diags_.begin(), diags_.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
        ParseResult result;
        if (diags_.empty()) {
            result.system = std::move(sys_);
        } else {
            result.diagnostics = std::move(diags_);
        }
        return result;
    }

private:
    void error(std::size_t line, std::string message) { diags_.push_back({line, std::move(message)}); }

    void split(std::string_view text) {
        std::size_t pos = 0;
        for (std::size_t line_no = 1;; ++line_no) {
            const auto nl = text.find('\n', pos);
            auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (!line.empty()) {
                if (line.front() == '[') {
                    header(line, line_no);
                } else {
                    entry(line, line_no);
                }
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }

    void header(std::string_view line, std::size_t line_no) {
        if (line.back() != ']') {
            error(line_no, "unterminated section header");
            current_ = nullptr;
            return;
        }
        auto inner = trim(line.substr(1, line.size() - 2));
        const auto space = inner.find_first_of(" \t");
        Section s;
        s.kind = std::string(inner.substr(0, space));
        s.name = space == std::string_view::npos ? "" : std::string(trim(inner.substr(space)));
        s.line = line_no;
        static const std::set<std::string> named{"slave", "bond", "fu"};
        static const std::set<std::string> anonymous{"simulation", "signal"};
        if (named.count(s.kind)) {
            if (s.name.empty()) {
                error(line_no, "section [" + s.kind + "] needs a name");
            } else if (s.name.find_first_of(". \t[]") != std::string::npos) {
                error(line_no, "name '" + s.name + "' must not contain '.', '[', ']' or spaces");
            }
        } else if (anonymous.count(s.kind)) {
            if (!s.name.empty()) error(line_no, "section [" + s.kind + "] takes no name");
        } else {
            error(line_no, "unknown section [" + s.kind + "]");
            current_ = nullptr;
            return;
        }
        sections_.push_back(std::move(s));
        current_ = &sections_.back();
    }

    void entry(std::string_view line, std::size_t line_no) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            error(line_no, "expected 'key = value'");
            return;
        }
        const auto key = std::string(trim(line.substr(0, eq)));
        const auto value = std::string(trim(line.substr(eq + 1)));
        if (key.empty()) {
            error(line_no, "missing key before '='");
            return;
        }
        if (value.empty()) {
            error(line_no, "missing value for '" + key + "'");
            return;
        }
        if (sections_.empty()) {
            error(line_no, "'" + key + "' outside of any section");
            return;
        }
        // Entries after a rejected header are dropped silently; the header
        // already has a diagnostic.
        if (current_ == nullptr) return;
        for (const auto& e : current_->entries) {
            if (e.key == key) {
                error(line_no, "duplicate key '" + key + "' (lines " + std::to_string(e.line) + " and " +
                                   std::to_string(line_no) + ")");
                return;
            }
        }
        current_->entries.push_back({key, value, line_no});
    }

    std::optional<double> number(const Entry& e) {
        auto v = parse_real(e.value);
        if (!v) error(e.line, "'" + e.key + "' must be a number, got '" + e.value + "'");
        return v;
    }

    std::optional<VariableRef> ref(const Entry& e, std::string_view text) {
        try {
            return parse_variable_ref(std::string(trim(text)));
        } catch (const Error& ex) {
            error(e.line, "'" + e.key + "': " + ex.what());
            return std::nullopt;
        }
    }

    std::optional<BondSide> side(const Entry& e) {
        const auto comma = e.value.find(',');
        if (comma == std::string::npos) {
            error(e.line, "'" + e.key + "' must be 'entity.output, entity.input'");
            return std::nullopt;
        }
        auto out = ref(e, std::string_view(e.value).substr(0, comma));
        auto in = ref(e, std::string_view(e.value).substr(comma + 1));
        if (!out || !in) return std::nullopt;
        return BondSide{*out, *in};
    }

    const Entry* find(const Section& s, std::string_view key) {
        for (const auto& e : s.entries) {
            if (e.key == key) return &e;
        }
        return nullptr;
    }

    const Entry* require(const Section& s, std::string_view key) {
        const auto* e = find(s, key);
        if (e == nullptr) error(s.line, "[" + s.kind + (s.name.empty() ? "" : " " + s.name) + "]: missing " +
                                            std::string(key));
        return e;
    }

    void reject_unknown(const Section& s, const std::set<std::string>& known) {
        for (const auto& e : s.entries) {
            if (!known.count(e.key)) error(e.line, "unknown key '" + e.key + "' in [" + s.kind + "]");
        }
    }

    void claim_name(const Section& s) {
        // Bonds have their own namespace; slaves and function units share one.
        auto [it, fresh] = names_.emplace((s.kind == "bond" ? "bond " : "") + s.name, &s);
        if (!fresh) {
            const auto& other = *it->second;
            error(s.line, "duplicate " + s.kind + " name '" + s.name + "' (lines " + std::to_string(other.line) +
                              " and " + std::to_string(s.line) + ")" +
                              (other.kind == s.kind ? "" : ", already used by a " + other.kind));
        }
    }

    void interpret() {
        const Section* simulation = nullptr;
        for (const auto& s : sections_) {
            if (s.kind == "simulation") {
                if (simulation != nullptr) {
                    error(s.line, "duplicate [simulation] section (lines " + std::to_string(simulation->line) +
                                      " and " + std::to_string(s.line) + ")");
                    continue;
                }
                simulation = &s;
                interpret_simulation(s);
            } else if (s.kind == "slave") {
                interpret_slave(s);
            } else if (s.kind == "bond") {
                interpret_bond(s);
            } else if (s.kind == "signal") {
                interpret_signal(s);
            } else if (s.kind == "fu") {
                interpret_fu(s);
            }
        }
        if (simulation == nullptr) error(0, "missing [simulation] section");
    }

    void interpret_simulation(const Section& s) {
        static const std::set<std::string> adaptive_only{"dt_min",    "dt_max",    "tolerance", "safety",
                                                         "exponent", "ratio_min", "ratio_max"};
        std::set<std::string> known{"t_start", "t_end", "step", "dt"};
        known.insert(adaptive_only.begin(), adaptive_only.end());
        reject_unknown(s, known);

        if (const auto* e = find(s, "t_start")) {
            if (auto v = number(*e)) sys_.t_start = *v;
        }
        if (const auto* e = require(s, "t_end")) {
            if (auto v = number(*e)) sys_.t_end = *v;
        }
        std::string mode = "fixed";
        if (const auto* e = find(s, "step")) {
            mode = e->value;
            if (mode != "fixed" && mode != "adaptive") {
                error(e->line, "step must be 'fixed' or 'adaptive', got '" + mode + "'");
                return;
            }
        }
        if (mode == "fixed") {
            for (const auto& e : s.entries) {
                if (adaptive_only.count(e.key)) error(e.line, "'" + e.key + "' requires step = adaptive");
            }
            FixedStep fixed;
            if (const auto* e = require(s, "dt")) {
                if (auto v = number(*e)) fixed.dt = *v;
            }
            sys_.step_policy = fixed;
            return;
        }
        AdaptiveStep a;
        const auto set = [&](const char* key, double& field, bool required) {
            const auto* e = required ? require(s, key) : find(s, key);
            if (e != nullptr) {
                if (auto v = number(*e)) field = *v;
            }
        };
        set("dt", a.dt0, true);
        set("dt_min", a.dt_min, true);
        set("dt_max", a.dt_max, true);
        set("tolerance", a.tolerance, true);
        set("safety", a.safety, false);
        set("exponent", a.exponent, false);
        set("ratio_min", a.ratio_min, false);
        set("ratio_max", a.ratio_max, false);
        sys_.step_policy = a;
    }

    void interpret_slave(const Section& s) {
        claim_name(s);
        SlaveSpec spec;
        spec.name = s.name;
        if (const auto* e = require(s, "model")) spec.model_id = e->value;
        for (const auto& e : s.entries) {
            if (e.key == "model") continue;
            if (e.key == "provider") {
                const auto colon = e.value.rfind(':');
                const auto port = colon == std::string::npos ? std::nullopt : parse_real(e.value.substr(colon + 1));
                if (colon == 0 || !port || *port < 1 || *port > 65535 || *port != static_cast<int>(*port)) {
                    error(e.line, "provider must be HOST:PORT, got '" + e.value + "'");
                }
                spec.provider = e.value;
                continue;
            }
            if (auto v = number(e)) spec.parameters[e.key] = *v;
        }
        sys_.slaves.push_back(std::move(spec));
    }

    void interpret_bond(const Section& s) {
        claim_name(s);
        reject_unknown(s, {"side_a", "side_b", "orientation"});
        PowerBond bond;
        bond.name = s.name;
        if (const auto* e = require(s, "side_a")) {
            if (auto v = side(*e)) bond.side_a = *v;
        }
        if (const auto* e = require(s, "side_b")) {
            if (auto v = side(*e)) bond.side_b = *v;
        }
        if (const auto* e = find(s, "orientation")) {
            if (e->value == "into_a") {
                bond.orientation = BondOrientation::into_a;
            } else if (e->value == "into_b") {
                bond.orientation = BondOrientation::into_b;
            } else {
                error(e->line, "orientation must be 'into_a' or 'into_b', got '" + e->value + "'");
            }
        }
        sys_.bonds.push_back(std::move(bond));
    }

    void interpret_signal(const Section& s) {
        reject_unknown(s, {"source", "target"});
        SignalConnection c;
        if (const auto* e = require(s, "source")) {
            if (auto v = ref(*e, e->value)) c.source = *v;
        }
        if (const auto* e = require(s, "target")) {
            if (auto v = ref(*e, e->value)) c.target = *v;
        }
        sys_.signals.push_back(std::move(c));
    }

    void interpret_fu(const Section& s) {
        claim_name(s);
        FunctionUnitSpec fu;
        fu.name = s.name;
        if (const auto* e = require(s, "kind")) fu.kind = e->value;
        for (const auto& e : s.entries) {
            if (e.key != "kind") fu.settings[e.key] = e.value;
        }
        sys_.function_units.push_back(std::move(fu));
    }

    std::list<Section> sections_;
    Section* current_ = nullptr;
    std::map<std::string, const Section*> names_;
    std::vector<Diagnostic> diags_;
    SystemDescription sys_;
};

}  // namespace

std::string format_real(double v) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
    return std::string(buffer, ec == std::errc{} ? end : buffer);
}

std::optional<double> parse_real(std::string_view text) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
        if (!text.empty() && (text.front() == '-' || text.front() == '+')) return std::nullopt;
    }
    double v = 0.0;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) return std::nullopt;
    return v;
}

ParseResult parse_config(std::string_view text) { return Parser(text).run(); }

ParseResult load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {std::nullopt, {{0, "cannot read '" + path + "'"}}};
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string emit_config(const SystemDescription& sys) {
    std::ostringstream out;
    out << "[simulation]\n";
    out << "t_start = " << format_real(sys.t_start) << "\n";
    out << "t_end = " << format_real(sys.t_end) << "\n";
    if (const auto* fixed = std::get_if<FixedStep>(&sys.step_policy)) {
        out << "step = fixed\n";
        out << "dt = " << format_real(fixed->dt) << "\n";
    } else {
        const auto& a = std::get<AdaptiveStep>(sys.step_policy);
        out << "step = adaptive\n";
        out << "dt = " << format_real(a.dt0) << "\n";
        out << "dt_min = " << format_real(a.dt_min) << "\n";
        out << "dt_max = " << format_real(a.dt_max) << "\n";
        out << "tolerance = " << format_real(a.tolerance) << "\n";
        out << "safety = " << format_real(a.safety) << "\n";
        out << "exponent = " << format_real(a.exponent) << "\n";
        out << "ratio_min = " << format_real(a.ratio_min) << "\n";
        out << "ratio_max = " << format_real(a.ratio_max) << "\n";
    }
    for (const auto& s : sys.slaves) {
        out << "\n[slave " << s.name << "]\n";
        out << "model = " << s.model_id << "\n";
        if (s.provider) out << "provider = " << *s.provider << "\n";
        for (const auto& [name, value] : s.parameters) out << name << " = " << format_real(value) << "\n";
    }
    for (const auto& fu : sys.function_units) {
        out << "\n[fu " << fu.name << "]\n";
        out << "kind = " << fu.kind << "\n";
        for (const auto& [key, value] : fu.settings) out << key << " = " << value << "\n";
    }
    for (const auto& b : sys.bonds) {
        out << "\n[bond " << b.name << "]\n";
        out << "side_a = " << b.side_a.output.to_string() << ", " << b.side_a.input.to_string() << "\n";
        out << "side_b = " << b.side_b.output.to_string() << ", " << b.side_b.input.to_string() << "\n";
        out << "orientation = " << (b.orientation == BondOrientation::into_a ? "into_a" : "into_b") << "\n";
    }
    for (const auto& c : sys.signals) {
        out << "\n[signal]\n";
        out << "source = " << c.source.to_string() << "\n";
        out << "target = " << c.target.to_string() << "\n";
    }
    return out.str();
}

}  // namespace cosim

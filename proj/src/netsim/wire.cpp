#include "cosim/net/wire.hpp"

#include <bit>
#include <cstring>

#include "cosim/errors.hpp"

namespace cosim::net {

namespace {

class Writer {
public:
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) bytes.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) bytes.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        count(s.size());
        bytes.insert(bytes.end(), s.begin(), s.end());
    }
    void count(std::size_t n) {
        if (n > 0xFFFFFFFFu) throw ProtocolError("list too long for the wire");
        u32(static_cast<std::uint32_t>(n));
    }
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (auto b : take(4)) v = (v << 8) | b;
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (auto b : take(8)) v = (v << 8) | b;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const auto n = u32();
        const auto b = take(n);
        return {b.begin(), b.end()};
    }
    // Element count, sanity-checked against the bytes left (every element
    // takes at least `min_size` bytes).
    std::size_t count(std::size_t min_size) {
        const auto n = u32();
        if (static_cast<std::uint64_t>(n) * min_size > bytes_.size() - pos_) {
            throw ProtocolError("list count exceeds payload");
        }
        return n;
    }
    void finish() const {
        if (pos_ != bytes_.size()) throw ProtocolError("trailing bytes in payload");
    }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (n > bytes_.size() - pos_) throw ProtocolError("truncated payload");
        const auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void put(Writer& w, const Parameters& p) {
    w.count(p.size());
    for (const auto& [name, value] : p) {
        w.str(name);
        w.f64(value);
    }
}

void get(Reader& r, Parameters& p) {
    const auto n = r.count(12);
    for (std::size_t i = 0; i < n; ++i) {
        auto name = r.str();
        p.emplace_back(std::move(name), r.f64());
    }
}

void put(Writer& w, const SlaveDescriptor& d) {
    w.str(d.model_id);
    w.count(d.variables.size());
    for (const auto& v : d.variables) {
        w.str(v.name);
        w.u64(static_cast<std::uint64_t>(v.causality));
        w.u64(static_cast<std::uint64_t>(v.kind));
        for (auto e : v.unit.dimension().exponents) w.u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(e)));
        w.f64(v.unit.scale_to_si());
        w.str(v.unit.symbol());
        w.u64(v.direct_feedthrough ? 1 : 0);
    }
    w.u64(d.capabilities.supports_variable_step ? 1 : 0);
    w.count(d.parameters.size());
    for (const auto& p : d.parameters) {
        w.str(p.name);
        w.f64(p.default_value);
    }
}

std::uint64_t enum_value(Reader& r, std::uint64_t limit, const char* what) {
    const auto v = r.u64();
    if (v >= limit) throw ProtocolError(std::string("bad ") + what + " value");
    return v;
}

void get(Reader& r, SlaveDescriptor& d) {
    d.model_id = r.str();
    const auto n = r.count(4 + 16 + 56 + 8 + 4 + 8);
    for (std::size_t i = 0; i < n; ++i) {
        VariableDescriptor v;
        v.name = r.str();
        v.causality = static_cast<Causality>(enum_value(r, 2, "causality"));
        v.kind = static_cast<VariableKind>(enum_value(r, 3, "kind"));
        Dimension dim;
        for (auto& e : dim.exponents) {
            const auto raw = static_cast<std::int64_t>(r.u64());
            if (raw < -128 || raw > 127) throw ProtocolError("dimension exponent out of range");
            e = static_cast<std::int8_t>(raw);
        }
        const double scale = r.f64();
        auto symbol = r.str();
        try {
            v.unit = Unit(dim, scale, std::move(symbol));
        } catch (const Error& e) {
            throw ProtocolError(std::string("bad unit: ") + e.what());
        }
        v.direct_feedthrough = enum_value(r, 2, "flag") == 1;
        d.variables.push_back(std::move(v));
    }
    d.capabilities.supports_variable_step = enum_value(r, 2, "flag") == 1;
    const auto np = r.count(12);
    for (std::size_t i = 0; i < np; ++i) {
        auto name = r.str();
        d.parameters.push_back({std::move(name), r.f64()});
    }
}

void put(Writer& w, const msg::Hello& m) { w.u64(m.version); }
void put(Writer& w, const msg::HelloOk& m) { w.u64(m.version); }
void put(Writer&, const msg::ListModels&) {}
void put(Writer& w, const msg::ModelList& m) {
    w.count(m.models.size());
    for (const auto& s : m.models) w.str(s);
}
void put(Writer& w, const msg::Describe& m) {
    w.str(m.model_id);
    put(w, m.parameters);
}
void put(Writer& w, const msg::Description& m) { put(w, m.descriptor); }
void put(Writer& w, const msg::Spawn& m) {
    w.str(m.model_id);
    put(w, m.parameters);
    w.str(m.instance_id);
}
void put(Writer& w, const msg::Spawned& m) {
    w.str(m.host);
    w.u64(m.port);
    w.str(m.instance_id);
}
void put(Writer& w, const msg::Setup& m) {
    w.f64(m.t_start);
    w.f64(m.t_end);
}
void put(Writer&, const msg::Initialize&) {}
void put(Writer& w, const msg::SetInputs& m) {
    w.count(m.values.size());
    for (const auto& [index, value] : m.values) {
        w.u64(index);
        w.f64(value);
    }
}
void put(Writer& w, const msg::Step& m) {
    w.f64(m.t);
    w.f64(m.dt);
}
void put(Writer& w, const msg::StepOk& m) { w.f64(m.end_time); }
void put(Writer& w, const msg::StepFail& m) {
    w.f64(m.end_time);
    w.str(m.diagnostic);
}
void put(Writer& w, const msg::GetOutputs& m) {
    w.count(m.variables.size());
    for (auto v : m.variables) w.u64(v);
}
void put(Writer& w, const msg::Outputs& m) {
    w.count(m.values.size());
    for (auto v : m.values) w.f64(v);
}
void put(Writer&, const msg::Terminate&) {}
void put(Writer&, const msg::Terminated&) {}
void put(Writer&, const msg::Ok&) {}
void put(Writer& w, const msg::Error& m) {
    w.u64(m.code);
    w.str(m.text);
}

void get(Reader& r, msg::Hello& m) { m.version = r.u64(); }
void get(Reader& r, msg::HelloOk& m) { m.version = r.u64(); }
void get(Reader&, msg::ListModels&) {}
void get(Reader& r, msg::ModelList& m) {
    const auto n = r.count(4);
    for (std::size_t i = 0; i < n; ++i) m.models.push_back(r.str());
}
void get(Reader& r, msg::Describe& m) {
    m.model_id = r.str();
    get(r, m.parameters);
}
void get(Reader& r, msg::Description& m) { get(r, m.descriptor); }
void get(Reader& r, msg::Spawn& m) {
    m.model_id = r.str();
    get(r, m.parameters);
    m.instance_id = r.str();
}
void get(Reader& r, msg::Spawned& m) {
    m.host = r.str();
    m.port = r.u64();
    m.instance_id = r.str();
}
void get(Reader& r, msg::Setup& m) {
    m.t_start = r.f64();
    m.t_end = r.f64();
}
void get(Reader&, msg::Initialize&) {}
void get(Reader& r, msg::SetInputs& m) {
    const auto n = r.count(16);
    m.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto index = r.u64();
        m.values.emplace_back(index, r.f64());
    }
}
void get(Reader& r, msg::Step& m) {
    m.t = r.f64();
    m.dt = r.f64();
}
void get(Reader& r, msg::StepOk& m) { m.end_time = r.f64(); }
void get(Reader& r, msg::StepFail& m) {
    m.end_time = r.f64();
    m.diagnostic = r.str();
}
void get(Reader& r, msg::GetOutputs& m) {
    const auto n = r.count(8);
    m.variables.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.variables.push_back(r.u64());
}
void get(Reader& r, msg::Outputs& m) {
    const auto n = r.count(8);
    m.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.values.push_back(r.f64());
}
void get(Reader&, msg::Terminate&) {}
void get(Reader&, msg::Terminated&) {}
void get(Reader&, msg::Ok&) {}
void get(Reader& r, msg::Error& m) {
    m.code = r.u64();
    m.text = r.str();
}

template <std::size_t I = 0>
Message decode_as(std::size_t index, Reader& r) {
    if constexpr (I < std::variant_size_v<Message>) {
        if (index == I) {
            std::variant_alternative_t<I, Message> m;
            get(r, m);
            r.finish();
            return m;
        }
        return decode_as<I + 1>(index, r);
    } else {
        throw ProtocolError("unknown message type");
    }
}

}  // namespace

MessageType type_of(const Message& m) { return static_cast<MessageType>(m.index() + 1); }

std::string_view to_string(MessageType t) {
    static constexpr std::string_view names[] = {
        "HELLO",   "HELLO_OK",   "LIST_MODELS", "MODEL_LIST",  "DESCRIBE", "DESCRIPTION", "SPAWN",
        "SPAWNED", "SETUP",      "INITIALIZE",  "SET_INPUTS",  "STEP",     "STEP_OK",     "STEP_FAIL",
        "GET_OUTPUTS", "OUTPUTS", "TERMINATE", "TERMINATED", "OK", "ERROR"};
    const auto i = static_cast<std::size_t>(t);
    return i >= 1 && i <= std::size(names) ? names[i - 1] : "UNKNOWN";
}

std::vector<std::uint8_t> encode(const Message& m) {
    Writer w;
    w.u32(0);
    w.u8(static_cast<std::uint8_t>(type_of(m)));
    std::visit([&](const auto& body) { put(w, body); }, m);
    const auto length = w.bytes.size() - 5;
    if (length > max_payload) throw ProtocolError("payload too large");
    for (int i = 0; i < 4; ++i) w.bytes[i] = static_cast<std::uint8_t>(length >> (24 - 8 * i));
    return std::move(w.bytes);
}

Message decode_payload(std::uint8_t type, std::span<const std::uint8_t> payload) {
    if (type < 1 || type > std::variant_size_v<Message>) {
        throw ProtocolError("unknown message type " + std::to_string(type));
    }
    Reader r(payload);
    return decode_as(type - 1u, r);
}

Message decode(std::span<const std::uint8_t> frame) {
    if (frame.size() < 5) throw ProtocolError("truncated frame header");
    Reader header(frame.first(5));
    const auto length = header.u32();
    const auto type = header.u8();
    if (frame.size() - 5 != length) throw ProtocolError("frame length mismatch");
    return decode_payload(type, frame.subspan(5));
}

}  // namespace cosim::net

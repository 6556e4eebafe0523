#include "aigac/aiger.hpp"

#include "aigac/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace aigac {

namespace {

struct Header {
    std::uint32_t max_var = 0;
    std::uint32_t inputs = 0;
    std::uint32_t latches = 0;
    std::uint32_t outputs = 0;
    std::uint32_t ands = 0;
    std::uint32_t bad = 0;
};

/// Splits text into lines while remembering where the binary section starts.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::optional<std::string_view> next()
    {
        if (pos_ >= text_.size())
            return std::nullopt;
        auto end = text_.find('\n', pos_);
        if (end == std::string_view::npos)
            end = text_.size();
        auto line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos_ = end + 1;
        ++line_no_;
        return line;
    }

    std::size_t line_no() const { return line_no_; }
    std::size_t offset() const { return pos_; }
    void seek(std::size_t offset) { pos_ = offset; }
    std::string_view text() const { return text_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::uint32_t to_uint(std::string_view token, std::size_t line)
{
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line, "expected unsigned integer, got '" + std::string(token) + "'");
    return value;
}

Header parse_header(std::string_view line, std::string_view magic)
{
    auto tokens = split(line);
    if (tokens.empty() || tokens[0] != magic)
        throw ParseError(1, "malformed header: expected '" + std::string(magic) + " M I L O A'");
    if (tokens.size() < 6 || tokens.size() > 10)
        throw ParseError(1, "malformed header: expected 5 to 9 counts");
    Header h;
    h.max_var = to_uint(tokens[1], 1);
    h.inputs = to_uint(tokens[2], 1);
    h.latches = to_uint(tokens[3], 1);
    h.outputs = to_uint(tokens[4], 1);
    h.ands = to_uint(tokens[5], 1);
    if (tokens.size() > 6)
        h.bad = to_uint(tokens[6], 1);
    static const char* const names[] = {"constraint", "justice", "fairness"};
    for (std::size_t i = 7; i < tokens.size(); ++i)
        if (to_uint(tokens[i], 1) != 0)
            throw ParseError(1, std::string(names[i - 7]) + " sections are not supported");
    if (std::uint64_t{h.inputs} + h.latches + h.ands > h.max_var)
        throw ParseError(1, "malformed header: I + L + A exceeds M");
    return h;
}

/// Tracks definitions and references with line numbers so that structural
/// errors can be reported where they occur.
class Checker {
public:
    explicit Checker(std::uint32_t max_var) : max_var_(max_var), defined_at_(std::size_t{max_var} + 1, undefined) {}

    Literal literal(std::string_view token, std::size_t line)
    {
        auto code = to_uint(token, line);
        check_range(code, line);
        return Literal{code};
    }

    void check_range(std::uint32_t code, std::size_t line) const
    {
        if (code / 2 > max_var_)
            throw ParseError(line, "literal " + std::to_string(code) + " out of range (M = " +
                                       std::to_string(max_var_) + ")");
    }

    void define(Literal lhs, std::size_t line)
    {
        if (lhs.negated() || lhs.is_constant())
            throw ParseError(line, "defined literal " + std::to_string(lhs.code()) +
                                       " must be a positive non-constant literal");
        auto& at = defined_at_[lhs.var()];
        if (at != undefined)
            throw ParseError(line, "duplicate definition of literal " + std::to_string(lhs.code()) +
                                       " (first defined on line " + std::to_string(at) + ")");
        at = line;
    }

    void reference(Literal lit, std::size_t line) { references_.push_back({lit, line}); }

    void check_references() const
    {
        for (const auto& [lit, line] : references_)
            if (!lit.is_constant() && defined_at_[lit.var()] == undefined)
                throw ParseError(line, "literal " + std::to_string(lit.code()) + " is never defined");
    }

private:
    // Binary gates are defined on "line" 0, so undefined needs its own marker.
    static constexpr std::size_t undefined = static_cast<std::size_t>(-1);

    std::uint32_t max_var_;
    std::vector<std::size_t> defined_at_;
    std::vector<std::pair<Literal, std::size_t>> references_;
};

void check_acyclic(Literal lhs, Literal rhs0, Literal rhs1, std::size_t line)
{
    if (rhs0.var() >= lhs.var() || rhs1.var() >= lhs.var())
        throw ParseError(line, "gate " + std::to_string(lhs.code()) +
                                   " violates acyclicity: operands must be smaller variables");
}

struct Symbols {
    std::map<std::uint32_t, std::string> inputs, latches, outputs, bad;
};

void parse_symbols(LineReader& reader, const Header& h, Symbols& symbols)
{
    while (auto line = reader.next()) {
        if (line->empty())
            continue;
        if (line->front() == 'c')
            return;
        auto space = line->find(' ');
        if (space == std::string_view::npos || space < 2)
            throw ParseError(reader.line_no(), "malformed symbol table entry");
        auto pos = to_uint(line->substr(1, space - 1), reader.line_no());
        std::string name(line->substr(space + 1));
        std::map<std::uint32_t, std::string>* table = nullptr;
        std::uint32_t limit = 0;
        switch (line->front()) {
        case 'i': table = &symbols.inputs; limit = h.inputs; break;
        case 'l': table = &symbols.latches; limit = h.latches; break;
        case 'o': table = &symbols.outputs; limit = h.outputs; break;
        case 'b': table = &symbols.bad; limit = h.bad; break;
        default: throw ParseError(reader.line_no(), "unknown symbol type '" + std::string(1, line->front()) + "'");
        }
        if (pos >= limit)
            throw ParseError(reader.line_no(), "symbol position " + std::to_string(pos) + " out of range");
        (*table)[pos] = std::move(name);
    }
}

std::string lookup(const std::map<std::uint32_t, std::string>& table, std::uint32_t pos)
{
    auto it = table.find(pos);
    return it == table.end() ? std::string{} : it->second;
}

struct PendingLatch {
    Literal lhs;
    Literal next;
    bool init;
};

struct Body {
    std::vector<Literal> inputs;
    std::vector<PendingLatch> latches;
    std::vector<Literal> outputs;
    std::vector<Literal> bad;
    std::vector<std::array<Literal, 3>> gates;
};

PendingLatch parse_latch_fields(const std::vector<std::string_view>& tokens, Literal lhs, std::size_t first,
                                Checker& checker, std::size_t line)
{
    auto next = checker.literal(tokens[first], line);
    checker.reference(next, line);
    bool init = false;
    if (tokens.size() > first + 1) {
        auto reset = checker.literal(tokens[first + 1], line);
        if (reset == lhs)
            throw ParseError(line, "uninitialized latches are not supported");
        if (reset.code() > 1)
            throw ParseError(line, "latch reset value must be 0, 1 or the latch literal");
        init = reset == literal_true;
    }
    return {lhs, next, init};
}

Aig assemble(const Header& h, const Body& body, const Symbols& symbols, const ParseOptions& options)
{
    AigBuilder builder(h.max_var);
    for (std::uint32_t i = 0; i < body.inputs.size(); ++i)
        builder.add_input(body.inputs[i].var(), lookup(symbols.inputs, i));
    for (std::uint32_t i = 0; i < body.latches.size(); ++i) {
        const auto& l = body.latches[i];
        builder.add_latch(l.lhs.var(), l.next, l.init, lookup(symbols.latches, i));
    }
    for (const auto& g : body.gates)
        builder.add_gate(g[0].var(), g[1], g[2]);

    const bool use_bad = !body.bad.empty();
    const auto& props = use_bad ? body.bad : body.outputs;
    const auto& names = use_bad ? symbols.bad : symbols.outputs;
    for (std::uint32_t i = 0; i < props.size(); ++i) {
        auto name = lookup(names, i);
        if (name.empty())
            name = "r" + std::to_string(i + 1);
        builder.add_requirement(options.outputs_are_good ? props[i] : !props[i], std::move(name));
    }
    try {
        return std::move(builder).build();
    } catch (const AigError& e) {
        throw ParseError(0, e.what());
    }
}

std::optional<std::string_view> require_line(LineReader& reader, const char* what)
{
    auto line = reader.next();
    if (!line)
        throw ParseError(reader.line_no() + 1, std::string("unexpected end of file in ") + what + " section");
    return line;
}

}  // namespace

Aig parse_ascii(std::string_view text, const ParseOptions& options)
{
    LineReader reader(text);
    auto first = reader.next();
    if (!first)
        throw ParseError(1, "malformed header: empty file");
    auto h = parse_header(*first, "aag");
    Checker checker(h.max_var);
    Body body;

    for (std::uint32_t i = 0; i < h.inputs; ++i) {
        auto line = require_line(reader, "input");
        auto tokens = split(*line);
        if (tokens.size() != 1)
            throw ParseError(reader.line_no(), "input line must hold exactly one literal");
        auto lit = checker.literal(tokens[0], reader.line_no());
        checker.define(lit, reader.line_no());
        body.inputs.push_back(lit);
    }
    for (std::uint32_t i = 0; i < h.latches; ++i) {
        auto line = require_line(reader, "latch");
        auto tokens = split(*line);
        if (tokens.size() < 2 || tokens.size() > 3)
            throw ParseError(reader.line_no(), "latch line must be 'lhs next [reset]'");
        auto lhs = checker.literal(tokens[0], reader.line_no());
        checker.define(lhs, reader.line_no());
        body.latches.push_back(parse_latch_fields(tokens, lhs, 1, checker, reader.line_no()));
    }
    auto read_literals = [&](std::uint32_t count, std::vector<Literal>& out, const char* what) {
        for (std::uint32_t i = 0; i < count; ++i) {
            auto line = require_line(reader, what);
            auto tokens = split(*line);
            if (tokens.size() != 1)
                throw ParseError(reader.line_no(), std::string(what) + " line must hold exactly one literal");
            auto lit = checker.literal(tokens[0], reader.line_no());
            checker.reference(lit, reader.line_no());
            out.push_back(lit);
        }
    };
    read_literals(h.outputs, body.outputs, "output");
    read_literals(h.bad, body.bad, "bad-state");
    for (std::uint32_t i = 0; i < h.ands; ++i) {
        auto line = require_line(reader, "and-gate");
        auto tokens = split(*line);
        if (tokens.size() != 3)
            throw ParseError(reader.line_no(), "and-gate line must be 'lhs rhs0 rhs1'");
        auto lhs = checker.literal(tokens[0], reader.line_no());
        auto rhs0 = checker.literal(tokens[1], reader.line_no());
        auto rhs1 = checker.literal(tokens[2], reader.line_no());
        checker.define(lhs, reader.line_no());
        check_acyclic(lhs, rhs0, rhs1, reader.line_no());
        checker.reference(rhs0, reader.line_no());
        checker.reference(rhs1, reader.line_no());
        body.gates.push_back({lhs, rhs0, rhs1});
    }
    checker.check_references();

    Symbols symbols;
    parse_symbols(reader, h, symbols);
    return assemble(h, body, symbols, options);
}

Aig parse_binary(std::string_view bytes, const ParseOptions& options)
{
    LineReader reader(bytes);
    auto first = reader.next();
    if (!first)
        throw ParseError(1, "malformed header: empty file");
    auto h = parse_header(*first, "aig");
    if (std::uint64_t{h.inputs} + h.latches + h.ands != h.max_var)
        throw ParseError(1, "header/body count mismatch: binary AIGER requires M = I + L + A");
    Checker checker(h.max_var);
    Body body;

    for (std::uint32_t i = 0; i < h.inputs; ++i) {
        auto lit = Literal::of_var(i + 1);
        checker.define(lit, 1);
        body.inputs.push_back(lit);
    }
    for (std::uint32_t i = 0; i < h.latches; ++i) {
        auto line = require_line(reader, "latch");
        auto tokens = split(*line);
        if (tokens.empty() || tokens.size() > 2)
            throw ParseError(reader.line_no(), "header/body count mismatch: latch line must be 'next [reset]'");
        auto lhs = Literal::of_var(h.inputs + i + 1);
        checker.define(lhs, reader.line_no());
        body.latches.push_back(parse_latch_fields(tokens, lhs, 0, checker, reader.line_no()));
    }
    auto read_literals = [&](std::uint32_t count, std::vector<Literal>& out, const char* what) {
        for (std::uint32_t i = 0; i < count; ++i) {
            auto line = require_line(reader, what);
            auto tokens = split(*line);
            if (tokens.size() != 1)
                throw ParseError(reader.line_no(),
                                 std::string("header/body count mismatch in ") + what + " section");
            auto lit = checker.literal(tokens[0], reader.line_no());
            checker.reference(lit, reader.line_no());
            out.push_back(lit);
        }
    };
    read_literals(h.outputs, body.outputs, "output");
    read_literals(h.bad, body.bad, "bad-state");

    std::size_t pos = reader.offset();
    auto read_delta = [&](std::uint32_t gate) {
        std::uint64_t value = 0;
        unsigned shift = 0;
        while (true) {
            if (pos >= bytes.size())
                throw ParseError(0, "truncated delta stream in and-gate " + std::to_string(gate));
            auto byte = static_cast<unsigned char>(bytes[pos++]);
            value |= std::uint64_t{byte & 0x7fu} << shift;
            if ((byte & 0x80u) == 0)
                break;
            shift += 7;
            if (shift > 35)
                throw ParseError(0, "overlong delta in and-gate " + std::to_string(gate));
        }
        return value;
    };
    for (std::uint32_t i = 0; i < h.ands; ++i) {
        std::uint64_t lhs = 2ull * (h.inputs + h.latches + i + 1);
        auto d0 = read_delta(i);
        auto d1 = read_delta(i);
        if (d0 == 0 || d0 > lhs || d1 > lhs - d0)
            throw ParseError(0, "invalid delta in and-gate " + std::to_string(i));
        Literal out{static_cast<std::uint32_t>(lhs)};
        Literal rhs0{static_cast<std::uint32_t>(lhs - d0)};
        Literal rhs1{static_cast<std::uint32_t>(lhs - d0 - d1)};
        checker.define(out, 0);
        checker.reference(rhs0, 0);
        checker.reference(rhs1, 0);
        body.gates.push_back({out, rhs0, rhs1});
    }
    checker.check_references();

    reader.seek(pos);
    Symbols symbols;
    parse_symbols(reader, h, symbols);
    return assemble(h, body, symbols, options);
}

Aig parse_aiger(std::string_view bytes, const ParseOptions& options)
{
    if (bytes.starts_with("aag"))
        return parse_ascii(bytes, options);
    if (bytes.starts_with("aig"))
        return parse_binary(bytes, options);
    throw ParseError(1, "malformed header: expected 'aag' or 'aig'");
}

Aig read_aiger_file(const std::filesystem::path& path, const ParseOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(0, "cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_aiger(bytes, options);
}

namespace {

void write_symbols(std::ostream& out, const Aig& aig)
{
    for (std::uint32_t i = 0; i < aig.num_inputs(); ++i)
        if (const auto& name = aig.symbol(input_id(i)); !name.empty())
            out << 'i' << i << ' ' << name << '\n';
    for (std::uint32_t i = 0; i < aig.num_latches(); ++i)
        if (const auto& name = aig.symbol(latch_id(i)); !name.empty())
            out << 'l' << i << ' ' << name << '\n';
    auto reqs = aig.requirements();
    for (std::size_t i = 0; i < reqs.size(); ++i)
        out << 'b' << i << ' ' << reqs[i].name << '\n';
}

void write_counts(std::ostream& out, const char* magic, const Aig& aig)
{
    out << magic << ' ' << aig.max_var() << ' ' << aig.num_inputs() << ' ' << aig.num_latches() << " 0 "
        << aig.num_gates();
    if (!aig.requirements().empty())
        out << ' ' << aig.requirements().size();
    out << '\n';
}

void write_latch_tail(std::ostream& out, const Latch& l, Literal next)
{
    out << next.code();
    if (l.init)
        out << " 1";
    out << '\n';
}

void write_varint(std::string& out, std::uint32_t value)
{
    while (value & ~0x7fu) {
        out.push_back(static_cast<char>((value & 0x7fu) | 0x80u));
        value >>= 7;
    }
    out.push_back(static_cast<char>(value));
}

}  // namespace

std::string serialize_ascii(const Aig& aig)
{
    std::ostringstream out;
    write_counts(out, "aag", aig);
    for (auto v : aig.inputs())
        out << 2 * v << '\n';
    for (const auto& l : aig.latches()) {
        out << 2 * l.var << ' ';
        write_latch_tail(out, l, l.next);
    }
    for (const auto& r : aig.requirements())
        out << (!r.good).code() << '\n';
    for (const auto& g : aig.gates())
        out << 2 * g.var << ' ' << g.rhs0.code() << ' ' << g.rhs1.code() << '\n';
    write_symbols(out, aig);
    return out.str();
}

std::string serialize_binary(const Aig& aig)
{
    std::vector<std::uint32_t> renumber(std::size_t{aig.max_var()} + 1, 0);
    std::uint32_t next_var = 1;
    for (auto v : aig.inputs())
        renumber[v] = next_var++;
    for (const auto& l : aig.latches())
        renumber[l.var] = next_var++;
    for (const auto& g : aig.gates())
        renumber[g.var] = next_var++;
    auto map = [&](Literal lit) {
        return lit.is_constant() ? lit : Literal::of_var(renumber[lit.var()], lit.negated());
    };

    std::ostringstream head;
    head << "aig " << aig.num_components() << ' ' << aig.num_inputs() << ' ' << aig.num_latches() << " 0 "
         << aig.num_gates();
    if (!aig.requirements().empty())
        head << ' ' << aig.requirements().size();
    head << '\n';
    for (const auto& l : aig.latches())
        write_latch_tail(head, l, map(l.next));
    for (const auto& r : aig.requirements())
        head << map(!r.good).code() << '\n';

    std::string out = head.str();
    for (const auto& g : aig.gates()) {
        auto lhs = 2 * renumber[g.var];
        auto a = map(g.rhs0);
        auto b = map(g.rhs1);
        if (a < b)
            std::swap(a, b);
        write_varint(out, lhs - a.code());
        write_varint(out, a.code() - b.code());
    }
    std::ostringstream tail;
    write_symbols(tail, aig);
    out += tail.str();
    return out;
}

}  // namespace aigac

#include "aigac/aig.hpp"

#include "aigac/error.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace aigac {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
      line_(line)
{
}

namespace {

char kind_prefix(ComponentKind kind)
{
    switch (kind) {
    case ComponentKind::input: return 'w';
    case ComponentKind::latch: return 'v';
    case ComponentKind::gate: return 'g';
    }
    return '?';
}

}  // namespace

std::string ComponentId::to_string() const
{
    return kind_prefix(kind) + std::to_string(index + 1);
}

std::optional<ComponentId> ComponentId::parse(std::string_view text)
{
    if (text.size() < 2)
        return std::nullopt;
    ComponentKind kind;
    switch (text.front()) {
    case 'w': kind = ComponentKind::input; break;
    case 'v': kind = ComponentKind::latch; break;
    case 'g': kind = ComponentKind::gate; break;
    default: return std::nullopt;
    }
    std::uint32_t number = 0;
    auto digits = text.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), number);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || number == 0)
        return std::nullopt;
    return ComponentId{kind, number - 1};
}

const std::string& Aig::symbol(ComponentId id) const
{
    static const std::string none;
    switch (id.kind) {
    case ComponentKind::input:
        return id.index < input_names_.size() ? input_names_[id.index] : none;
    case ComponentKind::latch:
        return id.index < latch_names_.size() ? latch_names_[id.index] : none;
    case ComponentKind::gate: break;
    }
    return none;
}

std::optional<ComponentId> Aig::component(std::uint32_t var) const
{
    if (var >= by_var_.size())
        return std::nullopt;
    return by_var_[var];
}

std::uint32_t Aig::var(ComponentId id) const
{
    switch (id.kind) {
    case ComponentKind::input: return inputs_.at(id.index);
    case ComponentKind::latch: return latches_.at(id.index).var;
    case ComponentKind::gate: return gates_.at(id.index).var;
    }
    return 0;
}

bool Aig::contains(ComponentId id) const
{
    switch (id.kind) {
    case ComponentKind::input: return id.index < inputs_.size();
    case ComponentKind::latch: return id.index < latches_.size();
    case ComponentKind::gate: return id.index < gates_.size();
    }
    return false;
}

std::optional<std::size_t> Aig::find_requirement(std::string_view name) const
{
    for (std::size_t i = 0; i < requirements_.size(); ++i)
        if (requirements_[i].name == name)
            return i;
    return std::nullopt;
}

bool operator==(const Aig& a, const Aig& b)
{
    return a.max_var_ == b.max_var_ && a.inputs_ == b.inputs_ && a.latches_ == b.latches_ &&
           a.gates_ == b.gates_ && a.requirements_ == b.requirements_ &&
           a.input_names_ == b.input_names_ && a.latch_names_ == b.latch_names_;
}

void AigBuilder::add_input(std::uint32_t var, std::string name)
{
    inputs_.push_back(var);
    input_names_.push_back(std::move(name));
}

void AigBuilder::add_latch(std::uint32_t var, Literal next, bool init, std::string name)
{
    latches_.push_back({var, next, init});
    latch_names_.push_back(std::move(name));
}

void AigBuilder::add_gate(std::uint32_t var, Literal rhs0, Literal rhs1)
{
    if (rhs0 < rhs1)
        std::swap(rhs0, rhs1);
    gates_.push_back({var, rhs0, rhs1});
}

void AigBuilder::add_requirement(Literal good, std::string name)
{
    if (name.empty())
        name = "r" + std::to_string(requirements_.size() + 1);
    requirements_.push_back({std::move(name), good});
}

Aig AigBuilder::build() &&
{
    std::uint32_t max_var = 0;
    auto note = [&](std::uint32_t v) { max_var = std::max(max_var, v); };
    for (auto v : inputs_)
        note(v);
    for (const auto& l : latches_) {
        note(l.var);
        note(l.next.var());
    }
    for (const auto& g : gates_) {
        note(g.var);
        note(g.rhs0.var());
        note(g.rhs1.var());
    }
    for (const auto& r : requirements_)
        note(r.good.var());
    if (max_var_) {
        if (max_var > *max_var_)
            throw AigError("variable " + std::to_string(max_var) + " exceeds maximum variable index " +
                           std::to_string(*max_var_));
        max_var = *max_var_;
    }

    Aig aig;
    aig.max_var_ = max_var;
    aig.by_var_.assign(std::size_t{max_var} + 1, std::nullopt);

    auto define = [&](std::uint32_t var, ComponentId id) {
        if (var == 0)
            throw AigError("variable 0 is reserved for constants");
        if (aig.by_var_[var])
            throw AigError("variable " + std::to_string(var) + " defined twice");
        aig.by_var_[var] = id;
    };

    for (std::uint32_t i = 0; i < inputs_.size(); ++i)
        define(inputs_[i], input_id(i));
    for (std::uint32_t i = 0; i < latches_.size(); ++i)
        define(latches_[i].var, latch_id(i));

    std::vector<AndGate> gates = std::move(gates_);
    std::stable_sort(gates.begin(), gates.end(),
                     [](const AndGate& a, const AndGate& b) { return a.var < b.var; });
    for (std::uint32_t i = 0; i < gates.size(); ++i) {
        const auto& g = gates[i];
        define(g.var, gate_id(i));
        if (g.rhs0.var() >= g.var || g.rhs1.var() >= g.var)
            throw AigError("gate " + std::to_string(2 * g.var) + " has an operand that is not a smaller variable");
    }

    auto check_defined = [&](Literal lit, const char* where) {
        if (!lit.is_constant() && !aig.by_var_[lit.var()])
            throw AigError(std::string(where) + " refers to undefined literal " + std::to_string(lit.code()));
    };
    for (const auto& l : latches_)
        check_defined(l.next, "latch next-state");
    for (const auto& g : gates) {
        check_defined(g.rhs0, "gate operand");
        check_defined(g.rhs1, "gate operand");
    }

    std::set<Literal> seen;
    for (auto& r : requirements_) {
        check_defined(r.good, "requirement");
        if (seen.insert(r.good).second)
            aig.requirements_.push_back(std::move(r));
    }

    aig.inputs_ = std::move(inputs_);
    aig.latches_ = std::move(latches_);
    aig.gates_ = std::move(gates);
    aig.input_names_ = std::move(input_names_);
    aig.latch_names_ = std::move(latch_names_);
    // Keep name vectors empty when no symbol was supplied, so that structural
    // equality does not depend on how the Aig was assembled.
    auto trim = [](std::vector<std::string>& names) {
        if (std::all_of(names.begin(), names.end(), [](const std::string& s) { return s.empty(); }))
            names.clear();
    };
    trim(aig.input_names_);
    trim(aig.latch_names_);
    return aig;
}

}  // namespace aigac

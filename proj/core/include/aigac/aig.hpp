#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aigac {

/// AIGER literal: variable i is 2i, its negation 2i+1; 0 and 1 are the
/// constants FALSE and TRUE.
class Literal {
public:
    constexpr Literal() = default;
    constexpr explicit Literal(std::uint32_t code) : code_(code) {}

    static constexpr Literal of_var(std::uint32_t var, bool negated = false)
    {
        return Literal{2 * var + (negated ? 1u : 0u)};
    }

    constexpr std::uint32_t code() const { return code_; }
    constexpr std::uint32_t var() const { return code_ >> 1; }
    constexpr bool negated() const { return (code_ & 1u) != 0; }
    constexpr bool is_constant() const { return code_ < 2; }

    constexpr Literal operator!() const { return Literal{code_ ^ 1u}; }

    friend constexpr auto operator<=>(Literal, Literal) = default;

private:
    std::uint32_t code_ = 0;
};

inline constexpr Literal literal_false{0};
inline constexpr Literal literal_true{1};

enum class ComponentKind : std::uint8_t { input, latch, gate };

/// A component of the circuit. Index spaces of the three kinds are disjoint;
/// ordering is by kind first, then index.
struct ComponentId {
    ComponentKind kind = ComponentKind::input;
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(const ComponentId&, const ComponentId&) = default;

    /// Canonical textual form: "w3", "v1", "g12" (1-based within the kind).
    std::string to_string() const;
    static std::optional<ComponentId> parse(std::string_view text);
};

constexpr ComponentId input_id(std::uint32_t index) { return {ComponentKind::input, index}; }
constexpr ComponentId latch_id(std::uint32_t index) { return {ComponentKind::latch, index}; }
constexpr ComponentId gate_id(std::uint32_t index) { return {ComponentKind::gate, index}; }

struct Latch {
    std::uint32_t var = 0;
    Literal next;
    bool init = false;

    friend bool operator==(const Latch&, const Latch&) = default;
};

/// var = rhs0 & rhs1, with rhs0 >= rhs1 after normalisation.
struct AndGate {
    std::uint32_t var = 0;
    Literal rhs0;
    Literal rhs1;

    friend bool operator==(const AndGate&, const AndGate&) = default;
};

/// Invariant requirement "always good".
struct Requirement {
    std::string name;
    Literal good;

    friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// Immutable And-Inverter Graph. Gates are stored in ascending variable
/// order, which is a topological order because every gate operand refers to
/// a smaller variable.
class Aig {
public:
    Aig() = default;

    std::uint32_t max_var() const { return max_var_; }

    std::size_t num_inputs() const { return inputs_.size(); }
    std::size_t num_latches() const { return latches_.size(); }
    std::size_t num_gates() const { return gates_.size(); }
    std::size_t num_components() const { return inputs_.size() + latches_.size() + gates_.size(); }

    std::span<const std::uint32_t> inputs() const { return inputs_; }
    std::span<const Latch> latches() const { return latches_; }
    std::span<const AndGate> gates() const { return gates_; }
    std::span<const Requirement> requirements() const { return requirements_; }

    /// Symbol-table name of an input or latch, empty when none was given.
    const std::string& symbol(ComponentId id) const;

    std::optional<ComponentId> component(std::uint32_t var) const;
    std::uint32_t var(ComponentId id) const;
    Literal literal(ComponentId id) const { return Literal::of_var(var(id)); }

    /// Index of the requirement called `name`, if any.
    std::optional<std::size_t> find_requirement(std::string_view name) const;

    bool contains(ComponentId id) const;

    friend bool operator==(const Aig& a, const Aig& b);

private:
    friend class AigBuilder;

    std::uint32_t max_var_ = 0;
    std::vector<std::uint32_t> inputs_;
    std::vector<Latch> latches_;
    std::vector<AndGate> gates_;
    std::vector<Requirement> requirements_;
    std::vector<std::string> input_names_;
    std::vector<std::string> latch_names_;
    // var -> component; index 0 (constant) is always empty.
    std::vector<std::optional<ComponentId>> by_var_;
};

/// Collects definitions and validates them into an Aig. Errors are thrown as
/// AigError; parsers add line information on top.
class AigBuilder {
public:
    AigBuilder() = default;
    explicit AigBuilder(std::uint32_t max_var) : max_var_(max_var) {}

    void add_input(std::uint32_t var, std::string name = {});
    void add_latch(std::uint32_t var, Literal next, bool init, std::string name = {});
    void add_gate(std::uint32_t var, Literal rhs0, Literal rhs1);

    /// Requirements without a name are called r<k>, k being the 1-based
    /// insertion position. Later duplicates of the same literal are dropped.
    void add_requirement(Literal good, std::string name = {});

    Aig build() &&;

private:
    std::optional<std::uint32_t> max_var_;
    std::vector<std::uint32_t> inputs_;
    std::vector<std::string> input_names_;
    std::vector<Latch> latches_;
    std::vector<std::string> latch_names_;
    std::vector<AndGate> gates_;
    std::vector<Requirement> requirements_;
};

}  // namespace aigac

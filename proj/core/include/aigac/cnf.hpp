#pragma once

#include "aigac/aig.hpp"
#include "aigac/sat.hpp"
#include "aigac/structure.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aigac {

/// Clause list with a variable counter. Duplicate literals inside a clause
/// are merged and tautologies are dropped on insertion.
class Cnf {
public:
    sat::Var new_var() { return num_vars_++; }
    sat::Var num_vars() const { return num_vars_; }

    /// Returns the clause index, or nullopt when the clause was a tautology.
    std::optional<std::size_t> add_clause(std::vector<sat::Lit> lits);

    std::size_t num_clauses() const { return starts_.size(); }
    std::span<const sat::Lit> clause(std::size_t index) const;
    std::size_t tautologies_dropped() const { return tautologies_; }

    void load_into(sat::Backend& backend) const;

private:
    sat::Var num_vars_ = 0;
    std::vector<sat::Lit> lits_;
    std::vector<std::size_t> starts_;
    std::size_t tautologies_ = 0;
};

struct InstanceConfig {
    std::size_t steps = 0;
    /// Encode only the cluster's cone; otherwise every latch, gate and input.
    bool isolation = true;
    /// Components that get a selector. Everything else is encoded with its
    /// original semantics only.
    ComponentSet universe;
};

/// BMC unrolling of a possibly compromised circuit for one cluster of
/// requirements. Component c gets a frame-independent selector c↓ and one
/// action variable A_c(k) per frame; each requirement r gets a selector r↓
/// guarding its goal clause.
class UnrolledInstance {
public:
    std::size_t steps() const { return steps_; }
    const Cnf& cnf() const { return cnf_; }
    const Aig& aig() const { return *aig_; }

    sat::Lit true_lit() const { return sat::Lit::make(0); }

    /// CNF literal of an AIGER literal at a frame. Throws std::out_of_range for
    /// frames beyond the bound or variables that were not encoded.
    sat::Lit lit_at(Literal lit, std::size_t frame) const;
    std::optional<sat::Var> frame_var(std::uint32_t aig_var, std::size_t frame) const;

    std::optional<sat::Lit> selector(ComponentId id) const;
    std::optional<sat::Lit> action(ComponentId id, std::size_t frame) const;

    /// Requirements are identified by their index in the Aig.
    std::span<const std::size_t> requirements() const { return requirements_; }
    bool has_requirement(std::size_t requirement) const;
    sat::Lit requirement_selector(std::size_t requirement) const;
    std::size_t goal_clause(std::size_t requirement) const;

    /// Latches and gates with encode(c, k) clauses.
    const ComponentSet& encoded() const { return encoded_; }
    /// Encoded components that carry a selector.
    const ComponentSet& selectable() const { return selectable_; }
    const ComponentSet& universe() const { return universe_; }

    /// Assumptions realising attacker A: c↓ for c ∈ A, ¬c↓ for the other
    /// selectable components, r↓ for the queried requirement and ¬y↓ for the
    /// rest of the cluster. Members of A outside the encoded cone are
    /// irrelevant by isolation and are ignored; members outside the universe
    /// are rejected.
    std::vector<sat::Lit> assumptions(const ComponentSet& attacker, std::optional<std::size_t> requirement) const;

    /// DIMACS text with "c selector", "c action", "c frame" and
    /// "c requirement" comment lines ahead of the problem line.
    std::string to_dimacs() const;

private:
    friend UnrolledInstance build_instance(const StructureAnalysis&, std::span<const std::size_t>,
                                           const InstanceConfig&);

    void encode_latch(std::size_t latch, std::size_t frame);
    void encode_gate(std::size_t gate, std::size_t frame);
    void add_goal_clause(std::size_t requirement);
    void guarded(std::optional<sat::Lit> guard, std::vector<sat::Lit> clause);

    const Aig* aig_ = nullptr;
    std::size_t steps_ = 0;
    Cnf cnf_;
    std::vector<sat::Var> frame_vars_;  // (var * (steps + 1) + frame) -> var, -1 if absent
    std::vector<std::size_t> requirements_;
    std::vector<sat::Var> requirement_selectors_;
    std::vector<std::size_t> goal_clauses_;
    ComponentSet encoded_;
    ComponentSet selectable_;
    ComponentSet universe_;
    std::vector<ComponentId> selector_ids_;
    std::vector<sat::Var> selector_vars_;
    std::vector<sat::Var> action_vars_;  // (selector slot * (steps + 1) + frame)
};

/// Unrolls frames 0..steps for the requirements of `cluster`. With isolation
/// the encoded components are the cluster cone minus inputs; without it, all
/// latches and gates. Running out of memory surfaces as BudgetError.
UnrolledInstance build_instance(const StructureAnalysis& analysis, std::span<const std::size_t> cluster,
                                const InstanceConfig& config);

}  // namespace aigac

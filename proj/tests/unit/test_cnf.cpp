#include "aigac/cnf.hpp"
#include "aigac/external_solver.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "random_aig.hpp"

#include <algorithm>
#include <random>

using namespace aigac;
using sat::Lit;
using sat::Outcome;

namespace {

const ComponentId v1 = latch_id(0), g1 = gate_id(0), g2 = gate_id(1);

struct Fixture {
    Aig aig = testing::worked_example();
    StructureAnalysis analysis{aig};
};

UnrolledInstance instance(const StructureAnalysis& an, std::vector<std::size_t> cluster, std::size_t steps,
                          ComponentSet universe, bool isolation = true)
{
    return build_instance(an, cluster, InstanceConfig{steps, isolation, std::move(universe)});
}

Outcome solve(const UnrolledInstance& inst, std::vector<Lit> assumptions)
{
    auto backend = sat::make_embedded_backend(true);
    inst.cnf().load_into(*backend);
    return backend->solve(assumptions, {});
}

std::vector<Lit> with(std::vector<Lit> a, std::initializer_list<Lit> extra)
{
    a.insert(a.end(), extra);
    return a;
}

std::vector<Lit> sorted(std::span<const Lit> c)
{
    std::vector<Lit> out(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ComponentSet> subsets(const ComponentSet& u)
{
    std::vector<ComponentSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << u.size()); ++m) {
        ComponentSet s;
        for (std::size_t i = 0; i < u.size(); ++i)
            if ((m >> i) & 1u)
                s.insert(u[i]);
        out.push_back(s);
    }
    return out;
}

ComponentSet inputs_of(const Aig& aig)
{
    ComponentSet out;
    for (std::uint32_t i = 0; i < aig.num_inputs(); ++i)
        out.insert(input_id(i));
    return out;
}

ComponentSet cluster_cone(const StructureAnalysis& an, const std::vector<std::size_t>& cluster)
{
    ComponentSet cone;
    for (auto r : cluster)
        cone = unite(cone, an.requirement_coi(r));
    return cone;
}

}  // namespace

TEST_CASE("Cnf container")
{
    Cnf cnf;
    auto a = cnf.new_var(), b = cnf.new_var();
    CHECK(cnf.add_clause({Lit::make(b), Lit::make(a), Lit::make(b)}) == 0u);
    CHECK(sorted(cnf.clause(0)) == std::vector<Lit>{Lit::make(a), Lit::make(b)});
    CHECK_FALSE(cnf.add_clause({Lit::make(a), Lit::make(a, true)}));
    CHECK(cnf.tautologies_dropped() == 1);
    CHECK(cnf.num_clauses() == 1);
}

TEST_CASE("literal mapping")
{
    Fixture f;
    auto inst = instance(f.analysis, {1, 2}, 2, ComponentSet{v1, g1, g2});
    const auto v1_var = f.aig.var(v1);
    REQUIRE(inst.frame_var(v1_var, 0));
    CHECK(inst.lit_at(Literal::of_var(v1_var, true), 0) == Lit::make(*inst.frame_var(v1_var, 0), true));
    CHECK(inst.lit_at(literal_true, 1) == inst.true_lit());
    CHECK(inst.lit_at(literal_false, 2) == ~inst.true_lit());
    CHECK_THROWS_AS(inst.lit_at(f.aig.literal(g2), 3), std::out_of_range);
    // Selectors are frame independent; actions exist for every frame.
    REQUIRE(inst.selector(v1));
    for (std::size_t k = 0; k <= 2; ++k)
        CHECK(inst.action(g2, k));
    CHECK_FALSE(inst.action(g2, 3));
}

TEST_CASE("latch encoding")
{
    Fixture f;
    auto inst = instance(f.analysis, {1, 2}, 1, ComponentSet{v1, g1, g2});
    const Lit v1_0 = inst.lit_at(f.aig.literal(v1), 0);
    const Lit v1_1 = inst.lit_at(f.aig.literal(v1), 1);
    const Lit g2_0 = inst.lit_at(f.aig.literal(g2), 0);
    const Lit sel = *inst.selector(v1);
    // Goal clauses off: no requirement selected.
    const std::vector<Lit> base{~inst.requirement_selector(1), ~inst.requirement_selector(2)};

    SUBCASE("unattacked initial value is 1")
    {
        CHECK(solve(inst, with(base, {~sel, ~v1_0})) == Outcome::unsat);
        CHECK(solve(inst, with(base, {~sel, v1_0})) == Outcome::sat);
    }
    SUBCASE("attacked initial value follows the action")
    {
        const Lit a0 = *inst.action(v1, 0);
        CHECK(solve(inst, with(base, {sel, ~v1_0, a0})) == Outcome::unsat);
        CHECK(solve(inst, with(base, {sel, ~v1_0, ~a0})) == Outcome::sat);
    }
    SUBCASE("transition v1(1) = not g2(0)")
    {
        CHECK(solve(inst, with(base, {~sel, v1_1, g2_0})) == Outcome::unsat);
        CHECK(solve(inst, with(base, {~sel, ~v1_1, ~g2_0})) == Outcome::unsat);
        CHECK(solve(inst, with(base, {~sel, v1_1, ~g2_0})) == Outcome::sat);
    }
}

TEST_CASE("gate encoding")
{
    Fixture f;
    auto inst = instance(f.analysis, {0}, 0, ComponentSet{v1, g1, g2});
    const Lit w1 = inst.lit_at(f.aig.literal(input_id(0)), 0);
    const Lit w2 = inst.lit_at(f.aig.literal(input_id(1)), 0);
    const Lit g1_0 = inst.lit_at(f.aig.literal(g1), 0);
    const Lit sel = *inst.selector(g1);
    const Lit off = ~inst.requirement_selector(0);

    CHECK(solve(inst, {off, ~sel, w1, ~w2, g1_0}) == Outcome::unsat);
    CHECK(solve(inst, {off, ~sel, ~w1, ~w2, ~g1_0}) == Outcome::unsat);
    const Lit a = *inst.action(g1, 0);
    CHECK(solve(inst, {off, sel, w1, ~w2, g1_0, a}) == Outcome::sat);
    CHECK(solve(inst, {off, sel, g1_0, ~a}) == Outcome::unsat);
}

TEST_CASE("gate with a constant operand")
{
    AigBuilder b(3);
    b.add_input(1);
    b.add_latch(2, Literal{6}, false);
    b.add_gate(3, Literal{2}, literal_true);
    b.add_requirement(Literal{7});
    const Aig aig = std::move(b).build();
    const StructureAnalysis an(aig);
    auto inst = instance(an, {0}, 0, ComponentSet{});
    const Lit w = inst.lit_at(Literal{2}, 0), g = inst.lit_at(Literal{6}, 0);
    const Lit off = ~inst.requirement_selector(0);
    CHECK(solve(inst, {off, w, ~g}) == Outcome::unsat);
    CHECK(solve(inst, {off, ~w, g}) == Outcome::unsat);
}

TEST_CASE("goal clauses")
{
    Fixture f;
    SUBCASE("r2 at t = 1")
    {
        auto inst = instance(f.analysis, {1}, 1, ComponentSet{v1, g1, g2});
        const auto g2_lit = f.aig.literal(g2);
        std::vector<Lit> expected{~inst.requirement_selector(1), inst.lit_at(g2_lit, 0), inst.lit_at(g2_lit, 1)};
        std::sort(expected.begin(), expected.end());
        CHECK(sorted(inst.cnf().clause(inst.goal_clause(1))) == expected);
    }
    SUBCASE("constant requirements")
    {
        AigBuilder b(1);
        b.add_input(1);
        b.add_requirement(literal_true, "always");
        b.add_requirement(literal_false, "never");
        const Aig aig = std::move(b).build();
        const StructureAnalysis an(aig);
        for (std::size_t t : {0u, 3u}) {
            auto inst = instance(an, {0, 1}, t, ComponentSet{});
            CHECK(sorted(inst.cnf().clause(inst.goal_clause(0))) == std::vector<Lit>{~inst.requirement_selector(0)});
            std::vector<Lit> never{~inst.requirement_selector(1), inst.true_lit()};
            std::sort(never.begin(), never.end());
            CHECK(sorted(inst.cnf().clause(inst.goal_clause(1))) == never);
            CHECK(solve(inst, inst.assumptions({}, 0)) == Outcome::unsat);
            CHECK(solve(inst, inst.assumptions({}, 1)) == Outcome::sat);
        }
    }
}

TEST_CASE("isolation decides what is encoded")
{
    Fixture f;
    auto both = instance(f.analysis, {1, 2}, 0, ComponentSet{v1, g1, g2});
    CHECK(both.encoded() == ComponentSet{v1, g1, g2});
    CHECK(both.frame_var(f.aig.var(v1), 0));
    CHECK_FALSE(both.frame_var(f.aig.var(v1), 1));

    auto r1 = instance(f.analysis, {0}, 0, ComponentSet{v1, g1, g2});
    CHECK(r1.encoded() == ComponentSet{g1});
    CHECK(r1.selectable() == ComponentSet{g1});
    CHECK_FALSE(r1.frame_var(f.aig.var(v1), 0));
    CHECK_FALSE(r1.selector(g2));
    // Out-of-cone members are ignored, out-of-universe ones rejected.
    CHECK(r1.assumptions(ComponentSet{g2}, 0) == r1.assumptions(ComponentSet{}, 0));
    auto narrow = instance(f.analysis, {0}, 0, ComponentSet{v1});
    CHECK_THROWS_AS(narrow.assumptions(ComponentSet{g1}, 0), std::invalid_argument);

    auto full = instance(f.analysis, {0}, 0, ComponentSet{v1, g1, g2}, false);
    CHECK(full.encoded() == ComponentSet{v1, g1, g2});
}

TEST_CASE("DIMACS export")
{
    Fixture f;
    SUBCASE("empty instance")
    {
        auto inst = instance(f.analysis, {}, 0, ComponentSet{});
        const std::string text = inst.to_dimacs();
        CHECK(text.find("p cnf 1 1\n1 0\n") != std::string::npos);
    }
    SUBCASE("worked example")
    {
        auto inst = instance(f.analysis, {0, 1, 2}, 3, ComponentSet{v1, g1, g2});
        const std::string text = inst.to_dimacs();
        const auto parsed = sat::parse_dimacs(text);
        CHECK(parsed.clauses.size() == inst.cnf().num_clauses());
        CHECK(parsed.num_vars == inst.cnf().num_vars());
        CHECK(text.find("c selector v1 ") != std::string::npos);
        CHECK(text.find("c requirement r2 ") != std::string::npos);
        CHECK(text.find("c action g2 3 ") != std::string::npos);
    }
}

TEST_CASE("clause count formula")
{
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        const Aig aig = testing::random_aig(rng);
        const StructureAnalysis an(aig);
        const Universe u = round % 2 == 0 ? Universe::latches_and_gates : Universe::latches_only;
        std::vector<std::size_t> cluster;
        for (std::size_t r = 0; r < aig.requirements().size(); ++r)
            cluster.push_back(r);
        const std::size_t t = round % 4;
        auto inst = instance(an, cluster, t, universe_components(aig, u));

        std::size_t expected = 1 + cluster.size();
        for (auto id : inst.encoded()) {
            const bool sel = inst.selectable().contains(id);
            if (id.kind == ComponentKind::latch)
                expected += (sel ? 4 : 2) * (t + 1);
            else
                expected += (sel ? 5 : 3) * (t + 1);
        }
        CAPTURE(round);
        CHECK(inst.cnf().num_clauses() + inst.cnf().tautologies_dropped() == expected);
        CHECK(inst.encoded() == subtract(cluster_cone(an, cluster), inputs_of(aig)));
    }
}

TEST_CASE("selector-guarded unrolling agrees with the explicit-state oracle")
{
    std::mt19937_64 rng(17);
    std::size_t checks = 0;
    for (int round = 0; round < 60; ++round) {
        const Aig aig = testing::random_aig(rng, {3, 4, 10, 3});
        const StructureAnalysis an(aig);
        const std::size_t t = round % 4;
        const ComponentSet universe = universe_components(aig, Universe::latches_and_gates);
        std::vector<std::size_t> cluster;
        for (std::size_t r = 0; r < aig.requirements().size(); ++r)
            cluster.push_back(r);
        for (bool isolation : {true, false}) {
            auto inst = instance(an, cluster, t, universe, isolation);
            auto backend = sat::make_embedded_backend(true);
            inst.cnf().load_into(*backend);
            std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
            for (int s = 0; s < 12; ++s) {
                ComponentSet attacker;
                for (int k = 0; k < s % 4; ++k)
                    attacker.insert(universe[pick(rng)]);
                const auto expected = testing::earliest_violations(aig, attacker, t);
                for (auto r : cluster) {
                    const Outcome got = backend->solve(inst.assumptions(attacker, r), {});
                    CAPTURE(round);
                    CAPTURE(attacker.to_string());
                    CHECK((got == Outcome::sat) == expected[r].has_value());
                    ++checks;
                }
            }
        }
    }
    CHECK(checks > 1000);
}

TEST_CASE("exported instances agree with an external solver")
{
    const std::filesystem::path dpll = AIGAC_DPLL_SOLVER;
    std::mt19937_64 rng(23);
    for (int round = 0; round < 25; ++round) {
        const Aig aig = testing::random_aig(rng, {2, 3, 6, 2});
        const StructureAnalysis an(aig);
        const ComponentSet universe = universe_components(aig, Universe::latches_only);
        auto inst = instance(an, {0}, round % 3, universe);
        const std::string text = inst.to_dimacs();
        for (const auto& attacker : subsets(universe)) {
            const auto a = inst.assumptions(attacker, 0);
            const auto ext = sat::solve_external(dpll, text, a);
            CHECK(ext.outcome == solve(inst, a));
        }
    }
}

#include "aigac/structure.hpp"

#include "doctest.h"
#include "random_aig.hpp"

#include <random>

using namespace aigac;

namespace {

const ComponentId w1 = input_id(0), w2 = input_id(1), v1 = latch_id(0), g1 = gate_id(0), g2 = gate_id(1);

// Every component of the circuit.
std::vector<ComponentId> all_components(const Aig& aig)
{
    std::vector<ComponentId> out;
    for (std::uint32_t i = 0; i < aig.num_inputs(); ++i)
        out.push_back(input_id(i));
    for (std::uint32_t i = 0; i < aig.num_latches(); ++i)
        out.push_back(latch_id(i));
    for (std::uint32_t i = 0; i < aig.num_gates(); ++i)
        out.push_back(gate_id(i));
    return out;
}

// Operand components of a latch or gate.
std::vector<ComponentId> operands(const Aig& aig, ComponentId id)
{
    std::vector<Literal> lits;
    if (id.kind == ComponentKind::latch)
        lits = {aig.latches()[id.index].next};
    else if (id.kind == ComponentKind::gate)
        lits = {aig.gates()[id.index].rhs0, aig.gates()[id.index].rhs1};
    std::vector<ComponentId> out;
    for (Literal l : lits)
        if (!l.is_constant())
            out.push_back(*aig.component(l.var()));
    return out;
}

}  // namespace

TEST_CASE("component sets")
{
    ComponentSet a{g2, v1, g2, w1};
    CHECK(a.size() == 3);
    CHECK(a.to_string() == "{w1,v1,g2}");
    CHECK(a.contains(v1));
    CHECK(ComponentSet{v1}.is_subset_of(a));
    CHECK(unite(ComponentSet{v1}, ComponentSet{g1}) == ComponentSet{g1, v1});
    CHECK(intersect(a, ComponentSet{v1, g1}) == ComponentSet{v1});
    CHECK(subtract(a, ComponentSet{v1}) == ComponentSet{w1, g2});
    CHECK(SizeThenLex{}(ComponentSet{g2}, ComponentSet{v1, g1}));
    CHECK(SizeThenLex{}(ComponentSet{v1}, ComponentSet{g1}));
    CHECK(ComponentSet{}.to_string() == "{}");
}

TEST_CASE("cones of the worked example")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);

    CHECK(an.requirement_coi(0) == ComponentSet{g1, w1, w2});
    CHECK(an.requirement_coi(1) == ComponentSet{g1, g2, v1, w1, w2});
    CHECK(an.requirement_coi(2) == ComponentSet{g1, g2, v1, w1, w2});

    CHECK(an.ioc(v1) == ComponentSet{v1, g2});
    CHECK(an.ioc(w1) == ComponentSet{w1, g1, g2, v1});
    CHECK(an.sources(aig.requirements()[1].good) == ComponentSet{v1, w1, w2});

    const Ratio j = an.jaccard(aig.requirements()[0].good, aig.requirements()[1].good);
    CHECK(j == Ratio{2, 3});
    CHECK(an.jaccard(aig.requirements()[1].good, aig.requirements()[2].good) == Ratio{1, 1});
    CHECK(an.jaccard(literal_true, literal_false) == Ratio{1, 1});

    CHECK(an.r_max(1, Universe::latches_and_gates) == ComponentSet{g1, g2, v1});
    CHECK(an.r_max(1, Universe::latches_only) == ComponentSet{v1});
    CHECK(an.r_max(0, Universe::latches_only).empty());

    CHECK(universe_components(aig, Universe::latches_and_gates) == ComponentSet{v1, g1, g2});
    CHECK(universe_components(aig, Universe::latches_only) == ComponentSet{v1});
}

TEST_CASE("clustering")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const std::vector<std::size_t> all{0, 1, 2};

    auto c = an.cluster_requirements(all, 0.9);
    REQUIRE(c.size() == 2);
    CHECK(c[0].requirements == std::vector<std::size_t>{1, 2});
    CHECK(c[0].cone == ComponentSet{g1, g2, v1, w1, w2});
    CHECK(c[1].requirements == std::vector<std::size_t>{0});

    auto one = an.cluster_requirements(all, 0.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].requirements.size() == 3);

    CHECK(an.cluster_requirements({}, 0.8).empty());
    // Thresholds outside [0, 1] are clamped.
    CHECK(an.cluster_requirements(all, -3.0).size() == 1);
    CHECK(an.cluster_requirements(all, 7.0).size() == 2);
}

TEST_CASE("cone properties on random circuits")
{
    std::mt19937_64 rng(11);
    for (int round = 0; round < 150; ++round) {
        const Aig aig = testing::random_aig(rng, {3, 6, 15, 3});
        const StructureAnalysis an(aig);
        const auto comps = all_components(aig);
        CAPTURE(round);

        for (auto c : comps) {
            const ComponentSet cone = an.coi(aig.literal(c));
            CHECK(cone.contains(c));
            // Fixpoint: operands of every latch or gate in the cone are in it.
            for (auto member : cone)
                for (auto op : operands(aig, member))
                    CHECK(cone.contains(op));
            // Duality with the dual cone.
            for (auto other : comps)
                CHECK(an.coi(aig.literal(other)).contains(c) == an.ioc(c).contains(other));
        }

        // Isolation prerequisite: the two formulations agree.
        std::uniform_int_distribution<std::size_t> pick(0, comps.size() - 1);
        for (std::size_t r = 0; r < aig.requirements().size(); ++r) {
            const ComponentSet cone = an.requirement_coi(r);
            for (int s = 0; s < 10; ++s) {
                ComponentSet attacker;
                for (int k = 0; k < 3; ++k) {
                    auto id = comps[pick(rng)];
                    if (id.kind != ComponentKind::input)
                        attacker.insert(id);
                }
                CHECK(an.ioc(attacker).intersects(cone) == attacker.intersects(cone));
            }
        }

        // Jaccard symmetry and identity.
        const auto reqs = aig.requirements();
        for (const auto& a : reqs)
            for (const auto& b : reqs) {
                const Ratio ab = an.jaccard(a.good, b.good);
                CHECK(ab == an.jaccard(b.good, a.good));
                const bool same = an.sources(a.good) == an.sources(b.good);
                CHECK((ab == Ratio{1, 1}) == same);
            }
    }
}

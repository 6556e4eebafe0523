#include "aigac/witness.hpp"

#include "doctest.h"
#include "oracle.hpp"
#include "random_aig.hpp"

#include "json.hpp"

#include <random>

using namespace aigac;

namespace {

const ComponentId v1 = latch_id(0), g1 = gate_id(0), g2 = gate_id(1);

// Solves the single-requirement instance and extracts a witness, if any.
std::optional<Witness> find_witness(const StructureAnalysis& an, std::size_t r, const ComponentSet& attacker,
                                    std::size_t steps, const ComponentSet& universe)
{
    auto inst = build_instance(an, std::vector<std::size_t>{r}, InstanceConfig{steps, true, universe});
    auto backend = sat::make_embedded_backend(true);
    inst.cnf().load_into(*backend);
    if (backend->solve(inst.assumptions(attacker, r), {}) != sat::Outcome::sat)
        return std::nullopt;
    return extract_witness(inst, backend->model(), attacker, r);
}

}  // namespace

TEST_CASE("witnesses of the worked example")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const ComponentSet u{v1, g1, g2};

    SUBCASE("v1 breaks r3 in 0 steps")
    {
        auto w = find_witness(an, 2, ComponentSet{v1}, 10, u);
        REQUIRE(w);
        CHECK(w->step == 0);
        REQUIRE(w->attacks.size() == 1);
        CHECK(w->attacks[0] == Attack{{v1, false}});
        CHECK(replay(aig, *w).ok);
    }
    SUBCASE("g2 breaks r3 in 1 step")
    {
        auto w = find_witness(an, 2, ComponentSet{g2}, 10, u);
        REQUIRE(w);
        CHECK(w->step == 1);
        REQUIRE(w->attacks.size() == 2);
        CHECK(w->attacks[0] == Attack{{g2, true}});
        CHECK(w->attacks[1].size() == 1);
        CHECK(w->inputs.size() == 2);
        CHECK(replay(aig, *w).ok);
    }
    SUBCASE("inputs alone break r1, and a corrupted witness is caught")
    {
        auto w = find_witness(an, 0, ComponentSet{}, 10, u);
        REQUIRE(w);
        CHECK(w->step == 0);
        CHECK(w->attacks == std::vector<Attack>{Attack{}});
        // g1 = ¬w1 ∧ ¬w2 is false iff some input is 1.
        CHECK((w->inputs[0][0] || w->inputs[0][1]));
        CHECK(replay(aig, *w).ok);

        Witness bad = *w;
        bad.inputs[0] = {false, false};
        auto r = replay(aig, bad);
        CHECK_FALSE(r.ok);
        CHECK(r.frame == 0);
        CHECK_FALSE(r.detail.empty());
    }
    SUBCASE("unattackable requirement has no witness")
    {
        CHECK_FALSE(find_witness(an, 1, ComponentSet{g1}, 10, u));
    }
    SUBCASE("json form")
    {
        auto w = find_witness(an, 2, ComponentSet{v1}, 10, u);
        REQUIRE(w);
        auto j = nlohmann::json::parse(witness_to_json(aig, *w));
        CHECK(j["requirement"] == "r3");
        CHECK(j["step"] == 0);
        CHECK(j["attacker"] == nlohmann::json::array({"v1"}));
        CHECK(j["attacks"][0]["v1"] == 0);
        CHECK(j["inputs"].size() == 1);
    }
}

TEST_CASE("replay rejects malformed witnesses")
{
    const Aig aig = testing::worked_example();
    Witness w;
    w.requirement = 2;
    w.attacker = ComponentSet{v1};
    w.step = 0;
    w.inputs = {{false, false}};
    w.attacks = {Attack{{v1, true}}};
    // v1 = 1 keeps r3 true at frame 0.
    CHECK_FALSE(replay(aig, w).ok);
    w.attacks = {Attack{{v1, false}}};
    CHECK(replay(aig, w).ok);
    w.attacks = {};
    CHECK_FALSE(replay(aig, w).ok);
}

TEST_CASE("constant-false requirement: zero-length witness")
{
    AigBuilder b(1);
    b.add_input(1);
    b.add_requirement(literal_false);
    const Aig aig = std::move(b).build();
    const StructureAnalysis an(aig);
    auto w = find_witness(an, 0, ComponentSet{}, 3, ComponentSet{});
    REQUIRE(w);
    CHECK(w->step == 0);
    CHECK(replay(aig, *w).ok);
}

TEST_CASE("every satisfiable check on random circuits yields a replayable witness")
{
    std::mt19937_64 rng(41);
    std::size_t replayed = 0;
    for (int round = 0; round < 120; ++round) {
        const Aig aig = testing::random_aig(rng);
        const StructureAnalysis an(aig);
        const ComponentSet u = universe_components(aig, Universe::latches_and_gates);
        const std::size_t t = round % 5;
        std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
        for (std::size_t r = 0; r < aig.requirements().size(); ++r) {
            for (int s = 0; s < 6; ++s) {
                ComponentSet attacker;
                for (int k = 0; k < s % 3; ++k)
                    attacker.insert(u[pick(rng)]);
                auto w = find_witness(an, r, attacker, t, u);
                const auto first = testing::earliest_violation(aig, attacker, r, t);
                CHECK(w.has_value() == first.has_value());
                if (!w)
                    continue;
                CAPTURE(round);
                CHECK(replay(aig, *w).ok);
                CHECK(w->step >= *first);
                CHECK(w->attacks.size() == w->step + 1);
                for (const auto& a : w->attacks)
                    CHECK(a.size() == attacker.size());
                ++replayed;
            }
        }
    }
    CHECK(replayed > 200);
}

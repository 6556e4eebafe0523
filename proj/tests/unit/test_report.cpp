#include "aigac/report.hpp"

#include "doctest.h"
#include "json.hpp"
#include "random_aig.hpp"

#include <random>
#include <sstream>

using namespace aigac;
using nlohmann::json;

namespace {

const ComponentId v1 = latch_id(0), g1 = gate_id(0), g2 = gate_id(1);

RunConfig worked_config()
{
    RunConfig c;
    c.input = "worked_example.aag";
    c.command = "classify";
    c.universe = Universe::latches_and_gates;
    c.timings = false;
    return c;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("minimal attackers file for the worked example")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const RunReport report = run_classification(an, worked_config());
    const json j = json::parse(render_minimal_attackers(aig, report.classification));
    CHECK(j == json::parse(R"({"r1": [[]], "r2": [["v1"], ["g2"]], "r3": [["v1"], ["g2"]]})"));
}

TEST_CASE("classification JSON")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const RunReport report = run_classification(an, worked_config());
    const std::string text = render_classification(aig, report);
    const json j = json::parse(text);

    SUBCASE("config is echoed")
    {
        CHECK(j["config"]["steps"] == 10);
        CHECK(j["config"]["max_size"] == 3);
        CHECK(j["config"]["universe"] == "latches-and-gates");
        CHECK(j["config"]["isolation"] == true);
        CHECK(j["config"]["monotonicity"] == true);
        CHECK(j["config"]["solver"] == "embedded");
        CHECK(j["config"].contains("budget_seconds"));
        CHECK(j["config"].contains("cluster_threshold"));
        CHECK(j["config"].contains("seed"));
    }
    SUBCASE("explicit map is listed for small universes")
    {
        REQUIRE(j.contains("map"));
        CHECK(j["map"].size() == 8);
    }
    SUBCASE("per-requirement counts")
    {
        const auto& r2 = j["requirements"][1];
        CHECK(r2["name"] == "r2");
        CHECK(r2["n_break"] == "6");
        CHECK(r2["n_safe"] == "2");
        CHECK(r2["coverage"] == 1.0);
    }
    SUBCASE("round trip for offline queries")
    {
        const StoredClassification stored = parse_classification(text);
        CHECK(stored.universe == ComponentSet{v1, g1, g2});
        CHECK(stored.names == std::vector<std::string>{"r1", "r2", "r3"});
        REQUIRE(stored.find("r2"));
        const auto& r2 = stored.results[*stored.find("r2")];
        CHECK(r2.minimal == report.classification.results[1].minimal);
        CHECK(r2.failing == report.classification.results[1].failing);
        CHECK(r2.cone == report.classification.results[1].cone);
        CHECK(determine(r2, ComponentSet{v1, g1}) == Verdict::breaks);
        CHECK(determine(r2, ComponentSet{g1}) == Verdict::safe);
        CHECK_FALSE(stored.find("r9"));
    }
    SUBCASE("malformed input")
    {
        CHECK_THROWS_AS(parse_classification("{}"), std::invalid_argument);
        CHECK_THROWS_AS(parse_classification("not json"), std::invalid_argument);
    }
}

TEST_CASE("metrics CSV")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const RunReport report = run_classification(an, worked_config());

    const auto avg = average(report.metrics, 10);
    const auto table = lines(render_metrics_csv(std::span(&avg, 1), false));
    REQUIRE(table.size() == 2);
    CHECK(table[0] == "Steps,ms,#C.,#Min.,#SAT,#C./Min.,Cov.");
    CHECK(table[1].rfind("10,0,", 0) == 0);

    const auto per = lines(render_requirements_csv(aig, report.metrics, false));
    REQUIRE(per.size() == 4);
    CHECK(per[0] == "Requirement,Steps,ms,#C.,#Min.,#SAT,#C./Min.,Cov.,Incomplete");
    CHECK(per[1].rfind("r1,10,0,1,1,", 0) == 0);
    CHECK(per[2].rfind("r2,10,0,3,2,", 0) == 0);
    CHECK(per[2].find(",1,1,0") != std::string::npos);

    AverageMetrics none;
    none.steps = 0;
    const auto dashes = lines(render_metrics_csv(std::span(&none, 1), true));
    CHECK(dashes[1] == "0,0,0,0,0,--,0");
}

TEST_CASE("reports are deterministic without timings")
{
    std::mt19937_64 rng(12);
    for (int round = 0; round < 10; ++round) {
        const Aig aig = testing::random_aig(rng);
        const StructureAnalysis an(aig);
        RunConfig c = worked_config();
        c.steps = 3;
        const RunReport a = run_classification(an, c);
        const RunReport again = run_classification(an, c);
        CHECK(render_classification(aig, a) == render_classification(aig, again));
        CHECK(render_witnesses(aig, a) == render_witnesses(aig, again));
        CHECK(render_run(a) == render_run(again));
        CHECK(json::parse(render_run(a))["elapsed_ms"] == 0);

        // The thread count changes only the echoed config.
        c.jobs = 3;
        const RunReport parallel = run_classification(an, c);
        CHECK(render_minimal_attackers(aig, a.classification) ==
              render_minimal_attackers(aig, parallel.classification));
        CHECK(render_requirements_csv(aig, a.metrics, false) == render_requirements_csv(aig, parallel.metrics, false));
        json wa = json::parse(render_witnesses(aig, a)), wb = json::parse(render_witnesses(aig, parallel));
        wa.erase("config");
        wb.erase("config");
        CHECK(wa == wb);
    }
}

TEST_CASE("structure reports")
{
    const Aig aig = testing::worked_example();
    const StructureAnalysis an(aig);
    const auto info = lines(render_info(an));
    REQUIRE(info.size() == 4);
    CHECK(info[0] == "inputs=2 latches=1 gates=2 requirements=3");
    CHECK(info[2] == "r2 good=11 coi=5 sources=3");

    const json coi = json::parse(render_coi(an, OutputFormat::json));
    CHECK(coi["requirements"][0]["coi"] == json::array({"w1", "w2", "g1"}));
    CHECK(coi["jaccard"][0][1] == "2/3");
    const auto csv = lines(render_coi(an, OutputFormat::csv));
    CHECK(csv[0] == "Requirement,COI,Sources,J(r1),J(r2),J(r3)");
    CHECK(csv[1].rfind("r1,3,2,1,", 0) == 0);
}

TEST_CASE("argument parsing helpers")
{
    CHECK(parse_attacker("v1,g1") == ComponentSet{v1, g1});
    CHECK(parse_attacker("{v1, g2}") == ComponentSet{v1, g2});
    CHECK(parse_attacker("").empty());
    CHECK(parse_attacker("{}").empty());
    CHECK_THROWS_AS(parse_attacker("v1,x7"), std::invalid_argument);
    CHECK(parse_universe("latches") == Universe::latches_only);
    CHECK(parse_universe("latches-and-gates") == Universe::latches_and_gates);
    CHECK_FALSE(parse_universe("gates"));
    CHECK(std::string(to_string(Universe::latches_only)) == "latches");
}

TEST_CASE("run configuration maps onto search options")
{
    RunConfig c;
    c.budget_seconds.reset();
    c.isolation = false;
    c.max_size = 5;
    const Options o = to_options(c);
    CHECK_FALSE(o.budget);
    CHECK_FALSE(o.isolation);
    CHECK(o.max_size == 5);
    CHECK(o.universe == Universe::latches_only);
    CHECK_FALSE(o.external_solver);
    c.solver = "/usr/bin/some-solver";
    CHECK(to_options(c).external_solver == std::filesystem::path("/usr/bin/some-solver"));
    c.seed = 9;
    CHECK(counting_options(c).seed == 9);
    CHECK(std::string(version()) == "0.3.0");
}

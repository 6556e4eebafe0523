#include "aigac/report.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifndef AIGAC_GIT_DESCRIBE
#define AIGAC_GIT_DESCRIBE "unknown"
#endif
#ifndef AIGAC_VERSION
#define AIGAC_VERSION "0.0.0"
#endif

namespace aigac {

using ojson = nlohmann::ordered_json;

// Universes up to this size get the full attacker map listed in the report.
constexpr std::size_t map_listing_limit = 12;

const char* version() { return AIGAC_VERSION; }
const char* git_describe() { return AIGAC_GIT_DESCRIBE; }

const char* to_string(Universe universe)
{
    return universe == Universe::latches_only ? "latches" : "latches-and-gates";
}

std::optional<Universe> parse_universe(std::string_view text)
{
    if (text == "latches" || text == "latches-only" || text == "latches_only")
        return Universe::latches_only;
    if (text == "latches-and-gates" || text == "latches_and_gates" || text == "all")
        return Universe::latches_and_gates;
    return std::nullopt;
}

Options to_options(const RunConfig& config)
{
    Options o;
    o.steps = config.steps;
    o.max_size = config.max_size;
    if (config.budget_seconds)
        o.budget = std::chrono::duration<double>(*config.budget_seconds);
    else
        o.budget.reset();
    o.isolation = config.isolation;
    o.monotonicity = config.monotonicity;
    o.universe = config.universe;
    o.cluster_threshold = config.cluster_threshold;
    if (config.solver != "embedded")
        o.external_solver = config.solver;
    o.jobs = config.jobs;
    return o;
}

CountingOptions counting_options(const RunConfig& config)
{
    CountingOptions c;
    c.seed = config.seed;
    return c;
}

namespace {

std::string number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

ojson ids_json(const ComponentSet& set)
{
    ojson out = ojson::array();
    for (auto id : set)
        out.push_back(id.to_string());
    return out;
}

ojson family_json(std::span<const ComponentSet> family)
{
    ojson out = ojson::array();
    for (const auto& s : family)
        out.push_back(ids_json(s));
    return out;
}

ComponentSet set_from_json(const ojson& j)
{
    std::vector<ComponentId> ids;
    for (const auto& item : j) {
        auto id = ComponentId::parse(item.get<std::string>());
        if (!id)
            throw std::invalid_argument("bad component id \"" + item.get<std::string>() + "\"");
        ids.push_back(*id);
    }
    return ComponentSet(std::move(ids));
}

ojson config_json(const RunConfig& c)
{
    ojson j;
    j["input"] = c.input;
    j["command"] = c.command;
    j["steps"] = c.steps;
    j["max_size"] = c.max_size;
    j["budget_seconds"] = c.budget_seconds ? ojson(*c.budget_seconds) : ojson(nullptr);
    j["isolation"] = c.isolation;
    j["monotonicity"] = c.monotonicity;
    j["universe"] = to_string(c.universe);
    j["cluster_threshold"] = c.cluster_threshold;
    j["solver"] = c.solver;
    j["format"] = c.format == OutputFormat::json ? "json" : "csv";
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["outputs_are_good"] = c.outputs_are_good;
    j["timings"] = c.timings;
    return j;
}

}  // namespace

RunReport run_classification(const StructureAnalysis& analysis, const RunConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.config = config;
    auto options = to_options(config);
    report.classification = all_minimal_attackers(analysis, options);
    auto counting = counting_options(config);
    for (const auto& res : report.classification.results) {
        report.coverage.push_back(coverage(res, report.classification.universe, counting));
        auto row = metrics_row(res, report.coverage.back(), config.steps);
        if (!config.timings)
            row.ms = 0;
        report.metrics.push_back(row);
    }
    if (config.timings)
        report.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string render_config_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

std::string render_minimal_attackers(const Aig& aig, const Classification& classification)
{
    ojson j = ojson::object();
    for (const auto& res : classification.results)
        j[aig.requirements()[res.requirement].name] = family_json(res.minimal);
    return j.dump(2) + "\n";
}

std::string render_classification(const Aig& aig, const RunReport& report)
{
    const auto& c = report.classification;
    ojson j;
    j["config"] = config_json(report.config);
    j["universe"] = ids_json(c.universe);
    ojson reqs = ojson::array();
    for (std::size_t i = 0; i < c.results.size(); ++i) {
        const auto& res = c.results[i];
        const auto& cov = report.coverage[i];
        ojson r;
        r["name"] = aig.requirements()[res.requirement].name;
        r["good_literal"] = aig.requirements()[res.requirement].good.code();
        r["cone"] = ids_json(res.cone);
        r["minimal"] = family_json(res.minimal);
        r["failing"] = family_json(res.failing);
        r["unbreakable"] = res.unbreakable;
        r["broken_by_empty"] = res.broken_by_empty;
        r["incomplete"] = res.incomplete;
        r["sat_calls"] = res.sat_calls;
        r["skipped"] = res.skipped;
        r["non_minimal_successes"] = res.non_minimal_successes;
        r["n_break"] = cov.n_break.str();
        r["n_safe"] = cov.n_safe.str();
        r["coverage"] = cov.coverage;
        r["coverage_method"] = cov.sampled ? "sampled" : "exact";
        if (cov.sampled) {
            r["samples"] = cov.sampled->samples;
            r["sample_seed"] = cov.sampled->seed;
        }
        reqs.push_back(r);
    }
    j["requirements"] = reqs;
    if (c.universe.size() <= map_listing_limit) {
        auto map = propagate(c, aig.requirements().size());
        ojson entries = ojson::array();
        for (const auto& [attacker, broken] : map.entries()) {
            ojson e;
            e["attacker"] = ids_json(attacker);
            ojson names = ojson::array();
            for (auto r : broken)
                names.push_back(aig.requirements()[r].name);
            e["breaks"] = names;
            entries.push_back(e);
        }
        j["map"] = entries;
    }
    return j.dump(2) + "\n";
}

std::string render_witnesses(const Aig& aig, const RunReport& report)
{
    ojson j;
    j["config"] = config_json(report.config);
    ojson list = ojson::array();
    for (const auto& res : report.classification.results)
        for (const auto& w : res.witnesses)
            list.push_back(ojson::parse(witness_to_json(aig, w, -1)));
    j["witnesses"] = list;
    return j.dump(2) + "\n";
}

std::string render_run(const RunReport& report)
{
    ojson j;
    j["tool"] = "aigac";
    j["version"] = version();
    j["git_describe"] = git_describe();
    j["config"] = config_json(report.config);
    j["requirements"] = report.classification.results.size();
    j["clusters"] = report.classification.clusters.size();
    j["universe_size"] = report.classification.universe.size();
    j["sat_calls"] = report.classification.sat_calls();
    j["incomplete"] = report.classification.incomplete();
    j["elapsed_ms"] = report.elapsed_ms;
    return j.dump(2) + "\n";
}

namespace {

std::string metrics_fields(double ms, double n_cone, double n_min, double n_sat, std::optional<double> avg_size,
                           double cov, bool timings)
{
    std::string out = number(timings ? ms : 0.0);
    out += "," + number(n_cone) + "," + number(n_min) + "," + number(n_sat) + ",";
    out += avg_size ? number(*avg_size) : std::string("--");
    out += "," + number(cov);
    return out;
}

}  // namespace

std::string render_metrics_csv(std::span<const AverageMetrics> rows, bool timings)
{
    std::string out(metrics_header);
    out += "\n";
    for (const auto& r : rows)
        out += std::to_string(r.steps) + "," +
               metrics_fields(r.ms, r.n_cone, r.n_min, r.n_sat_calls, r.avg_min_size, r.coverage, timings) + "\n";
    return out;
}

std::string render_requirements_csv(const Aig& aig, std::span<const RequirementMetrics> rows, bool timings)
{
    std::string out = "Requirement,";
    out += metrics_header;
    out += ",Incomplete\n";
    for (const auto& r : rows) {
        out += aig.requirements()[r.requirement].name + "," + std::to_string(r.steps) + ",";
        out += metrics_fields(r.ms, static_cast<double>(r.n_cone), static_cast<double>(r.n_min),
                              static_cast<double>(r.n_sat_calls), r.avg_min_size, r.coverage, timings);
        out += r.incomplete ? ",1\n" : ",0\n";
    }
    return out;
}

std::string render_coi(const StructureAnalysis& analysis, OutputFormat format)
{
    const Aig& aig = analysis.aig();
    const auto reqs = aig.requirements();
    if (format == OutputFormat::csv) {
        std::string out = "Requirement,COI,Sources";
        for (const auto& r : reqs)
            out += ",J(" + r.name + ")";
        out += "\n";
        for (std::size_t i = 0; i < reqs.size(); ++i) {
            out += reqs[i].name + "," + std::to_string(analysis.requirement_coi(i).size()) + "," +
                   std::to_string(analysis.sources(reqs[i].good).size());
            for (std::size_t k = 0; k < reqs.size(); ++k)
                out += "," + number(analysis.jaccard(reqs[i].good, reqs[k].good).value());
            out += "\n";
        }
        return out;
    }
    ojson j;
    ojson list = ojson::array();
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        ojson r;
        r["name"] = reqs[i].name;
        r["coi"] = ids_json(analysis.requirement_coi(i));
        r["sources"] = ids_json(analysis.sources(reqs[i].good));
        list.push_back(r);
    }
    j["requirements"] = list;
    ojson matrix = ojson::array();
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        ojson row = ojson::array();
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            auto ratio = analysis.jaccard(reqs[i].good, reqs[k].good);
            row.push_back(std::to_string(ratio.num) + "/" + std::to_string(ratio.den));
        }
        matrix.push_back(row);
    }
    j["jaccard"] = matrix;
    return j.dump(2) + "\n";
}

std::string render_info(const StructureAnalysis& analysis)
{
    const Aig& aig = analysis.aig();
    std::ostringstream out;
    out << "inputs=" << aig.num_inputs() << " latches=" << aig.num_latches() << " gates=" << aig.num_gates()
        << " requirements=" << aig.requirements().size() << "\n";
    for (std::size_t i = 0; i < aig.requirements().size(); ++i) {
        const auto& r = aig.requirements()[i];
        out << r.name << " good=" << r.good.code() << " coi=" << analysis.requirement_coi(i).size()
            << " sources=" << analysis.sources(r.good).size() << "\n";
    }
    return out.str();
}

std::optional<std::size_t> StoredClassification::find(std::string_view name) const
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return i;
    return std::nullopt;
}

StoredClassification parse_classification(std::string_view text)
{
    StoredClassification out;
    try {
        auto j = ojson::parse(text);
        out.universe = set_from_json(j.at("universe"));
        for (const auto& r : j.at("requirements")) {
            RequirementResult res;
            res.requirement = out.results.size();
            res.cone = set_from_json(r.at("cone"));
            for (const auto& m : r.at("minimal"))
                res.minimal.push_back(set_from_json(m));
            for (const auto& f : r.at("failing"))
                res.failing.push_back(set_from_json(f));
            res.unbreakable = r.at("unbreakable").get<bool>();
            res.broken_by_empty = r.at("broken_by_empty").get<bool>();
            res.incomplete = r.at("incomplete").get<bool>();
            res.sat_calls = r.at("sat_calls").get<std::size_t>();
            out.names.push_back(r.at("name").get<std::string>());
            out.results.push_back(std::move(res));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed classification file: ") + e.what());
    }
    return out;
}

ComponentSet parse_attacker(std::string_view text)
{
    std::vector<ComponentId> ids;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto item = text.substr(pos, end - pos);
        while (!item.empty() && (item.front() == ' ' || item.front() == '{'))
            item.remove_prefix(1);
        while (!item.empty() && (item.back() == ' ' || item.back() == '}'))
            item.remove_suffix(1);
        if (!item.empty()) {
            auto id = ComponentId::parse(item);
            if (!id)
                throw std::invalid_argument("bad component id \"" + std::string(item) + "\"");
            ids.push_back(*id);
        }
        pos = end + 1;
    }
    return ComponentSet(std::move(ids));
}

}  // namespace aigac

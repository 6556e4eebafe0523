#include "commands.hpp"

#include "aigac/aiger.hpp"
#include "aigac/cnf.hpp"
#include "aigac/error.hpp"
#include "aigac/external_solver.hpp"
#include "aigac/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace aigac::cli {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
    std::string input;
    double budget = 600;
    bool no_isolation = false;
    bool no_monotonicity = false;
    std::string universe = "latches";
    std::string solver = "embedded";
    std::string format = "json";
    bool no_timings = false;
    std::string out_dir;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void add_input(CLI::App* cmd, std::string& input)
{
    cmd->add_option("input", input, "AIGER file (.aag or .aig)")->required();
}

void add_search_options(CLI::App* cmd, RunConfig& config, CommonFlags& flags)
{
    cmd->add_option("-z,--max-size", config.max_size, "largest attacker size explored")->capture_default_str();
    cmd->add_option("--budget", flags.budget, "seconds per requirement, 0 for unlimited")->capture_default_str();
    cmd->add_flag("--no-isolation", flags.no_isolation, "grow attackers over the whole universe");
    cmd->add_flag("--no-monotonicity", flags.no_monotonicity, "do not skip supersets of minimal attackers");
    cmd->add_option("--universe", flags.universe, "latches | latches-and-gates")->capture_default_str();
    cmd->add_option("--cluster-threshold", config.cluster_threshold, "Jaccard threshold for clustering")
        ->capture_default_str();
    cmd->add_option("--solver", flags.solver,
                    "embedded, external (path from AIGAC_SAT_SOLVER) or a solver executable path")
        ->capture_default_str();
    cmd->add_option("--format", flags.format, "stdout format: json | csv")->capture_default_str();
    cmd->add_option("--seed", config.seed, "seed for sampled coverage")->capture_default_str();
    cmd->add_option("-j,--jobs", config.jobs, "clusters solved in parallel")->capture_default_str();
    cmd->add_flag("--no-timings", flags.no_timings, "write 0 for wall-clock fields");
    cmd->add_flag("--outputs-are-good", config.outputs_are_good, "outputs are good literals, not bad ones");
    cmd->add_option("-o,--out", flags.out_dir, "directory for report files");
}

void finish_config(RunConfig& config, const CommonFlags& flags, const std::string& command)
{
    config.command = command;
    config.input = flags.input;
    config.budget_seconds = flags.budget > 0 ? std::optional<double>(flags.budget) : std::nullopt;
    config.isolation = !flags.no_isolation;
    config.monotonicity = !flags.no_monotonicity;
    config.timings = !flags.no_timings;
    auto universe = parse_universe(flags.universe);
    if (!universe)
        throw UsageError("unknown universe \"" + flags.universe + "\"");
    config.universe = *universe;
    if (flags.format == "json")
        config.format = OutputFormat::json;
    else if (flags.format == "csv")
        config.format = OutputFormat::csv;
    else
        throw UsageError("unknown format \"" + flags.format + "\"");
    if (flags.solver == "embedded") {
        config.solver = "embedded";
    } else if (flags.solver == "external") {
        auto path = sat::external_solver_from_env();
        if (!path)
            throw UsageError("--solver external needs AIGAC_SAT_SOLVER to be set");
        config.solver = path->string();
    } else {
        config.solver = flags.solver;
    }
    if (config.cluster_threshold < 0 || config.cluster_threshold > 1)
        throw UsageError("--cluster-threshold must lie in [0, 1]");
    if (config.jobs == 0)
        config.jobs = 1;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cmd_info(const std::string& input, bool outputs_are_good, std::ostream& out)
{
    auto aig = read_aiger_file(input, ParseOptions{outputs_are_good});
    StructureAnalysis analysis(aig);
    out << render_info(analysis);
    return exit_ok;
}

int cmd_coi(const std::string& input, bool outputs_are_good, const std::string& format, std::ostream& out)
{
    if (format != "json" && format != "csv")
        throw UsageError("unknown format \"" + format + "\"");
    auto aig = read_aiger_file(input, ParseOptions{outputs_are_good});
    StructureAnalysis analysis(aig);
    out << render_coi(analysis, format == "csv" ? OutputFormat::csv : OutputFormat::json);
    return exit_ok;
}

int cmd_classify(const RunConfig& config, const std::string& out_dir, std::ostream& out, std::ostream& err)
{
    auto aig = read_aiger_file(config.input, ParseOptions{config.outputs_are_good});
    StructureAnalysis analysis(aig);
    auto report = run_classification(analysis, config);
    auto steps_avg = average(report.metrics, config.steps);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        write_file(dir / "classification.json", render_classification(aig, report));
        write_file(dir / "minimal_attackers.json", render_minimal_attackers(aig, report.classification));
        write_file(dir / "metrics.csv", render_metrics_csv(std::span(&steps_avg, 1), config.timings));
        write_file(dir / "requirements.csv", render_requirements_csv(aig, report.metrics, config.timings));
        write_file(dir / "witnesses.json", render_witnesses(aig, report));
        write_file(dir / "run.json", render_run(report));
    }
    if (config.format == OutputFormat::json)
        out << render_minimal_attackers(aig, report.classification);
    else
        out << render_requirements_csv(aig, report.metrics, config.timings);

    if (report.classification.incomplete()) {
        err << "warning: budget exhausted for some requirements; results are partial\n";
        return exit_partial;
    }
    return exit_ok;
}

std::vector<std::size_t> parse_steps_list(const std::string& text)
{
    std::vector<std::size_t> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.front() == '-')
            throw UsageError("bad step value \"" + item + "\"");
        out.push_back(static_cast<std::size_t>(value));
    }
    if (out.empty())
        throw UsageError("--steps-list needs at least one value");
    return out;
}

int cmd_sweep(RunConfig config, const std::vector<std::size_t>& steps_list, const std::string& out_dir,
              std::ostream& out, std::ostream& err)
{
    auto aig = read_aiger_file(config.input, ParseOptions{config.outputs_are_good});
    StructureAnalysis analysis(aig);
    std::vector<AverageMetrics> averages;
    std::vector<RequirementMetrics> rows;
    bool incomplete = false;
    for (auto t : steps_list) {
        config.steps = t;
        auto report = run_classification(analysis, config);
        averages.push_back(average(report.metrics, t));
        rows.insert(rows.end(), report.metrics.begin(), report.metrics.end());
        incomplete = incomplete || report.classification.incomplete();
    }
    auto metrics = render_metrics_csv(averages, config.timings);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        write_file(dir / "metrics.csv", metrics);
        write_file(dir / "requirements.csv", render_requirements_csv(aig, rows, config.timings));
        RunReport header;
        header.config = config;
        write_file(dir / "run.json", render_run(header));
    }
    if (config.format == OutputFormat::csv)
        out << render_requirements_csv(aig, rows, config.timings);
    else
        out << metrics;
    if (incomplete) {
        err << "warning: budget exhausted for some requirements; results are partial\n";
        return exit_partial;
    }
    return exit_ok;
}

int cmd_query(const std::string& source, const std::string& attacker_text, const std::string& requirement,
              std::ostream& out)
{
    fs::path path(source);
    if (fs::is_directory(path))
        path /= "classification.json";
    auto stored = parse_classification(read_file(path));
    auto attacker = parse_attacker(attacker_text);
    for (auto id : attacker) {
        if (id.kind == ComponentKind::input)
            throw UsageError("attackers cannot control inputs (" + id.to_string() + ")");
        if (!stored.universe.contains(id))
            throw UsageError("component " + id.to_string() + " is outside the attacker universe " +
                             stored.universe.to_string());
    }
    auto index = stored.find(requirement);
    if (!index)
        throw UsageError("unknown requirement \"" + requirement + "\"");
    out << to_string(determine(stored.results[*index], attacker)) << "\n";
    return exit_ok;
}

struct ExportFlags {
    std::string input;
    std::size_t steps = 10;
    std::vector<std::string> requirements;
    bool no_isolation = false;
    std::string universe = "latches";
    std::string attacker;
    std::string output;
    bool outputs_are_good = false;
    bool pin_attacker = false;
};

int cmd_export(const ExportFlags& flags, std::ostream& out)
{
    auto aig = read_aiger_file(flags.input, ParseOptions{flags.outputs_are_good});
    StructureAnalysis analysis(aig);
    auto universe_kind = parse_universe(flags.universe);
    if (!universe_kind)
        throw UsageError("unknown universe \"" + flags.universe + "\"");
    std::vector<std::size_t> cluster;
    if (flags.requirements.empty()) {
        for (std::size_t i = 0; i < aig.requirements().size(); ++i)
            cluster.push_back(i);
    } else {
        for (const auto& name : flags.requirements) {
            auto idx = aig.find_requirement(name);
            if (!idx)
                throw UsageError("unknown requirement \"" + name + "\"");
            cluster.push_back(*idx);
        }
    }
    InstanceConfig config{flags.steps, !flags.no_isolation, universe_components(aig, *universe_kind)};
    auto inst = build_instance(analysis, cluster, config);
    std::string text = inst.to_dimacs();
    if (flags.pin_attacker) {
        // Pin the query as unit clauses so the file is a closed SAT problem.
        auto attacker = parse_attacker(flags.attacker);
        for (auto id : attacker)
            if (id.kind == ComponentKind::input)
                throw UsageError("attackers cannot control inputs (" + id.to_string() + ")");
        if (cluster.size() != 1)
            throw UsageError("--attacker needs exactly one --requirement");
        std::optional<std::size_t> req = cluster.front();
        auto units = inst.assumptions(attacker, req);
        auto dimacs = sat::parse_dimacs(text);
        for (auto u : units)
            dimacs.clauses.push_back({u});
        std::string comments;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line) && line.starts_with("c ");)
            comments += line + "\n";
        text = comments + sat::write_dimacs(dimacs.num_vars, dimacs.clauses);
    }
    if (flags.output.empty() || flags.output == "-")
        out << text;
    else
        write_file(flags.output, text);
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Attacker classification for And-Inverter Graphs", "aigac"};
    app.set_version_flag("--version", std::string(version()) + " (" + git_describe() + ")");
    app.require_subcommand(1);

    std::string info_input;
    bool info_good = false;
    auto* info = app.add_subcommand("info", "circuit and requirement summary");
    add_input(info, info_input);
    info->add_flag("--outputs-are-good", info_good, "outputs are good literals, not bad ones");

    std::string coi_input;
    std::string coi_format = "json";
    bool coi_good = false;
    auto* coi = app.add_subcommand("coi", "cones of influence, sources and Jaccard matrix");
    add_input(coi, coi_input);
    coi->add_option("--format", coi_format, "json | csv")->capture_default_str();
    coi->add_flag("--outputs-are-good", coi_good, "outputs are good literals, not bad ones");

    RunConfig classify_config;
    CommonFlags classify_flags;
    auto* classify = app.add_subcommand("classify", "minimal attackers, coverage and witnesses");
    add_input(classify, classify_flags.input);
    classify->add_option("-t,--steps", classify_config.steps, "unrolling bound")->capture_default_str();
    add_search_options(classify, classify_config, classify_flags);

    RunConfig sweep_config;
    CommonFlags sweep_flags;
    std::string steps_list;
    auto* sweep = app.add_subcommand("sweep", "classify for several bounds, one averages row per bound");
    add_input(sweep, sweep_flags.input);
    sweep->add_option("--steps-list", steps_list, "comma-separated bounds, e.g. 0,1,5,10")->required();
    add_search_options(sweep, sweep_config, sweep_flags);

    std::string query_source, query_attacker, query_requirement;
    auto* query = app.add_subcommand("query", "offline verdict from a previous classify run");
    query->add_option("results", query_source, "classify output directory or classification.json")->required();
    query->add_option("-a,--attacker", query_attacker, "components, e.g. v1,g1 (empty for none)");
    query->add_option("-r,--requirement", query_requirement, "requirement name")->required();

    ExportFlags export_flags;
    auto* exporter = app.add_subcommand("export-dimacs", "write the unrolled instance as DIMACS CNF");
    add_input(exporter, export_flags.input);
    exporter->add_option("-t,--steps", export_flags.steps, "unrolling bound")->capture_default_str();
    exporter->add_option("-r,--requirement", export_flags.requirements, "requirement(s) to include");
    exporter->add_flag("--no-isolation", export_flags.no_isolation, "encode the whole circuit");
    exporter->add_option("--universe", export_flags.universe, "latches | latches-and-gates")->capture_default_str();
    auto* export_attacker = exporter->add_option("-a,--attacker", export_flags.attacker,
                                                 "append the attacker's selector units (one -r at most)");
    exporter->add_option("-o,--output", export_flags.output, "output file, stdout by default");
    exporter->add_flag("--outputs-are-good", export_flags.outputs_are_good, "outputs are good literals");

    std::vector<std::string> argv_store;
    argv_store.push_back("aigac");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (info->parsed())
            return cmd_info(info_input, info_good, out);
        if (coi->parsed())
            return cmd_coi(coi_input, coi_good, coi_format, out);
        if (classify->parsed()) {
            finish_config(classify_config, classify_flags, "classify");
            return cmd_classify(classify_config, classify_flags.out_dir, out, err);
        }
        if (sweep->parsed()) {
            finish_config(sweep_config, sweep_flags, "sweep");
            return cmd_sweep(sweep_config, parse_steps_list(steps_list), sweep_flags.out_dir, out, err);
        }
        if (query->parsed())
            return cmd_query(query_source, query_attacker, query_requirement, out);
        if (exporter->parsed()) {
            export_flags.pin_attacker = export_attacker->count() > 0;
            return cmd_export(export_flags, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const AigError& e) {
        err << "invalid circuit: " << e.what() << "\n";
        return exit_parse;
    } catch (const BudgetError& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return exit_partial;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace aigac::cli

#include "aigac/external_solver.hpp"

#include "aigac/error.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace aigac::sat {

Dimacs parse_dimacs(std::string_view text)
{
    Dimacs out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t declared = 0;
    std::vector<Lit> current;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == 'c' || line[start] == '%')
            continue;
        std::istringstream ls(line.substr(start));
        if (line[start] == 'p') {
            std::string p, fmt;
            long long vars = -1, clauses = -1;
            if (have_header || !(ls >> p >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0 || clauses < 0)
                throw ParseError(line_no, "malformed DIMACS problem line");
            have_header = true;
            out.num_vars = static_cast<Var>(vars);
            declared = static_cast<std::size_t>(clauses);
            continue;
        }
        if (!have_header)
            throw ParseError(line_no, "clause before problem line");
        long long value = 0;
        while (ls >> value) {
            if (value == 0) {
                out.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::llabs(value) > out.num_vars)
                throw ParseError(line_no, "literal " + std::to_string(value) + " exceeds declared variable count");
            current.push_back(Lit::from_dimacs(static_cast<int>(value)));
        }
        if (!ls.eof())
            throw ParseError(line_no, "unexpected token in clause");
    }
    if (!current.empty())
        out.clauses.push_back(std::move(current));
    if (!have_header)
        throw ParseError(0, "missing DIMACS problem line");
    if (out.clauses.size() != declared)
        throw ParseError(0, "problem line declares " + std::to_string(declared) + " clauses, found " +
                                std::to_string(out.clauses.size()));
    return out;
}

std::string write_dimacs(Var num_vars, std::span<const std::vector<Lit>> clauses)
{
    std::string out = "p cnf " + std::to_string(num_vars) + " " + std::to_string(clauses.size()) + "\n";
    for (const auto& c : clauses) {
        for (auto l : c) {
            out += std::to_string(l.to_dimacs());
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

namespace {

// Rewrites the problem line so the appended unit clauses are counted.
std::string with_units(std::string_view dimacs, std::span<const Lit> units)
{
    std::string text(dimacs);
    if (units.empty())
        return text;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        if (line.starts_with("p ")) {
            std::istringstream ls{std::string(line)};
            std::string p, fmt;
            long long vars = 0, clauses = 0;
            ls >> p >> fmt >> vars >> clauses;
            for (auto u : units)
                vars = std::max<long long>(vars, u.var() + 1);
            std::string header = "p cnf " + std::to_string(vars) + " " +
                                 std::to_string(clauses + static_cast<long long>(units.size()));
            text.replace(pos, end - pos, header);
            break;
        }
        pos = end + 1;
    }
    if (!text.empty() && text.back() != '\n')
        text += '\n';
    for (auto u : units)
        text += std::to_string(u.to_dimacs()) + " 0\n";
    return text;
}

std::filesystem::path temp_cnf_path()
{
    static std::atomic<unsigned> counter{0};
    auto name = "aigac-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".cnf";
    return std::filesystem::temp_directory_path() / name;
}

std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char ch : s) {
        if (ch == '\'')
            out += "'\\''";
        else
            out += ch;
    }
    return out + "'";
}

}  // namespace

ExternalResult solve_external(const std::filesystem::path& solver, std::string_view dimacs,
                              std::span<const Lit> assumptions)
{
    if (!std::filesystem::exists(solver))
        throw ExternalSolverError("external solver not found: " + solver.string());

    auto path = temp_cnf_path();
    {
        std::ofstream out(path, std::ios::binary);
        out << with_units(dimacs, assumptions);
        if (!out)
            throw ExternalSolverError("cannot write " + path.string());
    }
    struct Cleanup {
        std::filesystem::path p;
        ~Cleanup()
        {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    } cleanup{path};

    std::string command = shell_quote(solver.string()) + " " + shell_quote(path.string()) + " 2>/dev/null";
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr)
        throw ExternalSolverError("cannot start " + solver.string());
    std::string output;
    char buffer[4096];
    std::size_t n;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0)
        output.append(buffer, n);
    int status = ::pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code == 127)
        throw ExternalSolverError("external solver could not be executed: " + solver.string());
    if (code != 0 && code != 10 && code != 20)
        throw ExternalSolverError("external solver exited with status " + std::to_string(code));

    ExternalResult result;
    bool have_status = false;
    std::vector<int> values;
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("s ")) {
            if (line.find("UNSATISFIABLE") != std::string::npos)
                result.outcome = Outcome::unsat;
            else if (line.find("SATISFIABLE") != std::string::npos)
                result.outcome = Outcome::sat;
            else if (line.find("UNKNOWN") != std::string::npos)
                result.outcome = Outcome::indeterminate;
            else
                throw ExternalSolverError("unparsable status line: " + line);
            have_status = true;
        } else if (line.starts_with("v ") || line == "v") {
            std::istringstream vs(line.substr(1));
            int v;
            while (vs >> v)
                values.push_back(v);
            if (!vs.eof())
                throw ExternalSolverError("unparsable value line: " + line);
        }
    }
    if (!have_status)
        throw ExternalSolverError("external solver printed no status line");
    if (result.outcome == Outcome::sat) {
        for (int v : values) {
            if (v == 0)
                continue;
            auto idx = static_cast<std::size_t>(std::abs(v) - 1);
            if (idx >= result.model.size())
                result.model.resize(idx + 1, false);
            result.model[idx] = v > 0;
        }
    }
    return result;
}

std::optional<std::filesystem::path> external_solver_from_env()
{
    const char* value = std::getenv("AIGAC_SAT_SOLVER");
    if (value == nullptr || *value == '\0')
        return std::nullopt;
    return std::filesystem::path(value);
}

namespace {

class ExternalBackend final : public Backend {
public:
    explicit ExternalBackend(std::filesystem::path solver) : solver_(std::move(solver)) {}

    Var new_var() override { return num_vars_++; }
    Var num_vars() const override { return num_vars_; }
    void add_clause(std::span<const Lit> lits) override { clauses_.emplace_back(lits.begin(), lits.end()); }

    Outcome solve(std::span<const Lit> assumptions, const Limits&) override
    {
        auto result = solve_external(solver_, write_dimacs(num_vars_, clauses_), assumptions);
        model_ = std::move(result.model);
        model_.resize(static_cast<std::size_t>(num_vars_), false);
        return result.outcome;
    }

    const Model& model() const override { return model_; }

private:
    std::filesystem::path solver_;
    Var num_vars_ = 0;
    std::vector<std::vector<Lit>> clauses_;
    Model model_;
};

}  // namespace

std::unique_ptr<Backend> make_external_backend(std::filesystem::path solver)
{
    return std::make_unique<ExternalBackend>(std::move(solver));
}

}  // namespace aigac::sat

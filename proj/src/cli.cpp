#include <pp10/cli.hpp>

#include <pp10/encoder.hpp>
#include <pp10/pipeline.hpp>
#include <pp10/proof.hpp>
#include <pp10/sat.hpp>
#include <pp10/symmetry.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace pp10::cli {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, std::string_view data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw std::runtime_error("cannot write " + path);
}

std::vector<int> completion_projection()
{
    std::vector<int> proj;
    for (int r = symmetry::kCompletionFirstRow; r <= symmetry::kCompletionLastRow; ++r)
        for (int c = kAColumns + 1; c <= kCols; ++c)
            proj.push_back(var_of(r, c));
    return proj;
}

ordered_json cells_json(const symmetry::Completion &c)
{
    auto j = ordered_json::array();
    for (auto [r, col] : c.cells)
        j.push_back({r, col});
    return j;
}

struct SolverFlags {
    std::uint64_t seed = sat::SolverConfig{}.seed;
    std::uint64_t conflict_budget = 0;
    double time_budget = 0;

    void add_to(CLI::App *app)
    {
        app->add_option("--seed", seed, "Solver random seed");
        app->add_option("--conflict-budget", conflict_budget, "Abort after this many conflicts (0 = none)");
        app->add_option("--time-budget", time_budget, "Abort after this many seconds (0 = none)")
            ->check(CLI::NonNegativeNumber);
    }
    sat::SolverConfig config() const
    {
        sat::SolverConfig c;
        c.seed = seed;
        c.conflict_budget = conflict_budget;
        c.time_budget_seconds = time_budget;
        return c;
    }
};

int cmd_fixture_validate(const std::string &path, const std::string &json_path, std::ostream &out)
{
    auto m = path.empty() ? parse_fixture(builtin_fixture_text()) : parse_fixture(read_file(path));
    auto report = validate_structure(m);
    if (!json_path.empty()) {
        ordered_json j;
        j["ok"] = report.ok();
        auto arr = ordered_json::array();
        for (const auto &f : report.findings)
            arr.push_back({{"kind", std::string(to_string(f.kind))}, {"row", f.row}, {"col", f.col},
                {"other", f.other}, {"message", f.message}});
        j["findings"] = arr;
        write_file(json_path, j.dump(2) + "\n");
    }
    if (!report.ok()) {
        out << report.to_text();
        out << report.findings.size() << " violation(s)\n";
        return kFailure;
    }
    auto prop = propagate_forced_zeros(m);
    out << "fixture ok: " << kRows << "x" << kCols << ", " << m.count(Cell::Unknown) << " unknown cells, "
        << prop.forced_zeros << " forced zeros (" << prop.matrix.count(Cell::Unknown) << " unknown after propagation)\n";
    return kOk;
}

int cmd_encode(int rows, const std::string &variant, bool raw, const std::string &out_path, std::string stats_path,
    std::ostream &out)
{
    auto v = parse_variant(variant);
    const auto &m = builtin_fixture();
    auto cnf = assemble(m, EncodeOptions{v, rows, !raw});
    auto stats = statistics(cnf, v);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        write_dimacs(cnf, f,
            DimacsHeader{pipeline::sha256_hex(builtin_fixture_text()), std::string(to_string(v)), rows});
        if (!f)
            throw std::runtime_error("cannot write " + out_path);
        if (stats_path.empty())
            stats_path = out_path + ".stats.json";
    }
    if (!stats_path.empty())
        write_file(stats_path, stats_json(stats));
    out << "rows " << rows << ", variant " << stats.variant << (raw ? ", raw fixture" : "") << "\n"
        << "variables " << stats.num_vars << ", unknown " << stats.num_unknown << "\n"
        << "units " << stats.units << ", at-most-one " << stats.amo << ", row at-least-one " << stats.row_alo
        << ", column at-least-one " << stats.col_alo << "\n"
        << "distinct clauses " << stats.total_distinct << "\n";
    return kOk;
}

std::vector<Literal> read_assumptions(const std::string &path)
{
    std::istringstream in(read_file(path));
    std::vector<Literal> out;
    long v = 0;
    while (in >> v)
        if (v != 0)
            out.push_back(Literal(static_cast<std::int32_t>(v)));
    if (!in.eof())
        throw std::runtime_error("assumption file " + path + " contains a non-integer token");
    return out;
}

int cmd_solve(const std::string &cnf_path, const std::string &assume_path, const std::string &proof_path,
    const std::string &model_path, const SolverFlags &flags, std::ostream &out)
{
    DimacsHeader header;
    auto cnf = read_dimacs_file(cnf_path, &header);
    std::vector<Literal> assume;
    if (!assume_path.empty())
        assume = read_assumptions(assume_path);

    std::ofstream proof_stream;
    sat::Solver solver(flags.config());
    if (!proof_path.empty()) {
        proof_stream.open(proof_path, std::ios::binary | std::ios::trunc);
        if (!proof_stream)
            throw std::runtime_error("cannot write " + proof_path);
        solver.attach_proof(proof_stream);
    }
    solver.load(cnf);
    sat::SolveOutcome r;
    try {
        r = solver.solve(assume);
    }
    catch (const sat::ResourceLimit &e) {
        out << "s UNKNOWN\nc " << e.what() << "\n";
        return kResourceLimit;
    }
    const auto &st = solver.stats();
    switch (r.status) {
    case sat::Status::Sat: out << "s SATISFIABLE\n"; break;
    case sat::Status::Unsat: out << "s UNSATISFIABLE\n"; break;
    case sat::Status::UnsatUnderAssumptions:
        out << "s UNSATISFIABLE under assumptions (core of " << r.core.size() << " literals)\n";
        break;
    }
    out << "c conflicts " << st.conflicts << ", decisions " << st.decisions << ", propagations " << st.propagations
        << "\n";
    if (!model_path.empty()) {
        ordered_json j;
        j["status"] = r.status == sat::Status::Sat ? "sat" : "unsat";
        j["num_vars"] = cnf.num_vars();
        if (header.max_row)
            j["rows"] = header.max_row;
        auto lits = ordered_json::array();
        for (std::size_t v = 1; v < r.model.size(); ++v)
            lits.push_back(r.model[v] ? static_cast<long>(v) : -static_cast<long>(v));
        j["literals"] = lits;
        if (r.status == sat::Status::UnsatUnderAssumptions) {
            auto core = ordered_json::array();
            for (auto l : r.core)
                core.push_back(l.dimacs());
            j["core"] = core;
        }
        write_file(model_path, j.dump() + "\n");
    }
    return kOk;
}

int cmd_enumerate(int rows, bool symmetric, bool raw, const std::string &json_path, const std::string &proof_path,
    const std::string &blocking_cnf, const SolverFlags &flags, std::ostream &out)
{
    const auto &m = builtin_fixture();
    auto cnf = assemble(m, EncodeOptions{EncodingVariant::FullSimplify, rows, !raw});
    auto projection = completion_projection();

    std::ofstream proof_stream;
    if (!proof_path.empty()) {
        proof_stream.open(proof_path, std::ios::binary | std::ios::trunc);
        if (!proof_stream)
            throw std::runtime_error("cannot write " + proof_path);
    }
    std::ostream *proof = proof_path.empty() ? nullptr : &proof_stream;

    ordered_json j;
    j["rows"] = rows;
    sat::EnumerationResult res;
    if (symmetric) {
        auto stab = symmetry::stabilizer(symmetry::automorphisms(m), 1);
        std::vector<symmetry::OrbitRecord> orbits;
        sat::EnumerationHook hook;
        hook.projection = projection;
        hook.on_model = [&](const sat::ProjectedModel &pm, const std::vector<bool> &) {
            auto rec = symmetry::orbit(stab, symmetry::completion_from_literals(m, pm));
            auto clauses = symmetry::blocking_clauses(rec);
            orbits.push_back(std::move(rec));
            return clauses;
        };
        res = sat::enumerate(cnf, hook, flags.config(), proof);
        std::sort(orbits.begin(), orbits.end(),
            [](const auto &a, const auto &b) { return a.representative < b.representative; });
        std::size_t total = 0;
        auto arr = ordered_json::array();
        for (const auto &o : orbits) {
            total += o.orbit_size;
            arr.push_back({{"representative", cells_json(o.representative)}, {"orbit_size", o.orbit_size}});
        }
        j["total"] = total;
        j["inequivalent"] = orbits.size();
        j["orbits"] = arr;
        out << orbits.size() << " inequivalent completions, " << total << " in total\n";
    }
    else {
        res = sat::enumerate(cnf, sat::self_blocking_hook(projection), flags.config(), proof);
        std::vector<symmetry::Completion> all;
        for (const auto &pm : res.models)
            all.push_back(symmetry::completion_from_literals(m, pm));
        std::sort(all.begin(), all.end());
        auto arr = ordered_json::array();
        for (const auto &c : all)
            arr.push_back(cells_json(c));
        j["total"] = all.size();
        j["completions"] = arr;
        out << all.size() << " completions\n";
    }
    if (!json_path.empty())
        write_file(json_path, j.dump(1) + "\n");
    if (!blocking_cnf.empty()) {
        Cnf extended = cnf;
        for (const auto &c : res.injected)
            extended.push_back(c, Provenance::Blocking);
        std::ofstream f(blocking_cnf, std::ios::binary | std::ios::trunc);
        write_dimacs(extended, f, DimacsHeader{pipeline::sha256_hex(builtin_fixture_text()), "full-simplify", rows});
    }
    return kOk;
}

int cmd_check_proof(const std::string &cnf_path, const std::string &proof_path, const std::string &json_path,
    std::ostream &out)
{
    auto cnf = read_dimacs_file(cnf_path);
    auto report = proof::check_drup_file(cnf, proof_path);
    if (!json_path.empty())
        write_file(json_path, proof::report_json(report));
    if (report.verified())
        out << "s VERIFIED\n";
    else
        out << "s FAILED at step " << report.failed_step << ": " << report.reason << "\n";
    out << "c steps " << report.steps_checked << ", additions " << report.additions << ", deletions "
        << report.deletions << " (" << report.absent_deletions << " absent, " << report.ignored_deletions
        << " ignored)\n";
    return report.verified() ? kOk : kFailure;
}

int cmd_show_witness(const std::string &model_path, int rows, std::ostream &out, std::ostream &err)
{
    auto j = nlohmann::json::parse(read_file(model_path));
    if (j.value("status", "") != "sat")
        throw std::runtime_error(model_path + " does not hold a satisfying assignment");
    std::vector<bool> model(kRows * kCols + 1, false);
    int max_var = 0;
    for (long v : j.at("literals")) {
        auto var = v < 0 ? -v : v;
        if (var < 1 || var > kRows * kCols)
            throw std::runtime_error("literal " + std::to_string(v) + " outside the 51x75 grid");
        model[static_cast<std::size_t>(var)] = v > 0;
        max_var = std::max(max_var, static_cast<int>(var));
    }
    if (rows == 0)
        rows = j.value("rows", (max_var + kCols - 1) / kCols);
    rows = std::clamp(rows, kKnownRows + 1, kRows);
    auto m = apply_model(builtin_fixture(), model, rows);
    out << serialize(m, rows);
    auto report = validate_completed_window(m, rows);
    if (report.ok()) {
        err << "rows 1-" << rows << " form a valid partial plane\n";
        return kOk;
    }
    err << report.to_text();
    return kFailure;
}

int cmd_pipeline(const std::string &config_path, bool preset, const std::string &output_dir, int threads,
    std::optional<std::uint64_t> seed, bool raw, bool baseline, double baseline_budget, std::ostream &out)
{
    auto cfg = preset ? pipeline::paper_repro_preset() : pipeline::RunConfig{};
    if (!config_path.empty())
        cfg = pipeline::load_config(config_path, cfg);
    if (const char *env = std::getenv(kOutputDirEnv); env && *env)
        cfg.output_dir = env;
    if (!output_dir.empty())
        cfg.output_dir = output_dir;
    if (threads > 0)
        cfg.threads = threads;
    if (seed)
        cfg.solver.seed = *seed;
    if (raw)
        cfg.propagate = false;
    if (baseline)
        cfg.baseline = true;
    if (baseline_budget > 0)
        cfg.baseline_time_budget = baseline_budget;
    cfg.validate();

    auto report = pipeline::run_pipeline(cfg, &out);
    out << "report " << (report.directory / "report.json").string() << "\n";
    if (!report.success) {
        out << "pipeline failed\n";
        return kFailure;
    }
    if (report.resource_limited) {
        out << "pipeline incomplete: a resource limit was hit\n";
        return kResourceLimit;
    }
    out << "pipeline succeeded\n";
    return kOk;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Encode, solve and certify the weight-15 incidence search"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    int code = kOk;

    auto *fv = app.add_subcommand("fixture-validate", "Check the fixture's structural invariants");
    std::string fv_path, fv_json;
    fv->add_option("--fixture", fv_path, "Fixture file (default: built-in)")->check(CLI::ExistingFile);
    fv->add_option("--json", fv_json, "Write the report as JSON");

    auto *enc = app.add_subcommand("encode", "Write the CNF encoding");
    int enc_rows = kRows;
    std::string enc_variant = "full-simplify", enc_out, enc_stats;
    bool enc_raw = false;
    enc->add_option("--rows", enc_rows, "Last row of the window")->check(CLI::Range(kKnownRows + 1, kRows));
    enc->add_option("--variant", enc_variant, "window-only, drop-satisfied or full-simplify")
        ->check(CLI::IsMember({"window-only", "drop-satisfied", "full-simplify"}));
    enc->add_option("-o,--output", enc_out, "DIMACS output file");
    enc->add_option("--stats", enc_stats, "Statistics JSON (default: <output>.stats.json)");
    enc->add_flag("--raw-fixture", enc_raw, "Do not apply forced-zero propagation first");

    auto *sol = app.add_subcommand("solve", "Solve a DIMACS file");
    std::string sol_cnf, sol_assume, sol_proof, sol_model;
    SolverFlags sol_flags;
    sol->add_option("cnf", sol_cnf, "DIMACS file")->required()->check(CLI::ExistingFile);
    sol->add_option("--assume", sol_assume, "File of assumption literals")->check(CLI::ExistingFile);
    sol->add_option("--proof", sol_proof, "Write a DRUP proof");
    sol->add_option("--model", sol_model, "Write the outcome and model as JSON");
    sol_flags.add_to(sol);

    auto *en = app.add_subcommand("enumerate", "Enumerate completions of rows 22-27");
    int en_rows = 27;
    bool en_sym = false, en_raw = false;
    std::string en_json, en_proof, en_blocking;
    SolverFlags en_flags;
    en->add_option("--rows", en_rows, "Last row of the window")->check(CLI::Range(27, kRows));
    en->add_flag("--block-symmetric", en_sym, "Block whole orbits under the column-1 stabilizer");
    en->add_flag("--raw-fixture", en_raw, "Do not apply forced-zero propagation first");
    en->add_option("-o,--output", en_json, "Completions JSON");
    en->add_option("--proof", en_proof, "Write a DRUP proof of the final unsatisfiability");
    en->add_option("--blocking-cnf", en_blocking, "Write the formula plus all injected clauses");
    en_flags.add_to(en);

    auto *pl = app.add_subcommand("pipeline", "Run the full verification");
    std::string pl_config, pl_out;
    bool pl_preset = false, pl_raw = false, pl_baseline = false;
    int pl_threads = 0;
    double pl_budget = 0;
    std::optional<std::uint64_t> pl_seed;
    auto *cfg_opt = pl->add_option("--config", pl_config, "key = value run configuration")->check(CLI::ExistingFile);
    pl->add_flag("--paper-repro", pl_preset, "Run every headline experiment including the baseline")
        ->excludes(cfg_opt);
    pl->add_option("--output-dir", pl_out, std::string("Artifact root (overrides ") + kOutputDirEnv + ")");
    pl->add_option("--threads", pl_threads, "Worker threads for phase 2")->check(CLI::NonNegativeNumber);
    pl->add_option("--seed", pl_seed, "Solver random seed");
    pl->add_flag("--raw-fixture", pl_raw, "Do not apply forced-zero propagation first");
    pl->add_flag("--baseline", pl_baseline, "Also run the no-symmetry baseline");
    pl->add_option("--baseline-budget", pl_budget, "Baseline time budget in seconds")
        ->check(CLI::NonNegativeNumber);

    auto *cp = app.add_subcommand("check-proof", "Verify a DRUP proof");
    std::string cp_cnf, cp_proof, cp_json;
    cp->add_option("cnf", cp_cnf, "DIMACS file")->required()->check(CLI::ExistingFile);
    cp->add_option("proof", cp_proof, "DRUP file")->required()->check(CLI::ExistingFile);
    cp->add_option("--json", cp_json, "Write the check report as JSON");

    auto *sw = app.add_subcommand("show-witness", "Render a model as fixture-format text");
    std::string sw_model;
    int sw_rows = 0;
    sw->add_option("model", sw_model, "Model JSON written by solve --model")->required()->check(CLI::ExistingFile);
    sw->add_option("--rows", sw_rows, "Rows to render")->check(CLI::Range(kKnownRows + 1, kRows));

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (fv->parsed())
            code = cmd_fixture_validate(fv_path, fv_json, out);
        else if (enc->parsed())
            code = cmd_encode(enc_rows, enc_variant, enc_raw, enc_out, enc_stats, out);
        else if (sol->parsed())
            code = cmd_solve(sol_cnf, sol_assume, sol_proof, sol_model, sol_flags, out);
        else if (en->parsed())
            code = cmd_enumerate(en_rows, en_sym, en_raw, en_json, en_proof, en_blocking, en_flags, out);
        else if (pl->parsed())
            code = cmd_pipeline(pl_config, pl_preset, pl_out, pl_threads, pl_seed, pl_raw, pl_baseline, pl_budget, out);
        else if (cp->parsed())
            code = cmd_check_proof(cp_cnf, cp_proof, cp_json, out);
        else if (sw->parsed())
            code = cmd_show_witness(sw_model, sw_rows, out, err);
    }
    catch (const sat::ResourceLimit &e) {
        err << "resource limit: " << e.what() << "\n";
        return kResourceLimit;
    }
    catch (const pipeline::ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    }
    catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return code;
}

} // namespace pp10::cli

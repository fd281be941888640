#include <pp10/pipeline.hpp>

#include <algorithm>
#include <chrono>
#include <exception>
#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

namespace pp10::pipeline {

using nlohmann::ordered_json;

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Unsat: return "unsat";
    case Outcome::Sat: return "sat";
    case Outcome::ResourceLimit: return "resource-limit";
    case Outcome::Skipped: return "skipped";
    }
    return "?";
}

Context Context::make(const RunConfig &cfg)
{
    Context ctx;
    ctx.fixture = builtin_fixture();
    ctx.fixture_sha256 = sha256_hex(builtin_fixture_text());
    if (cfg.propagate)
        ctx.forced_zeros = propagate_forced_zeros(ctx.fixture).forced_zeros;
    return ctx;
}

Cnf Context::instance(const RunConfig &cfg, int max_row) const
{
    return assemble(fixture, EncodeOptions{cfg.variant, max_row, cfg.propagate});
}

namespace {

std::vector<int> completion_projection()
{
    std::vector<int> proj;
    for (int r = symmetry::kCompletionFirstRow; r <= symmetry::kCompletionLastRow; ++r)
        for (int c = kAColumns + 1; c <= kCols; ++c)
            proj.push_back(var_of(r, c));
    return proj;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

} // namespace

std::vector<symmetry::Completion> Phase1Result::representatives() const
{
    std::vector<symmetry::Completion> out;
    for (const auto &o : orbits)
        out.push_back(o.representative);
    return out;
}

Phase1Result phase1(const RunConfig &cfg, const Context &ctx)
{
    Phase1Result res;
    auto group = symmetry::automorphisms(ctx.fixture);
    auto stab = symmetry::stabilizer(group, 1);
    res.group_order = group.order();
    res.heavy_group_order = symmetry::automorphisms(ctx.fixture, kHeavyRows, kAColumns).order();
    res.stabilizer_order = stab.order();

    auto cnf = ctx.instance(cfg, 27);
    auto projection = completion_projection();

    auto raw_enumeration = [&] {
        auto r = sat::enumerate(cnf, sat::self_blocking_hook(projection), cfg.solver);
        std::set<symmetry::Completion> found;
        for (const auto &m : r.models)
            found.insert(symmetry::completion_from_literals(ctx.fixture, m));
        if (found.size() != r.models.size())
            throw CrossCheckMismatch("plain enumeration produced a repeated completion");
        return found;
    };
    std::future<std::set<symmetry::Completion>> raw;
    bool parallel = cfg.cross_check && cfg.worker_count() > 1;
    if (parallel)
        raw = std::async(std::launch::async, raw_enumeration);

    auto checked = [&](const symmetry::Completion &c) {
        auto err = symmetry::check_completion(ctx.fixture, c);
        if (!err.empty())
            throw std::runtime_error("invalid completion: " + err);
    };

    std::vector<symmetry::OrbitRecord> orbits;
    if (cfg.symmetry) {
        sat::EnumerationHook hook;
        hook.projection = projection;
        hook.on_model = [&](const sat::ProjectedModel &pm, const std::vector<bool> &) {
            auto c = symmetry::completion_from_literals(ctx.fixture, pm);
            checked(c);
            auto rec = symmetry::orbit(stab, c);
            for (const auto &m : rec.members)
                checked(m);
            auto clauses = symmetry::blocking_clauses(rec);
            orbits.push_back(std::move(rec));
            return clauses;
        };
        res.stats = sat::enumerate(cnf, hook, cfg.solver).stats;
    }
    else {
        auto r = sat::enumerate(cnf, sat::self_blocking_hook(projection), cfg.solver);
        res.stats = r.stats;
        std::set<symmetry::Completion> seen;
        for (const auto &m : r.models) {
            auto c = symmetry::completion_from_literals(ctx.fixture, m);
            checked(c);
            auto canon = symmetry::canonical(stab, c);
            if (seen.insert(canon).second)
                orbits.push_back(symmetry::orbit(stab, canon));
        }
    }
    std::sort(orbits.begin(), orbits.end(),
        [](const auto &a, const auto &b) { return a.representative < b.representative; });
    for (const auto &o : orbits) {
        res.total += o.orbit_size;
        res.blocking_clauses += o.orbit_size - 1;
        ++res.histogram[o.orbit_size];
    }
    res.orbits = std::move(orbits);

    if (cfg.cross_check) {
        auto found = parallel ? raw.get() : raw_enumeration();
        res.raw_count = found.size();
        std::set<symmetry::Completion> unioned;
        for (const auto &o : res.orbits)
            unioned.insert(o.members.begin(), o.members.end());
        if (unioned != found)
            throw CrossCheckMismatch("orbit union has " + std::to_string(unioned.size()) +
                " completions, plain enumeration found " + std::to_string(found.size()));
    }
    return res;
}

bool Phase2IncrementalResult::all_unsat() const
{
    return !outcomes.empty() &&
        std::all_of(outcomes.begin(), outcomes.end(), [](Outcome o) { return o == Outcome::Unsat; });
}

Phase2IncrementalResult phase2_incremental(const RunConfig &cfg, const Context &ctx, const Cnf &cnf,
    const std::vector<symmetry::Completion> &representatives, int workers)
{
    Phase2IncrementalResult res;
    res.outcomes.assign(representatives.size(), Outcome::Skipped);
    int max_row = 0;
    for (std::size_t i = 0; i < cnf.size(); ++i)
        for (auto l : cnf.clause(i))
            max_row = std::max(max_row, row_of_var(l.var()));
    workers = std::max(1, std::min<int>(workers, static_cast<int>(representatives.size())));

    std::mutex mu;
    std::vector<std::pair<std::size_t, Counterexample>> found;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));

    auto work = [&](int w) {
        try {
            sat::Solver solver(cfg.solver);
            solver.load(cnf);
            for (std::size_t i = static_cast<std::size_t>(w); i < representatives.size();
                 i += static_cast<std::size_t>(workers)) {
                auto assume = symmetry::completion_literals(representatives[i]);
                try {
                    auto r = solver.solve(assume);
                    if (r.status == sat::Status::Sat) {
                        res.outcomes[i] = Outcome::Sat;
                        Counterexample ce;
                        ce.representative = i;
                        auto m = apply_model(ctx.fixture, r.model, max_row);
                        ce.satisfies_formula = sat::satisfies(cnf, r.model);
                        ce.valid_plane = validate_completed_window(m, max_row).ok();
                        ce.matrix = serialize(m, max_row);
                        std::lock_guard lock(mu);
                        found.emplace_back(i, std::move(ce));
                    }
                    else
                        res.outcomes[i] = Outcome::Unsat;
                }
                catch (const sat::ResourceLimit &) {
                    res.outcomes[i] = Outcome::ResourceLimit;
                }
            }
        }
        catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
    };

    if (workers == 1)
        work(0);
    else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto &t : pool)
            t.join();
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    for (auto &f : found)
        res.counterexamples.push_back(std::move(f.second));
    return res;
}

Cnf monolithic_instance(const Cnf &cnf, const std::vector<symmetry::OrbitRecord> &orbits)
{
    Cnf out = cnf;
    for (const auto &o : orbits) {
        auto clauses = symmetry::blocking_clauses(o);
        for (std::size_t k = 0; k < o.members.size(); ++k)
            if (o.members[k] != o.representative)
                out.push_back(clauses[k], Provenance::Blocking);
    }
    return out;
}

CertifiedRun certified_solve(
    const Cnf &cnf, const sat::SolverConfig &solver_cfg, const std::filesystem::path &proof_path, bool check_proof)
{
    CertifiedRun run;
    run.blocking_clauses = cnf.count(Provenance::Blocking);
    run.proof_path = proof_path;
    {
        std::ofstream out(proof_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw sat::SinkFailure("cannot open " + proof_path.string());
        sat::Solver solver(solver_cfg);
        solver.attach_proof(out);
        solver.load(cnf);
        try {
            auto r = solver.solve();
            run.outcome = r.status == sat::Status::Sat ? Outcome::Sat : Outcome::Unsat;
            if (r.status == sat::Status::Sat && !sat::satisfies(cnf, r.model))
                throw std::logic_error("solver returned a model that violates the formula");
        }
        catch (const sat::ResourceLimit &e) {
            run.outcome = Outcome::ResourceLimit;
            run.note = e.what();
        }
        run.stats = solver.stats();
    }
    run.proof_sha256 = sha256_file(proof_path);
    if (check_proof && run.outcome == Outcome::Unsat)
        run.check = proof::check_drup_file(cnf, proof_path.string());
    return run;
}

WitnessResult witness45(const RunConfig &cfg, const Context &ctx, const Phase1Result *p1)
{
    WitnessResult w;
    constexpr int rows = 45;
    auto cnf = ctx.instance(cfg, rows);
    sat::Solver solver(cfg.solver);
    solver.load(cnf);
    sat::SolveOutcome r;
    try {
        r = solver.solve();
    }
    catch (const sat::ResourceLimit &) {
        w.outcome = Outcome::ResourceLimit;
        return w;
    }
    if (r.status != sat::Status::Sat) {
        w.outcome = Outcome::Unsat;
        return w;
    }
    w.outcome = Outcome::Sat;
    auto m = apply_model(ctx.fixture, r.model, rows);
    for (const auto &f : validate_completed_window(m, rows).findings)
        w.findings.push_back(f.message);
    for (const auto &f : validate_structure(m).findings)
        w.findings.push_back(f.message);
    if (!sat::satisfies(cnf, r.model))
        w.findings.push_back("model violates the 45-row formula");
    w.matrix = serialize(m, rows);

    auto c = symmetry::completion_from_model(ctx.fixture, r.model);
    if (auto err = symmetry::check_completion(ctx.fixture, c); !err.empty())
        w.findings.push_back("rows 22-27: " + err);
    else {
        auto stab = symmetry::stabilizer(symmetry::automorphisms(ctx.fixture), 1);
        w.canonical = symmetry::canonical(stab, c);
        if (p1) {
            auto reps = p1->representatives();
            auto it = std::lower_bound(reps.begin(), reps.end(), *w.canonical);
            if (it != reps.end() && *it == *w.canonical)
                w.representative_index = static_cast<std::size_t>(it - reps.begin());
            else
                w.findings.push_back("rows 22-27 do not canonicalise to a phase-1 representative");
        }
    }
    w.valid = w.findings.empty();
    return w;
}

namespace {

ordered_json stats_object(const EncodingStats &s)
{
    return ordered_json::parse(stats_json(s));
}

ordered_json config_object(const RunConfig &cfg)
{
    ordered_json j;
    j["rows"] = cfg.rows;
    j["variant"] = std::string(to_string(cfg.variant));
    j["propagate"] = cfg.propagate;
    j["symmetry"] = cfg.symmetry;
    j["phase2"] = std::string(to_string(cfg.phase2));
    j["witness"] = cfg.witness;
    j["baseline"] = cfg.baseline;
    j["baseline_time_budget"] = cfg.baseline_time_budget;
    j["cross_check"] = cfg.cross_check;
    j["check_proofs"] = cfg.check_proofs;
    const auto &s = cfg.solver;
    j["solver"] = {{"seed", s.seed}, {"var_decay", s.var_decay}, {"clause_decay", s.clause_decay},
        {"random_var_freq", s.random_var_freq}, {"phase_saving", s.phase_saving}, {"restart_first", s.restart_first},
        {"restart_inc", s.restart_inc}, {"adaptive_after", s.adaptive_after}, {"lbd_window", s.lbd_window},
        {"lbd_margin", s.lbd_margin}, {"min_learnts", s.min_learnts}, {"keep_glue", s.keep_glue},
        {"conflict_budget", s.conflict_budget}, {"time_budget", s.time_budget_seconds}};
    return j;
}

ordered_json completion_array(const symmetry::Completion &c)
{
    auto j = ordered_json::array();
    for (auto [r, col] : c.cells)
        j.push_back({r, col});
    return j;
}

ordered_json certified_object(const CertifiedRun &run, const std::filesystem::path &dir)
{
    ordered_json j;
    j["outcome"] = std::string(to_string(run.outcome));
    if (run.blocking_clauses)
        j["blocking_clauses"] = run.blocking_clauses;
    j["proof"] = std::filesystem::relative(run.proof_path, dir).string();
    // a run cut off by a time budget stops at a timing-dependent point
    if (run.outcome != Outcome::ResourceLimit) {
        j["proof_sha256"] = run.proof_sha256;
        j["conflicts"] = run.stats.conflicts;
    }
    if (run.check)
        j["check"] = ordered_json::parse(proof::report_json(*run.check));
    if (!run.note.empty())
        j["note"] = run.note;
    return j;
}

void write_file(const std::filesystem::path &p, std::string_view data)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
}

} // namespace

PipelineReport run_pipeline(const RunConfig &cfg, std::ostream *log)
{
    cfg.validate();
    auto say = [&](const std::string &s) {
        if (log)
            *log << s << std::endl;
    };
    auto t_all = Clock::now();
    ordered_json timings;
    auto ctx = Context::make(cfg);

    ordered_json report;
    report["schema_version"] = kReportSchemaVersion;
    report["tool_version"] = std::string(tool_version());
    report["fixture_sha256"] = ctx.fixture_sha256;
    report["config"] = config_object(cfg);

    auto run_id = sha256_hex(ctx.fixture_sha256 + report["config"].dump()).substr(0, 16);
    PipelineReport out;
    out.directory = cfg.output_dir / ("run-" + run_id);
    std::filesystem::create_directories(out.directory);
    say("output directory " + out.directory.string());
    auto fail = [&](const std::string &why) {
        out.failures.push_back(why);
        say("FAILED: " + why);
    };

    // encodings
    auto t0 = Clock::now();
    ordered_json enc, artifacts;
    enc["forced_zeros"] = ctx.forced_zeros;
    std::map<int, Cnf> instances;
    for (int rows : std::set<int>{27, 45, cfg.rows}) {
        instances[rows] = ctx.instance(cfg, rows);
        auto name = "instance-" + std::to_string(rows) + ".cnf";
        auto text = to_dimacs(instances[rows], DimacsHeader{ctx.fixture_sha256, std::string(to_string(cfg.variant)), rows});
        write_file(out.directory / name, text);
        artifacts[name] = sha256_hex(text);
        enc["rows_" + std::to_string(rows)] = stats_object(statistics(instances[rows], cfg.variant));
    }
    report["encoding"] = enc;
    timings["encoding"] = seconds_since(t0);
    const Cnf &target = instances[cfg.rows];
    say("encoded: " + std::to_string(target.size()) + " clauses over " + std::to_string(target.num_vars()) +
        " variables for " + std::to_string(cfg.rows) + " rows");

    // phase 1
    t0 = Clock::now();
    std::optional<Phase1Result> p1;
    try {
        p1 = phase1(cfg, ctx);
    }
    catch (const CrossCheckMismatch &e) {
        fail(std::string("phase 1 cross-check: ") + e.what());
    }
    timings["phase1"] = seconds_since(t0);
    if (p1) {
        ordered_json j;
        j["group_order"] = p1->group_order;
        j["heavy_group_order"] = p1->heavy_group_order;
        j["stabilizer_order"] = p1->stabilizer_order;
        j["total_completions"] = p1->total;
        j["inequivalent_completions"] = p1->orbits.size();
        j["blocking_clauses"] = p1->blocking_clauses;
        ordered_json hist;
        for (auto [size, count] : p1->histogram)
            hist[std::to_string(size)] = count;
        j["orbit_size_histogram"] = hist;
        if (p1->raw_count) {
            j["raw_enumeration"] = *p1->raw_count;
            j["cross_check"] = "match";
        }
        j["conflicts"] = p1->stats.conflicts;
        report["symmetry"] = {{"group_order", p1->group_order}, {"stabilizer_order", p1->stabilizer_order}};
        report["phase1"] = j;

        ordered_json comp;
        comp["total"] = p1->total;
        comp["inequivalent"] = p1->orbits.size();
        auto arr = ordered_json::array();
        for (const auto &o : p1->orbits)
            arr.push_back({{"representative", completion_array(o.representative)}, {"orbit_size", o.orbit_size}});
        comp["orbits"] = arr;
        auto text = comp.dump(1) + "\n";
        write_file(out.directory / "completions.json", text);
        artifacts["completions.json"] = sha256_hex(text);
        say("phase 1: " + std::to_string(p1->orbits.size()) + " inequivalent completions, " +
            std::to_string(p1->total) + " in total");
    }

    // phase 2
    bool incremental = cfg.phase2 == Phase2Mode::Incremental || cfg.phase2 == Phase2Mode::Both;
    bool monolithic = cfg.phase2 == Phase2Mode::Monolithic || cfg.phase2 == Phase2Mode::Both;
    if (p1 && incremental) {
        t0 = Clock::now();
        auto reps = p1->representatives();
        auto r = phase2_incremental(cfg, ctx, target, reps, cfg.worker_count());
        ordered_json j;
        std::map<std::string, std::size_t> tally;
        auto per = ordered_json::array();
        for (auto o : r.outcomes) {
            ++tally[std::string(to_string(o))];
            per.push_back(std::string(to_string(o)));
        }
        j["representatives"] = reps.size();
        j["tally"] = tally;
        j["outcomes"] = per;
        auto ces = ordered_json::array();
        for (std::size_t k = 0; k < r.counterexamples.size(); ++k) {
            const auto &ce = r.counterexamples[k];
            auto name = "counterexample-" + std::to_string(ce.representative) + ".txt";
            write_file(out.directory / name, ce.matrix);
            ces.push_back({{"representative", ce.representative}, {"satisfies_formula", ce.satisfies_formula},
                {"valid_plane", ce.valid_plane}, {"file", name}});
        }
        j["counterexamples"] = ces;
        report["phase2_incremental"] = j;
        timings["phase2_incremental"] = seconds_since(t0);
        if (reps.empty())
            fail("phase 2 incremental: no representatives (vacuous)");
        else if (tally.count("resource-limit"))
            out.resource_limited = true;
        if (!r.counterexamples.empty())
            fail("phase 2 incremental: " + std::to_string(r.counterexamples.size()) + " representatives extend");
        say("phase 2 incremental: " + std::to_string(tally["unsat"]) + " of " + std::to_string(reps.size()) +
            " representatives unsat");
    }
    if (p1 && monolithic) {
        t0 = Clock::now();
        auto cnf = monolithic_instance(target, p1->orbits);
        auto text = to_dimacs(cnf, DimacsHeader{ctx.fixture_sha256, std::string(to_string(cfg.variant)), cfg.rows});
        write_file(out.directory / "monolithic.cnf", text);
        artifacts["monolithic.cnf"] = sha256_hex(text);
        auto run = certified_solve(cnf, cfg.solver, out.directory / "monolithic.drup", cfg.check_proofs);
        report["phase2_monolithic"] = certified_object(run, out.directory);
        artifacts["monolithic.drup"] = run.proof_sha256;
        timings["phase2_monolithic"] = seconds_since(t0);
        if (run.outcome == Outcome::ResourceLimit)
            out.resource_limited = true;
        else if (run.outcome != Outcome::Unsat)
            fail("monolithic instance is satisfiable");
        else if (cfg.check_proofs && !run.certified())
            fail("monolithic proof rejected: " + run.check->reason);
        say("phase 2 monolithic: " + std::string(to_string(run.outcome)) + " with " +
            std::to_string(run.blocking_clauses) + " blocking clauses" +
            (run.check ? ", proof " + std::string(run.check->verified() ? "verified" : "rejected") : ""));
    }

    // witness
    if (cfg.witness) {
        t0 = Clock::now();
        auto w = witness45(cfg, ctx, p1 ? &*p1 : nullptr);
        ordered_json j;
        j["outcome"] = std::string(to_string(w.outcome));
        j["valid"] = w.valid;
        if (!w.matrix.empty()) {
            write_file(out.directory / "witness45.txt", w.matrix);
            artifacts["witness45.txt"] = sha256_hex(w.matrix);
            j["file"] = "witness45.txt";
        }
        if (w.canonical)
            j["canonical_completion"] = completion_array(*w.canonical);
        if (w.representative_index)
            j["representative_index"] = *w.representative_index;
        j["findings"] = w.findings;
        report["witness45"] = j;
        timings["witness45"] = seconds_since(t0);
        if (w.outcome == Outcome::ResourceLimit)
            out.resource_limited = true;
        else if (w.outcome != Outcome::Sat)
            fail("45-row instance is unsatisfiable");
        else if (!w.valid)
            fail("45-row witness failed validation");
        say("witness: " + std::string(to_string(w.outcome)) + (w.valid ? ", valid" : ", invalid"));
    }

    // baseline
    if (cfg.baseline) {
        t0 = Clock::now();
        auto scfg = cfg.solver;
        if (cfg.baseline_time_budget > 0)
            scfg.time_budget_seconds = cfg.baseline_time_budget;
        auto run = certified_solve(target, scfg, out.directory / "baseline.drup", cfg.check_proofs);
        auto j = certified_object(run, out.directory);
        report["baseline"] = j;
        if (run.outcome == Outcome::Unsat)
            artifacts["baseline.drup"] = run.proof_sha256;
        timings["baseline"] = seconds_since(t0);
        if (run.outcome == Outcome::ResourceLimit)
            out.resource_limited = true;
        else if (run.outcome != Outcome::Unsat)
            fail("baseline instance is satisfiable");
        else if (cfg.check_proofs && !run.certified())
            fail("baseline proof rejected: " + run.check->reason);
        say("baseline: " + std::string(to_string(run.outcome)));
    }

    out.success = out.failures.empty();
    report["artifacts"] = artifacts;
    report["failures"] = out.failures;
    report["resource_limited"] = out.resource_limited;
    report["success"] = out.success;
    out.json = report.dump(2) + "\n";
    write_file(out.directory / "report.json", out.json);
    timings["total"] = seconds_since(t_all);
    out.timings_json = timings.dump(2) + "\n";
    write_file(out.directory / "timings.json", out.timings_json);
    return out;
}

} // namespace pp10::pipeline

#include <pp10/sat.hpp>

#include <string>

namespace pp10::sat {

namespace {

bool falsified(const Clause &c, const std::vector<bool> &model)
{
    for (auto l : c) {
        auto v = static_cast<std::size_t>(l.var());
        bool val = v < model.size() && model[v];
        if (val != l.negated())
            return false;
    }
    return true;
}

} // namespace

EnumerationResult enumerate(const Cnf &cnf, const EnumerationHook &hook, const SolverConfig &config, std::ostream *proof)
{
    Solver solver(config);
    if (proof)
        solver.attach_proof(*proof);
    solver.load(cnf);
    for (int v : hook.projection)
        if (v < 1 || v > cnf.num_vars())
            throw std::invalid_argument("projection variable " + std::to_string(v) + " outside the formula");

    EnumerationResult out;
    for (;;) {
        auto r = solver.solve();
        if (r.status != Status::Sat)
            break;
        ProjectedModel pm;
        pm.reserve(hook.projection.size());
        for (int v : hook.projection)
            pm.push_back(r.model[static_cast<std::size_t>(v)] ? Literal::positive(v) : Literal::negative(v));

        auto clauses = hook.on_model(pm, r.model);
        if (clauses.empty())
            throw CallbackContract("callback returned no clauses for model " + std::to_string(out.models.size()));
        bool blocks = false;
        for (const auto &c : clauses)
            blocks = blocks || falsified(c, r.model);
        if (!blocks)
            throw CallbackContract(
                "no returned clause is falsified by model " + std::to_string(out.models.size()));

        out.models.push_back(std::move(pm));
        for (auto &c : clauses) {
            solver.inject_clause(c);
            out.injected.push_back(std::move(c));
        }
    }
    out.stats = solver.stats();
    return out;
}

EnumerationHook self_blocking_hook(std::vector<int> projection)
{
    EnumerationHook h;
    h.projection = std::move(projection);
    h.on_model = [](const ProjectedModel &pm, const std::vector<bool> &) {
        Clause c;
        c.reserve(pm.size());
        for (auto l : pm)
            c.push_back(~l);
        return std::vector<Clause>{std::move(c)};
    };
    return h;
}

} // namespace pp10::sat

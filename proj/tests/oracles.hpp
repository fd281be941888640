#pragma once

// Reference implementations used to cross-check the library. None of them
// shares code with the solver, the checker or the encoder.

#include <pp10/cnf.hpp>
#include <pp10/matrix.hpp>
#include <pp10/proof.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using pp10::Cnf;
using pp10::Literal;

inline Cnf random_cnf(std::mt19937_64 &rng, int vars, int clauses, int min_width, int max_width)
{
    Cnf cnf(vars);
    std::uniform_int_distribution<int> var(1, vars), width(min_width, max_width), sign(0, 1);
    std::vector<Literal> c;
    for (int i = 0; i < clauses; ++i) {
        c.clear();
        int w = width(rng);
        for (int k = 0; k < w; ++k) {
            int v = var(rng);
            c.push_back(sign(rng) ? Literal::positive(v) : Literal::negative(v));
        }
        cnf.push_back(c, pp10::Provenance::External);
    }
    return cnf;
}

inline bool eval(const Cnf &cnf, std::uint32_t mask)
{
    for (std::size_t i = 0; i < cnf.size(); ++i) {
        bool sat = false;
        for (auto l : cnf.clause(i)) {
            bool v = (mask >> (l.var() - 1)) & 1u;
            if (v != l.negated()) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

/// Every satisfying assignment, as bit masks (bit v-1 = variable v).
inline std::vector<std::uint32_t> truth_table(const Cnf &cnf)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << cnf.num_vars()); ++m)
        if (eval(cnf, m))
            out.push_back(m);
    return out;
}

/// Models restricted to the first `k` variables, as a set of masks.
inline std::set<std::uint32_t> projected_models(const Cnf &cnf, int k)
{
    std::set<std::uint32_t> out;
    for (auto m : truth_table(cnf))
        out.insert(m & ((1u << k) - 1));
    return out;
}

struct NaivePropagation {
    bool conflict = false;
    std::set<int> assigned; ///< DIMACS literals
};

/// Repeated full scans until nothing changes.
inline NaivePropagation naive_propagate(const Cnf &cnf, const std::vector<Literal> &assumed)
{
    NaivePropagation r;
    for (auto l : assumed) {
        if (r.assigned.count(-l.dimacs())) {
            r.conflict = true;
            return r;
        }
        r.assigned.insert(l.dimacs());
    }
    for (bool changed = true; changed && !r.conflict;) {
        changed = false;
        for (std::size_t i = 0; i < cnf.size() && !r.conflict; ++i) {
            bool sat = false;
            for (auto l : cnf.clause(i))
                if (r.assigned.count(l.dimacs())) {
                    sat = true;
                    break;
                }
            if (sat)
                continue;
            std::set<int> distinct;
            for (auto l : cnf.clause(i))
                if (!r.assigned.count(-l.dimacs()))
                    distinct.insert(l.dimacs());
            if (distinct.empty())
                r.conflict = true;
            else if (distinct.size() == 1) {
                r.assigned.insert(*distinct.begin());
                changed = true;
            }
        }
    }
    return r;
}

/// Row pairs within rows 1..max_row sharing more than one known One.
inline std::vector<std::pair<int, int>> pairs_meeting_twice(const pp10::PartialMatrix &m, int max_row)
{
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= max_row; ++i)
        for (int j = i + 1; j <= max_row; ++j) {
            int common = 0;
            for (int c = 1; c <= pp10::kCols; ++c)
                common += m.at(i, c) == pp10::Cell::One && m.at(j, c) == pp10::Cell::One;
            if (common > 1)
                out.emplace_back(i, j);
        }
    return out;
}

/// Forced-zero rule applied by brute force over all row and column pairs.
inline pp10::PartialMatrix naive_forced_zeros(pp10::PartialMatrix m, int &count)
{
    using pp10::Cell;
    count = 0;
    for (bool changed = true; changed;) {
        changed = false;
        pp10::PartialMatrix next = m;
        for (int r = 1; r <= pp10::kRows; ++r)
            for (int c = 1; c <= pp10::kCols; ++c) {
                if (m.at(r, c) != Cell::Unknown)
                    continue;
                bool bad = false;
                for (int r2 = 1; r2 <= pp10::kRows && !bad; ++r2) {
                    if (r2 == r || m.at(r2, c) != Cell::One)
                        continue;
                    for (int c2 = 1; c2 <= pp10::kCols && !bad; ++c2)
                        bad = c2 != c && m.at(r, c2) == Cell::One && m.at(r2, c2) == Cell::One;
                }
                for (int c2 = 1; c2 <= pp10::kCols && !bad; ++c2) {
                    if (c2 == c || m.at(r, c2) != Cell::One)
                        continue;
                    for (int r2 = 1; r2 <= pp10::kRows && !bad; ++r2)
                        bad = r2 != r && m.at(r2, c) == Cell::One && m.at(r2, c2) == Cell::One;
                }
                if (bad) {
                    next.set(r, c, Cell::Zero);
                    ++count;
                    changed = true;
                }
            }
        m = next;
    }
    return m;
}

inline std::string render(const std::vector<pp10::proof::ProofLine> &lines)
{
    std::ostringstream out;
    for (const auto &l : lines) {
        if (l.kind == pp10::proof::ProofLine::Kind::Delete)
            out << "d ";
        for (auto x : l.literals)
            out << x.dimacs() << ' ';
        out << "0\n";
    }
    return out.str();
}

/// Greedily drops Add lines (last to first) while the proof still verifies,
/// so every remaining Add is needed. Deletion lines are kept.
inline std::vector<pp10::proof::ProofLine> trim(const Cnf &cnf, std::vector<pp10::proof::ProofLine> lines)
{
    using pp10::proof::ProofLine;
    for (std::size_t i = lines.size(); i-- > 0;) {
        if (lines[i].kind != ProofLine::Kind::Add || lines[i].literals.empty())
            continue;
        auto candidate = lines;
        candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
        if (pp10::proof::check_drup(cnf, candidate).verified())
            lines = std::move(candidate);
    }
    return lines;
}

/// Brute-force RUP check that ignores deletions. A proof it rejects is
/// invalid under any deletion policy.
inline bool naive_rup_valid(const Cnf &cnf, const std::vector<pp10::proof::ProofLine> &lines)
{
    Cnf db = cnf;
    for (const auto &l : lines) {
        if (l.kind == pp10::proof::ProofLine::Kind::Delete)
            continue;
        for (auto x : l.literals)
            if (x.var() > cnf.num_vars())
                return false;
        std::vector<Literal> negated;
        for (auto x : l.literals)
            negated.push_back(~x);
        if (!naive_propagate(db, negated).conflict)
            return false;
        if (l.literals.empty())
            return true;
        db.push_back(l.literals, pp10::Provenance::External);
    }
    return false;
}

struct MutationStats {
    std::size_t total = 0;
    std::size_t corrupt = 0, corrupt_rejected = 0; ///< mutants the oracle rejects
    std::size_t benign = 0, benign_accepted = 0;   ///< mutants that are still valid proofs

    void merge(const MutationStats &o)
    {
        total += o.total;
        corrupt += o.corrupt;
        corrupt_rejected += o.corrupt_rejected;
        benign += o.benign;
        benign_accepted += o.benign_accepted;
    }
    double rejected_fraction() const { return corrupt ? double(corrupt_rejected) / double(corrupt) : 1.0; }
    double benign_fraction() const { return total ? double(benign) / double(total) : 0.0; }
};

/// Alternates between dropping one Add line and flipping the sign of one
/// literal of an Add line. Each mutant is classified by naive_rup_valid and
/// then given to the real checker.
inline MutationStats mutate_and_check(const Cnf &cnf, const std::vector<pp10::proof::ProofLine> &trimmed,
    std::size_t samples, std::mt19937_64 &rng)
{
    using pp10::proof::ProofLine;
    std::vector<std::size_t> adds;
    for (std::size_t i = 0; i < trimmed.size(); ++i)
        if (trimmed[i].kind == ProofLine::Kind::Add && !trimmed[i].literals.empty())
            adds.push_back(i);
    MutationStats st;
    if (adds.empty())
        return st;
    std::uniform_int_distribution<std::size_t> pick(0, adds.size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        auto mutated = trimmed;
        auto i = adds[pick(rng)];
        if (s % 2 == 0)
            mutated.erase(mutated.begin() + static_cast<std::ptrdiff_t>(i));
        else {
            auto &lits = mutated[i].literals;
            auto k = std::uniform_int_distribution<std::size_t>(0, lits.size() - 1)(rng);
            lits[k] = ~lits[k];
        }
        ++st.total;
        bool accepted = pp10::proof::check_drup(cnf, mutated).verified();
        if (naive_rup_valid(cnf, mutated)) {
            ++st.benign;
            st.benign_accepted += accepted;
        }
        else {
            ++st.corrupt;
            st.corrupt_rejected += !accepted;
        }
    }
    return st;
}

} // namespace oracle

#include <pp10/sat.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

namespace pp10::sat {

namespace {

using Lit = std::uint32_t;
using CRef = std::uint32_t;

constexpr CRef kNoRef = 0xffffffffu;
constexpr Lit kNoLit = 0xffffffffu;
constexpr std::uint32_t kHeaderWords = 3;
constexpr std::uint32_t kLearntBit = 1u;
constexpr std::uint32_t kDeletedBit = 2u;

inline Lit to_lit(Literal l) { return static_cast<Lit>(2 * (l.var() - 1) + (l.negated() ? 1 : 0)); }
inline Literal to_literal(Lit l)
{
    int v = static_cast<int>(l >> 1) + 1;
    return (l & 1) ? Literal::negative(v) : Literal::positive(v);
}
inline std::uint32_t var(Lit l) { return l >> 1; }

struct Watcher {
    CRef cref;
    Lit blocker;
};

/// Max-heap of variables ordered by activity.
class VarHeap {
public:
    explicit VarHeap(const std::vector<double> &activity) : act_(&activity) {}

    void grow(std::size_t n) { pos_.resize(n, -1); }
    bool contains(std::uint32_t v) const { return pos_[v] >= 0; }
    bool empty() const { return heap_.empty(); }

    void insert(std::uint32_t v)
    {
        if (contains(v))
            return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(heap_.size() - 1);
    }

    void increased(std::uint32_t v)
    {
        if (contains(v))
            up(static_cast<std::size_t>(pos_[v]));
    }

    std::uint32_t pop()
    {
        auto top = heap_.front();
        heap_.front() = heap_.back();
        pos_[heap_.front()] = 0;
        heap_.pop_back();
        pos_[top] = -1;
        if (!heap_.empty())
            down(0);
        return top;
    }

    std::uint32_t at(std::size_t i) const { return heap_[i]; }
    std::size_t size() const { return heap_.size(); }

private:
    bool before(std::uint32_t a, std::uint32_t b) const
    {
        double x = (*act_)[a], y = (*act_)[b];
        return x > y || (x == y && a < b);
    }

    void up(std::size_t i)
    {
        auto v = heap_[i];
        while (i > 0) {
            auto parent = (i - 1) / 2;
            if (!before(v, heap_[parent]))
                break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = static_cast<int>(i);
    }

    void down(std::size_t i)
    {
        auto v = heap_[i];
        for (;;) {
            auto child = 2 * i + 1;
            if (child >= heap_.size())
                break;
            if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child]))
                ++child;
            if (!before(heap_[child], v))
                break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        pos_[v] = static_cast<int>(i);
    }

    const std::vector<double> *act_;
    std::vector<std::uint32_t> heap_;
    std::vector<int> pos_;
};

} // namespace

struct Solver::Impl {
    SolverConfig cfg;
    SolverStats st;

    // clause arena: [size, flags | lbd << 8, activity bits, literals...]
    std::vector<std::uint32_t> mem;
    std::size_t wasted = 0;
    std::vector<CRef> originals, learnts;

    std::vector<std::vector<Watcher>> watches; // indexed by the literal that became true
    std::vector<std::int8_t> value;            // per literal: 1 true, -1 false, 0 unassigned
    std::vector<int> level;
    std::vector<CRef> reason;
    std::vector<Lit> trail;
    std::vector<std::size_t> trail_lim;
    std::size_t qhead = 0;

    std::vector<double> activity;
    VarHeap heap{activity};
    double var_inc = 1.0;
    double cla_inc = 1.0;
    std::vector<std::uint8_t> polarity; // 1 = choose the negative literal
    std::vector<std::uint8_t> seen;
    std::vector<Lit> analyze_stack, analyze_clear;
    std::vector<std::uint32_t> level_stamp;
    std::uint32_t stamp = 0;

    std::mt19937_64 rng;
    bool ok = true;
    std::size_t simplified_trail = 0;
    std::size_t logged_units = 0;
    double max_learnts = 0;

    // adaptive restarts
    std::vector<int> lbd_queue;
    std::size_t lbd_head = 0;
    long lbd_queue_sum = 0;
    double lbd_total = 0;
    std::uint64_t lbd_count = 0;

    std::ostream *proof = nullptr;
    std::string proof_buf;
    bool any_clause_added = false;

    std::chrono::steady_clock::time_point deadline{};
    bool has_deadline = false;

    explicit Impl(SolverConfig c) : cfg(c), rng(c.seed) {}

    int nvars() const { return static_cast<int>(level.size()); }
    int decision_level() const { return static_cast<int>(trail_lim.size()); }

    std::uint32_t size_of(CRef c) const { return mem[c]; }
    bool is_learnt(CRef c) const { return mem[c + 1] & kLearntBit; }
    bool is_deleted(CRef c) const { return mem[c + 1] & kDeletedBit; }
    std::uint32_t lbd_of(CRef c) const { return mem[c + 1] >> 8; }
    float act_of(CRef c) const { return std::bit_cast<float>(mem[c + 2]); }
    void set_act(CRef c, float a) { mem[c + 2] = std::bit_cast<std::uint32_t>(a); }
    Lit *lits(CRef c) { return reinterpret_cast<Lit *>(&mem[c + kHeaderWords]); }
    const Lit *lits(CRef c) const { return reinterpret_cast<const Lit *>(&mem[c + kHeaderWords]); }

    void grow_to(int n)
    {
        while (nvars() < n) {
            auto v = static_cast<std::uint32_t>(nvars());
            value.push_back(0);
            value.push_back(0);
            watches.emplace_back();
            watches.emplace_back();
            level.push_back(0);
            reason.push_back(kNoRef);
            activity.push_back(0.0);
            polarity.push_back(1);
            seen.push_back(0);
            heap.grow(static_cast<std::size_t>(v) + 1);
            heap.insert(v);
        }
        level_stamp.resize(static_cast<std::size_t>(nvars()) + 1, 0);
    }

    // ---- proof output ----

    void log_clause(const Lit *ls, std::size_t n, bool deletion)
    {
        if (!proof)
            return;
        if (deletion) {
            proof_buf += "d ";
            ++st.proof_deletions;
        }
        else
            ++st.proof_additions;
        for (std::size_t i = 0; i < n; ++i) {
            proof_buf += std::to_string(to_literal(ls[i]).dimacs());
            proof_buf += ' ';
        }
        proof_buf += "0\n";
        if (proof_buf.size() > (1u << 20))
            flush_proof();
    }

    void flush_proof()
    {
        if (!proof || proof_buf.empty())
            return;
        proof->write(proof_buf.data(), static_cast<std::streamsize>(proof_buf.size()));
        proof_buf.clear();
        if (!*proof)
            throw SinkFailure("failed to write proof stream");
    }

    void log_empty()
    {
        log_clause(nullptr, 0, false);
        flush_proof();
    }

    // ---- clause storage ----

    CRef alloc(const std::vector<Lit> &ls, bool learnt, std::uint32_t lbd = 0)
    {
        auto c = static_cast<CRef>(mem.size());
        mem.push_back(static_cast<std::uint32_t>(ls.size()));
        mem.push_back((learnt ? kLearntBit : 0u) | (lbd << 8));
        mem.push_back(std::bit_cast<std::uint32_t>(0.0f));
        mem.insert(mem.end(), ls.begin(), ls.end());
        return c;
    }

    void attach(CRef c)
    {
        const Lit *l = lits(c);
        watches[l[0] ^ 1].push_back({c, l[1]});
        watches[l[1] ^ 1].push_back({c, l[0]});
    }

    bool locked(CRef c) const
    {
        Lit first = lits(c)[0];
        return reason[var(first)] == c && value[first] == 1;
    }

    /// Marks deleted; watchers are purged in bulk by purge_watches().
    void remove(CRef c)
    {
        log_clause(lits(c), size_of(c), true);
        if (locked(c))
            reason[var(lits(c)[0])] = kNoRef;
        mem[c + 1] |= kDeletedBit;
        wasted += size_of(c) + kHeaderWords;
        ++st.deleted_clauses;
    }

    void purge_watches()
    {
        for (auto &ws : watches)
            ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher &w) { return is_deleted(w.cref); }),
                ws.end());
    }

    void collect_garbage()
    {
        std::vector<std::uint32_t> fresh;
        fresh.reserve(mem.size() - wasted);
        auto move_all = [&](std::vector<CRef> &list) {
            std::size_t j = 0;
            for (auto c : list) {
                if (is_deleted(c))
                    continue;
                auto n = static_cast<CRef>(fresh.size());
                bool was_reason = locked(c);
                fresh.insert(fresh.end(), mem.begin() + c, mem.begin() + c + kHeaderWords + size_of(c));
                if (was_reason)
                    reason[var(lits(c)[0])] = n;
                list[j++] = n;
            }
            list.resize(j);
        };
        move_all(originals);
        move_all(learnts);
        mem.swap(fresh);
        wasted = 0;
        for (auto &ws : watches)
            ws.clear();
        for (auto c : originals)
            attach(c);
        for (auto c : learnts)
            attach(c);
    }

    // ---- assignment ----

    void enqueue(Lit p, CRef from)
    {
        value[p] = 1;
        value[p ^ 1] = -1;
        level[var(p)] = decision_level();
        reason[var(p)] = from;
        trail.push_back(p);
    }

    void cancel_until(int lvl)
    {
        if (decision_level() <= lvl)
            return;
        for (std::size_t i = trail.size(); i-- > trail_lim[static_cast<std::size_t>(lvl)];) {
            Lit p = trail[i];
            auto v = var(p);
            value[p] = 0;
            value[p ^ 1] = 0;
            reason[v] = kNoRef;
            if (cfg.phase_saving)
                polarity[v] = p & 1;
            heap.insert(v);
        }
        trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
        trail_lim.resize(static_cast<std::size_t>(lvl));
        qhead = trail.size();
    }

    CRef propagate()
    {
        CRef confl = kNoRef;
        while (qhead < trail.size()) {
            Lit p = trail[qhead++];
            Lit false_lit = p ^ 1;
            auto &ws = watches[p];
            Watcher *i = ws.data(), *j = ws.data(), *end = ws.data() + ws.size();
            ++st.propagations;
            while (i != end) {
                Lit blocker = i->blocker;
                if (value[blocker] == 1) {
                    *j++ = *i++;
                    continue;
                }
                CRef cr = i->cref;
                Lit *ls = lits(cr);
                if (ls[0] == false_lit)
                    std::swap(ls[0], ls[1]);
                ++i;
                Lit first = ls[0];
                Watcher w{cr, first};
                if (first != blocker && value[first] == 1) {
                    *j++ = w;
                    continue;
                }
                std::uint32_t n = size_of(cr);
                bool moved = false;
                for (std::uint32_t k = 2; k < n; ++k)
                    if (value[ls[k]] != -1) {
                        ls[1] = ls[k];
                        ls[k] = false_lit;
                        watches[ls[1] ^ 1].push_back(w);
                        moved = true;
                        break;
                    }
                if (moved)
                    continue;
                *j++ = w;
                if (value[first] == -1) {
                    confl = cr;
                    qhead = trail.size();
                    while (i < end)
                        *j++ = *i++;
                }
                else
                    enqueue(first, cr);
            }
            ws.resize(static_cast<std::size_t>(j - ws.data()));
            if (confl != kNoRef)
                break;
        }
        return confl;
    }

    // ---- heuristics ----

    void bump_var(std::uint32_t v)
    {
        if ((activity[v] += var_inc) > 1e100) {
            for (auto &a : activity)
                a *= 1e-100;
            var_inc *= 1e-100;
        }
        heap.increased(v);
    }

    void bump_clause(CRef c)
    {
        float a = act_of(c) + static_cast<float>(cla_inc);
        set_act(c, a);
        if (a > 1e20f) {
            for (auto l : learnts)
                set_act(l, act_of(l) * 1e-20f);
            cla_inc *= 1e-20;
        }
    }

    Lit pick_branch()
    {
        std::uint32_t next = 0xffffffffu;
        if (cfg.random_var_freq > 0 && !heap.empty()) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            if (coin(rng) < cfg.random_var_freq) {
                std::uniform_int_distribution<std::size_t> pick(0, heap.size() - 1);
                auto v = heap.at(pick(rng));
                if (value[2 * v] == 0)
                    next = v;
            }
        }
        while (next == 0xffffffffu || value[2 * next] != 0) {
            if (heap.empty())
                return kNoLit;
            next = heap.pop();
        }
        return 2 * next + polarity[next];
    }

    // ---- conflict analysis ----

    std::uint32_t abstract_level(std::uint32_t v) const { return 1u << (level[v] & 31); }

    bool redundant(Lit p, std::uint32_t abstract_levels)
    {
        analyze_stack.clear();
        analyze_stack.push_back(p);
        std::size_t top = analyze_clear.size();
        while (!analyze_stack.empty()) {
            CRef c = reason[var(analyze_stack.back())];
            analyze_stack.pop_back();
            const Lit *ls = lits(c);
            std::uint32_t n = size_of(c);
            for (std::uint32_t i = 1; i < n; ++i) {
                Lit q = ls[i];
                auto v = var(q);
                if (seen[v] || level[v] == 0)
                    continue;
                if (reason[v] != kNoRef && (abstract_level(v) & abstract_levels)) {
                    seen[v] = 1;
                    analyze_stack.push_back(q);
                    analyze_clear.push_back(q);
                }
                else {
                    for (std::size_t k = top; k < analyze_clear.size(); ++k)
                        seen[var(analyze_clear[k])] = 0;
                    analyze_clear.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    void analyze(CRef confl, std::vector<Lit> &out, int &bt_level, std::uint32_t &lbd)
    {
        int path = 0;
        Lit p = kNoLit;
        out.clear();
        out.push_back(kNoLit);
        std::size_t index = trail.size();

        do {
            if (is_learnt(confl))
                bump_clause(confl);
            const Lit *ls = lits(confl);
            std::uint32_t n = size_of(confl);
            for (std::uint32_t j = (p == kNoLit ? 0 : 1); j < n; ++j) {
                Lit q = ls[j];
                auto v = var(q);
                if (!seen[v] && level[v] > 0) {
                    bump_var(v);
                    seen[v] = 1;
                    if (level[v] >= decision_level())
                        ++path;
                    else
                        out.push_back(q);
                }
            }
            while (!seen[var(trail[--index])]) {
            }
            p = trail[index];
            confl = reason[var(p)];
            seen[var(p)] = 0;
            --path;
        } while (path > 0);
        out[0] = p ^ 1;

        // recursive minimisation
        analyze_clear.assign(out.begin(), out.end());
        std::uint32_t levels = 0;
        for (std::size_t i = 1; i < out.size(); ++i)
            levels |= abstract_level(var(out[i]));
        std::size_t j = 1;
        for (std::size_t i = 1; i < out.size(); ++i)
            if (reason[var(out[i])] == kNoRef || !redundant(out[i], levels))
                out[j++] = out[i];
        out.resize(j);
        st.learnt_literals += out.size();

        if (out.size() == 1)
            bt_level = 0;
        else {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < out.size(); ++i)
                if (level[var(out[i])] > level[var(out[max_i])])
                    max_i = i;
            std::swap(out[1], out[max_i]);
            bt_level = level[var(out[1])];
        }

        ++stamp;
        lbd = 0;
        for (auto q : out) {
            auto l = static_cast<std::size_t>(level[var(q)]);
            if (level_stamp[l] != stamp) {
                level_stamp[l] = stamp;
                ++lbd;
            }
        }

        for (auto q : analyze_clear)
            seen[var(q)] = 0;
    }

    /// Collects the assumptions responsible for `p` being false.
    std::vector<Literal> analyze_final(Lit p)
    {
        std::vector<Literal> core{to_literal(p ^ 1)};
        if (decision_level() == 0)
            return core;
        seen[var(p)] = 1;
        for (std::size_t i = trail.size(); i-- > trail_lim[0];) {
            auto x = var(trail[i]);
            if (!seen[x])
                continue;
            if (reason[x] == kNoRef) {
                if (trail[i] != (p ^ 1))
                    core.push_back(to_literal(trail[i]));
            }
            else {
                const Lit *ls = lits(reason[x]);
                for (std::uint32_t j = 1; j < size_of(reason[x]); ++j)
                    if (level[var(ls[j])] > 0)
                        seen[var(ls[j])] = 1;
            }
            seen[x] = 0;
        }
        seen[var(p)] = 0;
        return core;
    }

    // ---- database maintenance ----

    void reduce_db()
    {
        ++st.reductions;
        std::vector<CRef> candidates;
        for (auto c : learnts)
            if (size_of(c) > 2 && lbd_of(c) > static_cast<std::uint32_t>(cfg.keep_glue) && !locked(c))
                candidates.push_back(c);
        std::stable_sort(
            candidates.begin(), candidates.end(), [&](CRef a, CRef b) { return act_of(a) < act_of(b); });
        std::size_t limit = std::min(candidates.size(), learnts.size() / 2);
        for (std::size_t i = 0; i < limit; ++i)
            remove(candidates[i]);
        learnts.erase(std::remove_if(learnts.begin(), learnts.end(), [&](CRef c) { return is_deleted(c); }),
            learnts.end());
        purge_watches();
        if (wasted > mem.size() / 5)
            collect_garbage();
    }

    bool satisfied(CRef c) const
    {
        const Lit *ls = lits(c);
        for (std::uint32_t i = 0; i < size_of(c); ++i)
            if (value[ls[i]] == 1)
                return true;
        return false;
    }

    /// Root-level cleanup: drop satisfied clauses once new units are known.
    void simplify()
    {
        if (trail.size() == simplified_trail)
            return;
        if (proof)
            for (; logged_units < trail.size(); ++logged_units)
                log_clause(&trail[logged_units], 1, false);
        bool removed = false;
        for (auto *list : {&learnts, &originals}) {
            for (auto c : *list)
                if (satisfied(c)) {
                    remove(c);
                    removed = true;
                }
            list->erase(
                std::remove_if(list->begin(), list->end(), [&](CRef c) { return is_deleted(c); }), list->end());
        }
        if (removed)
            purge_watches();
        if (wasted > mem.size() / 5)
            collect_garbage();
        simplified_trail = trail.size();
    }

    // ---- clause input ----

    bool add_input(std::span<const Literal> in, bool log_original)
    {
        if (!ok)
            return false;
        cancel_until(0);
        int max_var = 0;
        for (auto l : in)
            max_var = std::max(max_var, l.var());
        grow_to(max_var);

        std::vector<Lit> ls;
        ls.reserve(in.size());
        for (auto l : in)
            ls.push_back(to_lit(l));
        if (log_original)
            log_clause(ls.data(), ls.size(), false);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

        std::size_t j = 0;
        bool shortened = false;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i + 1 < ls.size() && ls[i + 1] == (ls[i] ^ 1))
                return true; // tautology
            if (value[ls[i]] == 1)
                return true;
            if (value[ls[i]] == -1) {
                shortened = true;
                continue;
            }
            ls[j++] = ls[i];
        }
        ls.resize(j);
        if (shortened && !ls.empty())
            log_clause(ls.data(), ls.size(), false);

        if (ls.empty()) {
            ok = false;
            log_empty();
            return false;
        }
        if (ls.size() == 1) {
            enqueue(ls[0], kNoRef);
            if (propagate() != kNoRef) {
                ok = false;
                log_empty();
                return false;
            }
            return true;
        }
        CRef c = alloc(ls, false);
        originals.push_back(c);
        attach(c);
        return true;
    }

    // ---- search ----

    void push_lbd(std::uint32_t lbd)
    {
        lbd_total += lbd;
        ++lbd_count;
        auto window = static_cast<std::size_t>(cfg.lbd_window);
        if (lbd_queue.size() < window) {
            lbd_queue.push_back(static_cast<int>(lbd));
            lbd_queue_sum += lbd;
        }
        else {
            lbd_queue_sum += static_cast<long>(lbd) - lbd_queue[lbd_head];
            lbd_queue[lbd_head] = static_cast<int>(lbd);
            lbd_head = (lbd_head + 1) % window;
        }
    }

    bool adaptive_restart_due() const
    {
        if (lbd_queue.size() < static_cast<std::size_t>(cfg.lbd_window) || lbd_count == 0)
            return false;
        double recent = static_cast<double>(lbd_queue_sum) / static_cast<double>(lbd_queue.size());
        return recent * cfg.lbd_margin > lbd_total / static_cast<double>(lbd_count);
    }

    void check_budget()
    {
        if (cfg.conflict_budget && st.conflicts >= cfg.conflict_budget)
            throw ResourceLimit("conflict budget of " + std::to_string(cfg.conflict_budget) + " exhausted");
        if (has_deadline && std::chrono::steady_clock::now() >= deadline)
            throw ResourceLimit("time budget exhausted");
    }

    enum class SearchResult { Sat, Unsat, Assumptions, Restart };

    SearchResult search(long conflicts_allowed, std::span<const Lit> assumptions, std::vector<Literal> &core)
    {
        long conflicts_here = 0;
        std::vector<Lit> learnt;
        bool adaptive = st.conflicts >= cfg.adaptive_after;
        if (adaptive) {
            lbd_queue.clear();
            lbd_queue_sum = 0;
            lbd_head = 0;
        }
        for (;;) {
            CRef confl = propagate();
            if (confl != kNoRef) {
                ++st.conflicts;
                ++conflicts_here;
                if (decision_level() == 0) {
                    ok = false;
                    log_empty();
                    return SearchResult::Unsat;
                }
                int bt = 0;
                std::uint32_t lbd = 0;
                analyze(confl, learnt, bt, lbd);
                cancel_until(bt);
                log_clause(learnt.data(), learnt.size(), false);
                if (learnt.size() == 1)
                    enqueue(learnt[0], kNoRef);
                else {
                    CRef c = alloc(learnt, true, lbd);
                    learnts.push_back(c);
                    attach(c);
                    bump_clause(c);
                    enqueue(learnt[0], c);
                }
                var_inc /= cfg.var_decay;
                cla_inc /= cfg.clause_decay;
                push_lbd(lbd);
                if ((st.conflicts & 511) == 0)
                    check_budget();
                continue;
            }

            bool restart = adaptive ? (conflicts_here >= cfg.lbd_window && adaptive_restart_due())
                                    : (conflicts_allowed >= 0 && conflicts_here >= conflicts_allowed);
            if (restart) {
                cancel_until(0);
                return SearchResult::Restart;
            }
            if (decision_level() == 0)
                simplify();
            if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts)
                reduce_db();

            Lit next = kNoLit;
            while (decision_level() < static_cast<int>(assumptions.size())) {
                Lit a = assumptions[static_cast<std::size_t>(decision_level())];
                if (value[a] == 1)
                    trail_lim.push_back(trail.size());
                else if (value[a] == -1) {
                    core = analyze_final(a ^ 1);
                    return SearchResult::Assumptions;
                }
                else {
                    next = a;
                    break;
                }
            }
            if (next == kNoLit) {
                ++st.decisions;
                next = pick_branch();
                if (next == kNoLit)
                    return SearchResult::Sat;
            }
            trail_lim.push_back(trail.size());
            enqueue(next, kNoRef);
        }
    }

    SolveOutcome solve(std::span<const Literal> assumptions)
    {
        SolveOutcome out;
        if (cfg.time_budget_seconds > 0) {
            has_deadline = true;
            deadline = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(cfg.time_budget_seconds));
        }
        int max_var = 0;
        for (auto l : assumptions)
            max_var = std::max(max_var, l.var());
        grow_to(max_var);

        if (!ok) {
            out.status = Status::Unsat;
            return out;
        }
        std::vector<Lit> assume;
        for (auto l : assumptions)
            assume.push_back(to_lit(l));

        max_learnts = std::max(static_cast<double>(cfg.min_learnts),
            static_cast<double>(originals.size()) * cfg.learnt_size_factor);
        double restart_len = cfg.restart_first;

        try {
            for (;;) {
                std::vector<Literal> core;
                long allowed = static_cast<long>(restart_len);
                auto r = search(allowed, assume, core);
                if (r == SearchResult::Restart) {
                    ++st.restarts;
                    restart_len *= cfg.restart_inc;
                    max_learnts *= cfg.learnt_size_inc;
                    check_budget();
                    continue;
                }
                if (r == SearchResult::Sat) {
                    out.status = Status::Sat;
                    out.model.assign(static_cast<std::size_t>(nvars()) + 1, false);
                    for (int v = 0; v < nvars(); ++v)
                        out.model[static_cast<std::size_t>(v) + 1] = value[2 * static_cast<std::size_t>(v)] == 1;
                }
                else if (r == SearchResult::Assumptions) {
                    out.status = Status::UnsatUnderAssumptions;
                    out.core = std::move(core);
                }
                else
                    out.status = Status::Unsat;
                break;
            }
        }
        catch (...) {
            cancel_until(0);
            flush_proof();
            has_deadline = false;
            throw;
        }
        cancel_until(0);
        flush_proof();
        has_deadline = false;
        return out;
    }
};

Solver::Solver(SolverConfig config) : impl_(std::make_unique<Impl>(config)) {}
Solver::~Solver()
{
    if (impl_) {
        try {
            impl_->flush_proof();
        }
        catch (...) {
        }
    }
}
Solver::Solver(Solver &&) noexcept = default;
Solver &Solver::operator=(Solver &&) noexcept = default;

void Solver::attach_proof(std::ostream &out)
{
    if (impl_->any_clause_added)
        throw std::logic_error("attach_proof must precede clause addition");
    impl_->proof = &out;
}

void Solver::reserve_vars(int n) { impl_->grow_to(n); }
int Solver::num_vars() const { return impl_->nvars(); }

bool Solver::add_clause(std::span<const Literal> clause)
{
    impl_->any_clause_added = true;
    return impl_->add_input(clause, false);
}

void Solver::load(const Cnf &cnf)
{
    reserve_vars(cnf.num_vars());
    for (std::size_t i = 0; i < cnf.size(); ++i)
        add_clause(cnf.clause(i));
}

bool Solver::inject_clause(std::span<const Literal> clause)
{
    impl_->any_clause_added = true;
    return impl_->add_input(clause, true);
}

SolveOutcome Solver::solve(std::span<const Literal> assumptions) { return impl_->solve(assumptions); }

const SolverStats &Solver::stats() const { return impl_->st; }
const SolverConfig &Solver::config() const { return impl_->cfg; }

bool satisfies(const Cnf &cnf, const std::vector<bool> &model)
{
    for (std::size_t i = 0; i < cnf.size(); ++i) {
        bool sat = false;
        for (auto l : cnf.clause(i)) {
            auto v = static_cast<std::size_t>(l.var());
            bool val = v < model.size() && model[v];
            if (val != l.negated()) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

} // namespace pp10::sat

#include <pp10/proof.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace pp10::proof {

ParseError::ParseError(const std::string &message, long line) :
    std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

void for_each_line(std::istream &in, const std::function<bool(const ProofLine &)> &sink)
{
    std::string buf;
    long line_no = 0;
    ProofLine pending;
    bool open = false; // a clause has started but not been terminated
    while (std::getline(in, buf)) {
        ++line_no;
        const char *s = buf.data();
        const char *e = s + buf.size();
        while (s < e) {
            while (s < e && (*s == ' ' || *s == '\t' || *s == '\r'))
                ++s;
            if (s == e)
                break;
            if (*s == 'c' && !open)
                break; // comment line
            if (*s == 'd') {
                if (open)
                    throw ParseError("'d' inside a clause", line_no);
                ++s;
                if (s < e && *s != ' ' && *s != '\t')
                    throw ParseError("malformed deletion marker", line_no);
                pending.kind = ProofLine::Kind::Delete;
                open = true;
                continue;
            }
            long v = 0;
            auto [next, ec] = std::from_chars(s, e, v);
            if (ec != std::errc() || (next < e && *next != ' ' && *next != '\t' && *next != '\r'))
                throw ParseError("expected an integer", line_no);
            if (v > INT32_MAX || v < -INT32_MAX)
                throw ParseError("literal out of range", line_no);
            s = next;
            if (v == 0) {
                if (!sink(pending))
                    return;
                pending.kind = ProofLine::Kind::Add;
                pending.literals.clear();
                open = false;
            }
            else {
                pending.literals.push_back(Literal(static_cast<std::int32_t>(v)));
                open = true;
            }
        }
    }
    if (open)
        throw ParseError("last proof line is not terminated by 0", line_no);
}

std::vector<ProofLine> parse_drup(std::istream &in)
{
    std::vector<ProofLine> out;
    for_each_line(in, [&](const ProofLine &l) {
        out.push_back(l);
        return true;
    });
    return out;
}

std::vector<ProofLine> parse_drup(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_drup(in);
}

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

// literal code: 2 * var + sign, var 1-based
inline std::uint32_t code(Literal l) { return 2u * static_cast<std::uint32_t>(l.var()) + (l.negated() ? 1u : 0u); }

std::uint64_t hash_sorted(const std::vector<std::uint32_t> &c)
{
    std::uint64_t h = 1469598103934665603ull ^ c.size();
    for (auto x : c) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

struct Checker::Impl {
    std::uint32_t nvars = 0;
    std::vector<std::vector<std::uint32_t>> clauses;
    std::vector<std::uint8_t> alive;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_hash;
    std::vector<std::vector<std::uint32_t>> watch; // clauses watching a literal, visited when it turns false
    std::vector<std::int8_t> val;
    std::vector<std::uint32_t> reason;
    std::vector<std::uint32_t> trail;
    std::size_t head = 0;
    bool inconsistent = false;

    CheckReport rep;
    bool done = false;
    std::size_t step_no = 0;

    explicit Impl(const Cnf &cnf)
    {
        int n = cnf.num_vars();
        for (std::size_t i = 0; i < cnf.size(); ++i)
            for (auto l : cnf.clause(i))
                n = std::max(n, l.var());
        nvars = static_cast<std::uint32_t>(n);
        watch.resize(2 * (nvars + 1));
        val.assign(2 * (nvars + 1), 0);
        reason.assign(nvars + 1, kNone);
        std::vector<std::uint32_t> c;
        for (std::size_t i = 0; i < cnf.size(); ++i) {
            c.clear();
            for (auto l : cnf.clause(i))
                c.push_back(code(l));
            insert(c);
        }
    }

    void assign(std::uint32_t lit, std::uint32_t why)
    {
        val[lit] = 1;
        val[lit ^ 1] = -1;
        reason[lit >> 1] = why;
        trail.push_back(lit);
        ++rep.units_propagated;
    }

    bool propagate()
    {
        while (head < trail.size()) {
            std::uint32_t false_lit = trail[head++] ^ 1;
            auto &ws = watch[false_lit];
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                std::uint32_t cid = ws[i++];
                if (!alive[cid])
                    continue;
                auto &c = clauses[cid];
                if (c[0] == false_lit)
                    std::swap(c[0], c[1]);
                if (val[c[0]] == 1) {
                    ws[j++] = cid;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (val[c[k]] != -1) {
                        std::swap(c[1], c[k]);
                        watch[c[1]].push_back(cid);
                        moved = true;
                        break;
                    }
                if (moved)
                    continue;
                ws[j++] = cid;
                if (val[c[0]] == -1) {
                    while (i < ws.size())
                        ws[j++] = ws[i++];
                    ws.resize(j);
                    return true;
                }
                assign(c[0], cid);
            }
            ws.resize(j);
        }
        return false;
    }

    void attach(std::uint32_t cid)
    {
        auto &c = clauses[cid];
        if (c.empty()) {
            inconsistent = true;
            return;
        }
        // true literals first, then unassigned, then false
        std::stable_partition(c.begin(), c.end(), [&](std::uint32_t l) { return val[l] == 1; });
        std::stable_partition(c.begin(), c.end(), [&](std::uint32_t l) { return val[l] != -1; });
        std::size_t open = static_cast<std::size_t>(
            std::count_if(c.begin(), c.end(), [&](std::uint32_t l) { return val[l] != -1; }));
        if (c.size() >= 2) {
            watch[c[0]].push_back(cid);
            watch[c[1]].push_back(cid);
        }
        if (open == 0)
            inconsistent = true;
        else if (open == 1 && val[c[0]] == 0) {
            assign(c[0], cid);
            if (propagate())
                inconsistent = true;
        }
    }

    /// Adds a clause to the active set and propagates at the root.
    void insert(std::vector<std::uint32_t> c)
    {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        bool tautology = false;
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            tautology = tautology || (c[i] ^ 1) == c[i + 1];
        auto cid = static_cast<std::uint32_t>(clauses.size());
        by_hash[hash_sorted(c)].push_back(cid);
        clauses.push_back(std::move(c));
        alive.push_back(1);
        if (!tautology && !inconsistent)
            attach(cid);
    }

    bool rup(const std::vector<std::uint32_t> &c)
    {
        if (inconsistent)
            return true;
        std::size_t saved = trail.size();
        bool ok = false;
        for (auto l : c) {
            if (val[l] == 1) {
                ok = true;
                break;
            }
            if (val[l] == 0)
                assign(l ^ 1, kNone);
        }
        if (!ok)
            ok = propagate();
        for (std::size_t i = saved; i < trail.size(); ++i) {
            val[trail[i]] = 0;
            val[trail[i] ^ 1] = 0;
            reason[trail[i] >> 1] = kNone;
        }
        trail.resize(saved);
        head = saved;
        return ok;
    }

    void remove(std::vector<std::uint32_t> c)
    {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        auto it = by_hash.find(hash_sorted(c));
        if (it != by_hash.end()) {
            auto &ids = it->second;
            for (std::size_t k = 0; k < ids.size(); ++k) {
                auto cid = ids[k];
                auto sorted = clauses[cid];
                std::sort(sorted.begin(), sorted.end());
                if (sorted != c)
                    continue;
                for (auto l : clauses[cid])
                    if (val[l] == 1 && reason[l >> 1] == cid) {
                        ++rep.ignored_deletions;
                        return;
                    }
                alive[cid] = 0;
                std::vector<std::uint32_t>().swap(clauses[cid]);
                ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(k));
                if (ids.empty())
                    by_hash.erase(it);
                return;
            }
        }
        ++rep.absent_deletions;
    }

    bool fail(std::string why)
    {
        rep.verdict = Verdict::Failed;
        rep.failed_step = step_no;
        rep.reason = std::move(why);
        done = true;
        return false;
    }

    bool step(const ProofLine &line)
    {
        if (done)
            return false;
        ++step_no;
        std::vector<std::uint32_t> c;
        c.reserve(line.literals.size());
        for (auto l : line.literals) {
            if (l.var() == 0 || static_cast<std::uint32_t>(l.var()) > nvars)
                return fail("literal " + std::to_string(l.dimacs()) + " outside the formula's variables");
            c.push_back(code(l));
        }
        if (line.kind == ProofLine::Kind::Delete) {
            ++rep.deletions;
            remove(std::move(c));
            return true;
        }
        if (!rup(c))
            return fail(c.empty() ? "empty clause does not follow by unit propagation"
                                  : "added clause is not a reverse-unit-propagation consequence");
        ++rep.additions;
        if (c.empty()) {
            rep.verdict = Verdict::Verified;
            done = true;
            return false;
        }
        insert(std::move(c));
        return true;
    }
};

Checker::Checker(const Cnf &cnf) : impl_(std::make_unique<Impl>(cnf)) {}
Checker::~Checker() = default;

bool Checker::step(const ProofLine &line) { return impl_->step(line); }

CheckReport Checker::finish()
{
    auto &im = *impl_;
    if (!im.done) {
        im.rep.verdict = Verdict::Failed;
        im.rep.failed_step = 0;
        im.rep.reason = "proof ends without deriving the empty clause";
        im.done = true;
    }
    im.rep.steps_checked = im.step_no;
    return im.rep;
}

CheckReport check_drup(const Cnf &cnf, std::span<const ProofLine> proof)
{
    Checker checker(cnf);
    for (const auto &line : proof)
        if (!checker.step(line))
            break;
    return checker.finish();
}

CheckReport check_drup(const Cnf &cnf, std::istream &proof)
{
    Checker checker(cnf);
    for_each_line(proof, [&](const ProofLine &l) { return checker.step(l); });
    return checker.finish();
}

CheckReport check_drup_file(const Cnf &cnf, const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open proof " + path);
    return check_drup(cnf, in);
}

std::string report_json(const CheckReport &r)
{
    nlohmann::ordered_json j;
    j["verdict"] = r.verified() ? "verified" : "failed";
    if (!r.verified()) {
        j["failed_step"] = r.failed_step;
        j["reason"] = r.reason;
    }
    j["steps_checked"] = r.steps_checked;
    j["additions"] = r.additions;
    j["deletions"] = r.deletions;
    j["units_propagated"] = r.units_propagated;
    j["ignored_deletions"] = r.ignored_deletions;
    j["absent_deletions"] = r.absent_deletions;
    return j.dump(2) + "\n";
}

PropagationResult unit_propagate(const Cnf &cnf, std::span<const Literal> assumed)
{
    Checker::Impl im(cnf);
    PropagationResult out;
    for (auto l : assumed) {
        if (im.inconsistent)
            break;
        if (l.var() == 0 || static_cast<std::uint32_t>(l.var()) > im.nvars)
            throw std::invalid_argument("assumed literal outside the formula");
        auto c = code(l);
        if (im.val[c] == -1)
            im.inconsistent = true;
        else if (im.val[c] == 0) {
            im.assign(c, kNone);
            if (im.propagate())
                im.inconsistent = true;
        }
    }
    out.conflict = im.inconsistent;
    for (auto c : im.trail)
        out.assigned.push_back((c & 1) ? Literal::negative(static_cast<int>(c >> 1))
                                       : Literal::positive(static_cast<int>(c >> 1)));
    return out;
}

} // namespace pp10::proof

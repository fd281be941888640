#include <pp10/cnf.hpp>

#include <algorithm>
#include <unordered_set>

namespace pp10 {

std::optional<Clause> make_clause(std::vector<Literal> literals)
{
    std::sort(literals.begin(), literals.end());
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
    for (std::size_t i = 1; i < literals.size(); ++i)
        if (literals[i].var() == literals[i - 1].var())
            return std::nullopt;
    return literals;
}

std::string_view to_string(Provenance p)
{
    switch (p) {
    case Provenance::Unit: return "unit";
    case Provenance::AtMostOne: return "amo";
    case Provenance::RowAtLeastOne: return "row_alo";
    case Provenance::ColAtLeastOne: return "col_alo";
    case Provenance::Blocking: return "blocking";
    case Provenance::External: return "external";
    }
    return "?";
}

void Cnf::push_back(std::span<const Literal> clause, Provenance p)
{
    literals_.insert(literals_.end(), clause.begin(), clause.end());
    starts_.push_back(static_cast<std::uint32_t>(literals_.size()));
    provenance_.push_back(p);
}

std::size_t Cnf::count(Provenance p) const
{
    return static_cast<std::size_t>(std::count(provenance_.begin(), provenance_.end(), p));
}

namespace {

std::size_t hash_clause(std::span<const Literal> c)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto l : c) {
        h ^= static_cast<std::uint32_t>(l.dimacs());
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
}

} // namespace

struct CnfBuilder::Index {
    const Cnf *cnf;
    std::span<const Literal> probe;

    static constexpr std::size_t kProbe = static_cast<std::size_t>(-1);

    std::span<const Literal> get(std::size_t i) const { return i == kProbe ? probe : cnf->clause(i); }

    struct Hash {
        const Index *idx;
        std::size_t operator()(std::size_t i) const { return hash_clause(idx->get(i)); }
    };
    struct Eq {
        const Index *idx;
        bool operator()(std::size_t a, std::size_t b) const
        {
            auto x = idx->get(a), y = idx->get(b);
            return std::equal(x.begin(), x.end(), y.begin(), y.end());
        }
    };

    std::unordered_set<std::size_t, Hash, Eq> seen;

    explicit Index(const Cnf *c) : cnf(c), seen(1024, Hash{this}, Eq{this}) {}
};

CnfBuilder::CnfBuilder(int num_vars) : cnf_(num_vars), index_(std::make_unique<Index>(&cnf_)) {}
CnfBuilder::~CnfBuilder() = default;

CnfBuilder::CnfBuilder(CnfBuilder &&other) noexcept : cnf_(std::move(other.cnf_)), index_(std::move(other.index_))
{
    if (index_)
        index_->cnf = &cnf_;
}

CnfBuilder &CnfBuilder::operator=(CnfBuilder &&other) noexcept
{
    cnf_ = std::move(other.cnf_);
    index_ = std::move(other.index_);
    if (index_)
        index_->cnf = &cnf_;
    return *this;
}

bool CnfBuilder::add(std::span<const Literal> clause, Provenance p)
{
    index_->probe = clause;
    if (index_->seen.contains(Index::kProbe))
        return false;
    cnf_.push_back(clause, p);
    index_->seen.insert(cnf_.size() - 1);
    return true;
}

Cnf CnfBuilder::finish() &&
{
    index_.reset();
    return std::move(cnf_);
}

} // namespace pp10

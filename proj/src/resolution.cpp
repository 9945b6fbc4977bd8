#include "slstail/resolution.hpp"

#include "slstail/dimacs.hpp"
#include "slstail/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <unordered_map>

namespace slstail {

std::optional<Clause> resolve(const Clause& c1, const Clause& c2, Var pivot)
{
    std::optional<Literal> in1;
    std::optional<Literal> in2;
    for (Literal l : c1.literals()) {
        if (l.var() == pivot) {
            in1 = l;
        }
    }
    for (Literal l : c2.literals()) {
        if (l.var() == pivot) {
            in2 = l;
        }
    }
    if (!in1 || !in2 || in1->negated() == in2->negated()) {
        throw UsageError("resolve: pivot " + std::to_string(pivot) + " is not complementary across the clauses");
    }
    std::vector<Literal> merged;
    merged.reserve(c1.width() + c2.width() - 2);
    for (const Clause* c : {&c1, &c2}) {
        for (Literal l : c->literals()) {
            if (l.var() == pivot) {
                continue;
            }
            bool seen = false;
            for (Literal m : merged) {
                if (m.var() == l.var()) {
                    if (m != l) {
                        return std::nullopt;
                    }
                    seen = true;
                }
            }
            if (!seen) {
                merged.push_back(l);
            }
        }
    }
    return Clause(std::move(merged));
}

std::size_t ClauseSet::Hash::operator()(const Clause& c) const noexcept
{
    std::uint64_t h = 0x84222325CBF29CE4ULL;
    for (Literal l : c.literals()) {
        h = mix64(h ^ static_cast<std::uint32_t>(l.dimacs()));
    }
    return static_cast<std::size_t>(h);
}

ClauseSet::ClauseSet(const CnfFormula& f) : ClauseSet(f.clauses()) {}

ClauseSet::ClauseSet(std::span<const Clause> clauses)
{
    for (const Clause& c : clauses) {
        insert(c);
    }
}

bool ClauseSet::insert(const Clause& c)
{
    Clause canon = c.canonical();
    if (!index_.insert(canon).second) {
        return false;
    }
    clauses_.push_back(std::move(canon));
    return true;
}

bool ClauseSet::contains(const Clause& c) const
{
    return index_.count(c.canonical()) != 0;
}

bool operator==(const ClauseSet& a, const ClauseSet& b)
{
    return a.index_ == b.index_;
}

namespace {

// Resolvent of two canonical clauses on `pivot`, or nullopt if tautological
// or wider than w. The result is canonical.
std::optional<Clause> resolve_canonical(const Clause& a, const Clause& b, Var pivot, std::size_t w)
{
    std::vector<Literal> out;
    out.reserve(a.width() + b.width());
    auto ia = a.literals().begin();
    auto ib = b.literals().begin();
    const auto ea = a.literals().end();
    const auto eb = b.literals().end();
    while (ia != ea || ib != eb) {
        Literal next;
        if (ib == eb || (ia != ea && ia->var() < ib->var())) {
            next = *ia++;
        } else if (ia == ea || ib->var() < ia->var()) {
            next = *ib++;
        } else {
            if (ia->var() == pivot) {
                ++ia;
                ++ib;
                continue;
            }
            if (*ia != *ib) {
                return std::nullopt;
            }
            next = *ia++;
            ++ib;
        }
        out.push_back(next);
        if (out.size() > w) {
            return std::nullopt;
        }
    }
    return Clause(std::move(out));
}

// Occurrence index over a growing clause vector: literal code -> clause ids.
class OccurrenceIndex {
public:
    void add(const Clause& c, std::size_t id)
    {
        for (Literal l : c.literals()) {
            occ_[l.dimacs()].push_back(id);
        }
    }
    const std::vector<std::size_t>& of(Literal l) const
    {
        static const std::vector<std::size_t> empty;
        auto it = occ_.find(l.dimacs());
        return it == occ_.end() ? empty : it->second;
    }

private:
    std::unordered_map<std::int32_t, std::vector<std::size_t>> occ_;
};

// Resolvents between `frontier` clauses (ids [frontier_begin, size)) and all
// clauses with smaller-or-equal id, i.e. every pair with at least one member
// in the frontier.
void resolve_round(const ClauseSet& current, std::size_t frontier_begin, const OccurrenceIndex& occ,
                   std::size_t w, ClauseSet& out, std::size_t max_clauses, bool& limit_hit)
{
    const auto all = current.clauses();
    for (std::size_t i = frontier_begin; i < all.size(); ++i) {
        const Clause& c = all[i];
        for (Literal l : c.literals()) {
            for (std::size_t j : occ.of(~l)) {
                if (j >= frontier_begin && j > i) {
                    continue;  // pair will be visited from j's side
                }
                auto r = resolve_canonical(c, all[j], l.var(), w);
                if (r && !current.contains(*r)) {
                    out.insert(*r);
                    if (current.size() + out.size() >= max_clauses) {
                        limit_hit = true;
                        return;
                    }
                }
            }
        }
    }
}

}  // namespace

ClauseSet res_w_step(const ClauseSet& f, std::size_t w)
{
    OccurrenceIndex occ;
    for (std::size_t i = 0; i < f.size(); ++i) {
        occ.add(f.clauses()[i], i);
    }
    ClauseSet added;
    bool limit_hit = false;
    resolve_round(f, 0, occ, w, added, static_cast<std::size_t>(-1), limit_hit);
    ClauseSet result = f;
    for (const Clause& c : added.clauses()) {
        result.insert(c);
    }
    return result;
}

namespace {

// Closure engine for formulas with fewer than 8192 variables.
//
// Clauses live in a flat arena of literal codes (2 (var - 1) + negated, which
// sorts like the canonical order). Two clauses of widths c and d can only give
// a resolvent of width <= w if, besides the pivot, they share at least
// s = c + d - 2 - w literals. Each clause D is therefore posted under keys
// (d, m, S) for its literals m and the subsets S of D \ {m} of the sizes that
// some partner width can ask for (capped at 3), and a query enumerates only
// the s-subsets of C \ {l}. Work is proportional to the candidate pairs that
// can actually produce a short resolvent.
class SubsetClosure {
public:
    static constexpr unsigned kLitBits = 14;
    static constexpr std::uint32_t kNoLit = (1u << kLitBits) - 1;
    static constexpr Var kMaxVar = kNoLit / 2;
    static constexpr std::size_t kMaxSubset = 3;

    SubsetClosure(const ClauseSet& f, std::size_t w) : w_(w)
    {
        max_width_ = w;
        for (const Clause& c : f.clauses()) {
            max_width_ = std::max(max_width_, c.width());
        }
        needed_.assign(max_width_ + 1, 0);
        for (std::size_t d = 1; d <= max_width_; ++d) {
            for (std::size_t c = 1; c <= max_width_; ++c) {
                if (const auto s = subset_size(c, d)) {
                    needed_[d] |= 1u << *s;
                }
            }
        }
        offsets_.push_back(0);
        table_.assign(1024, 0);
        use_masks_ = true;
        for (const Clause& c : f.clauses()) {
            use_masks_ = use_masks_ && c.max_var() <= 64;
        }
        std::vector<std::uint16_t> buf;
        for (const Clause& c : f.clauses()) {
            buf.clear();
            for (Literal l : c.literals()) {
                buf.push_back(code(l));
            }
            insert(buf);
        }
    }

    static bool supports(const ClauseSet& f)
    {
        for (const Clause& c : f.clauses()) {
            if (c.max_var() > kMaxVar) {
                return false;
            }
        }
        return true;
    }

    std::size_t size() const noexcept { return offsets_.size() - 1; }

    // One semi-naive round over ids [frontier, size()). Returns the number of
    // clauses added; stops early once size() reaches `cap`.
    std::size_t round(std::size_t frontier, std::size_t cap) { return run(frontier, cap, false); }

    // Whether another round would add anything; adds nothing itself.
    bool would_grow(std::size_t frontier) { return run(frontier, static_cast<std::size_t>(-1), true) > 0; }

    std::size_t run(std::size_t frontier, std::size_t cap, bool dry_run)
    {
        bool found_new = false;
        const std::size_t end = size();
        const std::size_t before = end;
        stamp_.resize(end, 0);
        std::vector<std::uint16_t> c, rest, subset, out;
        if (use_masks_ && end <= kScanBelow) {
            // Small closures: a linear pass over the masks beats the index.
            const bool any_width = static_cast<std::size_t>(std::popcount(all_vars_)) <= w_;
            for (std::size_t i = frontier; i < end && size() < cap; ++i) {
                const Mask a = masks_[i];
                for (std::size_t j = 0; j < i; ++j) {
                    const Mask& b = masks_[j];
                    const std::uint64_t clash = (a.pos & b.neg) | (a.neg & b.pos);
                    if (clash == 0 || (clash & (clash - 1)) != 0) {
                        continue;
                    }
                    const Mask r{(a.pos | b.pos) & ~clash, (a.neg | b.neg) & ~clash};
                    if ((!any_width && static_cast<std::size_t>(std::popcount(r.pos | r.neg)) > w_) || contains(r)) {
                        continue;
                    }
                    if (dry_run) {
                        return 1;
                    }
                    literals_of(r, out);
                    insert(out);
                    if (size() >= cap) {
                        break;
                    }
                }
            }
            return size() - before;
        }
        if (indexed_ < end) {
            index_from(indexed_);
            indexed_ = end;
        }
        for (std::size_t i = frontier; i < end; ++i) {
            // Copied: insert() may reallocate the arena.
            const auto view = clause(i);
            c.assign(view.begin(), view.end());
            for (std::size_t p = 0; p < c.size(); ++p) {
                const std::uint16_t pivot = c[p];
                rest.assign(c.begin(), c.end());
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
                ++token_;
                for (std::size_t d = 1; d <= max_width_; ++d) {
                    const auto s = subset_size(c.size(), d);
                    if (!s) {
                        continue;
                    }
                    for_each_subset(rest, *s, subset, [&](const std::vector<std::uint16_t>& sub) {
                        const auto [lo, hi] = postings_of(key(d, pivot ^ 1u, sub));
                        for (auto it = lo; it != hi; ++it) {
                            const std::uint32_t j = it->id;
                            if (j >= frontier && j > i) {
                                continue;
                            }
                            if (use_masks_) {
                                Mask r;
                                if (!resolvent_mask(i, j, r) || size() >= cap || contains(r)) {
                                    continue;
                                }
                                if (dry_run) {
                                    found_new = true;
                                    return;
                                }
                                literals_of(r, out);
                                insert(out);
                                continue;
                            }
                            if (stamp_[j] == token_) {
                                continue;
                            }
                            stamp_[j] = token_;
                            if (size() >= cap || !merge(c, clause(j), pivot, out)) {
                                continue;
                            }
                            if (dry_run) {
                                if (!contains(out)) {
                                    found_new = true;
                                    return;
                                }
                            } else {
                                insert(out);
                            }
                        }
                    });
                    if (size() >= cap || found_new) {
                        break;
                    }
                }
                if (size() >= cap || found_new) {
                    break;
                }
            }
            if (size() >= cap || found_new) {
                break;
            }
        }
        if (dry_run) {
            return found_new ? 1 : 0;
        }
        return size() - before;
    }

    ClauseSet to_clause_set() const
    {
        ClauseSet out;
        std::vector<Literal> lits;
        for (std::size_t i = 0; i < size(); ++i) {
            lits.clear();
            for (std::uint16_t x : clause(i)) {
                lits.emplace_back(static_cast<Var>(x / 2 + 1), (x & 1u) != 0);
            }
            out.insert(Clause(lits));
        }
        return out;
    }

private:
    struct Posting {
        std::uint64_t key;
        std::uint32_t id;
        bool operator<(const Posting& o) const noexcept { return key != o.key ? key < o.key : id < o.id; }
    };

    static std::uint16_t code(Literal l) noexcept
    {
        return static_cast<std::uint16_t>(2 * (l.var() - 1) + (l.negated() ? 1 : 0));
    }

    std::optional<std::size_t> subset_size(std::size_t c, std::size_t d) const noexcept
    {
        const long raw = static_cast<long>(c + d) - 2 - static_cast<long>(w_);
        if (raw > static_cast<long>(std::min(c, d)) - 1) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(std::clamp<long>(raw, 0, kMaxSubset));
    }

    static std::uint64_t key(std::size_t d, std::uint32_t m, const std::vector<std::uint16_t>& sub) noexcept
    {
        std::uint64_t k = (static_cast<std::uint64_t>(d) << 56) | (static_cast<std::uint64_t>(m) << 42);
        for (std::size_t t = 0; t < kMaxSubset; ++t) {
            const std::uint64_t v = t < sub.size() ? sub[t] : kNoLit;
            k |= v << (28 - 14 * t);
        }
        return k;
    }

    template <class F>
    static void for_each_subset(const std::vector<std::uint16_t>& from, std::size_t s, std::vector<std::uint16_t>& buf,
                                F&& f)
    {
        if (s > from.size()) {
            return;
        }
        std::vector<std::size_t> idx(s);
        for (std::size_t t = 0; t < s; ++t) {
            idx[t] = t;
        }
        for (;;) {
            buf.clear();
            for (std::size_t t : idx) {
                buf.push_back(from[t]);
            }
            f(buf);
            std::size_t t = s;
            while (t > 0 && idx[t - 1] == from.size() - s + t - 1) {
                --t;
            }
            if (t == 0) {
                return;
            }
            ++idx[t - 1];
            for (std::size_t u = t; u < s; ++u) {
                idx[u] = idx[u - 1] + 1;
            }
        }
    }

    std::span<const std::uint16_t> clause(std::size_t id) const noexcept
    {
        return {lits_.data() + offsets_[id], lits_.data() + offsets_[id + 1]};
    }

    // Canonical resolvent of a and b on `pivot` (a literal of a) if it is not
    // tautological and has width <= w.
    bool merge(std::span<const std::uint16_t> a, std::span<const std::uint16_t> b, std::uint16_t pivot,
               std::vector<std::uint16_t>& out) const
    {
        out.clear();
        const std::uint16_t pv = pivot >> 1;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.size() || j < b.size()) {
            std::uint16_t next;
            if (j == b.size() || (i < a.size() && a[i] < b[j])) {
                next = a[i++];
            } else if (i == a.size() || b[j] < a[i]) {
                next = b[j++];
            } else {
                next = a[i++];
                ++j;
            }
            if ((next >> 1) == pv) {
                continue;
            }
            if (!out.empty() && (out.back() >> 1) == (next >> 1)) {
                return false;  // x and -x both present
            }
            out.push_back(next);
            if (out.size() > w_) {
                return false;
            }
        }
        return true;
    }

    static std::uint64_t hash(std::span<const std::uint16_t> c) noexcept
    {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ c.size();
        for (std::uint16_t x : c) {
            h = mix64(h ^ x);
        }
        return h;
    }

    bool contains(std::span<const std::uint16_t> c) const
    {
        if (use_masks_) {
            return contains(mask_of(c));
        }
        const std::size_t mask = table_.size() - 1;
        for (std::size_t slot = hash(c) & mask;; slot = (slot + 1) & mask) {
            const std::uint32_t v = table_[slot];
            if (v == 0) {
                return false;
            }
            const auto other = clause(v - 1);
            if (std::equal(other.begin(), other.end(), c.begin(), c.end())) {
                return true;
            }
        }
    }

    bool insert(std::span<const std::uint16_t> c)
    {
        if (contains(c)) {
            return false;
        }
        if (2 * (size() + 1) > table_.size()) {
            rehash(table_.size() * 2);
        }
        lits_.insert(lits_.end(), c.begin(), c.end());
        offsets_.push_back(lits_.size());
        if (use_masks_) {
            masks_.push_back(mask_of(c));
            all_vars_ |= masks_.back().pos | masks_.back().neg;
        }
        const std::size_t mask = table_.size() - 1;
        std::size_t slot = slot_hash(size() - 1) & mask;
        while (table_[slot] != 0) {
            slot = (slot + 1) & mask;
        }
        table_[slot] = static_cast<std::uint32_t>(size());
        return true;
    }

    void rehash(std::size_t slots)
    {
        table_.assign(slots, 0);
        const std::size_t mask = slots - 1;
        for (std::size_t id = 0; id < size(); ++id) {
            std::size_t slot = slot_hash(id) & mask;
            while (table_[slot] != 0) {
                slot = (slot + 1) & mask;
            }
            table_[slot] = static_cast<std::uint32_t>(id + 1);
        }
    }

    std::pair<std::vector<Posting>::const_iterator, std::vector<Posting>::const_iterator> postings_of(
        std::uint64_t k) const
    {
        const auto lo = std::lower_bound(postings_.begin(), postings_.end(), Posting{k, 0});
        auto hi = lo;
        while (hi != postings_.end() && hi->key == k) {
            ++hi;
        }
        return {lo, hi};
    }

    void index_from(std::size_t first)
    {
        const std::size_t old = postings_.size();
        std::vector<std::uint16_t> rest, subset;
        for (std::size_t id = first; id < size(); ++id) {
            const auto c = clause(id);
            const std::size_t d = c.size();
            for (std::size_t p = 0; p < d; ++p) {
                rest.assign(c.begin(), c.end());
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
                for (std::size_t s = 0; s <= kMaxSubset; ++s) {
                    if ((needed_[d] >> s) & 1u) {
                        for_each_subset(rest, s, subset, [&](const std::vector<std::uint16_t>& sub) {
                            postings_.push_back({key(d, c[p], sub), static_cast<std::uint32_t>(id)});
                        });
                    }
                }
            }
        }
        std::sort(postings_.begin() + static_cast<std::ptrdiff_t>(old), postings_.end());
        std::inplace_merge(postings_.begin(), postings_.begin() + static_cast<std::ptrdiff_t>(old), postings_.end());
    }

    // Variable masks by polarity; a pair resolves to a non-tautological
    // clause iff exactly one variable clashes.
    struct Mask {
        std::uint64_t pos = 0;
        std::uint64_t neg = 0;
        bool operator==(const Mask&) const = default;
    };

    static Mask mask_of(std::span<const std::uint16_t> c) noexcept
    {
        Mask m;
        for (std::uint16_t x : c) {
            ((x & 1u) ? m.neg : m.pos) |= std::uint64_t{1} << (x >> 1);
        }
        return m;
    }

    static std::uint64_t hash(const Mask& m) noexcept { return mix64(m.pos ^ mix64(m.neg ^ 0x9E3779B97F4A7C15ULL)); }

    bool resolvent_mask(std::size_t i, std::size_t j, Mask& r) const noexcept
    {
        const Mask& a = masks_[i];
        const Mask& b = masks_[j];
        const std::uint64_t clash = (a.pos & b.neg) | (a.neg & b.pos);
        if (clash == 0 || (clash & (clash - 1)) != 0) {
            return false;
        }
        r.pos = (a.pos | b.pos) & ~clash;
        r.neg = (a.neg | b.neg) & ~clash;
        return static_cast<std::size_t>(std::popcount(r.pos | r.neg)) <= w_;
    }

    static void literals_of(const Mask& m, std::vector<std::uint16_t>& out)
    {
        out.clear();
        for (std::uint64_t vars = m.pos | m.neg; vars != 0; vars &= vars - 1) {
            const auto v = static_cast<std::uint16_t>(std::countr_zero(vars));
            out.push_back(static_cast<std::uint16_t>(2 * v + ((m.neg >> v) & 1u)));
        }
    }

    bool contains(const Mask& m) const
    {
        const std::size_t mask = table_.size() - 1;
        for (std::size_t slot = hash(m) & mask;; slot = (slot + 1) & mask) {
            const std::uint32_t v = table_[slot];
            if (v == 0) {
                return false;
            }
            if (masks_[v - 1] == m) {
                return true;
            }
        }
    }

    std::uint64_t slot_hash(std::size_t id) const { return use_masks_ ? hash(masks_[id]) : hash(clause(id)); }

    static constexpr std::size_t kScanBelow = std::size_t{1} << 16;

    std::size_t w_;
    std::size_t indexed_ = 0;  // postings cover ids below this
    bool use_masks_ = false;
    std::uint64_t all_vars_ = 0;
    std::vector<Mask> masks_;
    std::size_t max_width_ = 0;
    std::vector<unsigned> needed_;
    std::vector<std::uint16_t> lits_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> table_;
    std::vector<Posting> postings_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t token_ = 0;
};

Closure res_w_star_indexed(const ClauseSet& f, std::size_t w, ClosureLimits limits)
{
    SubsetClosure engine(f, w);
    Closure result;
    std::size_t frontier = 0;
    while (true) {
        if (result.stats.rounds >= limits.max_rounds) {
            // Only a limit if another round would still add something.
            result.stats.limit_hit = engine.would_grow(frontier);
            break;
        }
        const std::size_t start = engine.size();
        const std::size_t added = engine.round(frontier, limits.max_clauses);
        if (added == 0) {
            break;
        }
        frontier = start;
        ++result.stats.rounds;
        if (engine.size() >= limits.max_clauses) {
            result.stats.limit_hit = true;
            break;
        }
    }
    result.clauses = engine.to_clause_set();
    result.stats.closure_size = result.clauses.size();
    result.stats.candidate_pool_size = result.clauses.size() - f.size();
    return result;
}

}  // namespace

Closure res_w_star(const ClauseSet& f, std::size_t w, ClosureLimits limits)
{
    if (limits.max_clauses == 0 || limits.max_rounds == 0) {
        throw UsageError("res_w_star: limits must be positive");
    }
    if (SubsetClosure::supports(f)) {
        return res_w_star_indexed(f, w, limits);
    }
    Closure result{f, {}};
    OccurrenceIndex occ;
    for (std::size_t i = 0; i < f.size(); ++i) {
        occ.add(f.clauses()[i], i);
    }
    std::size_t frontier_begin = 0;
    while (true) {
        if (result.stats.rounds >= limits.max_rounds) {
            ClauseSet probe;
            bool ignored = false;
            resolve_round(result.clauses, frontier_begin, occ, w, probe, static_cast<std::size_t>(-1), ignored);
            result.stats.limit_hit = probe.size() > 0;
            break;
        }
        ClauseSet added;
        bool limit_hit = false;
        resolve_round(result.clauses, frontier_begin, occ, w, added, limits.max_clauses, limit_hit);
        if (added.size() == 0) {
            break;
        }
        frontier_begin = result.clauses.size();
        for (const Clause& c : added.clauses()) {
            result.clauses.insert(c);
            occ.add(c, result.clauses.size() - 1);
        }
        ++result.stats.rounds;
        if (limit_hit) {
            result.stats.limit_hit = true;
            break;
        }
    }
    result.stats.closure_size = result.clauses.size();
    result.stats.candidate_pool_size = result.clauses.size() - f.size();
    return result;
}

namespace {

bool canonical_less(const Clause& a, const Clause& b)
{
    if (a.width() != b.width()) {
        return a.width() < b.width();
    }
    const auto la = a.literals();
    const auto lb = b.literals();
    return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end());
}

void check_probability(double p)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw UsageError("inclusion probability must lie in (0, 1]");
    }
}

}  // namespace

ExtensionPool build_extension_pool(const CnfFormula& f, std::size_t w, ClosureLimits limits)
{
    const ClauseSet base(f);
    Closure closure = res_w_star(base, w, limits);
    ExtensionPool pool;
    const auto all = closure.clauses.clauses();
    pool.candidates.assign(all.begin() + static_cast<std::ptrdiff_t>(base.size()), all.end());
    std::sort(pool.candidates.begin(), pool.candidates.end(), canonical_less);
    pool.w = w;
    pool.formula_size = f.num_clauses();
    pool.source_digest = formula_digest(f);
    pool.stats = closure.stats;
    return pool;
}

ExtensionSet sample_from_pool(const ExtensionPool& pool, double p, std::uint64_t seed)
{
    check_probability(p);
    ExtensionSet ext;
    ext.source_digest = pool.source_digest;
    ext.params = {pool.w, p, seed};
    ext.tainted = pool.stats.limit_hit;
    Rng rng(seed);
    for (const Clause& c : pool.candidates) {
        if (p >= 1.0 || rng.bernoulli(p)) {
            ext.resolvents.push_back(c);
        }
    }
    return ext;
}

ExtensionSet sample_extension(const CnfFormula& f, std::size_t w, double p, std::uint64_t seed,
                              ClosureLimits limits)
{
    check_probability(p);
    return sample_from_pool(build_extension_pool(f, w, limits), p, seed);
}

double calibrate_p(std::size_t pool_size, double target_expected)
{
    if (pool_size == 0) {
        throw DataError("calibrate_p: empty candidate pool");
    }
    if (!(target_expected > 0.0)) {
        throw UsageError("calibrate_p: target must be positive");
    }
    return std::min(1.0, target_expected / static_cast<double>(pool_size));
}

double calibrate_p(const ExtensionPool& pool, double target_ratio)
{
    return calibrate_p(pool.candidates.size(), target_ratio * static_cast<double>(pool.formula_size));
}

ExtensionSet sample_fixed_length_extension(const CnfFormula& f, std::span<const Clause> pool, double p,
                                           std::uint64_t seed)
{
    check_probability(p);
    if (!pool.empty()) {
        const std::size_t ell = pool.front().width();
        for (const Clause& c : pool) {
            if (c.width() != ell) {
                throw UsageError("fixed-length pool has clauses of width " + std::to_string(ell) + " and " +
                                 std::to_string(c.width()));
            }
        }
    }
    ExtensionSet ext;
    ext.source_digest = formula_digest(f);
    ext.params = {pool.empty() ? 0 : pool.front().width(), p, seed};
    Rng rng(seed);
    for (const Clause& c : pool) {
        if (p >= 1.0 || rng.bernoulli(p)) {
            ext.resolvents.push_back(c);
        }
    }
    return ext;
}

CnfFormula extend_formula(const CnfFormula& f, const ExtensionSet& ext)
{
    std::vector<Clause> clauses(f.clauses().begin(), f.clauses().end());
    clauses.insert(clauses.end(), ext.resolvents.begin(), ext.resolvents.end());
    return CnfFormula(f.num_vars(), std::move(clauses));
}

std::string emit_extension_dimacs(const CnfFormula& f, const ExtensionSet& ext)
{
    char header[200];
    std::snprintf(header, sizeof header, "extension w=%zu p=%.17g seed=%llu source=%016llx", ext.params.w,
                  ext.params.p, static_cast<unsigned long long>(ext.params.seed),
                  static_cast<unsigned long long>(ext.source_digest));
    std::vector<std::string> comments{header};
    if (ext.tainted) {
        comments.emplace_back("extension tainted: closure limit reached");
    }
    return emit_dimacs(CnfFormula(f.num_vars(), ext.resolvents), comments);
}

}  // namespace slstail

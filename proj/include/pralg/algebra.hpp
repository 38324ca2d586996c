#pragma once

#include <algorithm>
#include <atomic>
#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pralg/errors.hpp"
#include "pralg/rational.hpp"
#include "pralg/rng.hpp"

namespace pralg {

using Bits = boost::dynamic_bitset<>;

class FiniteProbabilityAlgebra;

/// An event is a set of atom indices of one algebra.  Events from different
/// algebras never mix; every operation checks the owner id.
struct Event {
    std::uint64_t algebra_id = 0;
    Bits members;

    bool operator==(const Event& other) const {
        return algebra_id == other.algebra_id && members == other.members;
    }
    bool operator!=(const Event& other) const { return !(*this == other); }
    std::size_t count() const { return members.count(); }
    bool empty() const { return members.none(); }
};

namespace detail {
inline std::uint64_t next_algebra_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}
} // namespace detail

/// A finite probability algebra: strictly positive exact rational atom
/// weights summing to 1.  Values are immutable after construction.
class FiniteProbabilityAlgebra {
public:
    /// Validating constructor; throws InvalidStructure on broken weights.
    explicit FiniteProbabilityAlgebra(std::vector<Rational> weights,
                                      std::vector<std::string> labels = {})
        : FiniteProbabilityAlgebra(std::move(weights), std::move(labels), true) {}

    /// Builds without validating the algebra axioms.  Intended for
    /// verify_axioms and for loading files that may be deliberately broken.
    static FiniteProbabilityAlgebra unchecked(std::vector<Rational> weights,
                                              std::vector<std::string> labels = {}) {
        return FiniteProbabilityAlgebra(std::move(weights), std::move(labels), false);
    }

    std::uint64_t id() const { return id_; }
    std::size_t size() const { return weights_.size(); }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& weight(std::size_t i) const { return weights_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> atom_index(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        return std::nullopt;
    }

    Event empty_event() const { return Event{id_, Bits(size())}; }
    Event full_event() const {
        Bits b(size());
        b.set();
        return Event{id_, b};
    }
    Event atom_event(std::size_t i) const {
        Bits b(size());
        b.set(i);
        return Event{id_, b};
    }
    Event event(std::initializer_list<std::size_t> atoms) const {
        Bits b(size());
        for (std::size_t i : atoms) b.set(i);
        return Event{id_, b};
    }
    Event event(const std::vector<std::size_t>& atoms) const {
        Bits b(size());
        for (std::size_t i : atoms) b.set(i);
        return Event{id_, b};
    }
    /// Event from the low bits of a mask; handy for exhaustive enumeration.
    Event event_from_mask(std::uint64_t mask) const {
        Bits b(size());
        for (std::size_t i = 0; i < size() && i < 64; ++i)
            if (mask & (1ull << i)) b.set(i);
        return Event{id_, b};
    }

    void check_owner(const Event& e) const {
        if (e.algebra_id != id_ || e.members.size() != size())
            throw ForeignEvent();
    }

    Rational mu(const Event& e) const {
        check_owner(e);
        Rational total = 0;
        for (std::size_t i = e.members.find_first(); i != Bits::npos;
             i = e.members.find_next(i))
            total += weights_[i];
        return total;
    }

    Rational dist(const Event& e, const Event& f) const;

private:
    FiniteProbabilityAlgebra(std::vector<Rational> weights, std::vector<std::string> labels,
                             bool validate)
        : id_(detail::next_algebra_id()),
          weights_(std::move(weights)),
          labels_(std::move(labels)) {
        if (labels_.empty()) {
            labels_.reserve(weights_.size());
            for (std::size_t i = 0; i < weights_.size(); ++i)
                labels_.push_back("a" + std::to_string(i));
        }
        if (labels_.size() != weights_.size())
            throw InvalidStructure("label count does not match atom count");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw InvalidStructure("duplicate atom label: " + labels_[i]);
        if (validate) {
            if (weights_.empty()) throw InvalidStructure("algebra needs at least one atom");
            Rational total = 0;
            for (const Rational& w : weights_) {
                if (w <= 0) throw InvalidStructure("atom weights must be strictly positive");
                total += w;
            }
            if (total != 1)
                throw InvalidStructure("atom weights must sum to 1, got " + rat_string(total));
        }
    }

    std::uint64_t id_;
    std::vector<Rational> weights_;
    std::vector<std::string> labels_;
};

inline void check_same_algebra(const Event& e, const Event& f) {
    if (e.algebra_id != f.algebra_id || e.members.size() != f.members.size())
        throw ForeignEvent();
}

inline Event complement_event(const FiniteProbabilityAlgebra& alg, const Event& e) {
    alg.check_owner(e);
    return Event{e.algebra_id, ~e.members};
}

inline Event meet(const Event& e, const Event& f) {
    check_same_algebra(e, f);
    return Event{e.algebra_id, e.members & f.members};
}

inline Event join(const Event& e, const Event& f) {
    check_same_algebra(e, f);
    return Event{e.algebra_id, e.members | f.members};
}

inline Event symdiff(const Event& e, const Event& f) {
    check_same_algebra(e, f);
    return Event{e.algebra_id, e.members ^ f.members};
}

inline Event setminus(const Event& e, const Event& f) {
    check_same_algebra(e, f);
    return Event{e.algebra_id, e.members & ~f.members};
}

inline Rational FiniteProbabilityAlgebra::dist(const Event& e, const Event& f) const {
    check_owner(e);
    check_owner(f);
    return mu(symdiff(e, f));
}

/// True if the events are pairwise disjoint and their union is 1.
/// Empty coordinates are allowed.
inline bool is_partition_of_one(const FiniteProbabilityAlgebra& alg,
                                const std::vector<Event>& parts) {
    Bits seen(alg.size());
    for (const Event& p : parts) {
        alg.check_owner(p);
        if ((seen & p.members).any()) return false;
        seen |= p.members;
    }
    return seen.all();
}

/// The 2^n cells a^s for s in {-1,+1}^n, listed in lexicographic order of s
/// with -1 < +1 and the first coordinate most significant.  Cells are
/// pairwise disjoint and cover 1; empty cells are kept in place.
inline std::vector<Event> associated_partition(const FiniteProbabilityAlgebra& alg,
                                               const std::vector<Event>& tuple) {
    if (tuple.empty()) throw EmptyTuple();
    for (const Event& e : tuple) alg.check_owner(e);
    const std::size_t n = tuple.size();
    if (n > 20) throw AtomCapExceeded("tuple too long for cell enumeration");
    std::vector<Event> cells;
    cells.reserve(std::size_t(1) << n);
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
        Bits cell(alg.size());
        cell.set();
        for (std::size_t i = 0; i < n; ++i) {
            // bit (n-1-i) of code gives the sign of coordinate i; set bit = +1.
            bool plus = (code >> (n - 1 - i)) & 1;
            cell &= plus ? tuple[i].members : ~tuple[i].members;
        }
        cells.push_back(Event{alg.id(), cell});
    }
    return cells;
}

/// Inverse of associated_partition: recovers (a_1..a_n) from a partition of
/// length 2^n, a_i being the union of cells whose i-th sign is +1.
inline std::vector<Event> tuple_from_partition(const FiniteProbabilityAlgebra& alg,
                                               const std::vector<Event>& parts) {
    std::size_t len = parts.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw BadLength("partition length must be a power of two, got " + std::to_string(len));
    std::size_t n = 0;
    while ((std::size_t(1) << n) < len) ++n;
    if (n == 0) throw BadLength("partition must have length >= 2");
    if (!is_partition_of_one(alg, parts)) throw NotAPartition();
    std::vector<Event> tuple;
    tuple.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Bits b(alg.size());
        for (std::uint64_t code = 0; code < len; ++code)
            if ((code >> (n - 1 - i)) & 1) b |= parts[code].members;
        tuple.push_back(Event{alg.id(), b});
    }
    return tuple;
}

/// A finite boolean subalgebra, represented by its atoms: a partition of the
/// atom index set into nonempty blocks, ordered canonically by least member.
class Subalgebra {
public:
    Subalgebra() = default;

    static Subalgebra from_blocks(const FiniteProbabilityAlgebra& alg,
                                  std::vector<Bits> blocks) {
        Subalgebra s;
        s.algebra_id_ = alg.id();
        s.blocks_ = std::move(blocks);
        s.canonicalize(alg.size());
        return s;
    }

    /// Trivial subalgebra {0,1}: one block holding every atom.
    static Subalgebra trivial(const FiniteProbabilityAlgebra& alg) {
        Bits all(alg.size());
        all.set();
        return from_blocks(alg, {all});
    }

    /// The full algebra: every atom is a block.
    static Subalgebra discrete(const FiniteProbabilityAlgebra& alg) {
        std::vector<Bits> blocks;
        blocks.reserve(alg.size());
        for (std::size_t i = 0; i < alg.size(); ++i) {
            Bits b(alg.size());
            b.set(i);
            blocks.push_back(b);
        }
        return from_blocks(alg, std::move(blocks));
    }

    /// Subalgebra generated by a set of events: blocks are the equivalence
    /// classes of atoms under identical membership pattern.
    static Subalgebra generated(const FiniteProbabilityAlgebra& alg,
                                const std::vector<Event>& events) {
        for (const Event& e : events) alg.check_owner(e);
        std::map<std::vector<bool>, Bits> classes;
        for (std::size_t atom = 0; atom < alg.size(); ++atom) {
            std::vector<bool> signature;
            signature.reserve(events.size());
            for (const Event& e : events) signature.push_back(e.members.test(atom));
            auto [it, fresh] = classes.try_emplace(std::move(signature), Bits(alg.size()));
            it->second.set(atom);
        }
        std::vector<Bits> blocks;
        blocks.reserve(classes.size());
        for (auto& [sig, bits] : classes) blocks.push_back(bits);
        return from_blocks(alg, std::move(blocks));
    }

    std::uint64_t algebra_id() const { return algebra_id_; }
    std::size_t block_count() const { return blocks_.size(); }
    const std::vector<Bits>& blocks() const { return blocks_; }
    Event block_event(std::size_t j) const { return Event{algebra_id_, blocks_[j]}; }

    std::size_t block_of_atom(std::size_t atom) const {
        for (std::size_t j = 0; j < blocks_.size(); ++j)
            if (blocks_[j].test(atom)) return j;
        throw InvalidStructure("atom outside every block");
    }

    bool operator==(const Subalgebra& other) const {
        return algebra_id_ == other.algebra_id_ && blocks_ == other.blocks_;
    }
    bool operator!=(const Subalgebra& other) const { return !(*this == other); }

    /// True when every block of *this is contained in a block of coarser,
    /// i.e. *this refines coarser (coarser is a subalgebra of *this).
    bool refines(const Subalgebra& coarser) const {
        if (algebra_id_ != coarser.algebra_id_) return false;
        for (const Bits& b : blocks_) {
            bool inside = false;
            for (const Bits& c : coarser.blocks_)
                if (b.is_subset_of(c)) {
                    inside = true;
                    break;
                }
            if (!inside) return false;
        }
        return true;
    }

    /// True if e is a union of blocks.
    bool measures(const Event& e) const {
        if (e.algebra_id != algebra_id_) return false;
        for (const Bits& b : blocks_) {
            Bits overlap = b & e.members;
            if (overlap.any() && overlap != b) return false;
        }
        return true;
    }

private:
    void canonicalize(std::size_t atom_count) {
        Bits seen(atom_count);
        for (const Bits& b : blocks_) {
            if (b.none()) throw InvalidStructure("subalgebra block must be nonempty");
            if ((seen & b).any()) throw InvalidStructure("subalgebra blocks must be disjoint");
            seen |= b;
        }
        if (!seen.all()) throw InvalidStructure("subalgebra blocks must cover every atom");
        std::sort(blocks_.begin(), blocks_.end(),
                  [](const Bits& x, const Bits& y) { return x.find_first() < y.find_first(); });
    }

    std::uint64_t algebra_id_ = 0;
    std::vector<Bits> blocks_;
};

/// Common refinement of two subalgebras (their join as subalgebras):
/// blockwise intersections.
inline Subalgebra join_subalgebras(const FiniteProbabilityAlgebra& alg, const Subalgebra& a,
                                   const Subalgebra& b) {
    if (a.algebra_id() != alg.id() || b.algebra_id() != alg.id()) throw ForeignEvent();
    std::vector<Bits> blocks;
    for (const Bits& x : a.blocks())
        for (const Bits& y : b.blocks()) {
            Bits cell = x & y;
            if (cell.any()) blocks.push_back(cell);
        }
    return Subalgebra::from_blocks(alg, std::move(blocks));
}

inline Subalgebra generated_subalgebra(const FiniteProbabilityAlgebra& alg,
                                       const std::vector<Event>& events) {
    return Subalgebra::generated(alg, events);
}

/// A measure-preserving boolean embedding of a source algebra into an
/// extension, recorded as the image event of every source atom.
struct AlgebraExtension {
    FiniteProbabilityAlgebra extension;
    std::vector<Event> atom_images; // indexed by source atom

    Event map_event(const FiniteProbabilityAlgebra& source, const Event& e) const {
        source.check_owner(e);
        Bits bits(extension.size());
        for (std::size_t i = e.members.find_first(); i != Bits::npos;
             i = e.members.find_next(i))
            bits |= atom_images[i].members;
        return Event{extension.id(), bits};
    }

    Subalgebra map_subalgebra(const FiniteProbabilityAlgebra& source,
                              const Subalgebra& sub) const {
        std::vector<Bits> blocks;
        for (std::size_t j = 0; j < sub.block_count(); ++j)
            blocks.push_back(map_event(source, sub.block_event(j)).members);
        return Subalgebra::from_blocks(extension, std::move(blocks));
    }

    std::vector<Event> map_tuple(const FiniteProbabilityAlgebra& source,
                                 const std::vector<Event>& tuple) const {
        std::vector<Event> out;
        out.reserve(tuple.size());
        for (const Event& e : tuple) out.push_back(map_event(source, e));
        return out;
    }
};

/// Incremental atom splitter used by the constructive proofs: fragments of
/// original atoms are cut at exact rational offsets and regrouped, then
/// frozen into an extension algebra.
class AtomSplitter {
public:
    explicit AtomSplitter(const FiniteProbabilityAlgebra& alg) : alg_(alg) {
        frags_.reserve(alg.size());
        for (std::size_t i = 0; i < alg.size(); ++i) frags_.push_back({i, alg.weight(i)});
    }

    /// Fragment ids of the atoms of an event, in atom order.  Valid only
    /// before any of those atoms have been split.
    std::vector<std::size_t> initial_pool(const Event& e) const {
        std::vector<std::size_t> pool;
        for (std::size_t i = e.members.find_first(); i != Bits::npos;
             i = e.members.find_next(i))
            pool.push_back(i);
        return pool;
    }

    Rational weight(std::size_t frag) const { return frags_[frag].weight; }

    /// Cuts an ordered pool of fragments into consecutive groups with the
    /// given masses (which must sum to the pool total).  Fragments are split
    /// where a boundary falls strictly inside one.
    std::vector<std::vector<std::size_t>> allocate(std::vector<std::size_t> pool,
                                                   const std::vector<Rational>& targets) {
        std::vector<std::vector<std::size_t>> groups(targets.size());
        std::size_t p = 0;
        for (std::size_t g = 0; g < targets.size(); ++g) {
            Rational need = targets[g];
            if (need < 0) throw InvalidStructure("negative allocation target");
            while (need > 0) {
                if (p >= pool.size()) throw InvalidStructure("allocation exceeds pool mass");
                std::size_t id = pool[p];
                if (frags_[id].weight <= need) {
                    groups[g].push_back(id);
                    need -= frags_[id].weight;
                    ++p;
                } else {
                    // split: prefix keeps the id, suffix becomes a new fragment
                    Frag suffix{frags_[id].orig, frags_[id].weight - need};
                    frags_[id].weight = need;
                    groups[g].push_back(id);
                    std::size_t new_id = frags_.size();
                    frags_.push_back(suffix);
                    pool[p] = new_id;
                    need = 0;
                }
            }
        }
        if (p != pool.size()) throw InvalidStructure("allocation leaves pool mass unused");
        return groups;
    }

    /// Freezes the fragments into an algebra.  Atoms are ordered by
    /// (original atom, creation order), which matches left-to-right cutting.
    /// frag_to_atom maps fragment ids to atom indices of the extension.
    AlgebraExtension finalize(std::vector<std::size_t>& frag_to_atom) const {
        std::vector<std::size_t> order(frags_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (frags_[x].orig != frags_[y].orig) return frags_[x].orig < frags_[y].orig;
            return x < y;
        });
        std::vector<Rational> weights;
        std::vector<std::string> labels;
        frag_to_atom.assign(frags_.size(), 0);
        std::size_t within = 0;
        std::size_t prev_orig = alg_.size();
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            std::size_t id = order[pos];
            if (frags_[id].orig != prev_orig) {
                prev_orig = frags_[id].orig;
                within = 0;
            }
            ++within;
            frag_to_atom[id] = weights.size();
            weights.push_back(frags_[id].weight);
            labels.push_back(alg_.label(frags_[id].orig) + "." + std::to_string(within));
        }
        AlgebraExtension ext{FiniteProbabilityAlgebra(std::move(weights), std::move(labels)),
                             {}};
        std::vector<Bits> images(alg_.size(), Bits(ext.extension.size()));
        for (std::size_t id = 0; id < frags_.size(); ++id)
            images[frags_[id].orig].set(frag_to_atom[id]);
        for (std::size_t i = 0; i < alg_.size(); ++i)
            ext.atom_images.push_back(Event{ext.extension.id(), images[i]});
        return ext;
    }

    /// Builds an event of the finalized extension from fragment ids.
    static Event event_of(const AlgebraExtension& ext,
                          const std::vector<std::size_t>& frag_to_atom,
                          const std::vector<std::size_t>& frag_ids) {
        Bits b(ext.extension.size());
        for (std::size_t id : frag_ids) b.set(frag_to_atom[id]);
        return Event{ext.extension.id(), b};
    }

private:
    struct Frag {
        std::size_t orig;
        Rational weight;
    };
    const FiniteProbabilityAlgebra& alg_;
    std::vector<Frag> frags_;
};

// ---------------------------------------------------------------------------
// Axiom verification

struct AxiomCheck {
    std::string name;
    bool pass = false;
    std::string witness; // empty when pass
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool all_pass() const {
        for (const AxiomCheck& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

// Measures scaled to a common denominator so the O(4^k) pair enumeration
// runs on machine integers.  Returns false if the scale does not fit.
inline bool scaled_measures(const std::vector<Rational>& weights, std::vector<long long>& out,
                            Integer& scale) {
    scale = 1;
    for (const Rational& w : weights) scale = lcm(scale, rat_den(w));
    if (scale > Integer(1) << 40) return false;
    out.clear();
    for (const Rational& w : weights) {
        Integer v = rat_num(w) * (scale / rat_den(w));
        if (v > Integer(1) << 60 || v < -(Integer(1) << 60)) return false;
        out.push_back(v.convert_to<long long>());
    }
    return true;
}

} // namespace detail

/// Checks the axiom list on a (possibly unchecked) algebra: boolean algebra
/// identities, the modular law mu(x|y)+mu(x&y)=mu(x)+mu(y), strict
/// positivity, total mass 1, and d(x,y)=mu(x^y).  Pair identities are
/// enumerated exhaustively up to 12 atoms, triple identities up to 6 atoms;
/// beyond that a seeded random sample is used.
inline AxiomReport verify_axioms(const FiniteProbabilityAlgebra& alg,
                                 std::uint64_t sample_seed = 1) {
    AxiomReport report;
    const std::size_t k = alg.size();
    auto add = [&](std::string name, bool pass, std::string witness = "") {
        report.checks.push_back({std::move(name), pass, std::move(witness)});
    };

    // Strict positivity and total mass.
    {
        bool pos = true;
        std::string w;
        for (std::size_t i = 0; i < k && pos; ++i)
            if (alg.weight(i) <= 0) {
                pos = false;
                w = "atom " + alg.label(i) + " has weight " + rat_string(alg.weight(i));
            }
        add("strict positivity", pos, w);
        Rational total = 0;
        for (std::size_t i = 0; i < k; ++i) total += alg.weight(i);
        add("total mass 1", total == 1,
            total == 1 ? "" : "weights sum to " + rat_string(total));
        if (k == 0) {
            add("at least one atom", false, "algebra has no atoms");
            return report;
        }
        add("at least one atom", true);
    }

    if (k > 62) {
        add("enumeration", false, "more than 62 atoms not supported");
        return report;
    }
    const std::uint64_t space = 1ull << k;
    const std::uint64_t full = space - 1;

    std::vector<long long> sm;
    Integer scale;
    bool have_scaled = detail::scaled_measures(alg.weights(), sm, scale);

    // mu of a mask, exact path.
    auto mu_mask_exact = [&](std::uint64_t m) {
        Rational t = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (m & (1ull << i)) t += alg.weight(i);
        return t;
    };

    // Boolean identities on index sets.  Pairs: De Morgan, commutativity,
    // absorption, complement laws.  Triples: associativity, distributivity.
    {
        bool ok = true;
        std::string w;
        auto check_pair = [&](std::uint64_t x, std::uint64_t y) {
            if ((~(x & y) & full) != (((~x) | (~y)) & full)) return false;
            if ((x & (x | y)) != x || (x | (x & y)) != x) return false;
            if ((x & (~x & full)) != 0 || ((x | (~x & full)) != full)) return false;
            return true;
        };
        auto check_triple = [&](std::uint64_t x, std::uint64_t y, std::uint64_t z) {
            if (((x & y) & z) != (x & (y & z))) return false;
            if (((x | y) | z) != (x | (y | z))) return false;
            if ((x & (y | z)) != ((x & y) | (x & z))) return false;
            if ((x | (y & z)) != ((x | y) & (x | z))) return false;
            return true;
        };
        if (k <= 12) {
            for (std::uint64_t x = 0; x < space && ok; ++x)
                for (std::uint64_t y = 0; y < space && ok; ++y)
                    if (!check_pair(x, y)) {
                        ok = false;
                        w = "pair identity failed";
                    }
        } else {
            Rng rng(sample_seed);
            for (int i = 0; i < 20000 && ok; ++i)
                if (!check_pair(rng.below(space), rng.below(space))) {
                    ok = false;
                    w = "pair identity failed";
                }
        }
        if (k <= 6) {
            for (std::uint64_t x = 0; x < space && ok; ++x)
                for (std::uint64_t y = 0; y < space && ok; ++y)
                    for (std::uint64_t z = 0; z < space && ok; ++z)
                        if (!check_triple(x, y, z)) {
                            ok = false;
                            w = "triple identity failed";
                        }
        } else {
            Rng rng(sample_seed + 1);
            for (int i = 0; i < 20000 && ok; ++i)
                if (!check_triple(rng.below(space), rng.below(space), rng.below(space))) {
                    ok = false;
                    w = "triple identity failed";
                }
        }
        add("boolean identities", ok, w);
    }

    // mu(x|y) + mu(x&y) = mu(x) + mu(y), and d(x,y) = mu(x^y).
    {
        bool ok = true;
        std::string w;
        if (have_scaled && k <= 12) {
            std::vector<long long> table(space, 0);
            for (std::uint64_t m = 1; m < space; ++m) {
                std::uint64_t low = m & (m - 1);
                std::uint64_t bit = m ^ low;
                unsigned idx = 0;
                while ((1ull << idx) != bit) ++idx;
                table[m] = table[low] + sm[idx];
            }
            for (std::uint64_t x = 0; x < space && ok; ++x)
                for (std::uint64_t y = 0; y < space; ++y) {
                    if (table[x | y] + table[x & y] != table[x] + table[y]) {
                        ok = false;
                        w = "additivity failed at masks " + std::to_string(x) + "," +
                            std::to_string(y);
                        break;
                    }
                    // d is defined through the symmetric difference; check the
                    // identity d(x,y) = mu(x) + mu(y) - 2 mu(x&y) as well.
                    if (table[x ^ y] != table[x] + table[y] - 2 * table[x & y]) {
                        ok = false;
                        w = "metric identity failed";
                        break;
                    }
                }
        } else {
            Rng rng(sample_seed + 2);
            for (int i = 0; i < 5000 && ok; ++i) {
                std::uint64_t x = rng.below(space), y = rng.below(space);
                Rational mx = mu_mask_exact(x), my = mu_mask_exact(y);
                if (mu_mask_exact(x | y) + mu_mask_exact(x & y) != mx + my) {
                    ok = false;
                    w = "additivity failed";
                }
                if (mu_mask_exact(x ^ y) != mx + my - 2 * mu_mask_exact(x & y)) {
                    ok = false;
                    w = "metric identity failed";
                }
            }
        }
        add("measure additivity and d = mu(symdiff)", ok, w);
        add("mu(0)=0 and mu(1)=1", mu_mask_exact(0) == 0 && mu_mask_exact(full) == 1,
            mu_mask_exact(full) == 1 ? "" : "mu(1) = " + rat_string(mu_mask_exact(full)));
    }

    return report;
}

// ---------------------------------------------------------------------------
// Test-structure generation

inline FiniteProbabilityAlgebra uniform_algebra(std::size_t n) {
    if (n == 0) throw InvalidStructure("uniform_algebra needs n >= 1");
    std::vector<Rational> w(n, Rational(1, static_cast<long long>(n)));
    return FiniteProbabilityAlgebra(std::move(w));
}

/// n strictly positive rationals with bounded denominators, normalized to
/// sum 1.  Deterministic in the seed.
inline FiniteProbabilityAlgebra random_algebra(std::uint64_t seed, std::size_t n,
                                               long long max_part = 20) {
    if (n == 0) throw InvalidStructure("random_algebra needs n >= 1");
    Rng rng(seed);
    std::vector<long long> parts(n);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        parts[i] = rng.range(1, max_part);
        total += parts[i];
    }
    std::vector<Rational> w;
    w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) w.emplace_back(parts[i], total);
    return FiniteProbabilityAlgebra(std::move(w));
}

/// Random composition of max(total, n) into n positive integer parts; used
/// by the oracle suites to keep grain counts small.
inline std::vector<long long> random_composition(Rng& rng, std::size_t n, long long total) {
    std::vector<long long> parts(n, 1);
    for (long long rest = total - static_cast<long long>(n); rest > 0; --rest)
        parts[static_cast<std::size_t>(rng.below(n))] += 1;
    return parts;
}

/// Denominator of the weights produced by small-denominator generation.
inline long long composition_total(std::size_t n, long long total) {
    return std::max<long long>(total, static_cast<long long>(n));
}

/// Random event over an algebra.
inline Event random_event(Rng& rng, const FiniteProbabilityAlgebra& alg) {
    Bits b(alg.size());
    for (std::size_t i = 0; i < alg.size(); ++i)
        if (rng.coin()) b.set(i);
    return Event{alg.id(), b};
}

/// Random partition of 1 into n (possibly empty) coordinates.
inline std::vector<Event> random_partition(Rng& rng, const FiniteProbabilityAlgebra& alg,
                                           std::size_t n) {
    std::vector<Bits> parts(n, Bits(alg.size()));
    for (std::size_t i = 0; i < alg.size(); ++i)
        parts[static_cast<std::size_t>(rng.below(n))].set(i);
    std::vector<Event> out;
    out.reserve(n);
    for (Bits& b : parts) out.push_back(Event{alg.id(), std::move(b)});
    return out;
}

/// Random subalgebra with at most max_blocks blocks.
inline Subalgebra random_subalgebra(Rng& rng, const FiniteProbabilityAlgebra& alg,
                                    std::size_t max_blocks) {
    std::size_t want = 1 + static_cast<std::size_t>(rng.below(max_blocks));
    std::vector<Bits> blocks(want, Bits(alg.size()));
    for (std::size_t i = 0; i < alg.size(); ++i)
        blocks[static_cast<std::size_t>(rng.below(want))].set(i);
    std::vector<Bits> nonempty;
    for (Bits& b : blocks)
        if (b.any()) nonempty.push_back(std::move(b));
    return Subalgebra::from_blocks(alg, std::move(nonempty));
}

/// Coarsens by merging one random pair of blocks; the slowest possible
/// coarsening step, used to build maximal-length refinement chains.
inline Subalgebra merge_two_blocks(Rng& rng, const FiniteProbabilityAlgebra& alg,
                                   const Subalgebra& fine) {
    if (fine.block_count() < 2) return fine;
    std::size_t i = rng.below(fine.block_count());
    std::size_t j = rng.below(fine.block_count() - 1);
    if (j >= i) ++j;
    std::vector<Bits> blocks;
    for (std::size_t k = 0; k < fine.block_count(); ++k) {
        if (k == j) continue;
        Bits b = fine.blocks()[k];
        if (k == i) b |= fine.blocks()[j];
        blocks.push_back(b);
    }
    return Subalgebra::from_blocks(alg, std::move(blocks));
}

/// Random coarsening of a given subalgebra (merges its blocks).
inline Subalgebra random_coarsening(Rng& rng, const FiniteProbabilityAlgebra& alg,
                                    const Subalgebra& fine) {
    std::size_t groups = 1 + static_cast<std::size_t>(rng.below(fine.block_count()));
    std::vector<Bits> merged(groups, Bits(alg.size()));
    for (std::size_t j = 0; j < fine.block_count(); ++j)
        merged[static_cast<std::size_t>(rng.below(groups))] |= fine.blocks()[j];
    std::vector<Bits> nonempty;
    for (Bits& b : merged)
        if (b.any()) nonempty.push_back(std::move(b));
    return Subalgebra::from_blocks(alg, std::move(nonempty));
}

} // namespace pralg

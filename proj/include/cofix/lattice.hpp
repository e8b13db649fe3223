#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cofix/errors.hpp"
#include "cofix/rational.hpp"

namespace cofix {

/// Finite set of state names in canonical form: sorted, no duplicates.
using StateSet = std::vector<std::string>;

StateSet canon_states(StateSet s);
bool set_member(const StateSet& s, const std::string& q);
StateSet set_union(const StateSet& a, const StateSet& b);
StateSet set_intersect(const StateSet& a, const StateSet& b);
bool set_subset(const StateSet& a, const StateSet& b);
std::string set_str(const StateSet& s);

/// A value of the truth-value lattice: either a rational in [0,1] or a
/// finite set of states, depending on the owning lattice's kind.
class OmegaValue {
public:
    OmegaValue() : v_(Rational(0)) {}
    static OmegaValue rational(Rational r) { return OmegaValue(std::move(r)); }
    static OmegaValue states(StateSet s) { return OmegaValue(canon_states(std::move(s))); }

    bool is_rational() const { return std::holds_alternative<Rational>(v_); }
    bool is_states() const { return std::holds_alternative<StateSet>(v_); }

    const Rational& rat() const;
    const StateSet& set() const;

    std::string str() const;

    friend bool operator==(const OmegaValue& a, const OmegaValue& b) { return a.v_ == b.v_; }
    friend bool operator!=(const OmegaValue& a, const OmegaValue& b) { return a.v_ != b.v_; }

private:
    explicit OmegaValue(Rational r) : v_(std::move(r)) {}
    explicit OmegaValue(StateSet s) : v_(std::move(s)) {}
    std::variant<Rational, StateSet> v_;
};

/// One of the two built-in complete lattices: the unit interval [0,1] with
/// the usual order, or the powerset of a finite carrier ordered by inclusion.
struct Lattice {
    enum class Kind { UnitInterval, Powerset };

    Kind kind = Kind::UnitInterval;
    StateSet carrier; // Powerset only

    static Lattice unit_interval() { return Lattice{Kind::UnitInterval, {}}; }
    static Lattice powerset(StateSet carrier);

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.kind == b.kind && a.carrier == b.carrier;
    }
};

/// Checks that v belongs to l (kind match, carrier membership, unit range).
void validate_value(const Lattice& l, const OmegaValue& v);

bool leq(const Lattice& l, const OmegaValue& a, const OmegaValue& b);
OmegaValue join(const Lattice& l, const OmegaValue& a, const OmegaValue& b);
OmegaValue meet(const Lattice& l, const OmegaValue& a, const OmegaValue& b);
/// Finite joins and meets; the empty join is bot, the empty meet is top.
OmegaValue join(const Lattice& l, const std::vector<OmegaValue>& vs);
OmegaValue meet(const Lattice& l, const std::vector<OmegaValue>& vs);
OmegaValue bot(const Lattice& l);
OmegaValue top(const Lattice& l);

/// Function-table view of a lattice, the seam the law checker runs against.
/// Tests inject deliberately broken tables through this type.
struct LatticeOps {
    std::function<bool(const OmegaValue&, const OmegaValue&)> leq;
    std::function<OmegaValue(const OmegaValue&, const OmegaValue&)> join;
    std::function<OmegaValue(const OmegaValue&, const OmegaValue&)> meet;
    OmegaValue bot;
    OmegaValue top;

    static LatticeOps of(const Lattice& l);
};

struct LawResult {
    std::string law;
    bool passed = true;
    std::vector<OmegaValue> witness; // first violating sample tuple
    std::string detail;
};

struct LawReport {
    std::vector<LawResult> laws;
    std::size_t samples = 0;
    bool all_passed() const;
    const LawResult* first_failure() const;
};

/// Checks the bounded-lattice equations (associativity, commutativity,
/// idempotence, absorption, bot/top neutrality, order compatibility of
/// join/meet with leq) over all tuples drawn from `samples`.
LawReport check_lattice_laws(const LatticeOps& ops, const std::vector<OmegaValue>& samples);
LawReport check_lattice_laws(const Lattice& l, const std::vector<OmegaValue>& samples);

/// All subsets of the carrier, in mask order (deterministic).
std::vector<OmegaValue> all_subsets(const StateSet& carrier);

/// Evenly spaced rationals k/(points-1) for k = 0..points-1.
std::vector<OmegaValue> rational_grid(std::size_t points);

} // namespace cofix

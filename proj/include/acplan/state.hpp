#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace acplan {

/// A predicate applied to object names, e.g. (at dishes table).
/// Ordered by predicate name, then arguments lexicographically.
struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
    friend bool operator==(const GroundAtom&, const GroundAtom&) = default;

    std::string to_string() const;
};

/// Closed-world world snapshot: a canonical (sorted, duplicate-free) set of
/// ground atoms. Absent atoms are false.
class State {
public:
    State() = default;
    State(std::initializer_list<GroundAtom> atoms);
    explicit State(std::vector<GroundAtom> atoms);

    bool contains(const GroundAtom& atom) const;
    /// Returns true when the atom was not present before.
    bool insert(GroundAtom atom);
    /// Returns true when the atom was present.
    bool erase(const GroundAtom& atom);

    const std::vector<GroundAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    auto begin() const noexcept { return atoms_.begin(); }
    auto end() const noexcept { return atoms_.end(); }

    /// FNV-1a over the canonical atom sequence; stable across platforms and runs.
    std::uint64_t hash() const noexcept;
    /// hash() as 16 lower-case hex digits.
    std::string digest() const;

    friend bool operator==(const State&, const State&) = default;

private:
    std::vector<GroundAtom> atoms_;
};

}  // namespace acplan

template <>
struct std::hash<acplan::State> {
    std::size_t operator()(const acplan::State& s) const noexcept {
        return static_cast<std::size_t>(s.hash());
    }
};

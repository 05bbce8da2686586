#include "acplan/state.hpp"

#include <algorithm>
#include <cstdio>

namespace acplan {

std::string GroundAtom::to_string() const {
    std::string out = "(" + predicate;
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    out += ')';
    return out;
}

State::State(std::initializer_list<GroundAtom> atoms) : State(std::vector<GroundAtom>(atoms)) {}

State::State(std::vector<GroundAtom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool State::contains(const GroundAtom& atom) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

bool State::insert(GroundAtom atom) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
    if (it != atoms_.end() && *it == atom)
        return false;
    atoms_.insert(it, std::move(atom));
    return true;
}

bool State::erase(const GroundAtom& atom) {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
    if (it == atoms_.end() || !(*it == atom))
        return false;
    atoms_.erase(it);
    return true;
}

std::uint64_t State::hash() const noexcept {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (const auto& atom : atoms_) {
        for (char c : atom.predicate)
            mix(static_cast<unsigned char>(c));
        for (const auto& arg : atom.args) {
            mix(0x1f);
            for (char c : arg)
                mix(static_cast<unsigned char>(c));
        }
        mix(0x1e);
    }
    return h;
}

std::string State::digest() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

}  // namespace acplan

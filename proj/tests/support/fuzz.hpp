#pragma once

// Random well-formed domain/problem texts for round-trip testing. Layout,
// letter case and comments vary so that the reader, not just the printer, is
// exercised.

#include <cctype>
#include <string>
#include <vector>

#include "acplan/random.hpp"

namespace support {

struct FuzzText {
    std::string domain;
    std::string problem;
};

class FuzzWriter {
public:
    explicit FuzzWriter(std::uint64_t seed) : rng_(seed) {}

    FuzzText generate() {
        types_.clear();
        std::size_t n_types = 1 + rng_.below(3);
        for (std::size_t i = 0; i < n_types; ++i)
            types_.push_back("t" + std::to_string(i));

        struct Pred {
            std::string name;
            std::vector<std::string> types;
        };
        std::vector<Pred> preds;
        std::size_t n_preds = 1 + rng_.below(4);
        for (std::size_t i = 0; i < n_preds; ++i) {
            Pred p{"p" + std::to_string(i), {}};
            std::size_t arity = rng_.below(4);
            for (std::size_t k = 0; k < arity; ++k)
                p.types.push_back(any_type());
            preds.push_back(p);
        }

        std::string d = ws() + "(DEFINE (domain fz" + std::to_string(rng_.below(1000)) + ")" + sep();
        d += "(:requirements :strips :typing :negative-preconditions)" + sep();
        d += "(:types";
        for (const auto& t : types_)
            d += " " + maybe_upper(t);
        d += ")" + sep();
        std::vector<std::pair<std::string, std::string>> constants;
        if (rng_.bernoulli(0.5)) {
            constants.emplace_back("k0", types_[rng_.below(types_.size())]);
            d += "(:constants k0 - " + constants.back().second + ")" + sep();
        }
        d += "(:predicates";
        for (const auto& p : preds) {
            d += sep() + "(" + p.name;
            for (std::size_t k = 0; k < p.types.size(); ++k)
                d += " ?a" + std::to_string(k) + " - " + p.types[k];
            d += ")";
        }
        d += ")" + sep();

        std::size_t n_actions = 1 + rng_.below(3);
        for (std::size_t i = 0; i < n_actions; ++i) {
            std::vector<std::pair<std::string, std::string>> params;
            std::size_t n_params = rng_.below(4);
            for (std::size_t k = 0; k < n_params; ++k)
                params.emplace_back("?x" + std::to_string(k), types_[rng_.below(types_.size())]);
            auto term_for = [&](const std::string& type) -> std::string {
                std::vector<std::string> fits;
                for (const auto& [v, t] : params)
                    if (type == "object" || t == type)
                        fits.push_back(v);
                for (const auto& [c, t] : constants)
                    if (type == "object" || t == type)
                        fits.push_back(c);
                return fits.empty() ? std::string() : fits[rng_.below(fits.size())];
            };
            auto atom_for = [&](const Pred& p) -> std::string {
                std::string a = "(" + p.name;
                for (const auto& t : p.types) {
                    std::string term = term_for(t);
                    if (term.empty())
                        return {};
                    a += " " + term;
                }
                return a + ")";
            };
            d += "(:action a" + std::to_string(i) + sep() + ":parameters (";
            for (const auto& [v, t] : params)
                d += v + " - " + t + " ";
            d += ")" + sep() + ":precondition (and";
            std::vector<std::string> used;
            for (std::size_t k = rng_.below(4); k > 0; --k) {
                std::string a = atom_for(preds[rng_.below(preds.size())]);
                if (a.empty() || contains(used, a))
                    continue;
                used.push_back(a);
                d += rng_.bernoulli(0.3) ? " (not " + a + ")" : " " + a;
            }
            d += ")" + sep() + ":effect (and";
            std::vector<std::string> effects;
            for (std::size_t k = rng_.below(4); k > 0; --k) {
                std::string a = atom_for(preds[rng_.below(preds.size())]);
                if (a.empty() || contains(effects, a))
                    continue;
                effects.push_back(a);
                d += rng_.bernoulli(0.4) ? " (not " + a + ")" : " " + a;
            }
            d += "))" + sep();
        }
        d += ")" + ws();

        std::string p = "(define (problem pz)" + sep() + "(:domain " + name_of(d) + ")" + sep() + "(:objects";
        std::vector<std::pair<std::string, std::string>> objects = constants;
        for (std::size_t i = 0, n = 1 + rng_.below(5); i < n; ++i) {
            objects.emplace_back("o" + std::to_string(i), types_[rng_.below(types_.size())]);
            p += " o" + std::to_string(i) + " - " + objects.back().second;
        }
        p += ")" + sep() + "(:init";
        auto object_for = [&](const std::string& type) -> std::string {
            std::vector<std::string> fits;
            for (const auto& [o, t] : objects)
                if (type == "object" || t == type)
                    fits.push_back(o);
            return fits.empty() ? std::string() : fits[rng_.below(fits.size())];
        };
        auto ground_atom = [&](const Pred& pr) -> std::string {
            std::string a = "(" + pr.name;
            for (const auto& t : pr.types) {
                std::string o = object_for(t);
                if (o.empty())
                    return {};
                a += " " + o;
            }
            return a + ")";
        };
        for (std::size_t k = rng_.below(6); k > 0; --k) {
            std::string a = ground_atom(preds[rng_.below(preds.size())]);
            if (!a.empty())
                p += " " + a;
        }
        p += ")" + sep() + "(:goal ";
        std::string goal;
        for (int tries = 0; tries < 10 && goal.empty(); ++tries)
            goal = formula(preds.size(), [&](std::size_t i) { return ground_atom(preds[i]); }, 2);
        if (goal.empty())
            goal = "(and)";
        p += goal + "))";
        return {d, p};
    }

private:
    template <typename AtomFn>
    std::string formula(std::size_t n_preds, AtomFn atom, int depth) {
        std::size_t pick = depth == 0 ? 0 : rng_.below(4);
        switch (pick) {
        case 0: return atom(rng_.below(n_preds));
        case 1: {
            std::string inner = formula(n_preds, atom, depth - 1);
            return inner.empty() ? inner : "(not " + inner + ")";
        }
        default: {
            std::string out = pick == 2 ? "(and" : "(or";
            for (std::size_t k = 1 + rng_.below(3); k > 0; --k) {
                std::string c = formula(n_preds, atom, depth - 1);
                if (!c.empty())
                    out += " " + c;
            }
            return out + ")";
        }
        }
    }

    static bool contains(const std::vector<std::string>& v, const std::string& s) {
        for (const auto& x : v)
            if (x == s)
                return true;
        return false;
    }

    static std::string name_of(const std::string& domain) {
        auto at = domain.find("(domain ");
        auto end = domain.find(')', at);
        return domain.substr(at + 8, end - at - 8);
    }

    std::string any_type() {
        std::size_t i = rng_.below(types_.size() + 1);
        return i == types_.size() ? "object" : types_[i];
    }

    std::string maybe_upper(std::string s) {
        if (rng_.bernoulli(0.3))
            for (auto& c : s)
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }

    std::string ws() {
        static const char* options[] = {"", " ", "\n", "\t", "  \n  "};
        return options[rng_.below(5)];
    }

    std::string sep() {
        std::string s = rng_.bernoulli(0.2) ? " ; note\n" : "";
        return s + (rng_.bernoulli(0.5) ? "\n  " : " ");
    }

    acplan::CounterRng rng_;
    std::vector<std::string> types_;
};

}  // namespace support

#include "graphbell/expression.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "graphbell/errors.hpp"

namespace graphbell {

std::string to_string(Setting s) {
    switch (s) {
        case Setting::A0: return "A0";
        case Setting::A1: return "A1";
        case Setting::Sum: return "SUM";
        case Setting::Diff: return "DIFF";
    }
    return "?";
}

Setting setting_from_string(const std::string& name) {
    if (name == "A0") return Setting::A0;
    if (name == "A1") return Setting::A1;
    if (name == "SUM") return Setting::Sum;
    if (name == "DIFF") return Setting::Diff;
    throw ValidationError("unknown setting '" + name + "'");
}

namespace {

bool factors_less(const std::map<int, Setting>& a, const std::map<int, Setting>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return static_cast<int>(x.second) < static_cast<int>(y.second);
        });
}

}  // namespace

void canonicalize(BellExpression& e) {
    if (e.n_parties < 1) {
        throw ValidationError("expression must have at least one party");
    }
    std::vector<Term> merged;
    for (const Term& t : e.terms) {
        if (t.factors.empty()) {
            throw ValidationError("expression term has no factors");
        }
        for (const auto& [party, setting] : t.factors) {
            (void)setting;
            if (party < 0 || party >= e.n_parties) {
                throw ValidationError("expression term references party " +
                                      std::to_string(party + 1) + " outside [1," +
                                      std::to_string(e.n_parties) + "]");
            }
        }
        auto match = std::find_if(merged.begin(), merged.end(), [&](const Term& m) {
            return m.factors == t.factors;
        });
        if (match != merged.end()) {
            match->coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
    std::sort(merged.begin(), merged.end(), [](const Term& a, const Term& b) {
        if (a.factors != b.factors) return factors_less(a.factors, b.factors);
        return a.coeff < b.coeff;
    });
    e.terms = std::move(merged);
}

std::vector<AtomicTerm> expand_atomic(const BellExpression& e) {
    std::vector<AtomicTerm> atoms;
    for (const Term& t : e.terms) {
        std::vector<AtomicTerm> partial = {{t.coeff, {}}};
        for (const auto& [party, setting] : t.factors) {
            std::vector<AtomicTerm> next;
            next.reserve(partial.size() * 2);
            for (const auto& [coeff, factors] : partial) {
                auto emit = [&](double c, Setting s) {
                    auto f = factors;
                    f[party] = s;
                    next.emplace_back(c, std::move(f));
                };
                switch (setting) {
                    case Setting::A0:
                    case Setting::A1:
                        emit(coeff, setting);
                        break;
                    case Setting::Sum:
                        emit(coeff, Setting::A0);
                        emit(coeff, Setting::A1);
                        break;
                    case Setting::Diff:
                        emit(coeff, Setting::A0);
                        emit(-coeff, Setting::A1);
                        break;
                }
            }
            partial = std::move(next);
        }
        for (auto& a : partial) atoms.push_back(std::move(a));
    }

    std::vector<AtomicTerm> merged;
    for (auto& [coeff, factors] : atoms) {
        auto match = std::find_if(merged.begin(), merged.end(), [&](const AtomicTerm& m) {
            return m.second == factors;
        });
        if (match != merged.end()) {
            match->first += coeff;
        } else {
            merged.emplace_back(coeff, std::move(factors));
        }
    }
    std::erase_if(merged, [](const AtomicTerm& a) { return a.first == 0.0; });
    std::sort(merged.begin(), merged.end(), [](const AtomicTerm& a, const AtomicTerm& b) {
        if (a.second != b.second) return factors_less(a.second, b.second);
        return a.first < b.first;
    });
    return merged;
}

namespace {

nlohmann::json meta_to_json(const ExprMeta& m) {
    nlohmann::json j;
    j["kind"] = m.kind;
    if (m.graph) j["graph"] = nlohmann::json::parse(graph_to_json(*m.graph));
    if (!m.substitutions.empty()) {
        auto subs = nlohmann::json::array();
        for (int v : m.substitutions) subs.push_back(v + 1);
        j["substitutions"] = std::move(subs);
    }
    if (m.theta) j["theta"] = *m.theta;
    if (m.mu) j["mu"] = *m.mu;
    if (m.beta_c) j["beta_c"] = *m.beta_c;
    if (m.beta_q) j["beta_q"] = *m.beta_q;
    if (!m.permutation.empty()) {
        auto perm = nlohmann::json::array();
        for (int v : m.permutation) perm.push_back(v + 1);
        j["permutation"] = std::move(perm);
    }
    return j;
}

ExprMeta meta_from_json(const nlohmann::json& j) {
    ExprMeta m;
    m.kind = j.value("kind", std::string("custom"));
    if (j.contains("graph")) m.graph = graph_from_json(j["graph"].dump());
    if (j.contains("substitutions")) {
        for (const auto& v : j["substitutions"]) m.substitutions.push_back(v.get<int>() - 1);
    }
    if (j.contains("theta")) m.theta = j["theta"].get<double>();
    if (j.contains("mu")) m.mu = j["mu"].get<double>();
    if (j.contains("beta_c")) m.beta_c = j["beta_c"].get<double>();
    if (j.contains("beta_q")) m.beta_q = j["beta_q"].get<double>();
    if (j.contains("permutation")) {
        for (const auto& v : j["permutation"]) m.permutation.push_back(v.get<int>() - 1);
    }
    return m;
}

}  // namespace

BellExpression expression_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("expression JSON parse failure: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("terms")) {
        throw ValidationError("expression JSON must be an object with 'n' and 'terms'");
    }
    BellExpression e;
    e.n_parties = doc["n"].get<int>();
    for (const auto& jt : doc["terms"]) {
        if (!jt.contains("coeff") || !jt.contains("factors")) {
            throw ValidationError("expression term needs 'coeff' and 'factors'");
        }
        Term t;
        t.coeff = jt["coeff"].get<double>();
        for (const auto& [key, value] : jt["factors"].items()) {
            int party = 0;
            try {
                party = std::stoi(key) - 1;
            } catch (const std::exception&) {
                throw ValidationError("expression factor key '" + key +
                                      "' is not a party index");
            }
            t.factors[party] = setting_from_string(value.get<std::string>());
        }
        e.terms.push_back(std::move(t));
    }
    if (doc.contains("meta")) e.meta = meta_from_json(doc["meta"]);
    canonicalize(e);
    return e;
}

std::string expression_to_json(const BellExpression& e, int indent) {
    nlohmann::json doc;
    doc["n"] = e.n_parties;
    auto terms = nlohmann::json::array();
    for (const Term& t : e.terms) {
        nlohmann::json jt;
        jt["coeff"] = t.coeff;
        nlohmann::json factors = nlohmann::json::object();
        for (const auto& [party, setting] : t.factors) {
            factors[std::to_string(party + 1)] = to_string(setting);
        }
        jt["factors"] = std::move(factors);
        terms.push_back(std::move(jt));
    }
    doc["terms"] = std::move(terms);
    doc["meta"] = meta_to_json(e.meta);
    doc["meta"]["atomic_correlators"] = expand_atomic(e).size();
    return doc.dump(indent);
}

}  // namespace graphbell

#include "tiramisu/ilp.hpp"

namespace tiramisu::ilp {

int IlpModel::add_var(const std::string& name) {
    var_names.push_back(name);
    return static_cast<int>(var_names.size()) - 1;
}

void IlpModel::add(const std::string& name, std::vector<LinTerm> terms, Sense sense, int rhs) {
    constraints.push_back({name, std::move(terms), sense, rhs});
}

void IlpModel::add_and(const std::string& name, int x, const std::vector<LinTerm>& terms) {
    // Terms with coef 1 mean the literal itself, coef -1 its negation (1 - v).
    int negated = 0;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.coef > 0) {
            add(name + "_u" + std::to_string(i), {{1, x}, {-1, t.var}}, Sense::Le, 0);
        } else {
            // x <= 1 - v
            add(name + "_u" + std::to_string(i), {{1, x}, {1, t.var}}, Sense::Le, 1);
            ++negated;
        }
    }
    // x >= sum(literals) - (n - 1); negated literals contribute (1 - v).
    std::vector<LinTerm> lower{{1, x}};
    int rhs = -(static_cast<int>(terms.size()) - 1) + negated;
    for (const auto& t : terms) lower.push_back({t.coef > 0 ? -1 : 1, t.var});
    add(name + "_l", std::move(lower), Sense::Ge, rhs);
}

void IlpModel::add_or(const std::string& name, int x, const std::vector<int>& terms) {
    std::vector<LinTerm> upper{{1, x}};
    for (size_t i = 0; i < terms.size(); ++i) {
        add(name + "_l" + std::to_string(i), {{1, x}, {-1, terms[i]}}, Sense::Ge, 0);
        upper.push_back({-1, terms[i]});
    }
    add(name + "_u", std::move(upper), Sense::Le, 0);
}

void IlpModel::fix(const std::string& name, int x, int value) {
    add(name, {{1, x}}, Sense::Eq, value);
}

bool satisfies(const IlpModel& model, const std::vector<int>& assignment) {
    if (assignment.size() != model.num_vars()) return false;
    for (int v : assignment)
        if (v != 0 && v != 1) return false;
    for (const auto& c : model.constraints) {
        long long sum = 0;
        for (const auto& t : c.terms) sum += static_cast<long long>(t.coef) * assignment[t.var];
        switch (c.sense) {
            case Sense::Le:
                if (sum > c.rhs) return false;
                break;
            case Sense::Ge:
                if (sum < c.rhs) return false;
                break;
            case Sense::Eq:
                if (sum != c.rhs) return false;
                break;
        }
    }
    return true;
}

}  // namespace tiramisu::ilp

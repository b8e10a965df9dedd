#include <cctype>
#include <map>
#include <sstream>

#include "tiramisu/errors.hpp"
#include "tiramisu/ilp.hpp"

namespace tiramisu::ilp {

namespace {

void write_terms(std::ostream& os, const std::vector<LinTerm>& terms,
                 const std::vector<std::string>& names) {
    bool first = true;
    for (const auto& t : terms) {
        int c = t.coef;
        if (first) {
            if (c < 0) os << "- ";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        int mag = c < 0 ? -c : c;
        if (mag != 1) os << mag << " ";
        os << names[t.var];
        first = false;
    }
}

struct Tokenizer {
    std::vector<std::string> tokens;
    size_t pos = 0;

    explicit Tokenizer(const std::string& text) {
        std::string cur;
        bool comment = false;
        auto flush = [&] {
            if (!cur.empty()) tokens.push_back(cur);
            cur.clear();
        };
        for (char ch : text) {
            if (ch == '\\') comment = true;
            if (ch == '\n') {
                comment = false;
                flush();
                tokens.push_back("\n");
                continue;
            }
            if (comment) continue;
            if (std::isspace(static_cast<unsigned char>(ch))) {
                flush();
            } else if (ch == '+' || ch == '-') {
                flush();
                tokens.push_back(std::string(1, ch));
            } else if (ch == '<' || ch == '>' || ch == '=') {
                if (cur == "<" || cur == ">") {
                    cur += ch;
                    flush();
                } else {
                    flush();
                    cur = std::string(1, ch);
                    if (ch == '=') flush();
                }
            } else {
                cur += ch;
            }
        }
        flush();
    }

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string next() { return tokens[pos++]; }
    void skip_newlines() {
        while (!done() && peek() == "\n") ++pos;
    }
};

bool is_keyword(const std::string& t, const char* kw) {
    std::string a, b(kw);
    for (char c : t) a += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return a == b;
}

bool is_int(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

struct RawTerm {
    int coef;
    std::string var;
};

// Parses a +/- separated linear expression until a sense token, newline
// boundary followed by a section keyword, or end of section.
std::vector<RawTerm> parse_expr(Tokenizer& tz, const std::vector<const char*>& stops) {
    std::vector<RawTerm> terms;
    int sign = 1;
    bool have_coef = false;
    int coef = 1;
    while (!tz.done()) {
        const std::string& t = tz.peek();
        if (t == "\n") {
            tz.next();
            continue;
        }
        bool stop = t == "<=" || t == ">=" || t == "=";
        for (const char* s : stops)
            if (is_keyword(t, s)) stop = true;
        if (stop) break;
        if (t == "+") {
            sign = 1;
            tz.next();
        } else if (t == "-") {
            sign = -1;
            tz.next();
        } else if (is_int(t)) {
            coef = std::stoi(tz.next());
            have_coef = true;
        } else {
            std::string name = tz.next();
            terms.push_back({sign * (have_coef ? coef : 1), name});
            sign = 1;
            coef = 1;
            have_coef = false;
        }
    }
    return terms;
}

}  // namespace

std::string export_lp(const IlpModel& model) {
    std::ostringstream os;
    os << "\\ tiramisu ILP export\n";
    os << (model.maximize ? "Maximize" : "Minimize") << "\n";
    os << " obj: ";
    write_terms(os, model.objective, model.var_names);
    os << "\nSubject To\n";
    for (const auto& c : model.constraints) {
        os << " " << c.name << ": ";
        write_terms(os, c.terms, model.var_names);
        switch (c.sense) {
            case Sense::Le: os << " <= "; break;
            case Sense::Ge: os << " >= "; break;
            case Sense::Eq: os << " = "; break;
        }
        os << c.rhs << "\n";
    }
    os << "Binary\n";
    for (const auto& n : model.var_names) os << " " << n << "\n";
    os << "End\n";
    return os.str();
}

IlpModel parse_lp(const std::string& text) {
    Tokenizer tz(text);
    IlpModel model;
    tz.skip_newlines();
    if (tz.done()) throw SchemaError("empty LP document");
    std::string head = tz.next();
    if (is_keyword(head, "maximize") || is_keyword(head, "max"))
        model.maximize = true;
    else if (is_keyword(head, "minimize") || is_keyword(head, "min"))
        model.maximize = false;
    else
        throw SchemaError("LP: expected Minimize/Maximize, got " + head);

    struct RawConstraint {
        std::string name;
        std::vector<RawTerm> terms;
        Sense sense;
        int rhs;
    };
    std::vector<RawTerm> raw_obj;
    std::vector<RawConstraint> raw_cons;

    tz.skip_newlines();
    // Optional objective label.
    if (!tz.done() && !is_keyword(tz.peek(), "subject")) {
        std::string maybe = tz.peek();
        if (!maybe.empty() && maybe.back() == ':') tz.next();
    }
    raw_obj = parse_expr(tz, {"subject"});
    if (tz.done() || !is_keyword(tz.next(), "subject"))
        throw SchemaError("LP: missing Subject To");
    if (!tz.done() && is_keyword(tz.peek(), "to")) tz.next();

    while (true) {
        tz.skip_newlines();
        if (tz.done()) throw SchemaError("LP: unterminated constraint section");
        if (is_keyword(tz.peek(), "binary") || is_keyword(tz.peek(), "bounds") ||
            is_keyword(tz.peek(), "end"))
            break;
        RawConstraint rc;
        std::string first = tz.peek();
        if (!first.empty() && first.back() == ':') {
            rc.name = first.substr(0, first.size() - 1);
            tz.next();
        } else {
            rc.name = "c" + std::to_string(raw_cons.size());
        }
        rc.terms = parse_expr(tz, {"binary", "bounds", "end"});
        if (tz.done()) throw SchemaError("LP: constraint missing sense");
        std::string sense = tz.next();
        if (sense == "<=")
            rc.sense = Sense::Le;
        else if (sense == ">=")
            rc.sense = Sense::Ge;
        else if (sense == "=")
            rc.sense = Sense::Eq;
        else
            throw SchemaError("LP: bad sense " + sense);
        int sign = 1;
        tz.skip_newlines();
        if (!tz.done() && (tz.peek() == "-" || tz.peek() == "+"))
            sign = tz.next() == "-" ? -1 : 1;
        if (tz.done() || !is_int(tz.peek())) throw SchemaError("LP: bad rhs");
        rc.rhs = sign * std::stoi(tz.next());
        raw_cons.push_back(std::move(rc));
    }

    if (is_keyword(tz.peek(), "bounds")) {  // skip a Bounds section if present
        tz.next();
        while (!tz.done() && !is_keyword(tz.peek(), "binary") && !is_keyword(tz.peek(), "end"))
            tz.next();
    }
    std::map<std::string, int> index;
    if (!tz.done() && is_keyword(tz.peek(), "binary")) {
        tz.next();
        while (!tz.done() && !is_keyword(tz.peek(), "end")) {
            if (tz.peek() == "\n") {
                tz.next();
                continue;
            }
            std::string name = tz.next();
            index.emplace(name, model.add_var(name));
        }
    }
    auto materialize = [&](const std::vector<RawTerm>& raw) {
        std::vector<LinTerm> out;
        for (const auto& t : raw) {
            auto it = index.find(t.var);
            if (it == index.end()) throw SchemaError("LP: variable not declared: " + t.var);
            out.push_back({t.coef, it->second});
        }
        return out;
    };
    model.objective = materialize(raw_obj);
    for (auto& rc : raw_cons)
        model.constraints.push_back({rc.name, materialize(rc.terms), rc.sense, rc.rhs});
    return model;
}

}  // namespace tiramisu::ilp

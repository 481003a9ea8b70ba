#include "wfresil/policy_dsl.hpp"

#include <charconv>

#include "wfresil/error.hpp"

namespace wfresil {

namespace {

struct Token {
    enum Kind { Ident, Punct } kind;
    std::string_view text;
    std::size_t column; // 1-based
};

bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

class Line {
public:
    Line(std::string_view text, std::size_t number) : number_(number), end_column_(text.size() + 1) {
        std::size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (c == '#') break;
            if (c == ' ' || c == '\t' || c == '\r') {
                ++i;
            } else if (ident_char(c)) {
                std::size_t j = i;
                while (j < text.size() && ident_char(text[j])) ++j;
                tokens_.push_back({Token::Ident, text.substr(i, j - i), i + 1});
                i = j;
            } else if (c == ':' || c == '<' || c == ';' || c == '{' || c == '}') {
                tokens_.push_back({Token::Punct, text.substr(i, 1), i + 1});
                ++i;
            } else {
                throw SyntaxError(number_, i + 1, "unexpected character");
            }
        }
    }

    [[nodiscard]] bool empty() const { return tokens_.empty(); }
    [[nodiscard]] bool done() const { return pos_ == tokens_.size(); }
    [[nodiscard]] bool peek_punct(char c) const {
        return !done() && tokens_[pos_].kind == Token::Punct && tokens_[pos_].text[0] == c;
    }
    [[nodiscard]] bool peek_ident() const { return !done() && tokens_[pos_].kind == Token::Ident; }

    [[noreturn]] void fail(const std::string& message) const {
        std::size_t col = done() ? end_column_ : tokens_[pos_].column;
        throw SyntaxError(number_, col, message);
    }

    std::string ident(std::string_view what) {
        if (!peek_ident()) fail("expected " + std::string(what));
        return std::string(tokens_[pos_++].text);
    }
    void punct(char c) {
        if (!peek_punct(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool accept(char c) {
        if (!peek_punct(c)) return false;
        ++pos_;
        return true;
    }
    void finish() {
        if (!done()) fail("unexpected trailing input");
    }
    [[nodiscard]] std::size_t number() const { return number_; }
    [[nodiscard]] std::size_t column() const { return done() ? end_column_ : tokens_[pos_].column; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t number_;
    std::size_t end_column_;
};

std::vector<std::string> ident_list(Line& line, std::string_view what) {
    std::vector<std::string> out;
    while (line.peek_ident()) out.push_back(line.ident(what));
    return out;
}

std::vector<std::string> braced_steps(Line& line) {
    line.punct('{');
    auto steps = ident_list(line, "step");
    if (steps.empty()) line.fail("expected step");
    line.punct('}');
    return steps;
}

// `x y; x y; ...`, possibly empty when allow_empty.
template <class F>
void tuple_list(Line& line, bool allow_empty, F&& one) {
    if (line.done() && allow_empty) return;
    do {
        one();
    } while (line.accept(';'));
    line.finish();
}

draft::Constraint parse_constraint(Line& line) {
    const std::size_t kind_column = line.column();
    auto kind = line.ident("constraint kind");
    if (kind == "sod" || kind == "bod") {
        auto a = line.ident("step");
        auto b = line.ident("step");
        line.finish();
        if (kind == "sod") return draft::SeparationOfDuty{a, b};
        return draft::BindingOfDuty{a, b};
    }
    if (kind == "entail") {
        draft::Entailment e;
        e.relation = line.ident("relation name");
        e.lhs = braced_steps(line);
        e.rhs = braced_steps(line);
        line.finish();
        return e;
    }
    if (kind == "allow") {
        draft::Extensional e;
        e.scope = braced_steps(line);
        tuple_list(line, true, [&] {
            auto row = ident_list(line, "user");
            if (row.empty()) line.fail("expected user");
            e.allowed.push_back(std::move(row));
        });
        return e;
    }
    throw SyntaxError(line.number(), kind_column, "unknown constraint kind '" + kind + "'");
}

} // namespace

PolicyDraft parse_policy_draft(std::string_view text, std::optional<Budget>* budget_out) {
    PolicyDraft d;
    std::optional<Budget> budget;
    bool seen_steps = false;
    bool seen_users = false;

    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        ++number;
        Line line(text.substr(start, nl - start), number);
        start = nl + 1;
        if (line.empty()) continue;

        std::size_t keyword_column = line.column();
        auto keyword = line.ident("clause keyword");
        if (keyword == "relation") {
            draft::Relation r;
            r.name = line.ident("relation name");
            line.punct(':');
            tuple_list(line, true, [&] {
                auto a = line.ident("user");
                auto b = line.ident("user");
                r.pairs.emplace_back(std::move(a), std::move(b));
            });
            d.relations.push_back(std::move(r));
            continue;
        }
        line.punct(':');
        if (keyword == "steps" || keyword == "users") {
            bool& seen = keyword == "steps" ? seen_steps : seen_users;
            if (seen) throw SyntaxError(number, keyword_column, "repeated '" + keyword + "' clause");
            seen = true;
            auto names = ident_list(line, "name");
            line.finish();
            (keyword == "steps" ? d.steps : d.users) = std::move(names);
        } else if (keyword == "order") {
            auto a = line.ident("step");
            line.punct('<');
            auto b = line.ident("step");
            line.finish();
            d.order.emplace_back(std::move(a), std::move(b));
        } else if (keyword == "auth") {
            tuple_list(line, false, [&] {
                auto s = line.ident("step");
                auto u = line.ident("user");
                d.auth.emplace_back(std::move(s), std::move(u));
            });
        } else if (keyword == "constraint") {
            d.constraints.push_back(parse_constraint(line));
        } else if (keyword == "budget") {
            if (budget) throw SyntaxError(number, keyword_column, "repeated 'budget' clause");
            std::size_t col = line.column();
            auto digits = line.ident("budget");
            std::size_t t = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
            if (ec != std::errc() || ptr != digits.data() + digits.size())
                throw SyntaxError(number, col, "budget must be a non-negative integer");
            line.finish();
            budget = Budget{t};
        } else {
            throw SyntaxError(number, keyword_column, "unknown clause '" + keyword + "'");
        }
    }
    if (budget_out) *budget_out = budget;
    return d;
}

PolicyDocument parse_policy(std::string_view text) {
    PolicyDocument doc;
    auto d = parse_policy_draft(text, &doc.budget);
    doc.policy = validate_policy(d);
    return doc;
}

std::string serialize_policy(const WorkflowPolicy& policy, std::optional<Budget> budget) {
    PolicyDraft d = policy.to_draft();
    std::string out;
    auto words = [&](const std::vector<std::string>& v) {
        for (const auto& w : v) out += " " + w;
    };
    out += "steps:";
    words(d.steps);
    out += "\n";
    for (const auto& [a, b] : d.order) out += "order: " + a + " < " + b + "\n";
    out += "users:";
    words(d.users);
    out += "\n";
    if (!d.auth.empty()) {
        out += "auth:";
        for (std::size_t i = 0; i < d.auth.size(); ++i)
            out += (i == 0 ? " " : "; ") + d.auth[i].first + " " + d.auth[i].second;
        out += "\n";
    }
    for (const auto& r : d.relations) {
        out += "relation " + r.name + ":";
        for (std::size_t i = 0; i < r.pairs.size(); ++i)
            out += (i == 0 ? " " : "; ") + r.pairs[i].first + " " + r.pairs[i].second;
        out += "\n";
    }
    for (const auto& c : policy.constraints()) out += "constraint: " + describe(policy, c) + "\n";
    if (budget) out += "budget: " + std::to_string(budget->t) + "\n";
    return out;
}

std::string serialize_policy(const PolicyDocument& doc) { return serialize_policy(doc.policy, doc.budget); }

} // namespace wfresil

#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cs4kit {

enum class Conn : unsigned char { Var, Falsum, And, Or, Implies, Dia, Box };

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t position, const char* unit = "position")
        : std::runtime_error(what + " (at " + unit + " " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

// Immutable formula over the connectives false, &, |, ->, <>, [].
// Negation and <-> exist only as input sugar: ~a is stored as a -> false,
// a <-> b as (a -> b) & (b -> a).
class Formula {
public:
    Formula() = default;  // empty handle; only valid as a target of assignment

    static Formula var(std::string name) {
        if (!valid_ident(name) || name == "false")
            throw std::invalid_argument("invalid variable name: '" + name + "'");
        return make(Conn::Var, std::move(name), nullptr, nullptr);
    }
    static Formula falsum() { return make(Conn::Falsum, {}, nullptr, nullptr); }
    static Formula conj(Formula a, Formula b) {
        return make(Conn::And, {}, a.node_, b.node_);
    }
    static Formula disj(Formula a, Formula b) {
        return make(Conn::Or, {}, a.node_, b.node_);
    }
    static Formula implies(Formula a, Formula b) {
        return make(Conn::Implies, {}, a.node_, b.node_);
    }
    static Formula dia(Formula a) { return make(Conn::Dia, {}, a.node_, nullptr); }
    static Formula box(Formula a) { return make(Conn::Box, {}, a.node_, nullptr); }
    static Formula neg(Formula a) { return implies(a, falsum()); }
    static Formula iff(Formula a, Formula b) {
        return conj(implies(a, b), implies(b, a));
    }

    Conn kind() const { return node_->kind; }
    const std::string& var_name() const { return node_->name; }
    Formula lhs() const { return Formula(node_->a); }
    Formula rhs() const { return Formula(node_->b); }
    Formula body() const { return Formula(node_->a); }

    bool is_binary() const {
        Conn k = kind();
        return k == Conn::And || k == Conn::Or || k == Conn::Implies;
    }
    bool is_unary() const { return kind() == Conn::Dia || kind() == Conn::Box; }

    std::size_t hash() const { return node_->hash; }
    int node_count() const { return node_->nodes; }

    bool operator==(const Formula& o) const {
        if (node_ == o.node_) return true;
        return node_ && o.node_ && equal(*node_, *o.node_);
    }

private:
    struct Node {
        Conn kind;
        std::string name;
        std::shared_ptr<const Node> a, b;
        std::size_t hash;
        int nodes;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula make(Conn k, std::string name, std::shared_ptr<const Node> a,
                        std::shared_ptr<const Node> b) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->name = std::move(name);
        n->a = std::move(a);
        n->b = std::move(b);
        std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ull;
        h ^= std::hash<std::string>{}(n->name) + (h << 6);
        if (n->a) h = h * 31 + n->a->hash;
        if (n->b) h = h * 37 + n->b->hash;
        n->hash = h;
        n->nodes = 1 + (n->a ? n->a->nodes : 0) + (n->b ? n->b->nodes : 0);
        return Formula(std::move(n));
    }

    static bool equal(const Node& x, const Node& y) {
        if (x.kind != y.kind || x.hash != y.hash || x.nodes != y.nodes) return false;
        if (x.kind == Conn::Var) return x.name == y.name;
        if (x.a && (x.a != y.a) && !equal(*x.a, *y.a)) return false;
        if (x.b && (x.b != y.b) && !equal(*x.b, *y.b)) return false;
        return true;
    }

    static bool valid_ident(const std::string& s) {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        return true;
    }

    std::shared_ptr<const Node> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

namespace detail {

// Tokens: ident, "false", & | -> <-> ~ <> [] ( ).
class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : s_(text) {}

    Formula parse() {
        Formula f = parse_iff();
        skip_ws();
        if (i_ < s_.size()) throw ParseError("unexpected trailing input", i_);
        return f;
    }

private:
    Formula parse_iff() {
        Formula l = parse_imp();
        while (eat("<->")) l = Formula::iff(l, parse_imp());
        return l;
    }

    Formula parse_imp() {
        Formula l = parse_or();
        if (eat("->")) return Formula::implies(l, parse_imp());
        return l;
    }

    Formula parse_or() {
        Formula l = parse_and();
        while (eat("|")) l = Formula::disj(l, parse_and());
        return l;
    }

    Formula parse_and() {
        Formula l = parse_unary();
        while (eat("&")) l = Formula::conj(l, parse_unary());
        return l;
    }

    Formula parse_unary() {
        if (eat("~")) return Formula::neg(parse_unary());
        if (eat("<>")) return Formula::dia(parse_unary());
        if (eat("[]")) return Formula::box(parse_unary());
        return parse_atom();
    }

    Formula parse_atom() {
        skip_ws();
        if (i_ >= s_.size()) throw ParseError("expected a formula", i_);
        if (eat("(")) {
            Formula f = parse_iff();
            if (!eat(")")) throw ParseError("expected ')'", i_);
            return f;
        }
        if (std::isalpha(static_cast<unsigned char>(s_[i_]))) {
            std::size_t start = i_;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            std::string name = s_.substr(start, i_ - start);
            if (name == "false") return Formula::falsum();
            return Formula::var(std::move(name));
        }
        throw ParseError(std::string("unexpected character '") + s_[i_] + "'", i_);
    }

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    // Consumes tok if it is next; "<>" must not eat the prefix of "<->",
    // and "-" alone is never a token, so match longest alternatives first.
    bool eat(const char* tok) {
        skip_ws();
        std::size_t len = std::char_traits<char>::length(tok);
        if (s_.compare(i_, len, tok) != 0) return false;
        if (tok[0] == '<' && len == 2 && s_.compare(i_, 3, "<->") == 0) return false;
        i_ += len;
        return true;
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline Formula parse(const std::string& text) { return detail::FormulaParser(text).parse(); }

// Minimal-parentheses rendering; parse(render(f)) == f, no re-sugaring.
inline std::string render(const Formula& f) {
    // precedence: atoms 5, unary 4, & 3, | 2, -> 1
    struct R {
        static void go(const Formula& f, int min_prec, std::string& out) {
            int p = prec(f);
            bool paren = p < min_prec;
            if (paren) out += '(';
            switch (f.kind()) {
                case Conn::Var: out += f.var_name(); break;
                case Conn::Falsum: out += "false"; break;
                case Conn::And:
                    go(f.lhs(), 3, out);
                    out += " & ";
                    go(f.rhs(), 4, out);
                    break;
                case Conn::Or:
                    go(f.lhs(), 2, out);
                    out += " | ";
                    go(f.rhs(), 3, out);
                    break;
                case Conn::Implies:
                    go(f.lhs(), 2, out);
                    out += " -> ";
                    go(f.rhs(), 1, out);
                    break;
                case Conn::Dia:
                    out += "<>";
                    go(f.body(), 4, out);
                    break;
                case Conn::Box:
                    out += "[]";
                    go(f.body(), 4, out);
                    break;
            }
            if (paren) out += ')';
        }
        static int prec(const Formula& f) {
            switch (f.kind()) {
                case Conn::Var:
                case Conn::Falsum: return 5;
                case Conn::Dia:
                case Conn::Box: return 4;
                case Conn::And: return 3;
                case Conn::Or: return 2;
                case Conn::Implies: return 1;
            }
            return 5;
        }
    };
    std::string out;
    R::go(f, 0, out);
    return out;
}

// Subformula-closed set in first-seen postorder: children precede parents.
class SubformulaSet {
public:
    SubformulaSet() = default;

    static SubformulaSet closure(std::span<const Formula> roots) {
        SubformulaSet s;
        for (const Formula& f : roots) s.insert(f);
        return s;
    }
    static SubformulaSet closure(const Formula& root) {
        return closure(std::span<const Formula>(&root, 1));
    }

    int size() const { return static_cast<int>(items_.size()); }
    const Formula& at(int i) const { return items_[i]; }

    std::optional<int> index_of(const Formula& f) const {
        auto it = index_.find(f);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Formula& f) const { return index_.count(f) > 0; }

    const std::vector<Formula>& items() const { return items_; }

private:
    void insert(const Formula& f) {
        if (index_.count(f)) return;
        if (f.is_binary()) {
            insert(f.lhs());
            insert(f.rhs());
        } else if (f.is_unary()) {
            insert(f.body());
        }
        index_.emplace(f, static_cast<int>(items_.size()));
        items_.push_back(f);
    }

    std::vector<Formula> items_;
    std::unordered_map<Formula, int, FormulaHash> index_;
};

// Sorted, deduplicated variable names occurring in f.
inline std::vector<std::string> variables_of(const Formula& f) {
    std::vector<std::string> out;
    SubformulaSet s = SubformulaSet::closure(f);
    for (int i = 0; i < s.size(); ++i)
        if (s.at(i).kind() == Conn::Var) out.push_back(s.at(i).var_name());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace cs4kit

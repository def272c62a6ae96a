#include "volpic/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace volpic {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen,
                 comma, assign, dotdot, end };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text) {
        out.push_back({k, std::move(text), line, col});
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        int start_col = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                num += src[i++];
                ++col;
            }
            // A '.' belongs to the number unless it starts the ".." range
            // operator.
            if (i + 1 < src.size() && src[i] == '.' && src[i + 1] != '.') {
                num += src[i++];
                ++col;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    num += src[i++];
                    ++col;
                }
            }
            out.push_back({Tok::number, num, line, start_col});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                id += src[i++];
                ++col;
            }
            out.push_back({Tok::ident, id, line, start_col});
            continue;
        }
        if (c == '.' && i + 1 < src.size() && src[i + 1] == '.') {
            out.push_back({Tok::dotdot, "..", line, start_col});
            i += 2;
            col += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::plus; break;
            case '-': k = Tok::minus; break;
            case '*': k = Tok::star; break;
            case '/': k = Tok::slash; break;
            case '^': k = Tok::caret; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case ',': k = Tok::comma; break;
            case '=': k = Tok::assign; break;
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", line, col);
        }
        push(k, std::string(1, c));
        ++i;
        ++col;
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

std::optional<TransFn> func_by_name(const std::string& name) {
    if (name == "sin") return TransFn::sin;
    if (name == "cos") return TransFn::cos;
    if (name == "exp") return TransFn::exp;
    if (name == "ln") return TransFn::ln;
    if (name == "tan") return TransFn::tan;
    if (name == "arccot") return TransFn::arccot;
    if (name == "cot") return TransFn::cot;
    return std::nullopt;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens, bool allow_unknown = false)
        : toks_(std::move(tokens)) {
        (void)allow_unknown;
    }

    Expr parse_equation_rhs() {
        expect_ident("y");
        expect(Tok::lparen, "(");
        expect_ident("t");
        expect(Tok::rparen, ")");
        expect(Tok::assign, "=");
        Expr rhs = parse_expr();
        expect(Tok::end, "end of input");
        return rhs;
    }

    Expr parse_bare_expr() {
        Expr e = parse_expr();
        expect(Tok::end, "end of input");
        return e;
    }

    const std::optional<Coefficient>& lower_limit() const { return lower_; }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int integral_depth_ = 0;
    int integral_count_ = 0;
    std::optional<Coefficient> lower_;

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, peek().line, peek().col);
    }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++pos_;
    }

    void expect_ident(const std::string& name) {
        if (peek().kind != Tok::ident || peek().text != name)
            fail("expected '" + name + "'");
        ++pos_;
    }

    Expr parse_expr() {
        bool lead_neg = false;
        if (peek().kind == Tok::minus) {
            ++pos_;
            lead_neg = true;
        }
        Expr e = parse_term();
        if (lead_neg) e = expr::neg(e);
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            bool add = take().kind == Tok::plus;
            Expr rhs = parse_term();
            e = add ? expr::add(e, rhs) : expr::sub(e, rhs);
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            bool mul = take().kind == Tok::star;
            Expr rhs = parse_factor();
            e = mul ? expr::mul(e, rhs) : expr::div(e, rhs);
        }
        return e;
    }

    Expr parse_factor() {
        Expr base = parse_base();
        if (peek().kind == Tok::caret) {
            ++pos_;
            if (peek().kind != Tok::number || peek().text.find('.') != std::string::npos)
                fail("expected an integer exponent");
            long e = std::stol(take().text);
            if (e == 0) return expr::constant(1L);
            base = expr::int_pow(base, static_cast<int>(e));
        }
        return base;
    }

    Expr parse_base() {
        const Token& t = peek();
        if (t.kind == Tok::number)
            return expr::constant(Coefficient::from_string(take().text));
        if (t.kind == Tok::lparen) {
            ++pos_;
            Expr e = parse_expr();
            expect(Tok::rparen, ")");
            return e;
        }
        if (t.kind != Tok::ident) fail("expected a value");
        if (t.text == "t") {
            ++pos_;
            return expr::var("t");
        }
        if (t.text == "s") {
            if (integral_depth_ == 0) fail("'s' may appear only inside the integral");
            ++pos_;
            return expr::var("s");
        }
        if (t.text == "y") {
            if (integral_depth_ == 0)
                fail("the unknown may appear only inside the integral, as y(s)");
            ++pos_;
            expect(Tok::lparen, "(");
            expect_ident("s");
            expect(Tok::rparen, ")");
            return expr::var("y");
        }
        if (t.text == "int") return parse_integral();
        if (auto fn = func_by_name(t.text)) {
            ++pos_;
            expect(Tok::lparen, "(");
            Expr arg = parse_expr();
            expect(Tok::rparen, ")");
            return expr::apply(*fn, arg);
        }
        fail("unknown function or variable '" + t.text + "'");
    }

    Expr parse_integral() {
        if (integral_depth_ > 0) fail("integral nested inside an integral");
        if (integral_count_ >= 1) fail("non-conforming: multiple integral terms");
        ++integral_count_;
        ++pos_;  // int
        expect(Tok::lparen, "(");
        ++integral_depth_;
        Expr integrand = parse_expr();
        --integral_depth_;
        expect(Tok::comma, ",");
        expect_ident("s");
        expect(Tok::assign, "=");
        bool neg_lower = false;
        if (peek().kind == Tok::minus) {
            ++pos_;
            neg_lower = true;
        }
        if (peek().kind != Tok::number) fail("expected the numeric lower limit");
        Coefficient lower = Coefficient::from_string(take().text);
        if (neg_lower) lower = -lower;
        expect(Tok::dotdot, "..");
        expect_ident("t");
        expect(Tok::rparen, ")");
        lower_ = lower;
        return expr::integral(integrand, lower);
    }
};

bool mentions_kernel_vars(const Expr& e) { return mentions_var(e, {"s", "y"}); }
bool mentions_t(const Expr& e) { return mentions_var(e, {"t"}); }
bool contains_integral(const Expr& e) {
    if (!e) return false;
    if (e->kind == ExprKind::integral) return true;
    return contains_integral(e->a) || contains_integral(e->b);
}

struct SignedTerm {
    int sign;
    Expr term;
};

void flatten_sum(const Expr& e, int sign, std::vector<SignedTerm>& out) {
    switch (e->kind) {
        case ExprKind::add:
            flatten_sum(e->a, sign, out);
            flatten_sum(e->b, sign, out);
            return;
        case ExprKind::sub:
            flatten_sum(e->a, sign, out);
            flatten_sum(e->b, -sign, out);
            return;
        case ExprKind::neg:
            flatten_sum(e->a, -sign, out);
            return;
        default:
            out.push_back({sign, e});
    }
}

struct Factor {
    Expr e;
    bool reciprocal;
};

void flatten_product(const Expr& e, bool reciprocal, int& sign, std::vector<Factor>& out) {
    switch (e->kind) {
        case ExprKind::mul:
            flatten_product(e->a, reciprocal, sign, out);
            flatten_product(e->b, reciprocal, sign, out);
            return;
        case ExprKind::div:
            flatten_product(e->a, reciprocal, sign, out);
            flatten_product(e->b, !reciprocal, sign, out);
            return;
        case ExprKind::neg:
            sign = -sign;
            flatten_product(e->a, reciprocal, sign, out);
            return;
        default:
            out.push_back({e, reciprocal});
    }
}

Expr rebuild_product(const std::vector<Factor>& factors) {
    Expr num, den;
    for (const auto& f : factors) {
        Expr& slot = f.reciprocal ? den : num;
        slot = slot ? expr::mul(slot, f.e) : f.e;
    }
    if (!num) num = expr::constant(1L);
    return den ? expr::div(num, den) : num;
}

// Fully distributes sums inside the (non-reciprocal) product structure of
// the integrand; reciprocal factors are kept whole.
void expand_products(const Expr& e, int sign, std::vector<Factor> prefix,
                     std::vector<std::pair<int, std::vector<Factor>>>& out) {
    switch (e->kind) {
        case ExprKind::add:
            expand_products(e->a, sign, prefix, out);
            expand_products(e->b, sign, prefix, out);
            return;
        case ExprKind::sub:
            expand_products(e->a, sign, prefix, out);
            expand_products(e->b, -sign, prefix, out);
            return;
        case ExprKind::neg:
            expand_products(e->a, -sign, std::move(prefix), out);
            return;
        case ExprKind::mul: {
            // Distribute the right factor over every expansion of the left.
            std::vector<std::pair<int, std::vector<Factor>>> left;
            expand_products(e->a, 1, {}, left);
            for (auto& [lsign, lfactors] : left) {
                std::vector<Factor> combined = prefix;
                combined.insert(combined.end(), lfactors.begin(), lfactors.end());
                expand_products(e->b, sign * lsign, std::move(combined), out);
            }
            return;
        }
        case ExprKind::div: {
            std::vector<std::pair<int, std::vector<Factor>>> num;
            expand_products(e->a, sign, std::move(prefix), num);
            for (auto& [nsign, nfactors] : num) {
                nfactors.push_back({e->b, true});
                out.emplace_back(nsign, std::move(nfactors));
            }
            return;
        }
        default:
            prefix.push_back({e, false});
            out.emplace_back(sign, std::move(prefix));
    }
}

[[noreturn]] void separability_error(const Expr& offending) {
    throw parse_error("kernel is not separable: 't' is entangled with 's'/'y' in '" +
                          to_string(offending) + "'",
                      0, 0);
}

}  // namespace

Equation split_kernel(const Expr& rhs, const std::string& label) {
    std::vector<SignedTerm> terms;
    flatten_sum(rhs, 1, terms);

    Expr phi;
    Coefficient lower(0L);
    std::vector<KernelTerm> kernel_terms;

    auto add_to = [](Expr& acc, int sign, const Expr& e) {
        Expr signed_e = sign < 0 ? expr::neg(e) : e;
        acc = acc ? (sign < 0 ? expr::sub(acc, e) : expr::add(acc, e)) : signed_e;
    };

    for (const auto& [sign, term] : terms) {
        if (!contains_integral(term)) {
            if (mentions_kernel_vars(term))
                throw parse_error("'s'/'y(s)' outside the integral in '" + to_string(term) + "'",
                                  0, 0);
            add_to(phi, sign, term);
            continue;
        }
        // The integral term: factor out the written t-only coefficient.
        int fsign = sign;
        std::vector<Factor> factors;
        flatten_product(term, false, fsign, factors);
        Expr integrand;
        std::vector<Factor> outer;
        for (const auto& f : factors) {
            if (f.e->kind == ExprKind::integral) {
                if (f.reciprocal)
                    throw parse_error("integral in a non-factorable position (reciprocal)", 0, 0);
                if (integrand) throw parse_error("non-conforming: multiple integral terms", 0, 0);
                integrand = f.e->a;
                lower = f.e->lower;
            } else if (contains_integral(f.e)) {
                throw parse_error("integral in a non-factorable position in '" +
                                      to_string(f.e) + "'",
                                  0, 0);
            } else {
                if (mentions_kernel_vars(f.e))
                    throw parse_error("'s'/'y(s)' outside the integral in '" +
                                          to_string(f.e) + "'",
                                      0, 0);
                outer.push_back(f);
            }
        }

        // Expand the integrand and move t-only factors (constants included)
        // of each summand into f.
        std::vector<std::pair<int, std::vector<Factor>>> summands;
        expand_products(integrand, 1, {}, summands);
        for (auto& [ssign, sfactors] : summands) {
            std::vector<Factor> f_parts = outer;
            std::vector<Factor> k_parts;
            for (const auto& f : sfactors) {
                bool kernelish = mentions_kernel_vars(f.e);
                bool tish = mentions_t(f.e);
                if (kernelish && tish) separability_error(f.e);
                if (kernelish)
                    k_parts.push_back(f);
                else
                    f_parts.push_back(f);
            }
            Expr f_expr = rebuild_product(f_parts);
            Expr k_expr = rebuild_product(k_parts);
            if (fsign * ssign < 0) k_expr = expr::neg(k_expr);
            kernel_terms.push_back({constant_fold(f_expr), constant_fold(k_expr)});
        }
    }

    // Merge kernel terms that share the same factored coefficient.
    std::vector<KernelTerm> merged;
    for (auto& kt : kernel_terms) {
        bool joined = false;
        for (auto& m : merged) {
            if (expr_equal(m.f, kt.f)) {
                m.kernel = constant_fold(expr::add(m.kernel, kt.kernel));
                joined = true;
                break;
            }
        }
        if (!joined) merged.push_back(std::move(kt));
    }

    Equation eq;
    eq.phi = phi ? constant_fold(phi) : expr::constant(0L);
    eq.terms = std::move(merged);
    eq.lower = lower;
    eq.label = label;
    return eq;
}

Equation parse(const std::string& text, const std::string& label) {
    Parser p(tokenize(text));
    Expr rhs = p.parse_equation_rhs();
    rhs = constant_fold(rhs);
    rhs = rewrite_trig_difference(rhs);
    Equation eq = split_kernel(rhs, label);
    if (p.lower_limit()) eq.lower = *p.lower_limit();
    return eq;
}

Expr parse_reference(const std::string& text) {
    Parser p(tokenize(text));
    Expr e = constant_fold(p.parse_bare_expr());
    if (contains_integral(e))
        throw parse_error("a reference expression cannot contain an integral", 0, 0);
    return e;
}

EquationFile parse_vie(const std::string& contents, const std::string& fallback_label) {
    EquationFile out;
    std::string label = fallback_label;
    std::string equation_text;
    std::istringstream in(contents);
    std::string line;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        std::string stripped = line;
        if (auto hash = stripped.find('#'); hash != std::string::npos)
            stripped = stripped.substr(0, hash);
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        auto colon = stripped.find(':');
        if (colon != std::string::npos) {
            std::string key = trim(stripped.substr(0, colon));
            std::string value = trim(stripped.substr(colon + 1));
            if (key == "order" || key == "iters" || key == "precision") {
                int v = 0;
                try {
                    v = std::stoi(value);
                } catch (const std::exception&) {
                    throw parse_error("bad integer in header '" + key + ": " + value + "'", 0, 0);
                }
                if (key == "order")
                    out.order = v;
                else if (key == "iters")
                    out.iters = v;
                else
                    out.precision = v;
                continue;
            }
            if (key == "label") {
                label = value;
                continue;
            }
        }
        equation_text += stripped + " ";
    }
    if (trim(equation_text).empty()) throw parse_error("no equation found", 0, 0);
    out.equation = parse(equation_text, label);
    return out;
}

EquationFile load_vie(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string label = path;
    if (auto slash = label.find_last_of('/'); slash != std::string::npos)
        label = label.substr(slash + 1);
    if (label.size() > 4 && label.substr(label.size() - 4) == ".vie")
        label = label.substr(0, label.size() - 4);
    return parse_vie(buf.str(), label);
}

}  // namespace volpic

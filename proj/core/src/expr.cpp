#include "thermograph/expr.hpp"

#include "thermograph/errors.hpp"
#include "thermograph/notation.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace thermograph {

Expr Expr::number(double v) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->value = v;
    e.node_ = std::move(n);
    return e;
}

Expr Expr::param(std::string name) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Param;
    n->name = std::move(name);
    e.node_ = std::move(n);
    return e;
}

Expr Expr::count(ContactMap pattern) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Count;
    n->pattern = std::move(pattern);
    e.node_ = std::move(n);
    return e;
}

Expr Expr::unary(Kind kind, Expr arg) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args.push_back(std::move(arg));
    e.node_ = std::move(n);
    return e;
}

Expr Expr::binary(Kind kind, Expr a, Expr b) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args.push_back(std::move(a));
    n->args.push_back(std::move(b));
    e.node_ = std::move(n);
    return e;
}

double Expr::eval(const std::map<std::string, double>& params, const Counter& counter) const {
    switch (kind()) {
    case Kind::Number: return value();
    case Kind::Param: {
        auto it = params.find(name());
        if (it == params.end()) throw Error("E007", "undefined parameter '" + name() + "'");
        return it->second;
    }
    case Kind::Count:
        if (!counter) throw InvalidArgument("pattern count used where no mixture is available");
        return counter(pattern());
    case Kind::Neg: return -lhs().eval(params, counter);
    case Kind::Exp: return std::exp(lhs().eval(params, counter));
    case Kind::Log: return std::log(lhs().eval(params, counter));
    case Kind::Add: return lhs().eval(params, counter) + rhs().eval(params, counter);
    case Kind::Sub: return lhs().eval(params, counter) - rhs().eval(params, counter);
    case Kind::Mul: return lhs().eval(params, counter) * rhs().eval(params, counter);
    case Kind::Div: return lhs().eval(params, counter) / rhs().eval(params, counter);
    }
    return 0.0;
}

bool Expr::usesCounts() const {
    if (kind() == Kind::Count) return true;
    for (const auto& a : node_->args)
        if (a.usesCounts()) return true;
    return false;
}

void Expr::collectParams(std::set<std::string>& out) const {
    if (kind() == Kind::Param) out.insert(name());
    for (const auto& a : node_->args) a.collectParams(out);
}

std::string formatNumber(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string Expr::print() const {
    auto wrap = [](const Expr& e) {
        std::string s = e.print();
        switch (e.kind()) {
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: return "(" + s + ")";
        default: return s;
        }
    };
    switch (kind()) {
    case Kind::Number: return formatNumber(value());
    case Kind::Param: return "'" + name() + "'";
    case Kind::Count: return "|" + formatPattern(pattern()) + "|";
    case Kind::Neg: return lhs().kind() == Kind::Number ? "-(" + lhs().print() + ")" : "-" + wrap(lhs());
    case Kind::Exp: return "[exp] " + wrap(lhs());
    case Kind::Log: return "[log] " + wrap(lhs());
    case Kind::Add: return wrap(lhs()) + " + " + wrap(rhs());
    case Kind::Sub: return wrap(lhs()) + " - " + wrap(rhs());
    case Kind::Mul: return wrap(lhs()) + " * " + wrap(rhs());
    case Kind::Div: return wrap(lhs()) + " / " + wrap(rhs());
    }
    return {};
}

bool Expr::operator==(const Expr& other) const {
    if (empty() || other.empty()) return empty() == other.empty();
    if (kind() != other.kind()) return false;
    switch (kind()) {
    case Kind::Number: return value() == other.value() || (std::isnan(value()) && std::isnan(other.value()));
    case Kind::Param: return name() == other.name();
    case Kind::Count: return pattern() == other.pattern();
    default: break;
    }
    if (node_->args.size() != other.node_->args.size()) return false;
    for (std::size_t i = 0; i < node_->args.size(); ++i)
        if (!(node_->args[i] == other.node_->args[i])) return false;
    return true;
}

namespace {

class ExprParser {
public:
    ExprParser(const ContactGraphPtr& graph, std::string_view text) : graph_(graph), text_(text) {}

    Expr run() {
        Expr e = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("E008", msg, 0, static_cast<int>(pos_) + 1);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Expr sum() {
        Expr e = product();
        while (true) {
            if (accept("+")) e = Expr::binary(Expr::Kind::Add, e, product());
            else if (accept("-")) e = Expr::binary(Expr::Kind::Sub, e, product());
            else return e;
        }
    }

    Expr product() {
        Expr e = unary();
        while (true) {
            if (accept("*")) e = Expr::binary(Expr::Kind::Mul, e, unary());
            else if (accept("/")) e = Expr::binary(Expr::Kind::Div, e, unary());
            else return e;
        }
    }

    Expr unary() {
        if (++depth_ > 200) fail("expression nested too deeply");
        Expr e;
        if (accept("-")) {
            bool literal = pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
            Expr arg = literal ? atom() : unary();
            e = literal ? Expr::number(-arg.value()) : Expr::unary(Expr::Kind::Neg, arg);
        } else if (accept("[exp]")) {
            e = Expr::unary(Expr::Kind::Exp, unary());
        } else if (accept("[log]")) {
            e = Expr::unary(Expr::Kind::Log, unary());
        } else {
            e = atom();
        }
        --depth_;
        return e;
    }

    Expr atom() {
        skip();
        if (pos_ == text_.size()) fail("expected an expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            if (!accept(")")) fail("expected ')'");
            return e;
        }
        if (c == '\'') {
            std::size_t end = text_.find('\'', pos_ + 1);
            if (end == std::string_view::npos || end == pos_ + 1) fail("unterminated parameter name");
            std::string name(text_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return Expr::param(std::move(name));
        }
        if (c == '|') {
            std::size_t end = text_.find('|', pos_ + 1);
            if (end == std::string_view::npos) fail("unterminated pattern count");
            std::size_t start = pos_ + 1;
            try {
                ContactMap p = parsePattern(graph_, text_.substr(start, end - start));
                pos_ = end + 1;
                return Expr::count(std::move(p));
            } catch (const ParseError& e) {
                throw ParseError(e.code(), e.what(), 0, static_cast<int>(start) + e.column());
            }
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
            if (res.ec != std::errc()) fail("malformed number");
            pos_ = static_cast<std::size_t>(res.ptr - text_.data());
            return Expr::number(v);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const ContactGraphPtr& graph_;
    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

Expr parseExpr(const ContactGraphPtr& graph, std::string_view text) { return ExprParser(graph, text).run(); }

}  // namespace thermograph

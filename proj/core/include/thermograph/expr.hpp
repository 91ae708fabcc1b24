#pragma once

// Arithmetic over numbers, parameters and pattern counts:
//   expr := term (('+' | '-') term)*
//   term := unary (('*' | '/') unary)*
//   unary := '-' unary | '[exp]' unary | '[log]' unary | atom
//   atom := number | 'name' | '|' pattern '|' | '(' expr ')'

#include "thermograph/sitegraph.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace thermograph {

class Expr {
public:
    enum class Kind { Number, Param, Count, Neg, Exp, Log, Add, Sub, Mul, Div };

    Expr() = default;
    static Expr number(double v);
    static Expr param(std::string name);
    static Expr count(ContactMap pattern);
    static Expr unary(Kind kind, Expr arg);
    static Expr binary(Kind kind, Expr a, Expr b);

    Kind kind() const { return node_->kind; }
    bool empty() const { return !node_; }
    double value() const { return node_->value; }
    const std::string& name() const { return node_->name; }
    const ContactMap& pattern() const { return node_->pattern; }
    const Expr& lhs() const { return node_->args[0]; }
    const Expr& rhs() const { return node_->args[1]; }
    const std::vector<Expr>& args() const { return node_->args; }

    using Counter = std::function<double(const ContactMap&)>;
    /// Throws Error("E007") on an unknown parameter and InvalidArgument when
    /// a count is needed but no counter is given.
    double eval(const std::map<std::string, double>& params, const Counter& counter = {}) const;
    bool usesCounts() const;
    void collectParams(std::set<std::string>& out) const;
    /// Round-trips through parseExpr.
    std::string print() const;

    bool operator==(const Expr& other) const;

private:
    struct Node {
        Kind kind = Kind::Number;
        double value = 0.0;
        std::string name;
        ContactMap pattern;
        std::vector<Expr> args;
    };
    std::shared_ptr<const Node> node_;
};

/// Throws ParseError (E008 syntax, plus pattern codes) with a 1-based column.
Expr parseExpr(const ContactGraphPtr& graph, std::string_view text);

/// Prints a number so that it reads back exactly.
std::string formatNumber(double v);

}  // namespace thermograph

#include "epi_text.hpp"

#include <set>

#include "common.hpp"
#include "lexer.hpp"

using epic::join;
using epic::Lexer;
using epic::overloaded;
using epic::Token;

namespace epi {

namespace {

const std::set<std::string> kKeywords = {"new", "if",  "then", "else", "true", "false",
                                         "and", "or",  "not",  "int",  "bool"};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text, kKeywords) {}

  Proc parse_whole_process() {
    Proc p = process();
    if (!lex_.at_end()) lex_.fail("expected end of input");
    return p;
  }

  Expr parse_whole_expr() {
    Expr e = expr();
    if (!lex_.at_end()) lex_.fail("expected end of input");
    return e;
  }

private:
  Lexer lex_;

  Proc process() {
    Proc p = term();
    while (lex_.eat_symbol("|")) p = p_par(p, term());
    return p;
  }

  Proc term() {
    if (!lex_.at_symbol("[")) return prefix();
    std::vector<Branch> branches;
    do {
      lex_.expect_symbol("[");
      Expr guard = expr();
      lex_.expect_symbol("]");
      branches.push_back(Branch{std::move(guard), prefix()});
    } while (lex_.eat_symbol("+"));
    return p_sum(std::move(branches));
  }

  Proc prefix() {
    if (lex_.at_symbol("0") || (lex_.peek().kind == Token::Kind::Int && lex_.peek().text == "0")) {
      lex_.next();
      return p_nil();
    }
    if (lex_.eat_symbol("!")) return p_repl(prefix());
    if (lex_.eat_keyword("new")) {
      std::vector<Binding> bindings;
      std::set<std::string> seen;
      do {
        std::string name = lex_.expect_ident("a name");
        if (!seen.insert(name).second) lex_.fail("duplicate binder '" + name + "'");
        lex_.expect_symbol(":");
        bindings.push_back(Binding{Name{name}, base_type()});
      } while (lex_.eat_symbol(","));
      lex_.expect_symbol("(");
      Proc body = process();
      lex_.expect_symbol(")");
      return p_new(std::move(bindings), std::move(body));
    }
    if (lex_.eat_keyword("if")) {
      Expr cond = expr();
      lex_.expect_keyword("then");
      Proc pt = prefix();
      lex_.expect_keyword("else");
      Proc pf = prefix();
      // [e]P + [not e]Q
      std::vector<Branch> branches;
      branches.push_back(Branch{cond, std::move(pt)});
      branches.push_back(Branch{ex_op("not", {cond}), std::move(pf)});
      return p_sum(std::move(branches));
    }
    if (lex_.eat_symbol("(")) {
      Proc p = process();
      lex_.expect_symbol(")");
      return p;
    }
    // prefixed input/output
    std::vector<Value> subject;
    subject.push_back(val_name(lex_.expect_ident("a process")));
    while (lex_.eat_symbol("*")) subject.push_back(val_name(lex_.expect_ident("a name")));
    if (lex_.eat_symbol("!")) {
      lex_.expect_symbol("(");
      std::vector<Expr> objects;
      if (!lex_.at_symbol(")")) {
        do objects.push_back(expr());
        while (lex_.eat_symbol(","));
      }
      lex_.expect_symbol(")");
      return p_out(std::move(subject), std::move(objects), continuation());
    }
    lex_.expect_symbol("?");
    lex_.expect_symbol("(");
    std::vector<Name> binders;
    std::set<std::string> seen;
    if (!lex_.at_symbol(")")) {
      do {
        std::string b = lex_.expect_ident("a binder");
        if (!seen.insert(b).second) lex_.fail("duplicate binder '" + b + "'");
        binders.push_back(Name{b});
      } while (lex_.eat_symbol(","));
    }
    lex_.expect_symbol(")");
    return p_in(std::move(subject), std::move(binders), continuation());
  }

  Proc continuation() {
    if (lex_.eat_symbol(".")) return prefix();
    return p_nil();
  }

  BaseType base_type() {
    if (lex_.eat_keyword("int")) return BaseType::integer();
    if (lex_.eat_keyword("bool")) return BaseType::boolean();
    return BaseType::type_name(lex_.expect_ident("a type"));
  }

  // or < and < (= <) < (+ -) < * < not
  Expr expr() { return expr_or(); }

  Expr expr_or() {
    Expr e = expr_and();
    while (lex_.eat_keyword("or")) e = ex_op("or", {e, expr_and()});
    return e;
  }
  Expr expr_and() {
    Expr e = expr_cmp();
    while (lex_.eat_keyword("and")) e = ex_op("and", {e, expr_cmp()});
    return e;
  }
  Expr expr_cmp() {
    Expr e = expr_add();
    if (lex_.at_symbol("=") || lex_.at_symbol("<")) {
      std::string op = lex_.next().text;
      e = ex_op(op, {e, expr_add()});
    }
    return e;
  }
  Expr expr_add() {
    Expr e = expr_mul();
    while (lex_.at_symbol("+") || lex_.at_symbol("-")) {
      std::string op = lex_.next().text;
      e = ex_op(op, {e, expr_mul()});
    }
    return e;
  }
  Expr expr_mul() {
    Expr e = expr_unary();
    while (lex_.eat_symbol("*")) e = ex_op("*", {e, expr_unary()});
    return e;
  }
  Expr expr_unary() {
    if (lex_.eat_keyword("not")) return ex_op("not", {expr_unary()});
    if (lex_.at_symbol("-")) {
      lex_.next();
      if (lex_.peek().kind != Token::Kind::Int) lex_.fail("expected an integer literal");
      return ex_val(val_int(-lex_.next().number));
    }
    return atom();
  }
  Expr atom() {
    if (lex_.peek().kind == Token::Kind::Int) return ex_val(val_int(lex_.next().number));
    if (lex_.eat_keyword("true")) return ex_val(val_bool(true));
    if (lex_.eat_keyword("false")) return ex_val(val_bool(false));
    if (lex_.eat_symbol("(")) {
      Expr e = expr();
      lex_.expect_symbol(")");
      return e;
    }
    return ex_name(lex_.expect_ident("an expression"));
  }
};

} // namespace

Proc parse_process(const std::string& text) { return Parser(text).parse_whole_process(); }
Expr parse_expr(const std::string& text) { return Parser(text).parse_whole_expr(); }

// ---------------------------------------------------------------------------
// printing

std::string print_value(const Value& v) {
  return std::visit(overloaded{
                        [](const Name& n) { return n.id; },
                        [](long long n) { return std::to_string(n); },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                    },
                    v);
}

namespace {

// expression precedence: or=1 and=2 cmp=3 add=4 mul=5 unary=6 atom=7
int expr_prec(const Expr& e) {
  return std::visit(overloaded{
                        [](const Value& v) {
                          const long long* n = std::get_if<long long>(&v);
                          return n && *n < 0 ? 6 : 7;
                        },
                        [](const OpApp& a) {
                          if (a.op == "or") return 1;
                          if (a.op == "and") return 2;
                          if (a.op == "=" || a.op == "<") return 3;
                          if (a.op == "+" || a.op == "-") return 4;
                          if (a.op == "*") return 5;
                          return 6; // not
                        },
                    },
                    e.node);
}

std::string print_expr_at(const Expr& e, int min_prec) {
  int prec = expr_prec(e);
  std::string out = std::visit(
      overloaded{
          [](const Value& v) { return print_value(v); },
          [&](const OpApp& a) -> std::string {
            if (a.op == "not") return "not " + print_expr_at(a.args[0], 6);
            int sub = prec + (a.op == "=" || a.op == "<" ? 1 : 0);
            return print_expr_at(a.args[0], prec) + " " + a.op + " " +
                   print_expr_at(a.args[1], sub);
          },
      },
      e.node);
  if (prec < min_prec) return "(" + out + ")";
  return out;
}

std::string subject_str(const std::vector<Value>& subject) {
  std::vector<std::string> parts;
  for (const Value& v : subject) parts.push_back(print_value(v));
  return join(parts, "*");
}

// process precedence: par=0 sum=1 prefix=2
int proc_prec(const Proc& p) {
  return std::visit(overloaded{
                        [](const Par&) { return 0; },
                        [](const Sum&) { return 1; },
                        [](const auto&) { return 2; },
                    },
                    p->node);
}

std::string print_at(const Proc& p, int min_prec);

std::string continuation_str(const Proc& body) {
  if (std::holds_alternative<Nil>(body->node)) return "";
  return "." + print_at(body, 2);
}

std::string print_at(const Proc& p, int min_prec) {
  int prec = proc_prec(p);
  std::string out = std::visit(
      overloaded{
          [](const Nil&) { return std::string("0"); },
          [&](const Input& n) {
            std::vector<std::string> bs;
            for (const Name& b : n.binders) bs.push_back(b.id);
            return subject_str(n.subject) + "?(" + join(bs, ", ") + ")" +
                   continuation_str(n.body);
          },
          [&](const Output& n) {
            std::vector<std::string> os;
            for (const Expr& e : n.objects) os.push_back(print_expr_at(e, 0));
            return subject_str(n.subject) + "!(" + join(os, ", ") + ")" +
                   continuation_str(n.body);
          },
          [&](const Par& n) {
            // right child parenthesised when itself a Par, so parsing
            // re-associates identically
            return print_at(n.left, 0) + " | " + print_at(n.right, 1);
          },
          [&](const Restrict& n) {
            std::vector<std::string> bs;
            for (const Binding& b : n.bindings) bs.push_back(b.name.id + ":" + b.type.str());
            return "new " + join(bs, ", ") + " (" + print_at(n.body, 0) + ")";
          },
          [&](const Repl& n) { return "!" + print_at(n.body, 2); },
          [&](const Sum& n) {
            std::vector<std::string> bs;
            for (const Branch& br : n.branches)
              bs.push_back("[" + print_expr_at(br.guard, 0) + "] " + print_at(br.body, 2));
            return join(bs, " + ");
          },
      },
      p->node);
  if (prec < min_prec) return "(" + out + ")";
  return out;
}

} // namespace

std::string print_expr(const Expr& e) { return print_expr_at(e, 0); }
std::string print_process(const Proc& p) { return print_at(p, 0); }

std::string alpha_key(const Proc& p) { return print_process(canonical(p)); }

} // namespace epi

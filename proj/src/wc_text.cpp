#include "wc_text.hpp"

#include <map>
#include <set>

#include "common.hpp"
#include "epi_text.hpp"
#include "lexer.hpp"

using epic::join;
using epic::Lexer;
using epic::overloaded;
using epic::Token;

namespace wc {

namespace {

const std::set<std::string> kKeywords = {
    "interface", "class", "field", "method", "main", "var",  "skip", "if",
    "then",      "else",  "while", "do",     "in",   "this", "proc", "true",
    "false",     "and",   "or",    "not",    "int",  "bool"};

std::set<std::string> scan_class_names(const std::string& text) {
  std::set<std::string> out;
  Lexer lex(text, kKeywords);
  while (!lex.at_end()) {
    Token t = lex.next();
    if (t.kind == Token::Kind::Ident && t.text == "class" && lex.at_ident())
      out.insert(lex.peek().text);
  }
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& text)
      : lex_(text, kKeywords), class_names_(scan_class_names(text)) {}

  Program parse() {
    Program prog;
    while (lex_.at_keyword("interface")) prog.interfaces.push_back(interface_decl());
    while (lex_.at_keyword("class")) prog.classes.push_back(class_decl());
    lex_.expect_keyword("main");
    lex_.expect_symbol("{");
    prog.main = statement();
    lex_.expect_symbol("}");
    if (!lex_.at_end()) lex_.fail("expected end of input");
    return prog;
  }

private:
  Lexer lex_;
  std::set<std::string> class_names_;

  InterfaceDecl interface_decl() {
    lex_.expect_keyword("interface");
    InterfaceDecl decl;
    decl.name = lex_.expect_ident("an interface name");
    lex_.expect_symbol("{");
    while (!lex_.eat_symbol("}")) {
      if (lex_.eat_keyword("field")) {
        InterfaceField f;
        f.name = lex_.expect_ident("a field name");
        lex_.expect_symbol(":");
        f.type = base_type();
        lex_.expect_symbol(";");
        decl.fields.push_back(std::move(f));
      } else if (lex_.eat_keyword("method")) {
        InterfaceMethod m;
        m.name = lex_.expect_ident("a method name");
        lex_.expect_symbol(":");
        lex_.expect_keyword("proc");
        lex_.expect_symbol("(");
        if (!lex_.at_symbol(")")) {
          do m.params.push_back(base_type());
          while (lex_.eat_symbol(","));
        }
        lex_.expect_symbol(")");
        lex_.expect_symbol(";");
        decl.methods.push_back(std::move(m));
      } else {
        lex_.fail("expected 'field' or 'method'");
      }
    }
    return decl;
  }

  ClassDecl class_decl() {
    lex_.expect_keyword("class");
    ClassDecl decl;
    decl.name = lex_.expect_ident("a class name");
    lex_.expect_symbol(":");
    decl.interface = lex_.expect_ident("an interface name");
    lex_.expect_symbol("{");
    while (lex_.eat_keyword("field")) {
      std::string name = lex_.expect_ident("a field name");
      lex_.expect_symbol(":=");
      Value v = value();
      lex_.expect_symbol(";");
      decl.fields.emplace_back(std::move(name), std::move(v));
    }
    while (lex_.eat_keyword("method")) {
      Method m;
      m.name = lex_.expect_ident("a method name");
      lex_.expect_symbol("(");
      if (!lex_.at_symbol(")")) {
        do m.params.push_back(lex_.expect_ident("a parameter"));
        while (lex_.eat_symbol(","));
      }
      lex_.expect_symbol(")");
      lex_.expect_symbol("{");
      m.body = statement();
      lex_.expect_symbol("}");
      decl.methods.push_back(std::move(m));
    }
    lex_.expect_symbol("}");
    return decl;
  }

  Value value() {
    if (lex_.peek().kind == Token::Kind::Int) return Value{lex_.next().number};
    if (lex_.eat_symbol("-")) {
      if (lex_.peek().kind != Token::Kind::Int) lex_.fail("expected an integer literal");
      return Value{-lex_.next().number};
    }
    if (lex_.eat_keyword("true")) return Value{true};
    if (lex_.eat_keyword("false")) return Value{false};
    std::string id = lex_.expect_ident("a value");
    if (!class_names_.count(id)) lex_.fail("'" + id + "' is not a declared class");
    return Value{ClassName{id}};
  }

  BaseType base_type() {
    if (lex_.eat_keyword("int")) return BaseType::integer();
    if (lex_.eat_keyword("bool")) return BaseType::boolean();
    return BaseType::type_name(lex_.expect_ident("a type"));
  }

  // stm := simple (';' stm)?
  StmPtr statement() {
    StmPtr s = simple();
    if (lex_.eat_symbol(";")) return s_seq(std::move(s), statement());
    return s;
  }

  StmPtr simple() {
    if (lex_.eat_keyword("skip")) return s_skip();
    if (lex_.eat_symbol("{")) {
      StmPtr s = statement();
      lex_.expect_symbol("}");
      return s;
    }
    if (lex_.eat_keyword("var")) {
      BaseType type = base_type();
      std::string name = lex_.expect_ident("a variable");
      lex_.expect_symbol(":=");
      Expr init = expr();
      lex_.expect_keyword("in");
      return s_vardecl(std::move(type), std::move(name), std::move(init), statement());
    }
    if (lex_.eat_keyword("if")) {
      Expr cond = expr();
      lex_.expect_keyword("then");
      StmPtr t = simple();
      lex_.expect_keyword("else");
      StmPtr f = simple();
      return s_if(std::move(cond), std::move(t), std::move(f));
    }
    if (lex_.eat_keyword("while")) {
      Expr cond = expr();
      lex_.expect_keyword("do");
      return s_while(std::move(cond), simple());
    }
    Expr e = expr();
    if (lex_.eat_symbol(":=")) {
      Expr rhs = expr();
      if (const EVar* v = std::get_if<EVar>(&e.node)) return s_assign(v->name, std::move(rhs));
      if (const EField* f = std::get_if<EField>(&e.node)) {
        if (std::holds_alternative<EThis>(f->base->node))
          return s_assign_field(f->field, std::move(rhs));
      }
      lex_.fail("assignment target must be a variable or this.<field>");
    }
    lex_.expect_symbol("::");
    std::string method = lex_.expect_ident("a method name");
    lex_.expect_symbol("(");
    std::vector<Expr> args;
    if (!lex_.at_symbol(")")) {
      do args.push_back(expr());
      while (lex_.eat_symbol(","));
    }
    lex_.expect_symbol(")");
    return s_call(std::move(e), std::move(method), std::move(args));
  }

  Expr expr() { return expr_or(); }
  Expr expr_or() {
    Expr e = expr_and();
    while (lex_.eat_keyword("or")) e = e_op("or", {e, expr_and()});
    return e;
  }
  Expr expr_and() {
    Expr e = expr_cmp();
    while (lex_.eat_keyword("and")) e = e_op("and", {e, expr_cmp()});
    return e;
  }
  Expr expr_cmp() {
    Expr e = expr_add();
    if (lex_.at_symbol("=") || lex_.at_symbol("<")) {
      std::string op = lex_.next().text;
      e = e_op(op, {e, expr_add()});
    }
    return e;
  }
  Expr expr_add() {
    Expr e = expr_mul();
    while (lex_.at_symbol("+") || lex_.at_symbol("-")) {
      std::string op = lex_.next().text;
      e = e_op(op, {e, expr_mul()});
    }
    return e;
  }
  Expr expr_mul() {
    Expr e = expr_unary();
    while (lex_.eat_symbol("*")) e = e_op("*", {e, expr_unary()});
    return e;
  }
  Expr expr_unary() {
    if (lex_.eat_keyword("not")) return e_op("not", {expr_unary()});
    if (lex_.at_symbol("-")) {
      lex_.next();
      if (lex_.peek().kind != Token::Kind::Int) lex_.fail("expected an integer literal");
      return e_val(Value{-lex_.next().number});
    }
    return postfix();
  }
  Expr postfix() {
    Expr e = atom();
    while (lex_.eat_symbol(".")) e = e_field(std::move(e), lex_.expect_ident("a field name"));
    return e;
  }
  Expr atom() {
    if (lex_.peek().kind == Token::Kind::Int) return e_val(Value{lex_.next().number});
    if (lex_.eat_keyword("true")) return e_val(Value{true});
    if (lex_.eat_keyword("false")) return e_val(Value{false});
    if (lex_.eat_keyword("this")) return e_this();
    if (lex_.eat_symbol("(")) {
      Expr e = expr();
      lex_.expect_symbol(")");
      return e;
    }
    std::string id = lex_.expect_ident("an expression");
    if (class_names_.count(id)) return e_val(Value{ClassName{id}});
    return e_var(id);
  }
};

// ---------------------------------------------------------------------------
// parse-time shadowing repair

struct ShadowRenamer {
  std::set<std::string> used; // every identifier in the program
  std::vector<std::string>* warnings;
  size_t counter = 0;

  std::string fresh(const std::string& base) {
    std::string cand;
    do cand = base + "__" + std::to_string(counter++);
    while (used.count(cand));
    used.insert(cand);
    return cand;
  }

  Expr expr(const Expr& e, const std::map<std::string, std::string>& ren) {
    return std::visit(overloaded{
                          [&](const EVal& n) { return Expr{n}; },
                          [&](const EVar& n) {
                            auto it = ren.find(n.name);
                            return e_var(it == ren.end() ? n.name : it->second);
                          },
                          [&](const EThis&) { return e_this(); },
                          [&](const EField& n) { return e_field(expr(*n.base, ren), n.field); },
                          [&](const EOp& n) {
                            std::vector<Expr> args;
                            for (const Expr& a : n.args) args.push_back(expr(a, ren));
                            return e_op(n.op, std::move(args));
                          },
                      },
                      e.node);
  }

  StmPtr stm(const StmPtr& s, std::set<std::string> scope,
             std::map<std::string, std::string> ren) {
    return std::visit(
        overloaded{
            [&](const SSkip&) { return s_skip(); },
            [&](const SVarDecl& n) {
              Expr init = expr(n.init, ren);
              std::string name = n.var;
              if (scope.count(name)) {
                name = fresh(n.var);
                warnings->push_back("variable '" + n.var +
                                    "' shadows an enclosing declaration; renamed to '" + name +
                                    "'");
                ren[n.var] = name;
              } else {
                ren.erase(n.var);
              }
              scope.insert(name);
              return s_vardecl(n.type, name, std::move(init), stm(n.body, scope, ren));
            },
            [&](const SAssignVar& n) {
              auto it = ren.find(n.var);
              return s_assign(it == ren.end() ? n.var : it->second, expr(n.value, ren));
            },
            [&](const SAssignField& n) { return s_assign_field(n.field, expr(n.value, ren)); },
            [&](const SSeq& n) { return s_seq(stm(n.first, scope, ren), stm(n.second, scope, ren)); },
            [&](const SIf& n) {
              return s_if(expr(n.cond, ren), stm(n.then_branch, scope, ren),
                          stm(n.else_branch, scope, ren));
            },
            [&](const SWhile& n) { return s_while(expr(n.cond, ren), stm(n.body, scope, ren)); },
            [&](const SCall& n) {
              std::vector<Expr> args;
              for (const Expr& a : n.args) args.push_back(expr(a, ren));
              return s_call(expr(n.target, ren), n.method, std::move(args));
            },
        },
        s->node);
  }
};

void collect_idents(const StmPtr& s, std::set<std::string>& out);

void collect_idents(const Expr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const EVal& n) {
                   if (const ClassName* c = std::get_if<ClassName>(&n.value)) out.insert(c->id);
                 },
                 [&](const EVar& n) { out.insert(n.name); },
                 [](const EThis&) {},
                 [&](const EField& n) {
                   collect_idents(*n.base, out);
                   out.insert(n.field);
                 },
                 [&](const EOp& n) {
                   for (const Expr& a : n.args) collect_idents(a, out);
                 },
             },
             e.node);
}

void collect_idents(const StmPtr& s, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const SSkip&) {},
                 [&](const SVarDecl& n) {
                   out.insert(n.var);
                   collect_idents(n.init, out);
                   collect_idents(n.body, out);
                 },
                 [&](const SAssignVar& n) {
                   out.insert(n.var);
                   collect_idents(n.value, out);
                 },
                 [&](const SAssignField& n) {
                   out.insert(n.field);
                   collect_idents(n.value, out);
                 },
                 [&](const SSeq& n) {
                   collect_idents(n.first, out);
                   collect_idents(n.second, out);
                 },
                 [&](const SIf& n) {
                   collect_idents(n.cond, out);
                   collect_idents(n.then_branch, out);
                   collect_idents(n.else_branch, out);
                 },
                 [&](const SWhile& n) {
                   collect_idents(n.cond, out);
                   collect_idents(n.body, out);
                 },
                 [&](const SCall& n) {
                   collect_idents(n.target, out);
                   out.insert(n.method);
                   for (const Expr& a : n.args) collect_idents(a, out);
                 },
             },
             s->node);
}

void collect_vars(const StmPtr& s, std::set<std::string>& out);

// Categories must be pairwise disjoint: interfaces, classes, fields, methods,
// variables all draw on separate name sets.
void check_disjoint_categories(const Program& p) {
  std::map<std::string, std::string> category;
  auto add = [&](const std::string& id, const std::string& cat) {
    auto [it, fresh] = category.emplace(id, cat);
    if (!fresh && it->second != cat)
      throw epi::ParseError("identifier '" + id + "' used both as " + it->second + " and as " +
                                cat,
                            0, 0);
  };
  for (const InterfaceDecl& i : p.interfaces) {
    add(i.name, "an interface name");
    for (const InterfaceField& f : i.fields) add(f.name, "a field name");
    for (const InterfaceMethod& m : i.methods) add(m.name, "a method name");
  }
  for (const ClassDecl& c : p.classes) {
    add(c.name, "a class name");
    for (const auto& [f, v] : c.fields) add(f, "a field name");
    for (const Method& m : c.methods) {
      add(m.name, "a method name");
      for (const std::string& x : m.params) add(x, "a variable");
      std::set<std::string> vars;
      collect_vars(m.body, vars);
      for (const std::string& x : vars) add(x, "a variable");
    }
  }
  std::set<std::string> vars;
  collect_vars(p.main, vars);
  for (const std::string& x : vars) add(x, "a variable");
}

void collect_vars(const StmPtr& s, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const SSkip&) {},
                 [&](const SVarDecl& n) {
                   out.insert(n.var);
                   collect_vars(n.body, out);
                 },
                 [](const SAssignVar&) {},
                 [](const SAssignField&) {},
                 [&](const SSeq& n) {
                   collect_vars(n.first, out);
                   collect_vars(n.second, out);
                 },
                 [&](const SIf& n) {
                   collect_vars(n.then_branch, out);
                   collect_vars(n.else_branch, out);
                 },
                 [&](const SWhile& n) { collect_vars(n.body, out); },
                 [](const SCall&) {},
             },
             s->node);
}

} // namespace

Program parse_program(const std::string& text) {
  Program prog = Parser(text).parse();

  ShadowRenamer renamer;
  renamer.warnings = &prog.warnings;
  for (const InterfaceDecl& i : prog.interfaces) {
    renamer.used.insert(i.name);
    for (const InterfaceField& f : i.fields) renamer.used.insert(f.name);
    for (const InterfaceMethod& m : i.methods) renamer.used.insert(m.name);
  }
  for (const ClassDecl& c : prog.classes) {
    renamer.used.insert(c.name);
    for (const auto& [f, v] : c.fields) renamer.used.insert(f);
    for (const Method& m : c.methods) {
      renamer.used.insert(m.name);
      for (const std::string& x : m.params) renamer.used.insert(x);
      collect_idents(m.body, renamer.used);
    }
  }
  collect_idents(prog.main, renamer.used);

  for (ClassDecl& c : prog.classes)
    for (Method& m : c.methods) {
      std::set<std::string> scope(m.params.begin(), m.params.end());
      m.body = renamer.stm(m.body, std::move(scope), {});
    }
  prog.main = renamer.stm(prog.main, {}, {});

  check_disjoint_categories(prog);
  return prog;
}

// ---------------------------------------------------------------------------
// printing

namespace {

int expr_prec(const Expr& e) {
  return std::visit(overloaded{
                        [](const EVal& n) {
                          const long long* i = std::get_if<long long>(&n.value);
                          return i && *i < 0 ? 6 : 7;
                        },
                        [](const EVar&) { return 7; },
                        [](const EThis&) { return 7; },
                        [](const EField&) { return 7; },
                        [](const EOp& a) {
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

std::string expr_at(const Expr& e, int min_prec) {
  int prec = expr_prec(e);
  std::string out = std::visit(
      overloaded{
          [](const EVal& n) { return print_value(n.value); },
          [](const EVar& n) { return n.name; },
          [](const EThis&) { return std::string("this"); },
          [&](const EField& n) { return expr_at(*n.base, 7) + "." + n.field; },
          [&](const EOp& a) -> std::string {
            if (a.op == "not") return "not " + expr_at(a.args[0], 6);
            int sub = prec + (a.op == "=" || a.op == "<" ? 1 : 0);
            return expr_at(a.args[0], prec) + " " + a.op + " " + expr_at(a.args[1], sub);
          },
      },
      e.node);
  if (prec < min_prec) return "(" + out + ")";
  return out;
}

std::string stm_str(const StmPtr& s);

// Sequences and var declarations extend to the end of the enclosing
// statement, so they are braced wherever that would change the parse.
std::string delimited_str(const StmPtr& s) {
  bool greedy = std::holds_alternative<SSeq>(s->node) || std::holds_alternative<SVarDecl>(s->node);
  if (greedy) return "{ " + stm_str(s) + " }";
  return stm_str(s);
}

std::string stm_str(const StmPtr& s) {
  return std::visit(
      overloaded{
          [](const SSkip&) { return std::string("skip"); },
          [&](const SVarDecl& n) {
            return "var " + n.type.str() + " " + n.var + " := " + expr_at(n.init, 0) + " in " +
                   stm_str(n.body);
          },
          [&](const SAssignVar& n) { return n.var + " := " + expr_at(n.value, 0); },
          [&](const SAssignField& n) {
            return "this." + n.field + " := " + expr_at(n.value, 0);
          },
          [&](const SSeq& n) { return delimited_str(n.first) + "; " + stm_str(n.second); },
          [&](const SIf& n) {
            return "if " + expr_at(n.cond, 0) + " then " + delimited_str(n.then_branch) +
                   " else " + delimited_str(n.else_branch);
          },
          [&](const SWhile& n) {
            return "while " + expr_at(n.cond, 0) + " do " + delimited_str(n.body);
          },
          [&](const SCall& n) {
            std::vector<std::string> args;
            for (const Expr& a : n.args) args.push_back(expr_at(a, 0));
            return expr_at(n.target, 7) + "::" + n.method + "(" + join(args, ", ") + ")";
          },
      },
      s->node);
}

} // namespace

std::string print_expr(const Expr& e) { return expr_at(e, 0); }
std::string print_stm(const StmPtr& s) { return stm_str(s); }

std::string print_program(const Program& p) {
  std::string out;
  for (const InterfaceDecl& i : p.interfaces) {
    out += "interface " + i.name + " {\n";
    for (const InterfaceField& f : i.fields)
      out += "  field " + f.name + " : " + f.type.str() + ";\n";
    for (const InterfaceMethod& m : i.methods) {
      std::vector<std::string> ps;
      for (const BaseType& b : m.params) ps.push_back(b.str());
      out += "  method " + m.name + " : proc(" + join(ps, ", ") + ");\n";
    }
    out += "}\n";
  }
  for (const ClassDecl& c : p.classes) {
    out += "class " + c.name + " : " + c.interface + " {\n";
    for (const auto& [f, v] : c.fields) out += "  field " + f + " := " + print_value(v) + ";\n";
    for (const Method& m : c.methods) {
      out += "  method " + m.name + "(" + join(m.params, ", ") + ") { " + stm_str(m.body) +
             " }\n";
    }
    out += "}\n";
  }
  out += "main { " + stm_str(p.main) + " }\n";
  return out;
}

} // namespace wc

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "epi_ast.hpp"
#include "epi_text.hpp"
#include "fuzz.hpp"

using namespace epi;

namespace {
Proc P(const std::string& text) { return parse_process(text); }
} // namespace

TEST_CASE("free names") {
  CHECK(free_names(P("0")).empty());
  CHECK(free_names(P("x!(y).0")) == std::set<std::string>{"x", "y"});
  // the restriction binds z; only x stays free
  CHECK(free_names(P("new z:I (x*z!(z).0)")) == std::set<std::string>{"x"});
  CHECK(free_names(P("x?(a, b).a!(c)")) == std::set<std::string>{"x", "c"});
  CHECK(free_names(P("[a < b] 0")) == std::set<std::string>{"a", "b"});
}

TEST_CASE("substitution") {
  CHECK(alpha_eq(substitute(P("y!(1).0"), {{"y", val_name("x")}}), P("x!(1).0")));

  // capture avoidance: the bound x must be renamed before y becomes x
  Proc renamed = substitute(P("new x:I (y!(x).0)"), {{"y", val_name("x")}});
  CHECK(alpha_eq(renamed, P("new w:I (x!(w).0)")));
  CHECK(free_names(renamed) == std::set<std::string>{"x"});

  // non-name subjects are representable after substitution
  Proc malformed = substitute(P("y!(1).0"), {{"y", val_int(3)}});
  const Output& out = std::get<Output>(malformed->node);
  CHECK(out.subject == std::vector<Value>{val_int(3)});
  CHECK(print_process(malformed) == "3!(1)");

  // identity substitution
  Proc p = P("new a:I (a!(b) | c?(d).d!(1))");
  CHECK(alpha_eq(substitute(p, {}), p));

  // substitution reaches subjects and expressions
  Proc q = substitute(P("a*b!(a + 1)"), {{"a", val_name("c")}});
  CHECK(print_process(q) == "c*b!(c + 1)");
}

TEST_CASE("free names after substitution") {
  Proc p = P("x!(y) | new z:I (y*z!(1))");
  Subst s{{"y", val_name("w")}};
  auto fn = free_names(substitute(p, s));
  CHECK(fn == std::set<std::string>{"x", "w"});
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(P("new a:I (a!(1).0)"), P("new b:I (b!(1).0)")));
  // binder lists within one restriction are reorderable
  CHECK(alpha_eq(P("new a:I, b:J (0)"), P("new b:J, a:I (0)")));
  CHECK(alpha_eq(P("new a:I, b:J (a!(b))"), P("new b:J, a:I (a!(b))")));
  CHECK_FALSE(alpha_eq(P("a!(1).0"), P("b!(1).0")));
  // annotations must match under the reordering
  CHECK_FALSE(alpha_eq(P("new a:I (a!(1))"), P("new a:J (a!(1))")));
  CHECK_FALSE(alpha_eq(P("new a:I, b:J (a!(b))"), P("new a:J, b:I (a!(b))")));
  // input binders are positional, not reorderable
  CHECK(alpha_eq(P("x?(a, b).a!(1)"), P("x?(c, d).c!(1)")));
  CHECK_FALSE(alpha_eq(P("x?(a, b).a!(1)"), P("x?(a, b).b!(1)")));
}

TEST_CASE("alpha equivalence is an equivalence relation") {
  std::vector<Proc> terms = {
      P("new a:I (a!(1))"), P("new b:I (b!(1))"), P("new c:I (c!(1) | 0)"),
      P("x?(y).y!(2)"),     P("x?(z).z!(2)"),
  };
  for (const Proc& a : terms) CHECK(alpha_eq(a, a));
  for (const Proc& a : terms)
    for (const Proc& b : terms)
      CHECK(alpha_eq(a, b) == alpha_eq(b, a));
  for (const Proc& a : terms)
    for (const Proc& b : terms)
      for (const Proc& c : terms)
        if (alpha_eq(a, b) && alpha_eq(b, c)) CHECK(alpha_eq(a, c));
}

TEST_CASE("parsing the concrete syntax") {
  Proc p = P("x1*x2*x3!(true).0");
  const Output& out = std::get<Output>(p->node);
  CHECK(out.subject ==
        std::vector<Value>{val_name("x1"), val_name("x2"), val_name("x3")});
  REQUIRE(out.objects.size() == 1);
  CHECK(std::get<Value>(out.objects[0].node) == val_bool(true));
  CHECK(std::holds_alternative<Nil>(out.body->node));

  const Sum& sum = std::get<Sum>(P("[y] x!(1) + [not y] z!(2)")->node);
  CHECK(sum.branches.size() == 2);

  const Repl& repl = std::get<Repl>(P("!r?().r!()")->node);
  const Input& in = std::get<Input>(repl.body->node);
  CHECK(in.binders.empty());

  // if sugar expands to the two-branch guarded sum
  CHECK(alpha_eq(P("if y then a!(1) else b!(2)"), P("[y] a!(1) + [not y] b!(2)")));

  // trailing .0 is optional
  CHECK(equal(P("x!(1)"), P("x!(1).0")));

  // parallel is left-associative; the printer protects right nests
  Proc r = P("a!(1) | b!(2) | c!(3)");
  const Par& par = std::get<Par>(r->node);
  CHECK(std::holds_alternative<Par>(par.left->node));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(P("x!("), ParseError);
  CHECK_THROWS_AS(P("new x (0)"), ParseError);
  CHECK_THROWS_AS(P("x?(a, a).0"), ParseError); // duplicate binders
  CHECK_THROWS_AS(P("x#1!(2)"), ParseError);    // '#' is not lexable
  try {
    P("x!(1) |\n  ?");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("print/parse round trip on handwritten terms") {
  for (const char* text : {
           "0",
           "x!(1, true).y?(a).a!(2)",
           "new a:I, b:bool (a!(b) | !a?(c).0)",
           "[x < 3 + 1] a!(x * 2) + [not (x = 3)] 0",
           "x?().(a!(1) | b!(2))",
           "!(a!(1) | new q:I (q!(1)))",
           "x!(-5).x!(0 - 5)",
       }) {
    Proc p = P(text);
    CHECK(alpha_eq(parse_process(print_process(p)), p));
    // printing is stable
    CHECK(print_process(parse_process(print_process(p))) == print_process(p));
  }
}

TEST_CASE("free names of a substituted term obey the set equation") {
  std::mt19937_64 rng(17);
  epic::FuzzConfig config;
  for (int i = 0; i < 150; ++i) {
    epic::FuzzCase c = epic::generate_case(rng, config);
    std::set<std::string> before = free_names(c.process);
    Subst sigma;
    size_t k = 0;
    for (const auto& [n, b] : c.gamma.names) {
      switch (k++ % 3) {
        case 0: sigma[n] = val_name(n + "r"); break;
        case 1: sigma[n] = val_int(3); break;
        default: break; // untouched
      }
    }
    std::set<std::string> expected;
    for (const std::string& n : before) {
      auto it = sigma.find(n);
      if (it == sigma.end()) {
        expected.insert(n);
      } else if (const Name* nn = as_name(it->second)) {
        expected.insert(nn->id);
      }
    }
    CHECK(free_names(substitute(c.process, sigma)) == expected);
  }
}

TEST_CASE("print/parse round trip on generated terms") {
  std::mt19937_64 rng(7);
  epic::FuzzConfig config;
  for (int i = 0; i < 200; ++i) {
    epic::FuzzCase c = epic::generate_case(rng, config);
    CAPTURE(print_process(c.process));
    CHECK(alpha_eq(parse_process(print_process(c.process)), c.process));
  }
}

#include <gtest/gtest.h>

#include "ackermann/syntax.hpp"
#include "corpus.hpp"

namespace ack {
namespace {

ParseError::Kind KindOf(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for: " << text;
  return ParseError::Kind::Lexical;
}

TEST(Parse, PrefixVariablesAndSignature) {
  auto s = parse("exists z. forall x. exists y. (E(x,y) & ~E(x,x))");
  EXPECT_EQ(s.z, "z");
  EXPECT_EQ(s.x, "x");
  ASSERT_EQ(s.ys.size(), 1u);
  EXPECT_EQ(s.ys[0], "y");
  EXPECT_FALSE(s.z_synthesized);
  ASSERT_EQ(s.signature.size(), 1u);
  EXPECT_EQ(s.signature[0].name, "E");
  EXPECT_EQ(s.signature[0].arity, 2u);
  // E(x,y) and E(x,x) are distinct atoms.
  EXPECT_EQ(s.matrix.atoms().size(), 2u);
}

TEST(Parse, SignatureIsSortedByName) {
  auto s = parse("exists z. forall x. exists y. (Q(x) & P(x,y) & A(z))");
  ASSERT_EQ(s.signature.size(), 3u);
  EXPECT_EQ(s.signature[0].name, "A");
  EXPECT_EQ(s.signature[1].name, "P");
  EXPECT_EQ(s.signature[2].name, "Q");
  EXPECT_EQ(*s.signature.index_of("Q"), 2u);
  EXPECT_FALSE(s.signature.index_of("Z").has_value());
  EXPECT_EQ(s.signature.max_arity(), 2u);
}

TEST(Parse, MissingLeadingExistentialIsSynthesized) {
  auto s = parse("forall x. exists y. P(x,y)");
  EXPECT_TRUE(s.z_synthesized);
  EXPECT_EQ(s.z, "z");
  // A fresh name avoids clashing with bound variables.
  auto t = parse("forall z. exists z0. P(z,z0)");
  EXPECT_TRUE(t.z_synthesized);
  EXPECT_EQ(t.z, "z1");
}

TEST(Parse, NoExistentialYsIsAllowed) {
  auto s = parse("exists z. forall x. ~(x = z)");
  EXPECT_EQ(s.n(), 0u);
  EXPECT_EQ(s.variable_count(), 2u);
}

TEST(Parse, GroupedQuantifiedVariables) {
  auto s = parse("exists z. forall x. exists a b c. (a = b | b = c)");
  EXPECT_EQ(s.ys, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Parse, CommentsAndWhitespace) {
  auto s = parse("# leading comment\nexists z.\n  forall x. # trailing\n  exists y. x = y\n");
  EXPECT_EQ(print(s), "exists z. forall x. exists y. (x = y)");
}

TEST(Parse, InequalityDesugarsToNegatedEquality) {
  auto s = parse("exists z. forall x. exists y. x != y");
  EXPECT_EQ(print(s), "exists z. forall x. exists y. (~(x = y))");
}

TEST(Parse, Precedence) {
  // ~ binds tighter than &, then |, then ->, then <->.
  auto s = parse("exists z. forall x. P(x) | ~P(z) & P(x) -> P(z) <-> P(x)");
  EXPECT_EQ(print_matrix(s), "(((P(x) | ((~P(z)) & P(x))) -> P(z)) <-> P(x))");
}

TEST(Parse, ImplicationIsRightAssociative) {
  auto s = parse("exists z. forall x. P(x) -> P(z) -> P(x)");
  EXPECT_EQ(print_matrix(s), "(P(x) -> (P(z) -> P(x)))");
}

TEST(Parse, IffIsLeftAssociative) {
  auto s = parse("exists z. forall x. P(x) <-> P(z) <-> P(x)");
  EXPECT_EQ(print_matrix(s), "((P(x) <-> P(z)) <-> P(x))");
}

TEST(Parse, RoundTripsThroughPrinter) {
  const char* texts[] = {
      "exists z. forall x. exists y. (x = y)",
      "exists z. forall x. exists y. ((P(x) -> ~P(y)) & (~P(x) -> P(y)))",
      "exists z. forall x. exists y1. exists y2. ((R(z,x) <-> R(y1,y2)) | ~(y1 = y2))",
  };
  for (const char* t : texts) {
    auto s = parse(t);
    EXPECT_EQ(parse(print(s)), s) << t;
    EXPECT_EQ(print(parse(print(s))), print(s)) << t;
  }
}

TEST(Parse, CorpusRoundTrips) {
  for (const auto& e : testing::CorpusGenerator(7).Take(200)) {
    EXPECT_EQ(parse(print(e.sentence)), e.sentence) << e.text;
  }
}

TEST(ParseErrors, FragmentViolations) {
  EXPECT_EQ(KindOf("exists x. P(x)"), ParseError::Kind::Fragment);
  EXPECT_EQ(KindOf("exists a b. forall x. P(x)"), ParseError::Kind::Fragment);
  EXPECT_EQ(KindOf("forall x. forall y. P(x)"), ParseError::Kind::Fragment);
  EXPECT_EQ(KindOf("exists z. forall x. exists y. forall w. P(x)"), ParseError::Kind::Fragment);
  EXPECT_EQ(KindOf("exists z. forall x. (exists y. P(y))"), ParseError::Kind::Fragment);
  EXPECT_THROW(parse("exists x. P(x)"), FragmentError);
}

TEST(ParseErrors, SymbolsOutsideTheLanguage) {
  EXPECT_EQ(KindOf("exists z. forall x. P(x) & Q"), ParseError::Kind::NullaryRelation);
  EXPECT_EQ(KindOf("exists z. forall x. P()"), ParseError::Kind::NullaryRelation);
  EXPECT_EQ(KindOf("exists z. forall x. P(f(x))"), ParseError::Kind::Grammar);
  EXPECT_EQ(KindOf("exists z. forall x. P(C)"), ParseError::Kind::Grammar);
  EXPECT_EQ(KindOf("exists z. forall x. E(x,x) & E(x)"), ParseError::Kind::ArityConflict);
}

TEST(ParseErrors, Variables) {
  EXPECT_EQ(KindOf("exists z. forall x. P(w)"), ParseError::Kind::Variable);
  EXPECT_EQ(KindOf("exists x. forall x. P(x)"), ParseError::Kind::Variable);
}

TEST(ParseErrors, LexicalAndGrammar) {
  EXPECT_EQ(KindOf("exists z. forall x. P(x) $ P(z)"), ParseError::Kind::Lexical);
  EXPECT_EQ(KindOf("exists z. forall x. (P(x)"), ParseError::Kind::Grammar);
  EXPECT_EQ(KindOf("exists z. forall x P(x)"), ParseError::Kind::Grammar);
  EXPECT_EQ(KindOf("exists z. forall x. P(x) P(z)"), ParseError::Kind::Grammar);
}

TEST(ParseErrors, ReportsPosition) {
  try {
    parse("exists z. forall x.\n  P(x) & Q(w)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 12u);
  }
}

TEST(Matrix, EvaluateAndKleene) {
  auto s = parse("exists z. forall x. exists y. (P(x) -> P(y)) & ~(x = z)");
  // Atom order follows first occurrence: P(x), P(y), x = z.
  ASSERT_EQ(s.matrix.atoms().size(), 3u);
  auto val = [](std::vector<bool> v) { return [v](std::size_t i) { return v[i]; }; };
  EXPECT_TRUE(s.matrix.evaluate(val({true, true, false})));
  EXPECT_FALSE(s.matrix.evaluate(val({true, false, false})));
  EXPECT_FALSE(s.matrix.evaluate(val({false, false, true})));
  // x = z true decides the conjunction even when P(y) is unknown.
  auto tri3 = [](std::vector<Tri> v) { return [v](std::size_t i) { return v[i]; }; };
  EXPECT_EQ(s.matrix.evaluate3(tri3({Tri::True, Tri::Unknown, Tri::True})), Tri::False);
  EXPECT_EQ(s.matrix.evaluate3(tri3({Tri::False, Tri::Unknown, Tri::False})), Tri::True);
  EXPECT_EQ(s.matrix.evaluate3(tri3({Tri::True, Tri::Unknown, Tri::False})), Tri::Unknown);
}

TEST(Signature, ExtractMatchesParsedSignature) {
  auto s = parse("exists z. forall x. exists y. (B(x,y,z) | A(y))");
  EXPECT_EQ(extract_signature(s), s.signature);
  EXPECT_THROW(Signature(std::map<std::string, std::size_t>{{"P", 0}}), std::invalid_argument);
}

}  // namespace
}  // namespace ack

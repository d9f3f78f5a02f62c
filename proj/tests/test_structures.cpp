#include <gtest/gtest.h>

#include "ackermann/construction.hpp"
#include "ackermann/oracle.hpp"
#include "ackermann/serialize.hpp"
#include "corpus.hpp"

namespace ack {
namespace {

const char* kS1 = "exists z. forall x. exists y. (x = y)";
const char* kS2 = "exists z. forall x. exists y. (P(x) & ~P(z))";
const char* kS3 = "exists z. forall x. exists y. (E(x,y) & ~E(x,x))";
const char* kS4 = "exists z. forall x. exists y. (~R(z,x) & R(z,y))";
const char* kS5 = "exists z. forall x. exists y. ((P(x) -> ~P(y)) & (~P(x) -> P(y)))";

TEST(EvalQf, Examples) {
  auto eq = parse("exists z. forall x. exists y. (x = y)");
  FiniteStructure one(eq.signature, 1);
  EXPECT_TRUE(eval_qf(one, {0, 0, 0}, eq));

  auto s3 = parse(kS3);
  FiniteStructure m(s3.signature, 2);
  m.set(0, {0, 1}, true);
  EXPECT_TRUE(eval_qf(m, {0, 0, 1}, s3));
  EXPECT_FALSE(eval_qf(m, {0, 1, 0}, s3));

  auto s4 = parse(kS4);
  FiniteStructure r(s4.signature, 2);
  r.set(0, {0, 1}, true);
  EXPECT_FALSE(eval_qf(r, {0, 1, 1}, s4));
}

TEST(EvalQf, UnboundVariableFaults) {
  auto s3 = parse(kS3);
  FiniteStructure m(s3.signature, 2);
  EXPECT_THROW(eval_qf(m, {0, 0}, s3), std::out_of_range);
  EXPECT_THROW(eval_qf(m, {0, 0, kUnbound}, s3), std::out_of_range);
  EXPECT_THROW(eval_qf(m, {0, 0, 5}, s3), std::out_of_range);
}

TEST(EvalSentence, Examples) {
  auto s1 = parse(kS1);
  EXPECT_TRUE(eval_sentence(FiniteStructure(s1.signature, 1), s1));
  EXPECT_THROW(eval_sentence(FiniteStructure(s1.signature, 0), s1), std::invalid_argument);

  auto s3 = parse(kS3);
  FiniteStructure m(s3.signature, 2);
  m.set(0, {0, 1}, true);
  m.set(0, {1, 0}, true);
  EXPECT_TRUE(eval_sentence(m, s3));
  m.set(0, {1, 0}, false);
  EXPECT_FALSE(eval_sentence(m, s3));
}

TEST(EvalSentence, TabledAgreesOnRandomStructures) {
  std::mt19937_64 rng(17);
  for (const auto& e : testing::CorpusGenerator(21).Take(80)) {
    for (std::size_t k = 1; k <= 3; ++k) {
      FiniteStructure m(e.sentence.signature, k);
      for (std::size_t r = 0; r < e.sentence.signature.size(); ++r) {
        const std::size_t arity = e.sentence.signature[r].arity;
        Tuple t(arity, 0);
        for (;;) {
          if (rng() & 1u) m.set(r, t, true);
          std::size_t j = arity;
          while (j > 0 && ++t[j - 1] == k) t[--j] = 0;
          if (j == 0) break;
        }
      }
      EXPECT_EQ(eval_sentence(m, e.sentence), eval_sentence_tabled(m, e.sentence)) << e.text;
    }
  }
}

TEST(Realize, S3Descriptor) {
  auto s = parse(kS3);
  WitnessDescriptor d;
  d.partition = {0, 1, 2};
  d.class_types = {OneType{0}, OneType{0}, OneType{0}};
  d.atom_values = {{0, {1, 1}, false}, {0, {1, 2}, true}};
  auto r = descriptor_to_structure(s, d);
  EXPECT_EQ(r.structure.size(), 3u);
  EXPECT_EQ(r.structure.extent(0), (std::set<Tuple>{{1, 2}}));
  EXPECT_EQ(r.assignment, (std::vector<Element>{0, 1, 2}));
  EXPECT_TRUE(eval_qf(r.structure, r.assignment, s));
}

TEST(Realize, S1WithPadding) {
  auto s = parse(kS1);
  auto d = find_witness(s, {OneType{}, OneType{}, TypeSet::all(s.signature)}, XzMode::Split);
  ASSERT_TRUE(d);
  auto r = descriptor_to_structure(s, *d);
  // z alone, x = y together, one padding copy of z.
  EXPECT_EQ(r.structure.size(), 3u);
  EXPECT_EQ(r.assignment, (std::vector<Element>{0, 1, 1}));
}

TEST(Realize, S4SplitDescriptor) {
  auto s = parse(kS4);
  auto d = find_witness(s, {OneType{0}, OneType{0}, TypeSet::all(s.signature)}, XzMode::Split);
  ASSERT_TRUE(d);
  auto r = descriptor_to_structure(s, *d);
  EXPECT_EQ(r.structure.extent(0), (std::set<Tuple>{{0, 2}}));
  EXPECT_TRUE(eval_qf(r.structure, r.assignment, s));
}

TEST(Realize, LawOverEnumeratedWitnesses) {
  std::size_t checked = 0;
  for (const auto& e : testing::CorpusGenerator(33).Take(50)) {
    const auto& s = e.sentence;
    const TypeSet all = TypeSet::all(s.signature);
    for (OneType pi0 : enumerate_one_types(s.signature)) {
      for (OneType pi : enumerate_one_types(s.signature)) {
        for (const auto& d : enumerate_witnesses(s, {pi0, pi, all})) {
          auto r = descriptor_to_structure(s, d);
          ASSERT_TRUE(eval_qf(r.structure, r.assignment, s)) << e.text;
          for (Element el = 0; el < r.structure.size(); ++el) {
            OneType want = el < d.class_count() ? d.class_types[el] : d.class_types[d.z_class()];
            ASSERT_EQ(type_of_element(r.structure, el), want) << e.text;
          }
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(Realize, ExtendedDescriptorCarriesPatterns) {
  auto s = parse(kS3);
  ExtLayout L(s.signature);
  auto out = extended_solve(s);
  ASSERT_TRUE(out.certificate);
  for (const auto& [state, d] : out.certificate->ext_strategy) {
    auto r = descriptor_to_structure(s, d);
    EXPECT_TRUE(eval_qf(r.structure, r.assignment, s));
    for (std::size_t c = 0; c < d.class_count(); ++c) {
      if (c == d.z_class()) continue;
      EXPECT_EQ(ext_type_of_element(r.structure, L, d.z_class(), c), d.class_exttypes[c]);
    }
  }
}

TEST(BruteForce, Examples) {
  auto s1 = parse(kS1);
  auto r1 = brute_force_search(s1, 1);
  ASSERT_TRUE(r1.model);
  EXPECT_EQ(r1.model->size(), 1u);
  EXPECT_EQ(r1.enumerated, 1u);

  auto s3 = parse(kS3);
  auto r3 = brute_force_search(s3, 2);
  ASSERT_TRUE(r3.model);
  EXPECT_EQ(r3.model->size(), 2u);
  // Size 1 has two structures, both fail. At size 2 the first model in
  // binary counting order (tuple (0,0) most significant) is E = {(0,1),(1,0)}.
  EXPECT_EQ(r3.model->extent(0), (std::set<Tuple>{{0, 1}, {1, 0}}));
  EXPECT_EQ(r3.enumerated, 2u + 7u);

  auto s2 = parse(kS2);
  auto r2 = brute_force_search(s2, 3);
  EXPECT_FALSE(r2.model);
  EXPECT_EQ(r2.enumerated, 2u + 4u + 8u);

  auto s5 = parse(kS5);
  auto r5 = brute_force_search(s5, 2);
  ASSERT_TRUE(r5.model);
  EXPECT_EQ(r5.model->size(), 2u);

  auto s4 = parse(kS4);
  EXPECT_FALSE(brute_force_search(s4, 4).model);
}

TEST(BruteForce, BudgetAndArguments) {
  auto s2 = parse(kS2);
  try {
    brute_force_search(s2, 5, 20);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.count(), 2u + 4u + 8u);  // size 4 needs 16 more, only 6 remain
  }
  EXPECT_THROW(brute_force_search(s2, 0), std::invalid_argument);
}

TEST(BruteForce, ParallelMatchesSequential) {
  for (const auto& e : testing::CorpusGenerator(41).Take(60)) {
    auto a = brute_force_search(e.sentence, 3, kDefaultMaxStructures, 1);
    auto b = brute_force_search(e.sentence, 3, kDefaultMaxStructures, 4);
    ASSERT_EQ(a.model.has_value(), b.model.has_value()) << e.text;
    if (a.model) {
      EXPECT_EQ(*a.model, *b.model) << e.text;
    }
    EXPECT_EQ(a.enumerated, b.enumerated) << e.text;
  }
}

TEST(Construction, S1StaysSingleton) {
  auto s = parse(kS1);
  auto cert = *gfp_solve(s).certificate;
  auto built = build_model_sequence(s, cert, 5);
  ASSERT_TRUE(std::holds_alternative<StagedModel>(built));
  const auto& sm = std::get<StagedModel>(built);
  ASSERT_EQ(sm.stages.size(), 6u);
  for (const auto& st : sm.stages) EXPECT_EQ(st.size(), 1u);
  EXPECT_TRUE(verify_construction(sm, s, cert).ok());
}

TEST(Construction, S3GrowsByOnePerStage) {
  auto s = parse(kS3);
  auto cert = *gfp_solve(s).certificate;
  auto built = build_model_sequence(s, cert, 2);
  ASSERT_TRUE(std::holds_alternative<StagedModel>(built));
  const auto& sm = std::get<StagedModel>(built);
  std::vector<std::size_t> sizes;
  for (const auto& st : sm.stages) sizes.push_back(st.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(sm.stages[2].extent(0), (std::set<Tuple>{{0, 1}, {1, 2}}));
  EXPECT_TRUE(verify_construction(sm, s, cert).ok());
  ASSERT_EQ(sm.glue.size(), 2u);
  EXPECT_EQ(sm.glue[1].b, 1u);
  EXPECT_EQ(sm.glue[1].assignment, (std::vector<Element>{0, 1, 2}));
}

TEST(Construction, S4ConflictAtStageTwo) {
  auto s = parse(kS4);
  auto cert = *gfp_solve(s).certificate;
  auto built = build_model_sequence(s, cert, 2);
  ASSERT_TRUE(std::holds_alternative<ConstructionConflict>(built));
  const auto& c = std::get<ConstructionConflict>(built);
  EXPECT_EQ(c.stage, 2u);
  EXPECT_EQ(c.element, 1u);
  EXPECT_EQ(c.relation, "R");
  EXPECT_EQ(c.tuple, (Tuple{0, 1}));  // (b0, d)
  EXPECT_FALSE(c.required);
  EXPECT_TRUE(c.existing);
  // One stage is still fine.
  EXPECT_TRUE(std::holds_alternative<StagedModel>(build_model_sequence(s, cert, 1)));
}

TEST(Construction, IdentityConflict) {
  auto s = parse("exists z. forall x. ~(x = z)");
  auto cert = *gfp_solve(s).certificate;
  auto built = build_model_sequence(s, cert, 1);
  ASSERT_TRUE(std::holds_alternative<ConstructionConflict>(built));
  EXPECT_EQ(std::get<ConstructionConflict>(built).relation, "=");
}

TEST(Construction, ExtendedCertificates) {
  for (const char* text : {kS1, kS3, kS5}) {
    auto s = parse(text);
    auto cert = *extended_solve(s).certificate;
    auto built = build_model_sequence(s, cert, 3);
    ASSERT_TRUE(std::holds_alternative<StagedModel>(built)) << text;
    EXPECT_TRUE(verify_construction(std::get<StagedModel>(built), s, cert).ok()) << text;
  }
}

TEST(Verify, DepthZeroAndCorruption) {
  auto s = parse(kS3);
  auto cert = *gfp_solve(s).certificate;
  auto sm0 = std::get<StagedModel>(build_model_sequence(s, cert, 0));
  ASSERT_EQ(sm0.stages.size(), 1u);
  EXPECT_TRUE(verify_construction(sm0, s, cert).ok());

  auto sm = std::get<StagedModel>(build_model_sequence(s, cert, 2));
  // Remove E(1,2) from the last stage only: element 1 loses its witness.
  sm.stages[2].set(0, {1, 2}, false);
  auto rep = verify_construction(sm, s, cert);
  ASSERT_FALSE(rep.ok());
  bool r2 = false;
  for (const auto& f : rep.failures) r2 = r2 || (f.code == "R2" && f.detail.find("element 1") != std::string::npos);
  EXPECT_TRUE(r2);

  auto chain = std::get<StagedModel>(build_model_sequence(s, cert, 2));
  chain.stages[2].set(0, {1, 0}, true);  // changes a tuple inside B1
  auto rc = verify_construction(chain, s, cert);
  ASSERT_FALSE(rc.ok());
  EXPECT_EQ(rc.failures.front().code, "chain");
}

TEST(Serialize, StructureAndStagedShapes) {
  auto s = parse(kS3);
  auto sm = std::get<StagedModel>(build_model_sequence(s, *gfp_solve(s).certificate, 1));
  Json j = staged_to_json(sm);
  EXPECT_EQ(j["b0"], 0);
  EXPECT_EQ(j["stages"][1]["universe_size"], 2);
  EXPECT_EQ(j["stages"][1]["extents"]["E"], Json::parse("[[0,1]]"));
  EXPECT_EQ(j["glue"][0]["type"], "{-E}");
  EXPECT_EQ(j["glue"][0]["element_map"], Json::parse(R"({"0":0,"1":1})"));
}

}  // namespace
}  // namespace ack

#include <gtest/gtest.h>

#include "binpack3d/model.hpp"
#include "support/generators.hpp"

using namespace binpack3d;

TEST(ParseInstance, SmallestLegalFile) {
  Instance inst = parse_instance("1 1\n1 5 5 5\n1 5 5 5");
  ASSERT_EQ(inst.box_count(), 1u);
  ASSERT_EQ(inst.container_count(), 1u);
  EXPECT_EQ(inst.box(1).dims, (Dims{5, 5, 5}));
  EXPECT_EQ(inst.container(1).dims, (Dims{5, 5, 5}));
  EXPECT_EQ(inst.total_box_volume(), 125);
}

TEST(ParseInstance, CommentsAndOrderPreserved) {
  Instance inst = parse_instance("# header comment\n2 1\n2 1 2 3\n# box one\n1 4 5 6\n1 10 10 10\n");
  EXPECT_EQ(inst.boxes()[0].id, 2);
  EXPECT_EQ(inst.boxes()[1].id, 1);
  EXPECT_EQ(inst.box(1).dims, (Dims{4, 5, 6}));
}

TEST(ParseInstance, RejectsNonPositiveDimension) {
  try {
    parse_instance("1 1\n1 0 3 3\n1 5 5 5\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("non-positive"), std::string::npos);
  }
}

TEST(ParseInstance, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{999};
  };
  EXPECT_EQ(line_of("2 1\n1 1 1 1\n1 2 2 2\n1 5 5 5\n"), 3u);    // duplicate box id
  EXPECT_EQ(line_of("1 1\n2 1 1 1\n1 5 5 5\n"), 2u);             // box id out of range
  EXPECT_EQ(line_of("1 1\n1 1 x 1\n1 5 5 5\n"), 2u);             // malformed integer
  EXPECT_EQ(line_of("1 1\n1 1 1\n1 5 5 5\n"), 2u);               // too few fields
  EXPECT_EQ(line_of("1 2\n1 1 1 1\n1 5 5 5\n1 5 5 5\n"), 4u);    // duplicate container id
  EXPECT_EQ(line_of("1 1 1\n1 1 1 1\n1 5 5 5\n"), 1u);           // bad header
  EXPECT_THROW(parse_instance("2 1\n1 1 1 1\n1 5 5 5\n"), ParseError);  // missing line
  EXPECT_THROW(parse_instance(""), ParseError);
}

TEST(ParseInstance, RejectsVolumeOverflow) {
  EXPECT_THROW(parse_instance("1 1\n1 4000000 4000000 4000000\n1 1 1 1\n"), ParseError);
}

TEST(ParseInstance, RoundTripsRandomInstances) {
  Stream rng(11);
  for (int t = 0; t < 100; ++t) {
    Instance inst = testgen::random_instance(rng, {});
    std::string text = serialize_instance(inst);
    Instance back = parse_instance(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(serialize_instance(back), text);
  }
}

TEST(Chromosome, SerializeExamples) {
  EXPECT_EQ(serialize_chromosome({{1}, {1}}), "1|1");
  EXPECT_EQ(serialize_chromosome({{2, 1, 3}, {1, 2}}), "2,1,3|1,2");
}

TEST(Chromosome, ParseExamples) {
  EXPECT_EQ(parse_chromosome("1|1"), (Chromosome{{1}, {1}}));
  EXPECT_EQ(parse_chromosome("3,1,2|2,1"), (Chromosome{{3, 1, 2}, {2, 1}}));
  EXPECT_THROW(parse_chromosome("1,1|1"), ParseError);
}

TEST(Chromosome, ParseRejectsNonPermutations) {
  for (const char* bad : {"1,3|1", "0|1", "1|", "|1", "1", "1|1|1", "1,,2|1", "2|1", "1|1,2,2", "a|1", "1 |1"})
    EXPECT_THROW(parse_chromosome(bad), ParseError) << bad;
}

TEST(Chromosome, RoundTripAndCanonicalText) {
  Stream rng(5);
  std::vector<std::pair<Chromosome, std::string>> seen;
  for (int t = 0; t < 1000; ++t) {
    auto c = testgen::random_chromosome(rng, 1 + rng.below(8), 1 + rng.below(4));
    auto text = serialize_chromosome(c);
    EXPECT_EQ(parse_chromosome(text), c);
    if (seen.size() < 50) seen.emplace_back(c, text);
  }
  for (const auto& [a, ta] : seen)
    for (const auto& [b, tb] : seen) EXPECT_EQ(a == b, ta == tb);
}

TEST(Chromosome, MatchesInstance) {
  Instance inst = parse_instance("2 1\n1 1 1 1\n2 1 1 1\n1 5 5 5\n");
  EXPECT_TRUE(matches({{2, 1}, {1}}, inst));
  EXPECT_FALSE(matches({{1}, {1}}, inst));
  EXPECT_FALSE(matches({{1, 2}, {1, 2}}, inst));
}

TEST(Decimal, ShortestRoundTrip) {
  EXPECT_EQ(format_decimal(1.0), "1");
  EXPECT_EQ(format_decimal(0.6), "0.6");
  Stream rng(3);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.uniform();
    double back = -1;
    ASSERT_TRUE(parse_decimal(format_decimal(v), back));
    EXPECT_EQ(back, v);
  }
}

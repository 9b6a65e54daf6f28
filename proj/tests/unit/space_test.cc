#include "mixate/space.hpp"

#include <gtest/gtest.h>

#include "mixate/error.hpp"

namespace mixate {
namespace {

TEST(AlphabetTest, RejectsSingletons) {
  EXPECT_THROW(Alphabet(1), Error);
  EXPECT_THROW(Alphabet(0), Error);
  EXPECT_EQ(Alphabet(3).size(), 3u);
}

TEST(EncodeTest, BigEndianExamples) {
  EXPECT_EQ(encode_config(Config{0, 0, 0}, Alphabet(2)), 0u);
  EXPECT_EQ(encode_config(Config{1, 0, 1}, Alphabet(2)), 5u);
  EXPECT_EQ(encode_config(Config{2, 1}, Alphabet(3)), 7u);
}

TEST(EncodeTest, SymbolOutOfRange) {
  try {
    encode_config(Config{0, 2}, Alphabet(2));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
  }
}

TEST(StateSpaceTest, EncodeDecodeBijection) {
  StateSpace space(Alphabet(3), 4);
  ASSERT_EQ(space.size(), 81u);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Config x = space.decode(i);
    EXPECT_EQ(space.encode(x), i);
    EXPECT_EQ(encode_config(x, space.alphabet()), i);
    for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(space.symbol_at(i, s), x[s]);
  }
}

TEST(StateSpaceTest, SliceHelpers) {
  StateSpace space(Alphabet(3), 3);
  const std::size_t x = space.encode(Config{2, 1, 0});
  EXPECT_EQ(space.with_symbol(x, 1, 2), space.encode(Config{2, 2, 0}));
  EXPECT_EQ(space.slice_base(x, 0), space.encode(Config{0, 1, 0}));
  EXPECT_EQ(space.hamming(x, space.encode(Config{0, 1, 2})), 2u);
}

TEST(StateSpaceTest, RefusesOversizedSpaces) {
  try {
    StateSpace(Alphabet(2), 21);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStateSpaceTooLarge);
  }
  EXPECT_NO_THROW(StateSpace(Alphabet(2), 21, std::size_t{1} << 21));
  EXPECT_THROW(StateSpace(Alphabet(2), 0), Error);
}

TEST(StateSpaceTest, WrongLengthConfig) {
  StateSpace space(Alphabet(2), 3);
  EXPECT_THROW(space.encode(Config{0, 1}), Error);
}

}  // namespace
}  // namespace mixate

#include "colcomm/io.hpp"

#include <gtest/gtest.h>

namespace colcomm::io {
namespace {

TEST(Hex, PaddingAndCase) {
  EXPECT_EQ(to_hex(0, 1), "0");
  EXPECT_EQ(to_hex(0xab, 4), "00ab");
  EXPECT_EQ(full_hex_digits(2), 1u);
  EXPECT_EQ(full_hex_digits(8), 2u);
  EXPECT_EQ(full_hex_digits(9), 3u);
  EXPECT_EQ(half_hex_digits(8), 1u);
  EXPECT_EQ(half_hex_digits(18), 3u);
  EXPECT_EQ(from_hex("00AB"), 0xabu);
  EXPECT_THROW(to_hex(0x100, 2), std::invalid_argument);
  EXPECT_THROW(from_hex(""), FormatError);
  EXPECT_THROW(from_hex("0x1"), FormatError);
}

TEST(InstanceJson, FullRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto z = gen_promise(64, seed % 2 ? PromiseClass::OneToOne : PromiseClass::TwoToOne, seed);
    const auto j = to_json(z);
    EXPECT_EQ(j.at("form"), "full");
    EXPECT_EQ(j.at("z")[0].get<std::string>().size(), 2u);
    EXPECT_EQ(std::get<NumberList>(instance_from_json(json::parse(j.dump()))), z);
  }
}

TEST(InstanceJson, BipartiteRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = gen_balanced_promise(256, PromiseClass::TwoToOne, seed);
    const auto back = std::get<BipartitePair>(instance_from_json(json::parse(to_json(p).dump())));
    EXPECT_EQ(back.x(), p.x());
    EXPECT_EQ(back.y(), p.y());
    EXPECT_EQ(as_number_list(back), concat(p));
    EXPECT_EQ(as_bipartite(Instance{concat(p)}).y(), p.y());
  }
}

TEST(InstanceJson, Malformed) {
  EXPECT_THROW(instance_from_json(json::parse(R"({"form":"full","z":["0"]})")), FormatError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"form":"weird"})")), FormatError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"form":"full","z":[1]})")), FormatError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"form":"full","z":["4"]})")), FormatError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":3,"form":"bipartite","x":["0"],"y":["0"]})")), FormatError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":"two","form":"full","z":["0"]})")), FormatError);
  EXPECT_THROW(as_bipartite(Instance{NumberList(3, {1, 2})}), FormatError);
}

TEST(GadgetJson, RoundTrip) {
  const auto g = gadget_from_json(json::parse(to_json(ver_gadget()).dump()));
  EXPECT_EQ(g.table(), ver_gadget().table());
  const auto S = group_from_json(json::parse(to_json(ver_group()).dump()));
  EXPECT_EQ(S.elements(), ver_group().elements());
  EXPECT_THROW(gadget_from_json(json::parse(R"({"k":1,"table":[[0,1]]})")), FormatError);
  EXPECT_THROW(group_from_json(json::parse(R"([{"row":[0,0],"col":[0,1]}])")), FormatError);
  EXPECT_THROW(group_from_json(json::parse(R"({"row":[0,1]})")), FormatError);
}

TEST(ComposedJson, RoundTrip) {
  const auto c = gen_composed(ver_gadget(), 8, PromiseClass::TwoToOne, 4);
  const auto back = composed_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(back.alice(), c.alice());
  EXPECT_EQ(back.bob(), c.bob());
  auto j = to_json(c);
  j["n"] = 5;
  EXPECT_THROW(composed_from_json(j), FormatError);
}

}  // namespace
}  // namespace colcomm::io

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "colcomm/gadgets.hpp"
#include "colcomm/instances.hpp"
#include "colcomm/unfold.hpp"

// JSON encodings:
//
//   instance  {"n": n, "form": "full", "z": [hex...]}       hex width ceil(n/4)
//             {"n": n, "form": "bipartite", "x": [...], "y": [...]}
//                                                         hex width ceil(n/8) per half
//   gadget    {"k": k, "table": [[0/1, ...], ...]}
//   group     [{"row": [perm], "col": [perm]}, ...]
//   composed  {"k": k, "n": n, "alice": [[...], ...], "bob": [[...], ...]}
namespace colcomm::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string to_hex(Value v, std::size_t digits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(digits, '0');
  for (std::size_t i = digits; i-- > 0; v >>= 4) s[i] = kDigits[v & 0xf];
  if (v != 0) throw std::invalid_argument("value wider than hex field");
  return s;
}

inline Value from_hex(std::string_view s) {
  if (s.empty() || s.size() > 16) throw FormatError("bad hex string '" + std::string(s) + "'");
  Value v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw FormatError("bad hex digit in '" + std::string(s) + "'");
    v = (v << 4) | Value(d);
  }
  return v;
}

inline std::size_t full_hex_digits(unsigned n) { return (n + 3) / 4; }
inline std::size_t half_hex_digits(unsigned n) { return (n + 7) / 8; }

using Instance = std::variant<NumberList, BipartitePair>;

namespace detail {

inline std::vector<Value> hex_list(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw FormatError(std::string("missing array '") + key + "'");
  std::vector<Value> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_string()) throw FormatError(std::string("entries of '") + key + "' must be hex strings");
    out.push_back(from_hex(e.get<std::string>()));
  }
  return out;
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline json to_json(const NumberList& z) {
  json arr = json::array();
  for (Value v : z.entries()) arr.push_back(to_hex(v, full_hex_digits(z.bits())));
  return {{"n", z.bits()}, {"form", "full"}, {"z", std::move(arr)}};
}

inline json to_json(const BipartitePair& p) {
  json xs = json::array(), ys = json::array();
  const auto w = half_hex_digits(p.bits());
  for (Value v : p.x()) xs.push_back(to_hex(v, w));
  for (Value v : p.y()) ys.push_back(to_hex(v, w));
  return {{"n", p.bits()}, {"form", "bipartite"}, {"x", std::move(xs)}, {"y", std::move(ys)}};
}

inline Instance instance_from_json(const json& j) {
  const auto n = detail::get_field<unsigned>(j, "n");
  const auto form = detail::get_field<std::string>(j, "form");
  try {
    if (form == "full") return NumberList(n, detail::hex_list(j, "z"));
    if (form == "bipartite") {
      if (n % 2 != 0) throw FormatError("bipartite instance needs even n");
      return BipartitePair(n / 2, detail::hex_list(j, "x"), detail::hex_list(j, "y"));
    }
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  throw FormatError("unknown instance form '" + form + "'");
}

inline NumberList as_number_list(const Instance& inst) {
  if (const auto* z = std::get_if<NumberList>(&inst)) return *z;
  return concat(std::get<BipartitePair>(inst));
}

inline BipartitePair as_bipartite(const Instance& inst) {
  if (const auto* p = std::get_if<BipartitePair>(&inst)) return *p;
  try {
    return split(std::get<NumberList>(inst));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const Gadget& g) { return {{"k", g.k()}, {"table", g.table()}}; }

inline Gadget gadget_from_json(const json& j) {
  try {
    return Gadget(detail::get_field<unsigned>(j, "k"),
                  detail::get_field<std::vector<std::vector<std::uint8_t>>>(j, "table"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const SymmetryGroup& S) {
  json arr = json::array();
  for (const auto& e : S.elements()) arr.push_back({{"row", e.row.image()}, {"col", e.col.image()}});
  return arr;
}

inline SymmetryGroup group_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("group must be a JSON array");
  try {
    std::vector<GroupElement> els;
    for (const auto& e : j) {
      els.emplace_back(Permutation(detail::get_field<std::vector<std::uint32_t>>(e, "row")),
                       Permutation(detail::get_field<std::vector<std::uint32_t>>(e, "col")));
    }
    return SymmetryGroup(std::move(els));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const ComposedInput& c) {
  return {{"k", c.k()}, {"n", c.n()}, {"alice", c.alice()}, {"bob", c.bob()}};
}

inline ComposedInput composed_from_json(const json& j) {
  try {
    ComposedInput c(detail::get_field<unsigned>(j, "k"), detail::get_field<std::vector<Block>>(j, "alice"),
                    detail::get_field<std::vector<Block>>(j, "bob"));
    if (c.n() != detail::get_field<unsigned>(j, "n")) throw FormatError("field 'n' disagrees with block count");
    return c;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace colcomm::io

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace colcomm {

/// A cell (x, y) of a gadget's domain.
using Point = std::pair<std::uint32_t, std::uint32_t>;

/// Bipartite boolean function g : {0,1}^k x {0,1}^k -> {0,1} kept as its
/// 2^k x 2^k truth table, table[x][y] = g(x, y).
class Gadget {
 public:
  Gadget(unsigned k, std::vector<std::vector<std::uint8_t>> table) : k_(k) {
    if (k_ == 0 || k_ > 12) throw std::invalid_argument("gadget width k must be in [1, 12]");
    const std::size_t side = std::size_t{1} << k_;
    if (table.size() != side) throw std::invalid_argument("gadget table must have 2^k rows");
    cells_.reserve(side * side);
    for (const auto& row : table) {
      if (row.size() != side) throw std::invalid_argument("gadget table must have 2^k columns");
      for (auto bit : row) {
        if (bit > 1) throw std::invalid_argument("gadget table entries must be 0 or 1");
        cells_.push_back(bit);
      }
    }
  }

  unsigned k() const noexcept { return k_; }
  std::uint32_t side() const noexcept { return std::uint32_t{1} << k_; }

  int eval(std::uint32_t x, std::uint32_t y) const {
    if (x >= side() || y >= side()) throw std::out_of_range("gadget input out of range");
    return cells_[std::size_t{x} * side() + y];
  }

  std::vector<std::vector<std::uint8_t>> table() const {
    std::vector<std::vector<std::uint8_t>> t(side());
    for (std::uint32_t x = 0; x < side(); ++x) {
      t[x].assign(cells_.begin() + std::ptrdiff_t(x) * side(),
                  cells_.begin() + std::ptrdiff_t(x + 1) * side());
    }
    return t;
  }

  /// g^{-1}(b) in row-major order.
  std::vector<Point> preimage(int b) const {
    std::vector<Point> out;
    for (std::uint32_t x = 0; x < side(); ++x) {
      for (std::uint32_t y = 0; y < side(); ++y) {
        if (eval(x, y) == b) out.emplace_back(x, y);
      }
    }
    return out;
  }

  friend bool operator==(const Gadget&, const Gadget&) = default;

 private:
  unsigned k_;
  std::vector<std::uint8_t> cells_;
};

/// Permutation of {0, ..., size-1} as a lookup array.
class Permutation {
 public:
  explicit Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (auto v : image_) {
      if (v >= image_.size() || seen[v]) throw std::invalid_argument("not a permutation");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t size) {
    std::vector<std::uint32_t> img(size);
    for (std::size_t i = 0; i < size; ++i) img[i] = static_cast<std::uint32_t>(i);
    return Permutation(std::move(img));
  }

  std::size_t size() const noexcept { return image_.size(); }
  std::uint32_t operator()(std::uint32_t v) const {
    if (v >= image_.size()) throw std::out_of_range("permutation argument out of range");
    return image_[v];
  }
  const std::vector<std::uint32_t>& image() const noexcept { return image_; }

  /// (*this after inner)(v) = (*this)(inner(v)).
  Permutation after(const Permutation& inner) const {
    if (inner.size() != size()) throw std::invalid_argument("permutation sizes differ");
    std::vector<std::uint32_t> img(size());
    for (std::size_t v = 0; v < size(); ++v) img[v] = image_[inner.image_[v]];
    return Permutation(std::move(img));
  }

  Permutation inverse() const {
    std::vector<std::uint32_t> img(size());
    for (std::size_t v = 0; v < size(); ++v) img[image_[v]] = static_cast<std::uint32_t>(v);
    return Permutation(std::move(img));
  }

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> image_;
};

/// s = (s^A, s^B): permutes rows by s^A and columns by s^B.
struct GroupElement {
  Permutation row;
  Permutation col;

  GroupElement(Permutation r, Permutation c) : row(std::move(r)), col(std::move(c)) {
    if (row.size() != col.size()) throw std::invalid_argument("row/col permutations differ in size");
  }

  static GroupElement identity(std::size_t size) {
    return {Permutation::identity(size), Permutation::identity(size)};
  }

  std::size_t domain_size() const noexcept { return row.size(); }
  GroupElement after(const GroupElement& inner) const {
    return {row.after(inner.row), col.after(inner.col)};
  }
  GroupElement inverse() const { return {row.inverse(), col.inverse()}; }

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

inline Point act(const GroupElement& s, std::uint32_t x, std::uint32_t y) {
  return {s.row(x), s.col(y)};
}

/// Ordered list of group elements; element(1) is S(1).
class SymmetryGroup {
 public:
  explicit SymmetryGroup(std::vector<GroupElement> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("a group has at least the identity");
    const auto size = elements_.front().domain_size();
    std::set<GroupElement> seen;
    for (const auto& e : elements_) {
      if (e.domain_size() != size) throw std::invalid_argument("group elements act on different domains");
      if (!seen.insert(e).second) throw std::invalid_argument("group elements must be distinct");
    }
  }

  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t domain_size() const noexcept { return elements_.front().domain_size(); }
  const std::vector<GroupElement>& elements() const noexcept { return elements_; }

  /// 1-based access matching S(1), ..., S(|S|).
  const GroupElement& element(std::size_t one_based) const { return elements_.at(one_based - 1); }

  std::set<GroupElement> as_set() const { return {elements_.begin(), elements_.end()}; }

  /// Empty when the identity is present and the set is closed under
  /// composition and inverse; otherwise a description of the first failure.
  std::optional<std::string> group_axiom_violation() const {
    const auto set = as_set();
    if (!set.contains(GroupElement::identity(domain_size()))) return "identity missing";
    for (std::size_t a = 0; a < elements_.size(); ++a) {
      if (!set.contains(elements_[a].inverse())) {
        return "inverse of S(" + std::to_string(a + 1) + ") missing";
      }
      for (std::size_t b = 0; b < elements_.size(); ++b) {
        if (!set.contains(elements_[a].after(elements_[b]))) {
          return "S(" + std::to_string(a + 1) + ") after S(" + std::to_string(b + 1) + ") missing";
        }
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<GroupElement> elements_;
};

inline std::vector<Point> orbit(const SymmetryGroup& S, std::uint32_t x, std::uint32_t y) {
  std::set<Point> pts;
  for (const auto& s : S.elements()) pts.insert(act(s, x, y));
  return {pts.begin(), pts.end()};
}

/// Closure of the generators under composition.
///
/// Breadth-first from the identity: elements are dequeued in discovery
/// order and each generator (in index order) is applied after them; new
/// products are appended. A finite permutation group is closed under
/// inverse once it is closed under composition.
inline SymmetryGroup close_group(const std::vector<GroupElement>& generators, std::size_t domain_size) {
  for (const auto& g : generators) {
    if (g.domain_size() != domain_size) throw std::invalid_argument("generator acts on the wrong domain");
  }
  std::vector<GroupElement> order{GroupElement::identity(domain_size)};
  std::set<GroupElement> seen{order.front()};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& g : generators) {
      GroupElement next = g.after(order[head]);
      if (seen.insert(next).second) order.push_back(std::move(next));
    }
  }
  return SymmetryGroup(std::move(order));
}

namespace detail {

template <class F>
Permutation perm_from(std::uint32_t size, F f) {
  std::vector<std::uint32_t> img(size);
  for (std::uint32_t v = 0; v < size; ++v) img[v] = f(v);
  return Permutation(std::move(img));
}

// (x, y) -> (ax + b, cy + d) over Z_4.
inline GroupElement z4_affine(int a, int b, int c, int d) {
  auto m4 = [](int v) { return static_cast<std::uint32_t>(((v % 4) + 4) % 4); };
  return {perm_from(4, [&](std::uint32_t x) { return m4(a * int(x) + b); }),
          perm_from(4, [&](std::uint32_t y) { return m4(c * int(y) + d); })};
}

}  // namespace detail

/// Ver(x, y) = 1 iff x + y mod 4 is 2 or 3, with x, y in Z_4 as 2-bit values.
inline Gadget ver_gadget() {
  std::vector<std::vector<std::uint8_t>> t(4, std::vector<std::uint8_t>(4));
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) t[x][y] = ((x + y) % 4 >= 2) ? 1 : 0;
  }
  return Gadget(2, std::move(t));
}

/// The eight symmetries of Ver in their canonical listing:
/// (x,y), (x+1,y-1), (x+2,y-2), (x+3,y-3), (1-x,-y), (2-x,3-y), (3-x,2-y), (-x,1-y).
inline SymmetryGroup ver_group() {
  using detail::z4_affine;
  return SymmetryGroup({
      z4_affine(1, 0, 1, 0),
      z4_affine(1, 1, 1, -1),
      z4_affine(1, 2, 1, -2),
      z4_affine(1, 3, 1, -3),
      z4_affine(-1, 1, -1, 0),
      z4_affine(-1, 2, -1, 3),
      z4_affine(-1, 3, -1, 2),
      z4_affine(-1, 0, -1, 1),
  });
}

/// Generators (x+1, y-1) and (1-x, -y) of Ver's symmetry group.
inline std::vector<GroupElement> ver_generators() {
  return {detail::z4_affine(1, 1, 1, -1), detail::z4_affine(-1, 1, -1, 0)};
}

/// 2-bit XOR: k = 1, g(x, y) = x xor y.
inline Gadget xor_gadget() { return Gadget(1, {{0, 1}, {1, 0}}); }

/// {identity, (not x, not y)}.
inline SymmetryGroup xor_group() {
  const Permutation flip({1, 0});
  return SymmetryGroup({GroupElement::identity(2), GroupElement(flip, flip)});
}

enum class RegularityCondition {
  None,
  NotAGroup,
  EmptyPreimage,
  OrbitMismatch,
  NotUnique,
};

inline std::string_view to_string(RegularityCondition c) noexcept {
  switch (c) {
    case RegularityCondition::None: return "none";
    case RegularityCondition::NotAGroup: return "not-a-group";
    case RegularityCondition::EmptyPreimage: return "empty-preimage";
    case RegularityCondition::OrbitMismatch: return "orbit-mismatch";
    case RegularityCondition::NotUnique: return "not-unique";
  }
  return "none";
}

struct RegularityWitness {
  RegularityCondition condition = RegularityCondition::None;
  int value = 0;                 // b of the preimage g^{-1}(b) involved
  Point source{};                // (x1, y1)
  std::optional<Point> target;   // (x2, y2) for uniqueness failures
  std::size_t mapping_count = 0; // number of s with s.(x1,y1) = (x2,y2)
  std::vector<Point> orbit;      // for orbit mismatches
  std::string detail;

  std::string describe() const {
    std::ostringstream os;
    os << to_string(condition) << " b=" << value << " source=(" << source.first << ","
       << source.second << ")";
    if (target) {
      os << " target=(" << target->first << "," << target->second << ") count=" << mapping_count;
    }
    if (!orbit.empty()) {
      os << " orbit={";
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        os << (i ? "," : "") << "(" << orbit[i].first << "," << orbit[i].second << ")";
      }
      os << "}";
    }
    if (!detail.empty()) os << " " << detail;
    return os.str();
  }
};

struct RegularityReport {
  std::size_t group_order = 0;
  std::size_t preimage_sizes[2] = {0, 0};
  std::size_t uniqueness_checks = 0;
  std::optional<RegularityWitness> witness;

  bool passed() const noexcept { return !witness.has_value(); }
};

/// Decides whether S makes g regular: S must be a group acting on each
/// nonempty g^{-1}(b) freely and transitively, i.e. for every ordered pair
/// (p, q) in the same preimage exactly one s in S maps p to q.
///
/// Both preimages are required to be nonempty; with that, |S| = |g^{-1}(0)|
/// = |g^{-1}(1)| = 2^{2k-1} follows and is re-checked before returning.
inline RegularityReport check_regular(const Gadget& g, const SymmetryGroup& S) {
  if (S.domain_size() != g.side()) {
    throw std::invalid_argument("group acts on " + std::to_string(S.domain_size()) +
                                " points but gadget side is " + std::to_string(g.side()));
  }
  RegularityReport report;
  report.group_order = S.order();
  auto fail = [&](RegularityCondition c, int b) -> RegularityWitness& {
    report.witness.emplace();
    report.witness->condition = c;
    report.witness->value = b;
    return *report.witness;
  };

  if (auto why = S.group_axiom_violation()) {
    fail(RegularityCondition::NotAGroup, 0).detail = *why;
    return report;
  }

  for (int b = 0; b <= 1; ++b) {
    report.preimage_sizes[b] = g.preimage(b).size();
    if (report.preimage_sizes[b] == 0) {
      fail(RegularityCondition::EmptyPreimage, b);
      return report;
    }
  }

  for (int b = 0; b <= 1; ++b) {
    const auto pre = g.preimage(b);

    for (const auto& p : pre) {
      auto orb = orbit(S, p.first, p.second);
      if (orb != pre) {
        auto& w = fail(RegularityCondition::OrbitMismatch, b);
        w.source = p;
        w.orbit = std::move(orb);
        return report;
      }
    }

    for (const auto& p : pre) {
      std::map<Point, std::size_t> hits;
      for (const auto& s : S.elements()) ++hits[act(s, p.first, p.second)];
      for (const auto& q : pre) {
        ++report.uniqueness_checks;
        const auto it = hits.find(q);
        const std::size_t count = it == hits.end() ? 0 : it->second;
        if (count != 1) {
          auto& w = fail(RegularityCondition::NotUnique, b);
          w.source = p;
          w.target = q;
          w.mapping_count = count;
          return report;
        }
      }
    }
  }

  const std::size_t expected = std::size_t{1} << (2 * g.k() - 1);
  if (S.order() != expected || report.preimage_sizes[0] != expected ||
      report.preimage_sizes[1] != expected) {
    throw std::logic_error("regular action found on an unbalanced gadget");
  }
  return report;
}

/// A gadget bundled with a group that has been checked to make it regular.
class RegularGadget {
 public:
  RegularGadget(Gadget g, SymmetryGroup S) : gadget_(std::move(g)), group_(std::move(S)) {
    const auto report = check_regular(gadget_, group_);
    if (!report.passed()) {
      throw std::invalid_argument("group does not make the gadget regular: " +
                                  report.witness->describe());
    }
  }

  const Gadget& gadget() const noexcept { return gadget_; }
  const SymmetryGroup& group() const noexcept { return group_; }
  unsigned k() const noexcept { return gadget_.k(); }

 private:
  Gadget gadget_;
  SymmetryGroup group_;
};

inline RegularGadget ver_regular() { return {ver_gadget(), ver_group()}; }
inline RegularGadget xor_regular() { return {xor_gadget(), xor_group()}; }

}  // namespace colcomm

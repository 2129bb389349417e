#pragma once

#include "gex/triangle.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gex::dsl {

/// Value kinds, usable as bit masks in signatures.
enum Kind : unsigned {
  kPoint = 1,
  kLine = 2,
  kCircle = 4,
  kScalar = 8,
  kMultiPoint = 16,
  kMultiCircle = 32,
  kName = 64,
  kSelector = 128,
  kPredicate = 256,
  kGeo = kPoint | kLine | kCircle,
  kMulti = kMultiPoint | kMultiCircle,
};

inline std::string kind_name(unsigned k) {
  switch (k) {
    case kPoint: return "point";
    case kLine: return "line";
    case kCircle: return "circle";
    case kScalar: return "scalar";
    case kMultiPoint: return "point list";
    case kMultiCircle: return "circle list";
    case kName: return "name";
    case kSelector: return "selector";
    case kPredicate: return "predicate";
  }
  std::string out;
  for (unsigned bit = 1; bit <= kPredicate; bit <<= 1) {
    if (k & bit) {
      if (!out.empty()) out += " or ";
      out += kind_name(bit);
    }
  }
  return out;
}

/// Result of `select(...)` and other argument-dependent results are marked here.
inline constexpr unsigned kElementOfFirst = 1u << 16;

struct Overload {
  std::vector<unsigned> params;  // one mask per parameter
  unsigned result = 0;
  bool variadic = false;          // last parameter repeats (at least once)
};

struct Signature {
  std::string name;
  std::vector<Overload> overloads;
};

/// Names accepted as the last argument of cevian(...).
inline std::optional<CenterKind> cevian_center(std::string_view name) {
  if (name == "median") return CenterKind::Centroid;
  if (name == "bisector") return CenterKind::Incenter;
  if (name == "altitude") return CenterKind::Orthocenter;
  return center_from_name(name);
}

inline bool is_selector_keyword(std::string_view name) {
  return name == "smallest" || name == "largest" || name == "first" || name == "last";
}

/// Scalars available in every expression context.
inline bool is_builtin_scalar(std::string_view name) {
  return name == "a" || name == "b" || name == "c" || name == "s" || name == "K" || name == "pi";
}

inline const std::vector<Signature>& signatures() {
  static const std::vector<Signature> table = [] {
    std::vector<Signature> t;
    auto add = [&](std::string name, std::vector<Overload> ov) { t.push_back({std::move(name), std::move(ov)}); };
    const unsigned P = kPoint, L = kLine, C = kCircle, S = kScalar;

    for (CenterKind k : kAllCenters) add(std::string(center_name(k)), {{{P, P, P}, P}});
    add("excenter", {{{P, P, P}, P}});
    add("midpoint", {{{P, P}, P}});
    add("foot", {{{P, L}, P}});
    add("reflect", {{{P, L}, P}});
    add("center", {{{C}, P}});
    add("touch", {{{L}, P}, {{C, L}, P}, {{C, C}, P}});
    add("pointon", {{{P, P, S}, P}});
    add("cevian", {{{P, P, P, kName}, P}});
    add("intersect", {{{L, L}, P}, {{L, C}, kMultiPoint}, {{C, L}, kMultiPoint}, {{C, C}, kMultiPoint}});

    add("line", {{{P, P}, L}});
    add("parallel", {{{P, L}, L}});
    add("perpendicular", {{{P, L}, L}});
    add("perpbisector", {{{P, P}, L}});

    add("incircle", {{{P, P, P}, C}});
    add("circumcircle", {{{P, P, P}, C}});
    add("circle3", {{{P, P, P}, C}});
    add("ninepointcircle", {{{P, P, P}, C}});
    add("excircle", {{{P, P, P}, C}});
    add("mixtilinear", {{{P, P, P}, C}});
    add("circle", {{{P, P}, C}, {{P, S}, C}});
    add("apollonius", {{{kGeo, kGeo, kGeo}, kMultiCircle}});

    add("dist", {{{P, P}, S}});
    add("angle", {{{P, P, P}, S}});
    add("area", {{{P, P, P}, S, true}});
    add("sarea", {{{P, P, P}, S}});
    add("radius", {{{C}, S}});
    add("inradius", {{{P, P, P}, S}});
    add("circumradius", {{{P, P, P}, S}});
    add("sqrt", {{{S}, S}});
    add("abs", {{{S}, S}});
    add("deg", {{{S}, S}});

    add("select", {{{kMulti, kSelector}, kElementOfFirst, true}});
    add("inside", {{{P, P, P}, kSelector}});
    add("near", {{{P}, kSelector}});
    add("far", {{{P}, kSelector}});
    add("other", {{{P}, kSelector}});
    add("internal", {{{C}, kSelector}});
    add("external", {{{C}, kSelector}});
    add("sameside", {{{L, P}, kSelector}});

    add("colline", {{{P, P, P}, kPredicate}});
    add("concur", {{{L, L, L}, kPredicate}});
    add("perp", {{{L, L}, kPredicate}});
    add("isparallel", {{{L, L}, kPredicate}});
    add("on", {{{P, L}, kPredicate}, {{P, C}, kPredicate}});
    add("tangent", {{{C, L}, kPredicate}, {{L, C}, kPredicate}, {{C, C}, kPredicate}});
    add("coincide", {{{P, P}, kPredicate}});
    add("congruent", {{{C, C}, kPredicate}});
    return t;
  }();
  return table;
}

inline const Signature* find_signature(std::string_view name) {
  const auto& t = signatures();
  auto it = std::find_if(t.begin(), t.end(), [&](const Signature& s) { return s.name == name; });
  return it == t.end() ? nullptr : &*it;
}

inline bool is_reserved(std::string_view name) {
  return is_builtin_scalar(name) || name == "assert" || name == "triangle" || name == "constrain" ||
         find_signature(name) != nullptr || is_selector_keyword(name);
}

}  // namespace gex::dsl

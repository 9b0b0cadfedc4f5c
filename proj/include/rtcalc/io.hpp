#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "rtcalc/cycles.hpp"
#include "rtcalc/rtclasses.hpp"

namespace rtcalc {

using json = nlohmann::json;

// Tree schema: vertices in layout order (root first, then the vertex beyond
// each edge in canonical edge order), edges as [head vertex, tail vertex],
// half-edge exponents keyed "h<e>" / "t<e>", leg exponents keyed by label.
// With genus_root, vertex 0 is the genus-g vertex and label 0 is not a leg.
[[nodiscard]] json tree_to_json(const Tree& t, bool genus_root = false);
[[nodiscard]] Tree tree_from_json(const json& j, bool* genus_root = nullptr);

[[nodiscard]] json class_to_json(const Class0& c);
[[nodiscard]] Class0 class_from_json(const json& j);
[[nodiscard]] json rt_to_json(const RtClass& c);
[[nodiscard]] RtClass rt_from_json(const json& j);
[[nodiscard]] json pushed_to_json(const PushedClass& c);
[[nodiscard]] json report_to_json(const VerificationReport& r);

[[nodiscard]] std::string leg_name(int l);
[[nodiscard]] int parse_leg(const json& j);

// Adjacency-list renderings: a vertex is (legs, <tail|head> child ...).
[[nodiscard]] std::string tree_latex(const Tree& t, bool genus_root = false, Mask anonymous = 0);
[[nodiscard]] std::string class_latex(const Class0& c);
[[nodiscard]] std::string class_text(const Class0& c);
[[nodiscard]] std::string rt_latex(const RtClass& c);
[[nodiscard]] std::string rt_text(const RtClass& c);
[[nodiscard]] std::string pushed_latex(const PushedClass& c);
[[nodiscard]] std::string pushed_text(const PushedClass& c);
[[nodiscard]] std::string mono_text(const Mono& m);

// "Sum over labelings": terms grouped by shape with the given legs anonymous.
struct ShapeGroup {
  std::string shape;       // canonical shape key
  std::string latex;       // rendering with anonymous legs as bullets
  mpq_class coefficient;   // common coefficient when uniform
  bool uniform = true;     // all labelings carry the same coefficient
  int labelings = 0;       // number of labeled terms in the class
};
[[nodiscard]] std::vector<ShapeGroup> shape_groups(const Class0& c, Mask anonymous);
[[nodiscard]] std::vector<ShapeGroup> shape_groups(const RtClass& c, Mask anonymous);
[[nodiscard]] std::string shapes_latex(const std::vector<ShapeGroup>& groups);

}  // namespace rtcalc

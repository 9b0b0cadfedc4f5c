#include "rtcalc/io.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "rtcalc/rational.hpp"

namespace rtcalc {

std::string leg_name(int l) { return l == 0 ? "h0" : std::to_string(l); }

int parse_leg(const json& j) {
  if (j.is_number_integer()) return j.get<int>();
  const std::string s = j.get<std::string>();
  if (s == "h0") return 0;
  std::size_t pos = 0;
  const int l = std::stoi(s, &pos);
  if (pos != s.size() || l < 1 || l >= kMaxLabel) throw invalid_argument("bad leg label: " + s);
  return l;
}

namespace {

int parent_vertex(const Layout& L, int e) {
  for (int vi = 0; vi < L.size(); ++vi)
    for (int c : L.v[vi].children)
      if (c == e) return vi;
  throw std::logic_error("edge without parent");
}

mpq_class parse_q(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  mpq_class q(j.get<std::string>());
  q.canonicalize();
  return q;
}

json decoration_json(const Tree& t, bool genus_root) {
  json half = json::object(), leg = json::object();
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if (t.edges[e].head) half["h" + std::to_string(e)] = t.edges[e].head;
    if (t.edges[e].tail) half["t" + std::to_string(e)] = t.edges[e].tail;
  }
  for (int l : labels_of(t.legs))
    if (t.leg_exp[l] && !(genus_root && l == 0)) leg[leg_name(l)] = t.leg_exp[l];
  return {{"exp_half", half}, {"exp_leg", leg}};
}

json mask_json(Mask m) {
  json a = json::array();
  for (int l : labels_of(m)) a.push_back(leg_name(l));
  return a;
}

Mask mask_from(const json& a) {
  Mask m = 0;
  for (const auto& x : a) m |= bit(parse_leg(x));
  return m;
}

}  // namespace

json tree_to_json(const Tree& t, bool genus_root) {
  const Layout L(t);
  json verts = json::array(), edges = json::array();
  for (int vi = 0; vi < L.size(); ++vi) {
    json legs = json::array();
    for (int l : labels_of(L.v[vi].legs))
      if (!(genus_root && l == 0)) legs.push_back(leg_name(l));
    json v = {{"genus", 0}, {"legs", legs}};
    if (genus_root && vi == 0) v["genus"] = "g";
    verts.push_back(v);
  }
  for (int e = 0; e < t.n_edges(); ++e) edges.push_back({e + 1, parent_vertex(L, e)});
  json j = {{"vertices", verts}, {"edges", edges}};
  j.update(decoration_json(t, genus_root));
  return j;
}

Tree tree_from_json(const json& j, bool* genus_root_out) {
  const auto& verts = j.at("vertices");
  const int V = static_cast<int>(verts.size());
  if (V == 0) throw invalid_argument("tree: no vertices");
  bool genus_root = false;
  std::vector<Mask> vlegs(static_cast<std::size_t>(V), 0);
  for (int vi = 0; vi < V; ++vi) {
    const auto& v = verts[vi];
    if (v.contains("genus") && v["genus"].is_string()) {
      if (genus_root) throw invalid_argument("tree: more than one genus vertex");
      genus_root = true;
      vlegs[vi] |= bit(0);
    }
    for (const auto& l : v.at("legs")) {
      const Mask b = bit(parse_leg(l));
      if (vlegs[vi] & b) throw invalid_argument("tree: repeated leg label");
      vlegs[vi] |= b;
    }
  }
  Tree t;
  for (Mask m : vlegs) {
    if (t.legs & m) throw invalid_argument("tree: repeated leg label");
    t.legs |= m;
  }
  const auto& ej = j.contains("edges") ? j["edges"] : json::array();
  const int E = static_cast<int>(ej.size());
  if (E != V - 1) throw invalid_argument("tree: |E| must be |V| - 1");
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(V));
  std::vector<std::pair<int, int>> ends;
  for (int e = 0; e < E; ++e) {
    const int h = ej[e].at(0).get<int>(), tl = ej[e].at(1).get<int>();
    if (h < 0 || h >= V || tl < 0 || tl >= V || h == tl) throw invalid_argument("tree: bad edge");
    adj[h].push_back({tl, e});
    adj[tl].push_back({h, e});
    ends.push_back({h, tl});
  }
  std::function<Mask(int, int, int&)> reach = [&](int v, int from, int& seen) -> Mask {
    ++seen;
    Mask m = vlegs[v];
    for (const auto& [w, e] : adj[v])
      if (w != from) m |= reach(w, v, seen);
    return m;
  };
  int seen = 0;
  (void)reach(0, -1, seen);
  if (seen != V) throw invalid_argument("tree: not connected");

  const json dec = j.contains("decoration") ? j["decoration"] : j;
  auto half_exp = [&](const std::string& key) {
    if (!dec.contains("exp_half") || !dec["exp_half"].contains(key)) return 0;
    return dec["exp_half"][key].get<int>();
  };
  for (int e = 0; e < E; ++e) {
    int dummy = 0;
    const Mask side = reach(ends[e].first, ends[e].second, dummy);
    t.edges.push_back({side, half_exp("h" + std::to_string(e)), half_exp("t" + std::to_string(e))});
  }
  if (dec.contains("exp_leg"))
    for (const auto& [k, v] : dec["exp_leg"].items()) {
      const int l = parse_leg(json(k));
      if (!(t.legs & bit(l))) throw invalid_argument("tree: exponent on a missing leg");
      const int d = v.get<int>();
      if (d < 0 || d > 255) throw invalid_argument("tree: bad exponent");
      t.leg_exp[l] = static_cast<std::uint8_t>(d);
    }
  for (const auto& e : t.edges)
    if (e.head < 0 || e.tail < 0) throw invalid_argument("tree: negative exponent");
  if (genus_root_out) *genus_root_out = genus_root;
  return normalize(std::move(t));
}

json class_to_json(const Class0& c) {
  json terms = json::array();
  for (const auto& [t, x] : c.terms()) {
    json tj = tree_to_json(t);
    json dec = {{"exp_half", tj["exp_half"]}, {"exp_leg", tj["exp_leg"]}};
    tj.erase("exp_half");
    tj.erase("exp_leg");
    terms.push_back({{"tree", tj}, {"decoration", dec}, {"coeff", to_string(x)}});
  }
  json amb = json::array();
  for (int l : labels_of(c.ambient())) amb.push_back(leg_name(l));
  return {{"ambient", amb}, {"terms", terms}};
}

Class0 class_from_json(const json& j) {
  Class0 c(mask_from(j.at("ambient")));
  for (const auto& t : j.at("terms")) {
    json tj = t.at("tree");
    if (t.contains("decoration")) tj.update(t["decoration"]);
    c.add(tree_from_json(tj), parse_q(t.at("coeff")));
  }
  return c;
}

json rt_to_json(const RtClass& c) {
  json terms = json::array();
  for (const auto& [K, x] : c.terms()) {
    json tj = tree_to_json(K.graph, true);
    json dec = {{"exp_half", tj["exp_half"]}, {"exp_leg", tj["exp_leg"]}};
    tj.erase("exp_half");
    tj.erase("exp_leg");
    json fac = json::array();
    for (const auto& [m, e] : K.fact) fac.push_back({{"slot", mask_json(m)}, {"exp", e}});
    terms.push_back({{"tree", tj}, {"decoration", dec}, {"factors", fac}, {"coeff", to_string(x)}});
  }
  return {{"family", "rational-tails"}, {"n", c.n()}, {"k", "symbolic"}, {"terms", terms}};
}

RtClass rt_from_json(const json& j) {
  RtClass c(j.at("n").get<int>());
  for (const auto& t : j.at("terms")) {
    json tj = t.at("tree");
    if (t.contains("decoration")) tj.update(t["decoration"]);
    RtKey k{tree_from_json(tj), {}};
    for (const auto& f : t.at("factors")) k.fact.push_back({mask_from(f.at("slot")), f.at("exp").get<int>()});
    c.add(std::move(k), parse_q(t.at("coeff")));
  }
  return c;
}

namespace {

std::string sym_name(const Sym& s) {
  switch (s.kind) {
    case Sym::Kind::Eta:
      return "eta";
    case Sym::Kind::Omega: {
      std::string r = "omega_{";
      bool first = true;
      for (int l : labels_of(s.idx)) {
        r += (first ? "" : ",") + std::to_string(l);
        first = false;
      }
      return r + "}";
    }
    case Sym::Kind::Psi:
      return "psi_" + std::to_string(s.idx);
    case Sym::Kind::Lambda:
      return "lambda_" + std::to_string(s.idx);
    case Sym::Kind::Kappa:
      return "kappa_" + std::to_string(s.idx);
  }
  return "?";
}

json poly_json(const Poly& p) {
  json o = json::object();
  for (const auto& [e, c] : p.coeffs()) o[std::to_string(e)] = to_string(c);
  return o;
}

}  // namespace

std::string mono_text(const Mono& m) {
  std::string s;
  for (const auto& [x, e] : m) {
    if (!s.empty()) s += " ";
    s += sym_name(x);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

json pushed_to_json(const PushedClass& c) {
  json terms = json::array();
  for (const auto& [K, p] : c.terms()) {
    json tj = tree_to_json(K.graph, true);
    json mono = json::array();
    for (const auto& [s, e] : K.mono) mono.push_back({{"symbol", sym_name(s)}, {"exp", e}});
    terms.push_back({{"tree", tj}, {"monomial", mono}, {"coeff", p.str()}, {"coeff_in_k", poly_json(p)}});
  }
  return {{"terms", terms}};
}

json report_to_json(const VerificationReport& r) {
  json j = {{"id", r.id}, {"params", r.params}, {"pass", r.pass}, {"note", r.note},
            {"seconds", r.seconds}};
  if (!r.pass) j["witness"] = r.witness;
  return j;
}

// ---------------------------------------------------------------------------
// Renderings

namespace {

std::string leg_latex(int l, int d, bool anon) {
  std::string name = anon ? "\\bullet" : (l == 0 ? "h_0" : std::to_string(l));
  if (!d) return name;
  return name + "\\,\\psi" + (d > 1 ? "^{" + std::to_string(d) + "}" : "");
}

std::string vertex_latex(const Tree& t, const Layout& L, int vi, bool genus_root, Mask anon,
                         const std::map<Mask, int>* fact) {
  std::vector<std::string> items;
  for (int l : labels_of(L.v[vi].legs)) {
    if (genus_root && l == 0) continue;
    std::string s = leg_latex(l, t.leg_exp[l], anon & bit(l));
    if (fact && vi == 0 && fact->count(bit(l))) s += "\\{" + std::to_string(fact->at(bit(l))) + "\\}";
    items.push_back(std::move(s));
  }
  for (int c : L.v[vi].children) {
    const auto& e = t.edges[c];
    std::string s = "\\langle " + std::to_string(e.tail) + "|" + std::to_string(e.head) + "\\rangle";
    if (fact && vi == 0 && fact->count(e.side)) s += "\\{" + std::to_string(fact->at(e.side)) + "\\}";
    items.push_back(s + vertex_latex(t, L, c + 1, genus_root, anon, fact));
  }
  std::sort(items.begin(), items.end());
  std::string out = (genus_root && vi == 0) ? "g(" : "(";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "\\;" : "") + items[i];
  return out + ")";
}

std::string signed_term(const std::string& coeff, const std::string& body, bool first) {
  const bool neg = !coeff.empty() && coeff[0] == '-';
  const std::string mag = neg ? coeff.substr(1) : coeff;
  std::string s = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
  if (mag != "1" || body.empty()) s += mag + (body.empty() ? "" : "\\,");
  return s + body;
}

std::string fact_latex(const std::vector<std::pair<Mask, int>>& fact) {
  std::string s;
  for (const auto& [m, e] : fact) {
    s += "(k\\omega_{";
    bool first = true;
    for (int l : labels_of(m)) {
      s += (first ? "" : ",") + std::to_string(l);
      first = false;
    }
    s += "}-\\eta)";
    if (e != 1) s += "^{" + std::to_string(e) + "}";
  }
  return s;
}

}  // namespace

std::string tree_latex(const Tree& t, bool genus_root, Mask anonymous) {
  const Layout L(t);
  return vertex_latex(t, L, 0, genus_root, anonymous, nullptr);
}

std::string class_latex(const Class0& c) {
  if (c.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [t, x] : c.terms()) {
    s += signed_term(to_string(x), "\\xi_{" + tree_latex(t) + "}", first);
    first = false;
  }
  return s;
}

std::string class_text(const Class0& c) {
  std::string s;
  for (const auto& [t, x] : c.terms()) s += to_string(x) + "  " + encode(t) + "\n";
  return s.empty() ? "0\n" : s;
}

std::string rt_latex(const RtClass& c) {
  if (c.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [K, x] : c.terms()) {
    s += signed_term(to_string(x), "\\xi_{" + tree_latex(K.graph, true) + "}" + fact_latex(K.fact), first);
    first = false;
  }
  return s;
}

std::string rt_text(const RtClass& c) {
  std::string s;
  for (const auto& [K, x] : c.terms()) {
    s += to_string(x) + "  " + encode(K.graph) + "  ";
    for (const auto& [m, e] : K.fact) {
      s += "(k w{";
      bool first = true;
      for (int l : labels_of(m)) {
        s += (first ? "" : ",") + std::to_string(l);
        first = false;
      }
      s += "} - eta)";
      if (e != 1) s += "^" + std::to_string(e);
    }
    s += "\n";
  }
  return s.empty() ? "0\n" : s;
}

std::string pushed_text(const PushedClass& c) {
  std::string s;
  for (const auto& [K, p] : c.terms())
    s += "(" + p.str() + ")  " + encode(K.graph) + "  " + mono_text(K.mono) + "\n";
  return s.empty() ? "0\n" : s;
}

std::string pushed_latex(const PushedClass& c) {
  if (c.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [K, p] : c.terms()) {
    std::string mono;
    for (const auto& [x, e] : K.mono) {
      std::string n = sym_name(x);
      if (x.kind == Sym::Kind::Eta) n = "\\eta";
      else if (x.kind == Sym::Kind::Psi) n = "\\psi_{" + std::to_string(x.idx) + "}";
      else if (x.kind == Sym::Kind::Lambda) n = "\\lambda_{" + std::to_string(x.idx) + "}";
      else if (x.kind == Sym::Kind::Kappa) n = "\\kappa_{" + std::to_string(x.idx) + "}";
      else n = "\\" + n;
      mono += n + (e != 1 ? "^{" + std::to_string(e) + "}" : "");
    }
    const bool boundary = K.graph.n_edges() > 0 || K.graph.deg_psi() > 0;
    std::string body = (boundary ? "\\xi_{" + tree_latex(K.graph, true) + "}" : "") + mono;
    s += (first ? "" : " + ") + std::string("(") + p.str() + ")" + (body.empty() ? "" : "\\," + body);
    first = false;
  }
  return s;
}

std::vector<ShapeGroup> shape_groups(const Class0& c, Mask anonymous) {
  std::map<std::string, ShapeGroup> g;
  for (const auto& [t, x] : c.terms()) {
    const std::string key = shape_key(t, anonymous);
    auto [it, fresh] = g.try_emplace(key);
    auto& s = it->second;
    if (fresh) {
      s.shape = key;
      s.latex = tree_latex(t, false, anonymous);
      s.coefficient = x;
    } else if (s.coefficient != x) {
      s.uniform = false;
    }
    ++s.labelings;
  }
  std::vector<ShapeGroup> out;
  for (auto& [k, s] : g) out.push_back(std::move(s));
  return out;
}

std::vector<ShapeGroup> shape_groups(const RtClass& c, Mask anonymous) {
  std::map<std::string, ShapeGroup> g;
  for (const auto& [K, x] : c.terms()) {
    const std::map<Mask, int> fact(K.fact.begin(), K.fact.end());
    const Layout L(K.graph);
    const std::string key = vertex_latex(K.graph, L, 0, true, anonymous, &fact);
    auto [it, fresh] = g.try_emplace(key);
    auto& s = it->second;
    if (fresh) {
      s.shape = key;
      s.latex = key;
      s.coefficient = x;
    } else if (s.coefficient != x) {
      s.uniform = false;
    }
    ++s.labelings;
  }
  std::vector<ShapeGroup> out;
  for (auto& [k, s] : g) out.push_back(std::move(s));
  return out;
}

std::string shapes_latex(const std::vector<ShapeGroup>& groups) {
  if (groups.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& gr : groups) {
    const std::string coeff = gr.uniform ? to_string(gr.coefficient) : "?";
    s += signed_term(coeff, "\\Sigma" + gr.latex, first);
    first = false;
  }
  return s;
}

}  // namespace rtcalc

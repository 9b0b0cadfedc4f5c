#include "rtcalc/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <bit>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "rtcalc/io.hpp"
#include "rtcalc/rational.hpp"
#include "rtcalc/weights.hpp"

namespace rtcalc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inline JSON if it looks like JSON, otherwise a file path.
json load_json(const std::string& arg, const std::string& what) {
  if (arg.empty()) throw UsageError(what + " is required");
  std::string text = arg;
  if (arg.front() != '{' && arg.front() != '[') {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + what + " file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError("malformed " + what + ": " + e.what());
  }
}

std::string params_str(const std::vector<int>& p) {
  std::string s;
  for (int x : p) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

// ---- subcommands ----

int cmd_trees(const RunConfig& c, std::ostream& out) {
  if (c.n < (c.genus_root ? 1 : 2)) throw UsageError("trees: --n must be >= 2 (>= 1 with --rt)");
  const auto trees = c.genus_root ? enumerate_rt_graphs(c.n) : enumerate_trees0(c.n);
  if (c.format == Format::Json) {
    json a = json::array();
    for (const auto& t : trees) a.push_back(tree_to_json(t, c.genus_root));
    out << json{{"n", c.n}, {"count", trees.size()}, {"trees", a}}.dump(2) << "\n";
  } else {
    for (const auto& t : trees)
      out << (c.format == Format::Latex ? tree_latex(t, c.genus_root) : encode(t)) << "\n";
    out << "count " << trees.size() << "\n";
  }
  return kOk;
}

int cmd_coeff(const RunConfig& c, std::ostream& out) {
  bool genus_root = false;
  const Tree t = tree_from_json(load_json(c.graph, "--graph"), &genus_root);
  CoeffReport rep;
  std::string context;
  if (!c.coda.empty()) {
    if (genus_root) throw UsageError("coeff: --coda needs a rooted tree with h0");
    if (c.i < 1) throw UsageError("coeff: --coda needs --i >= 1");
    Mask I = 0;
    std::stringstream ss(c.coda);
    for (std::string tok; std::getline(ss, tok, ',');) I |= bit(parse_leg(json(tok)));
    const int n = 31 - std::countl_zero(t.legs);
    const auto ctx = WeightContext::coda(c.i, I, n);
    rep = c.brute ? coeff_brute(t, ctx) : coeff_dp(t, ctx);
    context = "coda";
  } else if (genus_root) {
    const auto ctx = WeightContext::plain(c.multiplicities);
    rep = c.brute ? coeff_brute(t, ctx) : coeff_dp(t, ctx);
    context = "plain";
  } else {
    if (c.i < 1) throw UsageError("coeff: a rooted tree needs --i >= 1");
    const auto ctx = WeightContext::rooted(c.i, c.m);
    rep = c.brute ? coeff_brute(t, ctx) : coeff_dp(t, ctx);
    context = "rooted";
  }
  const std::string method = rep.method == CoeffReport::Method::DP ? "dp" : "brute";
  if (c.format == Format::Json) {
    out << json{{"context", context},
                {"coefficient", to_string(rep.coefficient)},
                {"weightings", rep.weighting_count.get_str()},
                {"method", method}}
               .dump(2)
        << "\n";
  } else {
    out << to_string(rep.coefficient) << "\n";
    out << "weightings " << rep.weighting_count.get_str() << "\n";
  }
  return kOk;
}

int cmd_zcycle(const RunConfig& c, std::ostream& out) {
  if (c.n < 3 || c.i < 1 || c.i > c.n - 1 || c.m < 1) throw UsageError("zcycle: need n >= 3, 1 <= i <= n-1, m >= 1");
  if (c.truncated && c.m != 1) throw UsageError("zcycle: --truncated only for m = 1");
  const Class0 z = c.truncated ? z_truncated(c.n, c.i, c.j) : z_cycle(c.n, c.i, c.j, c.m);
  const Mask anon = range_mask(1, popcount(z.ambient()) - 1);
  switch (c.format) {
    case Format::Json: {
      json j = class_to_json(z);
      json shapes = json::array();
      for (const auto& g : shape_groups(z, anon))
        shapes.push_back({{"shape", g.shape}, {"coeff", g.uniform ? to_string(g.coefficient) : "mixed"},
                          {"labelings", g.labelings}});
      j["shapes"] = shapes;
      out << j.dump(2) << "\n";
      break;
    }
    case Format::Latex:
      out << shapes_latex(shape_groups(z, anon)) << "\n";
      out << class_latex(z) << "\n";
      break;
    case Format::Text:
      out << class_text(z);
      break;
  }
  return kOk;
}

int parse_int_or_sym(const std::string& s, const std::string& flag) {
  if (s == "sym") return -1;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + " must be 'sym' or a positive integer");
}

int cmd_fclass(const RunConfig& c, std::ostream& out) {
  const int k = parse_int_or_sym(c.k, "--k");
  (void)parse_int_or_sym(c.g, "--g");  // g only labels the genus vertex
  std::vector<int> mult = c.multiplicities;
  if (mult.empty()) {
    if (c.n < 1) throw UsageError("fclass: --n >= 1 or --multiplicities required");
    mult.assign(static_cast<std::size_t>(c.n), 1);
  } else if (c.n && c.n != static_cast<int>(mult.size())) {
    throw UsageError("fclass: --n disagrees with --multiplicities");
  }
  if (std::any_of(mult.begin(), mult.end(), [](int x) { return x < 1; }))
    throw UsageError("fclass: multiplicities must be positive");
  const RtClass f = f_class_m(mult);
  if (k < 0) {
    if (c.format == Format::Json) {
      json j = rt_to_json(f);
      j["g"] = c.g;
      out << j.dump(2) << "\n";
    } else {
      out << (c.format == Format::Latex ? rt_latex(f) + "\n" : rt_text(f));
    }
    return kOk;
  }
  // Numeric k: expand the factors in eta and substitute.
  const PushedClass p = expand_eta(f).at_k(k);
  if (c.format == Format::Json) {
    json j = pushed_to_json(p);
    j["k"] = k;
    j["g"] = c.g;
    out << j.dump(2) << "\n";
  } else {
    out << (c.format == Format::Latex ? pushed_latex(p) + "\n" : pushed_text(p));
  }
  return kOk;
}

int cmd_pair(const RunConfig& c, std::ostream& out) {
  const Class0 cls = class_from_json(load_json(c.klass, "--class"));
  json sj = load_json(c.stratum, "--stratum");
  if (sj.contains("tree")) {
    json t = sj["tree"];
    if (sj.contains("decoration")) t.update(sj["decoration"]);
    sj = t;
  }
  const Tree S = tree_from_json(sj);
  if (S.legs != cls.ambient()) throw UsageError("pair: stratum legs differ from the class ambient");
  const mpq_class v = pair(cls, S);
  if (c.format == Format::Json)
    out << json{{"pairing", to_string(v)}}.dump(2) << "\n";
  else
    out << to_string(v) << "\n";
  return kOk;
}

int cmd_relations(const RunConfig& c, std::ostream& out) {
  const int g = parse_int_or_sym(c.g, "--g");
  if (g < 1) throw UsageError("relations: --g must be a positive integer");
  if (c.n <= 2 * g - 2) throw UsageError("relations: need n > 2g-2");
  const PushedClass p = emit_relation(g, c.n);
  if (c.format == Format::Json) {
    json j = pushed_to_json(p);
    j["g"] = g;
    j["n"] = c.n;
    out << j.dump(2) << "\n";
  } else {
    out << (c.format == Format::Latex ? pushed_latex(p) + "\n" : pushed_text(p));
  }
  return kOk;
}

// ---- verification suites ----

VerificationReport boolean_report(std::string id, std::vector<int> params, bool pass,
                                  std::string note, std::string witness) {
  VerificationReport r{std::move(id), std::move(params), pass, "", std::move(note), 0};
  if (!pass) r.witness = std::move(witness);
  return r;
}

VerificationReport vanishing_task(int n, int i, int j, bool trunc) {
  const Class0 z = trunc ? z_truncated(n, i, j) : z_cycle(n, i, j);
  const ZeroReport rep = zero_test(z);
  return boolean_report(trunc ? "vanishing-truncated" : "vanishing", {n, i, j}, rep.zero,
                        std::to_string(z.size()) + " terms, " + std::to_string(rep.strata_tested) + " strata",
                        rep.zero ? "" : "stratum " + encode(*rep.witness) + " pairs to " + to_string(rep.value));
}

std::vector<std::vector<int>> compositions_upto(int total) {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& cur, int left) {
    if (!cur.empty()) out.push_back(cur);
    for (int a = 1; a <= left; ++a) {
      cur.push_back(a);
      rec(cur, left - a);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  rec(cur, total);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int sa = std::accumulate(a.begin(), a.end(), 0), sb = std::accumulate(b.begin(), b.end(), 0);
    return sa != sb ? sa < sb : a < b;
  });
  return out;
}

// F_1, F_2, F_3 by shape: (shape with the numbered legs anonymous, coefficient, labelings).
struct ShapeAnchor {
  const char* shape;
  const char* coeff;
  int labelings;
};
const std::vector<std::vector<ShapeAnchor>>& expansion_anchors() {
  static const std::vector<std::vector<ShapeAnchor>> a = {
      {{"g(\\bullet\\{1\\})", "1", 1}},
      {{"g(\\bullet\\{1\\}\\;\\bullet\\{1\\})", "1", 1},
       {"g(\\langle 0|0\\rangle\\{1\\}(\\bullet\\;\\bullet))", "-1", 1}},
      {{"g(\\bullet\\{1\\}\\;\\bullet\\{1\\}\\;\\bullet\\{1\\})", "1", 1},
       {"g(\\bullet\\{1\\}\\;\\langle 0|0\\rangle\\{1\\}(\\bullet\\;\\bullet))", "-1", 3},
       {"g(\\langle 0|0\\rangle\\{1\\}(\\bullet\\;\\langle 0|0\\rangle(\\bullet\\;\\bullet)))", "3", 3},
       {"g(\\langle 0|0\\rangle\\{2\\}(\\bullet\\;\\bullet\\;\\bullet))", "-3", 1},
       {"g(\\langle 0|1\\rangle\\{1\\}(\\bullet\\;\\bullet\\;\\bullet))", "-7", 1},
       {"g(\\langle 1|0\\rangle(\\bullet\\;\\langle 0|0\\rangle(\\bullet\\;\\bullet)))", "2", 3},
       {"g(\\langle 1|0\\rangle\\{1\\}(\\bullet\\;\\bullet\\;\\bullet))", "-2", 1},
       {"g(\\langle 1|1\\rangle(\\bullet\\;\\bullet\\;\\bullet))", "-6", 1}},
  };
  return a;
}

VerificationReport expansion_task(int n) {
  const auto groups = shape_groups(f_class(n), range_mask(1, n));
  std::vector<ShapeAnchor> want = expansion_anchors()[static_cast<std::size_t>(n - 1)];
  std::string witness;
  if (groups.size() != want.size()) witness = std::to_string(groups.size()) + " shapes";
  for (const auto& w : want) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const ShapeGroup& g) { return g.latex == w.shape; });
    if (it == groups.end()) {
      witness = std::string("missing shape ") + w.shape;
    } else if (!it->uniform || to_string(it->coefficient) != w.coeff || it->labelings != w.labelings) {
      witness = std::string("shape ") + w.shape + " has coefficient " + to_string(it->coefficient);
    }
    if (!witness.empty()) break;
  }
  return boolean_report("expansion", {n}, witness.empty(), std::to_string(groups.size()) + " shapes", witness);
}

VerificationReport heavy_task(int a) {
  const RtClass F = f_class_m({a});
  std::string witness;
  if (!(F == heavy_point_eb(a))) witness = "e_b expansion differs";
  else if (!(one_leg_polynomial(F) == heavy_point_product(a))) witness = "factored product differs";
  else if (!(pushforward_point(F, std::nullopt) == heavy_point_kappa(a, std::nullopt)))
    witness = "kappa formula differs (symbolic g)";
  else
    for (int g = 2; g <= 4 && witness.empty(); ++g)
      if (!(pushforward_point(F, g) == heavy_point_kappa(a, g))) witness = "kappa formula differs at g=" + std::to_string(g);
  return boolean_report("heavy", {a}, witness.empty(), "e_b, product, kappa", witness);
}

VerificationReport logan_task(int g) {
  const PushedClass p = pushforward_phi(f_class(g), 1, g);
  return boolean_report("logan", {g}, p == logan_expected(g), std::to_string(p.terms().size()) + " terms",
                        "pushforward:\n" + pushed_text(p));
}

std::vector<Task> suite_tasks(const std::string& suite, int max_n) {
  std::vector<Task> tasks;
  auto nmax = [&](int def) { return max_n > 0 ? max_n : def; };
  if (suite == "vanishing") {
    for (int n = 3; n <= nmax(4); ++n)
      for (int i = 1; i <= n - 1; ++i)
        for (int j = 1; j < i; ++j)
          for (bool t : {false, true}) tasks.push_back([=] { return vanishing_task(n, i, j, t); });
  } else if (suite == "decrec") {
    for (int n = 3; n <= nmax(4); ++n)
      for (int i = 1; i <= n - 1; ++i) {
        tasks.push_back([=] { return verify_decrec(n, i); });
        auto [lo, hi] = j_range(n, i);
        for (int j = lo; j <= hi; ++j) tasks.push_back([=] { return verify_dect(n, i, j); });
      }
  } else if (suite == "collide0") {
    for (int n = 3; n <= nmax(4); ++n)
      for (int m = 1; m < n; ++m) tasks.push_back([=] { return verify_collide0(n, m); });
  } else if (suite == "recursion") {
    for (int n = 3; n <= nmax(4); ++n) {
      for (int i = 1; i <= n - 1; ++i) {
        auto [lo, hi] = j_range(n, i);
        for (int j = lo - 1; j <= hi; ++j) tasks.push_back([=] { return verify_recursion_all(n, i, j); });
      }
      for (Mask I = 1; I < (Mask{1} << (n - 1)); ++I) {
        const Mask legs = I << 1;
        if (popcount(legs) > n - 2) continue;
        for (int i = 1; i <= n - 1; ++i) tasks.push_back([=] { return verify_ei_pushforward(n, legs, i); });
      }
    }
  } else if (suite == "closed-forms") {
    for (int n = 3; n <= nmax(5); ++n) tasks.push_back([=] { return verify_closed_forms(n); });
  } else if (suite == "frec") {
    for (int n = 2; n <= nmax(3); ++n) tasks.push_back([=] { return verify_frec(n); });
  } else if (suite == "collide-rt") {
    for (const auto& mult : compositions_upto(nmax(4)))
      tasks.push_back([=] { return verify_colliding_rt(mult); });
  } else if (suite == "logan") {
    for (int g = 2; g <= nmax(3); ++g) tasks.push_back([=] { return logan_task(g); });
  } else if (suite == "heavy") {
    for (int a = 1; a <= nmax(6); ++a) tasks.push_back([=] { return heavy_task(a); });
  } else if (suite == "expansions") {
    if (nmax(3) > 3) throw UsageError("verify expansions: anchors exist for n <= 3");
    for (int n = 1; n <= nmax(3); ++n) tasks.push_back([=] { return expansion_task(n); });
  } else {
    throw UsageError("verify: unknown suite '" + suite + "'");
  }
  return tasks;
}

}  // namespace

// Tasks run on a dynamic OpenMP schedule; reports are written in task order
// by whichever thread holds the ordered section, so output is deterministic.
int run_tasks(const std::vector<Task>& tasks, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const long N = static_cast<long>(tasks.size());
  std::atomic<bool> stop{false};
  bool failed = false;
  long passed = 0, reported = 0;
#pragma omp parallel for ordered schedule(dynamic, 1)
  for (long t = 0; t < N; ++t) {
    std::optional<VerificationReport> rep;
    std::string task_error;
    if (!stop.load()) {
      try {
        rep = tasks[static_cast<std::size_t>(t)]();
      } catch (const std::exception& e) {
        task_error = e.what();
      }
      if ((rep && !rep->pass) || !task_error.empty())
        if (c.fail_fast) stop = true;
    }
#pragma omp ordered
    {
      const bool skip = c.fail_fast && failed;
      if (!skip && !task_error.empty()) {
        failed = true;
        err << "ERROR task " << t << ": " << task_error << "\n";
      } else if (!skip && rep) {
        ++reported;
        if (rep->pass) ++passed;
        else failed = true;
        if (c.format == Format::Json) {
          json j = report_to_json(*rep);
          j.erase("seconds");
          out << j.dump() << "\n";
        } else {
          out << (rep->pass ? "PASS " : "FAIL ") << rep->id << params_str(rep->params) << "  " << rep->note << "\n";
        }
        if (!rep->pass) err << "witness " << rep->id << params_str(rep->params) << ": " << rep->witness << "\n";
      }
    }
  }
  if (c.format == Format::Json)
    out << json{{"suite", c.suite}, {"passed", passed}, {"reported", reported}, {"total", N}}.dump() << "\n";
  else
    out << c.suite << ": " << passed << "/" << N << " passed\n";
  return failed ? kVerifyFailed : kOk;
}

namespace {

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return run_tasks(suite_tasks(c.suite, c.max_n), c, out, err);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t pos = 0;
    int x = 0;
    try {
      x = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.empty()) throw UsageError("bad integer list: " + s);
    v.push_back(x);
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rtcalc: decorated-graph calculus on rational-tails classes"};
  app.require_subcommand(1);
  RunConfig c;
  std::string format = "text", mults;

  auto common = [&](CLI::App* s) {
    s->add_option("--format", format, "json | latex | text")->check(CLI::IsMember({"json", "latex", "text"}));
    s->add_option("--jobs", c.jobs, "OpenMP threads (0: default)")->check(CLI::NonNegativeNumber);
  };
  auto* trees = app.add_subcommand("trees", "enumerate rooted trees (or rational-tails graphs with --rt)");
  trees->add_option("--n", c.n)->required();
  trees->add_flag("--rt", c.genus_root);
  common(trees);

  auto* coeff = app.add_subcommand("coeff", "weighting sum of a decorated graph");
  coeff->add_option("--graph", c.graph, "tree JSON, inline or a file")->required();
  coeff->add_option("--i", c.i);
  coeff->add_option("--m", c.m);
  coeff->add_option("--coda", c.coda, "comma-separated leg set I");
  coeff->add_option("--multiplicities", mults);
  coeff->add_flag("--brute", c.brute, "enumerate weightings instead of the DP");
  common(coeff);

  auto* zc = app.add_subcommand("zcycle", "the cycle Z^m(n,i,j)");
  zc->add_option("--n", c.n)->required();
  zc->add_option("--i", c.i)->required();
  zc->add_option("--j", c.j)->required();
  zc->add_option("--m", c.m);
  zc->add_flag("--truncated", c.truncated);
  common(zc);

  auto* fc = app.add_subcommand("fclass", "the rational-tails class F^k_{g,m}");
  fc->add_option("--k", c.k, "sym or an integer");
  fc->add_option("--g", c.g, "sym or an integer");
  fc->add_option("--n", c.n);
  fc->add_option("--multiplicities", mults);
  common(fc);

  auto* pr = app.add_subcommand("pair", "pair a genus-0 class with a stratum");
  pr->add_option("--class", c.klass)->required();
  pr->add_option("--stratum", c.stratum)->required();
  common(pr);

  auto* vf = app.add_subcommand("verify", "run a verification suite");
  vf->add_option("suite", c.suite,
                 "vanishing | decrec | collide0 | recursion | closed-forms | frec | collide-rt | logan | heavy | "
                 "expansions")
      ->required();
  vf->add_option("--max-n", c.max_n)->check(CLI::NonNegativeNumber);
  vf->add_flag("--fail-fast", c.fail_fast);
  common(vf);

  auto* rel = app.add_subcommand("relations", "F^1_{g,n} expanded in eta (n > 2g-2)");
  rel->add_option("--g", c.g)->required();
  rel->add_option("--n", c.n)->required();
  common(rel);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  c.format = format == "json" ? Format::Json : format == "latex" ? Format::Latex : Format::Text;
  try {
    if (!mults.empty()) c.multiplicities = parse_int_list(mults);
    if (c.jobs > 0) omp_set_num_threads(c.jobs);
    if (c.subcommand == "trees") return cmd_trees(c, out);
    if (c.subcommand == "coeff") return cmd_coeff(c, out);
    if (c.subcommand == "zcycle") return cmd_zcycle(c, out);
    if (c.subcommand == "fclass") return cmd_fclass(c, out);
    if (c.subcommand == "pair") return cmd_pair(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out, err);
    if (c.subcommand == "relations") return cmd_relations(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rtcalc::cli

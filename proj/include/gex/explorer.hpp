#pragma once

#include "gex/detectors.hpp"

#include <atomic>
#include <functional>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace gex::explore {

using dsl::Expr;

// ------------------------------------------------------------------
// Construction menu

/// One enabled construction: a function with argument kinds.
struct MenuEntry {
  std::string fn;
  std::vector<unsigned> kinds;  // dsl::kPoint, kLine or kCircle per slot
  /// Slot groups whose arguments may be permuted freely.
  std::vector<std::vector<int>> symmetric;
  /// Branch selectors for multi-valued results, one sequence each.
  std::vector<Expr> selectors;
  /// Fixed trailing argument (the kind name of cevian(...)).
  std::optional<Expr> tail;
};

struct Menu {
  std::vector<MenuEntry> entries;
};

namespace detail {

inline Expr parse_selector(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos) return Expr::ident(text);
  std::string name = text.substr(0, open);
  std::string arg = text.substr(open + 1, text.size() - open - 2);
  return Expr::call(name, {Expr::ident(arg)});
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Menu text: one construction per line,
///   fn KINDS... [sym=0,1] [select=smallest,largest] [tail=gergonne]
/// with KINDS drawn from P, L, C and '#' starting a comment.
inline Menu parse_menu(const std::string& text) {
  Menu m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    MenuEntry e;
    e.fn = tok;
    while (ls >> tok) {
      if (tok == "P") e.kinds.push_back(dsl::kPoint);
      else if (tok == "L") e.kinds.push_back(dsl::kLine);
      else if (tok == "C") e.kinds.push_back(dsl::kCircle);
      else if (tok.rfind("sym=", 0) == 0) {
        std::vector<int> g;
        for (const auto& x : detail::split(tok.substr(4), ',')) g.push_back(std::stoi(x));
        e.symmetric.push_back(g);
      } else if (tok.rfind("select=", 0) == 0) {
        for (const auto& x : detail::split(tok.substr(7), ',')) e.selectors.push_back(detail::parse_selector(x));
      } else if (tok.rfind("tail=", 0) == 0) {
        e.tail = Expr::ident(tok.substr(5));
      } else {
        throw GeometryError(ErrorKind::SyntaxError, "menu line " + std::to_string(lineno) + ": unknown token '" + tok + "'");
      }
    }
    if (!dsl::find_signature(e.fn)) {
      throw GeometryError(ErrorKind::UnknownFunction, "menu line " + std::to_string(lineno) + ": unknown function '" + e.fn + "'");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

inline Menu load_menu(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeometryError(ErrorKind::EvalError, "cannot read menu " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_menu(ss.str());
}

inline std::string default_menu_path() { return std::string(GEX_DATA_DIR) + "/data/default.menu"; }

// ------------------------------------------------------------------
// Starting figures

struct StartConfig {
  /// One of: gergonne-point, gergonne-cevian, two-cevians, cevian-center,
  /// pararadius, parachord, perpendicular-feet.
  std::string id = "gergonne-point";
  std::string constraints;
  /// Cevian kinds for two-cevians and cevian-center.
  std::vector<std::string> kinds;
};

inline const std::vector<std::string>& start_ids() {
  static const std::vector<std::string> ids = {"gergonne-point", "gergonne-cevian", "two-cevians", "cevian-center",
                                               "pararadius",     "parachord",       "perpendicular-feet"};
  return ids;
}

inline std::string start_script(const StartConfig& cfg) {
  std::string src = "triangle ABC;\n";
  if (!cfg.constraints.empty()) {
    for (const auto& piece : detail::split(cfg.constraints, ';'))
      if (piece.find_first_not_of(" \t") != std::string::npos) src += "constrain " + piece + ";\n";
  }
  auto kind = [&](std::size_t i, const char* dflt) { return i < cfg.kinds.size() ? cfg.kinds[i] : std::string(dflt); };
  const std::string& id = cfg.id;
  if (id == "gergonne-point") {
    src += "D = gergonne(A, B, C);\n";
  } else if (id == "gergonne-cevian") {
    src += "D = gergonne(A, B, C);\nE = cevian(A, B, C, gergonne);\n";
  } else if (id == "two-cevians") {
    src += "D = cevian(A, B, C, " + kind(0, "gergonne") + ");\nE = cevian(B, C, A, " + kind(1, "nagel") + ");\n";
  } else if (id == "cevian-center") {
    src += "D = cevian(A, B, C, " + kind(0, "median") + ");\nE = gergonne(A, B, D);\nF = gergonne(A, D, C);\n";
  } else if (id == "pararadius") {
    src += "D = gergonne(A, B, C);\nE = intersect(parallel(D, BC), AB);\n";
  } else if (id == "parachord") {
    src += "D = gergonne(A, B, C);\nE = intersect(parallel(D, BC), AB);\nF = intersect(parallel(D, BC), AC);\n";
  } else if (id == "perpendicular-feet") {
    src += "D = gergonne(A, B, C);\nE = foot(D, BC);\nF = foot(D, CA);\nG = foot(D, AB);\n";
  } else {
    throw GeometryError(ErrorKind::EvalError, "unknown starting figure '" + id + "'");
  }
  return src;
}

// ------------------------------------------------------------------
// Enumeration

/// A construction sequence: the steps appended to the starting script.
struct Sequence {
  std::vector<dsl::Assignment> steps;

  std::string text() const {
    std::string out;
    for (const auto& s : steps) out += dsl::format(dsl::Statement{s}) + "\n";
    return out;
  }
};

namespace detail {

using KindMap = std::map<std::string, unsigned, std::less<>>;

struct Objects {
  std::vector<Expr> points, lines, circles;
};

/// Objects available as arguments: bound points, lines through pairs of them,
/// bound lines and bound circles. Order follows the bindings.
inline Objects objects_of(const dsl::Script& s, const std::vector<dsl::Assignment>& extra,
                          const KindMap& kinds) {
  Objects o;
  std::vector<std::string> names(s.vertices.begin(), s.vertices.end());
  for (const auto& st : s.body)
    if (auto* a = std::get_if<dsl::Assignment>(&st)) names.push_back(a->name);
  for (const auto& a : extra) names.push_back(a.name);
  for (const auto& n : names) {
    unsigned k = kinds.find(n)->second;
    if (k == dsl::kPoint) o.points.push_back(Expr::ident(n));
    else if (k == dsl::kLine) o.lines.push_back(Expr::ident(n));
    else if (k == dsl::kCircle) o.circles.push_back(Expr::ident(n));
  }
  std::vector<Expr> pair_lines;
  for (std::size_t i = 0; i < o.points.size(); ++i)
    for (std::size_t j = i + 1; j < o.points.size(); ++j)
      pair_lines.push_back(Expr::call("line", {o.points[i], o.points[j]}));
  pair_lines.insert(pair_lines.end(), o.lines.begin(), o.lines.end());
  o.lines = std::move(pair_lines);
  return o;
}

inline bool uses(const Expr& e, const std::string& name) {
  if (e.op == Expr::Op::Ident && e.text == name) return true;
  for (const auto& a : e.args)
    if (uses(a, name)) return true;
  return false;
}

/// Argument tuples in canonical form: within each symmetric group the chosen
/// indices are strictly increasing.
inline void tuples(const MenuEntry& e, const Objects& o, std::vector<std::vector<Expr>>& out) {
  const std::size_t n = e.kinds.size();
  std::vector<const std::vector<Expr>*> pools(n);
  for (std::size_t i = 0; i < n; ++i) {
    pools[i] = e.kinds[i] == dsl::kPoint ? &o.points : e.kinds[i] == dsl::kLine ? &o.lines : &o.circles;
  }
  std::vector<std::size_t> idx(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t slot) {
    if (slot == n) {
      for (const auto& g : e.symmetric)
        for (std::size_t k = 1; k < g.size(); ++k)
          if (!(idx[g[k - 1]] < idx[g[k]])) return;
      // Distinct objects in every slot of the same kind.
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (e.kinds[a] == e.kinds[b] && idx[a] == idx[b]) return;
      std::vector<Expr> args;
      for (std::size_t i = 0; i < n; ++i) args.push_back((*pools[i])[idx[i]]);
      out.push_back(std::move(args));
      return;
    }
    for (std::size_t i = 0; i < pools[slot]->size(); ++i) {
      idx[slot] = i;
      rec(slot + 1);
    }
  };
  rec(0);
}

inline unsigned result_kind(const MenuEntry& e) {
  const auto* sig = dsl::find_signature(e.fn);
  for (const auto& ov : sig->overloads) {
    std::size_t arity = e.kinds.size() + (e.tail ? 1 : 0);
    if (ov.params.size() != arity) continue;
    bool ok = true;
    for (std::size_t i = 0; i < e.kinds.size(); ++i) ok = ok && (ov.params[i] & e.kinds[i]);
    if (ok) return ov.result;
  }
  throw GeometryError(ErrorKind::ArityError, "menu entry '" + e.fn + "' matches no signature");
}

inline std::string step_name(unsigned kind, std::size_t index) {
  const char* prefix = kind == dsl::kPoint ? "X" : kind == dsl::kLine ? "L" : "W";
  return prefix + std::to_string(index);
}

/// All single steps over the given objects, named for position `index`.
inline std::vector<dsl::Assignment> steps_over(const Menu& menu, const Objects& o, std::size_t index) {
  std::vector<dsl::Assignment> out;
  for (const auto& e : menu.entries) {
    unsigned rk = result_kind(e);
    std::vector<std::vector<Expr>> args;
    tuples(e, o, args);
    for (auto& a : args) {
      if (e.tail) a.push_back(*e.tail);
      Expr call = Expr::call(e.fn, a);
      if (rk & dsl::kMulti) {
        unsigned elem = rk == dsl::kMultiPoint ? dsl::kPoint : dsl::kCircle;
        for (const auto& sel : e.selectors) {
          dsl::Assignment st;
          st.name = step_name(elem, index);
          st.value = Expr::call("select", {call, sel});
          out.push_back(std::move(st));
        }
      } else {
        dsl::Assignment st;
        st.name = step_name(rk, index);
        st.value = call;
        out.push_back(std::move(st));
      }
    }
  }
  return out;
}

inline KindMap kinds_of(const dsl::Script& s) { return dsl::binding_kinds(dsl::format(s)); }

inline unsigned kind_of_step(const dsl::Assignment& st) {
  if (st.name[0] == 'X') return dsl::kPoint;
  if (st.name[0] == 'L') return dsl::kLine;
  return dsl::kCircle;
}

}  // namespace detail

/// Every type-correct sequence of up to `depth` steps, quotiented by argument
/// symmetries. A second step that does not use the first one's result is
/// kept only in one order, and a step never repeats an earlier one.
inline std::vector<Sequence> enumerate(const dsl::Script& start, const Menu& menu, int depth) {
  if (depth < 0 || depth > 2) throw GeometryError(ErrorKind::EvalError, "depth must be 0, 1 or 2");
  std::vector<Sequence> out;
  out.push_back({});
  if (depth == 0) return out;
  auto kinds = detail::kinds_of(start);
  std::set<std::string> existing;
  for (const auto& st : start.body)
    if (auto* a = std::get_if<dsl::Assignment>(&st)) existing.insert(dsl::format(a->value));
  std::vector<dsl::Assignment> first;
  for (auto& s1 : detail::steps_over(menu, detail::objects_of(start, {}, kinds), 1))
    if (!existing.count(dsl::format(s1.value))) first.push_back(std::move(s1));
  for (const auto& s1 : first) out.push_back({{s1}});
  if (depth == 1) return out;
  for (const auto& s1 : first) {
    auto k2 = kinds;
    k2[s1.name] = detail::kind_of_step(s1);
    auto second = detail::steps_over(menu, detail::objects_of(start, {s1}, k2), 2);
    const std::string v1 = dsl::format(s1.value);
    for (const auto& s2 : second) {
      std::string v2 = dsl::format(s2.value);
      if (v2 == v1 || existing.count(v2)) continue;
      if (!detail::uses(s2.value, s1.name) && !(v1 < v2)) continue;
      out.push_back({{s1, s2}});
    }
  }
  return out;
}

// ------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string config;
  std::string constraints;
  std::string steps;  // formatted DSL, one statement per line
  detect::Relation relation;
  detect::Evidence evidence;
  bool trivial = false;

  std::string signature() const { return steps + "|" + relation.text(); }
};

struct Catalog {
  std::vector<CatalogEntry> entries;
  std::size_t sequences = 0;
  std::size_t skipped = 0;
  std::size_t trivial = 0;

  /// Adds entries whose (steps, relation) signature is new; order-preserving.
  void merge(const Catalog& other) {
    std::set<std::string> seen;
    for (const auto& e : entries) seen.insert(e.signature());
    for (const auto& e : other.entries) {
      if (seen.insert(e.signature()).second) entries.push_back(e);
    }
    sequences += other.sequences;
    skipped += other.skipped;
    trivial = 0;
    for (const auto& e : entries) trivial += e.trivial;
  }

  std::set<std::string> relation_texts(bool include_trivial = false) const {
    std::set<std::string> out;
    for (const auto& e : entries)
      if (include_trivial || !e.trivial) out.insert(e.relation.text());
    return out;
  }
};

struct RunOptions {
  int depth = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  detect::AnalyzeOptions analyze;
};

/// Script for a sequence: the start plus its steps.
inline dsl::Script sequence_script(const dsl::Script& start, const Sequence& seq) {
  dsl::Script s = start;
  for (const auto& st : seq.steps) s.body.push_back(st);
  return s;
}

/// Enumerates, samples, evaluates, detects and filters; deterministic for a
/// fixed seed regardless of thread count.
inline Catalog run(const StartConfig& cfg, const Menu& menu, const RunOptions& opt) {
  dsl::Script start = dsl::parse(start_script(cfg));
  auto seqs = enumerate(start, menu, opt.depth);
  detect::SampleBank bank = detect::SampleBank::make(dsl::constraint_set(start), opt.seed);

  std::set<std::string> start_names(start.vertices.begin(), start.vertices.end());
  for (const auto& st : start.body)
    if (auto* a = std::get_if<dsl::Assignment>(&st)) start_names.insert(a->name);

  std::vector<Catalog> parts(seqs.size());
  auto work = [&](std::size_t i) {
    const Sequence& seq = seqs[i];
    Catalog& part = parts[i];
    part.sequences = 1;
    dsl::Script s = sequence_script(start, seq);
    // Type-check the generated text; enumeration should never produce invalid scripts.
    s = dsl::parse(dsl::format(s));
    detect::AnalyzeOptions aopt = opt.analyze;
    if (!seq.steps.empty()) {
      aopt.plan.focus = {seq.steps.back().name};
      aopt.plan.allowed = start_names;
      aopt.plan.allowed.insert(seq.steps.back().name);
    }
    detect::Analysis a = detect::analyze(s, bank, aopt);
    if (!a.skipped.empty()) {
      part.skipped = 1;
      return;
    }
    for (auto& f : a.findings) {
      CatalogEntry e;
      e.config = cfg.id;
      e.constraints = cfg.constraints;
      e.steps = seq.text();
      e.relation = std::move(f.relation);
      e.evidence = f.evidence;
      e.trivial = f.trivial;
      part.entries.push_back(std::move(e));
    }
  };

  int nthreads = std::max(1, opt.threads);
  if (nthreads == 1) {
    for (std::size_t i = 0; i < seqs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < seqs.size();) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  Catalog out;
  std::set<std::string> seen;
  for (auto& p : parts) {
    out.sequences += p.sequences;
    out.skipped += p.skipped;
    for (auto& e : p.entries) {
      if (!seen.insert(e.signature()).second) continue;
      out.trivial += e.trivial;
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace gex::explore

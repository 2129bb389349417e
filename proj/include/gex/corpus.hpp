#pragma once

#include "gex/dsl/eval.hpp"
#include "gex/dsl/parser.hpp"
#include "gex/sampler.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace gex::corpus {

/// What an entry checks: a closed form, an incidence, a metric relation, or a
/// relation that needs a shape constraint.
enum class Status { Formula, Incidence, Relation, Constrained };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Formula: return "formula";
    case Status::Incidence: return "incidence";
    case Status::Relation: return "relation";
    case Status::Constrained: return "constrained";
  }
  return "?";
}

inline Status parse_status(const std::string& s) {
  if (s == "formula") return Status::Formula;
  if (s == "incidence") return Status::Incidence;
  if (s == "relation") return Status::Relation;
  if (s == "constrained") return Status::Constrained;
  throw GeometryError(ErrorKind::SyntaxError, "unknown corpus status '" + s + "'");
}

struct Entry {
  std::string id;
  std::string file;
  Status status = Status::Relation;
  /// Predicate name of the final assertion (colline, perp, ...) or "equation".
  std::string expect;
  std::string source;
  std::string text;
  dsl::Script script;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeometryError(ErrorKind::EvalError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// The predicate name of the script's last assertion, or "equation".
inline std::string assertion_kind(const dsl::Script& s) {
  for (auto it = s.body.rbegin(); it != s.body.rend(); ++it) {
    if (auto* a = std::get_if<dsl::Assertion>(&*it)) return a->is_equation() ? "equation" : a->lhs.text;
  }
  return "";
}

/// Parses and checks one entry. Throws ScriptError for a bad script and
/// GeometryError when the assertion does not match the declared kind.
inline Entry make_entry(std::string id, std::string file, Status status, std::string expect, std::string source,
                        std::string text) {
  Entry e{std::move(id), std::move(file), status, std::move(expect), std::move(source), std::move(text), {}};
  e.script = dsl::parse(e.text);
  if (e.script.assertion_count() == 0) throw GeometryError(ErrorKind::SyntaxError, e.id + ": no assertion");
  std::string k = assertion_kind(e.script);
  if (k != e.expect) throw GeometryError(ErrorKind::SyntaxError, e.id + ": expected " + e.expect + ", found " + k);
  return e;
}

/// Manifest lines: `id file status expect source...`; '#' starts a comment.
inline std::vector<Entry> load(const std::string& dir) {
  std::vector<Entry> out;
  std::istringstream in(read_file(dir + "/manifest.txt"));
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string id, file, status, expect, source;
    if (!(ls >> id)) continue;
    if (!(ls >> file >> status >> expect)) throw GeometryError(ErrorKind::SyntaxError, "bad manifest line: " + line);
    std::getline(ls >> std::ws, source);
    out.push_back(make_entry(id, file, parse_status(status), expect, source, read_file(dir + "/" + file)));
  }
  return out;
}

inline std::string default_dir() { return std::string(GEX_DATA_DIR) + "/corpus"; }

struct EntryResult {
  std::string id;
  bool passed = false;
  int samples = 0;
  double max_residual_fast = 0;
  double max_residual_confirm = 0;
  /// First failing assertion or evaluation error.
  std::string failure;
};

struct Report {
  std::vector<EntryResult> results;
  int samples = 0;
  std::uint64_t seed = 0;

  std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& r : results) n += r.passed;
    return n;
  }
  bool all_passed() const { return passed() == results.size(); }

  double worst_confirm() const {
    double w = 0;
    for (const auto& r : results) w = std::max(w, r.max_residual_confirm);
    return w;
  }

  std::string table() const {
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-40s %-6s %8s %12s %12s\n", "entry", "result", "samples", "fast", "confirm");
    out += buf;
    for (const auto& r : results) {
      std::snprintf(buf, sizeof buf, "%-40s %-6s %8d %12.3e %12.3e\n", r.id.c_str(), r.passed ? "pass" : "FAIL",
                    r.samples, r.max_residual_fast, r.max_residual_confirm);
      out += buf;
      if (!r.failure.empty()) out += "    " + r.failure + "\n";
    }
    std::snprintf(buf, sizeof buf, "%zu/%zu passed\n", passed(), results.size());
    return out + buf;
  }
};

namespace detail {

template <typename T>
double check(const Entry& e, const TriangleSample& smp, const TolerancePolicy& policy, EntryResult& r) {
  auto env = dsl::evaluate<T>(e.script, smp.realize<T>(), policy);
  double worst = 0;
  for (const auto& a : env.assertions) {
    double x = is_finite(a.residual) ? to_double(a.residual) : std::numeric_limits<double>::infinity();
    worst = std::max(worst, x);
    if (!a.holds && r.failure.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " residual %.3e", x);
      r.failure = a.text + buf;
    }
  }
  return worst;
}

}  // namespace detail

/// Verifies one entry on `n` sampled triangles at both precisions.
inline EntryResult run_entry(const Entry& e, int n, std::uint64_t seed, const TolerancePolicy& policy = {}) {
  EntryResult r;
  r.id = e.id;
  try {
    auto samples = sample(dsl::constraint_set(e.script), n, seed);
    for (const auto& smp : samples) {
      r.max_residual_fast = std::max(r.max_residual_fast, detail::check<Fast>(e, smp, policy, r));
      r.max_residual_confirm = std::max(r.max_residual_confirm, detail::check<Confirm>(e, smp, policy, r));
      ++r.samples;
    }
    r.passed = r.failure.empty() && r.samples == n;
  } catch (const GeometryError& err) {
    r.failure = err.what();
    r.passed = false;
  }
  return r;
}

/// Verifies every entry; the report is independent of the thread count.
inline Report run(const std::vector<Entry>& entries, int n, std::uint64_t seed, int threads = 1,
                  const TolerancePolicy& policy = {}) {
  Report rep;
  rep.samples = n;
  rep.seed = seed;
  rep.results.resize(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) rep.results[i] = run_entry(entries[i], n, seed, policy);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rep;
}

}  // namespace gex::corpus

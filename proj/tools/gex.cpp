#include "gex/io.hpp"
#include "gex/render.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace gex;

namespace {

/// Exit codes: 0 success, 1 a check failed, 2 bad input.
constexpr int kFail = 1;
constexpr int kError = 2;

struct Figure {
  std::string script;
  std::vector<double> triangle;
  std::uint64_t seed = 1;
};

void add_figure_options(CLI::App* cmd, Figure& f) {
  cmd->add_option("script", f.script, "Construction script (.geo)")->required();
  auto* tri = cmd->add_option("--triangle", f.triangle, "Side lengths a,b,c")->delimiter(',')->expected(3);
  cmd->add_option("--seed", f.seed, "Sample the script's constraint set with this seed")->excludes(tri);
}

template <typename T>
Triangle<T> figure_triangle(const dsl::Script& s, const Figure& f) {
  if (!f.triangle.empty()) return Triangle<T>::from_sides(T(f.triangle[0]), T(f.triangle[1]), T(f.triangle[2]));
  return sample(dsl::constraint_set(s), 1, f.seed).front().template realize<T>();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeometryError(ErrorKind::EvalError, "cannot write " + path);
  out << text;
}

std::string g15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

int cmd_eval(const Figure& f) {
  auto script = dsl::parse(corpus::read_file(f.script));
  auto env = dsl::evaluate<Confirm>(script, figure_triangle<Confirm>(script, f));
  for (const auto& [name, v] : env.bindings) {
    std::string line = name + " = ";
    if (auto* p = std::get_if<Point<Confirm>>(&v)) {
      line += "point(" + g15(to_double(p->x)) + ", " + g15(to_double(p->y)) + ")";
    } else if (auto* l = std::get_if<Line<Confirm>>(&v)) {
      line += "line(" + g15(to_double(l->a)) + ", " + g15(to_double(l->b)) + ", " + g15(to_double(l->c)) + ")";
    } else if (auto* c = std::get_if<Circle<Confirm>>(&v)) {
      line += "circle(" + g15(to_double(c->center.x)) + ", " + g15(to_double(c->center.y)) + ", " +
              g15(to_double(c->radius)) + ")";
    } else {
      line += g15(to_double(std::get<Confirm>(v)));
    }
    std::printf("%s\n", line.c_str());
  }
  for (const auto& a : env.assertions) {
    std::printf("%s  %s  residual %s\n", a.holds ? "pass" : "FAIL", a.text.c_str(),
                g15(to_double(a.residual)).c_str());
  }
  return env.all_hold() ? 0 : kFail;
}

struct ExploreArgs {
  explore::StartConfig start;
  std::string menu;
  std::string out;
  int depth = 1;
  std::uint64_t seed = 1;
};

int cmd_explore(const ExploreArgs& a, int threads) {
  explore::Menu menu = explore::load_menu(a.menu.empty() ? explore::default_menu_path() : a.menu);
  auto cat = explore::run(a.start, menu, {.depth = a.depth, .seed = a.seed, .threads = threads});
  auto doc = io::catalog_json(cat, {a.start.id, a.start.constraints, a.depth, a.seed});
  write_text(a.out, doc.dump(2) + "\n");
  std::FILE* summary = a.out.empty() || a.out == "-" ? stderr : stdout;
  std::fprintf(summary, "sequences %zu  skipped %zu  relations %zu  trivial %zu\n", cat.sequences, cat.skipped,
               cat.entries.size() - cat.trivial, cat.trivial);
  return 0;
}

struct CorpusArgs {
  std::string dir;
  std::string json;
  int samples = 20;
  std::uint64_t seed = 1;
};

int cmd_corpus(const CorpusArgs& a, int threads) {
  auto entries = corpus::load(a.dir.empty() ? corpus::default_dir() : a.dir);
  auto rep = corpus::run(entries, a.samples, a.seed, threads);
  std::string table = rep.table();
  std::fwrite(table.data(), 1, table.size(), stdout);
  if (!a.json.empty()) write_text(a.json, io::report_json(entries, rep).dump(2) + "\n");
  return rep.all_passed() ? 0 : kFail;
}

int cmd_render(const Figure& f, const std::string& out) {
  auto script = dsl::parse(corpus::read_file(f.script));
  write_text(out, render::svg(script, figure_triangle<double>(script, f)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjecture discovery for triangle geometry"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads")->envname("GEX_THREADS")->check(CLI::PositiveNumber);

  Figure eval_fig;
  auto* eval = app.add_subcommand("eval", "Evaluate a script on one triangle");
  add_figure_options(eval, eval_fig);

  ExploreArgs ex;
  auto* explore = app.add_subcommand("explore", "Enumerate constructions and collect relations");
  explore->add_option("--start", ex.start.id, "Start configuration")->check(CLI::IsMember(explore::start_ids()));
  explore->add_option("--depth", ex.depth, "Construction steps, 0 to 2")->check(CLI::Range(0, 2));
  explore->add_option("--constraints", ex.start.constraints, "Shape constraints separated by ';'");
  explore->add_option("--kinds", ex.start.kinds, "Cevian kinds for two-cevians and cevian-center")->delimiter(',');
  explore->add_option("--menu", ex.menu, "Construction menu manifest");
  explore->add_option("--seed", ex.seed, "Sampling seed");
  explore->add_option("--out", ex.out, "Catalog JSON path, '-' for stdout");

  CorpusArgs co;
  auto* corp = app.add_subcommand("corpus", "Verify the property corpus");
  corp->add_option("--dir", co.dir, "Corpus directory with manifest.txt");
  corp->add_option("--samples", co.samples, "Samples per entry")->check(CLI::PositiveNumber);
  corp->add_option("--seed", co.seed, "Sampling seed");
  corp->add_option("--json", co.json, "Report JSON path");

  Figure render_fig;
  std::string svg_out;
  auto* rend = app.add_subcommand("render", "Draw a script as SVG");
  add_figure_options(rend, render_fig);
  rend->add_option("-o,--out", svg_out, "SVG path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }
  threads = std::max(threads, 1);

  try {
    if (*eval) return cmd_eval(eval_fig);
    if (*explore) return cmd_explore(ex, threads);
    if (*corp) return cmd_corpus(co, threads);
    if (*rend) return cmd_render(render_fig, svg_out);
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}

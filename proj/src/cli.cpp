#include "polyplane/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polyplane/affine.hpp"
#include "polyplane/cylinders.hpp"
#include "polyplane/errors.hpp"
#include "polyplane/flowlab.hpp"
#include "polyplane/pillowcase.hpp"
#include "polyplane/rational.hpp"
#include "polyplane/scmap.hpp"
#include "polyplane/surface.hpp"
#include "polyplane/surface_io.hpp"
#include "polyplane/svg.hpp"
#include "polyplane/trace.hpp"

namespace polyplane {
namespace {

using ordered_json = nlohmann::ordered_json;

// %.17g: enough digits to reproduce any double exactly in CSV output.
std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_error(std::ostream& err, const std::string& code,
                const std::string& message) {
  ordered_json j;
  j["code"] = code;
  j["message"] = message;
  err << j.dump() << "\n";
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    parts.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

// User-supplied rational text; turns parse failures into domain errors.
Rational rational_arg(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    fail("BadFormat", e.what());
  }
}

std::vector<Rational> rational_list_arg(const std::string& text, int expect) {
  std::vector<std::string> parts = split_commas(text);
  if (expect >= 0 && static_cast<int>(parts.size()) != expect)
    fail("BadFormat",
         "expected " + std::to_string(expect) + " comma-separated values");
  std::vector<Rational> out;
  out.reserve(parts.size());
  for (const std::string& p : parts) out.push_back(rational_arg(p));
  return out;
}

// Accepts both "1/3" and "0.25" for quantities consumed as doubles.
double real_arg(const std::string& text) {
  if (text.find('/') != std::string::npos) return to_double(rational_arg(text));
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail("BadFormat", "not a number: '" + text + "'");
  }
}

int int_arg(const std::string& text) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail("BadFormat", "not an integer: '" + text + "'");
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail("IOError", "cannot open " + path + " for writing");
  return f;
}

void finish_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) fail("IOError", "failed while writing " + path);
}

// Writes the surface to --out (acknowledging on stdout) or prints it.
void emit_surface(const Surface& s, const std::string& out_path,
                  std::ostream& out) {
  if (out_path.empty()) {
    out << surface_to_json(s);
    return;
  }
  save_surface(s, out_path);
  ordered_json j;
  j["ok"] = true;
  j["out"] = out_path;
  out << j.dump(2) << "\n";
}

ordered_json surface_summary(const Surface& s) {
  StratumSignature sig = stratum(s);
  ordered_json j;
  j["ok"] = true;
  j["polygons"] = s.num_polygons();
  j["edges"] = s.num_edges();
  j["vertex_classes"] = s.num_classes();
  j["genus"] = sig.genus;
  j["punctures"] = sig.num_punctures;
  j["stratum"] = sig.orders;
  j["area"] = format_rational(area(s));
  return j;
}

// One-way float export for the transcendental geodesic flow: same layout as
// the exact format but with "float": true and plain JSON numbers.
ordered_json float_surface_json(const RealSurface& s) {
  ordered_json j;
  j["version"] = 1;
  j["float"] = true;
  ordered_json polys = ordered_json::array();
  for (const auto& p : s.polygons) {
    ordered_json pj = ordered_json::array();
    for (const auto& v : p.v) pj.push_back(ordered_json::array({v.x(), v.y()}));
    polys.push_back(std::move(pj));
  }
  j["polygons"] = std::move(polys);
  ordered_json gl = ordered_json::array();
  for (const auto& g : s.gluings) {
    ordered_json gj = ordered_json::array();
    gj.push_back(ordered_json::array({g.a.poly, g.a.edge}));
    gj.push_back(ordered_json::array({g.b.poly, g.b.edge}));
    gj.push_back(g.kind == GluingKind::Translation ? "T" : "R");
    gl.push_back(std::move(gj));
  }
  j["gluings"] = std::move(gl);
  ordered_json mk = ordered_json::array();
  for (const auto& c : s.marked) mk.push_back(ordered_json::array({c.poly, c.vert}));
  j["marked"] = std::move(mk);
  return j;
}

Direction direction_arg(const std::string& text) {
  if (text.empty()) return Direction::horizontal();
  if (text == "inf" || text == "vertical") return Direction::vertical();
  return Direction::of_slope(rational_arg(text));
}

void run_validate(const std::string& file, std::ostream& out) {
  Surface s = load_surface(file);
  out << surface_summary(s).dump(2) << "\n";
}

void run_act(const std::string& file, const std::string& matrix,
             const std::string& lambda, const std::string& horocycle,
             const std::string& geodesic, const std::string& out_path,
             std::ostream& out) {
  Surface s = load_surface(file);
  if (!geodesic.empty()) {
    RealSurface r = geodesic_flow(to_real(s), real_arg(geodesic));
    ordered_json j = float_surface_json(r);
    if (out_path.empty()) {
      out << j.dump(2) << "\n";
    } else {
      std::ofstream f = open_output(out_path);
      f << j.dump(2) << "\n";
      finish_output(f, out_path);
      ordered_json ack;
      ack["ok"] = true;
      ack["out"] = out_path;
      out << ack.dump(2) << "\n";
    }
    return;
  }
  Surface result;
  if (!matrix.empty()) {
    std::vector<Rational> m = rational_list_arg(matrix, 4);
    QMat2 mat;
    mat << m[0], m[1], m[2], m[3];
    result = apply_gl2(s, mat);
  } else if (!lambda.empty()) {
    std::vector<Rational> l = rational_list_arg(lambda, 2);
    result = teich_disk_point(s, QHalfPlanePoint{l[0], l[1]});
  } else {
    result = horocycle_flow(s, rational_arg(horocycle));
  }
  emit_surface(result, out_path, out);
}

void run_decompose(const std::string& file, const std::string& direction,
                   long max_crossings, std::ostream& out) {
  Surface s = load_surface(file);
  Direction d = direction_arg(direction);
  std::optional<CylinderDecomposition> dec =
      cylinder_decomposition(s, d, max_crossings);
  if (!dec)
    fail("NotJenkinsStrebel",
         "no cylinder decomposition within the crossing budget");
  ordered_json j;
  ordered_json dj;
  dj["dx"] = dec->direction.dx.str();
  dj["dy"] = dec->direction.dy.str();
  j["direction"] = std::move(dj);
  ordered_json cyls = ordered_json::array();
  for (const CylinderData& c : dec->cylinders) {
    ordered_json cj;
    cj["h"] = format_rational(c.height);
    cj["c"] = format_rational(c.circumference);
    cj["twist"] = format_rational(c.twist);
    cj["area"] = format_rational(c.area);
    cyls.push_back(std::move(cj));
  }
  j["cylinders"] = std::move(cyls);
  ordered_json ws = ordered_json::array();
  for (const Rational& w : area_weights(*dec)) ws.push_back(format_rational(w));
  j["weights"] = std::move(ws);
  ordered_json verts = ordered_json::array();
  for (const Singularity& sing : singularities(dec->surface)) {
    ordered_json vj;
    vj["class"] = sing.class_id;
    vj["order"] = sing.order;
    vj["puncture"] = sing.is_puncture;
    verts.push_back(std::move(vj));
  }
  ordered_json edges = ordered_json::array();
  for (const SaddleConnection& c : dec->diagram.connections) {
    ordered_json ej;
    ej["a"] = c.start_class;
    ej["b"] = c.end_class;
    ej["length"] = format_rational(c.length);
    edges.push_back(std::move(ej));
  }
  ordered_json gj;
  gj["vertices"] = std::move(verts);
  gj["edges"] = std::move(edges);
  j["graph"] = std::move(gj);
  out << j.dump(2) << "\n";
}

void run_pillowcase(const std::string& h1, const std::string& h2,
                    const std::string& q, const std::string& out_path,
                    std::ostream& out) {
  LPillowParams p{rational_arg(h1), rational_arg(h2), rational_arg(q)};
  emit_surface(make_l_pillowcase(p), out_path, out);
}

void run_classify(const std::string& file, std::ostream& out) {
  Surface s = load_surface(file);
  S05Case c = classify_s05(s);
  ordered_json j;
  j["case"] = c.tag == S05Tag::Case1 ? 1 : 2;
  j["cylinders"] = static_cast<int>(c.decomposition.cylinders.size());
  j["zero_class"] = c.zero_class;
  ordered_json w = ordered_json::array();
  for (const CriticalGraphEdge& e : c.witness) {
    ordered_json ej;
    ej["a"] = e.class_a;
    ej["b"] = e.class_b;
    ej["length"] = format_rational(e.length);
    w.push_back(std::move(ej));
  }
  j["witness"] = std::move(w);
  out << j.dump(2) << "\n";
}

void run_to_l(const std::string& file, std::ostream& out) {
  Surface s = load_surface(file);
  LNormalization n = shear_to_L(s);
  ordered_json j;
  j["mu"] =
      ordered_json::array({format_rational(n.mu[0]), format_rational(n.mu[1])});
  j["h1"] = format_rational(n.params.h1);
  j["h2"] = format_rational(n.params.h2);
  j["q"] = format_rational(n.params.q);
  out << j.dump(2) << "\n";
}

void run_cover(const std::string& file, const std::string& branch,
               const std::string& out_path, std::ostream& out) {
  Surface s = load_surface(file);
  std::vector<int> classes;
  for (const std::string& p : split_commas(branch))
    classes.push_back(int_arg(p));
  emit_surface(branched_double_cover(s, classes), out_path, out);
}

void run_flow_density(const std::string& weights_text,
                      const std::string& family, const std::string& eps_text,
                      const std::string& r_text, const std::string& step_text,
                      const std::string& csv_path, std::ostream& out) {
  double eps = real_arg(eps_text);
  double r = real_arg(r_text);
  double step = real_arg(step_text);
  std::vector<double> weights;
  for (const std::string& p : split_commas(weights_text))
    weights.push_back(real_arg(p));
  DiagonalFixingMap f = family == "linear" ? linear_map(weights)
                                           : geometric_mean_map(weights);
  CompactGrid grid = default_grid(arity(f));
  double fraction = density_estimate(f, eps, r, step, grid);
  ordered_json j;
  j["family"] = family;
  j["weights"] = f.weights;  // normalized to sum 1
  j["eps"] = eps;
  j["r"] = r;
  j["step"] = step;
  j["fraction"] = fraction;
  if (!csv_path.empty()) {
    std::vector<DensitySample> rows = density_profile(f, r, step, grid);
    std::ofstream csv = open_output(csv_path);
    csv << "t,distance\n";
    for (const DensitySample& row : rows)
      csv << fmt17(row.t) << "," << fmt17(row.distance) << "\n";
    finish_output(csv, csv_path);
    j["csv"] = csv_path;
    j["samples"] = static_cast<int>(rows.size());
  }
  out << j.dump(2) << "\n";
}

void run_sc_path(const std::string& q_text, const std::string& t_min_text,
                 const std::string& t_max_text, int per_decade,
                 const std::string& csv_path, std::ostream& out) {
  double q = real_arg(q_text);
  double t_min = real_arg(t_min_text);
  double t_max = real_arg(t_max_text);
  std::vector<double> ts = log_spaced_samples(t_min, t_max, per_decade);
  std::vector<ModuliPathRow> rows = moduli_path(q, ts);
  ordered_json j;
  j["q"] = q;
  j["samples"] = static_cast<int>(rows.size());
  ordered_json rj = ordered_json::array();
  for (const ModuliPathRow& row : rows) {
    ordered_json one;
    one["t"] = row.t;
    one["h1"] = row.h1;
    one["h2"] = row.h2;
    one["deviation"] = row.deviation;
    rj.push_back(std::move(one));
  }
  j["rows"] = std::move(rj);
  try {
    AsymptoticFit fit = asymptotic_fit(q, ts);
    ordered_json fj;
    fj["c1"] = fit.c1;
    fj["c2"] = fit.c2;
    fj["residual"] = fit.residual;
    fj["cubic_residual"] = fit.cubic_residual;
    fj["prefers_log"] = fit.residual < fit.cubic_residual;
    j["fit"] = std::move(fj);
  } catch (const DomainError& e) {
    // The sample window does not meet the fit's preconditions; report the
    // path anyway.
    j["fit"] = nullptr;
    j["fit_skipped"] = e.what();
  }
  if (!csv_path.empty()) {
    std::ofstream csv = open_output(csv_path);
    csv << "t,h1,h2,deviation\n";
    for (const ModuliPathRow& row : rows)
      csv << fmt17(row.t) << "," << fmt17(row.h1) << "," << fmt17(row.h2)
          << "," << fmt17(row.deviation) << "\n";
    finish_output(csv, csv_path);
    j["csv"] = csv_path;
  }
  out << j.dump(2) << "\n";
}

void run_render(const std::string& file, const std::string& svg_path,
                std::ostream& out) {
  Surface s = load_surface(file);
  save_surface_svg(s, svg_path);
  ordered_json j;
  j["ok"] = true;
  j["svg"] = svg_path;
  out << j.dump(2) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Exact half-translation surfaces: construct, act, decompose, classify, "
      "and run numerical experiments."};
  app.name("polyplane");
  app.require_subcommand(1);

  std::string file, out_path;

  CLI::App* validate =
      app.add_subcommand("validate", "Check a surface file and print a summary");
  validate->add_option("file", file, "surface JSON file")->required();

  CLI::App* act = app.add_subcommand(
      "act", "Apply a linear deformation and print or save the result");
  act->add_option("file", file, "surface JSON file")->required();
  std::string matrix, lambda, horocycle, geodesic;
  CLI::App* action = act->add_option_group("action", "choose one deformation");
  action->add_option("--matrix", matrix,
                     "entries a,b,c,d (rationals, row major, det > 0)");
  action->add_option("--lambda", lambda,
                     "re,im of an upper-half-plane point: x+iy -> x+lambda*y");
  action->add_option("--horocycle", horocycle,
                     "horizontal shear time t (rational)");
  action->add_option("--geodesic", geodesic,
                     "diag(e^t, e^-t) flow time t (float output)");
  action->require_option(1);
  act->add_option("--out", out_path, "write the image surface to this file");

  CLI::App* decompose = app.add_subcommand(
      "decompose", "Cylinder decomposition in a rational direction");
  decompose->add_option("file", file, "surface JSON file")->required();
  std::string direction;
  decompose->add_option("--direction", direction,
                        "slope p/q, or 'inf' (default: horizontal)");
  long max_crossings = 100000;
  decompose->add_option("--max-crossings", max_crossings,
                        "per-separatrix edge-crossing budget");

  CLI::App* pillowcase = app.add_subcommand(
      "pillowcase", "Build an L-shaped pillowcase surface");
  std::string h1, h2, q_text;
  pillowcase->add_option("--h1", h1, "height of the length-q cylinder")
      ->required();
  pillowcase->add_option("--h2", h2, "height of the length-1 cylinder")
      ->required();
  pillowcase->add_option("--q", q_text, "top bar width")->required();
  pillowcase->add_option("--out", out_path, "write the surface to this file");

  CLI::App* classify = app.add_subcommand(
      "classify", "Case 1 / Case 2 critical-graph classification");
  classify->add_option("file", file, "surface JSON file")->required();

  CLI::App* to_l = app.add_subcommand(
      "to-L", "Shear a two-cylinder surface back to L-shaped normal form");
  to_l->add_option("file", file, "surface JSON file")->required();

  CLI::App* cover =
      app.add_subcommand("cover", "Double cover branched over vertex classes");
  cover->add_option("file", file, "surface JSON file")->required();
  std::string branch;
  cover->add_option("--branch", branch, "comma-separated vertex class ids")
      ->required();
  cover->add_option("--out", out_path, "write the cover to this file");

  CLI::App* flow_density = app.add_subcommand(
      "flow-density", "Density of approach to the linear part under the "
                      "translation flow");
  std::string weights_text, family = "geometric-mean", csv_path;
  flow_density->add_option("--weights", weights_text,
                           "positive weights, comma separated")
      ->required();
  flow_density
      ->add_option("--family", family, "map family (default geometric-mean)")
      ->check(CLI::IsMember({"geometric-mean", "linear"}));
  std::string eps = "0", r = "0", step = "0.5";
  flow_density->add_option("--eps", eps, "closeness threshold")->required();
  flow_density->add_option("--r", r, "time window [-r, r]")->required();
  flow_density->add_option("--step", step, "time step (default 0.5)");
  flow_density->add_option("--csv", csv_path, "write (t, distance) rows here");

  CLI::App* sc_path = app.add_subcommand(
      "sc-path", "Matched-moduli path of the slit pillow degeneration");
  std::string q_val, t_min, t_max;
  int per_decade = 5;
  sc_path->add_option("--q", q_val, "family parameter q > 0")->required();
  sc_path->add_option("--tmin", t_min, "smallest slide distance")->required();
  sc_path->add_option("--tmax", t_max, "largest slide distance")->required();
  sc_path->add_option("--per-decade", per_decade,
                      "log-spaced samples per decade (default 5)");
  sc_path->add_option("--csv", csv_path, "write (t, h1, h2, deviation) rows");

  CLI::App* render =
      app.add_subcommand("render", "Draw the surface as an SVG diagram");
  render->add_option("file", file, "surface JSON file")->required();
  std::string svg_path;
  render->add_option("--svg", svg_path, "output SVG path")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("polyplane");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      CLI::App* target =
          app.get_subcommands().empty() ? &app : app.get_subcommands().back();
      out << target->help();
      return 0;
    }
    emit_error(err, "Usage", e.what());
    return 2;
  }

  try {
    if (validate->parsed()) {
      run_validate(file, out);
    } else if (act->parsed()) {
      run_act(file, matrix, lambda, horocycle, geodesic, out_path, out);
    } else if (decompose->parsed()) {
      run_decompose(file, direction, max_crossings, out);
    } else if (pillowcase->parsed()) {
      run_pillowcase(h1, h2, q_text, out_path, out);
    } else if (classify->parsed()) {
      run_classify(file, out);
    } else if (to_l->parsed()) {
      run_to_l(file, out);
    } else if (cover->parsed()) {
      run_cover(file, branch, out_path, out);
    } else if (flow_density->parsed()) {
      run_flow_density(weights_text, family, eps, r, step, csv_path, out);
    } else if (sc_path->parsed()) {
      run_sc_path(q_val, t_min, t_max, per_decade, csv_path, out);
    } else if (render->parsed()) {
      run_render(file, svg_path, out);
    }
    return 0;
  } catch (const DomainError& e) {
    emit_error(err, e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error(err, "Internal", e.what());
    return 1;
  }
}

}  // namespace polyplane

// equichord: command-line front end for the checks, profile scans, the
// falsifier search and the built-in figure datasets.

#include <cmath>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equichord/body_json.hpp"
#include "equichord/checks.hpp"
#include "equichord/csv.hpp"
#include "equichord/errors.hpp"
#include "equichord/falsifier.hpp"
#include "equichord/planar.hpp"
#include "equichord/shadow.hpp"

using namespace equichord;

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::vector<double> out;
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream one(item);
    one.imbue(std::locale::classic());
    double v = 0.0;
    if (!(one >> v) || !(one >> std::ws).eof()) fail(ErrorKind::InvalidArgument, std::string("bad number in ") + what);
    out.push_back(v);
  }
  if (out.size() != count)
    fail(ErrorKind::InvalidArgument, std::string(what) + " needs " + std::to_string(count) + " comma-separated numbers");
  return out;
}

Vec3 parse_vec3(const std::string& text, const char* what) {
  const auto v = parse_numbers(text, 3, what);
  return Vec3(v[0], v[1], v[2]);
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-")
    std::cout << content;
  else
    write_text_file(out, content);
}

// ---- check -----------------------------------------------------------------

struct CheckArgs {
  std::string id, k, l, m, p, axis, slab, out;
  CheckConfig cfg;
  double tol = 0.0;
  bool serial = false;
};

int run_check_cmd(const CheckArgs& a) {
  CheckConfig cfg = a.cfg;
  if (a.tol > 0.0) cfg.hypothesis_tol = cfg.conclusion_tol = a.tol;
  if (a.serial) cfg.exec = Exec::Serial;
  if (!a.axis.empty()) cfg.axis = parse_vec3(a.axis, "--axis");
  if (!a.slab.empty()) {
    const auto s = parse_numbers(a.slab, 5, "--slab");
    cfg.slab = Slab{Vec3(s[0], s[1], s[2]), s[3], s[4]};
  }
  CheckInputs in{load_body(a.k), std::nullopt, std::nullopt, std::nullopt};
  if (!a.l.empty()) in.L = load_body(a.l);
  if (!a.m.empty()) in.M = load_body(a.m);
  if (!a.p.empty()) in.p = parse_vec3(a.p, "--p");
  const CheckReport r = run_check(a.id, in, cfg);
  emit(a.out, to_json(r).dump(2) + "\n");
  std::cerr << r.check_id << ": hypothesis " << (r.hypothesis_holds ? "holds" : "fails") << " ("
            << format_number(r.hypothesis_residual) << ")";
  if (!r.hypothesis_only)
    std::cerr << ", conclusion " << (r.conclusion_holds ? "holds" : "fails") << " ("
              << format_number(r.conclusion_residual) << ")";
  std::cerr << "\n";
  return r.all_verdicts_true() ? 0 : 1;
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  std::string profile, k, l, u = "0,0,1", x, p, plane, out;
  int m = 128;
};

PlanarBody planar_view(const Body& K, const ScanArgs& a) {
  if (K.dim() == 2) return native_planar(K, a.m);
  if (!a.plane.empty()) {
    const auto v = parse_numbers(a.plane, 4, "--plane");
    return section(K, Plane{Direction(Vec3(v[0], v[1], v[2])), v[3]}, a.m);
  }
  return projection(K, Direction(parse_vec3(a.u, "--u")), a.m);
}

int run_scan_cmd(const ScanArgs& a) {
  const Body K = load_body(a.k);
  auto need_l = [&] {
    if (a.l.empty()) fail(ErrorKind::InvalidArgument, "profile '" + a.profile + "' needs --l");
    return load_body(a.l);
  };
  if (a.profile == "lambda-parallel") {
    const Body L = need_l();
    const ChordProfile p = K.dim() == 2 ? planar_chord_profile(K, L, a.m)
                                        : parallel_chord_profile(K, L, Direction(parse_vec3(a.u, "--u")), a.m);
    emit(a.out, profile_csv(p, K.dim() == 2 ? "theta" : "phi"));
  } else if (a.profile == "lambda-concurrent") {
    const Body L = need_l();
    if (a.x.empty()) fail(ErrorKind::InvalidArgument, "profile 'lambda-concurrent' needs --x");
    emit(a.out, profile_csv(concurrent_chord_profile(K, L, parse_vec3(a.x, "--x"), a.m), "psi"));
  } else if (a.profile == "width") {
    emit(a.out, profile_csv(width_profile(planar_view(K, a)), "theta"));
  } else if (a.profile == "equichordal") {
    const PlanarBody P = planar_view(K, a);
    const Vec2 p = a.p.empty() ? Vec2::Zero() : P.frame.to_local(parse_vec3(a.p, "--p"));
    emit(a.out, profile_csv(equichordal_test(P, p, a.m), "theta"));
  } else if (a.profile == "shadow") {
    emit(a.out, shadow_csv(shadow_boundary(K, Direction(parse_vec3(a.u, "--u")), a.m)));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown profile '" + a.profile + "'");
  }
  return 0;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
  std::string target = "parallel", family = "ellipsoid+sh(2)", coupling = "homothet", l, out, csv;
  std::uint64_t seed = 1;
  int budget = 500;
  int restarts = 4;
};

int run_search_cmd(const SearchArgs& a) {
  SearchConfig cfg;
  cfg.target = a.target;
  cfg.family = Family::parse(a.family);
  cfg.coupling = parse_coupling(a.coupling);
  cfg.seed = a.seed;
  cfg.budget = a.budget;
  cfg.restarts = a.restarts;
  if (!a.l.empty()) cfg.L = load_body(a.l);
  const SearchTrace t = search(cfg);
  emit(a.out, t.to_json().dump(2) + "\n");
  if (!a.csv.empty()) write_text_file(a.csv, t.to_csv());
  std::cerr << "search " << a.target << ": best residual " << format_number(t.best().residual)
            << ", structure distance " << format_number(t.best().structure_distance) << " after " << t.evaluations
            << " evaluations (" << t.termination << ")\n";
  if (t.alarm) std::cerr << "ALARM: " << t.alarm_reason << "\n";
  return t.alarm ? 1 : 0;
}

// ---- demo ------------------------------------------------------------------

std::string demo(const std::string& name) {
  if (name == "fig-elipsoides") {
    const Body K(Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0)));
    const Body L = K.homothet(0.5, Vec3::Zero());
    std::vector<std::vector<double>> rows;
    for (const Vec3& u : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(1, 1, 1), Vec3(2, -1, 0.5)}) {
      const Direction d(u);
      const ChordProfile p = parallel_chord_profile(K, L, d, 64);
      for (std::size_t j = 0; j < p.lengths.size(); ++j) rows.push_back({d[0], d[1], d[2], p.parameters[j], p.lengths[j]});
    }
    return csv_table({"ux", "uy", "uz", "phi", "length"}, rows);
  }
  if (name == "fig-elipses") {
    const Body K(Ellipsoid::ellipse(2.0, 1.0)), L(Ellipsoid::ellipse(1.0, 0.5));
    return profile_csv(planar_chord_profile(K, L, 512), "theta");
  }
  if (name == "fig-planas") {
    const Body K(Ellipsoid::diagonal(Vec3(1.0, 1.0, 0.25)));
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < 8; ++k) {
      const double a = kPi * k / 8;
      const ShadowCurve c = shadow_boundary(K, Direction(std::cos(a), std::sin(a), 0.0), 64);
      for (std::size_t j = 0; j < c.points.size(); ++j)
        rows.push_back({a, c.phi[j], c.points[j].x(), c.points[j].y(), c.points[j].z()});
    }
    return csv_table({"w_angle", "phi", "x", "y", "z"}, rows);
  }
  if (name == "fig-proyeccion") {
    // Balls with R^2 - r^2 = 1/4: projected tangent chords have length 1 and
    // the supporting sections have constant width 1.
    const Body K(Ellipsoid::ball(1.0)), L(Ellipsoid::ball(std::sqrt(0.75)));
    const Vec3 n = Vec3(1, 0, 0);
    const PlanarBody S = section(K, Plane{Direction(n), L.support(n)}, 256);
    return profile_csv(width_profile(S), "theta");
  }
  fail(ErrorKind::InvalidArgument, "unknown demo '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equichordal-body checks, profile scans and conjecture searches"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "run one check and write a JSON report");
  check->add_option("--id", ca.id, "check id")->required()->check(CLI::IsMember(check_ids()));
  check->add_option("--k", ca.k, "outer body JSON")->required();
  check->add_option("--l", ca.l, "inner body JSON");
  check->add_option("--m", ca.m, "apex body JSON");
  check->add_option("--p", ca.p, "point x,y,z");
  check->add_option("--axis", ca.axis, "direction for lemma2, x,y,z");
  check->add_option("--slab", ca.slab, "slab nx,ny,nz,offset1,offset2");
  check->add_option("--directions", ca.cfg.directions)->check(CLI::PositiveNumber);
  check->add_option("--tangents", ca.cfg.tangents)->check(CLI::PositiveNumber);
  check->add_option("--apexes", ca.cfg.apexes)->check(CLI::PositiveNumber);
  check->add_option("--section-planes", ca.cfg.section_planes)->check(CLI::PositiveNumber);
  check->add_option("--section-samples", ca.cfg.section_samples)->check(CLI::PositiveNumber);
  check->add_option("--planes", ca.cfg.planes)->check(CLI::PositiveNumber);
  check->add_option("--fit-samples", ca.cfg.fit_samples)->check(CLI::PositiveNumber);
  check->add_option("--tol", ca.tol, "both tolerances")->check(CLI::PositiveNumber);
  check->add_option("--hypothesis-tol", ca.cfg.hypothesis_tol)->check(CLI::PositiveNumber);
  check->add_option("--conclusion-tol", ca.cfg.conclusion_tol)->check(CLI::PositiveNumber);
  check->add_flag("--hypothesis-only", ca.cfg.hypothesis_only);
  check->add_flag("--serial", ca.serial, "disable OpenMP loops");
  check->add_option("--out", ca.out, "report path (default stdout)");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "write a CSV profile");
  scan->add_option("--profile", sa.profile)
      ->required()
      ->check(CLI::IsMember({"lambda-parallel", "lambda-concurrent", "width", "equichordal", "shadow"}));
  scan->add_option("--k", sa.k, "body JSON")->required();
  scan->add_option("--l", sa.l, "inner body JSON");
  scan->add_option("--u", sa.u, "direction x,y,z")->capture_default_str();
  scan->add_option("--x", sa.x, "apex x,y,z");
  scan->add_option("--p", sa.p, "point x,y,z");
  scan->add_option("--plane", sa.plane, "section plane nx,ny,nz,offset (default: projection along --u)");
  scan->add_option("--samples", sa.m, "samples")->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_option("--out", sa.out, "CSV path (default stdout)");

  SearchArgs ga;
  auto* srch = app.add_subcommand("search", "run the falsifier and write a trace");
  srch->add_option("--target", ga.target, "target id")->capture_default_str()->check(CLI::IsMember(search_targets()));
  srch->add_option("--family", ga.family, "fourier2d(N), sh3d(N) or ellipsoid+sh(N)")->capture_default_str();
  srch->add_option("--coupling", ga.coupling, "fixed, homothet or independent")->capture_default_str();
  srch->add_option("--l", ga.l, "fixed inner body JSON");
  srch->add_option("--seed", ga.seed, "seed")->capture_default_str();
  srch->add_option("--budget", ga.budget, "evaluations")->capture_default_str()->check(CLI::PositiveNumber);
  srch->add_option("--restarts", ga.restarts, "restarts")->capture_default_str()->check(CLI::NonNegativeNumber);
  srch->add_option("--out", ga.out, "trace JSON path (default stdout)");
  srch->add_option("--csv", ga.csv, "trace CSV path");

  std::string demo_name, demo_out;
  auto* dm = app.add_subcommand("demo", "write a built-in figure dataset");
  dm->add_option("--name", demo_name)
      ->required()
      ->check(CLI::IsMember({"fig-elipsoides", "fig-elipses", "fig-planas", "fig-proyeccion"}));
  dm->add_option("--out", demo_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return run_check_cmd(ca);
    if (*scan) return run_scan_cmd(sa);
    if (*srch) return run_search_cmd(ga);
    if (*dm) {
      emit(demo_out, demo(demo_name));
      return 0;
    }
  } catch (const GeometryError& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

#include "cgclosure/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "cgclosure/plot.hpp"

namespace cgc::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSchemaHelp = R"(expected input schema:
  body file   {"type": "polytope", "field"?: m, "vertices": [[x, ...], ...]}
              {"type": "polytope", "field"?: m, "inequalities": [{"normal": [...], "rhs": x}, ...]}
              {"type": "ball", "center": [...], "radius": "p/q"}
              {"type": "ellipse", "center": [x, y], "shape": [[a, b], [b, c]]}
              or an instance {"name": ..., "body": {...}, "expected"?: {...}}
  scalar x    integer, "p/q", or [rat, irr] meaning rat + irr*sqrt(field)
  cut / normal  JSON array, e.g. "[1,0]" or "[[0,1],\"1/2\"]"
)";

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json parse_arg(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    // Bare rationals such as 1/100 are not JSON.
    return Json(text);
  }
}

void emit(const Json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Usage("cannot write " + out_path);
  f << j.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Usage("cannot write " + out_path);
  f << text;
}

std::string resolve_mode(const std::string& mode, const ConvexBody& k) {
  if (mode == "auto") return k.is_polytope() ? "exact" : "oracle";
  return mode;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json compute(const ConvexBody& k, const std::string& mode, long bound, const ResultOptions& opts) {
  if (mode == "exact") return closure_to_json(cg_closure(k), opts);
  auto t0 = std::chrono::steady_clock::now();
  Json j = oracle_to_json(brute_force_closure(k, bound));
  if (!k.is_polytope()) j["certified_complete"] = false;
  if (opts.timing) j["timing_seconds"] = since(t0);
  return j;
}

size_t thread_count() {
  if (const char* env = std::getenv("CG_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

QVec parse_pi(const std::string& text, int field) {
  Json j = parse_arg(text);
  if (!j.is_array() || j.empty()) throw SchemaError("--pi must be a nonempty JSON array");
  bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_array(); });
  if (flat && j.size() == 2) return {quad_from_json(j, field)};
  return qvec_from_json(j, field);
}

CorpusOutcome run_instance(const std::string& instance_path, const std::string& expected_path, Json* result) {
  CorpusOutcome o;
  o.name = fs::path(instance_path).stem().string();
  try {
    Json inst = read_json_file(instance_path);
    if (inst.contains("name")) o.name = inst.at("name").get<std::string>();
    ConvexBody k = body_from_json(inst);
    Json expected;
    if (!expected_path.empty() && fs::exists(expected_path)) expected = read_json_file(expected_path);
    else if (inst.contains("expected")) expected = inst.at("expected");
    o.had_expected = !expected.is_null();

    std::string mode = resolve_mode(expected.value("mode", std::string("auto")), k);
    long bound = expected.value("bound", 3L);
    std::optional<ClosureResult> exact;
    std::optional<OracleResult> oracle;
    Polytope got;
    if (mode == "exact") {
      exact = cg_closure(k);
      got = exact->closure;
      if (result) *result = closure_to_json(*exact, {false, true});
    } else if (mode == "oracle") {
      oracle = brute_force_closure(k, bound);
      got = oracle->polytope;
      if (result) *result = oracle_to_json(*oracle);
    } else {
      throw SchemaError("mode must be exact or oracle");
    }
    if (!o.had_expected) {
      o.passed = true;
      o.detail = "no expected block";
      return o;
    }
    if (expected.contains("closure")) {
      const Json& c = expected.at("closure");
      Polytope want = c.value("empty", false) ? Polytope::empty(k.dim()) : polytope_from_json(c, k.dim());
      if (!(want == got)) {
        o.detail = "closure " + got.str() + " differs from expected " + want.str();
        return o;
      }
    }
    if (expected.contains("stable") && oracle && expected.at("stable").get<bool>() != oracle->stable) {
      o.detail = "oracle stability differs from expected";
      return o;
    }
    if (expected.contains("verify_bound") && exact) {
      VerifyReport rep = verify_closure(*exact, k, expected.at("verify_bound").get<long>());
      if (!rep.ok()) {
        for (const auto& ch : rep.checks)
          if (!ch.passed) o.detail = "verify " + ch.name + ": " + ch.detail;
        return o;
      }
    }
    o.passed = true;
  } catch (const Error& e) {
    o.detail = e.what();
  } catch (const SchemaError& e) {
    o.detail = std::string("schema: ") + e.what();
  } catch (const nlohmann::json::exception& e) {
    o.detail = std::string("schema: ") + e.what();
  }
  return o;
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Chvatal-Gomory closures of rational and quadratic-irrational convex bodies"};
  app.require_subcommand(1);

  auto* closure = app.add_subcommand("closure", "Closure computation and verification");
  closure->require_subcommand(1);

  std::string body_path, out_path, mode = "auto", result_path;
  long bound = 3;
  bool no_timing = false, no_certificates = false;
  auto* compute_cmd = closure->add_subcommand("compute", "Compute the closure of a body");
  compute_cmd->add_option("--body", body_path, "Body or instance JSON")->required();
  compute_cmd->add_option("--mode", mode, "exact, oracle, or auto (exact for polytopes)")
      ->check(CLI::IsMember({"exact", "oracle", "auto"}));
  compute_cmd->add_option("--bound", bound, "Oracle bound B on |c|_inf")->check(CLI::PositiveNumber);
  compute_cmd->add_option("--out", out_path, "Output file (default stdout)");
  compute_cmd->add_flag("--no-timing", no_timing, "Omit wall-clock timing for byte-stable output");
  compute_cmd->add_flag("--no-certificates", no_certificates, "Omit homogeneity certificates from the log");

  long verify_bound = 20;
  auto* verify_cmd = closure->add_subcommand("verify", "Check a computed closure independently");
  verify_cmd->add_option("--result", result_path, "Result JSON from closure compute")->required();
  verify_cmd->add_option("--body", body_path, "Body or instance JSON")->required();
  verify_cmd->add_option("--bound", verify_bound, "Oracle bound for the containment check")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* kron = app.add_subcommand("kronecker", "Simultaneous Diophantine approximation");
  kron->require_subcommand(1);
  std::string pi_text, eps_text = "1/100", n0_text = "0";
  int field = 0, max_steps = 2000;
  auto* approx_cmd = kron->add_subcommand("approx", "Find a, N > n0 with |a - N pi| < eps");
  approx_cmd->add_option("--pi", pi_text, "Target vector, e.g. \"[0,1]\" for sqrt(field)")->required();
  approx_cmd->add_option("--field", field, "Square-free m of Q(sqrt m)");
  approx_cmd->add_option("--eps", eps_text, "Tolerance as p/q");
  approx_cmd->add_option("--n0", n0_text, "Lower bound on N");
  approx_cmd->add_option("--max-steps", max_steps, "Convergent steps before giving up");
  approx_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* hom = app.add_subcommand("homogeneity", "Homogeneity lifting of face cuts");
  hom->require_subcommand(1);
  std::string normal_text, offset_text, cut_text, delta_text;
  auto* lift_cmd = hom->add_subcommand("lift", "Lift a cut of a face to CG cuts of the body");
  lift_cmd->add_option("--body", body_path, "Polytope body JSON")->required();
  lift_cmd->add_option("--face-normal", normal_text, "Face normal pi as a JSON array")->required();
  lift_cmd->add_option("--face-offset", offset_text, "pi_0 (default h_K(pi))");
  lift_cmd->add_option("--cut", cut_text, "Integral c as a JSON array")->required();
  lift_cmd->add_option("--delta", delta_text, "Valid rhs on the face (default h_F(c))");
  lift_cmd->add_option("--field", field, "Field for irrational normals (default the body's)");
  lift_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* plot_cmd = app.add_subcommand("plot", "SVG of a 2D body with cuts and closure");
  plot_cmd->add_option("--body", body_path, "Body or instance JSON")->required();
  plot_cmd->add_option("--result", result_path, "Exact result JSON to draw");
  std::optional<long> plot_bound;
  plot_cmd->add_option("--bound", plot_bound, "Draw every cut with |c|_inf <= B")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--out", out_path, "SVG file (default stdout)");

  auto* corpus = app.add_subcommand("corpus", "Regression corpus");
  corpus->require_subcommand(1);
  std::string dir = "corpus";
  auto* corpus_run = corpus->add_subcommand("run", "Run instances/*.json against expected/*.json");
  corpus_run->add_option("--dir", dir, "Corpus directory");
  corpus_run->add_option("--out", out_path, "Directory for per-instance results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  }

  try {
    if (*compute_cmd) {
      ConvexBody k = body_from_json(read_json_file(body_path));
      emit(compute(k, resolve_mode(mode, k), bound, {!no_timing, !no_certificates}), out_path, out);
    } else if (*verify_cmd) {
      ConvexBody k = body_from_json(read_json_file(body_path));
      Json res = read_json_file(result_path);
      if (res.value("mode", std::string("exact")) != "exact")
        throw SchemaError("closure verify needs an exact-mode result");
      VerifyReport rep = verify_closure(closure_from_json(res), k, verify_bound);
      emit(report_to_json(rep), out_path, out);
      if (!rep.ok()) {
        err << to_string(ErrorKind::CertificateFailure) << ": closure failed verification\n";
        return 1;
      }
    } else if (*approx_cmd) {
      QVec pi = parse_pi(pi_text, field);
      Rational eps = rational_from_json(parse_arg(eps_text));
      Integer n0 = integer_from_json(parse_arg(n0_text));
      Approximant ap = approximate(pi, eps, n0, max_steps);
      Json j = approximant_to_json(ap);
      j["pi"] = to_json(pi);
      j["eps"] = to_json(eps);
      emit(j, out_path, out);
    } else if (*lift_cmd) {
      Json bj = read_json_file(body_path);
      ConvexBody k = body_from_json(bj);
      const Polytope& p = k.polytope();
      int f = field != 0 ? field : (p.field() != 0 ? p.field() : bj.value("field", 0));
      QVec pi = qvec_from_json(parse_arg(normal_text), f);
      if (pi.size() != k.dim()) throw SchemaError("--face-normal has the wrong dimension");
      Face face = offset_text.empty() ? pi_face(p, pi)
                                      : face_from_inequality(p, pi, quad_from_json(parse_arg(offset_text), f));
      ZVec c = zvec_from_json(parse_arg(cut_text));
      if (c.size() != k.dim()) throw SchemaError("--cut has the wrong dimension");
      QuadExt delta;
      if (!delta_text.empty()) {
        delta = quad_from_json(parse_arg(delta_text), f);
      } else {
        Polytope fp = face_polytope(p, face);
        delta = dot(c, fp.vertices().front());
        for (const auto& v : fp.vertices()) delta = std::max(delta, dot(c, v));
      }
      HomogeneityCertificate cert = lift_cut(k, face, c, delta);
      Json j = certificate_to_json(cert);
      std::string failure = certificate_failure(cert, k);
      j["check"] = failure.empty() ? "ok" : failure;
      emit(j, out_path, out);
      if (!failure.empty()) {
        err << to_string(ErrorKind::CertificateFailure) << ": " << failure << "\n";
        return 1;
      }
    } else if (*plot_cmd) {
      ConvexBody k = body_from_json(read_json_file(body_path));
      if (k.dim() != 2) throw Error(ErrorKind::NotPlottable, "plot needs a 2D body");
      std::vector<CGCut> cuts;
      Polytope cl;
      if (!result_path.empty()) {
        ClosureResult r = closure_from_json(read_json_file(result_path));
        cuts = r.defining_cuts.cuts();
        cl = r.closure;
      } else if (plot_bound || !k.is_polytope()) {
        OracleResult r = brute_force_closure(k, plot_bound.value_or(3), false);
        cuts = r.cuts;
        cl = r.polytope;
      } else {
        ClosureResult r = cg_closure(k);
        cuts = r.defining_cuts.cuts();
        cl = r.closure;
      }
      emit_text(plot2d(k, cuts, cl), out_path, out);
    } else if (*corpus_run) {
      fs::path inst_dir = fs::path(dir) / "instances";
      if (!fs::is_directory(inst_dir)) throw Usage("no instances/ directory under " + dir);
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(inst_dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (!out_path.empty()) fs::create_directories(out_path);

      std::vector<CorpusOutcome> outcomes(files.size());
      std::atomic<size_t> next{0};
      auto worker = [&] {
        for (size_t i; (i = next++) < files.size();) {
          Json result;
          std::string exp = (fs::path(dir) / "expected" / files[i].filename()).string();
          outcomes[i] = run_instance(files[i].string(), exp, out_path.empty() ? nullptr : &result);
          if (!out_path.empty() && !result.is_null())
            std::ofstream(fs::path(out_path) / files[i].filename()) << result.dump(2) << "\n";
        }
      };
      std::vector<std::thread> pool;
      for (size_t t = 0; t < std::min(thread_count(), files.size()); ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();

      size_t failed = 0;
      for (const auto& o : outcomes) {
        out << (o.passed ? "PASS " : "FAIL ") << o.name;
        if (!o.detail.empty()) out << " (" << o.detail << ")";
        out << "\n";
        failed += !o.passed;
      }
      out << outcomes.size() - failed << "/" << outcomes.size() << " passed\n";
      if (failed) return 1;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const SchemaError& e) {
    err << "usage error: " << e.what() << "\n" << kSchemaHelp;
    return 2;
  } catch (const Usage& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: " << e.what() << "\n" << kSchemaHelp;
    return 2;
  }
  return 0;
}

}  // namespace cgc::cli

#pragma once

// Orchestration behind the `jumpscope` executable: configuration, the
// detect / demo / gen commands, scoring against ground truth and the
// error-to-exit-code mapping.

#include <jumpscope/detector.hpp>
#include <jumpscope/io.hpp>
#include <jumpscope/serialize.hpp>
#include <jumpscope/synth.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jumpscope::cli {

enum class Mode { Auto, Smooth, Fractional, Linear };

struct RunConfig {
  std::string command = "detect";  // detect | demo | gen
  Mode mode = Mode::Auto;
  std::optional<double> delta;
  std::optional<double> m1;
  std::optional<double> m2;
  std::optional<double> alpha;
  std::optional<double> ma;
  double t = 10.0;
  double kappa = 4.0;
  std::string input;
  std::string output;  // empty: standard output
  bool emit_plot = false;

  // demo
  std::string noise = "uniform";  // none | uniform | checker | adversarial
  std::uint64_t seed = 1;
  double m2_floor = 1.0;

  // gen
  std::string family = "corpus";  // corpus | kinks
  std::size_t count = 200;
  double m1_cap = 2.0;
  double m2_cap = 4.0;
};

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDomain = 2;

/// I/O and input-format failures exit 1; failures of the detection problem
/// itself exit 2.
constexpr int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::NonUniformGrid:
    case ErrorCode::DomainNotUnit:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidArgument:
      return kExitInput;
    case ErrorCode::InvalidClass:
    case ErrorCode::DomainTooSmall:
    case ErrorCode::OutOfDomain:
    case ErrorCode::ModeUnsupportedKinks:
    case ErrorCode::NotRefinable:
    case ErrorCode::ConstraintsInfeasible:
      return kExitDomain;
  }
  return kExitInput;
}

/// Resolves the smoothness class. Auto picks fractional when an order is
/// given, smooth when M2 > 0 and linear when M2 = 0.
inline SmoothnessClass resolve_class(Mode mode, double m1, std::optional<double> m2,
                                     std::optional<double> alpha, std::optional<double> ma) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  if (mode == Mode::Auto) {
    if (alpha) mode = Mode::Fractional;
    else {
      need(m2.has_value(), "--m2 is required (or --alpha/--ma for the fractional mode)");
      mode = *m2 > 0.0 ? Mode::Smooth : Mode::Linear;
    }
  }
  switch (mode) {
    case Mode::Smooth:
      need(m2.has_value(), "smooth mode requires --m2");
      return SmoothnessClass::smooth(m1, *m2);
    case Mode::Fractional:
      need(alpha && ma, "fractional mode requires --alpha and --ma");
      return SmoothnessClass::fractional(*alpha, *ma, m1);
    case Mode::Linear:
      return SmoothnessClass::linear(m1);
    case Mode::Auto: break;
  }
  throw Error(ErrorCode::InvalidArgument, "unresolved mode");
}

// ---------------------------------------------------------------------------
// Scoring against ground truth
// ---------------------------------------------------------------------------

struct Evaluation {
  std::size_t jumps_true = 0, jumps_detected = 0, jumps_matched = 0;
  std::size_t jump_width_violations = 0, jump_size_violations = 0;
  std::size_t kinks_true = 0, kinks_detected = 0, kinks_matched = 0, kink_size_violations = 0;
  std::size_t critical_true = 0, critical_detected = 0, critical_matched = 0;
  std::size_t false_kinks = 0, false_critical = 0, cross_misclassified = 0;

  Evaluation& operator+=(const Evaluation& o) {
    jumps_true += o.jumps_true;
    jumps_detected += o.jumps_detected;
    jumps_matched += o.jumps_matched;
    jump_width_violations += o.jump_width_violations;
    jump_size_violations += o.jump_size_violations;
    kinks_true += o.kinks_true;
    kinks_detected += o.kinks_detected;
    kinks_matched += o.kinks_matched;
    kink_size_violations += o.kink_size_violations;
    critical_true += o.critical_true;
    critical_detected += o.critical_detected;
    critical_matched += o.critical_matched;
    false_kinks += o.false_kinks;
    false_critical += o.false_critical;
    cross_misclassified += o.cross_misclassified;
    return *this;
  }
};

/// Matches report events to ground truth by interval containment. A jump
/// matches when its interval holds exactly one true jump that no other
/// detected jump holds; its width must stay within 4h and its size within
/// the reported bound. Kinks are scored on | |P_hat| - |P| | <= 7 eps.
inline Evaluation evaluate(const DetectionReport& report, const GroundTruth& truth) {
  constexpr double kSlack = 1e-12;
  Evaluation ev;
  const double h = report.policy.h;
  auto containing = [&](const TruthEvent& t, EventKind kind) {
    std::vector<const Event*> hits;
    for (const auto& e : report.events)
      if (e.kind == kind && e.interval.contains(t.location)) hits.push_back(&e);
    return hits;
  };
  auto holds = [&](const Event& e, EventKind kind) {
    std::size_t n = 0;
    for (const auto& t : truth.events)
      if (t.kind == kind && e.interval.contains(t.location)) ++n;
    return n;
  };

  ev.jumps_detected = report.count(EventKind::Jump);
  ev.kinks_detected = report.count(EventKind::Kink);
  ev.critical_detected = report.count(EventKind::CriticalPoint);

  for (const auto& t : truth.events) {
    if (t.kind == EventKind::Jump) {
      ++ev.jumps_true;
      const auto hits = containing(t, EventKind::Jump);
      if (hits.size() == 1 && holds(*hits.front(), EventKind::Jump) == 1) {
        ++ev.jumps_matched;
        const Event& e = *hits.front();
        if (e.interval.width() > 4.0 * h + kSlack) ++ev.jump_width_violations;
        if (std::abs(*e.size - t.size) > *e.size_error_bound + kSlack) ++ev.jump_size_violations;
      }
    } else if (t.kind == EventKind::Kink) {
      ++ev.kinks_true;
      const auto hits = containing(t, EventKind::Kink);
      if (hits.size() == 1) {
        ++ev.kinks_matched;
        const Event& e = *hits.front();
        if (std::abs(std::abs(*e.size) - std::abs(t.size)) > *e.size_error_bound + kSlack)
          ++ev.kink_size_violations;
      }
    } else {
      ++ev.critical_true;
      if (containing(t, EventKind::CriticalPoint).size() == 1) ++ev.critical_matched;
    }
  }

  for (const auto& e : report.events) {
    const std::size_t kinks = holds(e, EventKind::Kink);
    const std::size_t crits = holds(e, EventKind::CriticalPoint);
    if (e.kind == EventKind::Kink && kinks == 0) {
      ++ev.false_kinks;
      if (crits > 0) ++ev.cross_misclassified;
    }
    if (e.kind == EventKind::CriticalPoint && crits == 0) {
      ++ev.false_critical;
      if (kinks > 0) ++ev.cross_misclassified;
    }
  }
  return ev;
}

inline Json to_json(const Evaluation& e) {
  Json j;
  j["jumps_true"] = e.jumps_true;
  j["jumps_detected"] = e.jumps_detected;
  j["jumps_matched"] = e.jumps_matched;
  j["jump_width_violations"] = e.jump_width_violations;
  j["jump_size_violations"] = e.jump_size_violations;
  j["kinks_true"] = e.kinks_true;
  j["kinks_detected"] = e.kinks_detected;
  j["kinks_matched"] = e.kinks_matched;
  j["kink_size_violations"] = e.kink_size_violations;
  j["critical_true"] = e.critical_true;
  j["critical_detected"] = e.critical_detected;
  j["critical_matched"] = e.critical_matched;
  j["false_kinks"] = e.false_kinks;
  j["false_critical"] = e.false_critical;
  j["cross_misclassified"] = e.cross_misclassified;
  return j;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

inline std::string plot_path(const std::string& output) {
  const auto dot = output.rfind('.');
  const auto slash = output.find_last_of("/\\");
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? output.substr(0, dot) : output) + ".plot.tsv";
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open input '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::uint64_t demo_seed(std::uint64_t configured) {
  if (const char* env = std::getenv("JUMPSCOPE_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "JUMPSCOPE_SEED must be an unsigned integer");
    }
  }
  return configured;
}

/// Sign pattern that shrinks every increment across a true jump by 2 delta.
inline std::function<bool(double)> jump_shrinking_sign(const GroundTruth& truth) {
  std::vector<TruthEvent> jumps = truth.of_kind(EventKind::Jump);
  return [jumps](double x) {
    if (jumps.empty()) return true;
    const TruthEvent* nearest = &jumps.front();
    for (const auto& j : jumps)
      if (std::abs(j.location - x) < std::abs(nearest->location - x)) nearest = &j;
    const bool up = nearest->size > 0.0;
    return x >= nearest->location ? !up : up;
  };
}

}  // namespace detail

inline int run_detect(const RunConfig& cfg, std::ostream& diag) {
  if (cfg.input.empty()) throw Error(ErrorCode::InvalidArgument, "detect requires --input");
  if (!cfg.delta) throw Error(ErrorCode::InvalidArgument, "detect requires --delta");
  if (!cfg.m1) throw Error(ErrorCode::InvalidArgument, "detect requires --m1");

  const auto src = ingest_csv(cfg.input, *cfg.delta, *cfg.m1);
  const auto cls = resolve_class(cfg.mode, *cfg.m1, cfg.m2, cfg.alpha, cfg.ma);
  DetectOptions opts;
  opts.jump_factor = cfg.kappa;
  opts.t = cfg.t;
  opts.classify_kinks = cls.kind != SmoothnessKind::Linear;
  auto report = detect(src, cls, opts);

  if (src.dx() > report.policy.h / 10.0) {
    const std::string msg = "sample spacing " + std::to_string(src.dx()) + " exceeds h/10 = " +
                            std::to_string(report.policy.h / 10.0);
    report.warnings.push_back(msg);
  }
  for (const auto& w : report.warnings) diag << "warning: " << w << '\n';

  const std::string text = dump(to_json(report));
  if (cfg.emit_plot) {
    if (cfg.output.empty()) throw Error(ErrorCode::InvalidArgument, "--plot requires --output");
    std::ostringstream plot;
    write_plot_table(plot, report);
    detail::write_text(detail::plot_path(cfg.output), plot.str());
  }
  detail::write_text(cfg.output, text);
  return kExitOk;
}

inline int run_demo(const RunConfig& cfg, std::ostream& diag) {
  if (cfg.input.empty()) throw Error(ErrorCode::InvalidArgument, "demo requires --input");
  const double delta = cfg.delta.value_or(1e-4);
  const std::uint64_t seed = detail::demo_seed(cfg.seed);
  const auto corpus = corpus_from_json(detail::read_json(cfg.input));
  if (!(cfg.noise == "none" || cfg.noise == "uniform" || cfg.noise == "checker" ||
        cfg.noise == "adversarial"))
    throw Error(ErrorCode::InvalidArgument, "unknown noise model '" + cfg.noise + "'");

  Json params;
  params["command"] = "demo";
  params["delta"] = delta;
  params["noise"] = cfg.noise;
  params["seed"] = seed;
  params["kappa"] = cfg.kappa;
  params["m2_floor"] = cfg.m2_floor;
  params["signals"] = corpus.size();

  Json signals = Json::array();
  Evaluation total;
  std::vector<DetectionReport> reports;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& entry = corpus[i];
    const auto [signal, truth] = build_signal(entry.spec);
    const double m1 = cfg.m1.value_or(std::max(truth.m1_true, 1e-6));
    const double m2 = cfg.m2.value_or(std::max(truth.m2_true, cfg.m2_floor));
    const auto cls = resolve_class(cfg.mode, m1, m2, cfg.alpha, cfg.ma);
    const auto policy = make_step_policy(cls, delta, cfg.t);

    NoiseModel model = UniformNoise{};
    if (cfg.noise == "none") model = NoNoise{};
    if (cfg.noise == "checker") model = CheckerNoise{policy.h};
    if (cfg.noise == "adversarial") model = AdversarialNoise{detail::jump_shrinking_sign(truth)};
    const auto src = add_noise(signal, delta, model, seed + i);

    DetectOptions opts;
    opts.jump_factor = cfg.kappa;
    opts.t = cfg.t;
    opts.classify_kinks = cls.kind != SmoothnessKind::Linear;
    auto report = detect(src, cls, opts);
    const auto score = evaluate(report, truth);
    total += score;

    Json s;
    s["index"] = i;
    s["truth"] = to_json(truth);
    s["report"] = to_json(report);
    s["evaluation"] = to_json(score);
    signals.push_back(std::move(s));
    if (cfg.emit_plot && corpus.size() == 1) reports.push_back(std::move(report));
  }

  Json summary = to_json(total);
  auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 1.0 : static_cast<double>(a) / static_cast<double>(b); };
  summary["jump_precision"] = ratio(total.jumps_matched, total.jumps_detected);
  summary["jump_recall"] = ratio(total.jumps_matched, total.jumps_true);

  Json doc;
  doc["params"] = params;
  doc["signals"] = std::move(signals);
  doc["summary"] = summary;

  diag << "demo: " << corpus.size() << " signal(s), jumps " << total.jumps_matched << "/"
       << total.jumps_true << " matched, " << total.jumps_detected << " detected\n";

  if (cfg.emit_plot) {
    if (cfg.output.empty()) throw Error(ErrorCode::InvalidArgument, "--plot requires --output");
    if (reports.size() != 1) throw Error(ErrorCode::InvalidArgument, "--plot needs a single-signal demo");
    std::ostringstream plot;
    write_plot_table(plot, reports.front());
    detail::write_text(detail::plot_path(cfg.output), plot.str());
  }
  detail::write_text(cfg.output, dump(doc));
  return kExitOk;
}

inline int run_gen(const RunConfig& cfg, std::ostream& diag) {
  const double delta = cfg.delta.value_or(1e-4);
  Json generator;
  generator["family"] = cfg.family;
  generator["n"] = cfg.count;
  generator["seed"] = cfg.seed;
  std::vector<CorpusEntry> corpus;
  if (cfg.family == "corpus") {
    const auto c = corpus_constraints_for(delta, cfg.m1_cap, cfg.m2_cap, cfg.m2_floor, cfg.kappa);
    generator["delta"] = delta;
    generator["min_separation"] = c.min_separation;
    generator["edge_margin"] = c.edge_margin;
    generator["p_min"] = c.p_min;
    generator["kink_min"] = c.kink_min;
    generator["m1_cap"] = c.m1_cap;
    generator["m2_cap"] = c.m2_cap;
    corpus = random_corpus(cfg.count, cfg.seed, c);
  } else if (cfg.family == "kinks") {
    corpus = kink_critical_family(cfg.count, cfg.seed);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown family '" + cfg.family + "'");
  }
  diag << "gen: wrote " << corpus.size() << " signal(s)\n";
  detail::write_text(cfg.output, dump(corpus_to_json(corpus, generator)));
  return kExitOk;
}

/// Runs one command; every error is reported on `diag` and mapped to an
/// exit code. Nothing is written to the output path on failure.
inline int run(const RunConfig& cfg, std::ostream& diag = std::cerr) {
  try {
    if (cfg.command == "detect") return run_detect(cfg, diag);
    if (cfg.command == "demo") return run_demo(cfg, diag);
    if (cfg.command == "gen") return run_gen(cfg, diag);
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace jumpscope::cli

#pragma once

// JSON documents for signal specs, ground truth, corpora and detection
// reports. Keys are emitted in a fixed order and doubles in their shortest
// round-trip form, so emitted documents are stable under parse/dump.

#include <jumpscope/detector.hpp>
#include <jumpscope/synth.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace jumpscope {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Specs and ground truth
// ---------------------------------------------------------------------------

inline Json to_json(const Piece& p) {
  Json j;
  switch (p.kind) {
    case PieceKind::Poly:
      j["type"] = "poly";
      j["coeffs"] = {p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3]};
      break;
    case PieceKind::Affine:
      j["type"] = "affine";
      j["slope"] = p.slope;
      j["intercept"] = p.intercept;
      break;
    case PieceKind::Sine:
      j["type"] = "sine";
      j["amplitude"] = p.amplitude;
      j["frequency"] = p.frequency;
      j["phase"] = p.phase;
      j["offset"] = p.offset;
      break;
  }
  return j;
}

inline Json to_json(const PieceSpec& spec) {
  Json j;
  j["breakpoints"] = spec.breakpoints;
  j["pieces"] = Json::array();
  for (const auto& p : spec.pieces) j["pieces"].push_back(to_json(p));
  j["joins"] = Json::array();
  for (const auto& jn : spec.joins) {
    Json o;
    switch (jn.kind) {
      case JoinKind::Jump: o["type"] = "jump"; o["size"] = jn.size; break;
      case JoinKind::Kink: o["type"] = "kink"; o["size"] = jn.size; break;
      case JoinKind::C2: o["type"] = "c2"; break;
    }
    j["joins"].push_back(o);
  }
  return j;
}

inline Json to_json(const GroundTruth& truth) {
  Json j;
  j["events"] = Json::array();
  for (const auto& e : truth.events)
    j["events"].push_back({{"kind", std::string(to_string(e.kind))},
                           {"location", e.location},
                           {"size", e.size}});
  j["m1_true"] = truth.m1_true;
  j["m2_true"] = truth.m2_true;
  return j;
}

namespace detail {

template <typename Fn>
auto guarded_parse(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline Piece piece_from_json(const Json& j) {
  return detail::guarded_parse("piece", [&] {
    const std::string type = j.at("type").get<std::string>();
    if (type == "poly") {
      const auto c = j.at("coeffs").get<std::vector<double>>();
      if (c.empty() || c.size() > 4) throw Error(ErrorCode::InvalidSpec, "poly needs 1 to 4 coefficients");
      std::array<double, 4> coeffs{};
      std::copy(c.begin(), c.end(), coeffs.begin());
      return Piece::poly(coeffs);
    }
    if (type == "affine") return Piece::affine(j.at("slope").get<double>(), j.at("intercept").get<double>());
    if (type == "sine")
      return Piece::sine(j.at("amplitude").get<double>(), j.at("frequency").get<double>(),
                         j.value("phase", 0.0), j.value("offset", 0.0));
    throw Error(ErrorCode::InvalidSpec, "unknown piece type '" + type + "'");
  });
}

inline PieceSpec spec_from_json(const Json& j) {
  return detail::guarded_parse("spec", [&] {
    PieceSpec spec;
    spec.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    for (const auto& p : j.at("pieces")) spec.pieces.push_back(piece_from_json(p));
    for (const auto& o : j.value("joins", Json::array())) {
      const std::string type = o.at("type").get<std::string>();
      if (type == "jump") spec.joins.push_back({JoinKind::Jump, o.at("size").get<double>()});
      else if (type == "kink") spec.joins.push_back({JoinKind::Kink, o.at("size").get<double>()});
      else if (type == "c2") spec.joins.push_back({JoinKind::C2, 0.0});
      else throw Error(ErrorCode::InvalidSpec, "unknown join type '" + type + "'");
    }
    spec.validate();
    return spec;
  });
}

inline Json corpus_to_json(const std::vector<CorpusEntry>& corpus, const Json& generator = Json::object()) {
  Json j;
  j["generator"] = generator;
  j["signals"] = Json::array();
  for (const auto& e : corpus) j["signals"].push_back({{"spec", to_json(e.spec)}, {"truth", to_json(e.truth)}});
  return j;
}

/// Accepts a single spec document or a corpus ({"signals": [{"spec": ...}]}).
/// Ground truth is always rebuilt from the pieces.
inline std::vector<CorpusEntry> corpus_from_json(const Json& j) {
  std::vector<CorpusEntry> out;
  auto add = [&](const Json& s) {
    auto spec = spec_from_json(s);
    auto truth = build_signal(spec).second;
    out.push_back({std::move(spec), std::move(truth)});
  };
  detail::guarded_parse("corpus", [&] {
    if (j.contains("signals")) {
      for (const auto& s : j.at("signals")) add(s.contains("spec") ? s.at("spec") : s);
    } else {
      add(j);
    }
    return 0;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json to_json(const Thresholds& th) {
  Json j;
  j["jump_factor"] = th.jump_factor;
  j["smooth_ceiling"] = th.smooth_ceiling;
  j["jump_threshold"] = th.jump_threshold;
  j["kink_threshold"] = th.kink_threshold;
  j["critical_threshold"] = th.critical_threshold;
  j["sign_floor"] = th.sign_floor;
  j["p_min"] = th.p_min;
  j["rounding"] = th.rounding;
  return j;
}

inline Json to_json(const Event& e) {
  Json j;
  j["kind"] = std::string(to_string(e.kind));
  j["interval"] = {e.interval.lo, e.interval.hi};
  j["location"] = e.location;
  j["size"] = e.size ? Json(*e.size) : Json(nullptr);
  j["size_error_bound"] = e.size_error_bound ? Json(*e.size_error_bound) : Json(nullptr);
  j["representative"] = e.representative;
  j["diagnostics"] = e.diagnostics;
  return j;
}

inline Json to_json(const DetectionReport& r) {
  const StepPolicy& p = r.policy;
  Json params;
  params["delta"] = p.delta;
  params["mode"] = std::string(to_string(p.kind()));
  params["h"] = p.h;
  params["epsilon"] = p.epsilon;
  params["error_bound"] = error_bound(p);
  params["m1"] = p.cls.m1;
  params["m2"] = p.cls.m2;
  if (p.kind() == SmoothnessKind::Fractional) {
    params["alpha"] = p.cls.a;
    params["ma"] = p.cls.ma;
  }
  if (p.kind() == SmoothnessKind::Linear) {
    params["t"] = p.t;
    params["slope_h"] = p.slope_h;
  }
  params["derivative_step"] = r.derivative_step;
  params["kinks_classified"] = r.kinks_classified;
  params["thresholds"] = to_json(r.thresholds);

  Json j;
  j["params"] = params;
  j["derivative"] = Json::array();
  for (const auto& d : r.derivative) j["derivative"].push_back({d.x, d.value});
  j["events"] = Json::array();
  for (const auto& e : r.events) j["events"].push_back(to_json(e));
  j["masked"] = Json::array();
  for (const auto& m : r.masked)
    j["masked"].push_back({{"index", m.index},
                           {"x", m.x},
                           {"value", m.value},
                           {"reason", std::string(to_string(m.reason))}});
  j["jump_count"] = r.jump_count();
  j["warnings"] = r.warnings;
  return j;
}

/// Canonical text form of a document.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace jumpscope

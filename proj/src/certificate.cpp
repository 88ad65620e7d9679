#include "testel/certificate.hpp"

namespace testel {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Test: return "TEST";
    case Verdict::NotTest: return "NOT_TEST";
    case Verdict::AlmostPrimitive: return "ALMOST_PRIMITIVE";
    case Verdict::NotAlmostPrimitive: return "NOT_ALMOST_PRIMITIVE";
    case Verdict::Unknown: return "UNKNOWN";
    case Verdict::Accept: return "ACCEPT";
    case Verdict::Reject: return "REJECT";
    case Verdict::Failure: return "FAILURE";
  }
  return "UNKNOWN";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "TEST") return Verdict::Test;
  if (s == "NOT_TEST") return Verdict::NotTest;
  if (s == "ALMOST_PRIMITIVE") return Verdict::AlmostPrimitive;
  if (s == "NOT_ALMOST_PRIMITIVE") return Verdict::NotAlmostPrimitive;
  if (s == "UNKNOWN") return Verdict::Unknown;
  if (s == "ACCEPT") return Verdict::Accept;
  if (s == "REJECT") return Verdict::Reject;
  if (s == "FAILURE") return Verdict::Failure;
  throw DomainError("unknown verdict: " + s);
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Test:
    case Verdict::Accept:
    case Verdict::AlmostPrimitive:
      return 0;
    case Verdict::NotTest:
    case Verdict::Reject:
    case Verdict::NotAlmostPrimitive:
      return 1;
    default:
      return 2;
  }
}

std::string to_string(GroupContext::Kind k) {
  return k == GroupContext::Kind::FreeProP ? "free-pro-p" : "free-discrete";
}

nlohmann::json to_json(const RetractWitness& w) {
  nlohmann::json j;
  j["type"] = w.kind;
  if (!w.description.empty()) j["description"] = w.description;
  if (!w.images.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& im : w.images) arr.push_back(to_string(im));
    j["images"] = arr;
  }
  if (w.target) j["target"] = to_string(*w.target);
  if (!w.exponents.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& e : w.exponents) arr.push_back(e.str());
    j["exponents"] = arr;
  }
  if (!w.lambda.empty()) j["lambda"] = w.lambda;
  return j;
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["input"] = to_string(c.input);
  nlohmann::json ctx;
  ctx["kind"] = to_string(c.context.kind);
  ctx["rank"] = c.context.rank;
  if (c.context.p) ctx["p"] = *c.context.p;
  j["context"] = ctx;
  j["verdict"] = to_string(c.verdict);
  auto reasons = nlohmann::json::array();
  for (const auto& r : c.reasons) {
    nlohmann::json jr;
    jr["rule"] = r.rule;
    jr["paper_ref"] = r.citation;
    jr["details"] = r.details;
    reasons.push_back(jr);
  }
  j["reasons"] = reasons;
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (!c.entry.empty()) j["entry"] = c.entry;
  return j;
}

}  // namespace testel

#include "cliffop/serialize.hpp"

#include <string>

#include "cliffop/errors.hpp"

namespace cliffop {

namespace {

std::string_view role_name(Role r) { return r == Role::precondition ? "precondition" : "conclusion"; }

Json sampled(const MultivectorField& f, std::span<const double> probe) {
  return {{"components", field_json(f)}, {"value_at_probe", render(f(probe))}};
}

}  // namespace

Json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return {{"re", z.real()}, {"im", z.imag()}};
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (k != "re" && k != "im") throw InvalidArgument("complex number: unexpected key '" + k + "'");
      if (!v.is_number()) throw InvalidArgument("complex number: '" + k + "' must be a number");
    }
    return {j.value("re", 0.0), j.value("im", 0.0)};
  }
  if (j.is_string()) {
    const Multivector m = parse_multivector(j.get<std::string>(), Signature(1));
    if (!m.is_homogeneous(0, 0.0)) throw InvalidArgument("complex number: '" + j.get<std::string>() + "'");
    return m.scalar_part();
  }
  throw InvalidArgument("expected a complex number");
}

void to_json(Json& j, const ResidualReport& r) {
  j = Json{{"sup_norm", r.sup_norm},       {"rms", r.rms},
           {"worst_point", r.worst_point}, {"samples_used", r.samples_used},
           {"tolerance", r.tolerance},     {"pass", r.pass}};
}

void to_json(Json& j, const Verification& v) {
  j = Json::array();
  for (const auto& nr : v.reports) {
    Json e = nr.report;
    e["name"] = nr.name;
    e["role"] = role_name(nr.role);
    j.push_back(std::move(e));
  }
}

Json field_json(const MultivectorField& f) {
  if (!f.expressions()) return nullptr;
  return render_field(f);
}

MultivectorField field_from_json(Signature sig, const Json& j) {
  if (j.is_string()) return parse_field(sig, {{"1", j.get<std::string>()}});
  if (j.is_number()) return parse_field(sig, {{"1", format_double(j.get<double>())}});
  if (!j.is_object()) throw InvalidArgument("a field is an object {\"e1\": \"expr\", ...} or a scalar string");
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : j.items()) {
    if (v.is_string()) {
      m.emplace(k, v.get<std::string>());
    } else if (v.is_number()) {
      m.emplace(k, format_double(v.get<double>()));
    } else {
      throw InvalidArgument("component " + k + " must be an expression string");
    }
  }
  return parse_field(sig, m);
}

Json candidate_json(const RiccatiCandidate& c) {
  Json v = field_json(c.v);
  if (v.is_object() && v.size() == 1 && v.contains("1")) v = v["1"];
  return {{"f", field_json(c.f)}, {"v", v}, {"provenance", provenance_name(c.provenance)}};
}

RiccatiCandidate candidate_from_json(Signature sig, const Json& j) {
  if (!j.is_object() || !j.contains("f") || !j.contains("v")) {
    throw InvalidArgument("a candidate needs \"f\" and \"v\"");
  }
  RiccatiCandidate c = RiccatiCandidate::user(field_from_json(sig, j.at("f")), field_from_json(sig, j.at("v")));
  if (j.contains("provenance")) c.provenance = parse_provenance(j.at("provenance").get<std::string>());
  return c;
}

Json decomposition_json(const DecompositionResult& d, std::span<const double> probe) {
  return {{"operator", d.op == KernelOperator::A ? "A" : "B"},
          {"mode", mode_name(d.frame.mode)},
          {"iE", render(d.frame.iE)},
          {"lambda", complex_json(d.lambda)},
          {"probe", std::vector<double>(probe.begin(), probe.end())},
          {"g_plus", sampled(d.g_plus, probe)},
          {"g_minus", sampled(d.g_minus, probe)},
          {"reassembly_residual", d.reassembly_residual}};
}

Json family_gap_json(const FamilyGapReport& r) {
  Json distances = Json::array();
  for (const auto& d : r.distances) distances.push_back({{"K", complex_json(d.K)}, {"distance", d.distance}});
  return {{"distances", distances}, {"min_distance", r.min_distance}, {"margin", r.margin}, {"pass", r.pass}};
}

}  // namespace cliffop

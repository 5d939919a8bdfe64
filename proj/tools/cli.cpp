#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include "cliffop/errors.hpp"
#include "identities.hpp"

namespace cliffop::cli {

namespace {

const std::set<std::string> kParamKeys = {"k",  "K",         "K_samples", "step",   "blow_up_bound", "margin", "x0",
                                          "f0", "intervals", "v_list",    "trials", "singular",      "probe"};
const std::set<std::string> kGridKeys = {"lo", "hi", "samples", "box", "threads", "exclusion_radius"};
const std::set<std::string> kToleranceKeys = {"exact", "fd", "override"};

template <class T>
T read(const Json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + ": wrong type (" + std::string(j.type_name()) + ")");
  }
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

Complex read_complex(const Json& j, const std::string& path) {
  try {
    return complex_from_json(j);
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct CommandResult {
  Verification verification;
  Json results = Json::object();
  /// Extra pass condition besides the reports.
  bool extra_pass = true;
};

using Handler = std::function<CommandResult(const RunConfig&)>;

const Json& param(const RunConfig& c, const std::string& key) {
  if (!c.params.contains(key)) throw ConfigError("missing parameter '" + key + "'");
  return c.params.at(key);
}

template <class T>
T param_or(const RunConfig& c, const std::string& key, T fallback) {
  return c.params.contains(key) ? read<T>(c.params.at(key), key) : fallback;
}

std::vector<double> probe_point(const RunConfig& c, const GridSpec& grid) {
  if (c.params.contains("probe")) {
    auto p = read<std::vector<double>>(c.params.at("probe"), "probe");
    if (static_cast<int>(p.size()) != c.n) throw ConfigError("probe: expected " + std::to_string(c.n) + " coordinates");
    return p;
  }
  std::vector<double> p;
  for (const auto& [lo, hi] : grid.box) p.push_back(0.5 * (lo + hi));
  return p;
}

RiccatiCandidate user_candidate(const RunConfig& c, const std::string& f_name, const std::string& v_name) {
  RiccatiCandidate cand = RiccatiCandidate::user(c.field(f_name), c.field(v_name));
  if (c.params.contains("singular")) {
    for (const auto& name : read<std::vector<std::string>>(c.params.at("singular"), "singular")) {
      cand.singular.push_back(c.field(name));
    }
  }
  return cand;
}

Json transform_results(const TransformResult& t, std::span<const double> probe) {
  return {{"output", field_json(t.output)},
          {"probe", std::vector<double>(probe.begin(), probe.end())},
          {"value_at_probe", render(t.output(probe))}};
}

CommandResult verify_identities(const RunConfig& c) {
  CommandResult r;
  const int trials = param_or<int>(c, "trials", 20);
  if (trials < 1) throw ConfigError("trials must be positive");
  r.verification = identity_suite(c.n, c.seed, trials, c.options());
  return r;
}

CommandResult riccati_check(const RunConfig& c) {
  CommandResult r;
  const GridSpec grid = c.grid_spec();
  const ResidualOptions opts = c.options();
  RiccatiCandidate cand = c.has_field("f") ? user_candidate(c, "f", "v") : log_derivative(c.field("phi"));
  r.verification.add("riccati(f)", Role::conclusion, riccati_residual(cand, grid, opts));
  bool vector = cand.is_vector();
  if (!vector) {
    if (auto e = cand.f.expressions()) {
      vector = !e->empty() && std::all_of(e->begin(), e->end(), [](const auto& kv) { return kv.first.grade() == 1; });
    }
  }
  if (vector) {
    cand.grade_support = {1};
    const VectorSplit s = vector_split_residuals(cand, grid, opts);
    r.verification.add("scalar part", Role::conclusion, s.scalar);
    r.verification.add("bivector part", Role::conclusion, s.bivector);
    r.results["recombination_error"] = s.recombination_error;
  }
  r.results["candidate"] = candidate_json(cand);
  return r;
}

CommandResult riccati_separable(const RunConfig& c) {
  CommandResult r;
  const auto sources = read<std::vector<std::string>>(param(c, "v_list"), "v_list");
  if (static_cast<int>(sources.size()) != c.n)
    throw ConfigError("v_list: expected " + std::to_string(c.n) + " entries");
  std::vector<ScalarExpr> v_list;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    try {
      v_list.push_back(parse_expression(sources[k], c.n));
    } catch (const ParseError& e) {
      throw ParseError("v_list[" + std::to_string(k) + "]: " + e.detail(), e.offset());
    }
  }
  const std::vector<double> zeros(static_cast<std::size_t>(c.n), 0.0);
  const auto x0 = param_or<std::vector<double>>(c, "x0", zeros);
  const auto f0 = param_or<std::vector<double>>(c, "f0", zeros);
  auto intervals = param_or<std::vector<std::pair<double, double>>>(c, "intervals", {});
  SeparableOptions so;
  so.step = param_or<double>(c, "step", so.step);
  so.blow_up_bound = param_or<double>(c, "blow_up_bound", so.blow_up_bound);
  const RiccatiCandidate cand = separable_solve(c.signature(), v_list, x0, f0, intervals, so);

  std::vector<double> probe;
  if (c.params.contains("probe")) {
    probe = probe_point(c, c.grid_spec());
  } else {
    for (int k = 0; k < c.n; ++k) probe.push_back(intervals.empty() ? x0[k] + 1.0 : intervals[k].second);
  }
  r.verification.add("riccati(f)", Role::conclusion, riccati_residual(cand, c.grid_spec(), c.options()));
  r.results["candidate"] = candidate_json(cand);
  r.results["probe"] = probe;
  r.results["f_at_probe"] = render(cand.f(probe));
  return r;
}

CommandResult construction(const Construction& k) {
  CommandResult r;
  r.verification = k.verification;
  r.results["candidate"] = candidate_json(k.candidate);
  return r;
}

CommandResult euler_shift_cmd(const RunConfig& c) {
  return construction(euler_shift(user_candidate(c, "h", "v"), c.field("phi"), c.grid_spec(), c.options()));
}

CommandResult euler_combine_cmd(const RunConfig& c) {
  return construction(euler_combine(c.field("phi1"), c.field("phi2"), read_complex(param(c, "K"), "K"), c.field("v"),
                                    c.grid_spec(), c.options()));
}

CommandResult homogeneous_sum_cmd(const RunConfig& c) {
  return construction(homogeneous_sum(c.field("phi1"), c.field("phi2"), c.grid_spec(), c.options()));
}

CommandResult family_gap_cmd(const RunConfig& c) {
  std::vector<Complex> Ks;
  if (c.params.contains("K_samples")) {
    const Json& js = c.params.at("K_samples");
    if (!js.is_array()) throw ConfigError("K_samples: expected an array");
    for (std::size_t i = 0; i < js.size(); ++i)
      Ks.push_back(read_complex(js[i], "K_samples[" + std::to_string(i) + "]"));
  } else {
    Ks = {2.0, -3.0, 0.5, 1.0};
  }
  const FamilyGapReport g = family_gap_demo(c.grid_spec(), Ks, param_or<double>(c, "margin", 0.1), c.options());
  CommandResult r;
  r.verification = g.verification;
  r.results["family_gap"] = family_gap_json(g);
  r.extra_pass = g.pass;
  return r;
}

CommandResult darboux_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const TransformResult t = darboux_transform(c.field("f"), c.field("g"), c.spectral(), grid, c.options());
  CommandResult r;
  r.verification = t.verification;
  r.results = transform_results(t, probe_point(c, grid));
  return r;
}

CommandResult vector_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const TransformResult t =
      vector_transform(user_candidate(c, "f", "v"), c.field("phi"), c.spectral(), grid, c.options());
  CommandResult r;
  r.verification = t.verification;
  r.results = transform_results(t, probe_point(c, grid));
  return r;
}

CommandResult even_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const TransformResult t = even_transform(c.field("f"), c.field("g"), c.spectral(), grid, c.options());
  CommandResult r;
  r.verification = t.verification;
  r.results = transform_results(t, probe_point(c, grid));
  return r;
}

CommandResult grade_pair_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const int k = read<int>(param(c, "k"), "k");
  const TransformResult t = grade_pair_transform(c.field("f"), c.field("G"), k, c.spectral(), grid, c.options());
  CommandResult r;
  r.verification = t.verification;
  r.results = transform_results(t, probe_point(c, grid));
  return r;
}

CommandResult decompose_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const DecompositionResult d = decompose_schrodinger_solution(user_candidate(c, "f", "v"), c.mode, c.spectral(),
                                                               c.field("phi"), grid, c.options());
  CommandResult r;
  r.verification = d.verification;
  r.results = decomposition_json(d, probe_point(c, grid));
  return r;
}

CommandResult decompose_dual_cmd(const RunConfig& c) {
  const GridSpec grid = c.grid_spec();
  const DecompositionResult d =
      decompose_dual_solution(c.field("f"), c.mode, c.spectral(), c.field("phi"), grid, c.options());
  CommandResult r;
  r.verification = d.verification;
  r.results = decomposition_json(d, probe_point(c, grid));
  return r;
}

struct Command {
  CommandInfo info;
  Handler handler;
};

const std::vector<Command>& registry() {
  static const std::vector<Command> table = {
      {{"verify-identities", "",
        "randomized algebra laws, both Leibniz rules, closed forms of d^f d^-f and d^-f d^f, and A^2, B^2 as "
        "factorized products"},
       verify_identities},
      {{"riccati-check", "", "f (or d(phi)/phi) solves df + f^2 = v; for 1-vectors also the scalar and bivector parts"},
       riccati_check},
      {{"riccati-separable", "", "per-axis ODE solutions f_k' = -v_k - f_k^2 assemble into a solution for v = sum v_k"},
       riccati_separable},
      {{"euler-shift", "", "d(phi)/phi + h solves the equation when h does and lap(phi) + 2<d(phi), h> = 0"},
       euler_shift_cmd},
      {{"euler-combine", "",
        "(alpha g - h)/(alpha - 1), alpha = K exp(phi1 - phi2), solves the equation when g = d(phi1) "
        "and h = d(phi2) do"},
       euler_combine_cmd},
      {{"homogeneous-sum", "",
        "d(phi1)/phi1 + d(phi2)/phi2 solves the equation with v = -2<d(phi1)/phi1, d(phi2)/phi2> "
        "for harmonic phi1, phi2"},
       homogeneous_sum_cmd},
      {{"family-gap-demo", "remark51-demo",
        "e3 solves the equation for v = -1 yet stays a fixed distance from every sampled member of "
        "the two-gradient family"},
       family_gap_cmd},
      {{"darboux", "", "h = d^-f g satisfies d^-f d^f h = lambda^2 h whenever d^f d^-f g = lambda^2 g"}, darboux_cmd},
      {{"vector-transform", "prop62",
        "a scalar eigenfunction phi of -lap - v yields the 1-vector h = d phi - phi f solving the coupled "
        "vector equation"},
       vector_cmd},
      {{"even-transform", "prop63",
        "a 1-vector eigenfunction g yields phi + H2 = [d^-f g]_0 + [d^-f g]_2 solving the coupled even "
        "equation"},
       even_cmd},
      {{"grade-pair-transform", "prop64",
        "a grade-k eigenfunction G yields [d^-f G]_{k-1} + [d^-f G]_{k+1} solving the coupled equation"},
       grade_pair_cmd},
      {{"decompose", "",
        "an eigenfunction of -lap - v splits into kernels of d - M^{f + lambda iE} and "
        "d - M^{f - lambda iE}"},
       decompose_cmd},
      {{"decompose-dual", "decompose-cor72",
        "an eigenfunction of -lap + u splits into kernels of d + M^{f - lambda iE} and "
        "d + M^{f + lambda iE}"},
       decompose_dual_cmd},
  };
  return table;
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      c.n = read<int>(value, "n");
    } else if (key == "mode") {
      try {
        c.mode = parse_mode(read<std::string>(value, "mode"));
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("mode: ") + e.what());
      }
    } else if (key == "fields") {
      if (!value.is_object()) throw ConfigError("fields: expected an object");
      for (const auto& [name, def] : value.items()) c.fields.emplace(name, def);
    } else if (key == "lambda") {
      c.lambda = read_complex(value, "lambda");
    } else if (key == "grid") {
      check_keys(value, kGridKeys, "grid");
      auto& g = c.grid;
      if (value.contains("lo")) g.lo = read<double>(value["lo"], "grid.lo");
      if (value.contains("hi")) g.hi = read<double>(value["hi"], "grid.hi");
      if (value.contains("samples")) g.samples = read<int>(value["samples"], "grid.samples");
      if (value.contains("box")) g.box = read<std::vector<std::pair<double, double>>>(value["box"], "grid.box");
      if (value.contains("threads")) g.threads = read<int>(value["threads"], "grid.threads");
      if (value.contains("exclusion_radius")) {
        g.exclusion_radius = read<double>(value["exclusion_radius"], "grid.exclusion_radius");
      }
    } else if (key == "tolerance") {
      check_keys(value, kToleranceKeys, "tolerance");
      if (value.contains("exact")) c.tolerance.exact = read<double>(value["exact"], "tolerance.exact");
      if (value.contains("fd")) c.tolerance.fd = read<double>(value["fd"], "tolerance.fd");
      if (value.contains("override") && !value["override"].is_null()) {
        c.tolerance_override = read<double>(value["override"], "tolerance.override");
      }
    } else if (key == "seed") {
      c.seed = read<std::uint64_t>(value, "seed");
    } else if (kParamKeys.count(key)) {
      c.params[key] = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (c.n < 1 || c.n > kMaxDimension) {
    throw ConfigError("n must lie in [1, " + std::to_string(kMaxDimension) + "]");
  }
  if (!c.grid.box.empty() && static_cast<int>(c.grid.box.size()) != c.n) {
    throw ConfigError("grid.box: expected " + std::to_string(c.n) + " intervals");
  }
  try {
    c.grid_spec().validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  for (const auto& [name, def] : c.fields) c.field(name);
  return c;
}

Json RunConfig::to_json() const {
  Json grid_json = {{"samples", grid.samples}, {"threads", grid.threads}, {"exclusion_radius", grid.exclusion_radius}};
  if (grid.box.empty()) {
    grid_json["lo"] = grid.lo;
    grid_json["hi"] = grid.hi;
  } else {
    grid_json["box"] = grid.box;
  }
  Json tol = {{"exact", tolerance.exact}, {"fd", tolerance.fd}};
  if (tolerance_override) tol["override"] = *tolerance_override;
  Json j = {{"n", n},      {"mode", mode_name(mode)}, {"fields", Json(fields)}, {"grid", grid_json}, {"tolerance", tol},
            {"seed", seed}};
  if (lambda) j["lambda"] = complex_json(*lambda);
  for (const auto& [k, v] : params.items()) j[k] = v;
  return j;
}

GridSpec RunConfig::grid_spec() const {
  GridSpec g = GridSpec::cube(n, grid.lo, grid.hi, grid.samples);
  if (!grid.box.empty()) g.box = grid.box;
  g.threads = grid.threads;
  g.exclusion_radius = grid.exclusion_radius;
  return g;
}

ResidualOptions RunConfig::options() const {
  ResidualOptions o;
  o.defaults = tolerance;
  o.defaults.exclusion_radius = grid.exclusion_radius;
  if (tolerance_override) o.tolerance = Tolerance::scaled(*tolerance_override);
  return o;
}

MultivectorField RunConfig::field(const std::string& name) const {
  auto it = fields.find(name);
  if (it == fields.end()) throw ConfigError("field '" + name + "' is not defined");
  try {
    return field_from_json(signature(), it->second);
  } catch (const ParseError& e) {
    throw ParseError("fields." + name + ": " + e.detail(), e.offset());
  } catch (const Error& e) {
    throw ConfigError("fields." + name + ": " + e.what());
  }
}

SpectralParam RunConfig::spectral() const {
  if (!lambda) throw ConfigError("missing 'lambda'");
  if (*lambda == Complex{}) throw ConfigError("lambda must be nonzero");
  return SpectralParam(*lambda);
}

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> infos = [] {
    std::vector<CommandInfo> out;
    for (const auto& c : registry()) out.push_back(c.info);
    return out;
  }();
  return infos;
}

RunOutcome run(const std::string& command, const RunConfig& config) {
  const auto& table = registry();
  auto it = std::find_if(table.begin(), table.end(), [&](const Command& c) {
    return c.info.name == command || (!c.info.alias.empty() && c.info.alias == command);
  });
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");

  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  Json error;
  try {
    result = it->handler(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const PreconditionError& e) {
    result.verification = e.verification();
    error = {{"kind", "precondition"}, {"message", e.what()}};
  } catch (const BlowUpError& e) {
    error = {{"kind", "blow_up"}, {"message", e.what()}, {"axis", e.axis()}, {"location", e.location()}};
  } catch (const DomainError& e) {
    error = {{"kind", "domain"}, {"message", e.what()}};
  } catch (const SingularityError& e) {
    error = {{"kind", "singularity"}, {"message", e.what()}};
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool pass = error.is_null() && result.extra_pass && result.verification.pass();
  Json report = {
      {"schema_version", 1},       {"command", command}, {"config", config.to_json()}, {"reports", result.verification},
      {"results", result.results}, {"pass", pass},       {"wall_time_s", seconds}};
  if (!error.is_null()) report["error"] = error;
  return {report, pass ? 0 : 1};
}

Json strip_timing(Json report) {
  report.erase("wall_time_s");
  return report;
}

}  // namespace cliffop::cli

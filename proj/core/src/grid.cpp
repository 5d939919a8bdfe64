#include "cliffop/grid.hpp"

#include <cmath>
#include <limits>

#include "cliffop/errors.hpp"

namespace cliffop {

GridSpec GridSpec::cube(int n, double lo, double hi, int samples) {
  GridSpec g;
  g.box.assign(static_cast<std::size_t>(n), {lo, hi});
  g.samples_per_axis = samples;
  return g;
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (std::size_t a = 0; a < box.size(); ++a) {
    total *= static_cast<std::size_t>(samples_per_axis);
    if (total > 1'000'000) return total;
  }
  return total;
}

void GridSpec::validate() const {
  if (box.empty()) throw InvalidArgument("grid box has no axes");
  for (std::size_t a = 0; a < box.size(); ++a) {
    if (!(box[a].first < box[a].second)) {
      throw InvalidArgument("grid axis " + std::to_string(a + 1) + " needs lo < hi");
    }
  }
  if (samples_per_axis < 2) throw InvalidArgument("samples_per_axis must be at least 2");
  if (size() > 1'000'000) throw InvalidArgument("grid exceeds 10^6 points");
  if (!(exclusion_radius >= 0.0)) throw InvalidArgument("exclusion radius must be non-negative");
}

std::vector<double> GridSpec::point(std::size_t index) const {
  std::vector<double> p(box.size());
  const double steps = samples_per_axis - 1;
  for (std::size_t a = box.size(); a-- > 0;) {
    const std::size_t k = index % static_cast<std::size_t>(samples_per_axis);
    index /= static_cast<std::size_t>(samples_per_axis);
    const auto [lo, hi] = box[a];
    // exact endpoints, symmetric interior
    p[a] = k == 0 ? lo : (k + 1 == static_cast<std::size_t>(samples_per_axis) ? hi : lo + (hi - lo) * (k / steps));
  }
  return p;
}

bool GridSpec::excluded(std::span<const double> p) const {
  for (const auto& s : exclude_near_zero) {
    try {
      if (std::abs(s(p).scalar_part()) < exclusion_radius) return true;
    } catch (const DomainError&) {
      return true;
    }
  }
  for (const auto& pred : exclude) {
    if (pred(p)) return true;
  }
  return false;
}

std::vector<std::vector<double>> GridSpec::points() const {
  validate();
  std::vector<std::vector<double>> out;
  const std::size_t total = size();
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    auto p = point(i);
    if (!excluded(p)) out.push_back(std::move(p));
  }
  return out;
}

GridSpec GridSpec::masking(const MultivectorField& s) const {
  GridSpec g = *this;
  g.exclude_near_zero.push_back(s);
  return g;
}

void Verification::add(std::string name, Role role, ResidualReport r) {
  reports.push_back({std::move(name), role, std::move(r)});
}

bool Verification::pass() const {
  for (const auto& r : reports) {
    if (!r.report.pass) return false;
  }
  return !reports.empty();
}

bool Verification::preconditions_pass() const {
  for (const auto& r : reports) {
    if (r.role == Role::precondition && !r.report.pass) return false;
  }
  return true;
}

const ResidualReport& Verification::get(std::string_view name) const {
  for (const auto& r : reports) {
    if (r.name == name) return r.report;
  }
  throw InvalidArgument("no report named " + std::string(name));
}

void Verification::append(const Verification& other) {
  reports.insert(reports.end(), other.reports.begin(), other.reports.end());
}

namespace {
std::string failed_names(const Verification& v) {
  std::string names;
  for (const auto& r : v.reports) {
    if (r.role == Role::precondition && !r.report.pass) names += (names.empty() ? "" : ", ") + r.name;
  }
  return names;
}
}  // namespace

PreconditionError::PreconditionError(Verification v)
    : Error("precondition failed: " + failed_names(v)), v_(std::move(v)) {}

Sample compare(const Multivector& lhs, const Multivector& rhs) { return {lhs - rhs, lhs.norm()}; }

ResidualReport summarize(std::span<const double> residual_norms, std::span<const double> lhs_magnitudes,
                         const std::vector<std::vector<double>>& points, Tolerance tol) {
  if (residual_norms.size() != points.size() || lhs_magnitudes.size() != points.size()) {
    throw InvalidArgument("summarize: size mismatch");
  }
  if (points.empty()) throw SingularityError("every grid point is masked");
  ResidualReport r;
  double sum_sq = 0.0;
  double max_lhs = 0.0;
  std::size_t worst = 0;
  bool any_nan = false;
  for (std::size_t i = 0; i < residual_norms.size(); ++i) {
    const double v = residual_norms[i];
    if (std::isnan(v)) {
      if (!any_nan) worst = i;
      any_nan = true;
      continue;
    }
    if (!any_nan && v > r.sup_norm) {
      r.sup_norm = v;
      worst = i;
    }
    sum_sq += v * v;
    if (std::isfinite(lhs_magnitudes[i])) max_lhs = std::max(max_lhs, lhs_magnitudes[i]);
  }
  if (any_nan) {
    r.sup_norm = std::numeric_limits<double>::infinity();
    r.rms = std::numeric_limits<double>::infinity();
  } else {
    r.rms = std::min(std::sqrt(sum_sq / static_cast<double>(residual_norms.size())), r.sup_norm);
  }
  r.worst_point = points[worst];
  r.samples_used = residual_norms.size();
  r.tolerance = tol.resolve(max_lhs);
  r.pass = r.sup_norm <= r.tolerance;
  return r;
}

ResidualReport grid_residual(const Identity& identity, const GridSpec& grid, Tolerance tol) {
  const auto pts = grid.points();
  if (pts.empty()) throw SingularityError("every grid point is masked");
  const std::function<std::pair<double, double>(std::span<const double>)> eval = [&](std::span<const double> p) {
    const Sample s = identity(p);
    return std::pair{s.residual.norm(), s.lhs_magnitude};
  };
  const auto rows = grid_map(eval, pts, grid.threads);
  std::vector<double> norms, lhs;
  norms.reserve(rows.size());
  lhs.reserve(rows.size());
  for (const auto& [a, b] : rows) {
    norms.push_back(a);
    lhs.push_back(b);
  }
  return summarize(norms, lhs, pts, tol);
}

ResidualReport grid_residual(const std::function<Multivector(std::span<const double>)>& residual, const GridSpec& grid,
                             Tolerance tol) {
  return grid_residual([&](std::span<const double> p) { return Sample{residual(p), 0.0}; }, grid, tol);
}

}  // namespace cliffop

#include "cliffop/jet.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "cliffop/errors.hpp"

namespace cliffop {

namespace {

std::uint64_t encode(std::span<const std::uint8_t> alpha) {
  std::uint64_t key = 0;
  for (auto a : alpha) key = key * (kMaxJetOrder + 1) + a;
  return key;
}

struct LayoutCache {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::unique_ptr<TaylorLayout>> layouts;
};

LayoutCache& cache() {
  static LayoutCache c;
  return c;
}

void enumerate(int n, int pos, int remaining, std::vector<std::uint8_t>& alpha,
               std::vector<std::vector<std::uint8_t>>& out) {
  if (pos == n - 1) {
    alpha[pos] = static_cast<std::uint8_t>(remaining);
    out.push_back(alpha);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    alpha[pos] = static_cast<std::uint8_t>(a);
    enumerate(n, pos + 1, remaining - a, alpha, out);
  }
}

}  // namespace

TaylorLayout::TaylorLayout(int n, int order) : n_(n), order_(order) {
  std::vector<std::uint8_t> alpha(n, 0);
  for (int d = 0; d <= order; ++d) enumerate(n, 0, d, alpha, exponents_);
  degree_.reserve(exponents_.size());
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    int d = 0;
    for (auto a : exponents_[i]) d += a;
    degree_.push_back(d);
    lookup_.emplace(encode(exponents_[i]), i);
  }

  std::vector<std::vector<MulEntry>> by_target(exponents_.size());
  std::vector<std::uint8_t> sum(n);
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      if (degree_[i] + degree_[j] > order) continue;
      for (int v = 0; v < n; ++v) sum[v] = static_cast<std::uint8_t>(exponents_[i][v] + exponents_[j][v]);
      by_target[lookup_.at(encode(sum))].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  mul_offsets_.push_back(0);
  for (auto& entries : by_target) {
    mul_.insert(mul_.end(), entries.begin(), entries.end());
    mul_offsets_.push_back(mul_.size());
  }

  deriv_.resize(n);
  for (int v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      const int a = exponents_[i][v];
      if (a == 0) continue;
      std::vector<std::uint8_t> lower = exponents_[i];
      lower[v] = static_cast<std::uint8_t>(a - 1);
      deriv_[v].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(lookup_.at(encode(lower))),
                           static_cast<double>(a)});
    }
  }
}

const TaylorLayout& TaylorLayout::get(int n, int order) {
  if (n < 1 || n > kMaxDimension) throw InvalidArgument("jet dimension out of range");
  if (order < 0 || order > kMaxJetOrder) {
    throw InvalidArgument("jet order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxJetOrder) + "]");
  }
  thread_local std::array<std::array<const TaylorLayout*, kMaxJetOrder + 1>, kMaxDimension + 1> local{};
  const TaylorLayout*& hit = local[n][order];
  if (hit) return *hit;
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  auto& slot = c.layouts[{n, order}];
  if (!slot) slot.reset(new TaylorLayout(n, order));
  hit = slot.get();
  return *slot;
}

std::size_t TaylorLayout::prefix(int d) const {
  std::size_t count = 0;
  while (count < degree_.size() && degree_[count] <= d) ++count;
  return count;
}

std::span<const std::uint8_t> TaylorLayout::exponent(std::size_t idx) const { return exponents_[idx]; }

std::size_t TaylorLayout::index_of(std::span<const std::uint8_t> alpha) const {
  auto it = lookup_.find(encode(alpha));
  if (it == lookup_.end()) throw InvalidArgument("monomial outside jet layout");
  return it->second;
}

std::size_t TaylorLayout::pair_index(int j, int k) const {
  std::vector<std::uint8_t> alpha(n_, 0);
  alpha[j - 1] += 1;
  alpha[k - 1] += 1;
  return index_of(alpha);
}

std::span<const TaylorLayout::MulEntry> TaylorLayout::products_into(std::size_t target) const {
  return std::span(mul_).subspan(mul_offsets_[target], mul_offsets_[target + 1] - mul_offsets_[target]);
}

std::span<const TaylorLayout::DerivEntry> TaylorLayout::derivative(int j) const { return deriv_[j - 1]; }

Jet::Jet(int n, int order) : layout_(&TaylorLayout::get(n, order)), c_(layout_->size()) {}

Jet Jet::constant(int n, int order, Complex value) {
  Jet j(n, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int n, int order, int j, double value) {
  if (j < 1 || j > n) throw InvalidArgument("variable index out of range");
  Jet jet(n, order);
  jet.c_[0] = value;
  if (order >= 1) jet.c_[jet.layout_->unit_index(j)] = 1.0;
  return jet;
}

bool Jet::is_zero() const noexcept {
  for (const auto& c : c_) {
    if (c != Complex{}) return false;
  }
  return true;
}

Complex Jet::partial(int j) const {
  if (order() < 1) throw InvalidArgument("jet order too low for a first partial");
  return c_[layout_->unit_index(j)];
}

Complex Jet::second_partial(int j, int k) const {
  if (order() < 2) throw InvalidArgument("jet order too low for a second partial");
  const Complex c = c_[layout_->pair_index(j, k)];
  return j == k ? 2.0 * c : c;
}

Jet Jet::truncated(int order) const {
  if (order > this->order()) throw InvalidArgument("cannot raise jet order by truncation");
  Jet out(variables(), order);
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

Jet Jet::derivative(int j) const {
  if (order() < 1) throw InvalidArgument("cannot differentiate an order-0 jet");
  Jet out(variables(), order() - 1);
  for (const auto& e : layout_->derivative(j)) {
    if (e.to < out.c_.size()) out.c_[e.to] += e.factor * c_[e.from];
  }
  return out;
}

namespace {
void check_compatible(const Jet& a, const Jet& b) {
  if (a.variables() != b.variables()) throw SignatureMismatch(a.variables(), b.variables());
}
}  // namespace

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(*this, other);
  if (other.order() < order()) *this = truncated(other.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_compatible(*this, other);
  if (other.order() < order()) *this = truncated(other.order());
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet out(a.variables(), std::min(a.order(), b.order()));
  for (std::size_t k = 0; k < out.c_.size(); ++k) {
    Complex s{};
    for (const auto& e : out.layout_->products_into(k)) s += a.c_[e.lhs] * b.c_[e.rhs];
    out.c_[k] = s;
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const Complex b0 = b.c_[0];
  if (b0 == Complex{}) throw std::domain_error("division by zero");
  Jet q(a.variables(), std::min(a.order(), b.order()));
  for (std::size_t k = 0; k < q.c_.size(); ++k) {
    Complex s = a.c_[k];
    for (const auto& e : q.layout_->products_into(k)) {
      if (e.lhs != 0) s -= b.c_[e.lhs] * q.c_[e.rhs];
    }
    q.c_[k] = s / b0;
  }
  return q;
}

Jet Jet::compose(std::span<const Complex> taylor) const {
  const int k = order();
  if (static_cast<int>(taylor.size()) < k + 1) throw InvalidArgument("compose: too few Taylor coefficients");
  Jet delta = *this;
  delta.c_[0] = 0.0;
  Jet result = constant(variables(), k, taylor[k]);
  for (int m = k - 1; m >= 0; --m) {
    result = result * delta;
    result.c_[0] += taylor[m];
  }
  return result;
}

Jet Jet::pow(int exponent) const {
  if (exponent < 0) return constant(variables(), order(), 1.0) / pow(-exponent);
  Jet result = constant(variables(), order(), 1.0);
  Jet base = *this;
  bool first = true;
  while (exponent > 0) {
    if (exponent & 1) {
      result = first ? base : result * base;
      first = false;
    }
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Complex Jet2::laplacian() const {
  Complex s{};
  for (std::size_t j = 0; j < hessian.size(); ++j) s += hessian[j][j];
  return s;
}

Jet2 Jet2::from_jet(const Jet& jet) {
  const int n = jet.variables();
  Jet2 out;
  out.value = jet.value();
  out.gradient.resize(n);
  out.hessian.assign(n, std::vector<Complex>(n));
  for (int j = 1; j <= n; ++j) {
    out.gradient[j - 1] = jet.partial(j);
    for (int k = j; k <= n; ++k) {
      out.hessian[j - 1][k - 1] = jet.second_partial(j, k);
      out.hessian[k - 1][j - 1] = out.hessian[j - 1][k - 1];
    }
  }
  return out;
}

}  // namespace cliffop

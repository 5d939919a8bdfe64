#include "cliffop/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cliffop/errors.hpp"

namespace cliffop {

// ---- MultivectorJet -------------------------------------------------------

MultivectorJet::MultivectorJet(Signature sig, int order) : sig_(sig), order_(order) {}

MultivectorJet MultivectorJet::constant(const Multivector& m, int order) {
  MultivectorJet out(m.signature(), order);
  for (const auto& t : m.terms()) out.terms_.emplace_back(t.blade, Jet::constant(m.dimension(), order, t.coeff));
  return out;
}

MultivectorJet MultivectorJet::scalar(Signature sig, const Jet& j) {
  MultivectorJet out(sig, j.order());
  out.add(Blade{}, j);
  return out;
}

Jet MultivectorJet::component(Blade b) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b, [](const auto& t, Blade key) { return t.first < key; });
  if (it != terms_.end() && it->first == b) return it->second;
  return Jet(sig_.dimension(), order_);
}

void MultivectorJet::add(Blade b, const Jet& j) {
  if ((b.mask & ~sig_.full_mask()) != 0) throw InvalidArgument("blade " + b.name() + " outside the signature");
  if (j.order() < order_) *this = truncated(j.order());
  const Jet& use = j.order() > order_ ? j.truncated(order_) : j;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), b, [](const auto& t, Blade key) { return t.first < key; });
  if (it != terms_.end() && it->first == b) {
    it->second += use;
    if (it->second.is_zero()) terms_.erase(it);
  } else if (!use.is_zero()) {
    terms_.insert(it, {b, use});
  }
}

Multivector MultivectorJet::value() const {
  std::vector<Multivector::Term> terms;
  terms.reserve(terms_.size());
  for (const auto& [b, j] : terms_) terms.push_back({b, j.value()});
  return Multivector::from_terms(sig_, std::move(terms));
}

MultivectorJet MultivectorJet::derivative(int j) const {
  if (j < 1 || j > sig_.dimension()) throw InvalidArgument("partial index out of range");
  MultivectorJet out(sig_, order_ - 1);
  for (const auto& [b, c] : terms_) {
    Jet d = c.derivative(j);
    if (!d.is_zero()) out.terms_.emplace_back(b, std::move(d));
  }
  return out;
}

MultivectorJet MultivectorJet::truncated(int order) const {
  MultivectorJet out(sig_, order);
  for (const auto& [b, c] : terms_) {
    Jet t = c.truncated(order);
    if (!t.is_zero()) out.terms_.emplace_back(b, std::move(t));
  }
  return out;
}

MultivectorJet& MultivectorJet::operator+=(const MultivectorJet& o) {
  if (o.sig_ != sig_) throw SignatureMismatch(sig_.dimension(), o.sig_.dimension());
  for (const auto& [b, j] : o.terms_) add(b, j);
  if (o.order_ < order_) *this = truncated(o.order_);
  return *this;
}

MultivectorJet& MultivectorJet::operator-=(const MultivectorJet& o) { return *this += o * Complex(-1.0); }

MultivectorJet& MultivectorJet::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [b, j] : terms_) j *= s;
  return *this;
}

namespace {

// Dense accumulator over all 2^n blades, compacted at the end.
class JetAccumulator {
 public:
  JetAccumulator(Signature sig, int order) : sig_(sig), order_(order), slots_(std::size_t{1} << sig.dimension()) {}

  void add(Blade b, Jet j) {
    auto& slot = slots_[b.mask];
    if (slot) {
      *slot += j;
    } else {
      slot = std::move(j);
    }
  }

  MultivectorJet finish() {
    MultivectorJet out(sig_, order_);
    for (std::uint32_t m = 0; m < slots_.size(); ++m) {
      if (slots_[m] && !slots_[m]->is_zero()) out.add(Blade{m}, *slots_[m]);
    }
    return out;
  }

 private:
  Signature sig_;
  int order_;
  std::vector<std::optional<Jet>> slots_;
};

}  // namespace

MultivectorJet operator*(const MultivectorJet& a, const MultivectorJet& b) {
  if (a.sig_ != b.sig_) throw SignatureMismatch(a.sig_.dimension(), b.sig_.dimension());
  const int order = std::min(a.order_, b.order_);
  JetAccumulator acc(a.sig_, order);
  for (const auto& [ba, ja] : a.terms_) {
    for (const auto& [bb, jb] : b.terms_) {
      Jet prod = ja * jb;
      if (blade_product_sign(ba, bb) < 0) prod *= -1.0;
      acc.add(Blade{ba.mask ^ bb.mask}, std::move(prod));
    }
  }
  return acc.finish();
}

MultivectorJet operator*(const Multivector& c, const MultivectorJet& a) {
  if (c.signature() != a.sig_) throw SignatureMismatch(c.dimension(), a.sig_.dimension());
  JetAccumulator acc(a.sig_, a.order_);
  for (const auto& t : c.terms()) {
    for (const auto& [b, j] : a.terms_) {
      acc.add(Blade{t.blade.mask ^ b.mask}, j * (static_cast<double>(blade_product_sign(t.blade, b)) * t.coeff));
    }
  }
  return acc.finish();
}

MultivectorJet operator*(const MultivectorJet& a, const Multivector& c) {
  if (c.signature() != a.sig_) throw SignatureMismatch(a.sig_.dimension(), c.dimension());
  JetAccumulator acc(a.sig_, a.order_);
  for (const auto& [b, j] : a.terms_) {
    for (const auto& t : c.terms()) {
      acc.add(Blade{b.mask ^ t.blade.mask}, j * (static_cast<double>(blade_product_sign(b, t.blade)) * t.coeff));
    }
  }
  return acc.finish();
}

MultivectorJet MultivectorJet::scaled(const Jet& s) const {
  MultivectorJet out(sig_, std::min(order_, s.order()));
  for (const auto& [b, j] : terms_) out.add(b, j * s);
  return out;
}

MultivectorJet MultivectorJet::divided(const Jet& s) const {
  if (s.value() == Complex{}) throw DomainError("division by a vanishing scalar field", "denominator");
  MultivectorJet out(sig_, std::min(order_, s.order()));
  for (const auto& [b, j] : terms_) out.add(b, j / s);
  return out;
}

MultivectorJet grade_projection(const MultivectorJet& a, int k) {
  MultivectorJet out(a.signature(), a.order());
  for (const auto& [b, j] : a.terms()) {
    if (b.grade() == k) out.add(b, j);
  }
  return out;
}

// ---- symbolic helpers -----------------------------------------------------

namespace {

void put(ExprMap& m, Blade b, const ScalarExpr& e) {
  auto it = m.find(b);
  ScalarExpr sum = it == m.end() ? e : it->second + e;
  if (sum.is_constant(0.0)) {
    if (it != m.end()) m.erase(it);
  } else {
    m[b] = sum;
  }
}

ExprMap expr_scale(const ExprMap& a, Complex s) {
  ExprMap out;
  for (const auto& [b, e] : a) put(out, b, make_constant(s) * e);
  return out;
}

ExprMap expr_product(const ExprMap& a, const ExprMap& b) {
  ExprMap out;
  for (const auto& [ba, ea] : a) {
    for (const auto& [bb, eb] : b) {
      ScalarExpr prod = ea * eb;
      put(out, Blade{ba.mask ^ bb.mask}, blade_product_sign(ba, bb) < 0 ? -prod : prod);
    }
  }
  return out;
}

ExprMap expr_of(const Multivector& m) {
  ExprMap out;
  for (const auto& t : m.terms()) out[t.blade] = make_constant(t.coeff);
  return out;
}

DerivativeMode combine(DerivativeMode a, DerivativeMode b) {
  return a == DerivativeMode::exact && b == DerivativeMode::exact ? DerivativeMode::exact
                                                                  : DerivativeMode::finite_difference;
}

void check_point(Signature sig, std::span<const double> p) {
  if (static_cast<int>(p.size()) != sig.dimension()) {
    throw InvalidArgument("point has " + std::to_string(p.size()) + " coordinates, field lives on R^" +
                          std::to_string(sig.dimension()));
  }
}

// ---- nodes ------------------------------------------------------------------

class ExprNode final : public FieldNode {
 public:
  ExprNode(Signature sig, ExprMap m) : FieldNode(sig), m_(std::move(m)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    MultivectorJet out(signature(), order);
    for (const auto& [b, e] : m_) out.add(b, evaluate(e, p, order));
    return out;
  }
  int max_order() const override { return kMaxJetOrder; }
  DerivativeMode mode() const override { return DerivativeMode::exact; }
  std::optional<ExprMap> expressions() const override { return m_; }

 private:
  ExprMap m_;
};

class BlackBoxNode final : public FieldNode {
 public:
  BlackBoxNode(Signature sig, MultivectorField::Sampler s, double h) : FieldNode(sig), sampler_(std::move(s)), h_(h) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    const int n = signature().dimension();
    std::vector<double> x(p.begin(), p.end());
    const Multivector f0 = sampler_(x);
    JetAccumulator acc(signature(), order);
    const auto& layout = TaylorLayout::get(n, order);
    auto deposit = [&](const Multivector& m, std::size_t idx, double factor) {
      for (const auto& t : m.terms()) {
        Jet j(n, order);
        j[idx] = factor * t.coeff;
        acc.add(t.blade, std::move(j));
      }
    };
    deposit(f0, 0, 1.0);
    if (order >= 1) {
      for (int j = 1; j <= n; ++j) {
        x[j - 1] = p[j - 1] + h_;
        const Multivector up = sampler_(x);
        x[j - 1] = p[j - 1] - h_;
        const Multivector down = sampler_(x);
        x[j - 1] = p[j - 1];
        deposit(up - down, layout.unit_index(j), 1.0 / (2.0 * h_));
      }
    }
    if (order >= 2) {
      // second differences use a step of at least 1e-4
      const double h2 = std::max(h_, 1e-4);
      for (int j = 1; j <= n; ++j) {
        x[j - 1] = p[j - 1] + h2;
        const Multivector up = sampler_(x);
        x[j - 1] = p[j - 1] - h2;
        const Multivector down = sampler_(x);
        x[j - 1] = p[j - 1];
        // coefficient of x_j^2 is f_jj / 2
        deposit(up - 2.0 * f0 + down, layout.pair_index(j, j), 0.5 / (h2 * h2));
        for (int k = j + 1; k <= n; ++k) {
          Multivector mixed(signature());
          for (int sj : {1, -1}) {
            for (int sk : {1, -1}) {
              x[j - 1] = p[j - 1] + sj * h2;
              x[k - 1] = p[k - 1] + sk * h2;
              mixed += static_cast<double>(sj * sk) * sampler_(x);
            }
          }
          x[j - 1] = p[j - 1];
          x[k - 1] = p[k - 1];
          deposit(mixed, layout.pair_index(j, k), 0.25 / (h2 * h2));
        }
      }
    }
    return acc.finish();
  }
  int max_order() const override { return 2; }
  DerivativeMode mode() const override { return DerivativeMode::finite_difference; }

 private:
  MultivectorField::Sampler sampler_;
  double h_;
};

class CustomNode final : public FieldNode {
 public:
  CustomNode(Signature sig, std::function<MultivectorJet(std::span<const double>, int)> f, int max_order,
             DerivativeMode mode)
      : FieldNode(sig), f_(std::move(f)), max_order_(max_order), mode_(mode) {}

  MultivectorJet jet(std::span<const double> p, int order) const override { return f_(p, order); }
  int max_order() const override { return max_order_; }
  DerivativeMode mode() const override { return mode_; }

 private:
  std::function<MultivectorJet(std::span<const double>, int)> f_;
  int max_order_;
  DerivativeMode mode_;
};

class LinearNode final : public FieldNode {
 public:
  LinearNode(Signature sig, std::vector<Complex> c, std::vector<MultivectorField> f)
      : FieldNode(sig), c_(std::move(c)), f_(std::move(f)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    MultivectorJet out(signature(), order);
    for (std::size_t i = 0; i < f_.size(); ++i) out += c_[i] * f_[i].jet(p, order);
    return out;
  }
  int max_order() const override {
    int m = kMaxJetOrder;
    for (const auto& f : f_) m = std::min(m, f.max_order());
    return m;
  }
  DerivativeMode mode() const override {
    DerivativeMode m = DerivativeMode::exact;
    for (const auto& f : f_) m = combine(m, f.mode());
    return m;
  }
  std::optional<ExprMap> expressions() const override {
    ExprMap out;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      auto e = f_[i].expressions();
      if (!e) return std::nullopt;
      for (const auto& [b, x] : expr_scale(*e, c_[i])) put(out, b, x);
    }
    return out;
  }

 private:
  std::vector<Complex> c_;
  std::vector<MultivectorField> f_;
};

class ProductNode final : public FieldNode {
 public:
  ProductNode(MultivectorField a, MultivectorField b) : FieldNode(a.signature()), a_(std::move(a)), b_(std::move(b)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    return a_.jet(p, order) * b_.jet(p, order);
  }
  int max_order() const override { return std::min(a_.max_order(), b_.max_order()); }
  DerivativeMode mode() const override { return combine(a_.mode(), b_.mode()); }
  std::optional<ExprMap> expressions() const override {
    auto ea = a_.expressions();
    auto eb = b_.expressions();
    if (!ea || !eb) return std::nullopt;
    return expr_product(*ea, *eb);
  }

 private:
  MultivectorField a_;
  MultivectorField b_;
};

class DiracNode final : public FieldNode {
 public:
  explicit DiracNode(MultivectorField f) : FieldNode(f.signature()), f_(std::move(f)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    const MultivectorJet up = f_.jet(p, order + 1);
    MultivectorJet out(signature(), order);
    for (int j = 1; j <= signature().dimension(); ++j) {
      out += Multivector::basis(signature(), j) * up.derivative(j);
    }
    return out;
  }
  int max_order() const override { return f_.max_order() - 1; }
  DerivativeMode mode() const override { return f_.mode(); }
  std::optional<ExprMap> expressions() const override {
    auto e = f_.expressions();
    if (!e) return std::nullopt;
    ExprMap out;
    for (int j = 1; j <= signature().dimension(); ++j) {
      ExprMap d;
      for (const auto& [b, x] : *e) put(d, b, differentiate(x, j));
      for (const auto& [b, x] : expr_product(expr_of(Multivector::basis(signature(), j)), d)) put(out, b, x);
    }
    return out;
  }

 private:
  MultivectorField f_;
};

class PartialNode final : public FieldNode {
 public:
  PartialNode(MultivectorField f, int j, int times)
      : FieldNode(f.signature()), f_(std::move(f)), j_(j), times_(times) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    MultivectorJet out = f_.jet(p, order + times_);
    for (int t = 0; t < times_; ++t) out = out.derivative(j_);
    return out;
  }
  int max_order() const override { return f_.max_order() - times_; }
  DerivativeMode mode() const override { return f_.mode(); }
  std::optional<ExprMap> expressions() const override {
    auto e = f_.expressions();
    if (!e) return std::nullopt;
    ExprMap out;
    for (const auto& [b, x] : *e) {
      ScalarExpr d = x;
      for (int t = 0; t < times_; ++t) d = differentiate(d, j_);
      put(out, b, d);
    }
    return out;
  }

 private:
  MultivectorField f_;
  int j_;
  int times_;
};

class GradeNode final : public FieldNode {
 public:
  GradeNode(MultivectorField f, int k) : FieldNode(f.signature()), f_(std::move(f)), k_(k) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    return grade_projection(f_.jet(p, order), k_);
  }
  int max_order() const override { return f_.max_order(); }
  DerivativeMode mode() const override { return f_.mode(); }
  std::optional<ExprMap> expressions() const override {
    auto e = f_.expressions();
    if (!e) return std::nullopt;
    ExprMap out;
    for (const auto& [b, x] : *e) {
      if (b.grade() == k_) out[b] = x;
    }
    return out;
  }

 private:
  MultivectorField f_;
  int k_;
};

class ComponentNode final : public FieldNode {
 public:
  ComponentNode(MultivectorField f, Blade b) : FieldNode(f.signature()), f_(std::move(f)), b_(b) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    return MultivectorJet::scalar(signature(), f_.jet(p, order).component(b_));
  }
  int max_order() const override { return f_.max_order(); }
  DerivativeMode mode() const override { return f_.mode(); }
  std::optional<ExprMap> expressions() const override {
    auto e = f_.expressions();
    if (!e) return std::nullopt;
    ExprMap out;
    if (auto it = e->find(b_); it != e->end()) out[Blade{}] = it->second;
    return out;
  }

 private:
  MultivectorField f_;
  Blade b_;
};

class FunctionNode final : public FieldNode {
 public:
  FunctionNode(Function f, MultivectorField s) : FieldNode(s.signature()), f_(f), s_(std::move(s)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    const MultivectorJet s = s_.jet(p, order);
    for (const auto& [b, j] : s.terms()) {
      if (b.mask != 0) throw InvalidArgument("function argument is not scalar-valued");
    }
    return MultivectorJet::scalar(signature(), apply_function(f_, s.component(Blade{})));
  }
  int max_order() const override { return s_.max_order(); }
  DerivativeMode mode() const override { return s_.mode(); }
  std::optional<ExprMap> expressions() const override {
    auto e = s_.expressions();
    if (!e) return std::nullopt;
    const ScalarExpr arg = e->count(Blade{}) ? e->at(Blade{}) : make_constant(0.0);
    ExprMap out;
    put(out, Blade{}, make_call(f_, arg));
    return out;
  }

 private:
  Function f_;
  MultivectorField s_;
};

class QuotientNode final : public FieldNode {
 public:
  QuotientNode(MultivectorField f, MultivectorField s) : FieldNode(f.signature()), f_(std::move(f)), s_(std::move(s)) {}

  MultivectorJet jet(std::span<const double> p, int order) const override {
    const MultivectorJet s = s_.jet(p, order);
    for (const auto& [b, j] : s.terms()) {
      if (b.mask != 0) throw InvalidArgument("divisor field is not scalar-valued");
    }
    const Jet den = s.component(Blade{});
    if (den.value() == Complex{}) {
      throw DomainError("division by a vanishing scalar field",
                        s_.expressions() ? render_field(s_).begin()->second : "denominator");
    }
    return f_.jet(p, order).divided(den);
  }
  int max_order() const override { return std::min(f_.max_order(), s_.max_order()); }
  DerivativeMode mode() const override { return combine(f_.mode(), s_.mode()); }
  std::optional<ExprMap> expressions() const override {
    auto ef = f_.expressions();
    auto es = s_.expressions();
    if (!ef || !es) return std::nullopt;
    const ScalarExpr den = es->count(Blade{}) ? es->at(Blade{}) : make_constant(0.0);
    ExprMap out;
    for (const auto& [b, x] : *ef) put(out, b, x / den);
    return out;
  }

 private:
  MultivectorField f_;
  MultivectorField s_;
};

}  // namespace

// ---- MultivectorField -------------------------------------------------------

MultivectorField::MultivectorField(std::shared_ptr<const FieldNode> node) : node_(std::move(node)) {
  if (!node_) throw InvalidArgument("null field node");
}

MultivectorField MultivectorField::from_expressions(Signature sig, ExprMap components) {
  ExprMap clean;
  for (auto& [b, e] : components) {
    if ((b.mask & ~sig.full_mask()) != 0) throw InvalidArgument("blade " + b.name() + " outside the signature");
    if (e.max_variable() > sig.dimension()) {
      throw InvalidArgument("component " + b.name() + " uses x" + std::to_string(e.max_variable()) +
                            " but n = " + std::to_string(sig.dimension()));
    }
    if (!e.is_constant(0.0)) clean.emplace(b, std::move(e));
  }
  return MultivectorField(std::make_shared<ExprNode>(sig, std::move(clean)));
}

MultivectorField MultivectorField::scalar(Signature sig, ScalarExpr e) {
  ExprMap m;
  m.emplace(Blade{}, std::move(e));
  return from_expressions(sig, std::move(m));
}

MultivectorField MultivectorField::constant(const Multivector& m) {
  return MultivectorField(std::make_shared<ExprNode>(m.signature(), expr_of(m)));
}

MultivectorField MultivectorField::zero(Signature sig) { return from_expressions(sig, {}); }

MultivectorField MultivectorField::black_box(Signature sig, Sampler sampler, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  return MultivectorField(std::make_shared<BlackBoxNode>(sig, std::move(sampler), h));
}

MultivectorField MultivectorField::custom(Signature sig,
                                          std::function<MultivectorJet(std::span<const double>, int)> provider,
                                          int max_order, DerivativeMode mode) {
  return MultivectorField(std::make_shared<CustomNode>(sig, std::move(provider), max_order, mode));
}

Multivector MultivectorField::operator()(std::span<const double> p) const { return jet(p, 0).value(); }

MultivectorJet MultivectorField::jet(std::span<const double> p, int order) const {
  check_point(signature(), p);
  if (order < 0) throw InvalidArgument("negative derivative order");
  if (order > max_order()) {
    throw ModeError("field provides derivatives up to order " + std::to_string(max_order()) + ", " +
                    std::to_string(order) + " requested");
  }
  return node_->jet(p, order);
}

namespace {
void check_pair(const MultivectorField& a, const MultivectorField& b) {
  if (a.signature() != b.signature()) throw SignatureMismatch(a.dimension(), b.dimension());
}
}  // namespace

MultivectorField operator+(const MultivectorField& a, const MultivectorField& b) {
  check_pair(a, b);
  return MultivectorField(
      std::make_shared<LinearNode>(a.signature(), std::vector<Complex>{1.0, 1.0}, std::vector<MultivectorField>{a, b}));
}

MultivectorField operator-(const MultivectorField& a, const MultivectorField& b) {
  check_pair(a, b);
  return MultivectorField(std::make_shared<LinearNode>(a.signature(), std::vector<Complex>{1.0, -1.0},
                                                       std::vector<MultivectorField>{a, b}));
}

MultivectorField operator-(const MultivectorField& a) { return Complex(-1.0) * a; }

MultivectorField operator*(Complex s, const MultivectorField& a) {
  return MultivectorField(
      std::make_shared<LinearNode>(a.signature(), std::vector<Complex>{s}, std::vector<MultivectorField>{a}));
}

MultivectorField operator*(const MultivectorField& a, const MultivectorField& b) {
  check_pair(a, b);
  return MultivectorField(std::make_shared<ProductNode>(a, b));
}

MultivectorField linear_combine(std::span<const Complex> coeffs, std::span<const MultivectorField> fields) {
  if (coeffs.size() != fields.size()) throw InvalidArgument("linear_combine: size mismatch");
  if (fields.empty()) throw InvalidArgument("linear_combine: no fields");
  for (const auto& f : fields) check_pair(fields.front(), f);
  return MultivectorField(std::make_shared<LinearNode>(fields.front().signature(),
                                                       std::vector<Complex>(coeffs.begin(), coeffs.end()),
                                                       std::vector<MultivectorField>(fields.begin(), fields.end())));
}

MultivectorField dirac_field(const MultivectorField& f) { return MultivectorField(std::make_shared<DiracNode>(f)); }

MultivectorField laplacian_field(const MultivectorField& f) {
  std::vector<MultivectorField> parts;
  for (int j = 1; j <= f.dimension(); ++j) parts.emplace_back(std::make_shared<PartialNode>(f, j, 2));
  std::vector<Complex> ones(parts.size(), 1.0);
  return linear_combine(ones, parts);
}

MultivectorField partial_field(const MultivectorField& f, int j) {
  if (j < 1 || j > f.dimension()) throw InvalidArgument("partial index out of range");
  return MultivectorField(std::make_shared<PartialNode>(f, j, 1));
}

MultivectorField grade_field(const MultivectorField& f, int k) {
  return MultivectorField(std::make_shared<GradeNode>(f, k));
}

MultivectorField divide(const MultivectorField& f, const MultivectorField& s) {
  check_pair(f, s);
  return MultivectorField(std::make_shared<QuotientNode>(f, s));
}

MultivectorField scalar_part(const MultivectorField& f) { return grade_field(f, 0); }

MultivectorField apply_function(Function f, const MultivectorField& s) {
  return MultivectorField(std::make_shared<FunctionNode>(f, s));
}

MultivectorField component_field(const MultivectorField& f, Blade b) {
  if ((b.mask & ~f.signature().full_mask()) != 0) throw InvalidArgument("blade " + b.name() + " outside the signature");
  return MultivectorField(std::make_shared<ComponentNode>(f, b));
}

MultivectorField euclidean_inner(const MultivectorField& a, const MultivectorField& b) {
  check_pair(a, b);
  std::vector<MultivectorField> terms;
  for (int j = 1; j <= a.dimension(); ++j) {
    terms.push_back(component_field(a, Blade::basis(j)) * component_field(b, Blade::basis(j)));
  }
  std::vector<Complex> ones(terms.size(), 1.0);
  return linear_combine(ones, terms);
}

MultivectorField sampled_product(const MultivectorField& f, const MultivectorField& g, double h) {
  check_pair(f, g);
  return MultivectorField::black_box(
      f.signature(), [f, g](std::span<const double> p) { return f(p) * g(p); }, h);
}

Multivector dirac(const MultivectorField& f, std::span<const double> p) {
  const MultivectorJet j = f.jet(p, 1);
  Multivector out(f.signature());
  for (int k = 1; k <= f.dimension(); ++k) out += Multivector::basis(f.signature(), k) * j.derivative(k).value();
  return out;
}

Multivector laplacian(const MultivectorField& f, std::span<const double> p) {
  const MultivectorJet j = f.jet(p, 2);
  Multivector out(f.signature());
  for (int k = 1; k <= f.dimension(); ++k) out += j.derivative(k).derivative(k).value();
  return out;
}

Multivector partial(const MultivectorField& f, int j, std::span<const double> p) {
  return f.jet(p, 1).derivative(j).value();
}

// ---- Leibniz rules ----------------------------------------------------------

namespace {

// Product field whose derivatives are independent of the factors' jets:
// symbolic when both sides have expressions, sampled in FD mode.
MultivectorField independent_product(const MultivectorField& a, const MultivectorField& b) {
  if (a.mode() == DerivativeMode::finite_difference || b.mode() == DerivativeMode::finite_difference) {
    return sampled_product(a, b);
  }
  auto ea = a.expressions();
  auto eb = b.expressions();
  if (ea && eb) return MultivectorField::from_expressions(a.signature(), expr_product(*ea, *eb));
  return a * b;
}

}  // namespace

void require_grade(const MultivectorField& g, int k, std::span<const double> p) {
  if (auto e = g.expressions()) {
    for (const auto& [b, x] : *e) {
      if (b.grade() != k)
        throw InvalidArgument("field has a grade-" + std::to_string(b.grade()) + " component " + b.name() +
                              ", expected pure grade " + std::to_string(k));
    }
    return;
  }
  const Multivector v = g(p);
  if (!v.is_homogeneous(k, 1e-12 * (1.0 + v.norm()))) {
    throw InvalidArgument("field is not homogeneous of grade " + std::to_string(k));
  }
}

IdentitySides leibniz_scalar(const MultivectorField& phi, const MultivectorField& f, std::span<const double> p) {
  check_pair(phi, f);
  require_grade(phi, 0, p);
  const Multivector lhs = dirac(independent_product(phi, f), p);
  const Multivector phi_value = phi(p);
  const Multivector rhs = dirac(phi, p) * f(p) + phi_value * dirac(f, p);
  return {lhs, rhs};
}

Multivector leibniz_residual_scalar(const MultivectorField& phi, const MultivectorField& f, std::span<const double> p) {
  return leibniz_scalar(phi, f, p).residual();
}

IdentitySides leibniz_kvector(const MultivectorField& g, const MultivectorField& f, int k, std::span<const double> p) {
  check_pair(g, f);
  if (k < 0 || k > g.dimension()) throw InvalidArgument("grade out of range");
  require_grade(g, k, p);
  const Signature sig = g.signature();
  const Multivector lhs = dirac(independent_product(g, f), p);

  const MultivectorJet gj = g.jet(p, 1);
  const MultivectorJet fj = f.jet(p, 1);
  const Multivector gv = gj.value();
  const Multivector fv = fj.value();
  Multivector dg(sig), df(sig), cross(sig);
  for (int j = 1; j <= sig.dimension(); ++j) {
    const Multivector ej = Multivector::basis(sig, j);
    const Multivector dfj = fj.derivative(j).value();
    dg += ej * gj.derivative(j).value();
    df += ej * dfj;
    cross += grade_projection(ej * gv, k - 1) * dfj;
  }
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  const Multivector rhs = dg * fv + 2.0 * cross + sign * (gv * df);
  return {lhs, rhs};
}

Multivector leibniz_residual_kvector(const MultivectorField& g, const MultivectorField& f, int k,
                                     std::span<const double> p) {
  return leibniz_kvector(g, f, k, p).residual();
}

// ---- text form --------------------------------------------------------------

MultivectorField parse_field(Signature sig, const std::map<std::string, std::string>& components) {
  ExprMap m;
  for (const auto& [name, source] : components) {
    const Blade b = parse_blade(name, sig);
    ScalarExpr e;
    try {
      e = parse_expression(source, sig.dimension());
    } catch (const ParseError& err) {
      throw ParseError("component " + name + ": " + err.detail(), err.offset());
    }
    if (m.count(b)) throw InvalidArgument("duplicate component " + name);
    m.emplace(b, std::move(e));
  }
  return MultivectorField::from_expressions(sig, std::move(m));
}

std::map<std::string, std::string> render_field(const MultivectorField& f) {
  auto e = f.expressions();
  if (!e) throw ModeError("field has no symbolic form");
  std::map<std::string, std::string> out;
  for (const auto& [b, x] : *e) out.emplace(b.name(), render(x));
  if (out.empty()) out.emplace("1", "0");
  return out;
}

}  // namespace cliffop

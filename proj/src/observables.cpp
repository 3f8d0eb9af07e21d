#include "zwitter/observables.hpp"

#include "zwitter/spectral.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace zwitter {

// ---- classical side ----

Real classical_expectation(const RealPhaseField& w,
                           const ClassicalObservable& f) {
  Real acc = 0;
  for (int j = 0; j < w.grid.n_z; ++j)
    for (int a = 0; a < w.grid.n_p; ++a)
      acc += f.f(w.grid.z(j), w.grid.p(a)) * w.values(j, a);
  return acc * w.grid.cell_measure();
}

Real classical_expectation(const ProbabilityDensity& w,
                           const ClassicalObservable& f) {
  return classical_expectation(w.field, f);
}

Real symmetrized_moment(const RealPhaseField& rho_w,
                        const ClassicalObservable& f) {
  return classical_expectation(rho_w, f);
}

// ---- generator applications ----

namespace {

CArray apply_xq_raw(const CArray& f, const GridSpec& g) {
  CArray v = f;
  spectral::p_to_r_inplace(v, g);
  for (int c = 0; c < g.n_p; ++c) {
    const Real r = g.r(c);
    for (int j = 0; j < g.n_z; ++j) v(j, c) *= g.z(j) - r / 2;
  }
  spectral::r_to_p_inplace(v, g);
  return v;
}

CArray apply_pq_raw(const CArray& f, const GridSpec& g) {
  CArray v = f;
  spectral::z_to_k_inplace(v, g);
  for (int a = 0; a < g.n_p; ++a) {
    const Real p = g.p(a);
    for (int l = 0; l < g.n_z; ++l) v(l, a) *= p + g.hbar * g.k(l) / 2;
  }
  spectral::k_to_z_inplace(v, g);
  return v;
}

CArray apply_vxq_raw(const CArray& f, const GridSpec& g, const Potential& pot) {
  CArray v = f;
  spectral::p_to_r_inplace(v, g);
  for (int c = 0; c < g.n_p; ++c) {
    const Real r = g.r(c);
    for (int j = 0; j < g.n_z; ++j) v(j, c) *= pot(g.z(j) - r / 2);
  }
  spectral::r_to_p_inplace(v, g);
  return v;
}

CArray apply_hq_raw(const CArray& f, const GridSpec& g, const Potential& pot) {
  // Kinetic part fused: P_Q^2/(2m) is diagonal in (k,p).
  CArray kin = f;
  spectral::z_to_k_inplace(kin, g);
  for (int a = 0; a < g.n_p; ++a) {
    const Real p = g.p(a);
    for (int l = 0; l < g.n_z; ++l) {
      const Real pq = p + g.hbar * g.k(l) / 2;
      kin(l, a) *= pq * pq / (2 * g.mass);
    }
  }
  spectral::k_to_z_inplace(kin, g);
  return kin + apply_vxq_raw(f, g, pot);
}

}  // namespace

ComplexPhaseField apply_xq(const ComplexPhaseField& f) {
  if (f.rep != Representation::ZP)
    throw GridMismatchError("apply_xq: field must be in (z,p)");
  return {f.grid, Representation::ZP, apply_xq_raw(f.values, f.grid)};
}
ComplexPhaseField apply_pq(const ComplexPhaseField& f) {
  if (f.rep != Representation::ZP)
    throw GridMismatchError("apply_pq: field must be in (z,p)");
  return {f.grid, Representation::ZP, apply_pq_raw(f.values, f.grid)};
}
ComplexPhaseField apply_xq(const RealPhaseField& f) {
  return apply_xq(ComplexPhaseField{f.grid, Representation::ZP,
                                    f.values.cast<Complex>()});
}
ComplexPhaseField apply_pq(const RealPhaseField& f) {
  return apply_pq(ComplexPhaseField{f.grid, Representation::ZP,
                                    f.values.cast<Complex>()});
}

// ---- expression tree ----

struct QuantumOperatorExpr::Node {
  enum class Tag { XQ, PQ, Scale, Add, Mul, Sym, VXQ, HQ } tag;
  Real coefficient = 1;
  std::vector<QuantumOperatorExpr> children;
  std::optional<Potential> potential;
};

QuantumOperatorExpr QuantumOperatorExpr::xq() {
  return QuantumOperatorExpr(std::make_shared<Node>(Node{Node::Tag::XQ}));
}
QuantumOperatorExpr QuantumOperatorExpr::pq() {
  return QuantumOperatorExpr(std::make_shared<Node>(Node{Node::Tag::PQ}));
}
QuantumOperatorExpr QuantumOperatorExpr::scale(Real c, QuantumOperatorExpr e) {
  auto n = std::make_shared<Node>(Node{Node::Tag::Scale});
  n->coefficient = c;
  n->children.push_back(std::move(e));
  return QuantumOperatorExpr(n);
}
QuantumOperatorExpr QuantumOperatorExpr::add(QuantumOperatorExpr a,
                                             QuantumOperatorExpr b) {
  auto n = std::make_shared<Node>(Node{Node::Tag::Add});
  n->children = {std::move(a), std::move(b)};
  return QuantumOperatorExpr(n);
}
QuantumOperatorExpr QuantumOperatorExpr::mul(QuantumOperatorExpr a,
                                             QuantumOperatorExpr b) {
  auto n = std::make_shared<Node>(Node{Node::Tag::Mul});
  n->children = {std::move(a), std::move(b)};
  return QuantumOperatorExpr(n);
}
QuantumOperatorExpr QuantumOperatorExpr::sym(
    std::vector<QuantumOperatorExpr> factors) {
  if (factors.empty()) throw UsageError("sym() needs at least one factor");
  auto n = std::make_shared<Node>(Node{Node::Tag::Sym});
  n->children = std::move(factors);
  return QuantumOperatorExpr(n);
}
QuantumOperatorExpr QuantumOperatorExpr::potential_of_xq(Potential v) {
  auto n = std::make_shared<Node>(Node{Node::Tag::VXQ});
  n->potential = std::move(v);
  return QuantumOperatorExpr(n);
}
QuantumOperatorExpr QuantumOperatorExpr::hq(Potential v) {
  auto n = std::make_shared<Node>(Node{Node::Tag::HQ});
  n->potential = std::move(v);
  return QuantumOperatorExpr(n);
}

QuantumOperatorExpr QuantumOperatorExpr::symmetrized_monomial(int zpow,
                                                              int ppow) {
  if (zpow + ppow < 1)
    throw UsageError("symmetrized_monomial needs total degree >= 1");
  std::vector<QuantumOperatorExpr> factors;
  for (int i = 0; i < zpow; ++i) factors.push_back(xq());
  for (int i = 0; i < ppow; ++i) factors.push_back(pq());
  return sym(std::move(factors));
}

std::vector<QuantumOperatorExpr> QuantumOperatorExpr::mul_chain_factors()
    const {
  if (node_->tag != Node::Tag::Mul) return {*this};
  std::vector<QuantumOperatorExpr> out;
  for (const auto& child : node_->children)
    for (auto& f : child.mul_chain_factors()) out.push_back(std::move(f));
  return out;
}

bool QuantumOperatorExpr::hermitian() const {
  const Node& n = *node_;
  switch (n.tag) {
    case Node::Tag::XQ:
    case Node::Tag::PQ:
    case Node::Tag::VXQ:
    case Node::Tag::HQ:
      return true;
    case Node::Tag::Scale:
      return n.children[0].hermitian();
    case Node::Tag::Add:
      return n.children[0].hermitian() && n.children[1].hermitian();
    case Node::Tag::Mul:
      // A*A for Hermitian A stays Hermitian; general ordered products do not.
      return n.children[0].hermitian() &&
             n.children[0].str() == n.children[1].str();
    case Node::Tag::Sym:
      return std::all_of(n.children.begin(), n.children.end(),
                         [](const auto& c) { return c.hermitian(); });
  }
  return false;
}

std::string QuantumOperatorExpr::str() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(12);
  switch (n.tag) {
    case Node::Tag::XQ:
      return "XQ";
    case Node::Tag::PQ:
      return "PQ";
    case Node::Tag::Scale:
      os << "scale(" << n.coefficient << "," << n.children[0].str() << ")";
      return os.str();
    case Node::Tag::Add:
      return "add(" + n.children[0].str() + "," + n.children[1].str() + ")";
    case Node::Tag::Mul:
      return "mul(" + n.children[0].str() + "," + n.children[1].str() + ")";
    case Node::Tag::Sym: {
      std::string s = "sym(";
      for (size_t i = 0; i < n.children.size(); ++i)
        s += (i ? "," : "") + n.children[i].str();
      return s + ")";
    }
    case Node::Tag::VXQ:
    case Node::Tag::HQ: {
      const auto& p = n.potential->params();
      os << (n.tag == Node::Tag::VXQ ? "VX(" : "HQ(");
      switch (n.potential->kind()) {
        case Potential::Kind::Harmonic:
          os << "harmonic";
          break;
        case Potential::Kind::Quartic:
          os << "quartic";
          break;
        case Potential::Kind::DoubleWell:
          os << "double_well";
          break;
        case Potential::Kind::GaussianBarrier:
          os << "gaussian_barrier";
          break;
      }
      for (Real v : p) os << " " << v;
      os << ")";
      return os.str();
    }
  }
  return "?";
}

CArray QuantumOperatorExpr::apply(const CArray& field,
                                  const GridSpec& g) const {
  const Node& n = *node_;
  switch (n.tag) {
    case Node::Tag::XQ:
      return apply_xq_raw(field, g);
    case Node::Tag::PQ:
      return apply_pq_raw(field, g);
    case Node::Tag::Scale:
      return n.coefficient * n.children[0].apply(field, g);
    case Node::Tag::Add:
      return n.children[0].apply(field, g) + n.children[1].apply(field, g);
    case Node::Tag::Mul:
      return n.children[0].apply(n.children[1].apply(field, g), g);
    case Node::Tag::Sym: {
      // Average over the distinct orderings of the factor multiset.
      std::vector<int> order(n.children.size());
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::string> keys;
      for (const auto& c : n.children) keys.push_back(c.str());
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return keys[a] < keys[b]; });
      CArray acc = CArray::Zero(field.rows(), field.cols());
      int count = 0;
      do {
        CArray v = field;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
          v = n.children[*it].apply(v, g);
        acc += v;
        ++count;
      } while (std::next_permutation(
          order.begin(), order.end(),
          [&](int a, int b) { return keys[a] < keys[b]; }));
      return acc / count;
    }
    case Node::Tag::VXQ:
      return apply_vxq_raw(field, g, *n.potential);
    case Node::Tag::HQ:
      return apply_hq_raw(field, g, *n.potential);
  }
  throw Error("corrupt expression tree");
}

CMatrix QuantumOperatorExpr::matrix(const GridSpec& g) const {
  const Node& n = *node_;
  const int nz = g.n_z;
  switch (n.tag) {
    case Node::Tag::XQ: {
      CMatrix m = CMatrix::Zero(nz, nz);
      for (int i = 0; i < nz; ++i) m(i, i) = g.x(i);
      return m;
    }
    case Node::Tag::PQ: {
      CMatrix u(nz, nz);
      const Real scale = std::sqrt(g.dz() * g.dk() / (2 * pi));
      for (int l = 0; l < nz; ++l)
        for (int i = 0; i < nz; ++i)
          u(l, i) = std::polar(scale, -g.k(l) * g.x(i));
      CVector diag(nz);
      for (int l = 0; l < nz; ++l) diag(l) = g.hbar * g.k(l);
      return u.adjoint() * (diag.asDiagonal() * u);
    }
    case Node::Tag::Scale:
      return n.coefficient * n.children[0].matrix(g);
    case Node::Tag::Add:
      return n.children[0].matrix(g) + n.children[1].matrix(g);
    case Node::Tag::Mul:
      return n.children[0].matrix(g) * n.children[1].matrix(g);
    case Node::Tag::Sym: {
      std::vector<int> order(n.children.size());
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::string> keys;
      for (const auto& c : n.children) keys.push_back(c.str());
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return keys[a] < keys[b]; });
      CMatrix acc = CMatrix::Zero(nz, nz);
      int count = 0;
      do {
        CMatrix v = CMatrix::Identity(nz, nz);
        for (int idx : order) v = v * n.children[idx].matrix(g);
        acc += v;
        ++count;
      } while (std::next_permutation(
          order.begin(), order.end(),
          [&](int a, int b) { return keys[a] < keys[b]; }));
      return acc / count;
    }
    case Node::Tag::VXQ: {
      CMatrix m = CMatrix::Zero(nz, nz);
      for (int i = 0; i < nz; ++i) m(i, i) = (*n.potential)(g.x(i));
      return m;
    }
    case Node::Tag::HQ:
      return hamiltonian_matrix(g, *n.potential).cast<Complex>();
  }
  throw Error("corrupt expression tree");
}

// ---- parser ----

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c))
      throw UsageError("operator parse error: expected '" + std::string(1, c) +
                       "' at offset " + std::to_string(pos));
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) throw UsageError("operator parse error at offset " +
                                       std::to_string(pos));
    return s.substr(start, pos - start);
  }
  Real number() {
    skip_ws();
    size_t used = 0;
    Real v = 0;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw UsageError("operator parse error: number expected at offset " +
                       std::to_string(pos));
    }
    pos += used;
    return v;
  }

  Potential potential_literal() {
    const std::string kind = ident();
    std::vector<Real> params;
    skip_ws();
    while (pos < s.size() && s[pos] != ')') {
      params.push_back(number());
      skip_ws();
    }
    auto need = [&](size_t n) {
      if (params.size() != n)
        throw UsageError("operator parse error: potential '" + kind +
                         "' takes " + std::to_string(n) + " parameters");
    };
    if (kind == "harmonic") {
      need(1);
      return Potential::harmonic(params[0]);
    }
    if (kind == "quartic") {
      need(2);
      return Potential::quartic(params[0], params[1]);
    }
    if (kind == "double_well") {
      need(2);
      return Potential::double_well(params[0], params[1]);
    }
    if (kind == "gaussian_barrier") {
      if (params.size() < 3)
        throw UsageError("gaussian_barrier needs height width centers...");
      return Potential::gaussian_barrier(
          params[0], params[1],
          std::vector<Real>(params.begin() + 2, params.end()));
    }
    throw UsageError("unknown potential in operator expression: " + kind);
  }

  QuantumOperatorExpr expr();
};

QuantumOperatorExpr Parser::expr() {
    const std::string head = ident();
    if (head == "XQ") return QuantumOperatorExpr::xq();
    if (head == "PQ") return QuantumOperatorExpr::pq();
    if (head == "scale") {
      expect('(');
      Real c = number();
      expect(',');
      auto e = expr();
      expect(')');
      return QuantumOperatorExpr::scale(c, std::move(e));
    }
    if (head == "add" || head == "mul") {
      expect('(');
      auto a = expr();
      expect(',');
      auto b = expr();
      expect(')');
      return head == "add" ? QuantumOperatorExpr::add(std::move(a), std::move(b))
                           : QuantumOperatorExpr::mul(std::move(a), std::move(b));
    }
    if (head == "sym") {
      expect('(');
      std::vector<QuantumOperatorExpr> factors;
      factors.push_back(expr());
      while (consume(',')) factors.push_back(expr());
      expect(')');
      // sym over a single ordered product symmetrizes its factor list,
      // so sym(mul(XQ,PQ)) == sym(XQ,PQ).
      if (factors.size() == 1) return QuantumOperatorExpr::sym(factors[0].mul_chain_factors());
      return QuantumOperatorExpr::sym(std::move(factors));
    }
    if (head == "VX") {
      expect('(');
      Potential v = potential_literal();
      expect(')');
      return QuantumOperatorExpr::potential_of_xq(std::move(v));
    }
    if (head == "HQ") {
      expect('(');
      Potential v = potential_literal();
      expect(')');
      return QuantumOperatorExpr::hq(std::move(v));
    }
    throw UsageError("operator parse error: unknown head '" + head + "'");
}

}  // namespace

QuantumOperatorExpr QuantumOperatorExpr::parse(const std::string& text) {
  Parser p{text};
  QuantumOperatorExpr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw UsageError("operator parse error: trailing input at offset " +
                     std::to_string(p.pos));
  return e;
}

// ---- expectations ----

Complex quantum_expectation_complex(const RealPhaseField& psi_c,
                                    const QuantumOperatorExpr& expr) {
  const GridSpec& g = psi_c.grid;
  const CArray applied = expr.apply(psi_c.values.cast<Complex>(), g);
  const Complex val =
      (psi_c.values.cast<Complex>() * applied).sum() * g.cell_measure();
  return val;
}

Real quantum_expectation(const RealPhaseField& psi_c,
                         const QuantumOperatorExpr& expr) {
  const Complex val = quantum_expectation_complex(psi_c, expr);
  if (expr.hermitian() &&
      std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val.real())))
    throw HermiticityError("hermitian expectation has imaginary part " +
                           std::to_string(val.imag()));
  return val.real();
}

Real quantum_expectation(const ClassicalWaveFunction& psi_c,
                         const QuantumOperatorExpr& expr) {
  return quantum_expectation(psi_c.field, expr);
}

Real anticommutator_correlation(const RealPhaseField& psi_c,
                                const QuantumOperatorExpr& a,
                                const QuantumOperatorExpr& b) {
  const Complex ab = quantum_expectation_complex(
      psi_c, QuantumOperatorExpr::mul(a, b));
  const Complex ba = quantum_expectation_complex(
      psi_c, QuantumOperatorExpr::mul(b, a));
  const Complex val = 0.5 * (ab + ba);
  if (std::abs(val.imag()) > 1e-9 * std::max(1.0, std::abs(val.real())))
    throw HermiticityError("anticommutator has imaginary part " +
                           std::to_string(val.imag()));
  return val.real();
}

// ---- roughness identity ----

RoughnessDecomposition momentum_roughness_decomposition(
    const ProbabilityDensity& w) {
  const GridSpec& g = w.field.grid;
  RoughnessDecomposition out;
  out.p_cl_sq = classical_expectation(
      w, {[](Real, Real p) { return p * p; }, "p^2"});

  // Spectral d_z w.
  CArray v = w.field.values.cast<Complex>();
  spectral::z_to_k_inplace(v, g);
  for (int l = 0; l < g.n_z; ++l) v.row(l) *= Complex(0, g.k(l));
  spectral::k_to_z_inplace(v, g);
  const Array dw = v.real();

  const Real floor = 1e-13 * w.field.values.maxCoeff();
  Real rough = 0, excluded = 0;
  for (int j = 0; j < g.n_z; ++j)
    for (int a = 0; a < g.n_p; ++a) {
      const Real wv = w.field.values(j, a);
      if (wv < floor)
        excluded += wv;
      else
        rough += dw(j, a) * dw(j, a) / wv;
    }
  out.roughness = g.hbar * g.hbar / 16 * rough * g.cell_measure();
  out.excluded_mass = excluded * g.cell_measure();
  out.total = out.p_cl_sq + out.roughness;
  return out;
}

// ---- binned sequential measurement ----

BinningScheme BinningScheme::uniform(const GridSpec& g, int n_bins) {
  if (n_bins < 1) throw UsageError("binning needs at least one bin");
  BinningScheme b;
  const Real lo = -0.5 * g.z_extent, width = g.z_extent / n_bins;
  for (int i = 0; i <= n_bins; ++i) b.edges.push_back(lo + i * width);
  for (int i = 0; i < n_bins; ++i)
    b.representatives.push_back(lo + (i + 0.5) * width);
  return b;
}

SequentialCorrelation sequential_measurement_correlation(
    const CoarseDensityMatrix& rho, const BinningScheme& binning,
    const QuantumOperatorExpr& b) {
  const GridSpec& g = rho.grid;
  if (binning.edges.size() != binning.representatives.size() + 1)
    throw UsageError("malformed binning scheme");
  if (std::abs(binning.edges.front() + 0.5 * g.z_extent) > 1e-12 ||
      std::abs(binning.edges.back() - 0.5 * g.z_extent) > 1e-12)
    throw UsageError("binning must cover the x-domain");

  const CMatrix bmat = b.matrix(g);
  const CMatrix rho_op = rho.rho * rho.dx;  // trace-1 coefficient convention

  // Assign lattice sites to bins (half-open intervals).
  const int nb = binning.n_bins();
  std::vector<std::vector<int>> members(nb);
  for (int i = 0; i < g.n_z; ++i) {
    const Real x = g.x(i);
    const auto it = std::upper_bound(binning.edges.begin(), binning.edges.end(), x);
    int idx = int(it - binning.edges.begin()) - 1;
    idx = std::clamp(idx, 0, nb - 1);
    members[idx].push_back(i);
  }

  SequentialCorrelation out;
  out.bin_probabilities.resize(nb, 0.0);
  for (int alpha = 0; alpha < nb; ++alpha) {
    Real w_alpha = 0;
    for (int i : members[alpha]) w_alpha += rho_op(i, i).real();
    out.bin_probabilities[alpha] = w_alpha;
    if (w_alpha < 1e-12) {
      out.empty_bins.push_back(alpha);
      continue;
    }
    // Tr(Pi rho Pi B) = sum_{i,i' in alpha} rho(i,i') B(i',i)
    Complex tr = 0;
    for (int i : members[alpha])
      for (int i2 : members[alpha]) tr += rho_op(i, i2) * bmat(i2, i);
    out.value += binning.representatives[alpha] * tr.real();
  }
  return out;
}

}  // namespace zwitter

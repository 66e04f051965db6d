#include "censorlab/censors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace censorlab {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kClosureTol = 1e-8;
constexpr std::uint64_t kAdversarialSeed = 0x5eedc0de00000001ull;
constexpr std::uint64_t kCombinationSeed = 0x5eedc0de00000002ull;

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

/// U ~ phase * V for some |phase| = 1.
bool equal_up_to_phase(const Matrix& u, const Matrix& v, double tol) {
  const Complex overlap = (v.adjoint() * u).trace();
  const double mag = std::abs(overlap);
  if (mag < 1e-12) return false;
  const Complex phase = overlap / mag;
  return max_abs_diff(u, phase * v) <= tol;
}

bool in_group_up_to_phase(const std::vector<Matrix>& elements, const Matrix& u, double tol) {
  for (const Matrix& v : elements)
    if (equal_up_to_phase(u, v, tol)) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// TwirlGroup
// ---------------------------------------------------------------------------

TwirlGroup::TwirlGroup(std::vector<Matrix> unitaries, std::string label)
    : unitaries_(std::move(unitaries)), label_(std::move(label)) {
  require(!unitaries_.empty(), "TwirlGroup: unitary list must be nonempty");
  const Eigen::Index d = unitaries_.front().rows();
  for (const Matrix& u : unitaries_) {
    require(u.rows() == d && u.cols() == d, "TwirlGroup: all elements must share one dimension");
    require(max_abs_diff(u.adjoint() * u, identity(static_cast<int>(d))) <= kUnitaryTol,
            "TwirlGroup: element is not unitary within 1e-10");
  }
  // Finite-group axioms up to global phase (projective representation).
  for (const Matrix& u : unitaries_) {
    require(in_group_up_to_phase(unitaries_, u.adjoint(), kClosureTol),
            "TwirlGroup: not closed under inverses (label " + label_ + ")");
    for (const Matrix& v : unitaries_)
      require(in_group_up_to_phase(unitaries_, u * v, kClosureTol),
              "TwirlGroup: not closed under products (label " + label_ + ")");
  }
}

// ---------------------------------------------------------------------------
// CensorSpec
// ---------------------------------------------------------------------------

std::string CensorSpec::describe() const {
  std::ostringstream out;
  if (const auto* d = std::get_if<Dephasing>(&kind)) {
    out << "dephasing(" << d->dim << ")";
  } else if (const auto* t = std::get_if<Twirl>(&kind)) {
    out << "twirl(" << t->group.label() << ")";
  } else if (const auto* c = std::get_if<CqCensor>(&kind)) {
    out << "cq(" << c->x_dim << "x" << c->y_dim << ")";
  } else {
    out << "replacement(dim " << std::get<Replacement>(kind).target.dim() << ")";
  }
  return out.str();
}

DimProfile CensorSpec::profile() const {
  if (const auto* d = std::get_if<Dephasing>(&kind)) return DimProfile({d->dim});
  if (const auto* t = std::get_if<Twirl>(&kind)) return DimProfile({t->group.dim()});
  if (const auto* c = std::get_if<CqCensor>(&kind)) return DimProfile({c->x_dim, c->y_dim});
  return std::get<Replacement>(kind).target.profile();
}

// ---------------------------------------------------------------------------
// Censor constructors
// ---------------------------------------------------------------------------

KrausChannel dephasing_channel(int dim) {
  require(dim >= 2, "dephasing_channel: dim must be at least 2");
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(dim));
  for (int x = 0; x < dim; ++x) kraus.push_back(basis_projector(dim, x));
  return KrausChannel(std::move(kraus), DimProfile({dim}), DimProfile({dim}));
}

KrausChannel twirl_channel(const TwirlGroup& group) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(group.order()));
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(group.order()));
  for (const Matrix& u : group.unitaries()) kraus.push_back(scale * u);
  const DimProfile profile({group.dim()});
  return KrausChannel(std::move(kraus), profile, profile);
}

KrausChannel cq_censor_channel(int x_dim, int y_dim) {
  require(x_dim >= 2, "cq_censor_channel: x_dim must be at least 2");
  require(y_dim >= 1, "cq_censor_channel: y_dim must be positive");
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(x_dim));
  const Matrix iy = identity(y_dim);
  for (int x = 0; x < x_dim; ++x) kraus.push_back(kron(basis_projector(x_dim, x), iy));
  const DimProfile profile({x_dim, y_dim});
  return KrausChannel(std::move(kraus), profile, profile);
}

KrausChannel replacement_channel(const DensityOperator& target) {
  // rho -> Tr(rho) sigma via Kraus set {sqrt(lambda_k) |v_k><i|}: complete
  // because sum_i |i><i| sum_k lambda_k = I.
  const int d = target.dim();
  const EigResult eig = eig_hermitian(target.matrix(), std::max(target.tolerance(), 1e-9));
  std::vector<Matrix> kraus;
  for (int k = 0; k < d; ++k) {
    const double lambda = std::max(0.0, eig.values(k));
    if (lambda <= 0.0) continue;
    for (int i = 0; i < d; ++i)
      kraus.push_back(std::sqrt(lambda) * eig.vectors.col(k) * basis_ket(d, i).adjoint());
  }
  return KrausChannel(std::move(kraus), target.profile(), target.profile());
}

KrausChannel censor_channel(const CensorSpec& spec) {
  if (const auto* d = std::get_if<CensorSpec::Dephasing>(&spec.kind))
    return dephasing_channel(d->dim);
  if (const auto* t = std::get_if<CensorSpec::Twirl>(&spec.kind)) return twirl_channel(t->group);
  if (const auto* c = std::get_if<CensorSpec::CqCensor>(&spec.kind))
    return cq_censor_channel(c->x_dim, c->y_dim);
  return replacement_channel(std::get<CensorSpec::Replacement>(spec.kind).target);
}

std::vector<DensityOperator> density_basis(int dim) {
  require(dim >= 1, "density_basis: dim must be positive");
  std::vector<DensityOperator> basis;
  const DimProfile profile({dim});
  for (int i = 0; i < dim; ++i)
    basis.emplace_back(basis_projector(dim, i), profile);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      Vector plus = (basis_ket(dim, i) + basis_ket(dim, j)) / std::sqrt(2.0);
      Vector imag = (basis_ket(dim, i) + Complex(0.0, 1.0) * basis_ket(dim, j)) / std::sqrt(2.0);
      basis.emplace_back(hermitian_part(plus * plus.adjoint()), profile);
      basis.emplace_back(hermitian_part(imag * imag.adjoint()), profile);
    }
  }
  return basis;
}

GeneratorSet authorized_generators(const CensorSpec& spec) {
  if (const auto* d = std::get_if<CensorSpec::Dephasing>(&spec.kind)) {
    std::vector<DensityOperator> gens;
    for (int x = 0; x < d->dim; ++x)
      gens.emplace_back(basis_projector(d->dim, x), DimProfile({d->dim}));
    return GeneratorSet(std::move(gens));
  }
  if (const auto* t = std::get_if<CensorSpec::Twirl>(&spec.kind)) {
    // Twirled density basis spans exactly the twirl-invariant operators.
    const KrausChannel twirl = twirl_channel(t->group);
    std::vector<DensityOperator> gens;
    for (const DensityOperator& b : density_basis(t->group.dim()))
      gens.push_back(apply(twirl, b));
    return GeneratorSet(std::move(gens));
  }
  if (const auto* c = std::get_if<CensorSpec::CqCensor>(&spec.kind)) {
    const DimProfile profile({c->x_dim, c->y_dim});
    std::vector<DensityOperator> gens;
    for (int x = 0; x < c->x_dim; ++x)
      for (const DensityOperator& y : density_basis(c->y_dim))
        gens.emplace_back(kron(basis_projector(c->x_dim, x), y.matrix()), profile);
    return GeneratorSet(std::move(gens));
  }
  return GeneratorSet({std::get<CensorSpec::Replacement>(spec.kind).target});
}

std::optional<FreeSetOracle> natural_free_oracle(const CensorSpec& spec) {
  if (const auto* d = std::get_if<CensorSpec::Dephasing>(&spec.kind))
    return FreeSetOracle::incoherent(d->dim);
  if (const auto* t = std::get_if<CensorSpec::Twirl>(&spec.kind))
    return FreeSetOracle::twirl_invariant(t->group);
  if (const auto* c = std::get_if<CensorSpec::CqCensor>(&spec.kind))
    return FreeSetOracle::separable_ppt(DimProfile({c->x_dim, c->y_dim}));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Named groups
// ---------------------------------------------------------------------------

TwirlGroup iz_group() {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return TwirlGroup({identity(2), z}, "iz");
}

TwirlGroup pauli_group_1q() {
  Matrix x = Matrix::Zero(2, 2), y = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return TwirlGroup({identity(2), x, y, z}, "pauli1");
}

TwirlGroup cyclic_shift_group(int dim) {
  require(dim >= 2, "cyclic_shift_group: dim must be at least 2");
  Matrix shift = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) shift((i + 1) % dim, i) = 1.0;
  std::vector<Matrix> elements;
  Matrix power = identity(dim);
  for (int k = 0; k < dim; ++k) {
    elements.push_back(power);
    power = shift * power;
  }
  return TwirlGroup(std::move(elements), "cyclic" + std::to_string(dim));
}

TwirlGroup named_group(const std::string& name) {
  if (name == "iz") return iz_group();
  if (name == "pauli1") return pauli_group_1q();
  if (name.rfind("cyclic", 0) == 0 && name.size() > 6)
    return cyclic_shift_group(std::stoi(name.substr(6)));
  throw std::invalid_argument("named_group: unknown group '" + name + "'");
}

// ---------------------------------------------------------------------------
// RD / RC verifiers
// ---------------------------------------------------------------------------

namespace {

/// Fixed, versioned adversarial inputs for the resource-destroying check.
std::vector<Matrix> adversarial_inputs(int dim) {
  std::vector<Matrix> inputs;
  // Maximally coherent state.
  Vector coherent = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  inputs.push_back(coherent * coherent.adjoint());
  // The four Bell states whenever the space splits as 2 (x) 2.
  if (dim == 4) {
    const Vector k00 = kron(basis_ket(2, 0), basis_ket(2, 0));
    const Vector k01 = kron(basis_ket(2, 0), basis_ket(2, 1));
    const Vector k10 = kron(basis_ket(2, 1), basis_ket(2, 0));
    const Vector k11 = kron(basis_ket(2, 1), basis_ket(2, 1));
    const double s = 1.0 / std::sqrt(2.0);
    for (const Vector& bell :
         {Vector(s * (k00 + k11)), Vector(s * (k00 - k11)), Vector(s * (k01 + k10)),
          Vector(s * (k01 - k10))})
      inputs.push_back(bell * bell.adjoint());
  }
  // Deterministic random pure states.
  for (int i = 0; i < 8; ++i)
    inputs.push_back(random_pure(dim, kAdversarialSeed + static_cast<std::uint64_t>(i)).matrix());
  return inputs;
}

}  // namespace

DestroyReport verify_resource_destroying(const KrausChannel& ch, const FreeSetOracle& free,
                                         int samples, std::uint64_t seed) {
  require(free.profile().total() == ch.out_dim(),
          "verify_resource_destroying: oracle does not match channel output");
  DestroyReport report;

  std::vector<Matrix> inputs = adversarial_inputs(ch.in_dim());
  for (int s = 0; s < samples; ++s)
    inputs.push_back(random_density(ch.in_dim(), seed + static_cast<std::uint64_t>(s)).matrix());

  for (const Matrix& input : inputs) {
    DensityOperator in_state(hermitian_part(input), ch.in_profile(), 1e-8);
    DensityOperator out_state = apply(ch, in_state);
    // Reinterpret the output under the oracle's factorization.
    DensityOperator for_oracle(out_state.matrix(), free.profile(), 1e-8);
    const MembershipVerdict v = membership(free, for_oracle);
    ++report.checked;
    switch (v.verdict) {
      case Verdict::Member: ++report.member; break;
      case Verdict::Inconclusive: ++report.inconclusive; break;
      case Verdict::NonMember:
        ++report.nonmember;
        if (!report.witness.has_value()) {
          report.witness = input;
          report.witness_reason = v.reason;
        }
        break;
    }
  }
  report.pass = report.member == report.checked;
  return report;
}

PreserveReport verify_freeness_preserving(const KrausChannel& ch,
                                          const GeneratorSet& subspace_gens, double tol) {
  require(subspace_gens.profile().total() == ch.in_dim(),
          "verify_freeness_preserving: generator dimension does not match channel");
  PreserveReport report;

  auto check = [&](const Matrix& state) {
    const double dist = trace_distance(apply_matrix(ch, state), state);
    report.max_distance = std::max(report.max_distance, dist);
    ++report.checked;
    if (dist > tol && !report.witness.has_value()) report.witness = state;
  };

  for (const DensityOperator& g : subspace_gens.states()) check(g.matrix());

  // Condition (ii) must hold on the affine span, not only the generators:
  // linearity makes generator checks sufficient in exact arithmetic, but
  // combination checks catch numerical drift.
  const int n = subspace_gens.size();
  GaussianStream stream(kCombinationSeed);
  const DimProfile& profile = subspace_gens.profile();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd t(n);
    for (int j = 0; j < n; ++j) t(j) = stream.next();
    t.array() += (1.0 - t.sum()) / static_cast<double>(n);  // affine shift
    Matrix combo = Matrix::Zero(ch.in_dim(), ch.in_dim());
    for (int j = 0; j < n; ++j)
      combo += Complex(t(j), 0.0) * subspace_gens.states()[static_cast<std::size_t>(j)].matrix();
    combo = hermitian_part(combo);
    if (!is_density(combo, profile, 1e-9).ok()) {
      ++report.skipped;
      continue;
    }
    check(combo);
  }

  report.pass = report.max_distance <= tol;
  return report;
}

}  // namespace censorlab

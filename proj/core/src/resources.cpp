#include "censorlab/resources.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace censorlab {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

/// (1/|G|) sum_a U_a m U_a^dag without building a channel.
Matrix twirl_average(const TwirlGroup& group, const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const Matrix& u : group.unitaries()) out += u * m * u.adjoint();
  return out / static_cast<double>(group.order());
}

/// Zeroes every entry whose row and column digits differ on any of the
/// listed subsystems (projection onto that block-diagonal pattern).
Matrix zero_block_offdiagonal(const Matrix& m, const DimProfile& profile,
                              const std::vector<int>& subsystems) {
  Matrix out = m;
  const int d = profile.total();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int s : subsystems)
        if (profile.digit(r, s) != profile.digit(c, s)) {
          out(r, c) = Complex(0.0, 0.0);
          break;
        }
  return out;
}

Matrix embed_unitary(const Matrix& u, const DimProfile& joint, int first_subsystem,
                     int subsystem_count) {
  int before = 1, after = 1;
  for (int k = 0; k < first_subsystem; ++k) before *= joint.dim(k);
  for (int k = first_subsystem + subsystem_count; k < joint.count(); ++k) after *= joint.dim(k);
  return kron(kron(identity(before), u), identity(after));
}

/// Least-squares stack: columns are [Re vec(sigma_a); Im vec(sigma_a); 1],
/// the final row carrying the unit-sum constraint.
void build_hull_system(const DensityOperator& rho, const GeneratorSet& gens,
                       Eigen::MatrixXd& a, Eigen::VectorXd& b) {
  const int d = rho.dim();
  const int n = gens.size();
  const int rows = 2 * d * d + 1;
  a.resize(rows, n);
  b.resize(rows);
  for (int j = 0; j < n; ++j) {
    const Vector v = vec(gens.states()[static_cast<std::size_t>(j)].matrix());
    a.col(j).head(d * d) = v.real();
    a.col(j).segment(d * d, d * d) = v.imag();
    a(rows - 1, j) = 1.0;
  }
  const Vector v = vec(rho.matrix());
  b.head(d * d) = v.real();
  b.segment(d * d, d * d) = v.imag();
  b(rows - 1) = 1.0;
}

struct HullFit {
  Eigen::VectorXd coefficients;
  double reconstruction_error = 0.0;  // max-entry |sum t sigma - rho|
  double sum_error = 0.0;             // |sum t - 1|
};

HullFit evaluate_fit(const Eigen::VectorXd& t, const DensityOperator& rho,
                     const GeneratorSet& gens) {
  Matrix recon = Matrix::Zero(rho.dim(), rho.dim());
  for (int j = 0; j < gens.size(); ++j)
    recon += Complex(t(j), 0.0) * gens.states()[static_cast<std::size_t>(j)].matrix();
  HullFit fit;
  fit.coefficients = t;
  fit.reconstruction_error = max_abs_diff(recon, rho.matrix());
  fit.sum_error = std::abs(t.sum() - 1.0);
  return fit;
}

/// Lawson-Hanson active-set non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double w_tol = 1e-12 * std::max(1.0, b.norm());
  const int max_outer = 3 * n + 30;

  auto solve_passive = [&](const std::vector<bool>& in) {
    int m = 0;
    for (bool p : in) m += p ? 1 : 0;
    Eigen::MatrixXd ap(a.rows(), m);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (in[static_cast<std::size_t>(j)]) {
        ap.col(static_cast<Eigen::Index>(cols.size())) = a.col(j);
        cols.push_back(j);
      }
    const Eigen::VectorXd zp =
        ap.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zp(static_cast<Eigen::Index>(k));
    return z;
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * t);
    int best = -1;
    double best_w = w_tol;
    for (int j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best = j;
        best_w = w(j);
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z = solve_passive(passive);
    for (int inner = 0; inner < max_outer; ++inner) {
      double min_z = 0.0;
      for (int j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)]) min_z = std::min(min_z, z(j));
      if (min_z > -1e-14) break;
      double alpha = 1.0;
      for (int j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 1e-14) {
          const double denom = t(j) - z(j);
          if (denom > 0) alpha = std::min(alpha, t(j) / denom);
        }
      t += alpha * (z - t);
      for (int j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && t(j) <= 1e-14) {
          passive[static_cast<std::size_t>(j)] = false;
          t(j) = 0.0;
        }
      z = solve_passive(passive);
    }
    t = z.cwiseMax(0.0);
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Verdicts and generator sets
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NonMember: return "NonMember";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

GeneratorSet::GeneratorSet(std::vector<DensityOperator> states) : states_(std::move(states)) {
  require(!states_.empty(), "GeneratorSet: state list must be nonempty");
  for (const DensityOperator& s : states_)
    require(s.profile() == states_.front().profile(),
            "GeneratorSet: all states must share one profile");
}

// ---------------------------------------------------------------------------
// FreeSetOracle
// ---------------------------------------------------------------------------

FreeSetOracle::FreeSetOracle(Kind kind, DimProfile profile, double tol)
    : kind_(kind), profile_(std::move(profile)), tol_(tol) {
  require(tol_ >= 0.0, "FreeSetOracle: tolerance must be nonnegative");
}

FreeSetOracle FreeSetOracle::incoherent(int dim, double tol) {
  require(dim >= 1, "FreeSetOracle::incoherent: dim must be positive");
  return FreeSetOracle(Kind::Incoherent, DimProfile({dim}), tol);
}

FreeSetOracle FreeSetOracle::twirl_invariant(TwirlGroup group, double tol) {
  FreeSetOracle o(Kind::TwirlInvariant, DimProfile({group.dim()}), tol);
  o.group_ = std::make_shared<const TwirlGroup>(std::move(group));
  return o;
}

FreeSetOracle FreeSetOracle::classical_quantum(int x_dim, int y_dim, double tol) {
  require(x_dim >= 2, "FreeSetOracle::classical_quantum: x_dim must be at least 2");
  require(y_dim >= 1, "FreeSetOracle::classical_quantum: y_dim must be positive");
  FreeSetOracle o(Kind::ClassicalQuantum, DimProfile({x_dim, y_dim}), tol);
  o.x_dim_ = x_dim;
  o.y_dim_ = y_dim;
  return o;
}

FreeSetOracle FreeSetOracle::separable_ppt(DimProfile profile, double tol) {
  require(profile.count() >= 2, "FreeSetOracle::separable_ppt: profile needs at least two factors");
  return FreeSetOracle(Kind::SeparablePPT, std::move(profile), tol);
}

namespace {
DimProfile joint_profile_of(const std::vector<FreeSetOracle>& factors) {
  require(!factors.empty(), "FreeSetOracle: composite needs at least one factor");
  DimProfile joint = factors.front().profile();
  for (std::size_t i = 1; i < factors.size(); ++i)
    joint = DimProfile::concat(joint, factors[i].profile());
  return joint;
}
}  // namespace

FreeSetOracle FreeSetOracle::affine_composite(std::vector<FreeSetOracle> factors, double tol) {
  FreeSetOracle o(Kind::AffineComposite, joint_profile_of(factors), tol);
  o.factors_ = std::make_shared<const std::vector<FreeSetOracle>>(std::move(factors));
  return o;
}

FreeSetOracle FreeSetOracle::convex_composite(std::vector<FreeSetOracle> factors, double tol) {
  FreeSetOracle o(Kind::ConvexComposite, joint_profile_of(factors), tol);
  o.factors_ = std::make_shared<const std::vector<FreeSetOracle>>(std::move(factors));
  return o;
}

const std::vector<FreeSetOracle>& FreeSetOracle::factors() const {
  require(factors_ != nullptr, "FreeSetOracle: not a composite oracle");
  return *factors_;
}

const TwirlGroup& FreeSetOracle::group() const {
  require(group_ != nullptr, "FreeSetOracle: not a twirl-invariant oracle");
  return *group_;
}

std::string FreeSetOracle::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Incoherent: out << "incoherent(" << profile_.total() << ")"; break;
    case Kind::TwirlInvariant:
      out << "twirl_invariant(" << group_->label() << ")";
      break;
    case Kind::ClassicalQuantum: out << "classical_quantum(" << x_dim_ << "x" << y_dim_ << ")"; break;
    case Kind::SeparablePPT: {
      out << "separable_ppt(";
      for (int k = 0; k < profile_.count(); ++k) out << (k ? "x" : "") << profile_.dim(k);
      out << ")";
      break;
    }
    case Kind::AffineComposite:
    case Kind::ConvexComposite: {
      out << (kind_ == Kind::AffineComposite ? "affine_composite[" : "convex_composite[");
      for (std::size_t i = 0; i < factors_->size(); ++i)
        out << (i ? ", " : "") << (*factors_)[i].describe();
      out << "]";
      break;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Structural predicates
// ---------------------------------------------------------------------------

double max_offdiagonal(const Matrix& m) {
  double v = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (r != c) v = std::max(v, std::abs(m(r, c)));
  return v;
}

double max_block_offdiagonal(const Matrix& m, const DimProfile& profile,
                             const std::vector<int>& block_subsystems) {
  double v = 0.0;
  const int d = profile.total();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      for (int s : block_subsystems)
        if (profile.digit(r, s) != profile.digit(c, s)) {
          v = std::max(v, std::abs(m(r, c)));
          break;
        }
  return v;
}

std::pair<double, std::vector<int>> min_ppt_eigenvalue(const Matrix& m,
                                                       const DimProfile& profile) {
  require(profile.count() >= 2, "min_ppt_eigenvalue: need at least two factors");
  double min_eig = std::numeric_limits<double>::infinity();
  std::vector<int> worst_cut;
  // Transposing a set or its complement yields the same spectrum, so factor 0
  // can stay untransposed: subsets of {1, ..., N-1}.
  const int n = profile.count();
  for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> cut;
    for (int k = 1; k < n; ++k)
      if (mask & (1u << (k - 1))) cut.push_back(k);
    const Matrix pt = partial_transpose(m, profile, cut);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(pt), Eigen::EigenvaluesOnly);
    const double e = solver.eigenvalues().minCoeff();
    if (e < min_eig) {
      min_eig = e;
      worst_cut = cut;
    }
  }
  return {min_eig, worst_cut};
}

std::optional<Matrix> free_set_projection(const FreeSetOracle& oracle, const Matrix& m) {
  const DimProfile& joint = oracle.profile();
  const std::vector<FreeSetOracle> single{oracle};
  const std::vector<FreeSetOracle>& factors = oracle.is_composite() ? oracle.factors() : single;

  Matrix out = m;
  int base = 0;
  for (const FreeSetOracle& f : factors) {
    switch (f.kind()) {
      case FreeSetOracle::Kind::Incoherent:
      case FreeSetOracle::Kind::ClassicalQuantum:
        // Both project by erasing coherences in the factor's first subsystem
        // (the whole factor for incoherent, the X part for classical-quantum).
        out = zero_block_offdiagonal(out, joint, {base});
        break;
      case FreeSetOracle::Kind::TwirlInvariant: {
        require(f.group().dim() == f.profile().total(),
                "free_set_projection: group dimension mismatch");
        Matrix avg = Matrix::Zero(out.rows(), out.cols());
        for (const Matrix& u : f.group().unitaries()) {
          const Matrix e = embed_unitary(u, joint, base, f.profile().count());
          avg += e * out * e.adjoint();
        }
        out = avg / static_cast<double>(f.group().order());
        break;
      }
      default:
        return std::nullopt;  // no canonical projection for this factor kind
    }
    base += f.profile().count();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace {

MembershipVerdict member_verdict(std::string reason) {
  MembershipVerdict v;
  v.verdict = Verdict::Member;
  v.reason = std::move(reason);
  return v;
}

MembershipVerdict nonmember_verdict(std::string reason) {
  MembershipVerdict v;
  v.verdict = Verdict::NonMember;
  v.reason = std::move(reason);
  return v;
}

MembershipVerdict inconclusive_verdict(std::string reason) {
  MembershipVerdict v;
  v.verdict = Verdict::Inconclusive;
  v.reason = std::move(reason);
  return v;
}

MembershipVerdict threshold_verdict(double violation, double tol, const std::string& what) {
  std::ostringstream os;
  os << what << " = " << violation << (violation <= tol ? " <= " : " > ") << tol;
  MembershipVerdict v = violation <= tol ? member_verdict(os.str()) : nonmember_verdict(os.str());
  v.residual = violation;
  return v;
}

MembershipVerdict ppt_membership(const Matrix& m, const DimProfile& profile, double tol) {
  auto [min_eig, cut] = min_ppt_eigenvalue(m, profile);
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "partial transpose has negative eigenvalue " << min_eig;
    MembershipVerdict v = nonmember_verdict(os.str());
    v.pt_min_eigenvalue = min_eig;
    v.pt_cut = cut;
    return v;
  }
  if (profile.total() <= 6) {
    MembershipVerdict v = member_verdict("PPT holds across every bipartition (conclusive at this dimension)");
    v.pt_min_eigenvalue = min_eig;
    return v;
  }
  MembershipVerdict v =
      inconclusive_verdict("PPT holds but the dimension is above the conclusive range");
  v.pt_min_eigenvalue = min_eig;
  return v;
}

}  // namespace

MembershipVerdict membership(const FreeSetOracle& oracle, const DensityOperator& rho,
                             int sample_budget) {
  require(rho.dim() == oracle.profile().total(),
          "membership: state dimension does not match oracle");
  const double tol = oracle.tolerance();
  switch (oracle.kind()) {
    case FreeSetOracle::Kind::Incoherent:
      return threshold_verdict(max_offdiagonal(rho.matrix()), tol, "max off-diagonal magnitude");
    case FreeSetOracle::Kind::TwirlInvariant: {
      const double dist = trace_distance(twirl_average(oracle.group(), rho.matrix()), rho.matrix());
      return threshold_verdict(dist, tol, "trace distance to twirled state");
    }
    case FreeSetOracle::Kind::ClassicalQuantum:
      return threshold_verdict(max_block_offdiagonal(rho.matrix(), oracle.profile(), {0}), tol,
                               "max classical-register coherence");
    case FreeSetOracle::Kind::SeparablePPT:
      return ppt_membership(rho.matrix(), oracle.profile(), tol);
    case FreeSetOracle::Kind::AffineComposite:
    case FreeSetOracle::Kind::ConvexComposite:
      return composite_membership(oracle, rho, sample_budget);
  }
  return inconclusive_verdict("unknown oracle kind");
}

MembershipVerdict affine_hull_membership(const DensityOperator& rho, const GeneratorSet& gens,
                                         double tol) {
  require(rho.profile() == gens.profile(), "affine_hull_membership: profile mismatch");
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  build_hull_system(rho, gens, a, b);
  const Eigen::VectorXd t = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  const HullFit fit = evaluate_fit(t, rho, gens);

  MembershipVerdict v;
  v.hull_coefficients = fit.coefficients;
  v.residual = std::max(fit.reconstruction_error, fit.sum_error);
  if (fit.reconstruction_error <= tol && fit.sum_error <= tol) {
    v.verdict = Verdict::Member;
    v.reason = "affine combination found (least-squares residual " +
               std::to_string(fit.reconstruction_error) + ")";
  } else {
    v.verdict = Verdict::NonMember;
    v.reason = "no affine combination of the generators reproduces the state (best residual " +
               std::to_string(*v.residual) + ")";
  }
  return v;
}

MembershipVerdict convex_hull_membership(const DensityOperator& rho, const GeneratorSet& gens,
                                         double tol) {
  require(rho.profile() == gens.profile(), "convex_hull_membership: profile mismatch");
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  build_hull_system(rho, gens, a, b);
  const Eigen::VectorXd t = nnls(a, b);
  const HullFit fit = evaluate_fit(t, rho, gens);

  MembershipVerdict v;
  v.hull_coefficients = fit.coefficients;
  v.residual = std::max(fit.reconstruction_error, fit.sum_error);
  if (fit.reconstruction_error <= tol && fit.sum_error <= tol) {
    v.verdict = Verdict::Member;
    v.reason = "convex combination found (nonnegative least-squares residual " +
               std::to_string(fit.reconstruction_error) + ")";
  } else {
    v.verdict = Verdict::NonMember;
    v.reason = "no convex combination of the generators reproduces the state (best residual " +
               std::to_string(*v.residual) + ")";
  }
  return v;
}

MembershipVerdict composite_membership(const FreeSetOracle& oracle, const DensityOperator& rho,
                                       int sample_budget) {
  require(oracle.is_composite(), "composite_membership: oracle is not composite");
  require(rho.dim() == oracle.profile().total(),
          "composite_membership: state dimension does not match oracle");
  const DimProfile& joint = oracle.profile();
  const double tol = oracle.tolerance();
  const std::vector<FreeSetOracle>& factors = oracle.factors();

  // Factor a occupies a contiguous block of subsystem indices.
  std::vector<std::vector<int>> blocks;
  int base = 0;
  for (const FreeSetOracle& f : factors) {
    std::vector<int> block;
    for (int k = 0; k < f.profile().count(); ++k) block.push_back(base + k);
    base += f.profile().count();
    blocks.push_back(std::move(block));
  }

  // Marginal screen: a free joint state has free marginals, so a NonMember
  // marginal certifies a NonMember joint state.
  std::vector<MembershipVerdict> marginal_verdicts;
  std::vector<DensityOperator> marginals;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Matrix margin = partial_trace(rho.matrix(), joint, blocks[i]);
    DensityOperator margin_state(hermitian_part(margin), factors[i].profile(),
                                 std::max(rho.tolerance(), 1e-8));
    MembershipVerdict mv = membership(factors[i], margin_state, sample_budget);
    if (mv.verdict == Verdict::NonMember) {
      MembershipVerdict v = nonmember_verdict(
          "marginal of party " + std::to_string(i) + " is outside its local free set: " + mv.reason);
      v.pt_min_eigenvalue = mv.pt_min_eigenvalue;
      v.pt_cut = mv.pt_cut;
      v.residual = mv.residual;
      return v;
    }
    marginals.push_back(std::move(margin_state));
    marginal_verdicts.push_back(std::move(mv));
  }

  // Product of factor members is free on the composite (containment axiom).
  const bool all_member = std::all_of(marginal_verdicts.begin(), marginal_verdicts.end(),
                                      [](const MembershipVerdict& v) {
                                        return v.verdict == Verdict::Member;
                                      });
  if (all_member) {
    Matrix product = marginals.front().matrix();
    for (std::size_t i = 1; i < marginals.size(); ++i)
      product = kron(product, marginals[i].matrix());
    const double diff = max_abs_diff(product, rho.matrix());
    if (diff <= tol) {
      MembershipVerdict v = member_verdict("product of locally free marginals");
      v.residual = diff;
      return v;
    }
  }

  const bool all_incoherent = std::all_of(
      factors.begin(), factors.end(),
      [](const FreeSetOracle& f) { return f.kind() == FreeSetOracle::Kind::Incoherent; });

  // Affine hulls of factor families with canonical projections are decided
  // exactly by the joint projection; the convex incoherent case coincides
  // with the affine one (mixtures of joint basis projectors).
  if (oracle.kind() == FreeSetOracle::Kind::AffineComposite ||
      (oracle.kind() == FreeSetOracle::Kind::ConvexComposite && all_incoherent)) {
    const std::optional<Matrix> projected = free_set_projection(oracle, rho.matrix());
    if (projected.has_value())
      return threshold_verdict(max_abs_diff(*projected, rho.matrix()), tol,
                               "distance to the jointly projected state");
  }

  // Convex hull over separability factors: PPT battery across every
  // bipartition of the refined factor list.
  if (oracle.kind() == FreeSetOracle::Kind::ConvexComposite) {
    const bool all_ppt = std::all_of(
        factors.begin(), factors.end(),
        [](const FreeSetOracle& f) { return f.kind() == FreeSetOracle::Kind::SeparablePPT; });
    if (all_ppt) return ppt_membership(rho.matrix(), joint, tol);
  }

  return inconclusive_verdict("no structural decision procedure for factor kinds " +
                              oracle.describe());
}

// ---------------------------------------------------------------------------
// Fixed-set comparison
// ---------------------------------------------------------------------------

SubspaceComparison fixed_set_equals_affine_hull_check(const KrausChannel& censor,
                                                      const GeneratorSet& subspace_gens) {
  SubspaceComparison cmp;
  if (!is_idempotent(censor, 1e-8)) return cmp;  // unsupported
  cmp.supported = true;

  const FixedPointSubspace fix = fixed_point_subspace(censor);
  cmp.fixed_dimension = fix.dimension;

  // Orthonormalize the generator span (real coefficients, trace inner product).
  std::vector<Matrix> gen_basis;
  for (const DensityOperator& g : subspace_gens.states()) {
    Matrix c = g.matrix();
    for (const Matrix& b : gen_basis) c -= std::real(trace_inner(b, c)) * b;
    const double norm = std::sqrt(std::real(trace_inner(c, c)));
    if (norm < 1e-8) continue;
    gen_basis.push_back(c / norm);
  }
  cmp.generator_span_dimension = static_cast<int>(gen_basis.size());

  auto project_onto = [](const std::vector<Matrix>& basis, const Matrix& m) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const Matrix& b : basis) out += trace_inner(b, m) * b;
    return out;
  };

  for (const DensityOperator& g : subspace_gens.states())
    cmp.generators_to_fixed_residual = std::max(
        cmp.generators_to_fixed_residual, max_abs_diff(fix.project(g.matrix()), g.matrix()));
  for (const Matrix& b : fix.basis)
    cmp.fixed_to_generators_residual =
        std::max(cmp.fixed_to_generators_residual, max_abs_diff(project_onto(gen_basis, b), b));

  cmp.equal = cmp.generators_to_fixed_residual <= 1e-8 && cmp.fixed_to_generators_residual <= 1e-8;
  return cmp;
}

}  // namespace censorlab

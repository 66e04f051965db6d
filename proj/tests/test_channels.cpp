#include "censorlab/channels.hpp"

#include <doctest.h>

#include "censorlab/censors.hpp"
#include "censorlab/protocol.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace censorlab;

namespace {

std::vector<KrausChannel> censor_zoo() {
  return {dephasing_channel(3), twirl_channel(iz_group()), cq_censor_channel(2, 2),
          replacement_channel(random_density(2, 5))};
}

}  // namespace

TEST_SUITE_BEGIN("channels");

TEST_CASE("KrausChannel construction validates trace preservation") {
  CHECK_THROWS_AS(KrausChannel({identity(2), identity(2)}, DimProfile({2}), DimProfile({2})),
                  std::invalid_argument);
  CHECK_NOTHROW(KrausChannel::unchecked({identity(2), identity(2)}, DimProfile({2}), DimProfile({2})));
  CHECK_THROWS_AS(KrausChannel({Matrix::Zero(2, 3)}, DimProfile({2}), DimProfile({2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(KrausChannel({}, DimProfile({2}), DimProfile({2})), std::invalid_argument);
}

TEST_CASE("apply: identity, dephasing on |+>, replacement") {
  const DensityOperator rho = random_density(4, 11);
  const DensityOperator out = apply(identity_channel(DimProfile({4})), rho);
  CHECK(max_abs_diff(out.matrix(), rho.matrix()) <= 1e-14);

  const DensityOperator plus(oracles::plus_state(), DimProfile({2}));
  const DensityOperator dephased = apply(dephasing_channel(2), plus);
  CHECK(max_abs_diff(dephased.matrix(), 0.5 * identity(2)) <= 1e-14);

  const DensityOperator target = random_density(3, 12);
  const DensityOperator in3 = random_density(3, 13);
  const DensityOperator replaced = apply(replacement_channel(target), in3);
  CHECK(max_abs_diff(replaced.matrix(), target.matrix()) <= 1e-12);

  CHECK_THROWS_AS(apply(dephasing_channel(2), rho), std::invalid_argument);
}

TEST_CASE("apply preserves trace and Hermiticity on 100 random inputs per censor") {
  for (const KrausChannel& ch : censor_zoo()) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityOperator rho = random_density(ch.in_dim(), 9000 + seed);
      const Matrix out = apply_matrix(ch, rho.matrix());
      CHECK(std::abs(out.trace() - Complex(1, 0)) <= 1e-10);
      CHECK(max_abs_diff(out, out.adjoint()) <= 1e-12);
    }
  }
}

TEST_CASE("compose: identity neutral, dephasing idempotent, swap formula instance") {
  const KrausChannel deph = dephasing_channel(2);

  SUBCASE("compose with identity equals the channel on sampled inputs") {
    const KrausChannel both = compose(identity_channel(DimProfile({2})), deph);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix rho = random_density(2, 100 + seed).matrix();
      CHECK(max_abs_diff(apply_matrix(both, rho), apply_matrix(deph, rho)) <= 1e-12);
    }
  }

  SUBCASE("dephasing composed with itself equals dephasing (superoperator oracle)") {
    CHECK(superoperator_distance(compose(deph, deph), deph) <= 1e-12);
  }

  SUBCASE("cq censor after swap reproduces the formula on |0><0| (x) |+><+|") {
    const KrausChannel chained = compose(cq_censor_channel(2, 2), swap_channel(2, 2));
    const Matrix input = kron(basis_projector(2, 0), oracles::plus_state());
    const Matrix expected =
        oracles::swap_then_dephase_formula({1.0, 0.0}, {oracles::plus_state(), Matrix::Zero(2, 2)}, 2, 2);
    CHECK(max_abs_diff(expected, kron(0.5 * identity(2), basis_projector(2, 0))) <= 1e-14);
    CHECK(max_abs_diff(apply_matrix(chained, input), expected) <= 1e-12);
  }

  SUBCASE("apply(compose(a,b)) == apply(a, apply(b)) within 1e-10") {
    const KrausChannel a = twirl_channel(iz_group());
    const KrausChannel b = replacement_channel(random_density(2, 55));
    const KrausChannel ab = compose(a, b);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix rho = random_density(2, 300 + seed).matrix();
      CHECK(max_abs_diff(apply_matrix(ab, rho), apply_matrix(a, apply_matrix(b, rho))) <= 1e-10);
    }
  }

  CHECK_THROWS_AS(compose(dephasing_channel(2), dephasing_channel(3)), std::invalid_argument);
}

TEST_CASE("tensor_channels: identities, product fixed points, breaking state") {
  const KrausChannel deph = dephasing_channel(2);

  const KrausChannel joint_id =
      tensor_channels({identity_channel(DimProfile({2})), identity_channel(DimProfile({3}))});
  CHECK(superoperator_distance(joint_id, identity_channel(DimProfile({2, 3}))) <= 1e-14);

  SUBCASE("dephasing pair fixes diagonal-basis products") {
    const KrausChannel pair = tensor_channels({deph, deph});
    Matrix diag_product = kron(basis_projector(2, 0), basis_projector(2, 1));
    CHECK(max_abs_diff(apply_matrix(pair, diag_product), diag_product) <= 1e-14);
  }

  SUBCASE("cq censor pair fixes the breaking state") {
    const KrausChannel pair = tensor_channels({cq_censor_channel(2, 2), cq_censor_channel(2, 2)});
    // |0>_X1 |1>_X2 with phi+ across Y1 Y2, ordering X1 Y1 X2 Y2.
    Vector psi = Vector::Zero(16);
    for (int k = 0; k < 2; ++k) {
      Vector branch = kron(kron(basis_ket(2, 0), basis_ket(2, k)),
                           kron(basis_ket(2, 1), basis_ket(2, k)));
      psi += branch;
    }
    psi /= std::sqrt(2.0);
    const Matrix breaking = psi * psi.adjoint();
    CHECK(max_abs_diff(apply_matrix(pair, breaking), breaking) <= 1e-13);
  }
}

TEST_CASE("superoperator_of: identity, dephasing, replacement") {
  const Superoperator id_sup = superoperator_of(identity_channel(DimProfile({2})));
  CHECK(max_abs_diff(id_sup.matrix, identity(4)) <= 1e-14);

  SUBCASE("dephasing superoperator is diag(1,0,0,1) in column-stacking order") {
    const Superoperator sup = superoperator_of(dephasing_channel(2));
    Matrix frozen = Matrix::Zero(4, 4);
    frozen(0, 0) = 1.0;
    frozen(3, 3) = 1.0;
    CHECK(max_abs_diff(sup.matrix, frozen) <= 1e-14);
    const Matrix by_columns = oracles::superop_by_columns(
        2, 2, [&](const Matrix& m) { return apply_matrix(dephasing_channel(2), m); });
    CHECK(max_abs_diff(sup.matrix, by_columns) <= 1e-14);
  }

  SUBCASE("replacement maps every density-basis state to vec(target)") {
    const DensityOperator target = random_density(2, 21);
    const Superoperator sup = superoperator_of(replacement_channel(target));
    for (const DensityOperator& b : density_basis(2)) {
      const Vector image = sup.matrix * vec(b.matrix());
      CHECK((image - vec(target.matrix())).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("superoperator action matches apply on 50 random states per censor") {
    for (const KrausChannel& ch : censor_zoo()) {
      const Superoperator sup = superoperator_of(ch);
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Matrix rho = random_density(ch.in_dim(), 7000 + seed).matrix();
        const Matrix via_sup = unvec(sup.matrix * vec(rho), ch.out_dim(), ch.out_dim());
        CHECK(max_abs_diff(via_sup, apply_matrix(ch, rho)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("choi_of: identity, dephasing, replacement; normalization") {
  SUBCASE("identity qubit channel gives the Bell state") {
    const ChoiMatrix choi = choi_of(identity_channel(DimProfile({2})));
    CHECK(max_abs_diff(choi.matrix, oracles::bell_state(0)) <= 1e-14);
  }

  SUBCASE("dephasing Choi is (|00><00| + |11><11|)/2, via the extension oracle") {
    const ChoiMatrix choi = choi_of(dephasing_channel(2));
    Matrix frozen = Matrix::Zero(4, 4);
    frozen(0, 0) = 0.5;
    frozen(3, 3) = 0.5;
    CHECK(max_abs_diff(choi.matrix, frozen) <= 1e-14);

    // Oracle: apply (id (x) channel) to |Omega><Omega| with extended Kraus.
    const KrausChannel extended =
        tensor_channels({identity_channel(DimProfile({2})), dephasing_channel(2)});
    CHECK(max_abs_diff(choi.matrix, apply_matrix(extended, oracles::bell_state(0))) <= 1e-14);
  }

  SUBCASE("replacement Choi is (I/d) (x) target") {
    const DensityOperator target = random_density(2, 31);
    const ChoiMatrix choi = choi_of(replacement_channel(target));
    CHECK(max_abs_diff(choi.matrix, kron(0.5 * identity(2), target.matrix())) <= 1e-12);
  }

  SUBCASE("partial trace over the output factor is I/d and the Choi is PSD") {
    for (const KrausChannel& ch : censor_zoo()) {
      const ChoiMatrix choi = choi_of(ch);
      const Matrix traced =
          partial_trace(choi.matrix, choi.profile(), {0});
      CHECK(max_abs_diff(traced, identity(ch.in_dim()) / static_cast<double>(ch.in_dim())) <= 1e-9);
      CHECK(eig_hermitian(choi.matrix).values.minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("is_cptp: valid censors, broken Kraus sums, twirl completeness oracle") {
  CHECK(is_cptp(dephasing_channel(2), 1e-9).ok());

  const KrausChannel broken =
      KrausChannel::unchecked({identity(2), identity(2)}, DimProfile({2}), DimProfile({2}));
  const CptpDiagnostics diag = is_cptp(broken, 1e-9);
  CHECK(!diag.ok());
  CHECK(!diag.trace_preserving);
  CHECK(diag.tp_error == doctest::Approx(1.0));  // sum K^dag K = 2I

  const TwirlGroup pauli = pauli_group_1q();
  Matrix completeness = Matrix::Zero(2, 2);
  for (const Matrix& u : pauli.unitaries()) {
    const Matrix k = u / std::sqrt(static_cast<double>(pauli.order()));
    completeness += k.adjoint() * k;
  }
  CHECK(max_abs_diff(completeness, identity(2)) <= 1e-12);
  CHECK(is_cptp(twirl_channel(pauli), 1e-9).ok());
}

TEST_CASE("is_entanglement_breaking: the four canonical classifications") {
  CHECK(is_entanglement_breaking(dephasing_channel(2)) == EbVerdict::Yes);
  CHECK(is_entanglement_breaking(identity_channel(DimProfile({2}))) == EbVerdict::No);
  CHECK(is_entanglement_breaking(replacement_channel(random_density(2, 41))) == EbVerdict::Yes);
  CHECK(is_entanglement_breaking(cq_censor_channel(2, 2)) == EbVerdict::No);

  // PT eigenvalue of the identity Choi is -1/2 at d = 2.
  const ChoiMatrix choi = choi_of(identity_channel(DimProfile({2})));
  const Matrix pt = partial_transpose(choi.matrix, choi.profile(), 1);
  CHECK(eig_hermitian(pt).values.minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));

  SUBCASE("measure-and-prepare channels are Yes at conclusive dimensions, never Inconclusive") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      // rho -> sum_i <i|rho|i> sigma_i with random prepared states.
      std::vector<Matrix> kraus;
      for (int i = 0; i < 2; ++i) {
        const DensityOperator prepared = random_density(2, 800 + 10 * seed + static_cast<std::uint64_t>(i));
        const EigResult eig = eig_hermitian(prepared.matrix());
        for (int k = 0; k < 2; ++k)
          kraus.push_back(std::sqrt(std::max(0.0, eig.values(k))) * eig.vectors.col(k) *
                          basis_ket(2, i).adjoint());
      }
      const KrausChannel mp(std::move(kraus), DimProfile({2}), DimProfile({2}));
      CHECK(is_entanglement_breaking(mp) == EbVerdict::Yes);
    }
  }

  SUBCASE("a PPT pass above the conclusive dimension stays Inconclusive") {
    const KrausChannel big = replacement_channel(random_density(3, 901));
    CHECK(is_entanglement_breaking(big) == EbVerdict::Inconclusive);  // 3 * 3 = 9 > 6
  }
}

TEST_CASE("fixed_point_subspace: dephasing, replacement, tensor structure") {
  SUBCASE("qubit dephasing fixes the diagonal plane") {
    const FixedPointSubspace fix = fixed_point_subspace(dephasing_channel(2));
    REQUIRE(fix.dimension == 2);
    for (const Matrix& b : fix.basis) CHECK(max_offdiagonal(b) <= 1e-10);
    // span contains both basis projectors
    CHECK(max_abs_diff(fix.project(basis_projector(2, 0)), basis_projector(2, 0)) <= 1e-10);
    CHECK(max_abs_diff(fix.project(basis_projector(2, 1)), basis_projector(2, 1)) <= 1e-10);
  }

  SUBCASE("replacement fixes only the target ray") {
    const DensityOperator target = random_density(2, 51);
    const FixedPointSubspace fix = fixed_point_subspace(replacement_channel(target));
    REQUIRE(fix.dimension == 1);
    CHECK(max_abs_diff(fix.project(target.matrix()), target.matrix()) <= 1e-10);
  }

  SUBCASE("two dephasing censors fix the four diagonal projectors") {
    const KrausChannel pair = tensor_channels({dephasing_channel(2), dephasing_channel(2)});
    const FixedPointSubspace fix = fixed_point_subspace(pair);
    REQUIRE(fix.dimension == 4);
    for (int i = 0; i < 4; ++i) {
      const Matrix p = basis_projector(4, i);
      CHECK(max_abs_diff(fix.project(p), p) <= 1e-10);
    }
  }

  SUBCASE("basis invariants: fixed, Hermitian, trace-orthonormal") {
    for (const KrausChannel& ch :
         {dephasing_channel(2), cq_censor_channel(2, 2), twirl_channel(pauli_group_1q())}) {
      const FixedPointSubspace fix = fixed_point_subspace(ch);
      for (std::size_t i = 0; i < fix.basis.size(); ++i) {
        const Matrix& b = fix.basis[i];
        CHECK(max_abs_diff(apply_matrix(ch, b), b) <= 1e-8);
        CHECK(max_abs_diff(b, b.adjoint()) <= 1e-12);
        for (std::size_t j = 0; j < fix.basis.size(); ++j) {
          const double expected = i == j ? 1.0 : 0.0;
          CHECK(std::abs(trace_inner(fix.basis[i], fix.basis[j]) - Complex(expected, 0)) <= 1e-9);
        }
      }
    }
  }

  SUBCASE("fixed subspace of a tensor power is the tensor span of the factors") {
    const FixedPointSubspace single = fixed_point_subspace(cq_censor_channel(2, 2));
    const KrausChannel pair = tensor_channels({cq_censor_channel(2, 2), cq_censor_channel(2, 2)});
    const FixedPointSubspace joint = fixed_point_subspace(pair);
    REQUIRE(joint.dimension == single.dimension * single.dimension);
    // Mutual containment: every product of factor basis elements is fixed by
    // the joint projection, and dimensions already agree.
    for (const Matrix& a : single.basis)
      for (const Matrix& b : single.basis) {
        const Matrix product = kron(a, b);
        CHECK(max_abs_diff(joint.project(product), product) <= 1e-8);
      }
  }

  // Tracing out the first qubit: a valid channel with in != out profiles.
  const KrausChannel trace_out(
      {kron(basis_ket(2, 0).adjoint(), identity(2)), kron(basis_ket(2, 1).adjoint(), identity(2))},
      DimProfile({2, 2}), DimProfile({2}));
  CHECK_THROWS_AS(fixed_point_subspace(trace_out), std::invalid_argument);
}

TEST_CASE("is_fixed_point: dephasing and cq censor cases") {
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(is_fixed_point(dephasing_channel(2), DensityOperator(diag, DimProfile({2})), 1e-10));
  CHECK(!is_fixed_point(dephasing_channel(2), DensityOperator(oracles::plus_state(), DimProfile({2})),
                        1e-8));

  // classical-quantum state sum_x p_x |x><x| (x) sigma^x
  const Matrix cq_state = 0.4 * kron(basis_projector(2, 0), random_density(2, 61).matrix()) +
                          0.6 * kron(basis_projector(2, 1), random_density(2, 62).matrix());
  CHECK(is_fixed_point(cq_censor_channel(2, 2), DensityOperator(cq_state, DimProfile({2, 2})), 1e-9));
}

TEST_CASE("is_idempotent: censors yes, swap no") {
  CHECK(is_idempotent(dephasing_channel(3)));
  CHECK(is_idempotent(cq_censor_channel(2, 2)));
  CHECK(is_idempotent(twirl_channel(iz_group())));
  CHECK(is_idempotent(replacement_channel(random_density(2, 71))));
  CHECK(!is_idempotent(swap_channel(2, 2)));
}

TEST_SUITE_END();

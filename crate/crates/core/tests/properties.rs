use proptest::prelude::*;

use stabtherm::barrier::{energy_penalty, max_penalty, PenaltyMode};
use stabtherm::liouvillian::coset::reassemble_dense;
use stabtherm::liouvillian::linalg::sym_eigen;
use stabtherm::liouvillian::{
    dirichlet_blocks, dirichlet_dense_from_generator, g_function, generator_dense, poincare_check,
    DenseGibbs, Family,
};
use stabtherm::model_io::{parse_model, same_model, serialize_model, Axis, SiteOrdering};
use stabtherm::high_temp::{kappa, KappaVariant};
use stabtherm::{BathSpec, PauliKind, PauliOperator, Rational, StabilizerModel};

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (0..1u64 << (2 * n)).prop_map(move |i| PauliOperator::from_index(n, i))
}

/// Random commuting models: Z-type strings, plus a global X string when
/// every Z string has even weight.
fn model() -> impl Strategy<Value = StabilizerModel> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec((1u64..1 << n, 1i128..4, 1i128..3), 1..4),
                any::<bool>(),
            )
        })
        .prop_map(|(n, terms, add_x)| {
            let mut gens = Vec::new();
            let mut couplings = Vec::new();
            for (mask, p, q) in terms {
                gens.push(PauliOperator::from_index(n, mask << n));
                couplings.push(Rational::new(p, q));
            }
            if add_x && gens.iter().all(|g| g.weight() % 2 == 0) {
                gens.push(PauliOperator::from_index(n, (1 << n) - 1));
                couplings.push(Rational::from_integer(1));
            }
            StabilizerModel::new(n, gens, couplings).unwrap()
        })
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Davies), Just(Family::HeatBath)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_index_roundtrip(p in pauli(4)) {
        prop_assert_eq!(PauliOperator::from_index(4, p.index()), p.clone());
        let text = p.to_string();
        prop_assert_eq!(text.parse::<PauliOperator>().unwrap(), p);
    }

    #[test]
    fn commutation_is_symmetric_and_bilinear(p in pauli(3), q in pauli(3), r in pauli(3)) {
        prop_assert_eq!(p.anticommutes_with(&q), q.anticommutes_with(&p));
        prop_assert_eq!(
            p.anticommutes_with(&q.compose(&r)),
            p.anticommutes_with(&q) ^ p.anticommutes_with(&r)
        );
        prop_assert!(!p.anticommutes_with(&p));
    }

    #[test]
    fn rates_satisfy_kms(beta in 0.0f64..3.0, w in -6.0f64..6.0) {
        for bath in [BathSpec::glauber(beta).unwrap(), BathSpec::metropolis(beta).unwrap()] {
            let lhs = bath.rate_f64(-w);
            let rhs = (-beta * w).exp() * bath.rate_f64(w);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }
    }

    #[test]
    fn model_text_roundtrip(m in model()) {
        let back = parse_model(&serialize_model(&m)).unwrap();
        prop_assert!(same_model(&m, &back));
        prop_assert_eq!(serialize_model(&back), serialize_model(&m));
    }

    #[test]
    fn bohr_frequency_flips_sign(m in model(), c in any::<u64>(), site in 0usize..3, k in 1usize..4) {
        let site = site % m.n_qubits();
        let a = m.syndrome_from_coordinates(c % (1 << m.rank()));
        let p = PauliOperator::single(m.n_qubits(), site, PauliKind::ALL[k]);
        let w = m.bohr_frequency(&a, &p).unwrap();
        let back = m.bohr_frequency(&a.xor(&m.syndrome(&p).unwrap()), &p).unwrap();
        prop_assert_eq!(w, -back);
    }

    #[test]
    fn g_squared_transforms_by_boltzmann(m in model(), beta in 0.0f64..2.0, c in any::<u64>(), site in 0usize..3, k in 1usize..4) {
        let site = site % m.n_qubits();
        let bath = BathSpec::glauber(beta).unwrap();
        let a = m.syndrome_from_coordinates(c % (1 << m.rank()));
        let p = PauliOperator::single(m.n_qubits(), site, PauliKind::ALL[k]);
        let w: f64 = num_traits::ToPrimitive::to_f64(&m.bohr_frequency(&a, &p).unwrap()).unwrap();
        let g0 = g_function(&m, &bath, site, &a).unwrap();
        let g1 = g_function(&m, &bath, site, &a.xor(&m.syndrome(&p).unwrap())).unwrap();
        prop_assert!(g0 > 0.0);
        prop_assert!((g1 * g1 - g0 * g0 * (beta * w).exp()).abs() <= 1e-12 * (g1 * g1).max(1.0));
    }

    #[test]
    fn penalty_is_bounded_by_exhaustive_max(m in model(), eta_index in any::<u64>(), swap in any::<bool>()) {
        let n = m.n_qubits();
        let mut slots: Vec<(usize, Axis)> = (0..n).map(|s| (s, Axis::Z)).chain((0..n).map(|s| (s, Axis::X))).collect();
        if swap {
            slots.reverse();
        }
        let ordering = SiteOrdering::new(n, slots).unwrap();
        let eta = PauliOperator::from_index(n, eta_index % (1 << (2 * n)));
        let single = energy_penalty(&m, &eta, &ordering).unwrap();
        let best = max_penalty(&m, &ordering, PenaltyMode::Exhaustive { cap: 1 << 12 }).unwrap();
        prop_assert!(single.penalty >= Rational::from_integer(0));
        prop_assert!(single.penalty <= best.penalty);
        prop_assert!(energy_penalty(&m, &PauliOperator::identity(n), &ordering).unwrap().penalty == Rational::from_integer(0));
    }

    #[test]
    fn kappa_grows_with_beta(m in model(), b1 in 0.0f64..1.0, db in 0.0f64..1.0) {
        for v in [KappaVariant::Simplified, KappaVariant::Proposition] {
            let k1 = kappa(&m, v, b1).unwrap().kappa;
            let k2 = kappa(&m, v, b1 + db).unwrap().kappa;
            prop_assert!(k1 >= 0.0 && k1 <= k2 * (1.0 + 1e-12) + 1e-300);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coset_blocks_reassemble_to_dense(m in model(), beta in 0.0f64..1.5, fam in family()) {
        let bath = BathSpec::metropolis(beta).unwrap();
        let gibbs = DenseGibbs::new(&m, beta).unwrap();
        let oracle = dirichlet_dense_from_generator(&generator_dense(&m, &bath, fam).unwrap(), &gibbs);
        let blocks = dirichlet_blocks(&m, &bath, fam).unwrap();
        let re = reassemble_dense(&m, &blocks).unwrap();
        for (x, &y) in re.iter().zip(oracle.iter()) {
            prop_assert!((x.re - y).abs() < 1e-10 && x.im.abs() < 1e-10);
        }
        for b in &blocks {
            let (vals, _) = sym_eigen(&b.symmetrized());
            prop_assert!(vals[0] > -1e-10);
        }
    }

    #[test]
    fn poincare_inequality_holds(m in model(), beta in 0.0f64..1.5, fam in family(), seed in any::<u64>()) {
        let r = poincare_check(&m, &BathSpec::glauber(beta).unwrap(), fam, 10, seed).unwrap();
        prop_assert_eq!(r.violations, 0);
        prop_assert!(r.eigenvector_residual < 1e-9);
    }
}

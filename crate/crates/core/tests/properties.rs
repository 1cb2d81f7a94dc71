use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qihe_core::coding::{
    avg_letter_entropy, blocking_sequence, ensemble_state, holevo_chi, tradeoff_point,
    typical_subspace_by_types, typical_subspace_dense, Alphabet,
};
use qihe_core::qcore::linalg::haar_unitary;
use qihe_core::qcore::{CVector, C64};
use qihe_core::thermo::ThermalContext;
use qihe_core::{
    apply_channel, measure_computational, partial_trace, tensor, von_neumann_entropy,
    DensityMatrix, PureState, QuantumChannel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_alphabet(r: &mut ChaCha8Rng) -> Alphabet {
    let d = r.random_range(2..=4);
    let n = r.random_range(1..=5);
    let letters = (0..n)
        .map(|_| DensityMatrix::random(&[d], r).unwrap())
        .collect();
    let w: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    Alphabet::new(letters, w.iter().map(|x| x / total).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_traces_compose(seed in any::<u64>(), mid in 2usize..=3) {
        let rho = DensityMatrix::random(&[2, mid, 2], &mut rng(seed)).unwrap();
        let direct = partial_trace(&rho, &[0]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[0, 1]).unwrap(), &[0]).unwrap();
        prop_assert!(direct.max_deviation(staged.matrix()) < 1e-12);
    }

    #[test]
    fn tensor_then_trace_recovers_factors(seed in any::<u64>(), da in 2usize..=3, db in 2usize..=3) {
        let mut r = rng(seed);
        let a = DensityMatrix::random(&[da], &mut r).unwrap();
        let b = DensityMatrix::random(&[db], &mut r).unwrap();
        let ab = tensor(&a, &b).unwrap();
        prop_assert!(partial_trace(&ab, &[0]).unwrap().max_deviation(a.matrix()) < 1e-12);
        prop_assert!(partial_trace(&ab, &[1]).unwrap().max_deviation(b.matrix()) < 1e-12);
        let s = von_neumann_entropy(&ab).unwrap();
        assert_abs_diff_eq!(s, a.entropy().unwrap() + b.entropy().unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d in 2usize..=6) {
        let mut r = rng(seed);
        let rho = DensityMatrix::random(&[d], &mut r).unwrap();
        let u = haar_unitary(d, &mut r);
        let rotated = rho.conjugate(&u).unwrap();
        assert_abs_diff_eq!(rho.entropy().unwrap(), rotated.entropy().unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn entropy_inequalities(seed in any::<u64>()) {
        let rho = DensityMatrix::random(&[2, 3], &mut rng(seed)).unwrap();
        let s_ab = rho.entropy().unwrap();
        let s_a = partial_trace(&rho, &[0]).unwrap().entropy().unwrap();
        let s_b = partial_trace(&rho, &[1]).unwrap().entropy().unwrap();
        prop_assert!(s_ab <= s_a + s_b + 1e-10);
        prop_assert!((s_a - s_b).abs() <= s_ab + 1e-10);
        prop_assert!(s_ab <= (6f64).log2() + 1e-12);
    }

    #[test]
    fn pure_bipartite_marginals_share_entropy(seed in any::<u64>()) {
        let psi = PureState::random(&[2, 4], &mut rng(seed)).unwrap().to_density();
        let s_a = partial_trace(&psi, &[0]).unwrap().entropy().unwrap();
        let s_b = partial_trace(&psi, &[1]).unwrap().entropy().unwrap();
        assert_abs_diff_eq!(s_a, s_b, epsilon = 1e-10);
    }

    #[test]
    fn random_channels_keep_states_valid(seed in any::<u64>(), k in 1usize..=4) {
        let mut r = rng(seed);
        let rho = DensityMatrix::random(&[2, 2], &mut r).unwrap();
        let ch = QuantumChannel::random(2, k, 1..2, &mut r).unwrap();
        let (out, p) = apply_channel(&rho, &ch).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-10);
        prop_assert!(out.eigenvalues()[0] > -1e-10);
        // acting on qubit 1 leaves qubit 0 untouched
        let before = partial_trace(&rho, &[0]).unwrap();
        prop_assert!(partial_trace(&out, &[0]).unwrap().max_deviation(before.matrix()) < 1e-10);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(seed in any::<u64>(), q in 0usize..3) {
        let rho = DensityMatrix::random(&[2, 2, 2], &mut rng(seed)).unwrap();
        let records = measure_computational(&rho, q).unwrap();
        let total: f64 = records.iter().map(|r| r.probability).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        for r in records {
            if let Some(post) = r.post_state {
                prop_assert_eq!(post.dims(), &[2, 2][..]);
                assert_abs_diff_eq!(post.trace(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn communication_energy_identity(seed in any::<u64>()) {
        let a = random_alphabet(&mut rng(seed));
        let p = tradeoff_point(&a, &ThermalContext::natural()).unwrap();
        let m = (a.dim() as f64).log2();
        let chi = holevo_chi(&a).unwrap();
        let e = m - ensemble_state(&a).entropy().unwrap();
        prop_assert!((e + chi + avg_letter_entropy(&a).unwrap() - m).abs() < 1e-12);
        prop_assert!(p.identity_residual.abs() < 1e-12);
    }

    #[test]
    fn holevo_bounds(seed in any::<u64>()) {
        let a = random_alphabet(&mut rng(seed));
        let chi = holevo_chi(&a).unwrap();
        prop_assert!(chi >= -1e-10);
        prop_assert!(chi <= ensemble_state(&a).entropy().unwrap() + 1e-10);
        prop_assert!(chi <= (a.len() as f64).log2() + 1e-10);
    }

    #[test]
    fn typical_routes_agree_on_diagonal_qubits(p in 0.02f64..0.98, l in 1usize..=8, delta in 0.01f64..0.5) {
        let rho = DensityMatrix::diagonal(&[2], &[1.0 - p, p]).unwrap();
        let dense = typical_subspace_dense(&rho, l, delta).unwrap();
        let types = typical_subspace_by_types(&rho, l, delta).unwrap();
        prop_assert!((dense.capture_probability - types.capture_probability).abs() < 1e-12);
        prop_assert_eq!(dense.dim, types.dim);
    }

    #[test]
    fn typical_dimension_bound(p in 0.01f64..0.99, l in 1usize..=400, delta in 0.001f64..0.5) {
        let rho = DensityMatrix::diagonal(&[2], &[1.0 - p, p]).unwrap();
        let t = typical_subspace_by_types(&rho, l, delta).unwrap();
        prop_assert!(t.log2_dim <= t.dimension_bound_bits());
        prop_assert!((0.0..=1.0).contains(&t.capture_probability));
    }

    #[test]
    fn blocking_pure_pairs(angle in 0.05f64..1.5, q in 0.1f64..0.9) {
        let second = CVector::from_vec(vec![C64::new(angle.cos(), 0.0), C64::new(angle.sin(), 0.0)]);
        let letters = vec![
            DensityMatrix::basis(&[2], 0).unwrap(),
            PureState::new(second, vec![2]).unwrap().to_density(),
        ];
        let a = Alphabet::new(letters, vec![q, 1.0 - q]).unwrap();
        let seq = blocking_sequence(&a, 4).unwrap();
        for w in seq.windows(2) {
            prop_assert!(w[1].energy_bits_per_letter >= w[0].energy_bits_per_letter - 1e-12);
        }
        for b in &seq {
            prop_assert!(b.energy_bits_per_letter <= b.capacity_bits - b.avg_letter_entropy + 1e-12);
        }
    }
}

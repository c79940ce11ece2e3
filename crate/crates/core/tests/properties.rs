use proptest::prelude::*;
use qirc::channels::{self, apply, random_channel, KrausChannel};
use qirc::dynamics::{evolve, local_product_unitary, phase_rotation};
use qirc::linalg::{hermitian_eigen, kron, partial_trace, DimList};
use qirc::resources::{
    coord_q1, fq_max, fully_entangled_fraction, mutual_information, quantum_fisher_information,
    variance, von_neumann_entropy, CoherenceGenerator, OptimizerSettings,
};
use qirc::states::{self, ginibre_mixed, haar_pure, haar_unitary, uhlmann_fidelity};
use qirc::{CMatrix, DensityMatrix, Seed};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

fn mixed(dims: &[usize], seed: u64) -> DensityMatrix {
    let dims = DimList::new(dims.to_vec()).unwrap();
    let rank = 1 + (seed as usize % dims.total());
    ginibre_mixed(&dims, rank, Seed::new(seed, 0)).unwrap()
}

fn generator(d: usize) -> CoherenceGenerator {
    if d == 2 {
        CoherenceGenerator::sigma_z()
    } else {
        CoherenceGenerator::number(d).unwrap()
    }
}

fn is_psd(m: &CMatrix, tol: f64) -> bool {
    hermitian_eigen(m).unwrap().min() >= -tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_preserves_trace(dims in dims_strategy(), seed in any::<u64>(), mask in 0u8..8) {
        let rho = mixed(&dims, seed);
        let mut keep: Vec<usize> = (0..dims.len()).filter(|k| mask & (1 << k) != 0).collect();
        if keep.is_empty() {
            keep.push(dims.len() - 1);
        }
        let m = partial_trace(rho.matrix(), rho.dims(), &keep).unwrap();
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(m.hermiticity_error() < 1e-12);
    }

    #[test]
    fn kron_multiplies_traces(a in dims_strategy(), b in dims_strategy(), seed in any::<u64>()) {
        let x = mixed(&a, seed);
        let y = mixed(&b, seed ^ 1);
        let k = kron(x.matrix(), y.matrix()).unwrap();
        prop_assert!((k.trace().re - 1.0).abs() < 1e-12);
        let back = partial_trace(&k, &x.dims().concat(y.dims()), &(0..a.len()).collect::<Vec<_>>()).unwrap();
        prop_assert!(back.distance(x.matrix()) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs(n in 1usize..=64, seed in any::<u64>()) {
        let rho = mixed(&[n], seed);
        let e = hermitian_eigen(rho.matrix()).unwrap();
        prop_assert!(e.reconstruct().distance(rho.matrix()) < 1e-10);
        prop_assert!(e.eigenvectors.unitarity_error() < 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn fidelity_bounds(d in 1usize..=4, seed in any::<u64>()) {
        let rho = mixed(&[d], seed);
        let sigma = mixed(&[d], seed ^ 7);
        let f = uhlmann_fidelity(&rho, &sigma).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-8);
        prop_assert!((f - uhlmann_fidelity(&sigma, &rho).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn channels_are_cptp_and_preserve_states(
        d in 1usize..=3, rank in 1usize..=4, dims in dims_strategy(), seed in any::<u64>(),
    ) {
        let ch = random_channel(d, d, rank, Seed::new(seed, 1)).unwrap();
        prop_assert!(ch.completeness_residual() < 1e-10);
        let mut full = dims.clone();
        full.push(d);
        let rho = mixed(&full, seed);
        let out = apply(&ch, &rho, full.len() - 1).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(is_psd(out.matrix(), 1e-10));
        let choi = channels::choi(&ch);
        prop_assert!(is_psd(choi.state.matrix(), 1e-10));
    }

    #[test]
    fn qfi_bounded_by_variance_and_spread(d in 2usize..=5, seed in any::<u64>()) {
        let g = generator(d);
        let rho = mixed(&[d], seed);
        let fq = quantum_fisher_information(&rho, &g).unwrap();
        prop_assert!(fq >= 0.0);
        prop_assert!(fq <= 4.0 * variance(&rho, &g).unwrap() + 1e-9);
        prop_assert!(fq <= fq_max(&g) + 1e-9);
    }

    #[test]
    fn qfi_invariant_under_commuting_unitaries(d in 2usize..=4, seed in any::<u64>(), theta in -7.0f64..7.0) {
        let g = generator(d);
        let rho = mixed(&[d], seed);
        let u = phase_rotation(&g, theta);
        let moved = DensityMatrix::new(u.conjugate(rho.matrix()), rho.dims().clone()).unwrap();
        let a = quantum_fisher_information(&rho, &g).unwrap();
        let b = quantum_fisher_information(&moved, &g).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn entropy_bounds(dims in prop::collection::vec(1usize..=3, 2), seed in any::<u64>()) {
        let rho = mixed(&dims, seed);
        let s = von_neumann_entropy(&rho);
        let total = dims.iter().product::<usize>() as f64;
        prop_assert!(s >= -1e-12 && s <= total.ln() + 1e-9);
        let i = mutual_information(&rho).unwrap();
        let min_d = *dims.iter().min().unwrap() as f64;
        prop_assert!(i >= -1e-9 && i <= 2.0 * min_d.ln() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn q1_invariant_under_local_unitaries(seed in any::<u64>()) {
        let dims = DimList::new(vec![2, 2]).unwrap();
        let rho = ginibre_mixed(&dims, 2, Seed::new(seed, 0)).unwrap();
        let u = kron(
            &haar_unitary(2, Seed::new(seed, 1)).unwrap(),
            &haar_unitary(2, Seed::new(seed, 2)).unwrap(),
        )
        .unwrap();
        let moved = DensityMatrix::new(u.conjugate(rho.matrix()), dims).unwrap();
        let opts = OptimizerSettings::default();
        let a = coord_q1(&rho, &opts).unwrap();
        let b = coord_q1(&moved, &opts).unwrap();
        prop_assert!((a.f_max - b.f_max).abs() < 1e-6, "{} vs {}", a.f_max, b.f_max);
    }

    #[test]
    fn singlet_fraction_dominates_identity_overlap_and_floor(d in 2usize..=3, seed in any::<u64>()) {
        let dims = DimList::new(vec![d, d]).unwrap();
        let rho = ginibre_mixed(&dims, d, Seed::new(seed, 0)).unwrap();
        let f = fully_entangled_fraction(&rho, &OptimizerSettings::default()).unwrap();
        let overlap = rho.matrix().expectation(&states::max_entangled_vector(d)).re;
        prop_assert!(f.value >= overlap - 1e-12);
        prop_assert!(f.value >= 1.0 / (d * d) as f64 - 1e-12);
        prop_assert!(f.value <= 1.0 + 1e-12);
    }

    #[test]
    fn local_symmetric_unitaries_conserve_the_profile(seed in any::<u64>(), theta in -3.2f64..3.2) {
        let dims = DimList::new(vec![2, 2, 2]).unwrap();
        let rho = haar_pure(&dims, Seed::new(seed, 0));
        let g = CoherenceGenerator::sigma_z();
        let u = local_product_unitary(
            &phase_rotation(&g, theta),
            &haar_unitary(2, Seed::new(seed, 1)).unwrap(),
            &haar_unitary(2, Seed::new(seed, 2)).unwrap(),
        )
        .unwrap();
        let cfg = qirc::resources::ProfileConfig::default();
        let a = qirc::resources::profile(&rho, &cfg).unwrap();
        let b = qirc::resources::profile(&evolve(&rho, &u).unwrap(), &cfg).unwrap();
        prop_assert!((a.norm - b.norm).abs() < 1e-6);
    }
}

#[test]
fn named_channels_are_trace_preserving() {
    let g = CoherenceGenerator::sigma_z();
    let chans: Vec<KrausChannel> = vec![
        KrausChannel::identity(3),
        channels::depolarizing(2, 0.3).unwrap(),
        channels::depolarizing(3, 1.0).unwrap(),
        channels::dephasing(0.4, &g).unwrap(),
        channels::amplitude_damping(0.7).unwrap(),
        channels::replacement(2, &states::plus_state()).unwrap(),
    ];
    for ch in chans {
        assert!(ch.completeness_residual() < 1e-10);
    }
}

//! Cross-module checks on the public API.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbitscope::inner_products::{orthogonality_report, Scenario};
use orbitscope::lu_adjust::{adjust_two_common, triple_span_dim, SPAN_TOLERANCE};
use orbitscope::orbit_matrix::{analyze, AnalysisOptions};
use orbitscope::state::{make_cat, make_singlet_product, sample_haar_state};
use orbitscope::z2::{constant_parity, find_parity_set, zero_rows, DEFAULT_ZERO_TOLERANCE};
use orbitscope::{
    apply_group, isotropy_basis, orbit_dimension, verify_isotropy, LocalUnitary, PureState,
};

#[test]
fn json_round_trip_preserves_orbit_dimension() {
    for psi in [make_cat(4).unwrap(), sample_haar_state(3, 8).unwrap()] {
        let back = PureState::from_json(&psi.to_json()).unwrap();
        assert_eq!(back.is_exact(), psi.is_exact());
        assert_eq!(orbit_dimension(&back), orbit_dimension(&psi));
    }
}

#[test]
fn isotropy_basis_annihilates_the_state() {
    for psi in [make_cat(4).unwrap(), make_singlet_product(2).unwrap()] {
        let basis = isotropy_basis(&psi);
        assert_eq!(basis.len(), 3 * psi.n() + 1 - orbit_dimension(&psi) - 1);
        for e in &basis {
            assert!(verify_isotropy(&psi, e, 1e-10).unwrap());
        }
    }
}

#[test]
fn orbit_dimension_is_a_local_unitary_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for psi in [make_cat(3).unwrap(), make_singlet_product(2).unwrap()] {
        let exact = orbit_dimension(&psi);
        for _ in 0..5 {
            let u = LocalUnitary::random(psi.n(), &mut rng);
            let moved = apply_group(&u, &psi).unwrap();
            let a = analyze(&moved, AnalysisOptions::default()).unwrap();
            assert_eq!(a.orbit_dimension(), exact);
        }
    }
}

#[test]
fn two_common_adjustment_on_a_rotated_singlet() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi0 = make_singlet_product(1).unwrap();
    let psi = apply_group(&LocalUnitary::random(2, &mut rng), &psi0).unwrap();
    assert_eq!(triple_span_dim(&psi, &[0, 1], SPAN_TOLERANCE).unwrap(), 3);
    let adj = adjust_two_common(&psi, 0, 1).unwrap();
    assert!(adj.residual <= 1e-10);
    let report = orthogonality_report(&adj.state, &Scenario::TwoCommon { l: 0, l2: 1 }).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn parity_sets_are_constant_on_zero_rows() {
    for xi in [vec![1.0, 1.0, 2.0], vec![3.0, 5.0, 2.0, 4.0, 2.0], vec![1.0, 1.0]] {
        let rows = zero_rows(&xi, DEFAULT_ZERO_TOLERANCE).unwrap();
        let w = find_parity_set(&xi, DEFAULT_ZERO_TOLERANCE).unwrap();
        assert_eq!(w.parity_set.len() % 2, 0);
        assert_eq!(constant_parity(&rows, &w.parity_set), Some(w.parity));
    }
}

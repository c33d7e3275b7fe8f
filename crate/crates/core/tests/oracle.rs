//! Polar-factor results against brute-force Fock-space diagonalization.

mod common;

use approx::assert_abs_diff_eq;
use common::*;
use freefermi::fidelity::fidelity_det;
use freefermi::fock::{build_fock_hamiltonian, fock_ground_state, fock_overlap, gaussian_state_from_g, state_from_angles};
use freefermi::groundstate::{canonical_ground_state, pairing_matrix};
use freefermi::models::{complete_graph, two_mode_ex1, CompleteGraphParams};
use freefermi::quadform::polar_decompose;

#[test]
fn determinant_fidelity_matches_fock_overlap() {
    let mut rng = rng(11);
    let mut checked = 0;
    while checked < 60 {
        let l = 2 * (1 + checked % 4);
        let zc = random_coupling(&mut rng, l);
        let zs = if checked % 2 == 0 { perturbed(&mut rng, &zc, 0.3) } else { random_coupling(&mut rng, l) };
        let (pa, pb) = (polar_decompose(&zc), polar_decompose(&zs));
        let (ga, gb) = (
            fock_ground_state(&build_fock_hamiltonian(&zc).unwrap()),
            fock_ground_state(&build_fock_hamiltonian(&zs).unwrap()),
        );
        if pa.min_singular < 1e-6 || pb.min_singular < 1e-6 || ga.gap < 1e-6 || gb.gap < 1e-6 {
            continue;
        }
        let f = fidelity_det(&pa.t, &pb.t).unwrap().value;
        let exact = fock_overlap(&ga.vector, &gb.vector).unwrap();
        assert!((f - exact).abs() < 1e-8, "L={l}: det {f} vs fock {exact}");
        checked += 1;
    }
}

#[test]
fn ground_energy_from_single_particle_spectrum() {
    // E0 = (Tr A − Σ Λ)/2.
    let mut rng = rng(12);
    for l in [2, 4, 6, 8] {
        for _ in 0..5 {
            let zc = random_coupling(&mut rng, l);
            let pf = polar_decompose(&zc);
            let gs = fock_ground_state(&build_fock_hamiltonian(&zc).unwrap());
            let predicted = 0.5 * (zc.hopping().trace() - pf.singular_values.iter().sum::<f64>());
            assert_abs_diff_eq!(gs.energy, predicted, epsilon = 1e-10);
        }
    }
}

#[test]
fn parity_sector_matches_det_t() {
    let mut rng = rng(13);
    for l in [2, 4, 6] {
        for _ in 0..10 {
            let zc = random_coupling(&mut rng, l);
            let pf = polar_decompose(&zc);
            let gs = fock_ground_state(&build_fock_hamiltonian(&zc).unwrap());
            if gs.degenerate {
                continue;
            }
            let det = pf.t.determinant();
            assert_eq!(gs.parity_sector, if det < 0.0 { -1 } else { 1 });
        }
    }
}

#[test]
fn canonical_and_pairing_states_match_exact() {
    let mut rng = rng(14);
    for l in [4, 6, 8] {
        for _ in 0..5 {
            let zc = random_coupling(&mut rng, l);
            let gs = fock_ground_state(&build_fock_hamiltonian(&zc).unwrap());
            if gs.gap < 1e-6 {
                continue;
            }
            let canonical = state_from_angles(&canonical_ground_state(&zc).unwrap()).unwrap();
            assert!(fock_overlap(&canonical, &gs.vector).unwrap() > 1.0 - 1e-9);
            if gs.parity_sector == 1 {
                if let Ok(g) = pairing_matrix(&polar_decompose(&zc).t) {
                    let paired = gaussian_state_from_g(&g).unwrap();
                    assert!(fock_overlap(&paired, &gs.vector).unwrap() > 1.0 - 1e-8);
                }
            }
        }
    }
}

#[test]
fn fidelity_is_invariant_under_mode_rotations() {
    let mut rng = rng(15);
    for l in [4, 6, 10] {
        let zc = random_coupling(&mut rng, l);
        let zs = perturbed(&mut rng, &zc, 0.2);
        let q = random_orthogonal(&mut rng, l);
        let f = fidelity_det(&polar_decompose(&zc).t, &polar_decompose(&zs).t).unwrap().value;
        let (zr, zsr) = (zc.rotated(&q).unwrap(), zs.rotated(&q).unwrap());
        let fr = fidelity_det(&polar_decompose(&zr).t, &polar_decompose(&zsr).t).unwrap().value;
        assert_abs_diff_eq!(f, fr, epsilon = 1e-10);
        let pr = polar_decompose(&zr);
        assert!(max_abs(&(&pr.t - q.transpose() * polar_decompose(&zc).t * &q)) < 1e-9);
    }
}

#[test]
fn example_one_spectrum() {
    for &(eps, delta) in &[(0.3, 1.1), (-0.8, 0.2), (1.5, -0.4)] {
        let h = build_fock_hamiltonian(&two_mode_ex1(eps, delta)).unwrap();
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut expect = vec![eps, -eps, delta, -delta];
        expect.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

#[test]
fn complete_graph_small_sizes() {
    for l in [2, 4, 6] {
        for &(mu, gamma) in &[(-0.5, 0.3), (0.5, -0.7), (1.6, 0.4), (-1.3, 1.7)] {
            let zc = complete_graph(&CompleteGraphParams::new(mu, gamma, l)).unwrap();
            let zs = complete_graph(&CompleteGraphParams::new(mu + 0.1, gamma, l)).unwrap();
            let (pa, pb) = (polar_decompose(&zc), polar_decompose(&zs));
            let (ga, gb) = (
                fock_ground_state(&build_fock_hamiltonian(&zc).unwrap()),
                fock_ground_state(&build_fock_hamiltonian(&zs).unwrap()),
            );
            if ga.degenerate || gb.degenerate || pa.is_singular || pb.is_singular {
                continue;
            }
            let f = fidelity_det(&pa.t, &pb.t).unwrap().value;
            assert_abs_diff_eq!(f, fock_overlap(&ga.vector, &gb.vector).unwrap(), epsilon = 1e-9);
        }
    }
}

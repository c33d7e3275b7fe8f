//! Property tests for the algebraic invariants.

mod common;

use common::*;
use freefermi::fidelity::{fidelity_angles, fidelity_det};
use freefermi::models::{complete_graph, CompleteGraphParams};
use freefermi::quadform::{
    log_abs_det, orthogonal_angles, orthogonality_defect, polar_decompose, OrthogonalCanonicalForm,
};
use freefermi::sweep::{parse_records, render_records, GridAxis, OutputFormat, SweepRecord};
use freefermi::DMatrix;
use proptest::prelude::*;

fn even_size() -> impl Strategy<Value = usize> {
    (1usize..=6).prop_map(|m| 2 * m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_factors_reconstruct(seed in any::<u64>(), l in even_size()) {
        let zc = random_coupling(&mut rng(seed), l);
        let pf = polar_decompose(&zc);
        let scale = 1.0 + max_abs(zc.z());
        prop_assert!(max_abs(&(&pf.p * &pf.t - zc.z())) < 1e-12 * scale * l as f64);
        prop_assert!(orthogonality_defect(&pf.t) < 1e-12 * l as f64);
        prop_assert!(max_abs(&(&pf.p - pf.p.transpose())) < 1e-12 * scale);
        prop_assert!(pf.p.symmetric_eigenvalues().iter().all(|&e| e > -1e-10 * scale));
        prop_assert!(pf.singular_values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn fidelity_is_a_symmetric_overlap(seed in any::<u64>(), l in even_size(), eps in 0.0f64..1.0) {
        let mut r = rng(seed);
        let zc = random_coupling(&mut r, l);
        let zs = perturbed(&mut r, &zc, eps);
        let (t, ts) = (polar_decompose(&zc).t, polar_decompose(&zs).t);
        let f = fidelity_det(&t, &ts).unwrap();
        let g = fidelity_det(&ts, &t).unwrap();
        prop_assert!((0.0..=1.0).contains(&f.value));
        prop_assert!((f.value - g.value).abs() < 1e-12);
        prop_assert_eq!(fidelity_det(&t, &t).unwrap().value, 1.0);
    }

    #[test]
    fn determinant_and_angle_forms_agree(seed in any::<u64>(), l in even_size()) {
        let mut r = rng(seed);
        let (t, ts) = (random_orthogonal(&mut r, l), random_orthogonal(&mut r, l));
        let f = fidelity_det(&t, &ts).unwrap();
        match fidelity_angles(&t, &ts) {
            Ok(a) => prop_assert!((f.value - a.value).abs() < 1e-10),
            Err(_) => prop_assert_eq!(f.value, 0.0),
        }
    }

    #[test]
    fn canonical_form_reconstructs(seed in any::<u64>(), l in 1usize..=10) {
        let q = random_orthogonal(&mut rng(seed), l);
        let form = OrthogonalCanonicalForm::new(&q).unwrap();
        prop_assert!(max_abs(&(form.reconstruct() - &q)) < 1e-10);
        prop_assert!(orthogonality_defect(&form.frame) < 1e-10);
        let spec = orthogonal_angles(&q).unwrap();
        prop_assert_eq!(spec.det_sign, log_abs_det(&q).sign);
        prop_assert!(spec.angles.iter().all(|&a| (0.0..=std::f64::consts::PI).contains(&a)));
    }

    #[test]
    fn gamma_reversal_transposes(mu in -3.0f64..3.0, gamma in -3.0f64..3.0, l in even_size()) {
        let z = complete_graph(&CompleteGraphParams::new(mu, gamma, l)).unwrap();
        let zr = complete_graph(&CompleteGraphParams::new(mu, -gamma, l)).unwrap();
        prop_assert_eq!(zr.z(), &z.z().transpose());
        let (t, tr) = (polar_decompose(&z).t, polar_decompose(&zr).t);
        prop_assert!(max_abs(&(tr - t.transpose())) < 1e-9);
    }

    #[test]
    fn log_det_matches_determinant(seed in any::<u64>(), l in 1usize..=8) {
        let m = gaussian(&mut rng(seed), l);
        let d = m.determinant();
        let ld = log_abs_det(&m);
        prop_assert_eq!(ld.sign as f64, d.signum());
        prop_assert!((ld.log_abs - d.abs().ln()).abs() < 1e-10);
    }

    #[test]
    fn axis_round_trips(min in -10.0f64..10.0, width in 0.0f64..10.0, steps in 1usize..200) {
        let axis = GridAxis::new(min, min + width, steps).unwrap();
        let back: GridAxis = axis.to_string().parse().unwrap();
        prop_assert_eq!(back, axis);
        prop_assert_eq!(axis.value(0), axis.min);
        prop_assert_eq!(axis.values().len(), steps);
    }

    #[test]
    fn records_round_trip(
        vals in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0, 0.0f64..1.0, 0.0f64..1.0, 1e-20f64..10.0, any::<bool>()), 1..20)
    ) {
        let recs: Vec<SweepRecord> = vals.iter().map(|&(mu, gamma, a, b, s, flag)| SweepRecord {
            mu, gamma, f_dmu: a, f_dgamma: b, f_min: a.min(b),
            det_sign: if flag { -1 } else { 1 }, min_singular: s, singular_flag: flag,
        }).collect();
        for fmt in [OutputFormat::Csv, OutputFormat::Json] {
            let text = render_records(&recs, fmt).unwrap();
            prop_assert_eq!(render_records(&recs, fmt).unwrap(), text.clone());
            let back = parse_records(&text, fmt).unwrap();
            prop_assert_eq!(back.len(), recs.len());
            for (x, y) in recs.iter().zip(&back) {
                for (u, v) in [(x.mu, y.mu), (x.gamma, y.gamma), (x.f_dmu, y.f_dmu), (x.f_dgamma, y.f_dgamma), (x.f_min, y.f_min)] {
                    prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300) + 1e-12);
                }
                prop_assert!((x.min_singular - y.min_singular).abs() <= 1e-12 * x.min_singular);
                prop_assert_eq!((x.det_sign, x.singular_flag), (y.det_sign, y.singular_flag));
            }
        }
    }
}

#[test]
fn singular_kernel_choice_is_transpose_covariant() {
    // (μ, γ) = (0, ±1) is singular for every L.
    for l in [2, 4, 8, 30] {
        let z = complete_graph(&CompleteGraphParams::new(0.0, 1.0, l)).unwrap();
        let zr = complete_graph(&CompleteGraphParams::new(0.0, -1.0, l)).unwrap();
        let (p, pr) = (polar_decompose(&z), polar_decompose(&zr));
        assert!(p.is_singular && pr.is_singular);
        assert!(max_abs(&(&pr.t - p.t.transpose())) < 1e-9, "L={l}");
        assert!(orthogonality_defect(&p.t) < 1e-10);
    }
    let p = polar_decompose(&complete_graph(&CompleteGraphParams::new(1.0, 0.0, 6)).unwrap());
    assert!(max_abs(&(p.t - DMatrix::identity(6, 6))) < 1e-10);
}

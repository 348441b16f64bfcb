use fqg_core::dual::DualHopfAlgebra;
use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::{Sampler, ToleranceConfig};
use fqg_demo::{algebras_json, curve, heatmap, spectra};

#[test]
fn lists_all_eleven_examples() {
    let list: serde_json::Value = serde_json::from_str(&algebras_json().unwrap()).unwrap();
    let list = list.as_array().unwrap();
    assert_eq!(list.len(), 11);
    let kp = list.last().unwrap();
    assert_eq!(kp["id"], "kac_paljutkin");
    assert_eq!(kp["block_dims"], serde_json::json!([1, 1, 1, 1, 2]));
    assert!(list.iter().any(|a| a["label"] == "ℂ[S3]" && a["dim"] == 6));
}

#[test]
fn unit_mixture_collapses_the_spectrum_to_the_haar_value() {
    // At t = 0 the convolution partner is 1 and y ⋄ 1 = τ(y)·1.
    let s = spectra("group:S3", 4, 0.0).unwrap();
    let first = s.right[0];
    assert!(s.right.iter().all(|x| (x - first).abs() < 1e-10));
    assert!(s.left.iter().all(|x| (x - first).abs() < 1e-10));
    assert!((s.haar_of_c - 1.0).abs() < 1e-12);
}

#[test]
fn spectra_are_sorted_and_deterministic() {
    let a = spectra("kac_paljutkin", 9, 0.7).unwrap();
    let b = spectra("kac_paljutkin", 9, 0.7).unwrap();
    assert_eq!(a.y, b.y);
    assert_eq!(a.right, b.right);
    // One eigenvalue per diagonal entry of 1 ⊕ 1 ⊕ 1 ⊕ 1 ⊕ M2.
    assert_eq!(a.y.len(), 6);
    assert!(a.y.windows(2).all(|w| w[0] <= w[1]));
    assert!((a.haar_of_c - 1.0).abs() < 1e-10);
}

#[test]
fn heatmap_rows_have_unit_norm() {
    for id in ["group:Z3", "function:S3", "kac_paljutkin"] {
        let h = heatmap(id).unwrap();
        assert_eq!(h.values.len(), h.size * h.size);
        for row in h.values.chunks(h.size) {
            let norm: f64 = row.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-10, "{id}: row norm {norm}");
        }
        assert!(h.unitarity < 1e-10 && h.pentagon < 1e-10);
    }
}

#[test]
fn central_perturbation_leaves_the_conjugation_unchanged() {
    let c = curve("kac_paljutkin", 3, -6.0, -1.0, 6).unwrap();
    assert_eq!(c.eps.len(), 6);
    assert!((c.eps[0] - 1e-6).abs() < 1e-18 && (c.eps[5] - 1e-1).abs() < 1e-14);
    assert!(c.distance.iter().all(|d| *d < 1e-10), "{:?}", c.distance);
    assert!(c.inverse_residual.iter().all(|r| *r < 1e-9));
}

#[test]
fn fourier_singular_values_move_within_the_weyl_bound() {
    // |σ_min F(v + εj) − σ_min F(v)| ≤ ε‖F(j)‖ ≤ ε‖F(j)‖_F.
    let tol = ToleranceConfig::default();
    let h = HopfAlgebra::group_algebra(&FiniteGroup::from_name("S3").unwrap(), &tol).unwrap();
    let dual = DualHopfAlgebra::build(&h, &tol).unwrap();
    let v = Sampler::new(11).sa_invertible(h.algebra());
    let base = dual.fourier(&v).sigma_min();
    let fj = dual
        .fourier(&h.counit_support(&tol).unwrap().element)
        .frob();
    let c = curve("group:S3", 11, -4.0, 0.0, 9).unwrap();
    for (e, s) in c.eps.iter().zip(&c.fourier_sigma_min) {
        assert!((s - base).abs() <= e * fj + 1e-12, "ε = {e}: {s} vs {base}");
    }
    assert!(c.fourier_inverse_sigma_min.iter().all(|s| *s > 0.0));
}

#[test]
fn bad_requests_are_errors() {
    assert!(heatmap("group:Q8x").is_err());
    assert!(curve("group:Z2", 0, -2.0, -3.0, 5).is_err());
    assert!(curve("group:Z2", 0, -3.0, -2.0, 1).is_err());
}

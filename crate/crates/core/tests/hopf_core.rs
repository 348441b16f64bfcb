use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::{compute_haar, HopfAlgebra, HopfJson};
use fqg_core::linalg::{c, CMat, CVec, C64, ONE, ZERO};
use fqg_core::{Element, Error, Sampler, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn group(name: &str) -> FiniteGroup {
    FiniteGroup::from_name(name).unwrap()
}

fn group_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::group_algebra(&group(name), &tol()).unwrap()
}

fn function_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::function_algebra(&group(name), &tol()).unwrap()
}

/// The `g`-th group-basis vector (`λ_g` or `δ_g`) as an element.
fn basis_vector(h: &HopfAlgebra, g: usize) -> Element {
    let gb = h.group_basis().unwrap();
    h.algebra()
        .element(&gb.to_mu.column(g).into_owned())
        .unwrap()
}

fn klein_four() -> FiniteGroup {
    FiniteGroup::from_cayley_csv("V4", "0,1,2,3\n1,0,3,2\n2,3,0,1\n3,2,1,0\n").unwrap()
}

fn small_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=8).map(|n| FiniteGroup::cyclic(n).unwrap()).collect();
    out.push(FiniteGroup::dihedral(3).unwrap());
    out.push(FiniteGroup::dihedral(4).unwrap());
    out.push(FiniteGroup::symmetric(3).unwrap());
    out.push(klein_four());
    out
}

#[test]
fn z2_group_algebra_matches_hand_built_constants() {
    // ℂ[ℤ₂] ≅ ℂ⊕ℂ with λ₀ = (1,1), λ₁ = (1,−1); δ(λ_g) = λ_g⊗λ_g.
    let h = group_algebra("Z2");
    assert_eq!(h.algebra().block_dims(), &[1, 1]);
    let l1 = basis_vector(&h, 1);
    let coords = h.algebra().coords(&l1);
    assert!((coords[0] - ONE).norm() < 1e-12 && (coords[1] + ONE).norm() < 1e-12);
    let mut expected = CMat::zeros(4, 2);
    // δ(e_0) = e_0⊗e_0 + ... computed from λ-form: e_0 = (λ₀+λ₁)/2, e_1 = (λ₀−λ₁)/2.
    for (k, l, m) in [(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)] {
        expected[(k * 2 + l, m)] = ONE;
    }
    assert!((h.coproduct() - expected).norm() < 1e-12);
    assert!((h.haar_of(&l1)).norm() < 1e-12);
    let report = h.verify_axioms(&tol());
    assert!(report.passed);
    assert!(report.max_residual() < 1e-12);
}

#[test]
fn group_algebra_block_structure() {
    assert_eq!(group_algebra("Z2").algebra().block_dims(), &[1, 1]);
    assert_eq!(group_algebra("Z4").algebra().block_dims(), &[1, 1, 1, 1]);
    let mut s3 = group_algebra("S3").algebra().block_dims().to_vec();
    s3.sort();
    assert_eq!(s3, vec![1, 1, 2]);
    let mut d4 = group_algebra("D4").algebra().block_dims().to_vec();
    d4.sort();
    assert_eq!(d4, vec![1, 1, 1, 1, 2]);
}

#[test]
fn group_algebra_structure_on_group_basis() {
    for name in ["S3", "D4", "Z3"] {
        let h = group_algebra(name);
        let g = group(name);
        let layout = h.tensor_layout();
        for a in 0..g.order() {
            let la = basis_vector(&h, a);
            let delta = layout.to_element(&h.coproduct_of(&la));
            assert!(delta.rel_diff(&la.tensor(&la)) < 1e-12, "{name}: δ(λ_{a})");
            assert!((h.counit_of(&la) - ONE).norm() < 1e-12);
            let expected_tau = if a == 0 { ONE } else { ZERO };
            assert!((h.haar_of(&la) - expected_tau).norm() < 1e-12);
            assert!(h.antipode_of(&la).rel_diff(&basis_vector(&h, g.inv(a))) < 1e-12);
            for b in 0..g.order() {
                let prod = &la * &basis_vector(&h, b);
                assert!(prod.rel_diff(&basis_vector(&h, g.mul(a, b))) < 1e-12);
            }
        }
    }
}

#[test]
fn function_algebra_structure_on_point_masses() {
    let h = function_algebra("Z2");
    let layout = h.tensor_layout();
    let d = |g| basis_vector(&h, g);
    let expected = &d(0).tensor(&d(1)) + &d(1).tensor(&d(0));
    assert!(
        layout
            .to_element(&h.coproduct_of(&d(1)))
            .rel_diff(&expected)
            < 1e-14
    );

    let h = function_algebra("S3");
    let g = group("S3");
    for x in 0..6 {
        assert!((h.haar_of(&basis_vector(&h, x)) - c(1.0 / 6.0, 0.0)).norm() < 1e-14);
        let mut expected = h.algebra().zero().tensor(&h.algebra().zero());
        for s in 0..6 {
            for t in 0..6 {
                if g.mul(s, t) == x {
                    expected = &expected + &basis_vector(&h, s).tensor(&basis_vector(&h, t));
                }
            }
        }
        let delta = h
            .tensor_layout()
            .to_element(&h.coproduct_of(&basis_vector(&h, x)));
        assert!(delta.rel_diff(&expected) < 1e-14);
        let eps = if x == 0 { ONE } else { ZERO };
        assert!((h.counit_of(&basis_vector(&h, x)) - eps).norm() < 1e-14);
    }
}

#[test]
fn axioms_hold_for_every_small_group() {
    for g in small_groups() {
        for h in [
            HopfAlgebra::group_algebra(&g, &tol()).unwrap(),
            HopfAlgebra::function_algebra(&g, &tol()).unwrap(),
        ] {
            let report = h.verify_axioms(&tol());
            assert!(
                report.max_residual() < 1e-10,
                "{}: {:?}",
                h.name(),
                report.failures()
            );
        }
    }
}

#[test]
fn bundled_examples_pass_axioms() {
    let examples = HopfAlgebra::examples(&tol()).unwrap();
    assert_eq!(examples.len(), 11);
    for h in &examples {
        let report = h.verify_axioms(&tol());
        assert!(report.passed, "{}: {:?}", h.name(), report.failures());
        assert!(report.max_residual() < 1e-9);
    }
}

#[test]
fn corrupted_coproduct_breaks_coassociativity() {
    for h in [
        group_algebra("Z2"),
        HopfAlgebra::kac_paljutkin(&tol()).unwrap(),
    ] {
        let mut d = h.coproduct().clone();
        d[(0, 0)] += c(0.1, 0.0);
        let bad = h.clone().with_coproduct(d);
        let report = bad.verify_axioms(&tol());
        assert!(!report.passed);
        assert!(report.get("coassociativity").unwrap() > tol().eq_tol);
        assert!(report.failures().contains(&"coassociativity"));
    }
}

#[test]
fn cocentre_dimensions() {
    assert_eq!(group_algebra("S3").cocentre_basis(&tol()).len(), 6);
    assert_eq!(group_algebra("D4").cocentre_basis(&tol()).len(), 8);
    assert_eq!(function_algebra("S3").cocentre_basis(&tol()).len(), 3);
    assert_eq!(function_algebra("D4").cocentre_basis(&tol()).len(), 5);
    assert_eq!(function_algebra("Z4").cocentre_basis(&tol()).len(), 4);
}

#[test]
fn cocentre_of_function_algebra_is_class_functions() {
    let h = function_algebra("S3");
    let g = group("S3");
    let flip = |x: &CVec| {
        let n = h.dim();
        CVec::from_fn(n * n, |r, _| x[(r % n) * n + r / n])
    };
    for a in h.cocentre_basis(&tol()) {
        let d = h.coproduct_of(&a);
        assert!((&d - flip(&d)).norm() < 1e-10);
        let coords = h.algebra().coords(&a);
        for class in g.conjugacy_classes() {
            for &x in &class {
                assert!((coords[x] - coords[class[0]]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn cocentre_basis_is_haar_orthonormal() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let basis = h.cocentre_basis(&tol());
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let ip = h.haar_of(&(&a.adjoint() * b));
            let expected = if i == j { ONE } else { ZERO };
            assert!((ip - expected).norm() < 1e-10);
        }
    }
}

#[test]
fn ksymmetric_elements() {
    let h = group_algebra("S3");
    for g in 0..6 {
        let l = basis_vector(&h, g);
        assert!(h.theta(&l).rel_diff(&l) < 1e-12);
    }
    let h = function_algebra("S3");
    let g = group("S3");
    for x in 0..6 {
        let d = basis_vector(&h, x);
        let dinv = basis_vector(&h, g.inv(x));
        let sym = &d + &dinv;
        let anti = (&d - &dinv).scale(c(0.0, 1.0));
        assert!(h.theta(&sym).rel_diff(&sym) < 1e-12);
        assert!(h.theta(&anti).rel_diff(&anti) < 1e-12);
    }
    assert_eq!(h.ksymmetric_basis(&tol()).unwrap().len(), 6);
}

#[test]
fn ksymmetric_basis_has_full_real_dimension() {
    for h in HopfAlgebra::examples(&tol()).unwrap() {
        let basis = h.ksymmetric_basis(&tol()).unwrap();
        assert_eq!(basis.len(), h.dim(), "{}", h.name());
        for b in &basis {
            assert!(h.theta(b).rel_diff(b) < 1e-10);
        }
        // Closed under products: θ is anti-multiplicative composed with anti-multiplicative.
        let mut rng = Sampler::new(4);
        let mut pick = || {
            let mut x = h.algebra().zero();
            for b in &basis {
                x = &x + &b.scale_re(rng.normal());
            }
            x
        };
        let (x, y) = (pick(), pick());
        let xy = &x * &y;
        assert!(h.theta(&xy).rel_diff(&xy) < 1e-10);
    }
}

#[test]
fn counit_support_examples() {
    let h = group_algebra("Z2");
    let j = h.counit_support(&tol()).unwrap().element;
    let expected = (&basis_vector(&h, 0) + &basis_vector(&h, 1)).scale_re(0.5);
    assert!(j.rel_diff(&expected) < 1e-12);

    let h = group_algebra("S3");
    let j = h.counit_support(&tol()).unwrap().element;
    let mut avg = h.algebra().zero();
    for g in 0..6 {
        avg = &avg + &basis_vector(&h, g);
    }
    assert!(j.rel_diff(&avg.scale_re(1.0 / 6.0)) < 1e-12);

    for name in ["Z3", "S3", "D4"] {
        let h = function_algebra(name);
        let j = h.counit_support(&tol()).unwrap().element;
        assert!(j.rel_diff(&basis_vector(&h, 0)) < 1e-14);
    }
}

#[test]
fn counit_support_is_a_character_projection() {
    let mut rng = Sampler::new(8);
    for h in HopfAlgebra::examples(&tol()).unwrap() {
        let j = h.counit_support(&tol()).unwrap().element;
        assert!((&j * &j).rel_diff(&j) < 1e-12);
        assert!(j.self_adjoint_residual() < 1e-12);
        let x = rng.gaussian(h.algebra());
        assert!((&x * &j).rel_diff(&j.scale(h.counit_of(&x))) < 1e-10);
        assert!(x.commutator(&j).frob() < 1e-10);
    }
}

#[test]
fn counit_support_missing_is_reported() {
    let h = function_algebra("Z3");
    let json = h.to_json();
    let bad = HopfJson {
        counit: vec![[0.5, 0.0]; 3],
        ..json
    };
    let bad = bad.into_hopf(&tol()).unwrap();
    assert!(matches!(
        bad.counit_support(&tol()),
        Err(Error::NoCharacterBlock { .. })
    ));
}

fn without_haar(h: &HopfAlgebra) -> HopfAlgebra {
    HopfJson {
        haar: None,
        ..h.to_json()
    }
    .into_hopf(&tol())
    .unwrap()
}

#[test]
fn compute_haar_recovers_known_states() {
    let h = without_haar(&function_algebra("S3"));
    for z in h.haar().iter() {
        assert!((z - c(1.0 / 6.0, 0.0)).norm() < 1e-12);
    }

    let original = group_algebra("S3");
    let h = without_haar(&original);
    for g in 0..6 {
        let expected = if g == 0 { ONE } else { ZERO };
        assert!((h.haar_of(&basis_vector(&original, g)) - expected).norm() < 1e-12);
    }

    let kp = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let recomputed = without_haar(&kp);
    assert!((recomputed.haar() - kp.haar()).norm() < tol().eq_tol);
}

#[test]
fn compute_haar_rejects_non_unique_solutions() {
    let n = 3;
    let unit = CVec::from_element(n, ONE);
    let err = compute_haar(&CMat::zeros(n * n, n), &unit, &tol()).unwrap_err();
    assert!(matches!(err, Error::NonUniqueHaar { .. }));
}

#[test]
fn kac_paljutkin_file_round_trips() {
    let kp = HopfAlgebra::builtin("kac_paljutkin.json", &tol()).unwrap();
    assert_eq!(kp.algebra().block_dims(), &[1, 1, 1, 1, 2]);
    let text = serde_json::to_string(&kp.to_json()).unwrap();
    let back = HopfAlgebra::from_json(&text, &tol()).unwrap();
    assert!((back.coproduct() - kp.coproduct()).norm() < 1e-15);
    assert!(back.verify_axioms(&tol()).passed);
}

#[test]
fn malformed_files_are_rejected() {
    let kp = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let mut json = kp.to_json();
    json.coproduct.pop();
    let text = serde_json::to_string(&json).unwrap();
    assert!(matches!(
        HopfAlgebra::from_json(&text, &tol()),
        Err(Error::ShapeMismatch(_))
    ));
    assert!(matches!(
        HopfAlgebra::from_json("{\"block_dims\": [1]", &tol()),
        Err(Error::Parse(_))
    ));
    let mut json = kp.to_json();
    json.block_dims = vec![1, 1, 1, 1, 1, 1, 1, 1];
    json.counit[3] = [0.0, 0.0];
    let text = serde_json::to_string(&json).unwrap();
    let wrong_blocks = HopfAlgebra::from_json(&text, &tol()).unwrap();
    assert!(!wrong_blocks.verify_axioms(&tol()).passed);
}

#[test]
fn non_group_tables_are_rejected() {
    assert!(matches!(
        FiniteGroup::from_cayley_csv("bad", "0,1\n0,1\n"),
        Err(Error::NotAGroup(_))
    ));
}

fn group_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["Z2", "Z3", "Z4", "S3", "D4", "Z5", "Z6"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coproduct_is_a_star_homomorphism(name in group_name(), dual in any::<bool>(), seed in any::<u64>()) {
        let h = if dual { function_algebra(name) } else { group_algebra(name) };
        let layout = h.tensor_layout();
        let mut rng = Sampler::new(seed);
        let x = rng.gaussian(h.algebra());
        let y = rng.gaussian(h.algebra());
        let dx = h.coproduct_of(&x);
        let dy = h.coproduct_of(&y);
        let dxy = h.coproduct_of(&(&x * &y));
        prop_assert!((layout.mul_pair(&dx, &dy) - &dxy).norm() < 1e-10 * dxy.norm().max(1.0));
        let dxs = h.coproduct_of(&x.adjoint());
        prop_assert!((layout.star_pair(&dx) - dxs).norm() < 1e-10 * dx.norm().max(1.0));
    }

    #[test]
    fn haar_is_tracial_and_invariant(name in group_name(), dual in any::<bool>(), seed in any::<u64>()) {
        let h = if dual { function_algebra(name) } else { group_algebra(name) };
        let mut rng = Sampler::new(seed);
        let x = rng.gaussian(h.algebra());
        let y = rng.gaussian(h.algebra());
        let (xy, yx): (C64, C64) = (h.haar_of(&(&x * &y)), h.haar_of(&(&y * &x)));
        prop_assert!((xy - yx).norm() < 1e-10 * (x.frob() * y.frob()).max(1.0));
        // (id⊗τ)δ(x) = τ(x)1 on pair coordinates.
        let n = h.dim();
        let d = h.coproduct_of(&x);
        let slice = CVec::from_fn(n, |k, _| (0..n).map(|l| d[k * n + l] * h.haar()[l]).sum());
        let expected = h.unit_coords() * h.haar_of(&x);
        prop_assert!((slice - expected).norm() < 1e-10 * x.frob().max(1.0));
    }
}

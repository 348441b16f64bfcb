use fqg_core::algebra::diag;
use fqg_core::dual::{jordan_decompose, pullback, DualHopfAlgebra, Functional, TracialState};
use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::linalg::{c, CMat, ONE, ZERO};
use fqg_core::morphisms::{classify_map, AlgebraMap};
use fqg_core::{BlockAlgebra, Element, Error, Sampler, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn group_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::group_algebra(&FiniteGroup::from_name(name).unwrap(), &tol()).unwrap()
}

fn function_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::function_algebra(&FiniteGroup::from_name(name).unwrap(), &tol()).unwrap()
}

fn lambda(h: &HopfAlgebra, g: usize) -> Element {
    let gb = h.group_basis().unwrap();
    h.algebra()
        .element(&gb.to_mu.column(g).into_owned())
        .unwrap()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort();
    v
}

#[test]
fn dual_of_group_algebra_is_commutative() {
    for name in ["Z2", "Z3", "S3", "D4"] {
        let h = group_algebra(name);
        let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
        assert_eq!(d.algebra().dim(), h.dim());
        assert!(d.algebra().block_dims().iter().all(|&n| n == 1), "{name}");
        assert!(d.hopf().verify_axioms(&tol()).passed);
    }
}

#[test]
fn dual_of_function_algebra_recovers_irreducible_degrees() {
    let d = DualHopfAlgebra::build(&function_algebra("S3"), &tol()).unwrap();
    assert_eq!(sorted(d.algebra().block_dims().to_vec()), vec![1, 1, 2]);
    let d = DualHopfAlgebra::build(&function_algebra("D4"), &tol()).unwrap();
    assert_eq!(
        sorted(d.algebra().block_dims().to_vec()),
        vec![1, 1, 1, 1, 2]
    );
}

#[test]
fn dual_of_kac_paljutkin_is_self_dual_shape() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    assert_eq!(
        sorted(d.algebra().block_dims().to_vec()),
        vec![1, 1, 1, 1, 2]
    );
    assert!(d.hopf().verify_axioms(&tol()).passed);
    assert!(d.product_pairing_residual() < 1e-10);
}

#[test]
fn double_dual_is_isomorphic_through_evaluation() {
    let h = group_algebra("Z3");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let dd = DualHopfAlgebra::build(d.hopf(), &tol()).unwrap();
    let iota = d.canonical_embedding(&dd);
    let cls = classify_map(&iota, &h, dd.hopf(), &tol()).unwrap();
    assert!(cls.is_hopf_star_automorphism(), "{cls:?}");
    assert!(cls.flags.positive);
}

#[test]
fn fourier_of_group_basis_is_point_mass() {
    let h = group_algebra("Z2");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let f: Vec<Element> = (0..2).map(|g| d.fourier(&lambda(&h, g))).collect();
    for g in 0..2 {
        for k in 0..2 {
            let expected = if g == k { ONE } else { ZERO };
            assert!((d.pairing(&lambda(&h, k), &f[g]) - expected).norm() < 1e-12);
            let prod = &f[g] * &f[k];
            let target = if g == k {
                f[g].clone()
            } else {
                d.algebra().zero()
            };
            assert!(prod.rel_diff(&target) < 1e-12);
        }
    }
    assert!((&f[0] + &f[1]).rel_diff(&d.algebra().unit()) < 1e-12);
}

#[test]
fn fourier_of_unit_is_haar_and_of_counit_support_is_scalar() {
    for h in HopfAlgebra::examples(&tol()).unwrap() {
        let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
        let f1 = d.fourier(&h.algebra().unit());
        assert!(f1.rel_diff(&d.to_dual(h.haar())) < 1e-10, "{}", h.name());
        let s = d.fourier_of_counit_support(&tol()).unwrap();
        assert!(s.residual < 1e-10);
        assert!(c(s.re, s.im).norm() > 1e-6);
    }
}

#[test]
fn fourier_pairs_with_trace_and_inverts() {
    let h = group_algebra("S3");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let a = h.algebra();
    let mut rng = Sampler::new(6);
    for _ in 0..5 {
        let b = rng.gaussian(a);
        let fb = d.fourier(&b);
        for k in 0..a.dim() {
            let x = a.basis_element(k);
            assert!((d.pairing(&x, &fb) - h.haar_of(&(&x * &b))).norm() < 1e-10);
        }
        assert!(d.inverse_fourier(&fb).rel_diff(&b) < 1e-10);
    }
}

#[test]
fn z2_convolution_table() {
    let h = group_algebra("Z2");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    for g in 0..2 {
        for k in 0..2 {
            let got = d.convolve(&lambda(&h, g), &lambda(&h, k));
            let expected = if g == k {
                lambda(&h, g)
            } else {
                h.algebra().zero()
            };
            assert!(got.rel_diff(&expected) < 1e-12);
        }
    }
    let unit = h.algebra().unit();
    assert!(d.convolve(&unit, &unit).rel_diff(&unit) < 1e-12);
    assert!(d.convolve(&lambda(&h, 1), &unit).frob() < 1e-12);
}

#[test]
fn self_adjoint_invertible_convolution_can_be_singular() {
    // c = λ₀ + ½λ₁ and y = λ₀ + 2λ₁ are self-adjoint and invertible in ℂ[ℤ₂], but c⋄y = λ₀ + λ₁
    // has spectrum {0, 2}.
    let h = group_algebra("Z2");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let cc = &lambda(&h, 0) + &lambda(&h, 1).scale_re(0.5);
    let y = &lambda(&h, 0) + &lambda(&h, 1).scale_re(2.0);
    for x in [&cc, &y] {
        x.require_self_adjoint(&tol()).unwrap();
        x.require_invertible(&tol()).unwrap();
    }
    let cy = d.convolve(&cc, &y);
    assert!(cy.rel_diff(&(&lambda(&h, 0) + &lambda(&h, 1))) < 1e-12);
    let spec = cy.spectrum(&tol()).unwrap();
    assert!(spec[0].abs() < 1e-12 && (spec[1] - 2.0).abs() < 1e-12);
    assert!(matches!(
        cy.require_invertible(&tol()),
        Err(Error::NotInvertible { .. })
    ));
}

#[test]
fn convolution_is_associative_on_function_algebra_of_s3() {
    let h = function_algebra("S3");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let mut rng = Sampler::new(50);
    for _ in 0..50 {
        let (x, y, z) = (
            rng.gaussian(h.algebra()),
            rng.gaussian(h.algebra()),
            rng.gaussian(h.algebra()),
        );
        let lhs = d.convolve(&d.convolve(&x, &y), &z);
        let rhs = d.convolve(&x, &d.convolve(&y, &z));
        assert!(lhs.rel_diff(&rhs) < tol().eq_tol);
    }
}

#[test]
fn convolution_of_function_algebra_is_group_convolution() {
    // On C(G) with τ uniform, F(f)F(g) pulled back is (1/|G|) Σ_s f(s) g(s⁻¹x).
    let grp = FiniteGroup::from_name("S3").unwrap();
    let h = function_algebra("S3");
    let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
    let mut rng = Sampler::new(12);
    let f = rng.gaussian(h.algebra());
    let g = rng.gaussian(h.algebra());
    let (fc, gc) = (h.algebra().coords(&f), h.algebra().coords(&g));
    let mut expected = [ZERO; 6];
    for s in 0..6 {
        for t in 0..6 {
            expected[grp.mul(s, t)] += fc[s] * gc[t] / c(6.0, 0.0);
        }
    }
    let got = h.algebra().coords(&d.convolve(&f, &g));
    for x in 0..6 {
        assert!((got[x] - expected[x]).norm() < 1e-12);
    }
}

#[test]
fn jordan_decomposition_of_sign_split_density() {
    let a = BlockAlgebra::commutative(2).unwrap();
    let state = TracialState::new(a.clone(), vec![0.5, 0.5]).unwrap();
    let f = Functional::new(state.clone(), diag(&[c(2.0, 0.0), c(-3.0, 0.0)])).unwrap();
    let j = jordan_decompose(&f, &tol()).unwrap();
    assert!(j.projection.rel_diff(&diag(&[ONE, ZERO])) < 1e-14);
    assert!(j.positive.density().rel_diff(&diag(&[c(2.0, 0.0), ZERO])) < 1e-14);
    assert!(j.negative.density().rel_diff(&diag(&[ZERO, c(3.0, 0.0)])) < 1e-14);

    let pos = Functional::new(state, diag(&[c(1.0, 0.0), c(4.0, 0.0)])).unwrap();
    let j = jordan_decompose(&pos, &tol()).unwrap();
    assert!(j.projection.rel_diff(&a.unit()) < 1e-14);
    assert!(j.negative.density().frob() < 1e-14);
}

#[test]
fn jordan_decomposition_of_random_densities() {
    let a = BlockAlgebra::new(vec![2, 1]).unwrap();
    let state = TracialState::new(a.clone(), vec![0.3, 0.4]).unwrap();
    let mut rng = Sampler::new(21);
    for _ in 0..30 {
        let v = rng.sa_invertible(&a);
        let f = Functional::new(state.clone(), v.clone()).unwrap();
        let j = jordan_decompose(&f, &tol()).unwrap();
        let p = &j.projection;
        let q = &a.unit() - p;
        assert!(j.positive.is_positive(&tol()) && j.negative.is_positive(&tol()));
        // Oracle: P is the spectral projection of v onto its positive eigenvalues.
        let spec_pos = v
            .spectrum(&tol())
            .unwrap()
            .iter()
            .filter(|&&l| l > 0.0)
            .count();
        let trace_p: f64 = p.block_traces().iter().map(|t| t.re).sum();
        assert!((trace_p - spec_pos as f64).abs() < 1e-10);
        assert!((&v * p).rel_diff(&(p * &v)) < 1e-10);
        for k in 0..a.dim() {
            let x = a.basis_element(k);
            assert!(j.positive.eval(&(&q * &x)).norm() < 1e-10);
            assert!(j.negative.eval(&(p * &x)).norm() < 1e-10);
            let recon = j.positive.eval(&x) - j.negative.eval(&x);
            assert!((recon - f.eval(&x)).norm() < 1e-10);
        }
    }
}

#[test]
fn jordan_decomposition_rejects_bad_densities() {
    let a = BlockAlgebra::commutative(2).unwrap();
    let state = TracialState::new(a, vec![0.5, 0.5]).unwrap();
    let singular = Functional::new(state.clone(), diag(&[ONE, ZERO])).unwrap();
    assert!(matches!(
        jordan_decompose(&singular, &tol()),
        Err(Error::NotInvertible { .. })
    ));
    let complex = Functional::new(state, diag(&[c(0.0, 1.0), ONE])).unwrap();
    assert!(matches!(
        jordan_decompose(&complex, &tol()),
        Err(Error::NotSelfAdjoint { .. })
    ));
}

#[test]
fn pullback_along_identity_is_the_functional() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let state = TracialState::haar(&h, &tol()).unwrap();
    let mut rng = Sampler::new(1);
    let f = Functional::new(state.clone(), rng.sa_invertible(h.algebra())).unwrap();
    let id = AlgebraMap::identity(h.algebra());
    let g = pullback(&id, &f, &state, &tol()).unwrap();
    assert!(g.density().rel_diff(f.density()) < 1e-12);
}

#[test]
fn pullback_along_coproduct_is_fourier_of_convolution() {
    let mut rng = Sampler::new(14);
    for h in [
        group_algebra("S3"),
        HopfAlgebra::kac_paljutkin(&tol()).unwrap(),
    ] {
        let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
        let tau = TracialState::haar(&h, &tol()).unwrap();
        let delta = AlgebraMap::coproduct(&h);
        let cc = rng.sa_invertible(h.algebra());
        let y = rng.sa_invertible(h.algebra());
        let f = Functional::new(tau.tensor(&tau), cc.tensor(&y)).unwrap();
        let g = pullback(&delta, &f, &tau, &tol()).unwrap();
        assert!(g.is_faithful(&tol()) && g.is_self_adjoint(&tol()));
        let expected = d.functional_values(&d.fourier(&d.convolve(&cc, &y)));
        assert!((g.values() - expected).norm() < 1e-10 * g.values().norm().max(1.0));
    }
}

#[test]
fn pullback_rejects_non_unital_inclusion() {
    let source = BlockAlgebra::commutative(1).unwrap();
    let target = BlockAlgebra::commutative(2).unwrap();
    let inclusion = AlgebraMap::new(
        source.clone(),
        target.clone(),
        CMat::from_column_slice(2, 1, &[ONE, ZERO]),
    );
    let f = Functional::new(
        TracialState::new(target, vec![0.5, 0.5]).unwrap(),
        diag(&[ONE, c(2.0, 0.0)]),
    )
    .unwrap();
    let s = TracialState::new(source, vec![1.0]).unwrap();
    assert!(matches!(
        pullback(&inclusion, &f, &s, &tol()),
        Err(Error::NotStarHom { .. })
    ));
}

#[test]
fn faithfulness_matches_pairing_rank() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let tau = TracialState::haar(&h, &tol()).unwrap();
    let a = h.algebra();
    let mut rng = Sampler::new(30);
    for _ in 0..10 {
        let f = Functional::new(tau.clone(), rng.invertible(a)).unwrap();
        assert!(f.is_faithful(&tol()));
        assert_eq!(f.pairing_rank(&tol()), a.dim());
    }
    let j = h.counit_support(&tol()).unwrap().element;
    let degenerate = Functional::new(tau, &a.unit() - &j).unwrap();
    assert!(!degenerate.is_faithful(&tol()));
    assert!(degenerate.pairing_rank(&tol()) < a.dim());
}

fn example_index() -> impl Strategy<Value = usize> {
    0usize..11
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unit_law_and_fourier_round_trip(idx in example_index(), seed in any::<u64>()) {
        let h = HopfAlgebra::examples(&tol()).unwrap().swap_remove(idx);
        let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
        let mut rng = Sampler::new(seed);
        let x = rng.gaussian(h.algebra());
        let unit = h.algebra().unit();
        let lhs = d.convolve(&x, &unit);
        prop_assert!(lhs.rel_diff(&unit.scale(h.haar_of(&x))) < 1e-9);
        prop_assert!(d.inverse_fourier(&d.fourier(&x)).rel_diff(&x) < 1e-9);
    }

    #[test]
    fn convolution_is_bilinear(idx in example_index(), seed in any::<u64>()) {
        let h = HopfAlgebra::examples(&tol()).unwrap().swap_remove(idx);
        let d = DualHopfAlgebra::build(&h, &tol()).unwrap();
        let mut rng = Sampler::new(seed);
        let a = h.algebra();
        let (x, y, z) = (rng.gaussian(a), rng.gaussian(a), rng.gaussian(a));
        let s = rng.complex_normal();
        let lhs = d.convolve(&(&x + &y.scale(s)), &z);
        let rhs = &d.convolve(&x, &z) + &d.convolve(&y, &z).scale(s);
        prop_assert!(lhs.rel_diff(&rhs) < 1e-9);
    }
}

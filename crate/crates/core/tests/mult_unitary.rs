use fqg_core::biinner::{classify_biinner, BiInnerContext};
use fqg_core::dual::DualHopfAlgebra;
use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::linalg::{self, c, CMat, CVec, ONE, ZERO};
use fqg_core::morphisms::AlgebraMap;
use fqg_core::mult_unitary::{
    pair_from_commutant, path_in_commutant, unitary_power, GnsSpace, MultiplicativeUnitary,
};
use fqg_core::{Element, Error, Sampler, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn group_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::group_algebra(&FiniteGroup::from_name(name).unwrap(), &tol()).unwrap()
}

fn function_algebra(name: &str) -> HopfAlgebra {
    HopfAlgebra::function_algebra(&FiniteGroup::from_name(name).unwrap(), &tol()).unwrap()
}

fn setup(h: &HopfAlgebra) -> (GnsSpace, DualHopfAlgebra, MultiplicativeUnitary) {
    let gns = GnsSpace::build(h).unwrap();
    let dual = DualHopfAlgebra::build(h, &tol()).unwrap();
    let mu = MultiplicativeUnitary::build(&gns, &dual, &tol()).unwrap();
    (gns, dual, mu)
}

fn swap(n: usize) -> CMat {
    let mut s = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(j * n + i, i * n + j)] = ONE;
        }
    }
    s
}

/// The KP symmetry `u = 1⊕1⊕1⊕1⊕diag(1,−1)`, whose conjugation is bi-inner.
fn kp_reflection(h: &HopfAlgebra) -> Element {
    let mut blocks: Vec<CMat> = (0..4).map(|_| CMat::identity(1, 1)).collect();
    blocks.push(CMat::from_diagonal(&CVec::from_vec(vec![ONE, -ONE])));
    h.algebra().from_blocks(blocks).unwrap()
}

fn small_examples() -> Vec<HopfAlgebra> {
    HopfAlgebra::examples(&tol())
        .unwrap()
        .into_iter()
        .filter(|h| h.dim() <= 8)
        .collect()
}

#[test]
fn gns_of_group_algebra_has_orthonormal_group_basis() {
    let h = group_algebra("Z2");
    let gns = GnsSpace::build(&h).unwrap();
    assert_eq!(gns.dim(), 2);
    let gb = h.group_basis().unwrap();
    let vecs: Vec<CVec> = (0..2)
        .map(|g| {
            gns.vector(
                &h.algebra()
                    .element(&gb.to_mu.column(g).into_owned())
                    .unwrap(),
            )
        })
        .collect();
    for g in 0..2 {
        for k in 0..2 {
            let expected = if g == k { ONE } else { ZERO };
            assert!((vecs[g].dotc(&vecs[k]) - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn gns_of_function_algebra_has_uniform_gram() {
    let gns = GnsSpace::build(&function_algebra("S3")).unwrap();
    let expected = CMat::identity(6, 6) * c(1.0 / 6.0, 0.0);
    assert!((gns.gram() - expected).norm() < 1e-14);
}

#[test]
fn gns_representation_is_multiplicative() {
    let mut rng = Sampler::new(2);
    for h in small_examples() {
        let gns = GnsSpace::build(&h).unwrap();
        assert!(gns.rep_residual() < 1e-10);
        let x = rng.gaussian(h.algebra());
        let y = rng.gaussian(h.algebra());
        let lhs = gns.rep(&(&x * &y));
        assert!((lhs - gns.rep(&x) * gns.rep(&y)).norm() < 1e-10 * (x.frob() * y.frob()).max(1.0));
        assert!((gns.rep(&x.adjoint()) - gns.rep(&x).adjoint()).norm() < 1e-10 * x.frob());
    }
}

#[test]
fn haar_not_faithful_is_reported() {
    let h = function_algebra("Z3");
    let mut haar = h.haar().clone();
    haar[2] = ZERO;
    assert!(matches!(
        GnsSpace::build(&h.with_haar(haar)),
        Err(Error::HaarNotFaithful)
    ));
}

#[test]
fn z2_function_algebra_unitary_is_a_translation() {
    // V(δ_s⊗δ_t) = δ_{s+t}⊗δ_t on C(ℤ₂).
    let (_, _, mu) = setup(&function_algebra("Z2"));
    let mut expected = CMat::zeros(4, 4);
    for s in 0..2 {
        for t in 0..2 {
            expected[(((s + t) % 2) * 2 + t, s * 2 + t)] = ONE;
        }
    }
    assert!((mu.matrix() - expected).norm() < 1e-12);
}

#[test]
fn unitary_matches_its_defining_formula() {
    // V(Λx⊗Λy) = (Λ⊗Λ)(σδ(x)(1⊗y)) on matrix units.
    for h in small_examples() {
        let (gns, _, mu) = setup(&h);
        let n = h.dim();
        let layout = h.tensor_layout();
        let unit = h.unit_coords();
        let mut m = CMat::zeros(n * n, n * n);
        for x in 0..n {
            let d = h.coproduct_of(&h.algebra().basis_element(x));
            let flipped = CVec::from_fn(n * n, |r, _| d[(r % n) * n + r / n]);
            for y in 0..n {
                let one_y =
                    CVec::from_fn(n * n, |r, _| if r % n == y { unit[r / n] } else { ZERO });
                m.set_column(x * n + y, &layout.mul_pair(&flipped, &one_y));
            }
        }
        let t = gns.to_onb().kronecker(gns.to_onb());
        let lhs = mu.matrix() * &t;
        let rhs = &t * m;
        assert!((lhs - rhs).norm() < 1e-10, "{}", h.name());
    }
}

#[test]
fn pentagon_holds_by_explicit_leg_numbering() {
    for h in small_examples() {
        let (_, _, mu) = setup(&h);
        let n = h.dim();
        let v = mu.matrix();
        let id = CMat::identity(n, n);
        let v12 = v.kronecker(&id);
        let v23 = id.kronecker(v);
        // V13 acts on legs one and three, identity on leg two.
        let v13 = CMat::from_fn(n * n * n, n * n * n, |r, col| {
            let (i, j, k) = (r / (n * n), (r / n) % n, r % n);
            let (i2, j2, k2) = (col / (n * n), (col / n) % n, col % n);
            if j == j2 {
                v[(i * n + k, i2 * n + k2)]
            } else {
                ZERO
            }
        });
        if n <= 4 {
            let s23 = id.kronecker(&swap(n));
            assert!((&s23 * &v12 * &s23 - &v13).norm() < 1e-12);
        }
        // Apply both sides to random probes instead of forming the full triple products.
        let probes = CMat::from_fn(n * n * n, 4, |i, j| {
            c(
                ((i * 7 + j * 13) % 17) as f64 - 8.0,
                ((i * 3 + j) % 5) as f64,
            )
        });
        let lhs = &v12 * (&v13 * (&v23 * &probes));
        let rhs = &v23 * (&v12 * &probes);
        let residual = (lhs - rhs).norm() / probes.norm();
        assert!(residual < 1e-10, "{}: {residual:e}", h.name());
        assert!((v.adjoint() * v - CMat::identity(n * n, n * n)).norm() < 1e-10);
    }
}

#[test]
fn leg_certificates_for_every_example() {
    for h in small_examples() {
        let (_, _, mu) = setup(&h);
        let cert = mu.certificate();
        assert_eq!(cert.leg_s_dim, h.dim());
        assert_eq!(cert.leg_shat_dim, h.dim());
        assert!(cert.leg_s_distance < 1e-8 && cert.leg_shat_distance < 1e-8);
        assert!(cert.pentagon < 1e-10);
    }
}

#[test]
fn fixed_and_cofixed_vectors_of_z2_functions() {
    let h = function_algebra("Z2");
    let (gns, _, mu) = setup(&h);
    let fs = mu.fixed_and_cofixed(&tol());
    assert_eq!(fs.fixed.ncols(), 1);
    assert_eq!(fs.cofixed.ncols(), 1);
    let unit = gns.vector(&h.algebra().unit()).normalize();
    assert!((fs.fixed.column(0).dotc(&unit).norm() - 1.0).abs() < 1e-12);
    let j = h.counit_support(&tol()).unwrap().element;
    let jv = gns.vector(&j).normalize();
    assert!((fs.cofixed.column(0).dotc(&jv).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn fixed_spaces_carry_the_eigenvector_property() {
    for h in small_examples() {
        let (_, _, mu) = setup(&h);
        let fs = mu.fixed_and_cofixed(&tol());
        assert!(
            fs.fixed.ncols() >= 1 && fs.cofixed.ncols() >= 1,
            "{}",
            h.name()
        );
        assert!(fs.fixed_eigen_residual < 1e-10 && fs.cofixed_eigen_residual < 1e-10);
    }
}

#[test]
fn commutation_test_trivial_cases() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let (_, _, mu) = setup(&h);
    let id = CMat::identity(8, 8);
    assert!(mu.commutation_test(&id, &id, &tol()).unwrap().residual < 1e-14);
    let theta = 0.7;
    let report = mu
        .commutation_test(
            &(&id * c(0.0, theta).exp()),
            &(&id * c(0.0, -theta).exp()),
            &tol(),
        )
        .unwrap();
    assert!(report.residual < 1e-13);
    assert!(matches!(
        mu.commutation_test(&(&id * c(2.0, 0.0)), &id, &tol()),
        Err(Error::NotUnitary { .. })
    ));
}

#[test]
fn planted_biinner_pair_commutes_and_round_trips() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let ctx = BiInnerContext::build(&h, &tol()).unwrap();
    let u = kp_reflection(&h);
    let alpha = AlgebraMap::conjugation(h.algebra(), &u, &tol()).unwrap();
    let verdict = classify_biinner(&alpha, &ctx, &tol());
    let cert = verdict
        .certificate()
        .expect("the KP reflection is bi-inner");
    assert!(cert.commutation.residual < tol().eq_tol);
    assert!(cert.commutation.s_invariance < 1e-8 && cert.commutation.shat_invariance < 1e-8);

    let w = cert.uhat_op.kronecker(&cert.u_op);
    let pair = pair_from_commutant(&w, &ctx.unitary, &ctx.gns, &ctx.dual, &tol()).unwrap();
    assert!(pair.ad_u.distance(&alpha) < 1e-9);
    assert!(pair.classification.is_hopf_star_automorphism());
    assert!(pair.pairing_residual < 1e-9);
    assert!(pair.singular_ratio > 1e6);
}

#[test]
fn commuting_pair_preserves_fixed_and_cofixed_spaces() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let ctx = BiInnerContext::build(&h, &tol()).unwrap();
    let alpha = AlgebraMap::conjugation(h.algebra(), &kp_reflection(&h), &tol()).unwrap();
    let verdict = classify_biinner(&alpha, &ctx, &tol());
    let cert = verdict.certificate().unwrap();
    let fs = ctx.unitary.fixed_and_cofixed(&tol());
    let proj = |basis: &CMat| basis * basis.adjoint();
    let (pf, pc) = (proj(&fs.fixed), proj(&fs.cofixed));
    let moved_fixed = &cert.uhat_op * &fs.fixed;
    let moved_cofixed = &cert.u_op * &fs.cofixed;
    assert!((&moved_fixed - &pf * &moved_fixed).norm() < 1e-10);
    assert!((&moved_cofixed - &pc * &moved_cofixed).norm() < 1e-10);

    // Recomputing after the conjugation V ↦ W*VW gives the same spaces.
    let w = cert.uhat_op.kronecker(&cert.u_op);
    let conj = w.adjoint() * ctx.unitary.matrix() * &w;
    let refs = fqg_core::mult_unitary::FixedSpaces::compute(
        &conj,
        8,
        ctx.unitary.first_leg(),
        ctx.unitary.second_leg(),
        &tol(),
    );
    assert!(linalg::subspace_distance(&refs.fixed, &fs.fixed, 1e-8) < 1e-8);
    assert!(linalg::subspace_distance(&refs.cofixed, &fs.cofixed, 1e-8) < 1e-8);
}

#[test]
fn trivial_commutant_element_gives_identity_maps() {
    let h = group_algebra("S3");
    let (gns, dual, mu) = setup(&h);
    let w = CMat::identity(36, 36);
    let pair = pair_from_commutant(&w, &mu, &gns, &dual, &tol()).unwrap();
    assert!(pair.ad_u.is_identity(&tol()) && pair.ad_uhat.is_identity(&tol()));
    assert!(pair.pairing_residual < 1e-10);
}

#[test]
fn pair_from_commutant_rejects_bad_inputs() {
    let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
    let (gns, dual, mu) = setup(&h);
    // V commutes with itself but is not a simple tensor.
    assert!(matches!(
        pair_from_commutant(mu.matrix(), &mu, &gns, &dual, &tol()),
        Err(Error::NotSimpleTensor { .. })
    ));
    let mut rng = Sampler::new(3);
    let u = fqg_core::BlockAlgebra::new(vec![8]).unwrap();
    let random = rng.haar_unitary(&u).block(0).clone();
    let w = random.kronecker(&CMat::identity(8, 8));
    assert!(matches!(
        pair_from_commutant(&w, &mu, &gns, &dual, &tol()),
        Err(Error::CommutantViolation { .. })
    ));
    assert!(matches!(
        pair_from_commutant(
            &(CMat::identity(64, 64) * c(2.0, 0.0)),
            &mu,
            &gns,
            &dual,
            &tol()
        ),
        Err(Error::NotUnitary { .. })
    ));
}

#[test]
fn path_endpoints_and_monotone_approach_to_identity() {
    // Spectra inside the open right half circle keep the path on the principal branch.
    let a = fqg_core::BlockAlgebra::new(vec![3]).unwrap();
    let mut rng = Sampler::new(8);
    let mut near_one = || {
        let x = rng.hermitian(&a);
        x.scale(c(0.0, 1.4 / x.norm())).exp().block(0).clone()
    };
    let (uh, u) = (near_one(), near_one());
    let h = HopfAlgebra::function_algebra(&FiniteGroup::cyclic(3).unwrap(), &tol()).unwrap();
    let (_, _, mu) = setup(&h);
    let one = path_in_commutant(&uh, &u, 1.0, &mu).unwrap();
    assert!((one.operator - uh.kronecker(&u)).norm() < 1e-10);
    let mut last = f64::INFINITY;
    for r in [1.0, 0.75, 0.5, 0.25, 0.1, 0.01] {
        let p = path_in_commutant(&uh, &u, r, &mu).unwrap();
        assert!(p.distance_to_identity < last);
        last = p.distance_to_identity;
    }
    assert!(last < 0.1);
}

#[test]
fn identity_component_pairs_commute_along_the_path() {
    let mut rng = Sampler::new(19);
    for h in small_examples() {
        let ctx = BiInnerContext::build(&h, &tol()).unwrap();
        let x = ctx.model.random_lie_element(&mut rng);
        let alpha = AlgebraMap::conjugation(h.algebra(), &x.exp(), &tol()).unwrap();
        let verdict = classify_biinner(&alpha, &ctx, &tol());
        let cert = verdict.certificate().unwrap();
        for r in [0.25, 0.5, 0.75] {
            let p = path_in_commutant(&cert.uhat_op, &cert.u_op, r, &ctx.unitary).unwrap();
            assert!(p.commutation_residual < tol().eq_tol, "{} at {r}", h.name());
        }
    }
}

#[test]
fn unitary_power_composes() {
    let a = fqg_core::BlockAlgebra::new(vec![4]).unwrap();
    let mut rng = Sampler::new(4);
    let u = rng.haar_unitary(&a).block(0).clone();
    let half = unitary_power(&u, 0.5).unwrap();
    assert!((&half * &half - &u).norm() < 1e-10);
    let third = unitary_power(&u, 1.0 / 3.0).unwrap();
    assert!((&third * &third * &third - &u).norm() < 1e-10);
    assert!((half.adjoint() * &half - CMat::identity(4, 4)).norm() < 1e-10);
}

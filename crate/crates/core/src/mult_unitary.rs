//! GNS space of the Haar state, the multiplicative unitary `V ∈ Ŝ⊗S`, its pentagon and
//! leg-algebra certificates, fixed and cofixed vectors, and the commutant of `V` among simple
//! tensors.
//!
//! Convention: `V(Λx ⊗ Λy) = (Λ⊗Λ)(σδ(x)(1⊗y))` with `σ` the tensor flip. Writing
//! `δ(x) = Σ_{k,l} D[kN+l, x] e_k⊗e_l`, this is `V = Σ_k X_k ⊗ L(e_k)` with
//! `X_k Λx = Σ_l D[kN+l, x] Λe_l`; the first leg is the image of `Â` under the
//! anti-representation `f ↦ (f⊗id)δ`, the second leg is the left-regular image of `A`.

use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::dual::DualHopfAlgebra;
use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
#[cfg(test)]
use crate::linalg::ONE;
use crate::linalg::{self, CMat, CVec, C64};
use crate::morphisms::{
    classify_map, largest_entry_phase, pairing_invariance_residual, AlgebraMap, MapClassification,
};
use crate::tolerance::ToleranceConfig;

/// Singular-value ratio above which a realigned operator counts as a simple tensor.
pub const SIMPLE_TENSOR_RATIO: f64 = 1e6;

/// The Hilbert space `L²(A, τ)` with an orthonormal basis from Gram–Schmidt on matrix units.
#[derive(Debug, Clone)]
pub struct GnsSpace {
    hopf: HopfAlgebra,
    gram: CMat,
    /// `y = to_onb · x` maps matrix-unit coordinates of `Λx` to orthonormal coordinates.
    to_onb: CMat,
    from_onb: CMat,
}

impl GnsSpace {
    pub fn build(h: &HopfAlgebra) -> Result<Self> {
        let gram = h.haar_gram();
        let chol = Cholesky::new(gram.clone()).ok_or(Error::HaarNotFaithful)?;
        let l = chol.l();
        let to_onb = l.adjoint();
        let from_onb = to_onb.clone().try_inverse().ok_or(Error::HaarNotFaithful)?;
        Ok(Self {
            hopf: h.clone(),
            gram,
            to_onb,
            from_onb,
        })
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn dim(&self) -> usize {
        self.hopf.dim()
    }

    /// `gram[k, l] = τ(e_k* e_l)`.
    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn to_onb(&self) -> &CMat {
        &self.to_onb
    }

    /// `Λx` in orthonormal coordinates.
    pub fn vector(&self, x: &Element) -> CVec {
        &self.to_onb * self.hopf.algebra().coords(x)
    }

    /// Transport an operator given on matrix-unit coordinates to orthonormal coordinates.
    pub fn operator(&self, m: &CMat) -> CMat {
        &self.to_onb * m * &self.from_onb
    }

    /// Left-regular representation `π(x)` in orthonormal coordinates.
    pub fn rep(&self, x: &Element) -> CMat {
        self.operator(&self.hopf.algebra().left_mult_matrix(x))
    }

    /// Largest defect of `π` being a unital *-homomorphism over basis pairs.
    pub fn rep_residual(&self) -> f64 {
        let a = self.hopf.algebra();
        let n = a.dim();
        let mut worst = linalg::frob(&(self.rep(&a.unit()) - CMat::identity(n, n)));
        for k in 0..n {
            let ek = a.basis_element(k);
            let rk = self.rep(&ek);
            worst = worst.max(linalg::frob(&(self.rep(&ek.adjoint()) - rk.adjoint())));
            for l in 0..n {
                let el = a.basis_element(l);
                worst = worst.max(linalg::frob(
                    &(self.rep(&(&ek * &el)) - &rk * self.rep(&el)),
                ));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicativeUnitaryCertificate {
    pub unitarity: f64,
    pub pentagon: f64,
    /// Subspace distance between the second-leg slices of `V` and `π(A)`.
    pub leg_s_distance: f64,
    /// Subspace distance between the first-leg slices of `V` and the image of `Â`.
    pub leg_shat_distance: f64,
    pub leg_s_dim: usize,
    pub leg_shat_dim: usize,
    /// Defect of `f ↦ (f⊗id)δ` being an anti-representation of `Â`.
    pub anti_representation: f64,
}

#[derive(Debug, Clone)]
pub struct MultiplicativeUnitary {
    matrix: CMat,
    n: usize,
    first_leg: Vec<CMat>,
    second_leg: Vec<CMat>,
    certificate: MultiplicativeUnitaryCertificate,
}

fn slices_first(v: &CMat, n: usize) -> CMat {
    // (ω_pq ⊗ id)V for matrix units ω_pq, each vectorised as a column.
    let mut out = CMat::zeros(n * n, n * n);
    for p in 0..n {
        for q in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out[(i * n + j, p * n + q)] = v[(p * n + i, q * n + j)];
                }
            }
        }
    }
    out
}

fn slices_second(v: &CMat, n: usize) -> CMat {
    let mut out = CMat::zeros(n * n, n * n);
    for p in 0..n {
        for q in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out[(i * n + j, p * n + q)] = v[(i * n + p, j * n + q)];
                }
            }
        }
    }
    out
}

fn vectorise(ms: &[CMat]) -> CMat {
    let n = ms[0].nrows();
    let mut out = CMat::zeros(n * n, ms.len());
    for (c, m) in ms.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                out[(i * n + j, c)] = m[(i, j)];
            }
        }
    }
    out
}

/// `‖V₁₂V₁₃V₂₃ − V₂₃V₁₂‖_F` for `V = Σ_k A_k ⊗ B_k` on `ℂⁿ⊗ℂⁿ`.
pub fn pentagon_residual(v: &CMat, first: &[CMat], second: &[CMat]) -> f64 {
    let n = first[0].nrows();
    let id = CMat::identity(n, n);
    let v12 = v.kronecker(&id);
    let v23 = id.kronecker(v);
    let mut v13 = CMat::zeros(n * n * n, n * n * n);
    for (a, b) in first.iter().zip(second) {
        v13 += a.kronecker(&id).kronecker(b);
    }
    linalg::frob(&(&v12 * &v13 * &v23 - &v23 * &v12))
}

impl MultiplicativeUnitary {
    /// Build and certify `V`; fails when the pentagon or a leg check does not hold.
    pub fn build(gns: &GnsSpace, dual: &DualHopfAlgebra, tol: &ToleranceConfig) -> Result<Self> {
        let h = gns.hopf();
        if h.dim() != dual.primal().dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: dual.primal().dim(),
            });
        }
        let n = h.dim();
        let d = h.coproduct();
        let first_leg: Vec<CMat> = (0..n)
            .map(|k| gns.operator(&d.rows(k * n, n).into_owned()))
            .collect();
        let a = h.algebra();
        let second_leg: Vec<CMat> = (0..n).map(|k| gns.rep(&a.basis_element(k))).collect();
        let mut matrix = CMat::zeros(n * n, n * n);
        for (x, l) in first_leg.iter().zip(&second_leg) {
            matrix += x.kronecker(l);
        }

        let unitarity = linalg::frob(&(matrix.adjoint() * &matrix - CMat::identity(n * n, n * n)));
        if unitarity > tol.eq_tol {
            return Err(Error::NotUnitary {
                residual: unitarity,
            });
        }
        let pentagon = pentagon_residual(&matrix, &first_leg, &second_leg);
        if pentagon > tol.eq_tol {
            return Err(Error::PentagonFailed { residual: pentagon });
        }

        let mu = Self {
            matrix,
            n,
            first_leg,
            second_leg,
            certificate: MultiplicativeUnitaryCertificate {
                unitarity,
                pentagon,
                leg_s_distance: 0.0,
                leg_shat_distance: 0.0,
                leg_s_dim: 0,
                leg_shat_dim: 0,
                anti_representation: 0.0,
            },
        };

        let rank_tol = tol.eq_tol.sqrt() * 1e-2;
        let s_slices = slices_first(&mu.matrix, n);
        let shat_slices = slices_second(&mu.matrix, n);
        let s_ref = vectorise(&mu.second_leg);
        let ahat = dual.algebra();
        let shat_ref = vectorise(
            &(0..n)
                .map(|m| mu.dual_leg(dual, &ahat.basis_element(m)))
                .collect::<Vec<_>>(),
        );
        let leg_s_distance = linalg::subspace_distance(&s_slices, &s_ref, rank_tol);
        let leg_shat_distance = linalg::subspace_distance(&shat_slices, &shat_ref, rank_tol);
        let leg_s_dim = linalg::rank(&s_slices, rank_tol);
        let leg_shat_dim = linalg::rank(&shat_slices, rank_tol);
        let mut anti = 0.0f64;
        for p in 0..n {
            let ep = ahat.basis_element(p);
            let xp = mu.dual_leg(dual, &ep);
            for q in 0..n {
                let eq = ahat.basis_element(q);
                let lhs = mu.dual_leg(dual, &(&ep * &eq));
                let rhs = mu.dual_leg(dual, &eq) * &xp;
                anti = anti.max(linalg::frob(&(lhs - rhs)));
            }
        }
        let distance = leg_s_distance.max(leg_shat_distance);
        if distance > tol.eq_tol || leg_s_dim != n || leg_shat_dim != n || anti > tol.eq_tol {
            return Err(Error::LegMismatch {
                distance: distance.max(anti),
            });
        }
        let certificate = MultiplicativeUnitaryCertificate {
            unitarity,
            pentagon,
            leg_s_distance,
            leg_shat_distance,
            leg_s_dim,
            leg_shat_dim,
            anti_representation: anti,
        };
        Ok(Self { certificate, ..mu })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn certificate(&self) -> &MultiplicativeUnitaryCertificate {
        &self.certificate
    }

    /// `X_k`, the first-leg slices against the dual basis of matrix units.
    pub fn first_leg(&self) -> &[CMat] {
        &self.first_leg
    }

    /// `π(e_k)`, the second-leg slices.
    pub fn second_leg(&self) -> &[CMat] {
        &self.second_leg
    }

    /// `X(f) = (f⊗id)δ` on `H` for the functional `f` represented by `â`.
    pub fn dual_leg(&self, dual: &DualHopfAlgebra, ahat: &Element) -> CMat {
        let f = dual.functional_values(ahat);
        let mut out = CMat::zeros(self.n, self.n);
        for (k, x) in self.first_leg.iter().enumerate() {
            out += x * f[k];
        }
        out
    }

    /// Operators `(Û, π(u))` on `H` for `û ∈ Â`, `u ∈ A`; `Û = X(û)*` since `X` reverses products.
    pub fn pair_operators(
        &self,
        gns: &GnsSpace,
        dual: &DualHopfAlgebra,
        uhat: &Element,
        u: &Element,
    ) -> (CMat, CMat) {
        (self.dual_leg(dual, uhat).adjoint(), gns.rep(u))
    }

    pub fn fixed_and_cofixed(&self, tol: &ToleranceConfig) -> FixedSpaces {
        FixedSpaces::compute(&self.matrix, self.n, &self.first_leg, &self.second_leg, tol)
    }

    /// `‖V(Û⊗U) − (Û⊗U)V‖` plus the leg-invariance residuals of `(Û*⊗U*)V(Û⊗U)`.
    pub fn commutation_test(
        &self,
        uhat: &CMat,
        u: &CMat,
        tol: &ToleranceConfig,
    ) -> Result<CommutationReport> {
        let n = self.n;
        for m in [uhat, u] {
            let residual = linalg::frob(&(m.adjoint() * m - CMat::identity(n, n)));
            if residual > tol.eq_tol.sqrt() * 1e-1 {
                return Err(Error::NotUnitary { residual });
            }
        }
        let w = uhat.kronecker(u);
        let residual = linalg::frob(&(&self.matrix * &w - &w * &self.matrix));
        let conj = w.adjoint() * &self.matrix * &w;
        let rank_tol = tol.eq_tol.sqrt() * 1e-2;
        let s_invariance = linalg::subspace_distance(
            &slices_first(&conj, n),
            &slices_first(&self.matrix, n),
            rank_tol,
        );
        let shat_invariance = linalg::subspace_distance(
            &slices_second(&conj, n),
            &slices_second(&self.matrix, n),
            rank_tol,
        );
        Ok(CommutationReport {
            residual,
            s_invariance,
            shat_invariance,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub residual: f64,
    pub s_invariance: f64,
    pub shat_invariance: f64,
}

/// Fixed vectors `ξ` (`V(ξ⊗η) = ξ⊗η` for all `η`) and cofixed vectors `η` (for all `ξ`).
#[derive(Debug, Clone)]
pub struct FixedSpaces {
    /// Orthonormal columns.
    pub fixed: CMat,
    pub cofixed: CMat,
    /// `Ŝ` maps each fixed vector to a multiple of itself.
    pub fixed_eigen_residual: f64,
    /// `S` maps each cofixed vector to a multiple of itself.
    pub cofixed_eigen_residual: f64,
}

fn eigenvector_residual(ops: &[CMat], space: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for v in space.column_iter() {
        let v = v.into_owned();
        for op in ops {
            let w = op * &v;
            let lambda = v.dotc(&w);
            worst = worst.max(linalg::frob_vec(&(w - &v * lambda)));
        }
    }
    worst
}

impl FixedSpaces {
    pub fn compute(
        v: &CMat,
        n: usize,
        first: &[CMat],
        second: &[CMat],
        tol: &ToleranceConfig,
    ) -> Self {
        let dv = v - CMat::identity(n * n, n * n);
        let mut fixed_sys = CMat::zeros(n * n * n, n);
        let mut cofixed_sys = CMat::zeros(n * n * n, n);
        for j in 0..n {
            for i in 0..n {
                // column ξ = e_i, η = e_j  →  index i*n + j
                fixed_sys
                    .view_mut((j * n * n, i), (n * n, 1))
                    .copy_from(&dv.column(i * n + j));
                // column η = e_i, ξ = e_j  →  index j*n + i
                cofixed_sys
                    .view_mut((j * n * n, i), (n * n, 1))
                    .copy_from(&dv.column(j * n + i));
            }
        }
        let null_tol = tol.eq_tol.sqrt() * 1e-2;
        let fixed = linalg::null_space(&fixed_sys, null_tol);
        let cofixed = linalg::null_space(&cofixed_sys, null_tol);
        Self {
            fixed_eigen_residual: eigenvector_residual(first, &fixed),
            cofixed_eigen_residual: eigenvector_residual(second, &cofixed),
            fixed,
            cofixed,
        }
    }
}

/// The automorphisms induced by a simple-tensor unitary `Û⊗U` commuting with `V`.
#[derive(Debug, Clone)]
pub struct CommutantPair {
    pub u: Element,
    pub uhat: Element,
    pub u_op: CMat,
    pub uhat_op: CMat,
    pub singular_ratio: f64,
    pub commutation_residual: f64,
    /// Defect of `β(Ad(u)x, Ad(û)ŷ) = β(x, ŷ)`.
    pub pairing_residual: f64,
    pub ad_u: AlgebraMap,
    pub ad_uhat: AlgebraMap,
    pub classification: MapClassification,
}

fn vec_of(m: &CMat) -> CVec {
    let n = m.nrows();
    CVec::from_fn(n * m.ncols(), |k, _| m[(k / m.ncols(), k % m.ncols())])
}

/// Recover `(Ad(u), Ad(û))` from a simple-tensor unitary commuting with `V`.
pub fn pair_from_commutant(
    w: &CMat,
    mu: &MultiplicativeUnitary,
    gns: &GnsSpace,
    dual: &DualHopfAlgebra,
    tol: &ToleranceConfig,
) -> Result<CommutantPair> {
    let n = mu.dim();
    if w.shape() != (n * n, n * n) {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: w.nrows(),
        });
    }
    let unitarity = linalg::frob(&(w.adjoint() * w - CMat::identity(n * n, n * n)));
    if unitarity > tol.eq_tol.sqrt() * 1e-1 {
        return Err(Error::NotUnitary {
            residual: unitarity,
        });
    }
    let commutation_residual = linalg::frob(&(mu.matrix() * w - w * mu.matrix()));
    if commutation_residual > tol.eq_tol {
        return Err(Error::CommutantViolation {
            residual: commutation_residual,
        });
    }
    // Realignment: W[(i,j),(k,l)] = A[i,k] B[j,l]  ⇔  R[(i,k),(j,l)] rank one.
    let mut r = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r[(i * n + k, j * n + l)] = w[(i * n + j, k * n + l)];
                }
            }
        }
    }
    let svd = linalg::svd(&r);
    let sv = &svd.singular_values;
    let (s1, s2) = (sv[0], sv[1]);
    let singular_ratio = if s2 == 0.0 { f64::INFINITY } else { s1 / s2 };
    if singular_ratio <= SIMPLE_TENSOR_RATIO {
        return Err(Error::NotSimpleTensor {
            ratio: singular_ratio,
        });
    }
    let col = svd.u.column(0);
    let row = svd.v.column(0);
    let mut a_op = CMat::from_fn(n, n, |i, k| col[i * n + k] * s1);
    let mut b_op = CMat::from_fn(n, n, |j, l| row[j * n + l].conj());
    let scale = ((&b_op * b_op.adjoint()).trace().re / n as f64).sqrt();
    b_op /= C64::new(scale, 0.0);
    a_op *= C64::new(scale, 0.0);
    let phase = largest_entry_phase(&b_op);
    let canon = &b_op * phase.conj();
    b_op = canon;
    a_op *= phase;

    let a = gns.hopf().algebra();
    let s_basis = vectorise(mu.second_leg());
    let (u_coords, u_res) = linalg::least_squares(&s_basis, &vec_of(&b_op));
    let shat_basis = vectorise(mu.first_leg());
    let (f, f_res) = linalg::least_squares(&shat_basis, &vec_of(&a_op.adjoint()));
    let leg = u_res.max(f_res);
    if leg > tol.eq_tol.sqrt() * 1e-1 {
        return Err(Error::LegMismatch { distance: leg });
    }
    let u = a.element_unchecked(&u_coords);
    let uhat = dual.to_dual(&f);
    let ad_u = AlgebraMap::conjugation(a, &u, tol)?;
    let ad_uhat = AlgebraMap::conjugation(dual.algebra(), &uhat, tol)?;
    let pairing_residual = pairing_invariance_residual(&ad_u, &ad_uhat, dual);
    let h = gns.hopf();
    let classification = classify_map(&ad_u, h, h, tol)?;
    Ok(CommutantPair {
        u,
        uhat,
        u_op: b_op,
        uhat_op: a_op,
        singular_ratio,
        commutation_residual,
        pairing_residual,
        ad_u,
        ad_uhat,
        classification,
    })
}

/// `m^r` for a unitary `m`, with the branch cut in the widest gap of its spectrum.
pub fn unitary_power(m: &CMat, r: f64) -> Result<CMat> {
    let (vals, _, _) = linalg::normal_eigen(m);
    let mut angles: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    angles.sort_by(f64::total_cmp);
    let mut best = (0.0, 0.0);
    for k in 0..angles.len() {
        let (a, b) = if k + 1 < angles.len() {
            (angles[k], angles[k + 1])
        } else {
            (angles[k], angles[0] + std::f64::consts::TAU)
        };
        if b - a > best.0 {
            best = (b - a, 0.5 * (a + b));
        }
    }
    if best.0 < 1e-9 {
        return Err(Error::SpectrumFullCircle);
    }
    let shift = std::f64::consts::PI - best.1;
    let rot = C64::from_polar(1.0, shift);
    let rotated = m * rot;
    let p = linalg::normal_function(&rotated, |z| (z.ln() * r).exp());
    Ok(p * C64::from_polar(1.0, -shift * r))
}

#[derive(Debug, Clone)]
pub struct PathPoint {
    pub r: f64,
    pub operator: CMat,
    pub commutation_residual: f64,
    pub distance_to_identity: f64,
}

/// `Û^r ⊗ U^r` along the path from `1⊗1`.
pub fn path_in_commutant(
    uhat: &CMat,
    u: &CMat,
    r: f64,
    mu: &MultiplicativeUnitary,
) -> Result<PathPoint> {
    let w = unitary_power(uhat, r)?.kronecker(&unitary_power(u, r)?);
    let n2 = w.nrows();
    Ok(PathPoint {
        r,
        commutation_residual: linalg::frob(&(mu.matrix() * &w - &w * mu.matrix())),
        distance_to_identity: linalg::frob(&(&w - CMat::identity(n2, n2))),
        operator: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn setup(h: &HopfAlgebra) -> (GnsSpace, DualHopfAlgebra, MultiplicativeUnitary) {
        let gns = GnsSpace::build(h).unwrap();
        let dual = DualHopfAlgebra::build(h, &tol()).unwrap();
        let mu = MultiplicativeUnitary::build(&gns, &dual, &tol()).unwrap();
        (gns, dual, mu)
    }

    #[test]
    fn z2_function_algebra_unitary_is_a_permutation() {
        let h = HopfAlgebra::function_algebra(&FiniteGroup::cyclic(2).unwrap(), &tol()).unwrap();
        let (_, _, mu) = setup(&h);
        let v = mu.matrix();
        for z in v.iter() {
            assert!(z.norm() < 1e-12 || (z - ONE).norm() < 1e-12);
        }
        let fs = mu.fixed_and_cofixed(&tol());
        assert_eq!(fs.fixed.ncols(), 1);
        assert_eq!(fs.cofixed.ncols(), 1);
    }

    #[test]
    fn kac_paljutkin_pentagon_and_legs() {
        let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
        let (gns, _, mu) = setup(&h);
        let c = mu.certificate();
        assert!(c.pentagon < 1e-10 && c.leg_s_distance < 1e-9 && c.leg_shat_distance < 1e-9);
        assert!(gns.rep_residual() < 1e-10);
    }

    #[test]
    fn trivial_pair_round_trips() {
        let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
        let (gns, dual, mu) = setup(&h);
        let w = CMat::identity(64, 64);
        let pair = pair_from_commutant(&w, &mu, &gns, &dual, &tol()).unwrap();
        assert!(pair.ad_u.is_identity(&tol()));
        assert!(pair.ad_uhat.is_identity(&tol()));
    }

    #[test]
    fn unitary_power_interpolates() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![
            C64::from_polar(1.0, 3.0),
            C64::from_polar(1.0, -3.0),
            ONE,
        ]));
        let half = unitary_power(&m, 0.5).unwrap();
        assert!(linalg::frob(&(&half * &half - &m)) < 1e-12);
        assert!(linalg::frob(&(unitary_power(&m, 1.0).unwrap() - &m)) < 1e-12);
    }
}

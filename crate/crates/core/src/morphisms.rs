//! Linear maps between block algebras and their classification: *-automorphisms, Jordan maps,
//! Hopf (co-anti-)automorphisms, induced dual actions, inner implementers, and the
//! conjugation pipeline with its counit-support perturbation.

use serde::{Deserialize, Serialize};

use crate::algebra::{BlockAlgebra, Element};
use crate::dual::DualHopfAlgebra;
use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::linalg::{self, CMat, C64, I, ONE};
use crate::tolerance::ToleranceConfig;

/// A linear map between block algebras, as a matrix on matrix-unit coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraMap {
    source: BlockAlgebra,
    target: BlockAlgebra,
    matrix: CMat,
}

/// Boolean structure flags of a map; each is backed by the residual of the same name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFlags {
    pub multiplicative: bool,
    pub anti_multiplicative: bool,
    pub star_preserving: bool,
    pub unital: bool,
    pub positive: bool,
    pub jordan: bool,
    pub bijective: bool,
    pub hopf: bool,
    pub co_anti_hopf: bool,
    pub centre_fixing: bool,
    pub cocentre_fixing: bool,
}

/// Residuals backing [`MapFlags`]. `positive` is the most negative eigenvalue found on the
/// positivity test family (0 when none is negative); `bijective` is the smallest singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapResiduals {
    pub multiplicative: f64,
    pub anti_multiplicative: f64,
    pub star_preserving: f64,
    pub unital: f64,
    pub positive: f64,
    pub jordan: f64,
    pub sigma_min: f64,
    pub hopf: f64,
    pub co_anti_hopf: f64,
    pub centre_fixing: f64,
    pub cocentre_fixing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapClassification {
    pub flags: MapFlags,
    pub residuals: MapResiduals,
}

impl MapClassification {
    pub fn is_star_automorphism(&self) -> bool {
        let f = &self.flags;
        f.multiplicative && f.star_preserving && f.unital && f.bijective
    }

    pub fn is_hopf_star_automorphism(&self) -> bool {
        self.is_star_automorphism() && self.flags.hopf
    }
}

fn sum_sq(acc: &mut f64, x: &Element) {
    *acc += x.frob().powi(2);
}

impl AlgebraMap {
    pub fn new(source: BlockAlgebra, target: BlockAlgebra, matrix: CMat) -> Self {
        assert_eq!(
            matrix.shape(),
            (target.dim(), source.dim()),
            "map matrix shape"
        );
        Self {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(a: &BlockAlgebra) -> Self {
        Self::new(a.clone(), a.clone(), CMat::identity(a.dim(), a.dim()))
    }

    pub fn from_fn(
        source: &BlockAlgebra,
        target: &BlockAlgebra,
        f: impl Fn(&Element) -> Element,
    ) -> Self {
        let mut m = CMat::zeros(target.dim(), source.dim());
        for k in 0..source.dim() {
            m.set_column(k, &target.coords(&f(&source.basis_element(k))));
        }
        Self::new(source.clone(), target.clone(), m)
    }

    /// `x ↦ v x v⁻¹`.
    pub fn conjugation(a: &BlockAlgebra, v: &Element, tol: &ToleranceConfig) -> Result<Self> {
        let vi = v.invert(tol)?;
        Ok(Self::from_fn(a, a, |x| &(v * x) * &vi))
    }

    /// Blockwise transpose.
    pub fn transpose_map(a: &BlockAlgebra) -> Self {
        Self::from_fn(a, a, |x| x.transpose())
    }

    /// The coproduct as a map `A → A⊗A`.
    pub fn coproduct(h: &HopfAlgebra) -> Self {
        let layout = h.tensor_layout();
        let n = h.dim();
        let mut m = CMat::zeros(n * n, n);
        for (p, &mu) in layout.pair_to_mu.iter().enumerate() {
            m.set_row(mu, &h.coproduct().row(p));
        }
        Self::new(h.algebra().clone(), layout.algebra.clone(), m)
    }

    pub fn source(&self) -> &BlockAlgebra {
        &self.source
    }

    pub fn target(&self) -> &BlockAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.target
            .element_unchecked(&(&self.matrix * self.source.coords(x)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        AlgebraMap::new(
            other.source.clone(),
            self.target.clone(),
            &self.matrix * &other.matrix,
        )
    }

    pub fn inverse(&self, tol: &ToleranceConfig) -> Result<AlgebraMap> {
        let sigma_min = linalg::sigma_min(&self.matrix);
        if self.source.dim() != self.target.dim() || !(sigma_min > tol.inv_tol) {
            return Err(Error::NotInvertible { sigma_min });
        }
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::NotInvertible { sigma_min })?;
        Ok(AlgebraMap::new(
            self.target.clone(),
            self.source.clone(),
            inv,
        ))
    }

    /// Relative Frobenius distance between two maps' matrices.
    pub fn distance(&self, other: &AlgebraMap) -> f64 {
        linalg::rel_diff(&self.matrix, &other.matrix)
    }

    pub fn is_identity(&self, tol: &ToleranceConfig) -> bool {
        self.source == self.target
            && linalg::rel_diff(
                &self.matrix,
                &CMat::identity(self.source.dim(), self.source.dim()),
            ) <= tol.eq_tol
    }

    fn images(&self) -> Vec<Element> {
        (0..self.source.dim())
            .map(|k| self.apply(&self.source.basis_element(k)))
            .collect()
    }

    fn product_residuals(&self) -> (f64, f64, f64) {
        let imgs = self.images();
        let (mut mult, mut anti, mut jordan, mut scale) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..self.source.dim() {
            let ek = self.source.basis_element(k);
            for l in 0..self.source.dim() {
                let el = self.source.basis_element(l);
                let lhs = self.apply(&(&ek * &el));
                let xy = &imgs[k] * &imgs[l];
                let yx = &imgs[l] * &imgs[k];
                sum_sq(&mut mult, &(&lhs - &xy));
                sum_sq(&mut anti, &(&lhs - &yx));
                sum_sq(&mut scale, &xy);
                let sym = self.apply(&(&(&ek * &el) + &(&el * &ek)));
                sum_sq(&mut jordan, &(&sym - &(&xy + &yx)));
            }
        }
        let s = scale.sqrt().max(1.0);
        (mult.sqrt() / s, anti.sqrt() / s, jordan.sqrt() / s)
    }

    pub fn multiplicative_residual(&self) -> f64 {
        self.product_residuals().0
    }

    pub fn star_residual(&self) -> f64 {
        let imgs = self.images();
        let (mut acc, mut scale) = (0.0, 0.0);
        for (k, img) in imgs.iter().enumerate() {
            let lhs = self.apply(&self.source.basis_element(k).adjoint());
            sum_sq(&mut acc, &(&lhs - &img.adjoint()));
            sum_sq(&mut scale, img);
        }
        acc.sqrt() / scale.sqrt().max(1.0)
    }

    /// Most negative eigenvalue (relative) over images of `b*b` with `b` ranging over matrix
    /// units and the sums `e_k + e_l`, `e_k + i e_l` of units in the same block.
    pub fn positivity_defect(&self) -> f64 {
        let a = &self.source;
        let mut family: Vec<Element> = (0..a.dim()).map(|k| a.basis_element(k)).collect();
        for k in 0..a.dim() {
            for l in (k + 1)..a.dim() {
                if a.label(k).block != a.label(l).block {
                    continue;
                }
                let (ek, el) = (a.basis_element(k), a.basis_element(l));
                family.push(&ek + &el);
                family.push(&ek + &el.scale(I));
            }
        }
        let mut worst = 0.0f64;
        for b in family {
            let img = self.apply(&(&b.adjoint() * &b));
            let herm = (&img + &img.adjoint()).scale_re(0.5);
            let herm_defect = (&img - &herm).frob();
            let spec = herm.spectrum_unchecked();
            let min = spec.first().copied().unwrap_or(0.0);
            let scale = img.norm().max(1.0);
            worst = worst.max((-min).max(0.0) / scale + herm_defect / scale);
        }
        worst
    }

    fn hopf_residuals(&self, hs: &HopfAlgebra, ht: &HopfAlgebra) -> (f64, f64) {
        let n = hs.dim();
        let lhs = ht.coproduct() * &self.matrix;
        let rhs = self.matrix.kronecker(&self.matrix) * hs.coproduct();
        let flip = linalg::swap_matrix(n);
        let scale = linalg::frob(&rhs).max(1.0);
        (
            linalg::frob(&(&lhs - &rhs)) / scale,
            linalg::frob(&(&lhs - flip * &rhs)) / scale,
        )
    }

    fn fixing_residual(&self, family: &[Element]) -> f64 {
        family
            .iter()
            .map(|z| (&self.apply(z) - z).frob() / z.frob().max(1e-300))
            .fold(0.0, f64::max)
    }
}

/// Evaluate every structure flag of `phi` relative to Hopf structures on source and target.
pub fn classify_map(
    phi: &AlgebraMap,
    hs: &HopfAlgebra,
    ht: &HopfAlgebra,
    tol: &ToleranceConfig,
) -> Result<MapClassification> {
    if phi.source.dim() != hs.dim() {
        return Err(Error::DimensionMismatch {
            expected: hs.dim(),
            found: phi.source.dim(),
        });
    }
    if phi.target.dim() != ht.dim() || phi.source.dim() != phi.target.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.source.dim(),
            found: phi.target.dim(),
        });
    }
    let (mult, anti, jordan) = phi.product_residuals();
    let star = phi.star_residual();
    let unital = phi.apply(&phi.source.unit()).rel_diff(&phi.target.unit());
    let positive = phi.positivity_defect();
    let sigma_min = linalg::sigma_min(&phi.matrix);
    let (hopf, co_anti) = phi.hopf_residuals(hs, ht);
    let same = phi.source == phi.target;
    let centre: Vec<Element> = (0..phi.source.num_blocks())
        .map(|b| phi.source.central_projection(b))
        .collect();
    let centre_fixing = if same {
        phi.fixing_residual(&centre)
    } else {
        f64::INFINITY
    };
    let cocentre_fixing = if same {
        phi.fixing_residual(&hs.cocentre_basis(tol))
    } else {
        f64::INFINITY
    };
    let e = tol.eq_tol;
    let flags = MapFlags {
        multiplicative: mult <= e,
        anti_multiplicative: anti <= e,
        star_preserving: star <= e,
        unital: unital <= e,
        positive: positive <= tol.psd_tol.max(e),
        jordan: jordan <= e,
        bijective: sigma_min > tol.inv_tol,
        hopf: hopf <= e,
        co_anti_hopf: co_anti <= e,
        centre_fixing: centre_fixing <= e,
        cocentre_fixing: cocentre_fixing <= e,
    };
    Ok(MapClassification {
        flags,
        residuals: MapResiduals {
            multiplicative: mult,
            anti_multiplicative: anti,
            star_preserving: star,
            unital,
            positive,
            jordan,
            sigma_min,
            hopf,
            co_anti_hopf: co_anti,
            centre_fixing,
            cocentre_fixing,
        },
    })
}

/// Whether a block of a Jordan map is multiplicative or anti-multiplicative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockTag {
    Auto,
    AntiAuto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockJordan {
    pub tags: Vec<BlockTag>,
    pub auto_residuals: Vec<f64>,
    pub anti_residuals: Vec<f64>,
    /// Mass of `φ` outside the block-diagonal part, relative to its norm.
    pub direct_sum_residual: f64,
}

/// Split a unital positive bijective centre-fixing map into per-block automorphisms and
/// anti-automorphisms.
pub fn per_block_jordan_decomposition(
    phi: &AlgebraMap,
    tol: &ToleranceConfig,
) -> Result<BlockJordan> {
    let a = &phi.source;
    if a != &phi.target {
        return Err(Error::PreconditionFailed(
            "per-block decomposition needs a map of an algebra to itself".into(),
        ));
    }
    let centre: Vec<Element> = (0..a.num_blocks())
        .map(|b| a.central_projection(b))
        .collect();
    let residual = phi.fixing_residual(&centre);
    if residual > tol.eq_tol {
        return Err(Error::NotBlockPreserving { residual });
    }
    let unital = phi.apply(&a.unit()).rel_diff(&a.unit());
    if unital > tol.eq_tol {
        return Err(Error::PreconditionFailed(format!(
            "map is not unital (residual {unital:.3e})"
        )));
    }
    let sigma_min = linalg::sigma_min(&phi.matrix);
    if !(sigma_min > tol.inv_tol) {
        return Err(Error::PreconditionFailed(format!(
            "map is not bijective (smallest singular value {sigma_min:.3e})"
        )));
    }
    let positive = phi.positivity_defect();
    if positive > tol.psd_tol.max(tol.eq_tol) {
        return Err(Error::PreconditionFailed(format!(
            "map is not positive (defect {positive:.3e})"
        )));
    }

    let mut leak = 0.0f64;
    for k in 0..a.dim() {
        let b = a.label(k).block;
        let img = phi.apply(&a.basis_element(k));
        for (c, m) in img.blocks().iter().enumerate() {
            if c != b {
                leak += linalg::frob(m).powi(2);
            }
        }
    }
    let direct_sum_residual = leak.sqrt() / linalg::frob(&phi.matrix).max(1.0);

    let mut tags = Vec::new();
    let mut auto_residuals = Vec::new();
    let mut anti_residuals = Vec::new();
    for (b, &n) in a.block_dims().iter().enumerate() {
        let units: Vec<usize> = (0..n * n).map(|i| a.block_offset(b) + i).collect();
        let (mut auto, mut anti, mut scale) = (0.0, 0.0, 0.0);
        for &k in &units {
            let ek = a.basis_element(k);
            let ik = phi.apply(&ek);
            for &l in &units {
                let el = a.basis_element(l);
                let il = phi.apply(&el);
                let lhs = phi.apply(&(&ek * &el));
                let xy = &ik * &il;
                sum_sq(&mut auto, &(&lhs - &xy));
                sum_sq(&mut anti, &(&lhs - &(&il * &ik)));
                sum_sq(&mut scale, &xy);
            }
        }
        let s = scale.sqrt().max(1.0);
        let (auto, anti) = (auto.sqrt() / s, anti.sqrt() / s);
        auto_residuals.push(auto);
        anti_residuals.push(anti);
        let tag = if auto <= tol.eq_tol && (n == 1 || auto < anti) {
            BlockTag::Auto
        } else if anti <= tol.eq_tol && anti < auto {
            BlockTag::AntiAuto
        } else {
            return Err(Error::NeitherAutoNorAnti {
                block: b,
                auto,
                anti,
            });
        };
        tags.push(tag);
    }
    Ok(BlockJordan {
        tags,
        auto_residuals,
        anti_residuals,
        direct_sum_residual,
    })
}

/// The dual action `α̂` of an automorphism, fixed by `β(α(x), α̂(ŷ)) = β(x, ŷ)`.
pub fn induced_dual_action(
    alpha: &AlgebraMap,
    dual: &DualHopfAlgebra,
    tol: &ToleranceConfig,
) -> Result<AlgebraMap> {
    let inv = alpha.inverse(tol)?;
    // In dual-basis coordinates α̂ = (Φ⁻¹)ᵀ.
    let m = dual.to_blocks() * inv.matrix().transpose() * dual.from_blocks();
    Ok(AlgebraMap::new(
        dual.algebra().clone(),
        dual.algebra().clone(),
        m,
    ))
}

/// Largest relative defect of `β(α(x), α̂(ŷ)) = β(x, ŷ)` over basis pairs.
pub fn pairing_invariance_residual(
    alpha: &AlgebraMap,
    alpha_hat: &AlgebraMap,
    dual: &DualHopfAlgebra,
) -> f64 {
    let a = alpha.source();
    let ah = alpha_hat.source();
    let mut worst = 0.0f64;
    for p in 0..a.dim() {
        let x = a.basis_element(p);
        let ax = alpha.apply(&x);
        for q in 0..ah.dim() {
            let y = ah.basis_element(q);
            let lhs = dual.pairing(&ax, &alpha_hat.apply(&y));
            let rhs = dual.pairing(&x, &y);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `ŷ ↦ F(c) ⋄̂ ŷ ⋄̂ F(c⁻¹)` on `Â`, checked against the dual action of `x ↦ c⁻¹ x c`.
pub fn dual_sandwich(
    c: &Element,
    dual: &DualHopfAlgebra,
    tol: &ToleranceConfig,
) -> Result<AlgebraMap> {
    let h = dual.primal();
    let ci = c
        .invert(tol)
        .map_err(|e| Error::PreconditionFailed(format!("sandwich element: {e}")))?;
    let cocentre = h.cocentre_basis(tol);
    let fixing = cocentre
        .iter()
        .map(|z| (&(&(c * z) * &ci) - z).frob())
        .fold(0.0, f64::max);
    if fixing > tol.eq_tol * c.norm().max(1.0) * ci.norm().max(1.0) {
        return Err(Error::PreconditionFailed(format!(
            "conjugation by the sandwich element moves the co-centre (residual {fixing:.3e})"
        )));
    }
    let a = dual.fourier(c);
    let b = dual.fourier(&ci);
    let ha = dual.algebra();
    let sandwich = AlgebraMap::from_fn(ha, ha, |y| {
        dual.dual_convolve(&dual.dual_convolve(&a, y), &b)
    });
    let ad_inv = AlgebraMap::conjugation(h.algebra(), &ci, tol)?;
    let expected = induced_dual_action(&ad_inv, dual, tol)?;
    let residual = sandwich.distance(&expected);
    if residual > tol.eq_tol * (c.norm() * ci.norm()).max(1.0) {
        return Err(Error::ConventionMismatch { residual });
    }
    Ok(sandwich)
}

/// A unitary `u` with `α = Ad(u)`, when `α` fixes every minimal central projection.
pub fn inner_implementer(alpha: &AlgebraMap, tol: &ToleranceConfig) -> Option<Element> {
    let a = &alpha.source;
    if a != &alpha.target {
        return None;
    }
    let centre: Vec<Element> = (0..a.num_blocks())
        .map(|b| a.central_projection(b))
        .collect();
    if alpha.fixing_residual(&centre) > tol.eq_tol {
        return None;
    }
    let mut blocks = Vec::with_capacity(a.num_blocks());
    for (b, &n) in a.block_dims().iter().enumerate() {
        if n == 1 {
            blocks.push(CMat::identity(1, 1));
            continue;
        }
        let units: Vec<usize> = (0..n * n).map(|i| a.block_offset(b) + i).collect();
        // Unknown u (n×n, row-major); equations α(x)u − ux = 0 for x in the block.
        let mut sys = CMat::zeros(n * n * n * n, n * n);
        for (xi, &k) in units.iter().enumerate() {
            let x = a.basis_element(k);
            let ax = alpha.apply(&x);
            let axb = ax.block(b);
            let xb = x.block(b);
            for p in 0..n {
                for q in 0..n {
                    let mut e = CMat::zeros(n, n);
                    e[(p, q)] = ONE;
                    let r = axb * &e - &e * xb;
                    for i in 0..n {
                        for j in 0..n {
                            sys[(xi * n * n + i * n + j, p * n + q)] = r[(i, j)];
                        }
                    }
                }
            }
        }
        let ns = linalg::null_space(&sys, tol.eq_tol.sqrt() * 1e-2);
        if ns.ncols() == 0 {
            return None;
        }
        let v = ns.column(0);
        let m = CMat::from_fn(n, n, |i, j| v[i * n + j]);
        blocks.push(canonical_phase(&linalg::unitary_part(&m)));
    }
    let u = a.from_blocks(blocks).ok()?;
    let ad = AlgebraMap::conjugation(a, &u, tol).ok()?;
    if ad.distance(alpha) > tol.eq_tol.sqrt() * 1e-1 {
        return None;
    }
    Some(u)
}

/// Unit-modulus phase of the largest-magnitude entry (first one on ties); 1 for zero.
pub fn largest_entry_phase(m: &CMat) -> C64 {
    let mut best = C64::new(0.0, 0.0);
    for z in m.iter() {
        if z.norm() > best.norm() + 1e-12 {
            best = *z;
        }
    }
    if best.norm() == 0.0 {
        ONE
    } else {
        best / best.norm()
    }
}

/// Rotate by a phase so that the largest-magnitude entry is real and positive.
pub fn canonical_phase(m: &CMat) -> CMat {
    m * largest_entry_phase(m).conj()
}

/// Outcome of the conjugation pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugationClass {
    HopfAuto,
    CoAntiAuto,
}

/// One classification stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineStage {
    pub epsilon: f64,
    pub classification: ConjugationClass,
    pub tags: Vec<BlockTag>,
    pub hopf_residual: f64,
    pub co_anti_residual: f64,
    /// Defect of the perturbed-inverse formula against a direct inversion.
    pub inverse_formula_residual: f64,
    pub fourier_sigma_min: f64,
    pub fourier_inverse_sigma_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineCertificate {
    pub classification: ConjugationClass,
    pub perturbed: bool,
    /// Epsilon values tried by the doubling search (empty when no perturbation was needed).
    pub search_trail: Vec<f64>,
    pub stages: Vec<PipelineStage>,
    pub counit_value: [f64; 2],
}

/// Inverse of `v + εj` from the closed form `v⁻¹ − ε j / (φ(v)(ε + φ(v)))`.
pub fn perturbed_inverse(v_inv: &Element, j: &Element, phi_v: C64, eps: f64) -> Element {
    let e = C64::new(eps, 0.0);
    v_inv - &j.scale(e / (phi_v * (e + phi_v)))
}

const EPS_START: f64 = 1e-6;
const EPS_CAP: f64 = 1e-2;

/// Classify `x ↦ v x v⁻¹` for an invertible κ-symmetric co-centre-commuting `v`.
pub fn proposition_pipeline(
    v: &Element,
    dual: &DualHopfAlgebra,
    tol: &ToleranceConfig,
) -> Result<PipelineCertificate> {
    let h = dual.primal();
    let a = h.algebra();
    a.check(v)?;
    let v_inv = v
        .invert(tol)
        .map_err(|e| Error::PreconditionFailed(format!("v is not invertible: {e}")))?;
    let theta_res = h.theta(v).rel_diff(v);
    if theta_res > tol.eq_tol {
        return Err(Error::PreconditionFailed(format!(
            "v is not κ-symmetric (residual {theta_res:.3e})"
        )));
    }
    let cocentre = h.cocentre_basis(tol);
    let comm = cocentre
        .iter()
        .map(|z| v.commutator(z).frob())
        .fold(0.0, f64::max)
        / v.frob().max(1.0);
    if comm > tol.eq_tol {
        return Err(Error::PreconditionFailed(format!(
            "v does not commute with the co-centre (residual {comm:.3e})"
        )));
    }
    let j = h.counit_support(tol)?.element;
    let phi_v = h.counit_of(v);

    let stage = |eps: f64| pipeline_stage(v, &v_inv, &j, phi_v, dual, eps, tol);

    let clears = |eps: f64| {
        let vt = v + &j.scale_re(eps);
        let vt_inv = perturbed_inverse(&v_inv, &j, phi_v, eps);
        dual.fourier(&vt).sigma_min() > tol.inv_tol
            && dual.fourier(&vt_inv).sigma_min() > tol.inv_tol
    };

    let (stages, trail, perturbed) = if clears(0.0) {
        (vec![stage(0.0)?], Vec::new(), false)
    } else {
        if phi_v.norm() <= tol.inv_tol {
            return Err(Error::PreconditionFailed(
                "counit of v vanishes; the perturbation is undefined".into(),
            ));
        }
        let mut eps = EPS_START;
        let mut trail = vec![eps];
        while !clears(eps) {
            eps *= 2.0;
            if eps > EPS_CAP {
                return Err(Error::PreconditionFailed(format!(
                    "no perturbation up to {EPS_CAP} makes both Fourier images invertible"
                )));
            }
            trail.push(eps);
        }
        (vec![stage(2.0 * eps)?, stage(eps)?], trail, true)
    };
    let classification = stages[0].classification;
    if let Some(s) = stages.iter().find(|s| s.classification != classification) {
        return Err(Error::ClassificationUnstable(format!(
            "{:?} at ε = {:e} vs {:?} at ε = {:e}",
            classification, stages[0].epsilon, s.classification, s.epsilon
        )));
    }
    Ok(PipelineCertificate {
        classification,
        perturbed,
        search_trail: trail,
        stages,
        counit_value: [phi_v.re, phi_v.im],
    })
}

fn pipeline_stage(
    v: &Element,
    v_inv: &Element,
    j: &Element,
    phi_v: C64,
    dual: &DualHopfAlgebra,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<PipelineStage> {
    let h = dual.primal();
    let a = h.algebra();
    let vt = &(v + &j.scale_re(eps));
    let vt_inv = if eps == 0.0 {
        v_inv.clone()
    } else {
        perturbed_inverse(v_inv, j, phi_v, eps)
    };
    let direct = vt.invert(tol)?;
    let inverse_formula_residual = vt_inv.rel_diff(&direct);
    let fs = dual.fourier(vt).sigma_min();
    let fis = dual.fourier(&vt_inv).sigma_min();
    let sandwich = dual_sandwich(vt, dual, tol)?;
    let jordan = per_block_jordan_decomposition(&sandwich, tol)?;
    let ad = AlgebraMap::conjugation(a, vt, tol)?;
    let cls = classify_map(&ad, h, h, tol)?;
    let classification = if cls.flags.hopf {
        ConjugationClass::HopfAuto
    } else if cls.flags.co_anti_hopf {
        ConjugationClass::CoAntiAuto
    } else {
        return Err(Error::PreconditionFailed(format!(
            "conjugation is neither a Hopf automorphism nor a co-anti-automorphism \
             (residuals {:.3e} / {:.3e})",
            cls.residuals.hopf, cls.residuals.co_anti_hopf
        )));
    };
    Ok(PipelineStage {
        epsilon: eps,
        classification,
        tags: jordan.tags,
        hopf_residual: cls.residuals.hopf,
        co_anti_residual: cls.residuals.co_anti_hopf,
        inverse_formula_residual,
        fourier_sigma_min: fs,
        fourier_inverse_sigma_min: fis,
    })
}

/// Classify `Ad(v + εj)` through the dual sandwich at one fixed `ε` (`j` the counit support),
/// without the preconditions or the ε search of [`proposition_pipeline`].
pub fn classify_perturbed(
    v: &Element,
    dual: &DualHopfAlgebra,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<PipelineStage> {
    let h = dual.primal();
    let v_inv = v.invert(tol)?;
    let j = h.counit_support(tol)?.element;
    pipeline_stage(v, &v_inv, &j, h.counit_of(v), dual, eps, tol)
}

/// `‖Ad(v + εj) − Ad(v)‖` for each `ε`.
pub fn perturbation_distances(
    v: &Element,
    h: &HopfAlgebra,
    eps: &[f64],
    tol: &ToleranceConfig,
) -> Result<Vec<f64>> {
    let j = h.counit_support(tol)?.element;
    let base = AlgebraMap::conjugation(h.algebra(), v, tol)?;
    eps.iter()
        .map(|&e| {
            let ad = AlgebraMap::conjugation(h.algebra(), &(v + &j.scale_re(e)), tol)?;
            Ok(linalg::frob(&(ad.matrix() - base.matrix())))
        })
        .collect()
}

/// Largest distance from the centre of `φ(z)` over the central projections `z`.
pub fn centre_preservation_residual(phi: &AlgebraMap) -> f64 {
    let a = phi.source();
    (0..a.num_blocks())
        .map(|b| {
            let img = phi.apply(&a.central_projection(b));
            let centred = img.map_blocks(|m| {
                let n = m.nrows();
                CMat::identity(n, n) * (m.trace() / C64::new(n as f64, 0.0))
            });
            (&img - &centred).frob()
        })
        .fold(0.0, f64::max)
}

/// Whether `φ` is unital, positive, bijective with positive inverse and bijective on the
/// centre; such maps are multiplicative against central elements.
pub fn has_bimodule_hypotheses(
    phi: &AlgebraMap,
    cls: &MapClassification,
    tol: &ToleranceConfig,
) -> bool {
    let f = &cls.flags;
    if !(f.unital && f.positive && f.bijective) || phi.source() != phi.target() {
        return false;
    }
    let Ok(inv) = phi.inverse(tol) else {
        return false;
    };
    let scale = phi.source().unit().frob();
    inv.positivity_defect() <= tol.psd_tol
        && centre_preservation_residual(phi) <= tol.eq_tol * scale
        && centre_preservation_residual(&inv) <= tol.eq_tol * scale
}

/// Residuals of `φ(az) = φ(a)φ(z)` (central `z`) and `φ(b²) = φ(b)²` (self-adjoint `b`).
pub fn bimodule_residuals(phi: &AlgebraMap, samples: &[(Element, Element)]) -> (f64, f64) {
    let (mut bimod, mut square) = (0.0f64, 0.0f64);
    for (a, z) in samples {
        let lhs = phi.apply(&(a * z));
        let rhs = &phi.apply(a) * &phi.apply(z);
        bimod = bimod.max(lhs.rel_diff(&rhs));
        let b = (a + &a.adjoint()).scale_re(0.5);
        let fb = phi.apply(&b);
        square = square.max(phi.apply(&(&b * &b)).rel_diff(&(&fb * &fb)));
    }
    (bimod, square)
}

/// Coordinates helper used by the harnesses: central element with the given block values.
pub fn central_element(a: &BlockAlgebra, values: &[C64]) -> Element {
    let mut z = a.zero();
    for (b, &v) in values.iter().enumerate() {
        z = &z + &a.central_projection(b).scale(v);
    }
    z
}

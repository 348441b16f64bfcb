//! Bi-inner Hopf *-automorphisms: the Lie algebra `𝔤` of κ-symmetric skew-adjoint elements
//! commuting with the co-centre, membership in the identity component of the corresponding
//! unitary group, the definitional classifier, and the sampling harness that compares the two.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::algebra::Element;
use crate::dual::DualHopfAlgebra;
use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::linalg::{self, CMat, C64, ONE};
use crate::morphisms::{classify_map, induced_dual_action, inner_implementer, AlgebraMap};
use crate::mult_unitary::{path_in_commutant, CommutationReport, GnsSpace, MultiplicativeUnitary};
use crate::random::Sampler;
use crate::tolerance::ToleranceConfig;

/// Path parameters at which bi-inner verdicts are checked for connectivity.
pub const PATH_POINTS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Distance from `-1` below which the principal logarithm is not trusted.
const LOG_GAP: f64 = 1e-6;

/// Fixed seed for the perturbations used when a spectrum reaches `-1`.
const PERTURBATION_SEED: u64 = 0x1a9_5eed;

fn realified_coords(x: &Element, a: &crate::algebra::BlockAlgebra) -> nalgebra::DVector<f64> {
    let c = a.coords(x);
    let n = c.len();
    nalgebra::DVector::from_fn(2 * n, |k, _| if k < n { c[k].re } else { c[k - n].im })
}

/// The group of κ-symmetric unitaries commuting with the co-centre, through its Lie algebra.
#[derive(Debug, Clone)]
pub struct BiInnerGroupModel {
    hopf: HopfAlgebra,
    cocentre: Vec<Element>,
    lie_basis: Vec<Element>,
    /// Realified coordinates of `lie_basis` as orthonormal columns.
    lie_matrix: nalgebra::DMatrix<f64>,
    /// `θ(1_b) = 1_{block_permutation[b]}` for `θ = κ∘*`.
    block_permutation: Vec<usize>,
    closure_residual: f64,
}

impl BiInnerGroupModel {
    pub fn build(h: &HopfAlgebra, tol: &ToleranceConfig) -> Result<Self> {
        let a = h.algebra();
        let n = a.dim();
        let cocentre = h.cocentre_basis(tol);
        let lift = |f: &dyn Fn(&Element) -> Element| {
            linalg::realify(n, |v| a.coords(&f(&a.element_unchecked(v))))
        };
        let mut rows = vec![
            lift(&|x| x + &x.adjoint()),
            lift(&|x| &h.antipode_of(&x.adjoint()) - x),
        ];
        for c in &cocentre {
            rows.push(lift(&|x| x.commutator(c)));
        }
        let total: usize = rows.iter().map(|r| r.nrows()).sum();
        let mut stacked = nalgebra::DMatrix::<f64>::zeros(total, 2 * n);
        let mut off = 0;
        for r in &rows {
            stacked.view_mut((off, 0), (r.nrows(), 2 * n)).copy_from(r);
            off += r.nrows();
        }
        let lie_matrix = linalg::real_null_space(&stacked, tol.eq_tol.sqrt() * 1e-2);
        let lie_basis: Vec<Element> = lie_matrix
            .column_iter()
            .map(|col| a.element_unchecked(&linalg::complexify(&col.into_owned())))
            .collect();

        let mut block_permutation = Vec::with_capacity(a.num_blocks());
        for b in 0..a.num_blocks() {
            let img = h.theta(&a.central_projection(b));
            let target = (0..a.num_blocks())
                .find(|&c| img.rel_diff(&a.central_projection(c)) <= tol.eq_tol.sqrt())
                .ok_or_else(|| {
                    Error::PreconditionFailed(
                        "κ∘* does not permute the minimal central projections".into(),
                    )
                })?;
            block_permutation.push(target);
        }

        let mut model = Self {
            hopf: h.clone(),
            cocentre,
            lie_basis,
            lie_matrix,
            block_permutation,
            closure_residual: 0.0,
        };
        let mut closure = 0.0f64;
        for i in 0..model.lie_basis.len() {
            for j in (i + 1)..model.lie_basis.len() {
                let br = model.lie_basis[i].commutator(&model.lie_basis[j]);
                closure = closure.max(model.lie_residual(&br));
            }
        }
        model.closure_residual = closure;
        Ok(model)
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn lie_basis(&self) -> &[Element] {
        &self.lie_basis
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_basis.len()
    }

    pub fn cocentre(&self) -> &[Element] {
        &self.cocentre
    }

    pub fn block_permutation(&self) -> &[usize] {
        &self.block_permutation
    }

    /// Largest distance of a bracket of basis elements from `𝔤`.
    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    /// Orthogonal projection onto `𝔤` (in realified coordinates).
    pub fn project(&self, x: &Element) -> Element {
        let a = self.hopf.algebra();
        let v = realified_coords(x, a);
        let p = &self.lie_matrix * (self.lie_matrix.transpose() * &v);
        a.element_unchecked(&linalg::complexify(&p))
    }

    /// Relative distance of `x` from `𝔤`.
    pub fn lie_residual(&self, x: &Element) -> f64 {
        (x - &self.project(x)).frob() / x.frob().max(1.0)
    }

    /// Residuals of the three defining conditions of `𝔤` at `x`.
    pub fn defining_residuals(&self, x: &Element) -> [f64; 3] {
        let h = &self.hopf;
        [
            (x + &x.adjoint()).frob(),
            (&h.antipode_of(&x.adjoint()) - x).frob(),
            self.cocentre
                .iter()
                .map(|c| x.commutator(c).frob())
                .fold(0.0, f64::max),
        ]
    }

    /// `exp(tX)` for `X ∈ 𝔤`.
    pub fn sample_identity_component(
        &self,
        x: &Element,
        t: f64,
        tol: &ToleranceConfig,
    ) -> Result<Element> {
        self.hopf.algebra().check(x)?;
        let residual = self.lie_residual(x);
        if residual > tol.eq_tol {
            return Err(Error::NotInLieAlgebra { residual });
        }
        Ok(x.scale_re(t).exp())
    }

    /// A random element of `𝔤` with standard Gaussian coordinates.
    pub fn random_lie_element(&self, rng: &mut Sampler) -> Element {
        let mut x = self.hopf.algebra().zero();
        for b in &self.lie_basis {
            x = &x + &b.scale_re(rng.normal());
        }
        x
    }

    /// Defect of `u` being κ-symmetric modulo central unitaries: the distance of `θ(u)u*`
    /// from the centre.
    pub fn kappa_central_residual(&self, u: &Element) -> f64 {
        let c = &self.hopf.theta(u) * &u.adjoint();
        central_defect(&c)
    }

    pub fn cocentre_residual(&self, u: &Element) -> f64 {
        self.cocentre
            .iter()
            .map(|c| u.commutator(c).frob())
            .fold(0.0, f64::max)
            / u.frob().max(1.0)
    }

    /// Whether `Ad(u) = Ad(exp X)` for some `X ∈ 𝔤`, i.e. `u = z·exp(X)` with `z` a central
    /// unitary.
    pub fn identity_component_member(&self, u: &Element, tol: &ToleranceConfig) -> Membership {
        let a = self.hopf.algebra();
        let not = |reason: String| Membership {
            member: false,
            central: None,
            generator: None,
            residual: f64::NAN,
            reason: Some(reason),
        };
        let ures = u.unitary_residual();
        if ures > tol.eq_tol.sqrt() * 1e-1 {
            return not(format!("not unitary (residual {ures:.3e})"));
        }
        let cres = self.cocentre_residual(u);
        if cres > tol.eq_tol.sqrt() * 1e-1 {
            return not(format!(
                "does not commute with the co-centre (residual {cres:.3e})"
            ));
        }
        let c = &self.hopf.theta(u) * &u.adjoint();
        let defect = central_defect(&c);
        if defect > tol.eq_tol.sqrt() * 1e-1 {
            return not(format!(
                "no central unitary makes it κ-symmetric (defect {defect:.3e})"
            ));
        }
        let scalars: Vec<C64> = c
            .blocks()
            .iter()
            .map(|m| m.trace() / C64::new(m.nrows() as f64, 0.0))
            .collect();
        // Solve z_{π(b)} z_b = c_b blockwise (π is an involution).
        let perm = &self.block_permutation;
        let mut base = vec![ONE; a.num_blocks()];
        let mut fixed = Vec::new();
        for b in 0..a.num_blocks() {
            let p = perm[b];
            if p == b {
                base[b] = scalars[b].sqrt();
                fixed.push(b);
            } else if b < p {
                if (scalars[b] - scalars[p]).norm() > tol.eq_tol.sqrt() * 1e-1 {
                    return not("inconsistent central factors on exchanged blocks".into());
                }
                base[b] = ONE;
                base[p] = scalars[b];
            }
        }
        let combos = 1usize << fixed.len().min(16);
        let mut best_residual = f64::INFINITY;
        let mut last_reason = String::from("spectrum meets −1 and 𝔤 offers no way around it");
        for mask in 0..combos {
            let mut z = base.clone();
            for (bit, &b) in fixed.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    z[b] = -z[b];
                }
            }
            let zc = crate::morphisms::central_element(a, &z);
            let w = &zc * u;
            let theta_res = self.hopf.theta(&w).rel_diff(&w);
            if theta_res > tol.eq_tol.sqrt() * 1e-1 {
                continue;
            }
            match self.log_in_lie(&w) {
                Ok((x, residual)) => {
                    if residual <= tol.eq_tol.sqrt() * 1e-1 {
                        return Membership {
                            member: true,
                            central: Some(zc.adjoint()),
                            generator: Some(x),
                            residual,
                            reason: None,
                        };
                    }
                    best_residual = best_residual.min(residual);
                    last_reason = format!("logarithm leaves 𝔤 (residual {residual:.3e})");
                }
                Err(reason) => last_reason = reason,
            }
        }
        Membership {
            member: false,
            central: None,
            generator: None,
            residual: best_residual,
            reason: Some(last_reason),
        }
    }

    /// A logarithm `X ∈ 𝔤` of `w` (κ-symmetric unitary commuting with the co-centre), either
    /// principal or, when the spectrum reaches `-1`, after a small move inside the group.
    fn log_in_lie(&self, w: &Element) -> std::result::Result<(Element, f64), String> {
        let gap = |w: &Element| {
            w.normal_spectrum()
                .iter()
                .map(|z| (z + ONE).norm())
                .fold(f64::INFINITY, f64::min)
        };
        if gap(w) > LOG_GAP {
            let x = w.log_normal();
            let x = (&x - &x.adjoint()).scale_re(0.5);
            return Ok((x.clone(), self.lie_residual(&x)));
        }
        if self.lie_basis.is_empty() {
            return Err("spectrum meets −1 and 𝔤 = 0".into());
        }
        let mut rng = Sampler::new(PERTURBATION_SEED);
        for _ in 0..4 {
            let y = self.random_lie_element(&mut rng);
            let y = y.scale_re(1e-2 / y.norm().max(1e-300));
            let shifted = w * &y.exp();
            if gap(&shifted) > LOG_GAP {
                let x = shifted.log_normal();
                let x = (&x - &x.adjoint()).scale_re(0.5);
                let residual = self.lie_residual(&x);
                // w = exp(x)·exp(−y), both factors in the identity component.
                return Ok((x, residual));
            }
        }
        Err("spectrum meets −1 and small moves inside the group do not leave it".into())
    }
}

/// Distance of an element from the centre (relative).
fn central_defect(c: &Element) -> f64 {
    let mut acc = 0.0;
    for m in c.blocks() {
        let n = m.nrows();
        let s = m.trace() / C64::new(n as f64, 0.0);
        acc += linalg::frob(&(m - CMat::identity(n, n) * s)).powi(2);
    }
    acc.sqrt() / c.frob().max(1.0)
}

#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    /// `z` with `u = z·exp(X)`.
    pub central: Option<Element>,
    pub generator: Option<Element>,
    pub residual: f64,
    pub reason: Option<String>,
}

/// Everything the classifiers need, built once per Hopf algebra.
#[derive(Debug, Clone)]
pub struct BiInnerContext {
    pub hopf: HopfAlgebra,
    pub dual: DualHopfAlgebra,
    pub gns: GnsSpace,
    pub unitary: MultiplicativeUnitary,
    pub model: BiInnerGroupModel,
}

impl BiInnerContext {
    pub fn build(h: &HopfAlgebra, tol: &ToleranceConfig) -> Result<Self> {
        let dual = DualHopfAlgebra::build(h, tol)?;
        let gns = GnsSpace::build(h)?;
        let unitary = MultiplicativeUnitary::build(&gns, &dual, tol)?;
        let model = BiInnerGroupModel::build(h, tol)?;
        Ok(Self {
            hopf: h.clone(),
            dual,
            gns,
            unitary,
            model,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathCheck {
    pub r: f64,
    pub commutation_residual: f64,
}

#[derive(Debug, Clone)]
pub struct BiInnerCertificate {
    pub u: Element,
    pub uhat: Element,
    pub uhat_op: CMat,
    pub u_op: CMat,
    pub commutation: CommutationReport,
    pub kappa_central_residual: f64,
    pub cocentre_residual: f64,
    pub membership: Membership,
    pub path: Vec<PathCheck>,
    pub path_error: Option<String>,
    /// Whether `α` is the identity map.
    pub trivial: bool,
}

impl BiInnerCertificate {
    /// Largest commutation residual along the path; infinite when the path could not be built.
    pub fn max_path_residual(&self) -> f64 {
        if self.path_error.is_some() {
            return f64::INFINITY;
        }
        self.path
            .iter()
            .map(|p| p.commutation_residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    BiInner(Box<BiInnerCertificate>),
    NotBiInner { reason: String },
}

impl Verdict {
    pub fn is_biinner(&self) -> bool {
        matches!(self, Verdict::BiInner(_))
    }

    pub fn certificate(&self) -> Option<&BiInnerCertificate> {
        match self {
            Verdict::BiInner(c) => Some(c),
            Verdict::NotBiInner { .. } => None,
        }
    }
}

/// Decide by definition whether `α` is a Hopf *-automorphism that is inner on `A` and whose
/// dual action is inner on `Â`; attach both characterisations' certificates.
pub fn classify_biinner(
    alpha: &AlgebraMap,
    ctx: &BiInnerContext,
    tol: &ToleranceConfig,
) -> Verdict {
    let not = |reason: String| Verdict::NotBiInner { reason };
    let h = &ctx.hopf;
    let cls = match classify_map(alpha, h, h, tol) {
        Ok(c) => c,
        Err(e) => return not(format!("classification failed: {e}")),
    };
    if !cls.is_hopf_star_automorphism() {
        return not(format!(
            "not a Hopf *-automorphism (multiplicative {:.2e}, star {:.2e}, Hopf {:.2e})",
            cls.residuals.multiplicative, cls.residuals.star_preserving, cls.residuals.hopf
        ));
    }
    let Some(u) = inner_implementer(alpha, tol) else {
        return not("not inner on the algebra".into());
    };
    let alpha_hat = match induced_dual_action(alpha, &ctx.dual, tol) {
        Ok(m) => m,
        Err(e) => return not(format!("dual action failed: {e}")),
    };
    let Some(uhat) = inner_implementer(&alpha_hat, tol) else {
        return not("dual action is not inner".into());
    };
    let (uhat_op, u_op) = ctx.unitary.pair_operators(&ctx.gns, &ctx.dual, &uhat, &u);
    let commutation = match ctx.unitary.commutation_test(&uhat_op, &u_op, tol) {
        Ok(c) => c,
        Err(e) => return not(format!("implementers are not unitary on H: {e}")),
    };
    let mut path = Vec::new();
    let mut path_error = None;
    for r in PATH_POINTS {
        match path_in_commutant(&uhat_op, &u_op, r, &ctx.unitary) {
            Ok(p) => path.push(PathCheck {
                r,
                commutation_residual: p.commutation_residual,
            }),
            Err(e) => {
                path_error = Some(e.to_string());
                break;
            }
        }
    }
    Verdict::BiInner(Box::new(BiInnerCertificate {
        kappa_central_residual: ctx.model.kappa_central_residual(&u),
        cocentre_residual: ctx.model.cocentre_residual(&u),
        membership: ctx.model.identity_component_member(&u, tol),
        trivial: alpha.is_identity(tol),
        u,
        uhat,
        uhat_op,
        u_op,
        commutation,
        path,
        path_error,
    }))
}

/// Random unitaries fed to the consistency harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFamily {
    /// Haar-random per block.
    Haar,
    /// `z·exp(X)`, `X` Gaussian in `𝔤`, `z` a random central unitary.
    IdentityComponent,
    /// Symmetries `1 − 2P` for spectral projections `P` of random self-adjoint κ-symmetric
    /// elements commuting with the co-centre.
    Reflection,
}

impl SampleFamily {
    pub const ALL: [SampleFamily; 3] = [
        SampleFamily::Haar,
        SampleFamily::IdentityComponent,
        SampleFamily::Reflection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SampleFamily::Haar => "haar",
            SampleFamily::IdentityComponent => "identity_component",
            SampleFamily::Reflection => "reflection",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
    }
}

fn random_central_unitary(a: &crate::algebra::BlockAlgebra, rng: &mut Sampler) -> Element {
    let phases: Vec<C64> = (0..a.num_blocks())
        .map(|_| C64::from_polar(1.0, std::f64::consts::TAU * rng.uniform()))
        .collect();
    crate::morphisms::central_element(a, &phases)
}

/// Basis (realified, orthonormal columns) of self-adjoint κ-symmetric co-centre-commuting
/// elements.
pub fn symmetric_commutant(model: &BiInnerGroupModel, tol: &ToleranceConfig) -> Vec<Element> {
    let h = &model.hopf;
    let a = h.algebra();
    let n = a.dim();
    let lift = |f: &dyn Fn(&Element) -> Element| {
        linalg::realify(n, |v| a.coords(&f(&a.element_unchecked(v))))
    };
    let mut rows = vec![
        lift(&|x| x - &x.adjoint()),
        lift(&|x| &h.antipode_of(&x.adjoint()) - x),
    ];
    for c in &model.cocentre {
        rows.push(lift(&|x| x.commutator(c)));
    }
    let total: usize = rows.iter().map(|r| r.nrows()).sum();
    let mut stacked = nalgebra::DMatrix::<f64>::zeros(total, 2 * n);
    let mut off = 0;
    for r in &rows {
        stacked.view_mut((off, 0), (r.nrows(), 2 * n)).copy_from(r);
        off += r.nrows();
    }
    linalg::real_null_space(&stacked, tol.eq_tol.sqrt() * 1e-2)
        .column_iter()
        .map(|col| a.element_unchecked(&linalg::complexify(&col.into_owned())))
        .collect()
}

/// Random κ-symmetric co-centre-commuting element `s + X`, with `s` a Gaussian combination of
/// `sym_basis` (see [`symmetric_commutant`]) and `X` a random element of the Lie algebra.
pub fn random_admissible_element(
    model: &BiInnerGroupModel,
    sym_basis: &[Element],
    rng: &mut Sampler,
) -> Element {
    let mut v = model.random_lie_element(rng);
    for b in sym_basis {
        v = &v + &b.scale_re(rng.normal());
    }
    v
}

/// Draw sample `index` of `family`; deterministic in `(seed, index)`.
pub fn draw_sample(
    model: &BiInnerGroupModel,
    family: SampleFamily,
    seed: u64,
    index: usize,
    sym_basis: &[Element],
) -> Element {
    let a = model.hopf.algebra();
    let mut rng = Sampler::fork(seed, index as u64);
    match family {
        SampleFamily::Haar => rng.haar_unitary(a),
        SampleFamily::IdentityComponent => {
            let x = model.random_lie_element(&mut rng);
            &random_central_unitary(a, &mut rng) * &x.exp()
        }
        SampleFamily::Reflection => {
            let mut s = a.zero();
            for b in sym_basis {
                s = &s + &b.scale_re(rng.normal());
            }
            let spec = s.spectrum_unchecked();
            let distinct: Vec<f64> = linalg::clusters(&spec, 1e-6)
                .iter()
                .map(|r| spec[r.start])
                .collect();
            if distinct.len() < 2 {
                return a.unit();
            }
            let k = rng.index(distinct.len() - 1);
            let cut = 0.5 * (distinct[k] + distinct[k + 1]);
            s.normal_function(move |z| if z.re < cut { C64::new(-1.0, 0.0) } else { ONE })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub definitional: bool,
    pub identity_component: bool,
    pub trivial: bool,
    pub commutation_residual: Option<f64>,
    pub max_path_residual: Option<f64>,
    pub reason: Option<String>,
}

/// Confusion matrix of the definitional route (rows) against the identity-component route
/// (columns): `[[both, definitional only], [identity component only, neither]]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub algebra: String,
    pub family: SampleFamily,
    pub samples: usize,
    pub seed: u64,
    pub lie_dim: usize,
    pub confusion: [[usize; 2]; 2],
    pub disagreements: Vec<usize>,
    pub biinner: usize,
    /// Every bi-inner verdict induced the identity map.
    pub only_identity: bool,
    pub max_commutation_residual: f64,
    pub max_path_residual: f64,
    pub outcomes: Vec<SampleOutcome>,
}

impl ConsistencyReport {
    pub fn is_diagonal(&self) -> bool {
        self.confusion[0][1] == 0 && self.confusion[1][0] == 0
    }
}

/// Compare the definitional classifier with identity-component membership on `samples`
/// seeded unitaries of `family`.
pub fn brute_force_biinner_consistency(
    ctx: &BiInnerContext,
    family: SampleFamily,
    samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ConsistencyReport> {
    let a = ctx.hopf.algebra();
    let sym_basis = if family == SampleFamily::Reflection {
        symmetric_commutant(&ctx.model, tol)
    } else {
        Vec::new()
    };
    let run = |index: usize| -> Result<SampleOutcome> {
        let u = draw_sample(&ctx.model, family, seed, index, &sym_basis);
        let alpha = AlgebraMap::conjugation(a, &u, tol)?;
        let verdict = classify_biinner(&alpha, ctx, tol);
        let member = ctx.model.identity_component_member(&u, tol);
        let (commutation_residual, max_path_residual, trivial, reason) = match &verdict {
            Verdict::BiInner(c) => (
                Some(c.commutation.residual),
                Some(c.max_path_residual()),
                c.trivial,
                member.reason.clone(),
            ),
            Verdict::NotBiInner { reason } => (None, None, false, Some(reason.clone())),
        };
        Ok(SampleOutcome {
            index,
            definitional: verdict.is_biinner(),
            identity_component: member.member,
            trivial,
            commutation_residual,
            max_path_residual,
            reason,
        })
    };
    #[cfg(feature = "parallel")]
    let outcomes: Vec<SampleOutcome> = (0..samples)
        .into_par_iter()
        .map(run)
        .collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<SampleOutcome> = (0..samples).map(run).collect::<Result<Vec<_>>>()?;

    let mut confusion = [[0usize; 2]; 2];
    let mut disagreements = Vec::new();
    let mut max_comm = 0.0f64;
    let mut max_path = 0.0f64;
    for o in &outcomes {
        confusion[usize::from(!o.definitional)][usize::from(!o.identity_component)] += 1;
        if o.definitional != o.identity_component {
            disagreements.push(o.index);
        }
        max_comm = max_comm.max(o.commutation_residual.unwrap_or(0.0));
        max_path = max_path.max(o.max_path_residual.unwrap_or(0.0));
    }
    let biinner = outcomes.iter().filter(|o| o.definitional).count();
    let only_identity = outcomes
        .iter()
        .filter(|o| o.definitional)
        .all(|o| o.trivial);
    Ok(ConsistencyReport {
        algebra: ctx.hopf.name().to_string(),
        family,
        samples,
        seed,
        lie_dim: ctx.model.lie_dim(),
        confusion,
        disagreements,
        biinner,
        only_identity,
        max_commutation_residual: max_comm,
        max_path_residual: max_path,
        outcomes,
    })
}

/// Simple-tensor unitaries commuting with `V`: implementer pairs of `Ad(exp X)`, `X ∈ 𝔤`,
/// twisted by random central unitaries on both legs.
pub fn sample_commutant_unitaries(
    ctx: &BiInnerContext,
    count: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Vec<CMat>> {
    let a = ctx.hopf.algebra();
    let ahat = ctx.dual.algebra();
    let mut out = Vec::with_capacity(count);
    for index in 0..count {
        let mut rng = Sampler::fork(seed, index as u64);
        let x = ctx.model.random_lie_element(&mut rng);
        let alpha = AlgebraMap::conjugation(a, &x.exp(), tol)?;
        let Verdict::BiInner(cert) = classify_biinner(&alpha, ctx, tol) else {
            return Err(Error::PreconditionFailed(
                "a map from the identity component was not classified bi-inner".into(),
            ));
        };
        let z = random_central_unitary(a, &mut rng);
        let zhat = random_central_unitary(ahat, &mut rng);
        let (zhat_op, z_op) = ctx.unitary.pair_operators(&ctx.gns, &ctx.dual, &zhat, &z);
        out.push((&cert.uhat_op * zhat_op).kronecker(&(&cert.u_op * z_op)));
    }
    Ok(out)
}

/// Realified coordinates helper for tests: rank of the κ-symmetric basis doubled by `i`.
pub fn ksymmetric_real_span_rank(h: &HopfAlgebra, tol: &ToleranceConfig) -> Result<usize> {
    let a = h.algebra();
    let basis = h.ksymmetric_basis(tol)?;
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::new();
    for b in &basis {
        cols.push(realified_coords(b, a));
        cols.push(realified_coords(&b.scale(C64::new(0.0, 1.0)), a));
    }
    if cols.is_empty() {
        return Ok(0);
    }
    let m = nalgebra::DMatrix::from_columns(&cols);
    let sv = linalg::svd_of(&m).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    Ok(sv
        .iter()
        .filter(|&&s| s > tol.eq_tol.sqrt() * max.max(1.0))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_is_biinner_with_trivial_implementers() {
        let h = HopfAlgebra::kac_paljutkin(&tol()).unwrap();
        let ctx = BiInnerContext::build(&h, &tol()).unwrap();
        let v = classify_biinner(&AlgebraMap::identity(h.algebra()), &ctx, &tol());
        let c = v.certificate().unwrap();
        assert!(c.trivial);
        assert!(c.u.rel_diff(&h.algebra().unit()) < 1e-12);
        assert!(c.commutation.residual < 1e-12);
        assert!(c.membership.member);
    }

    #[test]
    fn lie_algebra_satisfies_its_constraints() {
        for h in [
            HopfAlgebra::kac_paljutkin(&tol()).unwrap(),
            HopfAlgebra::group_algebra(&FiniteGroup::symmetric(3).unwrap(), &tol()).unwrap(),
        ] {
            let m = BiInnerGroupModel::build(&h, &tol()).unwrap();
            for x in m.lie_basis() {
                assert!(m.defining_residuals(x).iter().all(|&r| r < 1e-9));
            }
            assert!(m.closure_residual() < 1e-9);
        }
    }
}

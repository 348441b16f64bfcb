//! The dual Hopf algebra, the pairing `β`, the Fourier transform and the convolution product,
//! and faithful self-adjoint functionals represented by densities.

use serde::{Deserialize, Serialize};

use crate::algebra::{BlockAlgebra, Element};
use crate::error::{Error, Result};
use crate::hopf::{bil, compute_haar, HopfAlgebra};
#[cfg(test)]
use crate::linalg::ONE;
use crate::linalg::{self, CMat, CVec, C64};
use crate::morphisms::AlgebraMap;
use crate::tolerance::ToleranceConfig;
use crate::wedderburn::{self, AbstractAlgebra};

/// A faithful tracial state `τ(x) = Σ_b w_b tr(x_b)` on a block algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TracialState {
    algebra: BlockAlgebra,
    weights: Vec<f64>,
}

impl TracialState {
    pub fn new(algebra: BlockAlgebra, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: algebra.num_blocks(),
                found: weights.len(),
            });
        }
        Ok(Self { algebra, weights })
    }

    /// The Haar state of `h`, which must be tracial.
    pub fn haar(h: &HopfAlgebra, tol: &ToleranceConfig) -> Result<Self> {
        let density = h.haar_density();
        let mut weights = Vec::with_capacity(density.blocks().len());
        let mut residual = 0.0f64;
        for b in density.blocks() {
            let n = b.nrows();
            let w = b.trace() / C64::new(n as f64, 0.0);
            residual = residual.max(linalg::frob(&(b - CMat::identity(n, n) * w)) + w.im.abs());
            weights.push(w.re);
        }
        if residual > tol.eq_tol {
            return Err(Error::NotTracial { residual });
        }
        Self::new(h.algebra().clone(), weights)
    }

    /// `τ₁ ⊗ τ₂` on the tensor product algebra (blocks ordered first-index-major).
    pub fn tensor(&self, other: &TracialState) -> TracialState {
        let layout = self.algebra.tensor(&other.algebra);
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| a * b))
            .collect();
        TracialState {
            algebra: layout.algebra,
            weights,
        }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, x: &Element) -> C64 {
        x.blocks()
            .iter()
            .zip(&self.weights)
            .map(|(b, &w)| b.trace() * w)
            .sum()
    }
}

/// A linear functional `f = τ(v·)` stored by its density `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    state: TracialState,
    density: Element,
}

impl Functional {
    pub fn new(state: TracialState, density: Element) -> Result<Self> {
        state.algebra.check(&density)?;
        Ok(Self { state, density })
    }

    /// The functional with the given values on the matrix-unit basis.
    pub fn from_values(state: TracialState, values: &CVec) -> Result<Self> {
        let a = &state.algebra;
        if values.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: values.len(),
            });
        }
        // f(e^b_{ij}) = w_b v_b[j, i]
        let blocks = a
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let w = C64::new(state.weights[b], 0.0);
                CMat::from_fn(n, n, |j, i| values[a.index(b, i, j)] / w)
            })
            .collect();
        let density = a.from_blocks(blocks)?;
        Ok(Self { state, density })
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    pub fn state(&self) -> &TracialState {
        &self.state
    }

    pub fn eval(&self, x: &Element) -> C64 {
        self.state.eval(&(&self.density * x))
    }

    pub fn values(&self) -> CVec {
        let a = &self.state.algebra;
        CVec::from_iterator(
            a.dim(),
            (0..a.dim()).map(|k| self.eval(&a.basis_element(k))),
        )
    }

    pub fn is_self_adjoint(&self, tol: &ToleranceConfig) -> bool {
        self.density.self_adjoint_residual() <= tol.eq_tol
    }

    pub fn is_positive(&self, tol: &ToleranceConfig) -> bool {
        self.density.is_positive(tol)
    }

    pub fn is_faithful(&self, tol: &ToleranceConfig) -> bool {
        self.density.sigma_min() > tol.inv_tol
    }

    /// Rank of the Gram matrix `(e_k, e_l) ↦ f(e_k e_l)`; full rank iff `f` is faithful.
    pub fn pairing_rank(&self, tol: &ToleranceConfig) -> usize {
        let a = &self.state.algebra;
        let n = a.dim();
        let mut g = CMat::zeros(n, n);
        for k in 0..n {
            let ek = a.basis_element(k);
            for l in 0..n {
                g[(k, l)] = self.eval(&(&ek * &a.basis_element(l)));
            }
        }
        linalg::rank(&g, tol.inv_tol)
    }

    pub fn scaled_density(&self, density: Element) -> Functional {
        Functional {
            state: self.state.clone(),
            density,
        }
    }
}

/// Jordan decomposition `f = f₁ − f₂` of a faithful self-adjoint functional.
#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    pub positive: Functional,
    pub negative: Functional,
    pub projection: Element,
}

/// Split `f = τ(v·)` into orthogonal positive parts via the polar symmetry of `v`.
pub fn jordan_decompose(f: &Functional, tol: &ToleranceConfig) -> Result<JordanDecomposition> {
    let (_, sym) = f.density.polar_symmetry(tol)?;
    let unit = f.state.algebra.unit();
    let p = (&unit + &sym).scale_re(0.5);
    let q = &unit - &p;
    let f1 = f.scaled_density(&f.density * &p);
    let f2 = f.scaled_density(-&(&f.density * &q));
    Ok(JordanDecomposition {
        positive: f1,
        negative: f2,
        projection: p,
    })
}

/// `f ∘ hom` for an injective unital *-homomorphism `hom` and a faithful self-adjoint `f`.
pub fn pullback(
    hom: &AlgebraMap,
    f: &Functional,
    source_state: &TracialState,
    tol: &ToleranceConfig,
) -> Result<Functional> {
    if hom.target() != f.state.algebra() {
        return Err(Error::ShapeMismatch(
            "functional lives on a different algebra than the map's target".into(),
        ));
    }
    if hom.source() != source_state.algebra() {
        return Err(Error::ShapeMismatch(
            "state lives on a different algebra than the map's source".into(),
        ));
    }
    let dim = hom.source().dim();
    let rank = linalg::rank(hom.matrix(), tol.inv_tol);
    if rank < dim {
        return Err(Error::NotInjective { rank, dim });
    }
    let unital = hom
        .apply(&hom.source().unit())
        .rel_diff(&hom.target().unit());
    if unital > tol.eq_tol {
        return Err(Error::NotStarHom {
            reason: format!("not unital (residual {unital:.3e})"),
        });
    }
    let star = hom.star_residual();
    if star > tol.eq_tol {
        return Err(Error::NotStarHom {
            reason: format!("does not preserve the involution (residual {star:.3e})"),
        });
    }
    let mult = hom.multiplicative_residual();
    if mult > tol.eq_tol {
        return Err(Error::NotStarHom {
            reason: format!("not multiplicative (residual {mult:.3e})"),
        });
    }
    f.density.require_self_adjoint(tol)?;
    f.density.require_invertible(tol)?;
    let values = hom.matrix().transpose() * f.values();
    let g = Functional::from_values(source_state.clone(), &values)?;
    g.density.require_invertible(tol)?;
    Ok(g)
}

/// The dual Hopf algebra `Â` realised as a block algebra, together with the pairing and the
/// Fourier transform `A → Â`.
#[derive(Debug, Clone)]
pub struct DualHopfAlgebra {
    primal: HopfAlgebra,
    hopf: HopfAlgebra,
    /// Abstract dual-basis coordinates (`ê_k(e_l) = [k = l]`) to matrix units of `Â`.
    to_blocks: CMat,
    from_blocks: CMat,
    fourier: CMat,
    fourier_inv: CMat,
    dual_fourier: CMat,
    dual_fourier_inv: CMat,
    dual_fourier_scale: C64,
    dual_fourier_residual: f64,
}

/// Scalar relation `F(j) = c·1` between the counit support and the dual unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierScalar {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

impl DualHopfAlgebra {
    /// Build `Â`: product dual to `δ`, coproduct dual to the product, counit = evaluation at
    /// `1`, antipode = precomposition with `κ`, Haar state solved for, blocks found numerically.
    pub fn build(h: &HopfAlgebra, tol: &ToleranceConfig) -> Result<Self> {
        let n = h.dim();
        let a = h.algebra();
        let d = h.coproduct();
        let k = h.antipode();
        let product = |f: &CVec, g: &CVec| {
            let mut out = CVec::zeros(n);
            for p in 0..n {
                if f[p].norm() == 0.0 {
                    continue;
                }
                for q in 0..n {
                    let w = f[p] * g[q];
                    if w.norm() == 0.0 {
                        continue;
                    }
                    out += d.row(p * n + q).transpose() * w;
                }
            }
            out
        };
        let star = k.transpose() * a.star_permutation();
        let unit = h.counit().clone();
        let coproduct_abs = h.multiplication_matrix().transpose();
        let counit_abs = h.unit_coords();
        let antipode_abs = k.transpose();
        let haar_abs = compute_haar(&coproduct_abs, &unit, tol)?;

        let abs = AbstractAlgebra::from_product(n, product, star, unit, haar_abs.clone());
        let dec = wedderburn::decompose(&abs, Some(&counit_abs), tol.eq_tol)?;
        let c = dec.to_blocks;
        let ci = dec.from_blocks;

        let mut coproduct = CMat::zeros(n * n, n);
        let cc = c.kronecker(&c);
        let tmp = &coproduct_abs * &ci;
        coproduct.copy_from(&(&cc * tmp));
        let counit = ci.transpose() * counit_abs;
        let antipode = &c * antipode_abs * &ci;
        let haar = ci.transpose() * haar_abs;
        let hat = HopfAlgebra::new(
            format!("dual of {}", h.name()),
            dec.algebra,
            coproduct,
            counit,
            antipode,
            Some(haar),
            tol,
        )?;

        // Fourier transform: β(a, F(b)) = τ(ab), i.e. F = Ĉ·T with T[k,l] = τ(e_k e_l).
        let mut t = CMat::zeros(n, n);
        for p in 0..n {
            let ep = a.basis_element(p);
            for q in 0..n {
                t[(p, q)] = h.haar_of(&(&ep * &a.basis_element(q)));
            }
        }
        let fourier = &c * &t;
        let fourier_inv = fourier
            .clone()
            .try_inverse()
            .ok_or(Error::HaarNotFaithful)?;

        // Dual Fourier transform Â → A: β(F̂(g), f) = τ̂(fg), i.e. F̂ = Ĉᵀ·T̂.
        let ha = hat.algebra();
        let mut th = CMat::zeros(n, n);
        for p in 0..n {
            let ep = ha.basis_element(p);
            for q in 0..n {
                th[(p, q)] = hat.haar_of(&(&ep * &ha.basis_element(q)));
            }
        }
        let raw = c.transpose() * th;
        // F̂∘F = s·κ
        let composite = &raw * &fourier;
        let s = (k.adjoint() * &composite).trace() / (k.adjoint() * k).trace();
        let dual_fourier_residual =
            linalg::frob(&(&composite - k * s)) / linalg::frob(&composite).max(1.0);
        let dual_fourier = raw / s;
        let dual_fourier_inv = dual_fourier
            .clone()
            .try_inverse()
            .ok_or(Error::HaarNotFaithful)?;

        Ok(Self {
            primal: h.clone(),
            hopf: hat,
            to_blocks: c,
            from_blocks: ci,
            fourier,
            fourier_inv,
            dual_fourier,
            dual_fourier_inv,
            dual_fourier_scale: s,
            dual_fourier_residual,
        })
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn primal(&self) -> &HopfAlgebra {
        &self.primal
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        self.hopf.algebra()
    }

    pub fn fourier_matrix(&self) -> &CMat {
        &self.fourier
    }

    pub fn inverse_fourier_matrix(&self) -> &CMat {
        &self.fourier_inv
    }

    /// `Ĉ`: dual-basis coordinates to matrix units of `Â`.
    pub fn to_blocks(&self) -> &CMat {
        &self.to_blocks
    }

    pub fn from_blocks(&self) -> &CMat {
        &self.from_blocks
    }

    /// `β(a, â)`.
    pub fn pairing(&self, a: &Element, ahat: &Element) -> C64 {
        let f = &self.from_blocks * self.algebra().coords(ahat);
        bil(&f, &self.primal.algebra().coords(a))
    }

    /// Element of `Â` representing the functional with the given values on the basis of `A`.
    pub fn to_dual(&self, values: &CVec) -> Element {
        self.algebra()
            .element_unchecked(&(&self.to_blocks * values))
    }

    /// Values on the basis of `A` of the functional represented by `â`.
    pub fn functional_values(&self, ahat: &Element) -> CVec {
        &self.from_blocks * self.algebra().coords(ahat)
    }

    pub fn fourier(&self, x: &Element) -> Element {
        let v = &self.fourier * self.primal.algebra().coords(x);
        self.algebra().element_unchecked(&v)
    }

    pub fn inverse_fourier(&self, xhat: &Element) -> Element {
        let v = &self.fourier_inv * self.algebra().coords(xhat);
        self.primal.algebra().element_unchecked(&v)
    }

    /// `a ⋄ b = F⁻¹(F(a)F(b))`.
    pub fn convolve(&self, a: &Element, b: &Element) -> Element {
        self.inverse_fourier(&(&self.fourier(a) * &self.fourier(b)))
    }

    /// Normalised dual Fourier transform `Â → A` (the canonical one divided by `s`).
    pub fn dual_fourier(&self, g: &Element) -> Element {
        let v = &self.dual_fourier * self.algebra().coords(g);
        self.primal.algebra().element_unchecked(&v)
    }

    pub fn inverse_dual_fourier(&self, x: &Element) -> Element {
        let v = &self.dual_fourier_inv * self.primal.algebra().coords(x);
        self.algebra().element_unchecked(&v)
    }

    /// The scalar `s` with `F̂∘F = s·κ` for the canonical dual transform, and the residual of
    /// that relation.
    pub fn dual_fourier_scale(&self) -> (C64, f64) {
        (self.dual_fourier_scale, self.dual_fourier_residual)
    }

    /// Convolution of `Â`: `f ⋄̂ g = F̂⁻¹(F̂(f)F̂(g))` with the normalised `F̂`.
    pub fn dual_convolve(&self, f: &Element, g: &Element) -> Element {
        self.inverse_dual_fourier(&(&self.dual_fourier(f) * &self.dual_fourier(g)))
    }

    /// `F(j) = c·1_Â` for the counit support `j`; returns `c` and the residual.
    pub fn fourier_of_counit_support(&self, tol: &ToleranceConfig) -> Result<FourierScalar> {
        let j = self.primal.counit_support(tol)?;
        let fj = self.fourier(&j.element);
        let unit = self.algebra().unit();
        let n = self.algebra().dim() as f64;
        let c = self
            .algebra()
            .coords(&fj)
            .iter()
            .zip(self.algebra().coords(&unit).iter())
            .map(|(a, b)| a * b.conj())
            .sum::<C64>()
            / self.algebra().unit().frob().powi(2);
        let residual = (&fj - &unit.scale(c)).frob() / n.sqrt();
        Ok(FourierScalar {
            re: c.re,
            im: c.im,
            residual,
        })
    }

    /// Residual of `β(a, âb̂) = (â⊗b̂)(δ(a))` over all basis triples.
    pub fn product_pairing_residual(&self) -> f64 {
        let n = self.primal.dim();
        let pa = self.primal.algebra();
        let ha = self.algebra();
        let mut worst = 0.0f64;
        for p in 0..n {
            let fp = self.functional_values(&ha.basis_element(p));
            for q in 0..n {
                let fq = self.functional_values(&ha.basis_element(q));
                let prod = &ha.basis_element(p) * &ha.basis_element(q);
                let fpq = fp.kronecker(&fq);
                for m in 0..n {
                    let a = pa.basis_element(m);
                    let lhs = self.pairing(&a, &prod);
                    let rhs = bil(&fpq, &self.primal.coproduct_of(&a));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Canonical evaluation map `A → (Â)^`, `x ↦ (f ↦ β(x, f))`.
    pub fn canonical_embedding(&self, double: &DualHopfAlgebra) -> AlgebraMap {
        let m = double.to_blocks() * self.from_blocks.transpose();
        AlgebraMap::new(self.primal.algebra().clone(), double.algebra().clone(), m)
    }

    /// Functional on `Â` represented through the tracial Haar state of `Â`.
    pub fn haar_state(&self, tol: &ToleranceConfig) -> Result<TracialState> {
        TracialState::haar(&self.hopf, tol)
    }

    /// Unit of `Â` as a functional on `A` is the counit.
    pub fn unit_values(&self) -> CVec {
        self.functional_values(&self.algebra().unit())
    }
}

/// Which side of the convolution the fixed element `c` occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `y ↦ y ⋄ c`
    Right,
    /// `y ↦ c ⋄ y`
    Left,
}

impl Placement {
    pub const BOTH: [Placement; 2] = [Placement::Right, Placement::Left];

    pub fn name(&self) -> &'static str {
        match self {
            Placement::Right => "right (y ⋄ c)",
            Placement::Left => "left (c ⋄ y)",
        }
    }
}

impl DualHopfAlgebra {
    pub fn convolve_placed(&self, c: &Element, y: &Element, placement: Placement) -> Element {
        match placement {
            Placement::Right => self.convolve(y, c),
            Placement::Left => self.convolve(c, y),
        }
    }

    /// How far convolution with `c` is from preserving the spectrum of the self-adjoint `y`:
    /// the larger of the self-adjointness defect of the result and the largest gap between
    /// the sorted eigenvalues of its self-adjoint part and those of `y`.
    pub fn spectrum_defect(&self, c: &Element, y: &Element, placement: Placement) -> f64 {
        let x = self.convolve_placed(c, y, placement);
        let sa = (&x + &x.adjoint()).scale_re(0.5);
        let gap = sa
            .spectrum_unchecked()
            .iter()
            .zip(y.spectrum_unchecked().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        (&x - &x.adjoint()).frob().max(gap)
    }
}

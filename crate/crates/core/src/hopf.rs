//! Finite-dimensional Hopf C*-algebras of Kac type: structure maps, axiom checks, the Haar
//! state, and the distinguished subspaces (co-centre, κ-symmetric elements, counit support).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{BlockAlgebra, Element, TensorLayout};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{self, CMat, CVec, C64, I, ONE, ZERO};
use crate::tolerance::ToleranceConfig;
use crate::wedderburn::{self, AbstractAlgebra};

const KAC_PALJUTKIN_JSON: &str = include_str!("../data/kac_paljutkin.json");

/// Bilinear (non-conjugating) pairing of coefficient vectors.
pub(crate) fn bil(a: &CVec, b: &CVec) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Which standard family a group-built Hopf algebra belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// `ℂ[G]`, group basis `λ_g`.
    GroupAlgebra,
    /// `C(G)`, basis of point masses `δ_g`.
    FunctionAlgebra,
}

/// Change of basis between a group basis and the matrix-unit basis.
#[derive(Debug, Clone)]
pub struct GroupBasis {
    pub group: FiniteGroup,
    pub kind: GroupKind,
    /// Column `g` holds the matrix-unit coordinates of the `g`-th group basis vector.
    pub to_mu: CMat,
    pub from_mu: CMat,
}

/// A minimal central projection (here: the support of the counit).
#[derive(Debug, Clone)]
pub struct CentralProjection {
    pub element: Element,
    pub block: usize,
}

/// `(A, δ, ε, κ, τ)` with all structure maps stored as matrices over the matrix-unit basis.
///
/// The coproduct is an `N²×N` matrix whose row `k·N + l` is the coefficient of `e_k ⊗ e_l`.
/// Counit and Haar state are stored as their values on the basis.
#[derive(Debug, Clone)]
pub struct HopfAlgebra {
    name: String,
    algebra: BlockAlgebra,
    tensor: TensorLayout,
    coproduct: CMat,
    counit: CVec,
    antipode: CMat,
    haar: CVec,
    group_basis: Option<GroupBasis>,
}

/// One named axiom residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResidual {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

/// Residuals of every Hopf C*-algebra axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axioms: Vec<AxiomResidual>,
    pub passed: bool,
}

impl AxiomReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.axioms
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.residual)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.axioms
            .iter()
            .filter(|a| !a.pass)
            .map(|a| a.name.as_str())
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.axioms.iter().map(|a| a.residual).fold(0.0, f64::max)
    }
}

fn rel(a: &CMat, b: &CMat) -> f64 {
    linalg::frob(&(a - b)) / linalg::frob(b).max(1.0)
}

impl HopfAlgebra {
    /// Assemble a Hopf algebra from its structure matrices. When `haar` is `None` it is solved
    /// for with [`compute_haar`]. Axioms are not checked here; see [`HopfAlgebra::verify_axioms`].
    pub fn new(
        name: impl Into<String>,
        algebra: BlockAlgebra,
        coproduct: CMat,
        counit: CVec,
        antipode: CMat,
        haar: Option<CVec>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let n = algebra.dim();
        let check = |what: &str, ok: bool, expected: usize, found: usize| {
            if ok {
                Ok(())
            } else {
                Err(Error::ShapeMismatch(format!(
                    "{what}: expected {expected}, found {found}"
                )))
            }
        };
        check(
            "coproduct rows",
            coproduct.nrows() == n * n,
            n * n,
            coproduct.nrows(),
        )?;
        check(
            "coproduct columns",
            coproduct.ncols() == n,
            n,
            coproduct.ncols(),
        )?;
        check("counit length", counit.len() == n, n, counit.len())?;
        check(
            "antipode shape",
            antipode.nrows() == n && antipode.ncols() == n,
            n,
            antipode.nrows(),
        )?;
        let unit = algebra.coords(&algebra.unit());
        let haar = match haar {
            Some(h) => {
                check("haar length", h.len() == n, n, h.len())?;
                h
            }
            None => compute_haar(&coproduct, &unit, tol)?,
        };
        let tensor = algebra.tensor(&algebra);
        Ok(Self {
            name: name.into(),
            algebra,
            tensor,
            coproduct,
            counit,
            antipode,
            haar,
            group_basis: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn tensor_layout(&self) -> &TensorLayout {
        &self.tensor
    }

    pub fn coproduct(&self) -> &CMat {
        &self.coproduct
    }

    pub fn counit(&self) -> &CVec {
        &self.counit
    }

    pub fn antipode(&self) -> &CMat {
        &self.antipode
    }

    pub fn haar(&self) -> &CVec {
        &self.haar
    }

    pub fn group_basis(&self) -> Option<&GroupBasis> {
        self.group_basis.as_ref()
    }

    pub fn with_haar(mut self, haar: CVec) -> Self {
        self.haar = haar;
        self
    }

    pub fn with_coproduct(mut self, coproduct: CMat) -> Self {
        self.coproduct = coproduct;
        self
    }

    pub fn unit_coords(&self) -> CVec {
        self.algebra.coords(&self.algebra.unit())
    }

    /// `δ(x)` in pair coordinates.
    pub fn coproduct_of(&self, x: &Element) -> CVec {
        &self.coproduct * self.algebra.coords(x)
    }

    /// `δ(x)` as an element of `A⊗A`.
    pub fn coproduct_element(&self, x: &Element) -> Element {
        self.tensor.to_element(&self.coproduct_of(x))
    }

    pub fn counit_of(&self, x: &Element) -> C64 {
        bil(&self.counit, &self.algebra.coords(x))
    }

    pub fn haar_of(&self, x: &Element) -> C64 {
        bil(&self.haar, &self.algebra.coords(x))
    }

    pub fn antipode_of(&self, x: &Element) -> Element {
        self.algebra
            .element_unchecked(&(&self.antipode * self.algebra.coords(x)))
    }

    /// `θ(x) = κ(x*)`, the (antilinear) map whose fixed points are the κ-symmetric elements.
    pub fn theta(&self, x: &Element) -> Element {
        self.antipode_of(&x.adjoint())
    }

    /// Density `ρ` of the Haar state: `τ(x) = Σ_b tr(ρ_b x_b)`.
    pub fn haar_density(&self) -> Element {
        self.functional_density(&self.haar)
    }

    /// Trace-pairing density of a functional given by its values on the basis.
    pub fn functional_density(&self, values: &CVec) -> Element {
        let a = &self.algebra;
        let blocks = a
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| CMat::from_fn(n, n, |j, i| values[a.index(b, i, j)]))
            .collect();
        a.from_blocks(blocks).expect("shapes match")
    }

    /// Multiplication as an `N × N²` matrix on pair coordinates.
    pub fn multiplication_matrix(&self) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n * n);
        for k in 0..n {
            let lk = self.algebra.label(k);
            for j in 0..self.algebra.block_dims()[lk.block] {
                let l = self.algebra.index(lk.block, lk.col, j);
                m[(self.algebra.index(lk.block, lk.row, j), k * n + l)] = ONE;
            }
        }
        m
    }

    /// Gram matrix `τ(e_k* e_l)` of the Haar inner product.
    pub fn haar_gram(&self) -> CMat {
        let n = self.dim();
        let mut g = CMat::zeros(n, n);
        for k in 0..n {
            let ek = self.algebra.basis_element(k).adjoint();
            for l in 0..n {
                let el = self.algebra.basis_element(l);
                g[(k, l)] = self.haar_of(&(&ek * &el));
            }
        }
        g
    }

    /// Check every axiom of a Kac-type Hopf C*-algebra and report the residuals.
    pub fn verify_axioms(&self, tol: &ToleranceConfig) -> AxiomReport {
        let n = self.dim();
        let id = CMat::identity(n, n);
        let d = &self.coproduct;
        let mut axioms = Vec::new();
        let mut push = |name: &str, residual: f64| {
            axioms.push(AxiomResidual {
                name: name.to_string(),
                residual,
                pass: residual < tol.eq_tol,
            })
        };

        let lhs = d.kronecker(&id) * d;
        let rhs = id.kronecker(d) * d;
        push("coassociativity", rel(&lhs, &rhs));

        let eps_row = self.counit.transpose();
        push("counit_left", rel(&(eps_row.kronecker(&id) * d), &id));
        push("counit_right", rel(&(id.kronecker(&eps_row) * d), &id));

        let m = self.multiplication_matrix();
        let unit = self.unit_coords();
        let target = &unit * &eps_row;
        push(
            "antipode_left",
            rel(&(&m * self.antipode.kronecker(&id) * d), &target),
        );
        push(
            "antipode_right",
            rel(&(&m * id.kronecker(&self.antipode) * d), &target),
        );

        let deltas: Vec<Element> = (0..n)
            .map(|k| self.coproduct_element(&self.algebra.basis_element(k)))
            .collect();
        let mut mult = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..n {
            let ek = self.algebra.basis_element(k);
            for l in 0..n {
                let el = self.algebra.basis_element(l);
                let lhs = self.coproduct_element(&(&ek * &el));
                let rhs = &deltas[k] * &deltas[l];
                mult += (&lhs - &rhs).frob().powi(2);
                scale += rhs.frob().powi(2);
            }
        }
        push(
            "coproduct_multiplicative",
            mult.sqrt() / scale.sqrt().max(1.0),
        );

        let mut star = 0.0f64;
        for k in 0..n {
            let ek = self.algebra.basis_element(k);
            let lhs = self.coproduct_element(&ek.adjoint());
            star += (&lhs - &deltas[k].adjoint()).frob().powi(2);
        }
        push("coproduct_star", star.sqrt() / scale.sqrt().max(1.0));

        let one = self.coproduct_element(&self.algebra.unit());
        let one_one = self.algebra.unit().tensor(&self.algebra.unit());
        push("coproduct_unital", one.rel_diff(&one_one));

        let tau_row = self.haar.transpose();
        push("haar_normalised", (bil(&self.haar, &unit) - ONE).norm());
        let density = self.haar_density();
        let positivity = {
            let spec = density.spectrum_unchecked();
            let herm = density.self_adjoint_residual();
            herm + (-spec.first().copied().unwrap_or(0.0)).max(0.0)
        };
        push("haar_positive", positivity);
        let inv_target = &unit * &tau_row;
        push(
            "haar_left_invariant",
            rel(&(tau_row.kronecker(&id) * d), &inv_target),
        );
        push(
            "haar_right_invariant",
            rel(&(id.kronecker(&tau_row) * d), &inv_target),
        );
        let tracial = density
            .blocks()
            .iter()
            .map(|b| {
                let k = b.nrows();
                let avg = b.trace() / C64::new(k as f64, 0.0);
                linalg::frob(&(b - CMat::identity(k, k) * avg))
            })
            .fold(0.0, f64::max);
        push("haar_tracial", tracial);

        push(
            "antipode_involutive",
            rel(&(&self.antipode * &self.antipode), &id),
        );
        let mut kstar = 0.0f64;
        for k in 0..n {
            let ek = self.algebra.basis_element(k);
            let lhs = self.antipode_of(&ek.adjoint());
            let rhs = self.antipode_of(&ek).adjoint();
            kstar += (&lhs - &rhs).frob().powi(2);
        }
        push("antipode_star", kstar.sqrt() / (n as f64).sqrt());

        let passed = axioms.iter().all(|a| a.pass);
        AxiomReport { axioms, passed }
    }

    /// Orthonormal (for `τ(a*b)`) basis of the co-commutative elements `δ(a) = σδ(a)`.
    pub fn cocentre_basis(&self, tol: &ToleranceConfig) -> Vec<Element> {
        let n = self.dim();
        let flip = linalg::swap_matrix(n);
        let diff = &self.coproduct - &flip * &self.coproduct;
        let ns = linalg::null_space(&diff, tol.eq_tol.sqrt() * 1e-2);
        let gram = ns.adjoint() * self.haar_gram() * &ns;
        let ortho = &ns * linalg::hermitian_function(&gram, |v| v.powf(-0.5));
        (0..ortho.ncols())
            .map(|j| {
                self.algebra
                    .element_unchecked(&ortho.column(j).into_owned())
            })
            .collect()
    }

    /// Real matrix of `θ = κ∘*` on `[Re x; Im x]`.
    pub fn theta_real_matrix(&self) -> DMatrix<f64> {
        linalg::realify(self.dim(), |x| {
            self.algebra
                .coords(&self.theta(&self.algebra.element_unchecked(x)))
        })
    }

    /// Real basis of the κ-symmetric elements `{a : κ(a*) = a}`.
    pub fn ksymmetric_basis(&self, tol: &ToleranceConfig) -> Result<Vec<Element>> {
        let n = self.dim();
        let theta = self.theta_real_matrix();
        let id = DMatrix::<f64>::identity(2 * n, 2 * n);
        let residual = (&theta * &theta - &id).norm() / (2.0 * n as f64).sqrt();
        if residual >= tol.eq_tol {
            return Err(Error::NotInvolutive { residual });
        }
        let ns = linalg::real_null_space(&(theta - id), tol.eq_tol.sqrt() * 1e-2);
        Ok((0..ns.ncols())
            .map(|j| {
                self.algebra
                    .element_unchecked(&linalg::complexify(&ns.column(j).into_owned()))
            })
            .collect())
    }

    /// The support `j` of the counit: the minimal central projection with `x j = ε(x) j`.
    pub fn counit_support(&self, tol: &ToleranceConfig) -> Result<CentralProjection> {
        let mut best: Option<(usize, f64)> = None;
        for (b, &dim) in self.algebra.block_dims().iter().enumerate() {
            if dim != 1 {
                continue;
            }
            let idx = self.algebra.index(b, 0, 0);
            let mut indicator = CVec::zeros(self.dim());
            indicator[idx] = ONE;
            let residual = linalg::frob_vec(&(&self.counit - indicator));
            if best.is_none_or(|(_, r)| residual < r) {
                best = Some((b, residual));
            }
        }
        match best {
            Some((block, residual)) if residual < tol.eq_tol => Ok(CentralProjection {
                element: self.algebra.central_projection(block),
                block,
            }),
            Some((_, residual)) => Err(Error::NoCharacterBlock { residual }),
            None => Err(Error::NoCharacterBlock {
                residual: f64::INFINITY,
            }),
        }
    }

    /// `ℂ[G]` decomposed into matrix blocks, trivial representation first.
    pub fn group_algebra(group: &FiniteGroup, tol: &ToleranceConfig) -> Result<Self> {
        let n = group.order();
        let e = |g: usize| {
            let mut v = CVec::zeros(n);
            v[g] = ONE;
            v
        };
        let product = |x: &CVec, y: &CVec| {
            let mut out = CVec::zeros(n);
            for a in 0..n {
                if x[a] == ZERO {
                    continue;
                }
                for b in 0..n {
                    out[group.mul(a, b)] += x[a] * y[b];
                }
            }
            out
        };
        let mut star = CMat::zeros(n, n);
        let mut kappa = CMat::zeros(n, n);
        for g in 0..n {
            star[(group.inv(g), g)] = ONE;
            kappa[(group.inv(g), g)] = ONE;
        }
        let abs = AbstractAlgebra::from_product(n, product, star, e(0), e(0));
        let ones = CVec::from_element(n, ONE);
        let dec = wedderburn::decompose(&abs, Some(&ones), tol.eq_tol)?;
        let c = &dec.to_blocks;
        let ci = &dec.from_blocks;

        let mut coproduct = CMat::zeros(n * n, n);
        for g in 0..n {
            let cg = c.column(g);
            for m in 0..n {
                let w = ci[(g, m)];
                if w.norm() == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let ck = cg[k] * w;
                    if ck.norm() == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        coproduct[(k * n + l, m)] += ck * cg[l];
                    }
                }
            }
        }
        let counit = ci.transpose() * &ones;
        let haar = ci.row(0).transpose();
        let antipode = c * kappa * ci;
        let mut h = Self::new(
            format!("C[{}]", group.name()),
            dec.algebra,
            coproduct,
            counit,
            antipode,
            Some(haar),
            tol,
        )?;
        h.group_basis = Some(GroupBasis {
            group: group.clone(),
            kind: GroupKind::GroupAlgebra,
            to_mu: c.clone(),
            from_mu: ci.clone(),
        });
        Ok(h)
    }

    /// `C(G)` on the basis of point masses.
    pub fn function_algebra(group: &FiniteGroup, tol: &ToleranceConfig) -> Result<Self> {
        let n = group.order();
        let algebra = BlockAlgebra::commutative(n)?;
        let mut coproduct = CMat::zeros(n * n, n);
        let mut antipode = CMat::zeros(n, n);
        for s in 0..n {
            for t in 0..n {
                coproduct[(s * n + t, group.mul(s, t))] = ONE;
            }
            antipode[(group.inv(s), s)] = ONE;
        }
        let mut counit = CVec::zeros(n);
        counit[0] = ONE;
        let haar = CVec::from_element(n, C64::new(1.0 / n as f64, 0.0));
        let mut h = Self::new(
            format!("C({})", group.name()),
            algebra,
            coproduct,
            counit,
            antipode,
            Some(haar),
            tol,
        )?;
        h.group_basis = Some(GroupBasis {
            group: group.clone(),
            kind: GroupKind::FunctionAlgebra,
            to_mu: CMat::identity(n, n),
            from_mu: CMat::identity(n, n),
        });
        Ok(h)
    }

    /// The eight-dimensional Kac–Paljutkin quantum group `ℂ⁴ ⊕ M₂`, built from its
    /// structure constants. Basis order: `e1, e2, e3, e4, a11, a12, a21, a22`.
    pub fn kac_paljutkin(tol: &ToleranceConfig) -> Result<Self> {
        let n = 8;
        let (e1, e2, e3, e4, a11, a12, a21, a22) = (0, 1, 2, 3, 4, 5, 6, 7);
        let half = C64::new(0.5, 0.0);
        let mut d = CMat::zeros(n * n, n);
        let mut add = |m: usize, k: usize, l: usize, c: C64| d[(k * n + l, m)] += c;

        // Δe1 = Σ e_i⊗e_i + ½ Σ a_ij⊗a_ij
        for i in [e1, e2, e3, e4] {
            add(e1, i, i, ONE);
        }
        for a in [a11, a12, a21, a22] {
            add(e1, a, a, half);
        }
        // Δe2, Δe3
        for (m, partner, sign) in [(e2, e3, 1.0), (e3, e2, -1.0)] {
            add(m, e1, m, ONE);
            add(m, m, e1, ONE);
            add(m, partner, e4, ONE);
            add(m, e4, partner, ONE);
            add(m, a11, a22, half);
            add(m, a22, a11, half);
            add(m, a21, a12, half * I * sign);
            add(m, a12, a21, -half * I * sign);
        }
        // Δe4
        add(e4, e1, e4, ONE);
        add(e4, e4, e1, ONE);
        add(e4, e2, e3, ONE);
        add(e4, e3, e2, ONE);
        add(e4, a11, a11, half);
        add(e4, a22, a22, half);
        add(e4, a12, a12, -half);
        add(e4, a21, a21, -half);
        // Δa11, Δa22
        for (m, same, other) in [(a11, a11, a22), (a22, a22, a11)] {
            add(m, e1, same, ONE);
            add(m, same, e1, ONE);
            add(m, e2, other, ONE);
            add(m, other, e2, ONE);
            add(m, e3, other, ONE);
            add(m, other, e3, ONE);
            add(m, e4, same, ONE);
            add(m, same, e4, ONE);
        }
        // Δa12, Δa21
        for (m, other, sign) in [(a12, a21, 1.0), (a21, a12, -1.0)] {
            let s = C64::new(sign, 0.0);
            add(m, e1, m, ONE);
            add(m, m, e1, ONE);
            add(m, e2, other, I * s);
            add(m, other, e2, -I * s);
            add(m, e3, other, -I * s);
            add(m, other, e3, I * s);
            add(m, e4, m, -ONE);
            add(m, m, e4, -ONE);
        }

        let mut antipode = CMat::identity(n, n);
        antipode[(a12, a12)] = ZERO;
        antipode[(a21, a21)] = ZERO;
        antipode[(a21, a12)] = ONE;
        antipode[(a12, a21)] = ONE;
        let mut counit = CVec::zeros(n);
        counit[e1] = ONE;
        Self::new(
            "kac-paljutkin",
            BlockAlgebra::new(vec![1, 1, 1, 1, 2])?,
            d,
            counit,
            antipode,
            None,
            tol,
        )
    }

    /// Groups whose group and function algebras make up the standard example suite.
    pub const EXAMPLE_GROUPS: [&'static str; 5] = ["Z2", "Z3", "Z4", "S3", "D4"];

    /// The standard example suite: `ℂ[G]` and `C(G)` for each of [`Self::EXAMPLE_GROUPS`],
    /// followed by the Kac–Paljutkin algebra.
    pub fn examples(tol: &ToleranceConfig) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for name in Self::EXAMPLE_GROUPS {
            let g = FiniteGroup::from_name(name)?;
            out.push(Self::group_algebra(&g, tol)?);
            out.push(Self::function_algebra(&g, tol)?);
        }
        out.push(Self::kac_paljutkin(tol)?);
        Ok(out)
    }

    /// Names of the bundled structure-constant files.
    pub fn builtin_names() -> &'static [&'static str] {
        &["kac_paljutkin"]
    }

    /// Load a bundled example by name (`kac_paljutkin`, optionally with `.json`).
    pub fn builtin(name: &str, tol: &ToleranceConfig) -> Result<Self> {
        let stem = name.trim_end_matches(".json").replace('-', "_");
        let stem = stem.rsplit('/').next().unwrap_or(&stem);
        match stem {
            "kac_paljutkin" => Self::from_json(KAC_PALJUTKIN_JSON, tol),
            _ => Err(Error::Parse(format!("no bundled algebra named {name:?}"))),
        }
    }

    pub fn bundled_kac_paljutkin_json() -> &'static str {
        KAC_PALJUTKIN_JSON
    }

    pub fn from_json(text: &str, tol: &ToleranceConfig) -> Result<Self> {
        let raw: HopfJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_hopf(tol)
    }

    pub fn to_json(&self) -> HopfJson {
        HopfJson {
            name: Some(self.name.clone()),
            block_dims: self.algebra.block_dims().to_vec(),
            basis_note: Some(
                "matrix units ordered (block, row, col); coproduct row k*N+l is the coefficient of e_k (x) e_l"
                    .into(),
            ),
            coproduct: mat_to_rows(&self.coproduct),
            antipode: mat_to_rows(&self.antipode),
            counit: vec_to_pairs(&self.counit),
            haar: Some(vec_to_pairs(&self.haar)),
        }
    }
}

/// Structure-constant file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub block_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_note: Option<String>,
    pub coproduct: Vec<Vec<[f64; 2]>>,
    pub antipode: Vec<Vec<[f64; 2]>>,
    pub counit: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar: Option<Vec<[f64; 2]>>,
}

fn mat_to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

fn vec_to_pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn rows_to_mat(what: &str, rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize) -> Result<CMat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch(format!(
            "{what} must be {nrows}x{ncols}"
        )));
    }
    Ok(CMat::from_fn(nrows, ncols, |r, c| {
        C64::new(rows[r][c][0], rows[r][c][1])
    }))
}

fn pairs_to_vec(what: &str, v: &[[f64; 2]], n: usize) -> Result<CVec> {
    if v.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{what} must have {n} entries, found {}",
            v.len()
        )));
    }
    Ok(CVec::from_iterator(
        n,
        v.iter().map(|p| C64::new(p[0], p[1])),
    ))
}

impl HopfJson {
    pub fn into_hopf(self, tol: &ToleranceConfig) -> Result<HopfAlgebra> {
        let algebra = BlockAlgebra::new(self.block_dims)?;
        let n = algebra.dim();
        let all_finite = self
            .coproduct
            .iter()
            .chain(self.antipode.iter())
            .flatten()
            .chain(self.counit.iter())
            .chain(self.haar.iter().flatten())
            .all(|p| p[0].is_finite() && p[1].is_finite());
        if !all_finite {
            return Err(Error::Parse("structure constants must be finite".into()));
        }
        let coproduct = rows_to_mat("coproduct", &self.coproduct, n * n, n)?;
        let antipode = rows_to_mat("antipode", &self.antipode, n, n)?;
        let counit = pairs_to_vec("counit", &self.counit, n)?;
        let haar = match self.haar {
            Some(h) => Some(pairs_to_vec("haar", &h, n)?),
            None => None,
        };
        HopfAlgebra::new(
            self.name.unwrap_or_else(|| "custom".into()),
            algebra,
            coproduct,
            counit,
            antipode,
            haar,
            tol,
        )
    }
}

/// Solve for the unique state `τ` with `(id⊗τ)δ = τ(·)1 = (τ⊗id)δ`.
///
/// `coproduct` is `N²×N` in pair coordinates and `unit` the coordinates of the unit.
pub fn compute_haar(coproduct: &CMat, unit: &CVec, tol: &ToleranceConfig) -> Result<CVec> {
    let n = unit.len();
    // Unknowns t_0..t_{N-1} (values on the basis). Equations indexed by (k, m).
    let mut sys = CMat::zeros(2 * n * n, n);
    for m in 0..n {
        for k in 0..n {
            let row_r = m * n + k;
            let row_l = n * n + m * n + k;
            for l in 0..n {
                // (id⊗τ): Σ_l D[(k,l),m] t_l − unit_k t_m
                sys[(row_r, l)] += coproduct[(k * n + l, m)];
                // (τ⊗id): Σ_l D[(l,k),m] t_l − unit_k t_m
                sys[(row_l, l)] += coproduct[(l * n + k, m)];
            }
            sys[(row_r, m)] -= unit[k];
            sys[(row_l, m)] -= unit[k];
        }
    }
    let ns = linalg::null_space(&sys, tol.inv_tol);
    if ns.ncols() != 1 {
        return Err(Error::NonUniqueHaar {
            nullity: ns.ncols(),
        });
    }
    let t = ns.column(0).into_owned();
    let norm = bil(&t, unit);
    if norm.norm() < tol.inv_tol {
        return Err(Error::NonUniqueHaar { nullity: 0 });
    }
    Ok(t / norm)
}

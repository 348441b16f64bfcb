//! Finite-dimensional C*-algebras as direct sums of full matrix blocks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE};
use crate::tolerance::ToleranceConfig;

/// `⊕ M_{n_i}(ℂ)`, with the matrix-unit basis ordered by (block, row, col).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAlgebra {
    block_dims: Vec<usize>,
    offsets: Vec<usize>,
}

/// Label of a matrix unit `e^{block}_{row,col}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisLabel {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl BlockAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!(
                "block dimensions must be a non-empty list of positive integers, got {block_dims:?}"
            )));
        }
        let mut offsets = Vec::with_capacity(block_dims.len() + 1);
        let mut acc = 0;
        for &n in &block_dims {
            offsets.push(acc);
            acc += n * n;
        }
        offsets.push(acc);
        Ok(Self {
            block_dims,
            offsets,
        })
    }

    /// `ℂ^n`.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Complex dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn index(&self, block: usize, row: usize, col: usize) -> usize {
        self.offsets[block] + row * self.block_dims[block] + col
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        let n = self.block_dims[block];
        let local = index - self.offsets[block];
        BasisLabel {
            block,
            row: local / n,
            col: local % n,
        }
    }

    pub fn basis(&self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|k| self.label(k)).collect()
    }

    pub fn zero(&self) -> Element {
        Element {
            blocks: self.block_dims.iter().map(|&n| CMat::zeros(n, n)).collect(),
        }
    }

    pub fn unit(&self) -> Element {
        Element {
            blocks: self
                .block_dims
                .iter()
                .map(|&n| CMat::identity(n, n))
                .collect(),
        }
    }

    pub fn basis_element(&self, index: usize) -> Element {
        let l = self.label(index);
        let mut x = self.zero();
        x.blocks[l.block][(l.row, l.col)] = ONE;
        x
    }

    /// Minimal central projection of `block`.
    pub fn central_projection(&self, block: usize) -> Element {
        let mut x = self.zero();
        x.blocks[block] = CMat::identity(self.block_dims[block], self.block_dims[block]);
        x
    }

    /// Coefficient vector in the matrix-unit basis.
    pub fn coords(&self, x: &Element) -> CVec {
        debug_assert!(self.contains(x));
        let mut v = CVec::zeros(self.dim());
        for (b, m) in x.blocks.iter().enumerate() {
            let n = self.block_dims[b];
            for r in 0..n {
                for c in 0..n {
                    v[self.offsets[b] + r * n + c] = m[(r, c)];
                }
            }
        }
        v
    }

    pub fn element(&self, v: &CVec) -> Result<Element> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(self.element_unchecked(v))
    }

    pub(crate) fn element_unchecked(&self, v: &CVec) -> Element {
        let blocks = self
            .block_dims
            .iter()
            .enumerate()
            .map(|(b, &n)| CMat::from_fn(n, n, |r, c| v[self.offsets[b] + r * n + c]))
            .collect();
        Element { blocks }
    }

    pub fn from_blocks(&self, blocks: Vec<CMat>) -> Result<Element> {
        let x = Element { blocks };
        self.check(&x)?;
        Ok(x)
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.blocks.len() == self.block_dims.len()
            && x.blocks
                .iter()
                .zip(&self.block_dims)
                .all(|(m, &n)| m.nrows() == n && m.ncols() == n)
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "expected blocks {:?}, found {:?}",
                self.block_dims,
                x.shape()
            )))
        }
    }

    /// Product of coefficient vectors.
    pub fn mul_coords(&self, x: &CVec, y: &CVec) -> CVec {
        let a = self.element_unchecked(x);
        let b = self.element_unchecked(y);
        self.coords(&(&a * &b))
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult_matrix(&self, x: &Element) -> CMat {
        self.linear_map_matrix(|y| x * y)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mult_matrix(&self, x: &Element) -> CMat {
        self.linear_map_matrix(|y| y * x)
    }

    /// Matrix of a complex-linear map `A → A`, column `k` the image of the `k`-th matrix unit.
    pub fn linear_map_matrix(&self, f: impl Fn(&Element) -> Element) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            m.set_column(k, &self.coords(&f(&self.basis_element(k))));
        }
        m
    }

    /// Matrix of the (antilinear) involution in coordinates: `coords(x*) = P · conj(coords(x))`.
    pub fn star_permutation(&self) -> CMat {
        let n = self.dim();
        let mut p = CMat::zeros(n, n);
        for k in 0..n {
            let l = self.label(k);
            p[(self.index(l.block, l.col, l.row), k)] = ONE;
        }
        p
    }

    pub fn star_coords(&self, x: &CVec) -> CVec {
        self.coords(&self.element_unchecked(x).adjoint())
    }

    /// Basis of the centre computed from commutators with every matrix unit.
    pub fn centre_basis(&self, tol: f64) -> Vec<Element> {
        let n = self.dim();
        let mut rows = CMat::zeros(n * n, n);
        for k in 0..n {
            let e = self.basis_element(k);
            let comm = self.linear_map_matrix(|z| &(z * &e) - &(&e * z));
            rows.view_mut((k * n, 0), (n, n)).copy_from(&comm);
        }
        let ns = linalg::null_space(&rows, tol);
        (0..ns.ncols())
            .map(|j| self.element_unchecked(&ns.column(j).into_owned()))
            .collect()
    }

    /// Layout of `self ⊗ other`.
    pub fn tensor(&self, other: &BlockAlgebra) -> TensorLayout {
        TensorLayout::new(self, other)
    }
}

impl fmt::Display for BlockAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.block_dims.iter().map(|n| format!("M{n}")).collect();
        write!(f, "{}", parts.join("⊕"))
    }
}

/// `A⊗B` as a block algebra with blocks `(i, j)` ordered `i`-major, together with the
/// permutation from pair coordinates `k·dim B + l` (the coefficient of `e_k⊗f_l`) to
/// matrix-unit coordinates of `A⊗B`.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    pub algebra: BlockAlgebra,
    pub left_dim: usize,
    pub right_dim: usize,
    /// `pair_to_mu[k * right_dim + l]` is the matrix-unit index of `e_k ⊗ f_l`.
    pub pair_to_mu: Vec<usize>,
}

impl TensorLayout {
    fn new(a: &BlockAlgebra, b: &BlockAlgebra) -> Self {
        let mut dims = Vec::with_capacity(a.num_blocks() * b.num_blocks());
        for &n in a.block_dims() {
            for &m in b.block_dims() {
                dims.push(n * m);
            }
        }
        let algebra = BlockAlgebra::new(dims).expect("positive dims");
        let mut pair_to_mu = vec![0; a.dim() * b.dim()];
        for k in 0..a.dim() {
            let lk = a.label(k);
            for l in 0..b.dim() {
                let ll = b.label(l);
                let m = b.block_dims()[ll.block];
                let blk = lk.block * b.num_blocks() + ll.block;
                let idx = algebra.index(blk, lk.row * m + ll.row, lk.col * m + ll.col);
                pair_to_mu[k * b.dim() + l] = idx;
            }
        }
        Self {
            algebra,
            left_dim: a.dim(),
            right_dim: b.dim(),
            pair_to_mu,
        }
    }

    pub fn to_element(&self, pair: &CVec) -> Element {
        let mut v = CVec::zeros(pair.len());
        for (p, &m) in self.pair_to_mu.iter().enumerate() {
            v[m] = pair[p];
        }
        self.algebra.element_unchecked(&v)
    }

    pub fn to_pair(&self, x: &Element) -> CVec {
        let v = self.algebra.coords(x);
        CVec::from_iterator(self.pair_to_mu.len(), self.pair_to_mu.iter().map(|&m| v[m]))
    }

    /// Product in `A⊗B` of two pair-coordinate vectors.
    pub fn mul_pair(&self, x: &CVec, y: &CVec) -> CVec {
        self.to_pair(&(&self.to_element(x) * &self.to_element(y)))
    }

    /// Involution in `A⊗B` on pair coordinates.
    pub fn star_pair(&self, x: &CVec) -> CVec {
        self.to_pair(&self.to_element(x).adjoint())
    }
}

/// An element of a [`BlockAlgebra`]: one square complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    blocks: Vec<CMat>,
}

impl Element {
    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut CMat {
        &mut self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMat> {
        self.blocks
    }

    pub fn shape(&self) -> Vec<usize> {
        self.blocks.iter().map(|m| m.nrows()).collect()
    }

    fn same_shape(&self, other: &Element) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.shape() == b.shape())
    }

    fn zip_with(&self, other: &Element, f: impl Fn(&CMat, &CMat) -> CMat) -> Element {
        assert!(
            self.same_shape(other),
            "block shapes differ: {:?} vs {:?}",
            self.shape(),
            other.shape()
        );
        Element {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn map_blocks(&self, f: impl Fn(&CMat) -> CMat) -> Element {
        Element {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self * other)
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self + other)
    }

    pub fn scale(&self, s: C64) -> Element {
        self.map_blocks(|m| m * s)
    }

    pub fn scale_re(&self, s: f64) -> Element {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Element {
        self.map_blocks(|m| m.adjoint())
    }

    /// Blockwise transpose (a *-anti-automorphism).
    pub fn transpose(&self) -> Element {
        self.map_blocks(|m| m.transpose())
    }

    pub fn commutator(&self, other: &Element) -> Element {
        &(self * other) - &(other * self)
    }

    /// C*-norm: the largest operator norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::op_norm).fold(0.0, f64::max)
    }

    pub fn frob(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| linalg::frob(m).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Relative Frobenius distance, floored at scale 1.
    pub fn rel_diff(&self, other: &Element) -> f64 {
        (self - other).frob() / self.frob().max(other.frob()).max(1.0)
    }

    pub fn approx_eq(&self, other: &Element, tol: &ToleranceConfig) -> bool {
        self.same_shape(other) && self.rel_diff(other) <= tol.eq_tol
    }

    /// Relative self-adjointness residual `‖x − x*‖ / max(1, ‖x‖)`.
    pub fn self_adjoint_residual(&self) -> f64 {
        (self - &self.adjoint()).frob() / self.frob().max(1.0)
    }

    pub fn unitary_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                let n = m.nrows();
                linalg::frob(&(m.adjoint() * m - CMat::identity(n, n))).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn sigma_min(&self) -> f64 {
        self.blocks
            .iter()
            .map(linalg::sigma_min)
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ_i tr(x_i)` over blocks.
    pub fn block_traces(&self) -> Vec<C64> {
        self.blocks.iter().map(|m| m.trace()).collect()
    }

    pub fn require_self_adjoint(&self, tol: &ToleranceConfig) -> Result<()> {
        let residual = self.self_adjoint_residual();
        if residual > tol.eq_tol {
            return Err(Error::NotSelfAdjoint { residual });
        }
        Ok(())
    }

    pub fn require_invertible(&self, tol: &ToleranceConfig) -> Result<()> {
        let sigma_min = self.sigma_min();
        if !(sigma_min > tol.inv_tol) {
            return Err(Error::NotInvertible { sigma_min });
        }
        Ok(())
    }

    /// Sorted eigenvalue multiset of a self-adjoint element, across all blocks.
    pub fn spectrum(&self, tol: &ToleranceConfig) -> Result<Vec<f64>> {
        self.require_self_adjoint(tol)?;
        Ok(self.spectrum_unchecked())
    }

    pub(crate) fn spectrum_unchecked(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|m| linalg::hermitian_eigen(m).0)
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Positivity test: self-adjoint with smallest eigenvalue `≥ −psd_tol`.
    pub fn is_positive(&self, tol: &ToleranceConfig) -> bool {
        match self.spectrum(tol) {
            Ok(s) => s
                .first()
                .is_none_or(|&m| m >= -tol.psd_tol * self.norm().max(1.0)),
            Err(_) => false,
        }
    }

    pub fn invert(&self, tol: &ToleranceConfig) -> Result<Element> {
        self.require_invertible(tol)?;
        Ok(self.map_blocks(|m| m.clone().try_inverse().expect("checked invertible")))
    }

    /// Polar decomposition `v = |v|·U` of a self-adjoint invertible element, with `U` a symmetry.
    pub fn polar_symmetry(&self, tol: &ToleranceConfig) -> Result<(Element, Element)> {
        self.require_self_adjoint(tol)?;
        self.require_invertible(tol)?;
        let absval = self.map_blocks(|m| linalg::hermitian_function(m, f64::abs));
        let sym = self.map_blocks(|m| linalg::hermitian_function(m, f64::signum));
        Ok((absval, sym))
    }

    /// Exponential, block by block.
    pub fn exp(&self) -> Element {
        self.map_blocks(|m| m.clone().exp())
    }

    /// Principal logarithm of a normal element with the branch cut on the negative axis.
    pub fn log_normal(&self) -> Element {
        self.map_blocks(|m| linalg::normal_function(m, |z| z.ln()))
    }

    /// Apply a scalar function to a normal element through its eigen-decomposition.
    pub fn normal_function(&self, f: impl Fn(C64) -> C64 + Copy) -> Element {
        self.map_blocks(|m| linalg::normal_function(m, f))
    }

    /// Eigenvalues of a normal element, across all blocks.
    pub fn normal_spectrum(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|m| linalg::normal_eigen(m).0)
            .collect()
    }

    /// `x ⊗ y` in `A⊗B` (blocks `(i, j)` ordered `i`-major).
    pub fn tensor(&self, other: &Element) -> Element {
        let mut blocks = Vec::with_capacity(self.blocks.len() * other.blocks.len());
        for a in &self.blocks {
            for b in &other.blocks {
                blocks.push(a.kronecker(b));
            }
        }
        Element { blocks }
    }

    /// `x` as a single block-diagonal matrix.
    pub fn to_dense(&self) -> CMat {
        let n: usize = self.blocks.iter().map(|m| m.nrows()).sum();
        let mut out = CMat::zeros(n, n);
        let mut off = 0;
        for m in &self.blocks {
            let k = m.nrows();
            out.view_mut((off, off), (k, k)).copy_from(m);
            off += k;
        }
        out
    }
}

/// `x ⊗ y`; see [`Element::tensor`].
pub fn tensor_element(x: &Element, y: &Element) -> Element {
    x.tensor(y)
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;
    fn add(self, rhs: &'a Element) -> Element {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;
    fn sub(self, rhs: &'a Element) -> Element {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;
    fn mul(self, rhs: &'a Element) -> Element {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_blocks(|m| -m)
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

/// Blocks in row-major `[re, im]` pairs, the serialization used in files and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementJson(pub Vec<Vec<Vec<[f64; 2]>>>);

impl From<&Element> for ElementJson {
    fn from(x: &Element) -> Self {
        ElementJson(
            x.blocks
                .iter()
                .map(|m| {
                    (0..m.nrows())
                        .map(|r| {
                            (0..m.ncols())
                                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

impl ElementJson {
    pub fn into_element(self, algebra: &BlockAlgebra) -> Result<Element> {
        let mut blocks = Vec::with_capacity(self.0.len());
        for rows in self.0 {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::ShapeMismatch("element block is not square".into()));
            }
            blocks.push(CMat::from_fn(n, n, |r, c| {
                C64::new(rows[r][c][0], rows[r][c][1])
            }));
        }
        algebra.from_blocks(blocks)
    }
}

/// Scalar multiple of the unit.
pub fn scalar(algebra: &BlockAlgebra, s: C64) -> Element {
    algebra.unit().scale(s)
}

/// Diagonal element of a commutative block algebra.
pub fn diag(values: &[C64]) -> Element {
    Element {
        blocks: values
            .iter()
            .map(|&v| CMat::from_element(1, 1, v))
            .collect(),
    }
}

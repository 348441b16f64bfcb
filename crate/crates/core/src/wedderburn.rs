//! Numeric block decomposition of a finite-dimensional C*-algebra given by structure constants.
//!
//! The algebra is presented in an arbitrary basis `b_0, …, b_{N-1}` together with its
//! involution, unit and a faithful tracial state. Working in the GNS orthonormal frame of the
//! state, the left-regular representation is a *-representation; a generic self-adjoint central
//! element separates the isotypic components, and a generic self-adjoint right multiplication
//! splits each component into copies of the irreducible representation.

use crate::algebra::BlockAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE};
use crate::random::Sampler;

/// Fixed seed for the generic elements drawn during the decomposition.
const DECOMPOSITION_SEED: u64 = 0x5eed_b10c;

/// An abstract finite-dimensional *-algebra with a faithful tracial state.
pub struct AbstractAlgebra {
    /// `left[k]` is the matrix of `x ↦ b_k x` in the given basis.
    pub left: Vec<CMat>,
    /// `right[k]` is the matrix of `x ↦ x b_k`.
    pub right: Vec<CMat>,
    /// `coords(x*) = star · conj(coords(x))`.
    pub star: CMat,
    pub unit: CVec,
    /// `τ(x) = Σ_k state[k] x_k`.
    pub state: CVec,
}

impl AbstractAlgebra {
    /// Build from a product on coordinate vectors.
    pub fn from_product(
        dim: usize,
        product: impl Fn(&CVec, &CVec) -> CVec,
        star: CMat,
        unit: CVec,
        state: CVec,
    ) -> Self {
        let e = |k: usize| {
            let mut v = CVec::zeros(dim);
            v[k] = ONE;
            v
        };
        let mut left = Vec::with_capacity(dim);
        let mut right = Vec::with_capacity(dim);
        for k in 0..dim {
            let mut l = CMat::zeros(dim, dim);
            let mut r = CMat::zeros(dim, dim);
            for j in 0..dim {
                l.set_column(j, &product(&e(k), &e(j)));
                r.set_column(j, &product(&e(j), &e(k)));
            }
            left.push(l);
            right.push(r);
        }
        Self {
            left,
            right,
            star,
            unit,
            state,
        }
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    fn combine(mats: &[CMat], x: &CVec) -> CMat {
        let n = mats[0].nrows();
        let mut out = CMat::zeros(n, n);
        for (k, m) in mats.iter().enumerate() {
            if x[k] != C64::new(0.0, 0.0) {
                out += m * x[k];
            }
        }
        out
    }

    fn star_of(&self, x: &CVec) -> CVec {
        &self.star * x.map(|z| z.conj())
    }

    fn gram(&self) -> CMat {
        let n = self.dim();
        let mut g = CMat::zeros(n, n);
        for k in 0..n {
            let mut ek = CVec::zeros(n);
            ek[k] = ONE;
            let sk = self.star_of(&ek);
            let lk = Self::combine(&self.left, &sk);
            for l in 0..n {
                let prod = lk.column(l);
                g[(k, l)] = self.state.iter().zip(prod.iter()).map(|(a, b)| a * b).sum();
            }
        }
        g
    }
}

/// Result of the decomposition: an isomorphism onto `⊕ M_{n_i}`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub algebra: BlockAlgebra,
    /// Column `k` is the matrix-unit coordinate vector of `π(b_k)`.
    pub to_blocks: CMat,
    pub from_blocks: CMat,
}

/// Decompose `alg` into matrix blocks.
///
/// Blocks are ordered by size, then by the value of a fixed generic central element. When
/// `first_character` is given, a 1×1 block whose character equals it is moved to the front.
pub fn decompose(
    alg: &AbstractAlgebra,
    first_character: Option<&CVec>,
    tol: f64,
) -> Result<Decomposition> {
    let n = alg.dim();
    let gram = alg.gram();
    let herm_res = linalg::frob(&(&gram - gram.adjoint()));
    if herm_res > tol.sqrt() * linalg::frob(&gram).max(1.0) {
        return Err(Error::Decomposition(format!(
            "state does not define an inner product (Hermitian residual {herm_res:.3e})"
        )));
    }
    let (gvals, _) = linalg::hermitian_eigen(&gram);
    if gvals[0] <= tol * gvals[n - 1].max(1.0) {
        return Err(Error::Decomposition(format!(
            "state is not faithful (smallest Gram eigenvalue {:.3e})",
            gvals[0]
        )));
    }
    // Orthonormal frame: x = R y, y = R⁻¹ x.
    let r = linalg::hermitian_function(&gram, |v| v.powf(-0.5));
    let r_inv = linalg::hermitian_function(&gram, f64::sqrt);
    let to_onb = |m: &CMat| &r_inv * m * &r;

    // Centre: z with b_l z = z b_l for every l.
    let mut stacked = CMat::zeros(n * n, n);
    for l in 0..n {
        let mut col_block = CMat::zeros(n, n);
        for k in 0..n {
            // z = b_k: b_l b_k − b_k b_l
            let c = alg.left[l].column(k) - alg.right[l].column(k);
            col_block.set_column(k, &c);
        }
        stacked.view_mut((l * n, 0), (n, n)).copy_from(&col_block);
    }
    let centre = linalg::null_space(&stacked, tol);
    let nblocks = centre.ncols();
    if nblocks == 0 {
        return Err(Error::Decomposition("empty centre".into()));
    }

    let mut rng = Sampler::new(DECOMPOSITION_SEED);
    let mut h = CVec::zeros(n);
    for j in 0..nblocks {
        let z = centre.column(j).into_owned();
        let sa = (&z + alg.star_of(&z)) * C64::new(0.5, 0.0);
        let skew = (&z - alg.star_of(&z)) * C64::new(0.0, -0.5);
        h += sa * C64::new(rng.normal(), 0.0) + skew * C64::new(rng.normal(), 0.0);
    }
    let lh = to_onb(&AbstractAlgebra::combine(&alg.left, &h));
    let (hvals, hvecs) = linalg::hermitian_eigen(&lh);
    let scale = hvals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let groups = linalg::clusters(&hvals, 1e-6 * scale);
    if groups.len() != nblocks {
        return Err(Error::Decomposition(format!(
            "central element separated {} components, centre has dimension {nblocks}",
            groups.len()
        )));
    }

    let mut blocks: Vec<(usize, f64, CMat)> = Vec::with_capacity(nblocks);
    for g in &groups {
        let d = g.len();
        let m = (d as f64).sqrt().round() as usize;
        if m * m != d {
            return Err(Error::Decomposition(format!(
                "isotypic component of dimension {d} is not a square"
            )));
        }
        let mut e = CMat::zeros(n, d);
        for (j, i) in g.clone().enumerate() {
            e.set_column(j, &hvecs.column(i));
        }
        let w = if m == 1 {
            e
        } else {
            let rv = rng.complex_vector(n);
            let rv = (&rv + alg.star_of(&rv)) * C64::new(0.5, 0.0);
            let rr = to_onb(&AbstractAlgebra::combine(&alg.right, &rv));
            let restricted = e.adjoint() * &rr * &e;
            let (rvals, rvecs) = linalg::hermitian_eigen(&restricted);
            let rscale = rvals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
            if rvals[m] - rvals[m - 1] < 1e-6 * rscale || rvals[m - 1] - rvals[0] > 1e-6 * rscale {
                return Err(Error::Decomposition(
                    "generic right multiplication has degenerate spectrum".into(),
                ));
            }
            &e * rvecs.columns(0, m)
        };
        blocks.push((m, hvals[g.start], w));
    }
    blocks.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let irreps: Vec<Vec<CMat>> = blocks
        .iter()
        .map(|(_, _, w)| {
            (0..n)
                .map(|k| w.adjoint() * to_onb(&alg.left[k]) * w)
                .collect()
        })
        .collect();

    let mut order: Vec<usize> = (0..blocks.len()).collect();
    if let Some(chi) = first_character {
        let pos = order.iter().position(|&b| {
            blocks[b].0 == 1 && (0..n).all(|k| (irreps[b][k][(0, 0)] - chi[k]).norm() <= tol.sqrt())
        });
        if let Some(p) = pos {
            let b = order.remove(p);
            order.insert(0, b);
        }
    }

    let dims: Vec<usize> = order.iter().map(|&b| blocks[b].0).collect();
    let algebra = BlockAlgebra::new(dims)?;
    let mut to_blocks = CMat::zeros(n, n);
    for k in 0..n {
        let mut col = CVec::zeros(n);
        for (pos, &b) in order.iter().enumerate() {
            let m = blocks[b].0;
            for i in 0..m {
                for j in 0..m {
                    col[algebra.index(pos, i, j)] = irreps[b][k][(i, j)];
                }
            }
        }
        to_blocks.set_column(k, &col);
    }
    let from_blocks = to_blocks
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Decomposition("block map is singular".into()))?;
    Ok(Decomposition {
        algebra,
        to_blocks,
        from_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;

    /// M_2 presented in the Pauli basis {1, σx, σy, σz} with state tr/2.
    fn pauli_algebra() -> (AbstractAlgebra, Vec<CMat>) {
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        let o = ONE;
        let basis = vec![
            CMat::from_row_slice(2, 2, &[o, z, z, o]),
            CMat::from_row_slice(2, 2, &[z, o, o, z]),
            CMat::from_row_slice(2, 2, &[z, -i, i, z]),
            CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        ];
        let b2 = basis.clone();
        let expand = move |m: &CMat| -> CVec {
            CVec::from_iterator(4, b2.iter().map(|p| (p.adjoint() * m).trace() * 0.5))
        };
        let b3 = basis.clone();
        let product = move |x: &CVec, y: &CVec| {
            let mx: CMat = b3
                .iter()
                .enumerate()
                .map(|(k, p)| p * x[k])
                .fold(CMat::zeros(2, 2), |a, b| a + b);
            let my: CMat = b3
                .iter()
                .enumerate()
                .map(|(k, p)| p * y[k])
                .fold(CMat::zeros(2, 2), |a, b| a + b);
            expand(&(mx * my))
        };
        let star = CMat::identity(4, 4);
        let unit = CVec::from_vec(vec![o, z, z, z]);
        let state = CVec::from_vec(vec![o, z, z, z]);
        (
            AbstractAlgebra::from_product(4, product, star, unit, state),
            basis,
        )
    }

    #[test]
    fn pauli_basis_decomposes_to_one_block() {
        let (alg, _) = pauli_algebra();
        let d = decompose(&alg, None, 1e-10).unwrap();
        assert_eq!(d.algebra.block_dims(), &[2]);
        // the block map is multiplicative
        for k in 0..4 {
            for l in 0..4 {
                let prod = &alg.left[k].column(l).into_owned();
                let lhs = &d.to_blocks * prod;
                let xk = d
                    .algebra
                    .element(&d.to_blocks.column(k).into_owned())
                    .unwrap();
                let xl = d
                    .algebra
                    .element(&d.to_blocks.column(l).into_owned())
                    .unwrap();
                let rhs = d.algebra.coords(&(&xk * &xl));
                assert!(linalg::frob_vec(&(lhs - rhs)) < 1e-10);
            }
        }
        // and preserves the involution
        let y = d
            .algebra
            .element(&d.to_blocks.column(2).into_owned())
            .unwrap();
        let _: &Element = &y;
        assert!(y.self_adjoint_residual() < 1e-10);
    }
}

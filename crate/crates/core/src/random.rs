//! Seeded random elements shared by the property checks and the sampling harnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{BlockAlgebra, Element};
use crate::linalg::{CMat, CVec, C64};

/// Rejection threshold on the smallest singular value of "random invertible" samples, so that
/// the samples stay well away from the invertibility tolerance.
const MIN_SIGMA: f64 = 1e-3;

/// Deterministic source of random algebra elements.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent child sampler, used to decorrelate parallel workers deterministically.
    pub fn fork(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Standard complex Gaussian (`E|z|² = 1`).
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.normal() * s, self.normal() * s)
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn complex_vector(&mut self, n: usize) -> CVec {
        CVec::from_fn(n, |_, _| self.complex_normal())
    }

    /// Element with i.i.d. complex Gaussian matrix entries.
    pub fn gaussian(&mut self, a: &BlockAlgebra) -> Element {
        let blocks = a
            .block_dims()
            .iter()
            .map(|&n| self.complex_matrix(n, n))
            .collect();
        a.from_blocks(blocks).expect("shapes match")
    }

    pub fn hermitian(&mut self, a: &BlockAlgebra) -> Element {
        let g = self.gaussian(a);
        (&g + &g.adjoint()).scale_re(0.5)
    }

    pub fn skew_hermitian(&mut self, a: &BlockAlgebra) -> Element {
        let g = self.gaussian(a);
        (&g - &g.adjoint()).scale_re(0.5)
    }

    /// Self-adjoint element with smallest singular value at least `1e-3`.
    pub fn sa_invertible(&mut self, a: &BlockAlgebra) -> Element {
        loop {
            let h = self.hermitian(a);
            if h.sigma_min() > MIN_SIGMA {
                return h;
            }
        }
    }

    /// Invertible element with smallest singular value at least `1e-3`.
    pub fn invertible(&mut self, a: &BlockAlgebra) -> Element {
        loop {
            let g = self.gaussian(a);
            if g.sigma_min() > MIN_SIGMA {
                return g;
            }
        }
    }

    /// Positive definite element `g*g + δ`.
    pub fn positive_definite(&mut self, a: &BlockAlgebra) -> Element {
        let g = self.gaussian(a);
        &(&g.adjoint() * &g) + &a.unit().scale_re(0.1)
    }

    /// Haar-distributed unitary in each block (QR of a Ginibre matrix with phase fix).
    pub fn haar_unitary(&mut self, a: &BlockAlgebra) -> Element {
        let blocks = a
            .block_dims()
            .iter()
            .map(|&n| {
                let g = self.complex_matrix(n, n);
                let qr = g.qr();
                let (mut q, r) = (qr.q(), qr.r());
                for j in 0..n {
                    let d = r[(j, j)];
                    let phase = if d.norm() > 0.0 {
                        d / d.norm()
                    } else {
                        C64::new(1.0, 0.0)
                    };
                    let col = q.column(j) * phase;
                    q.set_column(j, &col);
                }
                q
            })
            .collect();
        a.from_blocks(blocks).expect("shapes match")
    }
}

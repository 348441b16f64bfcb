//! Browser bindings for a few workbench operations. Every export returns a JSON string built
//! by a plain Rust function of the same module, so the computations are tested natively.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use fqg_core::dual::{DualHopfAlgebra, Placement};
use fqg_core::groups::FiniteGroup;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::morphisms::{perturbation_distances, perturbed_inverse};
use fqg_core::mult_unitary::{GnsSpace, MultiplicativeUnitary};
use fqg_core::{Element, Error, Result, Sampler, ToleranceConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const GROUPS: [&str; 5] = ["Z2", "Z3", "Z4", "S3", "D4"];
const KP: &str = "kac_paljutkin";

/// `|V|` is only formed up to this algebra dimension (`V` is `N²×N²`).
pub const MAX_HEATMAP_DIM: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraInfo {
    pub id: String,
    pub label: String,
    pub dim: usize,
    pub block_dims: Vec<usize>,
}

struct Entry {
    hopf: HopfAlgebra,
    dual: DualHopfAlgebra,
    unitary: Option<MultiplicativeUnitary>,
}

thread_local! {
    static CACHE: RefCell<HashMap<String, Rc<Entry>>> = RefCell::new(HashMap::new());
}

fn ids() -> Vec<String> {
    let mut out = Vec::new();
    for g in GROUPS {
        out.push(format!("group:{g}"));
        out.push(format!("function:{g}"));
    }
    out.push(KP.to_string());
    out
}

fn label(id: &str) -> String {
    match id.split_once(':') {
        Some(("group", g)) => format!("ℂ[{g}]"),
        Some(("function", g)) => format!("C({g})"),
        _ => "Kac–Paljutkin".to_string(),
    }
}

fn build(id: &str, tol: &ToleranceConfig) -> Result<HopfAlgebra> {
    match id.split_once(':') {
        Some(("group", g)) => HopfAlgebra::group_algebra(&FiniteGroup::from_name(g)?, tol),
        Some(("function", g)) => HopfAlgebra::function_algebra(&FiniteGroup::from_name(g)?, tol),
        None if id == KP => HopfAlgebra::kac_paljutkin(tol),
        _ => Err(Error::Parse(format!("unknown algebra {id:?}"))),
    }
}

fn entry(id: &str) -> Result<Rc<Entry>> {
    if let Some(e) = CACHE.with(|c| c.borrow().get(id).cloned()) {
        return Ok(e);
    }
    let tol = ToleranceConfig::default();
    let hopf = build(id, &tol)?;
    let dual = DualHopfAlgebra::build(&hopf, &tol)?;
    let unitary = if hopf.dim() <= MAX_HEATMAP_DIM {
        Some(MultiplicativeUnitary::build(
            &GnsSpace::build(&hopf)?,
            &dual,
            &tol,
        )?)
    } else {
        None
    };
    let e = Rc::new(Entry {
        hopf,
        dual,
        unitary,
    });
    CACHE.with(|c| c.borrow_mut().insert(id.to_string(), e.clone()));
    Ok(e)
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

pub fn algebras_json() -> Result<String> {
    let tol = ToleranceConfig::default();
    let list = ids()
        .into_iter()
        .map(|id| {
            let h = build(&id, &tol)?;
            Ok(AlgebraInfo {
                label: label(&id),
                dim: h.dim(),
                block_dims: h.algebra().block_dims().to_vec(),
                id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(to_json(&list))
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectra {
    pub haar_of_c: f64,
    pub y: Vec<f64>,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub right_defect: f64,
    pub left_defect: f64,
}

/// Spectrum of a random self-adjoint `y` next to those of `y ⋄ c_t` and `c_t ⋄ y`, where
/// `c_t = (1 − t)·1 + t·c` for a random self-adjoint invertible `c` with `τ(c) = 1`.
pub fn spectra(id: &str, seed: u64, t: f64) -> Result<Spectra> {
    let e = entry(id)?;
    let (h, dual) = (&e.hopf, &e.dual);
    let a = h.algebra();
    let mut rng = Sampler::new(seed);
    let mut c = rng.sa_invertible(a);
    while h.haar_of(&c).re.abs() < 0.1 {
        c = rng.sa_invertible(a);
    }
    let c = c.scale_re(1.0 / h.haar_of(&c).re);
    let c = &a.unit().scale_re(1.0 - t) + &c.scale_re(t);
    let y = rng.hermitian(a);
    let tol = ToleranceConfig::default();
    let sa_spectrum = |x: &Element| (x + &x.adjoint()).scale_re(0.5).spectrum(&tol);
    Ok(Spectra {
        haar_of_c: h.haar_of(&c).re,
        y: y.spectrum(&tol)?,
        right: sa_spectrum(&dual.convolve_placed(&c, &y, Placement::Right))?,
        left: sa_spectrum(&dual.convolve_placed(&c, &y, Placement::Left))?,
        right_defect: dual.spectrum_defect(&c, &y, Placement::Right),
        left_defect: dual.spectrum_defect(&c, &y, Placement::Left),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Heatmap {
    pub size: usize,
    /// Row-major `|V_ij|`.
    pub values: Vec<f64>,
    pub unitarity: f64,
    pub pentagon: f64,
}

pub fn heatmap(id: &str) -> Result<Heatmap> {
    let e = entry(id)?;
    let mu = e.unitary.as_ref().ok_or_else(|| {
        Error::PreconditionFailed(format!(
            "dimension {} above {MAX_HEATMAP_DIM}; V is not formed",
            e.hopf.dim()
        ))
    })?;
    let v = mu.matrix();
    let size = v.nrows();
    let values = (0..size)
        .flat_map(|i| (0..size).map(move |j| v[(i, j)].norm()))
        .collect();
    let cert = mu.certificate();
    Ok(Heatmap {
        size,
        values,
        unitarity: cert.unitarity,
        pentagon: cert.pentagon,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    pub eps: Vec<f64>,
    /// `‖Ad(v + εj) − Ad(v)‖`; zero up to rounding because `j` is central and supported on a
    /// one-dimensional block.
    pub distance: Vec<f64>,
    /// Relative gap between the closed-form inverse of `v + εj` and a direct inverse.
    pub inverse_residual: Vec<f64>,
    /// Smallest singular value of `F(v + εj)`.
    pub fourier_sigma_min: Vec<f64>,
    /// Smallest singular value of `F` applied to the closed-form inverse.
    pub fourier_inverse_sigma_min: Vec<f64>,
}

/// Perturb a random self-adjoint invertible `v` along the counit support `j` for `points`
/// log-spaced `ε` in `[10^lo, 10^hi]`.
pub fn curve(id: &str, seed: u64, lo: f64, hi: f64, points: usize) -> Result<Curve> {
    if points < 2 || lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Parse("need at least two points and lo < hi".into()));
    }
    let tol = ToleranceConfig::default();
    let e = entry(id)?;
    let (h, dual) = (&e.hopf, &e.dual);
    let v = Sampler::new(seed).sa_invertible(h.algebra());
    let v_inv = v.invert(&tol)?;
    let j = h.counit_support(&tol)?.element;
    let phi_v = h.counit_of(&v);
    let eps: Vec<f64> = (0..points)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / (points - 1) as f64))
        .collect();
    let distance = perturbation_distances(&v, h, &eps, &tol)?;
    let mut inverse_residual = Vec::with_capacity(points);
    let mut fourier_sigma_min = Vec::with_capacity(points);
    let mut fourier_inverse_sigma_min = Vec::with_capacity(points);
    for &s in &eps {
        let vt = &v + &j.scale_re(s);
        let closed = perturbed_inverse(&v_inv, &j, phi_v, s);
        inverse_residual.push(match vt.invert(&tol) {
            Ok(direct) => closed.rel_diff(&direct),
            Err(_) => f64::INFINITY,
        });
        fourier_sigma_min.push(dual.fourier(&vt).sigma_min());
        fourier_inverse_sigma_min.push(dual.fourier(&closed).sigma_min());
    }
    Ok(Curve {
        eps,
        distance,
        inverse_residual,
        fourier_sigma_min,
        fourier_inverse_sigma_min,
    })
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// `[{id, label, dim, block_dims}]` for every selectable algebra.
#[wasm_bindgen]
pub fn algebras() -> std::result::Result<String, JsError> {
    js(algebras_json())
}

#[wasm_bindgen]
pub fn convolution_spectra(id: &str, seed: u32, t: f64) -> std::result::Result<String, JsError> {
    js(spectra(id, seed as u64, t).map(|s| to_json(&s)))
}

#[wasm_bindgen]
pub fn unitary_heatmap(id: &str) -> std::result::Result<String, JsError> {
    js(heatmap(id).map(|h| to_json(&h)))
}

#[wasm_bindgen]
pub fn perturbation_curve(
    id: &str,
    seed: u32,
    lo: f64,
    hi: f64,
    points: usize,
) -> std::result::Result<String, JsError> {
    js(curve(id, seed as u64, lo, hi, points).map(|c| to_json(&c)))
}

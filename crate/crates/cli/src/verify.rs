use fqg_core::dual::{jordan_decompose, DualHopfAlgebra, Functional, Placement, TracialState};
use fqg_core::hopf::HopfAlgebra;
use fqg_core::mult_unitary::{GnsSpace, MultiplicativeUnitary};
use fqg_core::{Element, Sampler, ToleranceConfig};

use crate::report::{fmt_num, Check, Relation, Report};

/// Largest algebra dimension for which `V` (an `N²×N²` matrix) and its pentagon are formed.
pub const MAX_UNITARY_DIM: usize = 10;

/// Spectra of `y ⋄ c` and `y` are compared at this absolute tolerance.
const SPECTRUM_TOL: f64 = 1e-8;

fn stream(seed: u64, purpose: u64) -> Sampler {
    Sampler::fork(seed, purpose)
}

/// Append one check per axiom; returns whether all of them pass.
pub fn axiom_checks(
    report: &mut Report,
    h: &HopfAlgebra,
    prefix: &str,
    tol: &ToleranceConfig,
) -> bool {
    let axioms = h.verify_axioms(tol);
    for a in &axioms.axioms {
        report.push(Check::below(
            format!("{prefix}{}", a.name),
            a.residual,
            tol.eq_tol,
        ));
    }
    axioms.passed
}

pub fn run(report: &mut Report, h: &HopfAlgebra, samples: usize, tol: &ToleranceConfig) {
    let seed = report.seed;
    let a = h.algebra();

    let dual = match DualHopfAlgebra::build(h, tol) {
        Ok(d) => d,
        Err(e) => {
            report.push(Check::failed("dual construction", e.to_string()));
            return;
        }
    };
    let dual_ok = axiom_checks(report, dual.hopf(), "dual axiom ", tol);
    report.detail("dual_block_dims", dual.algebra().block_dims().to_vec());
    if !dual_ok {
        return;
    }

    let mut rng = stream(seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = rng.gaussian(a);
        let back = dual.inverse_fourier(&dual.fourier(&x));
        worst = worst.max((&back - &x).frob() / x.frob());
    }
    report.push(Check::below(
        "Fourier round trip ‖F⁻¹F(a) − a‖/‖a‖",
        worst,
        tol.eq_tol,
    ));

    let unit = a.unit();
    let mut rng = stream(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let c = rng.gaussian(a);
        let lhs = dual.convolve(&c, &unit);
        let rhs = unit.scale(h.haar_of(&c));
        worst = worst.max((&lhs - &rhs).frob() / c.frob().max(1.0));
    }
    report.push(Check::below("unit law c⋄1 = τ(c)1", worst, tol.eq_tol));

    let mut rng = stream(seed, 3);
    let (mut sa, mut sigma) = (0.0f64, f64::INFINITY);
    for _ in 0..samples {
        let x = dual.convolve(&rng.sa_invertible(a), &rng.sa_invertible(a));
        sa = sa.max(x.self_adjoint_residual());
        sigma = sigma.min(x.sigma_min());
    }
    report.push(Check::below(
        "self-adjoint invertible c⋄y: self-adjointness",
        sa,
        tol.eq_tol,
    ));
    report.push(Check::new(
        "self-adjoint invertible c⋄y: smallest singular value",
        sigma,
        Relation::Above,
        tol.inv_tol,
    ));

    spectrum_check(report, h, &dual, samples, tol);
    jordan_checks(report, h, samples, tol);
    unitary_checks(report, h, &dual, tol);
}

fn spectrum_check(
    report: &mut Report,
    h: &HopfAlgebra,
    dual: &DualHopfAlgebra,
    samples: usize,
    tol: &ToleranceConfig,
) {
    let a = h.algebra();
    let mut rng = stream(report.seed, 4);
    let mut worst = [0.0f64; 2];
    for _ in 0..samples {
        // Rescale c so that τ(c) = 1, redrawing when τ(c) is too small to divide by.
        let mut c = rng.sa_invertible(a);
        while h.haar_of(&c).re.abs() < 0.1 {
            c = rng.sa_invertible(a);
        }
        let c = c.scale_re(1.0 / h.haar_of(&c).re);
        let y = rng.hermitian(a);
        for (slot, p) in Placement::BOTH.iter().enumerate() {
            worst[slot] = worst[slot].max(dual.spectrum_defect(&c, &y, *p));
        }
    }
    let validated: Vec<&str> = Placement::BOTH
        .iter()
        .zip(&worst)
        .filter(|(_, w)| **w < SPECTRUM_TOL.max(tol.eq_tol))
        .map(|(p, _)| p.name())
        .collect();
    let best = worst[0].min(worst[1]);
    let note = format!(
        "{}: {}; {}: {}; validated placement: {}",
        Placement::Right.name(),
        fmt_num(worst[0]),
        Placement::Left.name(),
        fmt_num(worst[1]),
        if validated.is_empty() {
            "none".to_string()
        } else {
            validated.join(", ")
        }
    );
    report.detail(
        "spectrum_defect",
        serde_json::json!({ "right": worst[0], "left": worst[1], "validated": validated }),
    );
    report.push(
        Check::below(
            "spectrum preservation, best placement",
            best,
            SPECTRUM_TOL.max(tol.eq_tol),
        )
        .with_note(note),
    );
}

fn jordan_checks(report: &mut Report, h: &HopfAlgebra, samples: usize, tol: &ToleranceConfig) {
    let a = h.algebra();
    let state = match TracialState::haar(h, tol) {
        Ok(s) => s,
        Err(e) => {
            report.push(Check::failed("Jordan decomposition", e.to_string()));
            return;
        }
    };
    let basis: Vec<Element> = (0..a.dim()).map(|k| a.basis_element(k)).collect();
    let unit = a.unit();
    let mut rng = stream(report.seed, 5);
    let (mut floor, mut orth, mut recon) = (0.0f64, 0.0f64, 0.0f64);
    let mut errors = 0;
    for _ in 0..samples {
        let f = match Functional::new(state.clone(), rng.sa_invertible(a)) {
            Ok(f) => f,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        let Ok(d) = jordan_decompose(&f, tol) else {
            errors += 1;
            continue;
        };
        for part in [&d.positive, &d.negative] {
            let lowest = part
                .density()
                .spectrum(tol)
                .map_or(f64::INFINITY, |s| -s[0]);
            floor = floor.max(lowest);
        }
        let q = &unit - &d.projection;
        for x in &basis {
            orth = orth.max(d.positive.eval(&(&q * x)).norm());
            orth = orth.max(d.negative.eval(&(&d.projection * x)).norm());
            recon = recon.max((d.positive.eval(x) - d.negative.eval(x) - f.eval(x)).norm());
        }
    }
    report.push(Check::count(
        "Jordan decomposition errors",
        errors,
        Relation::Equal,
        0,
    ));
    report.push(Check::below(
        "Jordan parts: negated lowest eigenvalue",
        floor,
        tol.psd_tol,
    ));
    report.push(Check::below(
        "Jordan parts: orthogonality",
        orth,
        tol.eq_tol,
    ));
    report.push(Check::below(
        "Jordan parts: reconstruction f = f₁ − f₂",
        recon,
        tol.eq_tol,
    ));
}

fn unitary_checks(
    report: &mut Report,
    h: &HopfAlgebra,
    dual: &DualHopfAlgebra,
    tol: &ToleranceConfig,
) {
    let n = h.dim();
    if n > MAX_UNITARY_DIM {
        let why = format!("dimension {n} above {MAX_UNITARY_DIM}");
        report.push(Check::skipped(
            "multiplicative unitary: pentagon and legs",
            why.clone(),
        ));
        report.push(Check::skipped("fixed and cofixed vectors", why));
        return;
    }
    let mu = match GnsSpace::build(h).and_then(|gns| MultiplicativeUnitary::build(&gns, dual, tol))
    {
        Ok(mu) => mu,
        Err(e) => {
            report.push(Check::failed("multiplicative unitary", e.to_string()));
            return;
        }
    };
    let cert = mu.certificate();
    report.push(Check::below(
        "V unitarity ‖V*V − 1‖",
        cert.unitarity,
        tol.eq_tol,
    ));
    report.push(Check::below(
        "pentagon ‖V₁₂V₁₃V₂₃ − V₂₃V₁₂‖",
        cert.pentagon,
        tol.eq_tol,
    ));
    report.push(Check::below(
        "leg distances to S and Ŝ",
        cert.leg_s_distance.max(cert.leg_shat_distance),
        tol.eq_tol,
    ));
    report.push(Check::count(
        "leg dimensions",
        cert.leg_s_dim.min(cert.leg_shat_dim),
        Relation::Equal,
        n,
    ));
    report.push(Check::below(
        "Ŝ anti-representation",
        cert.anti_representation,
        tol.eq_tol,
    ));
    let fs = mu.fixed_and_cofixed(tol);
    report.push(Check::count(
        "fixed vectors",
        fs.fixed.ncols(),
        Relation::AtLeast,
        1,
    ));
    report.push(Check::count(
        "cofixed vectors",
        fs.cofixed.ncols(),
        Relation::AtLeast,
        1,
    ));
    report.push(Check::below(
        "fixed/cofixed eigenvector residual",
        fs.fixed_eigen_residual.max(fs.cofixed_eigen_residual),
        tol.eq_tol,
    ));
    report.detail("multiplicative_unitary", cert);
}

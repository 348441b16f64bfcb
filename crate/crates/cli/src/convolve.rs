use std::path::Path;

use anyhow::{Context, Result};
use fqg_core::dual::DualHopfAlgebra;
use fqg_core::hopf::HopfAlgebra;
use fqg_core::{Element, ElementJson, ToleranceConfig};

use crate::report::{element_lines, fmt_complex, Check, Report};

/// Parse an element given inline as a JSON list of blocks, or as a path to such a file.
pub fn parse_element(arg: &str, h: &HopfAlgebra) -> Result<Element> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading element {arg}"))?
    };
    let raw: ElementJson =
        serde_json::from_str(&text).context("element is not a JSON list of blocks")?;
    Ok(raw.into_element(h.algebra())?)
}

pub fn run(
    report: &mut Report,
    h: &HopfAlgebra,
    a: &Element,
    b: &Element,
    tol: &ToleranceConfig,
) -> Result<()> {
    let dual = DualHopfAlgebra::build(h, tol)?;
    let conv = dual.convolve(a, b);
    let (fa, fb) = (dual.fourier(a), dual.fourier(b));
    let (ta, tb) = (h.haar_of(a), h.haar_of(b));

    report.section("a ⋄ b", element_lines(&conv));
    report.section("F(a)", element_lines(&fa));
    report.section("F(b)", element_lines(&fb));
    report.section(
        "Haar state",
        vec![
            format!("τ(a) = {}", fmt_complex(ta)),
            format!("τ(b) = {}", fmt_complex(tb)),
        ],
    );
    report.detail("convolution", ElementJson::from(&conv));
    report.detail("fourier_a", ElementJson::from(&fa));
    report.detail("fourier_b", ElementJson::from(&fb));
    report.detail("tau_a", [ta.re, ta.im]);
    report.detail("tau_b", [tb.re, tb.im]);

    let product = &fa * &fb;
    let scale = product.frob().max(1.0);
    report.push(Check::below(
        "F(a⋄b) = F(a)F(b)",
        (&dual.fourier(&conv) - &product).frob() / scale,
        tol.eq_tol,
    ));
    let unit = h.algebra().unit();
    if b.rel_diff(&unit) < tol.eq_tol {
        let expected = unit.scale(ta);
        report.push(
            Check::below(
                "unit law a⋄1 = τ(a)1",
                (&conv - &expected).frob() / a.frob().max(1.0),
                tol.eq_tol,
            )
            .with_note(format!("τ(a) = {}", fmt_complex(ta))),
        );
    }
    Ok(())
}

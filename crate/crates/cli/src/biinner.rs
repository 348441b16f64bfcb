use fqg_core::biinner::{brute_force_biinner_consistency, BiInnerContext, SampleFamily};
use fqg_core::hopf::HopfAlgebra;
use fqg_core::ToleranceConfig;

use crate::report::{fmt_num, Check, Relation, Report};
use crate::verify::MAX_UNITARY_DIM;

/// Per-verdict residual lines printed in the text report; JSON carries all of them.
const LISTED_VERDICTS: usize = 10;

pub fn run(
    report: &mut Report,
    h: &HopfAlgebra,
    families: &[SampleFamily],
    samples: usize,
    tol: &ToleranceConfig,
) {
    if h.dim() > MAX_UNITARY_DIM {
        report.push(Check::skipped(
            "bi-inner classification",
            format!("dimension {} above {MAX_UNITARY_DIM}", h.dim()),
        ));
        return;
    }
    let ctx = match BiInnerContext::build(h, tol) {
        Ok(c) => c,
        Err(e) => {
            report.push(Check::failed("bi-inner context", e.to_string()));
            return;
        }
    };
    let model = &ctx.model;
    report.detail("lie_dim", model.lie_dim());
    report.detail("cocentre_dim", model.cocentre().len());
    report.push(Check::below(
        "Lie algebra bracket closure",
        model.closure_residual(),
        tol.eq_tol,
    ));
    report.section(
        "group model",
        vec![
            format!("dim 𝔤 = {}", model.lie_dim()),
            format!("co-centre dimension = {}", model.cocentre().len()),
        ],
    );

    let mut runs = Vec::new();
    for &family in families {
        let r = match brute_force_biinner_consistency(&ctx, family, samples, report.seed, tol) {
            Ok(r) => r,
            Err(e) => {
                report.push(Check::failed(
                    format!("{} sampling", family.name()),
                    e.to_string(),
                ));
                continue;
            }
        };
        let name = family.name();
        let [[both, def_only], [member_only, neither]] = r.confusion;
        let mut lines = vec![
            "                       identity component   not in it".to_string(),
            format!("  bi-inner             {both:>18}   {def_only:>9}"),
            format!("  not bi-inner         {member_only:>18}   {neither:>9}"),
            format!(
                "bi-inner verdicts: {}; bi-inner group {}",
                r.biinner,
                if r.only_identity {
                    "trivial: no sample gave a bi-inner map other than the identity"
                } else {
                    "non-trivial"
                }
            ),
        ];
        let verdicts: Vec<_> = r.outcomes.iter().filter(|o| o.definitional).collect();
        for o in verdicts.iter().take(LISTED_VERDICTS) {
            lines.push(format!(
                "sample {:>4}: commutation {}, path {}{}",
                o.index,
                fmt_num(o.commutation_residual.unwrap_or(f64::NAN)),
                fmt_num(o.max_path_residual.unwrap_or(f64::NAN)),
                if o.trivial { ", identity" } else { "" }
            ));
        }
        if verdicts.len() > LISTED_VERDICTS {
            lines.push(format!(
                "... {} more in the JSON report",
                verdicts.len() - LISTED_VERDICTS
            ));
        }
        report.section(format!("{name} samples ({samples})"), lines);

        let off_diagonal = def_only + member_only;
        let mut check = Check::count(
            format!("{name}: disagreements"),
            off_diagonal,
            Relation::Equal,
            0,
        );
        if off_diagonal > 0 {
            let idx: Vec<String> = r.disagreements.iter().map(|i| i.to_string()).collect();
            check = check.with_note(format!("samples {}", idx.join(", ")));
        }
        report.push(check);
        report.push(Check::below(
            format!("{name}: commutation residual of verdicts"),
            r.max_commutation_residual,
            tol.eq_tol,
        ));
        report.push(Check::below(
            format!("{name}: path residual of verdicts"),
            r.max_path_residual,
            tol.eq_tol,
        ));
        runs.push(r);
    }
    report.detail(
        "biinner_group_trivial",
        runs.iter().all(|r| r.only_identity),
    );
    report.detail("runs", &runs);
}

//! Drivers that run the structure theorems for generalized Narita ideals and
//! the supporting identities on fixtures, producing [`VerificationReport`]s.

use num_traits::{Signed, Zero};
use serde_json::json;

use super::fixtures::{is_mcm, Fixture, FixtureModule};
use super::report::*;
use crate::error::Result;
use crate::filtration::{
    check_rr_properties, dim1_identities, dim2_identities, e_d_sign_check, find_superficial,
    is_generalized_narita, minimal_multiplicity, ratliff_rush, vv_power_search, Filtration,
    RatliffRush,
};
use crate::module::GradedSubmodule;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Largest power `n` tried in the Valabrega-Valla search over `I^n`.
    pub max_power: usize,
    pub window: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            max_power: 4,
            window: crate::filtration::DEFAULT_WINDOW,
        }
    }
}

fn attempt<T>(report: &mut VerificationReport, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            report.errored(name, &e);
            None
        }
    }
}

fn adic(
    ideal: &GradedSubmodule,
    module: &FixtureModule,
    opts: &VerifyOptions,
) -> Result<Filtration> {
    Ok(Filtration::adic(ideal, &module.presentation)?.with_window(opts.window))
}

/// Checks the module is MCM and the ideal is generalized Narita on the ring;
/// returns false (with hypotheses recorded) if either fails.
fn narita_mcm_hypotheses(
    report: &mut VerificationReport,
    fixture: &Fixture,
    ideal: &GradedSubmodule,
    module: &FixtureModule,
    opts: &VerifyOptions,
) -> Result<bool> {
    let d = fixture.dim();
    if d < 2 {
        report.hypothesis("dimension at least 2", false, json!(num(d)));
        return Ok(false);
    }
    let (narita, hd) = is_generalized_narita(ideal)?;
    report.witness("ring", hilbert_json(&hd));
    report.hypothesis("e_2 = ... = e_d = 0 on the ring", narita, big_vec(&hd.e));
    let mcm = is_mcm(&module.presentation, opts.seed)?;
    report.hypothesis(
        "module is maximal Cohen-Macaulay (regular superficial sequence for m)",
        mcm,
        json!(module.name),
    );
    Ok(narita && mcm)
}

/// The structure theorem for MCM modules over generalized Narita ideals:
/// vanishing `e_2..e_d` on `M`, minimal multiplicity of the Ratliff-Rush
/// filtration on `M`, and a power of `I` whose associated graded module is
/// certified Cohen-Macaulay.
pub fn verify_mcm_narita(
    fixture: &Fixture,
    ideal_name: Option<&str>,
    module_name: &str,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let ideal = fixture.get_ideal(ideal_name)?;
    let module = fixture.get_module(module_name)?;
    let mut report =
        VerificationReport::new("mcm-over-generalized-narita", &fixture.name, module_name);
    if !narita_mcm_hypotheses(&mut report, fixture, ideal, module, opts)? {
        return Ok(report);
    }
    let d = fixture.dim();
    let f = adic(ideal, module, opts)?;
    if let Some(hd) = attempt(&mut report, "e_i(M) = 0 for 2 <= i <= d", f.hilbert_data()) {
        report.witness("module", hilbert_json(hd));
        let zero = (2..=d).all(|i| hd.e(i).is_zero());
        report.conclusion("e_i(M) = 0 for 2 <= i <= d", zero, big_vec(&hd.e[..=d]));
    }
    let mm = minimal_multiplicity(&f, opts.seed);
    if let Some((ok, hd)) = attempt(
        &mut report,
        "Ratliff-Rush filtration has minimal multiplicity",
        mm,
    ) {
        report.witness("ratliff_rush", hilbert_json(&hd));
        report.conclusion(
            "Ratliff-Rush filtration has minimal multiplicity",
            ok,
            json!({"h": big_vec(&hd.h)}),
        );
    }
    let search = vv_power_search(
        ideal,
        &module.presentation.whole(),
        d,
        opts.max_power,
        opts.seed,
    );
    if let Some(found) = attempt(&mut report, "G_{I^n}(M) Cohen-Macaulay for some n", search) {
        let detail = match &found {
            Some(p) => vv_power_json(p),
            None => json!({"searched_through": num(opts.max_power)}),
        };
        if found.is_none() {
            report.exhausted = Some(format!("powers 1..={}", opts.max_power));
            report.conclusions.push(Check {
                name: "G_{I^n}(M) Cohen-Macaulay for some n".into(),
                verdict: Verdict::Inconclusive,
                detail,
            });
        } else {
            report.conclusion("G_{I^n}(M) Cohen-Macaulay for some n", true, detail);
        }
    }
    Ok(report)
}

fn end_h0_value(rr: &RatliffRush) -> i64 {
    rr.end_h0().map_or(-1, |e| e as i64)
}

/// Transfer of the Narita property to MCM modules: `e_i(M) = 0` for
/// `2 <= i <= d` and `end H^0(M) <= end H^0(A)`, where end H^0 is read off the
/// last level at which the Ratliff-Rush filtration differs (`-1` if never).
pub fn verify_narita_transfer(
    fixture: &Fixture,
    ideal_name: Option<&str>,
    module_name: &str,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let ideal = fixture.get_ideal(ideal_name)?;
    let module = fixture.get_module(module_name)?;
    let mut report = VerificationReport::new("narita-transfer", &fixture.name, module_name);
    if !narita_mcm_hypotheses(&mut report, fixture, ideal, module, opts)? {
        return Ok(report);
    }
    let d = fixture.dim();
    let f = adic(ideal, module, opts)?;
    if let Some(hd) = attempt(&mut report, "e_i(M) = 0 for 2 <= i <= d", f.hilbert_data()) {
        let zero = (2..=d).all(|i| hd.e(i).is_zero());
        report.conclusion("e_i(M) = 0 for 2 <= i <= d", zero, big_vec(&hd.e[..=d]));
    }
    let ring = fixture.get_module("A")?;
    let fa = adic(ideal, ring, opts)?;
    let ra = attempt(
        &mut report,
        "end H^0(M) <= end H^0(A)",
        ratliff_rush(&fa, opts.seed),
    );
    let rm = attempt(
        &mut report,
        "end H^0(M) <= end H^0(A)",
        ratliff_rush(&f, opts.seed),
    );
    if let (Some(ra), Some(rm)) = (ra, rm) {
        let (a, m) = (end_h0_value(&ra), end_h0_value(&rm));
        report.witness("rr_ring", rr_json(&ra));
        report.witness("rr_module", rr_json(&rm));
        report.conclusion(
            "end H^0(M) <= end H^0(A)",
            m <= a,
            json!({"module": num(m), "ring": num(a)}),
        );
    }
    Ok(report)
}

/// The sign of `e_d` when `e_2 = ... = e_{d-1} = 0`: `(-1)^d e_d(M) >= 0`, and
/// when `e_d = 0` some `G_{I^n}(M)` is certified Cohen-Macaulay. When
/// `e_d != 0` the depth dichotomy is reported without a depth claim.
pub fn verify_sign(
    fixture: &Fixture,
    ideal_name: Option<&str>,
    module_name: &str,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let ideal = fixture.get_ideal(ideal_name)?;
    let module = fixture.get_module(module_name)?;
    let mut report = VerificationReport::new("sign-of-e_d", &fixture.name, module_name);
    let d = fixture.dim();
    report.hypothesis("d >= 3", d >= 3, json!(num(d)));
    if d < 3 {
        return Ok(report);
    }
    let fa = adic(ideal, fixture.get_module("A")?, opts)?;
    let ha = fa.hilbert_data()?;
    let vanish = (2..d).all(|i| ha.e(i).is_zero());
    report.hypothesis(
        "e_2 = ... = e_{d-1} = 0 on the ring",
        vanish,
        big_vec(&ha.e[..=d]),
    );
    let mcm = is_mcm(&module.presentation, opts.seed)?;
    report.hypothesis("module is maximal Cohen-Macaulay", mcm, json!(module.name));
    if !vanish || !mcm {
        return Ok(report);
    }
    let f = adic(ideal, module, opts)?;
    let Some(sv) = attempt(
        &mut report,
        "(-1)^d e_d(M) >= 0",
        e_d_sign_check(&f, opts.max_power, opts.seed),
    ) else {
        return Ok(report);
    };
    report.witness("sign", sign_json(&sv));
    report.conclusion(
        "(-1)^d e_d(M) >= 0",
        sv.nonnegative,
        json!(num(&sv.signed_e_d)),
    );
    let e_d = &sv.e[d];
    if !sv.hypothesis {
        report.skipped("e_d = 0 branch", "e_2..e_{d-1} do not vanish on the module");
    } else if e_d.is_zero() {
        match &sv.vv_power {
            Some(p) => report.conclusion(
                "e_d = 0: G_{I^n}(M) Cohen-Macaulay for some n",
                true,
                vv_power_json(p),
            ),
            None => {
                report.exhausted = Some(format!("powers 1..={}", opts.max_power));
                report.conclusions.push(Check {
                    name: "e_d = 0: G_{I^n}(M) Cohen-Macaulay for some n".into(),
                    verdict: Verdict::Inconclusive,
                    detail: json!({"searched_through": num(opts.max_power)}),
                });
            }
        }
    } else {
        report.skipped(
            "e_d = 0 branch",
            &format!(
                "e_d = {e_d} is {}; depth of G_{{I^n}}(M) is not computed",
                if e_d.is_negative() {
                    "negative"
                } else {
                    "positive"
                }
            ),
        );
    }
    Ok(report)
}

/// The identity suite on every (ideal, module) pair of the fixture: the
/// Ratliff-Rush properties, the dimension one and two length identities on
/// the filtration and on its quotients by superficial elements, and
/// preservation of `e_0..e_{r-1}` under those quotients, `r = dim M`.
pub fn verify_identity_suite(
    fixture: &Fixture,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("identity-suite", &fixture.name, "*");
    for (iname, ideal) in &fixture.ideals {
        for module in &fixture.modules {
            let tag = format!("{iname} on {}", module.name);
            let f = adic(ideal, module, opts)?;
            rr_suite(&mut report, &tag, &f, opts);
            let mut current = f;
            let mut label = tag.clone();
            loop {
                let r = current.dim();
                match r {
                    1 => dim1_check(&mut report, &label, &current, opts),
                    2 => dim2_check(&mut report, &label, &current, opts),
                    _ => {}
                }
                if r <= 1 {
                    break;
                }
                let name = format!("quotient preserves e_0..e_{} [{label}]", r - 1);
                let Some(x) = attempt(&mut report, &name, find_superficial(&current, opts.seed))
                else {
                    break;
                };
                if !x.regular {
                    report.skipped(&name, "superficial element is a zero divisor");
                    break;
                }
                let Some(q) = attempt(&mut report, &name, current.quotient(&x.element)) else {
                    break;
                };
                let pair = current
                    .hilbert_data()
                    .and_then(|a| Ok((a.clone(), q.hilbert_data()?.clone())));
                let Some((a, b)) = attempt(&mut report, &name, pair) else {
                    break;
                };
                let same = (0..r).all(|i| a.e(i) == b.e(i));
                report.conclusion(
                    &name,
                    same,
                    json!({"before": big_vec(&a.e), "after": big_vec(&b.e)}),
                );
                label = format!("{label} / {}", x.element_text);
                current = q;
            }
        }
    }
    Ok(report)
}

fn rr_suite(report: &mut VerificationReport, tag: &str, f: &Filtration, opts: &VerifyOptions) {
    let name = format!("Ratliff-Rush properties [{tag}]");
    if f.dim() == 0 {
        report.skipped(&name, "zero-dimensional module");
        return;
    }
    let Some(rr) = attempt(report, &name, ratliff_rush(f, opts.seed)) else {
        return;
    };
    if let Some(p) = attempt(report, &name, check_rr_properties(f, &rr, opts.seed)) {
        report.conclusion(&name, p.all(), rr_properties_json(&p));
    }
}

fn dim1_check(report: &mut VerificationReport, label: &str, f: &Filtration, opts: &VerifyOptions) {
    let name = format!("dimension-one identities [{label}]");
    let Some(x) = attempt(report, &name, find_superficial(f, opts.seed)) else {
        return;
    };
    if let Some(id) = attempt(report, &name, dim1_identities(f, &x)) {
        report.conclusion(&name, id.holds(), dim1_json(&id));
    }
}

fn dim2_check(report: &mut VerificationReport, label: &str, f: &Filtration, opts: &VerifyOptions) {
    let name = format!("dimension-two identities [{label}]");
    if let Some(id) = attempt(report, &name, dim2_identities(f, opts.seed)) {
        match (id.holds(), &id.skipped) {
            (Some(ok), _) => report.conclusion(&name, ok, dim2_json(&id)),
            (None, Some(why)) => report.skipped(&name, why),
            (None, None) => unreachable!("holds() is None only when skipped"),
        }
    }
}

/// All applicable drivers for one fixture, in a fixed order.
pub fn verify_fixture(fixture: &Fixture, opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = vec![verify_identity_suite(fixture, opts)?];
    let d = fixture.dim();
    if d < 2 {
        return Ok(out);
    }
    for (iname, ideal) in &fixture.ideals {
        let (narita, _) = is_generalized_narita(ideal)?;
        for module in &fixture.modules {
            if narita {
                out.push(verify_mcm_narita(fixture, Some(iname), &module.name, opts)?);
                out.push(verify_narita_transfer(
                    fixture,
                    Some(iname),
                    &module.name,
                    opts,
                )?);
            }
            if d >= 3 {
                out.push(verify_sign(fixture, Some(iname), &module.name, opts)?);
            }
        }
    }
    Ok(out)
}

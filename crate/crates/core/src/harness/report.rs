//! Verification reports and their JSON form. Every number is written as a
//! string so that nothing passes through floating point.

use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::filtration::{
    Dim1Identities, Dim2Identities, HilbertData, RatliffRush, ReductionCertificate, RrProperties,
    SignVerdict, SuperficialCertificate, VvPower, VvReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    /// A checked conclusion is false; the report carries the witness.
    Fail,
    /// A working bound or candidate search ran out.
    Inconclusive,
    /// The theorem's hypotheses do not hold, so nothing was concluded.
    HypothesisNotMet,
    /// A gate was not met; the check was not run and counts neither way.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::Skipped => "skipped",
        }
    }

    /// Process exit code: 0 pass, 1 verified failure, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Skipped => 0,
            Verdict::Fail | Verdict::HypothesisNotMet => 1,
            Verdict::Inconclusive => 2,
        }
    }

    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One named hypothesis or conclusion.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub tag: String,
    pub fixture: String,
    pub module: String,
    pub hypotheses: Vec<Check>,
    pub conclusions: Vec<Check>,
    pub witnesses: Map<String, Value>,
    /// Set for inconclusive runs: the bound that ran out.
    pub exhausted: Option<String>,
}

impl VerificationReport {
    pub fn new(tag: &str, fixture: &str, module: &str) -> Self {
        VerificationReport {
            tag: tag.into(),
            fixture: fixture.into(),
            module: module.into(),
            hypotheses: Vec::new(),
            conclusions: Vec::new(),
            witnesses: Map::new(),
            exhausted: None,
        }
    }

    pub fn hypothesis(&mut self, name: &str, ok: bool, detail: Value) {
        self.hypotheses.push(Check {
            name: name.into(),
            verdict: Verdict::of(ok),
            detail,
        });
    }

    pub fn conclusion(&mut self, name: &str, ok: bool, detail: Value) {
        self.conclusions.push(Check {
            name: name.into(),
            verdict: Verdict::of(ok),
            detail,
        });
    }

    pub fn skipped(&mut self, name: &str, why: &str) {
        self.conclusions.push(Check {
            name: name.into(),
            verdict: Verdict::Skipped,
            detail: json!(why),
        });
    }

    /// Records a conclusion that could not be decided.
    pub fn undecided(&mut self, name: &str, err: &Error) {
        self.conclusions.push(Check {
            name: name.into(),
            verdict: Verdict::Inconclusive,
            detail: json!(err.to_string()),
        });
        self.exhausted.get_or_insert_with(|| err.to_string());
    }

    /// Records a conclusion whose computation raised `err`: inconclusive for
    /// truncation, failure otherwise.
    pub fn errored(&mut self, name: &str, err: &Error) {
        if err.is_inconclusive() {
            self.undecided(name, err);
        } else {
            self.conclusions.push(Check {
                name: name.into(),
                verdict: Verdict::Fail,
                detail: json!(err.to_string()),
            });
        }
    }

    pub fn witness(&mut self, key: &str, value: Value) {
        self.witnesses.insert(key.into(), value);
    }

    pub fn verdict(&self) -> Verdict {
        if self.hypotheses.iter().any(|c| c.verdict != Verdict::Pass) {
            return Verdict::HypothesisNotMet;
        }
        self.conclusions
            .iter()
            .map(|c| c.verdict)
            .filter(|v| !matches!(v, Verdict::Pass | Verdict::Skipped))
            .min()
            .unwrap_or(Verdict::Pass)
    }

    /// Names of the checks that did not pass.
    pub fn failures(&self) -> Vec<String> {
        self.hypotheses
            .iter()
            .chain(&self.conclusions)
            .filter(|c| !matches!(c.verdict, Verdict::Pass | Verdict::Skipped))
            .map(|c| format!("{}: {} ({})", c.name, c.verdict, c.detail))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let checks = |cs: &[Check]| -> Value {
            cs.iter()
                .map(|c| json!({"name": c.name, "verdict": c.verdict.as_str(), "detail": c.detail}))
                .collect()
        };
        let mut v = json!({
            "theorem": self.tag,
            "fixture": self.fixture,
            "module": self.module,
            "verdict": self.verdict().as_str(),
            "hypotheses": checks(&self.hypotheses),
            "conclusions": checks(&self.conclusions),
            "witnesses": Value::Object(self.witnesses.clone()),
        });
        if let Some(e) = &self.exhausted {
            v["exhausted_bound"] = json!(e);
        }
        v
    }
}

pub fn num(n: impl ToString) -> Value {
    Value::String(n.to_string())
}

pub fn nums<T: std::fmt::Display>(v: &[T]) -> Value {
    v.iter().map(num).collect()
}

pub fn big_vec(v: &[BigInt]) -> Value {
    nums(v)
}

pub fn hilbert_json(hd: &HilbertData) -> Value {
    let mut v = json!({
        "dim": num(hd.dim),
        "hilbert_function": nums(&hd.hilbert),
        "h": big_vec(&hd.h),
        "e": big_vec(&hd.e[..=hd.dim.min(hd.e.len() - 1)]),
        "zero_tail": num(hd.zero_tail),
    });
    if hd.e.len() > hd.dim + 1 {
        v["e_extended"] = big_vec(&hd.e[hd.dim + 1..]);
    }
    if let Some(l) = hd.e0_cross_check {
        v["e0_cross_check"] = num(l);
    }
    v
}

pub fn superficial_json(c: &SuperficialCertificate) -> Value {
    json!({
        "element": c.element_text,
        "degree": num(c.degree),
        "coefficients": nums(&c.coefficients),
        "c": num(c.c),
        "window": [num(c.window.0), num(c.window.1)],
        "strong_from": c.strong_from.map(num),
        "regular": c.regular,
        "seed": num(c.seed),
        "attempts": num(c.attempts),
    })
}

pub fn reduction_json(r: &ReductionCertificate) -> Value {
    json!({
        "j": r.generators,
        "reduction_number": num(r.r),
        "verified_through": num(r.verified_through),
        "failures_below_r": nums(&r.failures),
        "regular_sequence": r.regular_sequence,
        "propagation": r.propagation,
        "superficial_sequence": r.sequence.iter().map(superficial_json).collect::<Value>(),
    })
}

pub fn vv_json(v: &VvReport) -> Value {
    json!({
        "holds": v.holds,
        "checked": nums(&v.checked),
        "implied_from": num(v.implied_from),
        "failure": v.failure.map(num),
        "cohen_macaulay": v.cohen_macaulay,
    })
}

pub fn vv_power_json(p: &VvPower) -> Value {
    json!({
        "power": num(p.power),
        "reduction": reduction_json(&p.reduction),
        "vv": vv_json(&p.vv),
    })
}

pub fn rr_json(rr: &RatliffRush) -> Value {
    let table: Value = rr
        .differences
        .iter()
        .enumerate()
        .map(|(n, l)| json!({"n": num(n), "length": num(l)}))
        .collect();
    json!({
        "superficial": superficial_json(&rr.superficial),
        "agrees_from": num(rr.agrees_from),
        "stabilizing_r": nums(&rr.stabilizing_r),
        "differences": table,
        "end_h0": rr.end_h0().map(num),
        "c_bound": rr.c_bound().map(num),
        "coincides": rr.coincides(),
    })
}

pub fn rr_properties_json(p: &RrProperties) -> Value {
    json!({
        "eventually_equal": p.eventually_equal,
        "is_filtration": p.is_filtration,
        "same_coefficients": p.same_coefficients,
        "superficial_colon": p.superficial_colon,
        "idempotent": p.idempotent,
        "checked_through": num(p.checked_through),
    })
}

fn pair(p: &(BigInt, BigInt)) -> Value {
    json!({"coefficient": num(&p.0), "sum": num(&p.1)})
}

pub fn dim1_json(d: &Dim1Identities) -> Value {
    json!({
        "rho": nums(&d.rho),
        "hilbert_pairs": d.hilbert_pairs.iter().map(|(a, b)| json!([num(a), num(b)])).collect::<Value>(),
        "h": big_vec(&d.h),
        "h_from_rho": big_vec(&d.h_from_rho),
        "e1": pair(&d.e1),
        "e2": pair(&d.e2),
        "holds": d.holds(),
    })
}

pub fn dim2_json(d: &Dim2Identities) -> Value {
    match &d.skipped {
        Some(why) => json!({"skipped": why}),
        None => json!({
            "sequence": d.sequence.iter().map(|c| c.element_text.clone()).collect::<Vec<_>>(),
            "lengths": nums(&d.lengths),
            "e1": pair(&d.e1),
            "e2": pair(&d.e2),
            "holds": d.holds(),
        }),
    }
}

pub fn sign_json(s: &SignVerdict) -> Value {
    json!({
        "d": num(s.d),
        "e": big_vec(&s.e),
        "hypothesis": s.hypothesis,
        "signed_e_d": num(&s.signed_e_d),
        "nonnegative": s.nonnegative,
        "vv_power": s.vv_power.as_ref().map(vv_power_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_precedence() {
        let mut r = VerificationReport::new("t", "f", "A");
        assert_eq!(r.verdict(), Verdict::Pass);
        r.undecided("a", &Error::bound("x", 3, "y"));
        assert_eq!(r.verdict(), Verdict::Inconclusive);
        r.conclusion("b", false, json!(null));
        assert_eq!(r.verdict(), Verdict::Fail);
        r.hypothesis("h", false, json!(null));
        assert_eq!(r.verdict(), Verdict::HypothesisNotMet);
        assert_eq!(r.to_json()["verdict"], "hypothesis-not-met");
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use narita_core::filtration::{is_generalized_narita, ratliff_rush, reduction_number, Filtration};
use narita_core::harness::{
    self, monomial_oracle_length, oracle, Check, Verdict, VerificationReport, VerifyOptions,
};
use narita_core::module::GradedSubmodule;
use narita_core::ring::{Monomial, Polynomial, RingDescriptor};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: narita_core::error::Error) -> String {
    e.to_string()
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t <= limit, || {
        format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs())
    })?;
    Ok(format!("{:.1}s", t.as_secs_f64()))
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn m4_square_reproduction() -> Outcome {
    let start = Instant::now();
    let fx = harness::fixture("m4-square").map_err(err)?;
    let i = fx.get_ideal(Some("I")).map_err(err)?;
    let m = fx.get_ideal(Some("m")).map_err(err)?;
    let f = Filtration::adic(i, &fx.modules[0].presentation).map_err(err)?;
    let hd = f.hilbert_data().map_err(err)?;
    ensure(hd.h == big(&[5, 0, 6, -4, 1]), || format!("h = {:?}", hd.h))?;
    ensure(hd.e[..=3] == big(&[8, 4, 0, 0])[..], || {
        format!("e = {:?}", hd.e)
    })?;
    let square = i.power(2).map_err(err)?;
    let m4 = m.power(4).map_err(err)?;
    ensure(square.equals(&m4).map_err(err)?, || "I^2 != m^4".into())?;
    let red = reduction_number(&f, 0).map_err(err)?;
    ensure(red.r == 2, || format!("reduction number {}", red.r))?;
    let (narita, _) = is_generalized_narita(i).map_err(err)?;
    ensure(narita, || "not generalized Narita".into())?;
    let rr = ratliff_rush(&f, 0).map_err(err)?;
    ensure(!rr.coincides(), || {
        "Ratliff-Rush filtration coincides".into()
    })?;
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!(
        "h = 5 + 6z^2 - 4z^3 + z^4, e = (8,4,0,0), I^2 = m^4, r = 2, narita, rr differs ({t})"
    ))
}

fn rr_witness() -> Outcome {
    let start = Instant::now();
    let fx = harness::fixture("rr-classic").map_err(err)?;
    let ring = &fx.ring;
    let i = fx.get_ideal(None).map_err(err)?;
    let f = Filtration::adic(i, &fx.modules[0].presentation).map_err(err)?;
    let w = GradedSubmodule::ideal_from_text(ring, &["x^2*y^2"]).map_err(err)?;
    let rr = ratliff_rush(&f, 0).map_err(err)?;
    let f1 = f.term(1).map_err(err)?;
    ensure(
        rr.filtration
            .term(1)
            .map_err(err)?
            .contains(&w)
            .map_err(err)?,
        || "x^2y^2 not in the closure of F_1".into(),
    )?;
    ensure(!f1.contains(&w).map_err(err)?, || {
        "x^2y^2 already in F_1".into()
    })?;
    // one step of the colon chain: (F_2 : I) contains the witness
    let colon = f.colon(&*f.term(2).map_err(err)?, i).map_err(err)?;
    ensure(colon.contains(&w).map_err(err)?, || {
        "x^2y^2 not in (F_2 : I)".into()
    })?;
    let gens = oracle::monomial_generators(&i.polynomial_generators(), ring).map_err(err)?;
    let x2y2 = Monomial::new(vec![2, 2]);
    ensure(!oracle::in_ideal(&x2y2, &gens), || {
        "oracle: x^2y^2 in I".into()
    })?;
    ensure(
        oracle::in_ratliff_rush_closure(&x2y2, &gens, 1, 3, 2),
        || "oracle: x^2y^2 not in the closure of I".into(),
    )?;
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!(
        "x^2y^2 in (I^2 : I) \\ I by colon chain and oracle ({t})"
    ))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let names = ["x", "y", "z"];
    let queries = 240;
    for q in 0..queries {
        let k = rng.gen_range(1..=3usize);
        let ring = RingDescriptor::polynomial(&names[..k]);
        let mut gens: Vec<Monomial> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = rng.gen_range(1..=6);
                Monomial::new(e)
            })
            .collect();
        for _ in 0..rng.gen_range(0..=3) {
            let total = rng.gen_range(1..=10u32);
            let mut e = vec![0; k];
            for _ in 0..total {
                e[rng.gen_range(0..k)] += 1;
            }
            gens.push(Monomial::new(e));
        }
        let polys: Vec<Polynomial> = gens
            .iter()
            .map(|m| Polynomial::monomial(m.clone(), BigRational::from_integer(1.into())))
            .collect();
        let counted = oracle::colength(&gens, k).map_err(err)?;
        let via_ring = monomial_oracle_length(&ring, &polys).map_err(err)?;
        let computed = GradedSubmodule::ideal(&ring, polys)
            .and_then(|s| s.colength())
            .map_err(err)?;
        ensure(counted == computed && counted == via_ring, || {
            format!("query {q}: {gens:?}: oracle {counted}, linear algebra {computed}")
        })?;
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{queries} random monomial ideals in <= 3 variables agree ({t})"
    ))
}

fn trivial_suites() -> Outcome {
    let mut count = 0;
    let params = [
        ("parameters", vec!["m", "p22", "p23", "p33", "q"]),
        ("line", vec!["t3"]),
        ("space", vec!["p222"]),
    ];
    for (fname, ideals) in params {
        let fx = harness::fixture(fname).map_err(err)?;
        for iname in ideals {
            let f = Filtration::adic(
                fx.get_ideal(Some(iname)).map_err(err)?,
                &fx.modules[0].presentation,
            )
            .map_err(err)?;
            let hd = f.hilbert_data().map_err(err)?;
            let h0 = f.hilbert_function(0).map_err(err)?;
            ensure(hd.h == vec![BigInt::from(h0)], || {
                format!("{fname}/{iname}: h = {:?}", hd.h)
            })?;
            ensure((1..=hd.dim).all(|i| hd.e(i).is_zero()), || {
                format!("{fname}/{iname}: e = {:?}", hd.e)
            })?;
            count += 1;
        }
    }
    for fname in ["line", "plane", "space"] {
        let fx = harness::fixture(fname).map_err(err)?;
        let f = Filtration::adic(
            fx.get_ideal(Some("m")).map_err(err)?,
            &fx.modules[0].presentation,
        )
        .map_err(err)?;
        let hd = f.hilbert_data().map_err(err)?;
        ensure(hd.h == big(&[1]), || format!("{fname}/m: h = {:?}", hd.h))?;
        ensure(ratliff_rush(&f, 0).map_err(err)?.coincides(), || {
            format!("{fname}/m: rr differs")
        })?;
        let r = reduction_number(&f, 0).map_err(err)?.r;
        ensure(r == 0, || format!("{fname}/m: reduction number {r}"))?;
        count += 1;
    }
    Ok(format!("{count} parameter and maximal ideals"))
}

fn checks<'a>(
    reports: &'a [VerificationReport],
    tag: &'a str,
    prefix: &'a str,
) -> impl Iterator<Item = (&'a VerificationReport, &'a Check)> + 'a {
    reports
        .iter()
        .filter(move |r| r.tag == tag)
        .flat_map(|r| r.conclusions.iter().map(move |c| (r, c)))
        .filter(move |(_, c)| c.name.starts_with(prefix))
}

fn describe(r: &VerificationReport, c: &Check) -> String {
    format!("{} {}: {} {}", r.fixture, c.name, c.verdict, c.detail)
}

fn rr_properties(reports: &[VerificationReport], fixtures: &[String]) -> Outcome {
    let all: Vec<_> = checks(reports, "identity-suite", "Ratliff-Rush properties").collect();
    if let Some((r, c)) = all.iter().find(|(_, c)| c.verdict != Verdict::Pass) {
        return Err(describe(r, c));
    }
    for f in fixtures {
        ensure(all.iter().any(|(r, _)| &r.fixture == f), || {
            format!("{f}: no Ratliff-Rush check")
        })?;
    }
    Ok(format!(
        "{} filtrations on {} fixtures",
        all.len(),
        fixtures.len()
    ))
}

fn length_identities(reports: &[VerificationReport]) -> Outcome {
    let mut parts = Vec::new();
    for (prefix, what) in [
        ("dimension-one identities", "dim 1"),
        ("dimension-two identities", "dim 2"),
        ("quotient preserves", "quotient"),
    ] {
        let all: Vec<_> = checks(reports, "identity-suite", prefix).collect();
        if let Some((r, c)) = all
            .iter()
            .find(|(_, c)| !matches!(c.verdict, Verdict::Pass | Verdict::Skipped))
        {
            return Err(describe(r, c));
        }
        let pass = all
            .iter()
            .filter(|(_, c)| c.verdict == Verdict::Pass)
            .count();
        let derived = all
            .iter()
            .filter(|(_, c)| c.verdict == Verdict::Pass && c.name.contains(" / "))
            .count();
        let skipped = all.len() - pass;
        if what != "quotient" {
            ensure(pass >= 5 && derived >= 1, || {
                format!("{what}: {pass} passing, {derived} from quotients")
            })?;
        }
        parts.push(format!(
            "{what} {pass} ({derived} from quotients, {skipped} gated)"
        ));
    }
    Ok(parts.join("; "))
}

fn mcm_narita(reports: &[VerificationReport]) -> Outcome {
    let r = reports
        .iter()
        .find(|r| {
            r.tag == "mcm-over-generalized-narita"
                && r.fixture == "hypersurface-3"
                && r.module == "M"
        })
        .ok_or("no report for hypersurface-3 on M")?;
    ensure(r.verdict() == Verdict::Pass, || {
        format!(
            "{}: {}",
            r.verdict(),
            serde_json::to_string(&r.to_json()).unwrap_or_default()
        )
    })?;
    ensure(r.conclusions.len() == 3, || {
        format!("{} conclusions", r.conclusions.len())
    })?;
    let vv = &r.conclusions[2].detail;
    Ok(format!(
        "e_2 = e_3 = 0, minimal multiplicity, Cohen-Macaulay at power {}",
        vv["power"]
    ))
}

fn report_family<'a>(
    reports: &'a [VerificationReport],
    tag: &str,
) -> Result<Vec<&'a VerificationReport>, String> {
    let family: Vec<_> = reports.iter().filter(|r| r.tag == tag).collect();
    if let Some(r) = family
        .iter()
        .find(|r| !matches!(r.verdict(), Verdict::Pass | Verdict::HypothesisNotMet))
    {
        return Err(format!(
            "{} [{}]: {} {:?}",
            r.fixture,
            r.module,
            r.verdict(),
            r.failures()
        ));
    }
    Ok(family
        .into_iter()
        .filter(|r| r.verdict() == Verdict::Pass)
        .collect())
}

fn narita_transfer(reports: &[VerificationReport]) -> Outcome {
    let pass = report_family(reports, "narita-transfer")?;
    ensure(pass.iter().any(|r| r.module != "A"), || {
        "no MCM module beyond the ring".into()
    })?;
    let mut by_pair = std::collections::BTreeMap::new();
    for r in &pass {
        *by_pair
            .entry(format!("{}[{}]", r.fixture, r.module))
            .or_insert(0) += 1;
    }
    let pairs: Vec<String> = by_pair.iter().map(|(k, n)| format!("{k} x{n}")).collect();
    Ok(format!(
        "{} ideal-module pairs: {}",
        pass.len(),
        pairs.join(", ")
    ))
}

fn sign_of_e_d(reports: &[VerificationReport]) -> Outcome {
    let pass = report_family(reports, "sign-of-e_d")?;
    let (mut zero, mut nonzero) = (0, 0);
    for r in &pass {
        let vv = r
            .conclusions
            .iter()
            .any(|c| c.name.starts_with("e_d = 0:") && c.verdict == Verdict::Pass);
        let gated = r.conclusions.iter().any(|c| c.name == "e_d = 0 branch");
        match (vv, gated) {
            (true, _) => zero += 1,
            (false, true) => nonzero += 1,
            _ => {
                return Err(format!(
                    "{} [{}]: e_d = 0 branch not decided",
                    r.fixture, r.module
                ))
            }
        }
    }
    ensure(pass.iter().any(|r| r.fixture == "negative-e3"), || {
        "negative-e3 not covered".into()
    })?;
    ensure(zero >= 1, || "no e_d = 0 instance".into())?;
    Ok(format!(
        "{} instances, {zero} with e_d = 0 certified, {nonzero} with e_d != 0",
        pass.len()
    ))
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = vec![
        ("m4-square-reproduction", m4_square_reproduction()),
        ("ratliff-rush-witness", rr_witness()),
    ];
    let oracle = oracle_equivalence();
    let trivial = trivial_suites();

    let fixtures: Vec<String> = match harness::builtin_fixtures() {
        Ok(v) => v.into_iter().map(|f| f.name).collect(),
        Err(e) => {
            println!("FAIL loading fixtures: {e}");
            std::process::exit(1);
        }
    };
    let opts = VerifyOptions::default();
    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut load_errors = Vec::new();
    std::thread::scope(|s| {
        let handles: Vec<_> = fixtures
            .iter()
            .map(|name| {
                let opts = &opts;
                s.spawn(move || {
                    harness::fixture(name).and_then(|f| harness::verify_fixture(&f, opts))
                })
            })
            .collect();
        let synthetic = s.spawn(|| {
            harness::fixture("negative-e3").and_then(|f| harness::verify_sign(&f, None, "A", &opts))
        });
        for (name, h) in fixtures.iter().zip(handles) {
            match h.join().expect("verification thread") {
                Ok(mut rs) => reports.append(&mut rs),
                Err(e) => load_errors.push(format!("{name}: {e}")),
            }
        }
        match synthetic.join().expect("verification thread") {
            Ok(r) => reports.push(r),
            Err(e) => load_errors.push(format!("negative-e3: {e}")),
        }
    });
    reports.sort_by(|a, b| a.fixture.cmp(&b.fixture));

    let gate = |o: Outcome| {
        if load_errors.is_empty() {
            o
        } else {
            Err(load_errors.join("; "))
        }
    };
    results.push((
        "ratliff-rush-properties",
        gate(rr_properties(&reports, &fixtures)),
    ));
    results.push(("length-identities", gate(length_identities(&reports))));
    results.push(("mcm-over-generalized-narita", gate(mcm_narita(&reports))));
    results.push(("narita-transfer", gate(narita_transfer(&reports))));
    results.push(("sign-of-e_d", gate(sign_of_e_d(&reports))));
    results.push(("oracle-equivalence", oracle));
    results.push(("trivial-suites", trivial));

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

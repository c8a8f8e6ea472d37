//! Acceptance checks, one line per criterion. Criteria listed in `XFAIL`
//! print FAIL with their reason but do not fail the run; any other failure
//! exits nonzero.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::Zero;
use pentalab::condensation::{
    bareiss_det, circulent_to_pentagram, collapse_experiment, dodgson_det, dodgson_det_with_retry, gauge_factors,
    lift_pentagram, rectilinear_polygon, sandwich, sandwich_top_expected, CirculentLabelling, Matrix,
};
use pentalab::dynamics::{alpha1, alpha2, conic_identities, conic_polygon, extract_invariants};
use pentalab::invariants::{eval_E, eval_O, invariant_tuple, mod4_products, swap_tuple};
use pentalab::projective::{omega_invariants, ProjMap};
use pentalab::reconstruct::{
    build_polypoint, default_window, geometric_monodromy, monodromy_lift, omega_from_invariants, predicted_det,
    predicted_trace, verify_incidence_identities, TruncatedTable,
};
use pentalab::report::vanishing_sweep;
use pentalab::sample::{distinct_rationals, generic_coords, nonzero_sequence, rng, Rng};
use pentalab::scalar::{q, random_q, Q};
use pentalab::vanishing::independence_check;
use pentalab::Error;
use rand::Rng as _;

/// Criteria whose statement does not hold as written, with the reason.
const XFAIL: &[(u32, &str)] = &[(
    5,
    "the m-th sandwich layer is (-1)^{(m-1)(i+j)} det M: constant for odd m, a checkerboard of ±det M for even m",
)];

struct Outcome {
    pass: bool,
    /// The failure is exactly the one recorded in `XFAIL`.
    explained: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, explained: false, detail: detail.into() }
}

fn c1() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for n in 3..=8 {
        let mut r = rng(1000 + n as u64);
        for _ in 0..100 {
            let v = generic_coords(&mut r, n, 9).expect("generic coordinates");
            let t = swap_tuple(&invariant_tuple(&v));
            for (j, img) in [(1, alpha1(&v)), (2, alpha2(&v))] {
                match img {
                    Ok(w) if invariant_tuple(&w) == t => {}
                    _ => bad.push((n, j)),
                }
            }
            count += 1;
        }
    }
    outcome(bad.is_empty(), format!("{count} vectors, n = 3..8, both involutions, {} mismatches", bad.len()))
}

fn c2() -> Outcome {
    let (mut ok, mut total) = (0, 0);
    for n in 3..=5 {
        let mut r = rng(2000 + n as u64);
        for _ in 0..25 {
            total += 1;
            let v = generic_coords(&mut r, n, 7).expect("generic coordinates");
            let pass = (|| -> Result<bool, Error> {
                let geo = geometric_monodromy(&v)?;
                let lift = monodromy_lift(&v)?;
                Ok(omega_invariants(&geo) == omega_from_invariants(&v)?
                    && lift.trace() == predicted_trace(&v)
                    && lift.det() == predicted_det(&v))
            })()
            .unwrap_or(false);
            ok += pass as usize;
        }
    }
    outcome(ok == total, format!("{ok}/{total} invariant sets, n = 3..5: Ω from invariants, trace and det formulas"))
}

fn c3() -> Outcome {
    let (mut ok, mut total, mut ids) = (0, 0, 0);
    for n in 3..=6 {
        for seed in 0..25 {
            total += 1;
            let mut r = rng(3000 + 100 * n as u64 + seed);
            let v = generic_coords(&mut r, n, 7).expect("generic coordinates");
            let pass = (|| -> Result<bool, Error> {
                let back = extract_invariants(&build_polypoint(&v)?)?;
                let t = TruncatedTable::periodic(&v, default_window(n))?;
                let rep = verify_incidence_identities(&t, 4, 2)?;
                ids += rep.checks.len();
                Ok(back == v && rep.all_hold())
            })()
            .unwrap_or(false);
            ok += pass as usize;
        }
    }
    outcome(ok == total, format!("{ok}/{total} round trips, n = 3..6, {ids} incidence identities (k ≤ 4, d ≤ 2)"))
}

fn c4() -> Outcome {
    let mut steps = Vec::new();
    let mut notes = Vec::new();
    let mut pass = true;
    for big_n in [6usize, 8, 10] {
        let mut seen = Vec::new();
        for seed in 1..=3 {
            let mut r = rng(4000 + 10 * big_n as u64 + seed);
            match rectilinear_polygon(big_n, &mut r).and_then(|v| collapse_experiment(&v, 2 * big_n + 2)) {
                Ok(rep) => {
                    pass &= rep.degenerate_profile && rep.predicted_step == rep.collapse_step;
                    seen.push(rep.collapse_step);
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("N={big_n}: {e}"));
                }
            }
        }
        let first = seen.first().copied().flatten();
        pass &= first.is_some() && seen.iter().all(|s| *s == first);
        steps.push((big_n as i64, first.map(|s| s as i64)));
    }
    let law = match steps.as_slice() {
        [(n0, Some(s0)), (n1, Some(s1)), (n2, Some(s2))] => {
            let slope = Q::new((s1 - s0).into(), (n1 - n0).into());
            let intercept = q(*s0) - &slope * q(*n0);
            let linear = q(*s2) == &slope * q(*n2) + &intercept;
            pass &= linear && slope == q(2) && intercept == q(-2);
            let sign = if intercept < Q::zero() { "-" } else { "+" };
            let magnitude = if intercept < Q::zero() { -&intercept } else { intercept.clone() };
            format!("step = {slope}·N {sign} {magnitude} (vertex-map count; paired α₁∘α₂ count N - 1)")
        }
        _ => {
            pass = false;
            "no law".into()
        }
    };
    let shown: Vec<String> = steps.iter().map(|(n, s)| format!("N={n}: {}", s.map_or("none".into(), |s| s.to_string()))).collect();
    outcome(pass, format!("{}; {law}; degenerate profile exact{}", shown.join(", "), notes.iter().map(|n| format!("; {n}")).collect::<String>()))
}

fn int_matrix(r: &mut Rng, k: usize) -> Matrix {
    (0..k).map(|_| (0..k).map(|_| q(r.gen_range(-9..=9))).collect()).collect()
}

fn c5() -> Outcome {
    let mut r = rng(5000);
    let (mut agree, mut total, mut retried) = (0, 0, 0);
    for k in 2..=12 {
        for _ in 0..200 {
            total += 1;
            let m = int_matrix(&mut r, k);
            let d = match dodgson_det(&m) {
                Err(Error::SingularInterior { .. }) => {
                    retried += 1;
                    dodgson_det_with_retry(&m, &mut r, 32)
                }
                other => other,
            };
            agree += (d.ok() == bareiss_det(&m).ok()) as usize;
        }
    }
    let (mut odd_ok, mut even_checker, mut predicted) = (true, true, true);
    let mut sizes = Vec::new();
    for m in 1..=8usize {
        let mut tries = 0;
        let top = loop {
            tries += 1;
            let mat: Matrix = (0..m).map(|_| nonzero_sequence(&mut r, m, 9)).collect();
            if bareiss_det(&mat).map_or(true, |d| d.is_zero()) {
                continue;
            }
            match sandwich(&mat) {
                Ok(layers) => {
                    predicted &= sandwich_top_expected(&mat).ok().as_ref() == Some(&layers[m]);
                    break Some(layers[m].is_constant());
                }
                Err(Error::SingularInterior { .. }) if tries < 50 => continue,
                Err(_) => break None,
            }
        };
        let constant = top.unwrap_or(false);
        predicted &= top.is_some();
        if m % 2 == 1 {
            odd_ok &= constant;
        } else {
            even_checker &= !constant;
        }
        sizes.push(format!("{m}:{}", if constant { "const" } else { "checker" }));
    }
    let dodgson_ok = agree == total;
    Outcome {
        pass: dodgson_ok && odd_ok && !even_checker,
        explained: dodgson_ok && odd_ok && even_checker && predicted,
        detail: format!(
            "dodgson = elimination {agree}/{total} (sizes 2..12, {retried} mixed after a zero interior); top layers {}; signed prediction {}",
            sizes.join(" "),
            if predicted { "exact" } else { "violated" }
        ),
    }
}

fn c6() -> Outcome {
    let mut r = rng(6000);
    let (mut ok, mut total) = (0, 0);
    for n in [8, 12, 16] {
        for _ in 0..5 {
            total += 1;
            let c = CirculentLabelling::new(nonzero_sequence(&mut r, 2 * n, 9)).expect("nonzero labels");
            let pass = (|| -> Result<bool, Error> {
                let x = circulent_to_pentagram(&c)?;
                let lifted = lift_pentagram(&x)?;
                Ok(circulent_to_pentagram(&lifted)? == x && gauge_factors(&lifted, &c).is_some())
            })()
            .unwrap_or(false);
            ok += pass as usize;
        }
    }
    let mut rejected = 0;
    let mut tried = 0;
    while tried < 20 {
        let x = generic_coords(&mut r, 8, 9).expect("generic coordinates");
        if mod4_products(&x).expect("even period").iter().all(|f| f == &q(1)) {
            continue;
        }
        tried += 1;
        rejected += matches!(lift_pentagram(&x), Err(Error::NotLiftable { .. })) as usize;
    }
    outcome(
        ok == total && rejected == 20,
        format!("{ok}/{total} lifts round-trip up to gauge (n = 8, 12, 16); {rejected}/20 NotLiftable"),
    )
}

fn c7() -> Outcome {
    match vanishing_sweep(25) {
        Ok(s) => outcome(
            s.passes(),
            format!(
                "{} pairs (n, v), min |λ_v - v| = {:.4}, max path difference {:.1e}, {} sign samples with {} failures, positivity {}",
                s.rows.len(),
                s.min_margin,
                s.max_delta,
                s.sign_samples,
                s.sign_failures,
                s.positivity
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn c8() -> Outcome {
    let mut r = rng(8000);
    let mut parts = Vec::new();
    let mut pass = true;
    for n in 5..=8 {
        match independence_check(n, &mut r, 8) {
            Ok(rep) => {
                pass &= rep.passes();
                parts.push(format!("n={n}: {}/{}", rep.rank, rep.expected));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("n={n}: {e}"));
            }
        }
    }
    outcome(pass, format!("Jacobian rank {}", parts.join(", ")))
}

fn random_map(r: &mut Rng) -> ProjMap {
    loop {
        let m = std::array::from_fn(|_| std::array::from_fn(|_| random_q(r, 5)));
        if let Ok(p) = ProjMap::new(m) {
            return p;
        }
    }
}

fn c9() -> Outcome {
    let mut r = rng(9000);
    let (mut ok, mut done, mut attempts) = (0, 0, 0);
    while done < 10 && attempts < 200 {
        attempts += 1;
        let n = 4 + done % 4;
        let ts = distinct_rationals(&mut r, n, 12);
        let map = random_map(&mut r);
        let Ok(v) = conic_polygon(&ts, Some(&map)).and_then(|p| extract_invariants(&p)) else { continue };
        done += 1;
        let same = eval_O(&v, n).ok() == eval_E(&v, n).ok();
        ok += (conic_identities(&v) == (true, true) && same) as usize;
    }
    outcome(ok == 10 && done == 10, format!("{ok}/{done} inscribed polygons, n = 4..7: both identities and O_n = E_n"))
}

fn c10() -> Outcome {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data/");
    let commands: Vec<Vec<String>> = [
        vec!["collapse", "--N", "6", "--seed", "1"],
        vec!["independence", "--n", "6", "--seed", "2"],
        vec!["vanishing", "--n-max", "25"],
        vec!["condense", &format!("{data}matrix3.json")],
        vec!["reconstruct", &format!("{data}coords5.json")],
        vec!["invariants", &format!("{data}twisted_pentagon.json")],
        vec!["iterate", &format!("{data}conic_hexagon.json"), "--steps", "3"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let dir = std::env::temp_dir().join(format!("pentalab-acceptance-{}", std::process::id()));
    let mut same = 0;
    for (i, c) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.join(format!("{i}-{rep}.json"));
            let svg = dir.join(format!("{i}-{rep}-svg"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_pentalab"));
            cmd.env_remove("PENTALAB_SEED").args(c).arg("--output").arg(&out);
            if c[0] == "iterate" {
                cmd.arg("--svg").arg(&svg);
            }
            let _ = std::fs::create_dir_all(&dir);
            let ok = cmd.status().map(|s| s.success()).unwrap_or(false);
            let mut bytes = std::fs::read(&out).unwrap_or_default();
            if let Ok(entries) = std::fs::read_dir(&svg) {
                let mut files: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
                files.sort();
                for f in files {
                    bytes.extend(std::fs::read(f).unwrap_or_default());
                }
            }
            outputs.push((ok, bytes));
        }
        same += (outputs[0].0 && outputs[1].0 && !outputs[0].1.is_empty() && outputs[0].1 == outputs[1].1) as usize;
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(same == commands.len(), format!("{same}/{} commands byte-identical across two runs", commands.len()))
}

type Criterion = (u32, &'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "invariance", c1, 30),
        (2, "monodromy formula", c2, 60),
        (3, "reconstruction round trip", c3, 60),
        (4, "collapse", c4, 300),
        (5, "condensation", c5, 60),
        (6, "lifting", c6, 10),
        (7, "vanishing sums", c7, 60),
        (8, "independence", c8, 60),
        (9, "conic identities", c9, 10),
        (10, "CLI determinism", c10, 10),
    ];
    let mut unexpected = 0;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let xfail = XFAIL.iter().find(|(i, _)| *i == id);
        let status = if o.pass && !over { "PASS" } else { "FAIL" };
        let mut line = format!("{status} {id:>2} {name}: {} [{:.2} s of {budget} s]", o.detail, took.as_secs_f64());
        if over {
            line.push_str(" over budget");
        }
        match (status, xfail) {
            ("FAIL", Some((_, why))) if o.explained && !over => line.push_str(&format!(" (expected failure: {why})")),
            ("FAIL", _) => unexpected += 1,
            ("PASS", Some(_)) => {
                line.push_str(" (listed as expected failure but passed)");
                unexpected += 1;
            }
            _ => {}
        }
        println!("{line}");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    }
}

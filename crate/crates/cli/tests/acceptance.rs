//! Acceptance criteria 1–10, one status line each.
//!
//! Criterion 5 is known not to hold for the standard conical recursion; it
//! is evaluated in full and reported as FAIL. The test fails if any other
//! criterion fails or if criterion 5 starts passing.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Signed;
use wpvol::checks::{
    boundary_grid, compare_psi_modes, compare_psi_modes_with, compare_reductions, conical_grid, cusp_grid,
    has_positive_pair, random_profiles, WallGap,
};
use wpvol::engine::{v_cusp, v_naive, v_q_printed, Lambda};
use wpvol::hyperelliptic::hyperelliptic_table;
use wpvol::scalars::{int, rat, PolyQ, Rational};
use wpvol::{ConeRule, Engine, EngineConfig, Family, MarkingProfile, PsiMode, Reduction};

const EXPECTED_FAILURES: &[u32] = &[5];

struct Outcome {
    id: u32,
    pass: bool,
    summary: String,
    notes: Vec<String>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn wpvol(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wpvol")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn oracle_grid() -> Vec<MarkingProfile> {
    let mut p = cusp_grid(9);
    p.extend(conical_grid(7));
    p.extend(boundary_grid(7));
    p.extend(random_profiles(100, 9, 2024));
    p
}

fn c1() -> Outcome {
    let (v, t) = timed(|| [3, 4, 5].map(|n| v_cusp(n).unwrap()));
    let pass = v == [int(1), int(1), int(5)] && t < Duration::from_millis(1);
    Outcome {
        id: 1,
        pass,
        summary: format!("V3 = {}, V4 = {}, V5 = {} in {}", v[0], v[1], v[2], ms(t)),
        notes: vec![],
    }
}

fn c2() -> Outcome {
    let p = Engine::default().v_boundary_symbolic(4).unwrap();
    let vars = PolyQ::lambda_vars(4);
    let expect = (0..4).fold(PolyQ::constant(int(1)), |acc, j| acc.add(&PolyQ::variable(&vars, j)));
    Outcome {
        id: 2,
        pass: p == expect,
        summary: format!("V4(L) = {p}"),
        notes: vec![],
    }
}

fn c3() -> Outcome {
    let e = Engine::default();
    let four = e.v_conical(&MarkingProfile::conical(&vec![int(1); 4]).unwrap()).unwrap();
    let bad: Vec<usize> = (3..=12)
        .filter(|&n| e.v_conical(&MarkingProfile::cusps(Family::Conical, n).unwrap()).unwrap() != v_cusp(n).unwrap())
        .collect();
    Outcome {
        id: 3,
        pass: four == int(0) && bad.is_empty(),
        summary: format!("V(1,1,1,1) = {four}; cone-cusp mismatches for 3 <= n <= 12: {bad:?}"),
        notes: vec![],
    }
}

fn c4(grid: &[MarkingProfile]) -> Outcome {
    let (r, t) = timed(|| compare_reductions(grid, PsiMode::AveragedUnordered).unwrap());
    Outcome {
        id: 4,
        pass: r.agree() && t < Duration::from_secs(300),
        summary: format!(
            "reduced vs labeled: {} profiles, {} disagreements in {:.1} s",
            r.checked,
            r.disagreements.len(),
            t.as_secs_f64()
        ),
        notes: vec![],
    }
}

fn c5(grid: &[MarkingProfile]) -> Outcome {
    let r = compare_psi_modes(grid).unwrap();
    let failing: Vec<&str> = r.disagreements.iter().map(|d| d.profile.as_str()).collect();
    let positive = grid.iter().filter(|p| has_positive_pair(p)).count();
    let failing_positive = grid
        .iter()
        .filter(|p| has_positive_pair(p) && failing.contains(&p.to_string().as_str()))
        .count();
    let failing_other = r.disagreements.len() - failing_positive;
    let merged = compare_psi_modes_with(grid, ConeRule::MergedNode).unwrap();
    let mut notes = vec![
        format!(
            "profiles without a pair t_a + t_b > 2: {} checked, {} disagreements",
            grid.len() - positive,
            failing_other
        ),
        format!("profiles with such a pair: {positive} checked, {failing_positive} disagreements"),
    ];
    if let Some(d) = r.disagreements.first() {
        let vals: Vec<String> = d.values.iter().map(|v| format!("{} {}", v.engine, v.value)).collect();
        notes.push(format!("first: {}: {}", d.profile, vals.join(", ")));
    }
    notes.push(format!(
        "merged-node rule on the same grid: {} disagreements",
        merged.disagreements.len()
    ));
    Outcome {
        id: 5,
        pass: r.agree(),
        summary: format!(
            "averaged vs fixed-pair, both reductions: {} profiles, {} disagreements",
            r.checked,
            r.disagreements.len()
        ),
        notes,
    }
}

fn c6() -> Outcome {
    let (r, t) = timed(|| wpvol::series::kmz_residual(20).unwrap());
    Outcome {
        id: 6,
        pass: r.is_zero() && r.order() == 20 && t < Duration::from_secs(1),
        summary: format!("x h'' - h' - h''(x h' - h) = O(x^21) in {}", ms(t)),
        notes: vec![],
    }
}

fn c7() -> Outcome {
    let printed = v_q_printed(4, 1, &Lambda::Symbolic).unwrap();
    let reference = Engine::default().v_q_reference(4, 1, &Lambda::Symbolic).unwrap();
    let diff = printed.sub(&reference);
    let half = PolyQ::from_terms(Lambda::vars(), [(vec![1], rat(1, 2))]);
    let (code, out) = wpvol(&["vq", "--variant", "both"]);
    let summary_line = out.lines().last().unwrap_or_default().to_string();
    let reported = summary_line.contains("\"first_n\":4") && summary_line.contains("\"first_q\":1");
    Outcome {
        id: 7,
        pass: diff == half && code == 0 && reported,
        summary: format!("printed - reference at (4,1) = {diff}; vq --variant both: {summary_line}"),
        notes: vec![],
    }
}

fn c8() -> Outcome {
    let e = Engine::default();
    let sweeps = [
        (int(1), vec![rat(1, 2), rat(1, 2), rat(1, 2)]),
        (rat(3, 2), vec![rat(1, 4), rat(1, 3), rat(1, 2)]),
        (rat(1, 2), vec![rat(1, 4), rat(1, 3), int(0)]),
    ];
    let eps = [rat(1, 10), rat(1, 100), rat(1, 1000)];
    let mut pass = true;
    let mut notes = Vec::new();
    for (x, rest) in &sweeps {
        let gap = WallGap::new(&e, x, rest, &rat(1, 40)).unwrap();
        let d = |s: &Rational| gap.at(s).abs();
        let c = d(&eps[0]).max(d(&-eps[0].clone())) / (&eps[0] * &eps[0]);
        let within = eps.iter().all(|s| d(s) <= &c * s * s && d(&-s.clone()) <= &c * s * s);
        pass &= within && gap.order() == Some(2);
        let mut t = vec![x.clone(), int(2) - x];
        t.extend(rest.iter().cloned());
        let raw = |s: &Rational| {
            let at = |d: Rational| {
                let mut u = t.clone();
                u[1] += d;
                e.v_conical(&MarkingProfile::conical(&u).unwrap()).unwrap()
            };
            (at(s.clone()) - at(-s.clone())) / s
        };
        let ratio = raw(&eps[2]);
        notes.push(format!(
            "t = ({x}, 2-{x}+δ, {}): gap order {:?}, C = {:.4}, |gap(±ε)| <= C ε² for ε in 1e-1..1e-3: {within}; raw two-sided difference / ε at 1e-3: {:.4}",
            rest.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "),
            gap.order(),
            to_f64(&c),
            to_f64(&ratio),
        ));
    }
    Outcome {
        id: 8,
        pass,
        summary: format!("{} sweeps at n = 5", sweeps.len()),
        notes,
    }
}

fn c9() -> Outcome {
    let (table, t) = timed(|| hyperelliptic_table(15).unwrap());
    let positive = table.rows.iter().all(|r| r.v_norm.is_positive());
    let mut invariants = true;
    for row in &table.rows[..2] {
        let p = MarkingProfile::conical(&vec![int(1); row.n]).unwrap();
        let naive = v_naive(&p, PsiMode::AveragedUnordered).unwrap();
        let modes = compare_psi_modes(std::slice::from_ref(&p)).unwrap();
        invariants &= naive == row.v_norm && modes.agree();
    }
    Outcome {
        id: 9,
        pass: table.rows.len() == 14 && positive && invariants && t < Duration::from_secs(60),
        summary: format!(
            "g = 2..15: {} rows, all positive: {positive}, g = 2,3 oracle and modes: {invariants}, {:.2} s",
            table.rows.len(),
            t.as_secs_f64()
        ),
        notes: vec![format!(
            "vol(H_2) = {} π^{}",
            table.rows[0].vol.coeff, table.rows[0].vol.pi_exp
        )],
    }
}

fn c10() -> Outcome {
    let (_, t_cusp) = timed(|| {
        for n in 3..=200 {
            v_cusp(n).unwrap();
        }
    });
    let (_, t_pi) = timed(|| {
        let e = Engine::default();
        for n in 3..=32 {
            e.v_conical(&MarkingProfile::conical(&vec![int(1); n]).unwrap()).unwrap();
        }
    });
    let pi32 = vec!["1"; 32].join(",");
    let runs: Vec<(i32, String)> = ["1", "4"]
        .iter()
        .map(|k| wpvol(&["--threads", k, "conical", "--t", &pi32]))
        .collect();
    let tables: Vec<(i32, String)> = ["1", "4"]
        .iter()
        .map(|k| wpvol(&["--threads", k, "hyperelliptic", "--g-max", "10"]))
        .collect();
    let mut cfg = EngineConfig::new(PsiMode::AveragedUnordered, Reduction::SymmetryReduced);
    cfg.parallel = true;
    let p = MarkingProfile::conical(&vec![int(1); 24]).unwrap();
    let pooled: Vec<Rational> = [1, 4]
        .iter()
        .map(|&k| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap();
            pool.install(|| Engine::new(cfg.clone()).volume(&p).unwrap())
        })
        .collect();
    let deterministic = runs[0] == runs[1]
        && runs[0].0 == 0
        && tables[0] == tables[1]
        && tables[0].0 == 0
        && pooled[0] == pooled[1];
    Outcome {
        id: 10,
        pass: t_cusp < Duration::from_secs(60) && t_pi < Duration::from_secs(60) && deterministic,
        summary: format!(
            "cusp n <= 200 in {:.2} s; all-π n <= 32 in {:.2} s; threads 1 vs 4 identical: {deterministic}",
            t_cusp.as_secs_f64(),
            t_pi.as_secs_f64()
        ),
        notes: vec![],
    }
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[test]
fn acceptance_criteria() {
    let grid = oracle_grid();
    let outcomes = vec![c1(), c2(), c3(), c4(&grid), c5(&grid), c6(), c7(), c8(), c9(), c10()];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{} criterion {:>2}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.summary);
        for n in &o.notes {
            println!("      {n}");
        }
        if o.pass == EXPECTED_FAILURES.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    assert!(unexpected.is_empty(), "criteria with unexpected status: {unexpected:?}");
}

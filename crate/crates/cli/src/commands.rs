use std::ops::RangeInclusive;
use std::path::Path;
use std::sync::Arc;

use wpvol::checks::{
    boundary_grid, compare_psi_modes_with, compare_reductions, compare_vq, conical_grid, cusp_grid,
    first_vq_disagreement, random_profiles, Comparison,
};
use wpvol::engine::{v_cusp, v_q_corrected, v_q_printed, v_q_unconstrained, Lambda};
use wpvol::hyperelliptic::{hyperelliptic_table_with, hyperelliptic_volume_with};
use wpvol::scalars::{int, to_wp_volume, PolyQ};
use wpvol::series::{kmz_residual, ode_residual_h1, H1Source};
use wpvol::{ConeRule, Engine, EngineConfig, Error, Family, MarkingProfile, MemoTable, PsiMode, Rational, Reduction, Result};

use crate::output::{Record, Section};
use crate::VqVariant;

pub struct Ctx {
    pub memo: Arc<MemoTable>,
    pub parallel: bool,
    pub decimal: Option<usize>,
}

impl Ctx {
    fn engine(&self, psi_mode: PsiMode, reduction: Reduction, rule: ConeRule) -> Engine {
        let mut cfg = EngineConfig::new(psi_mode, reduction).with_cone_rule(rule);
        cfg.parallel = self.parallel;
        Engine::with_memo(cfg, self.memo.clone())
    }
}

pub struct Outcome {
    pub sections: Vec<Section>,
    /// False when a verification failed.
    pub passed: bool,
}

impl Outcome {
    fn ok(sections: Vec<Section>) -> Self {
        Self { sections, passed: true }
    }
}

fn lambda_of(lam: Option<Rational>) -> Lambda {
    lam.map_or(Lambda::Symbolic, Lambda::Value)
}

fn lambda_label(lam: &Lambda) -> String {
    match lam {
        Lambda::Symbolic => "symbolic".into(),
        Lambda::Value(v) => wpvol::scalars::format_rational(v),
    }
}

pub fn profile(family: Family, values: &[Rational], file: Option<&Path>) -> Result<MarkingProfile> {
    let Some(path) = file else {
        return MarkingProfile::from_values(family, values);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    let p: MarkingProfile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        token: path.display().to_string(),
        reason: e.to_string(),
    })?;
    if p.family() != family {
        return Err(Error::WrongFamily {
            expected: family.name(),
            found: p.family().name(),
        });
    }
    Ok(p)
}

pub fn cusp(ctx: &Ctx, ns: RangeInclusive<usize>) -> Result<Outcome> {
    let mut rows = Vec::new();
    for n in ns {
        let v = v_cusp(n)?;
        let vol = to_wp_volume(&v, n)?;
        rows.push(Record::new().put("n", n).put("V", v).put_vol(&vol, ctx.decimal));
    }
    Ok(Outcome::ok(vec![Section::of(rows)]))
}

pub fn volume(ctx: &Ctx, p: &MarkingProfile, psi: PsiMode, reduction: Reduction, rule: ConeRule) -> Result<Outcome> {
    let engine = ctx.engine(psi, reduction, rule);
    let v = engine.volume(p)?;
    let vol = to_wp_volume(&v, p.len())?;
    let mut r = Record::new().put("family", p.family().name());
    r = match p.family() {
        Family::Conical => r.put("t", p.values()).put("admissible", p.is_admissible()?),
        Family::Boundary => r.put("s", p.values()),
    };
    Ok(Outcome::ok(vec![Section::of(vec![r.put("V", v).put_vol(&vol, ctx.decimal)])]))
}

pub fn boundary_symbolic(ctx: &Ctx, n: usize, psi: PsiMode, reduction: Reduction) -> Result<Outcome> {
    let p = ctx.engine(psi, reduction, ConeRule::Cusp).v_boundary_symbolic(n)?;
    let r = Record::new()
        .put("n", n)
        .put("vars", p.vars().join(";"))
        .put("V", p);
    Ok(Outcome::ok(vec![Section::of(vec![r])]))
}

pub fn vq(n: Option<usize>, q: Option<usize>, variant: VqVariant, lam: Option<Rational>, max_n: usize) -> Result<Outcome> {
    let lam = lambda_of(lam);
    if variant == VqVariant::Both {
        let ns = n.map_or(4..=max_n, |n| n..=n);
        let rows: Vec<_> = compare_vq(ns, &lam)?
            .into_iter()
            .filter(|r| q.map_or(true, |q| r.q == q))
            .collect();
        let first = first_vq_disagreement(&rows);
        let table = rows
            .iter()
            .map(|r| {
                Record::new()
                    .put("n", r.n)
                    .put("q", r.q)
                    .put("printed", r.printed.clone())
                    .put("reference", r.reference.clone())
                    .put("agree", r.agree)
            })
            .collect();
        let summary = Record::new()
            .put("lambda", lambda_label(&lam))
            .put("scanned", rows.len())
            .put("first_n", first.map(|f| f.0))
            .put("first_q", first.map(|f| f.1));
        return Ok(Outcome::ok(vec![Section::of(table), Section::of(vec![summary])]));
    }
    let n = n.ok_or_else(|| Error::Domain("--n is required unless --variant both".into()))?;
    let engine = Engine::default();
    let mut rows = Vec::new();
    for q in q.map_or(0..=n, |q| q..=q) {
        let (name, v): (&str, PolyQ) = match variant {
            VqVariant::Printed => ("printed", v_q_printed(n, q, &lam)?),
            VqVariant::Reference => ("reference", engine.v_q_reference(n, q, &lam)?),
            VqVariant::Corrected => ("corrected", v_q_corrected(n, q, &lam)?),
            VqVariant::Unconstrained => ("unconstrained", v_q_unconstrained(n, q, &lam)?),
            VqVariant::Both => unreachable!("handled above"),
        };
        rows.push(Record::new().put("n", n).put("q", q).put("variant", name).put("V", v));
    }
    Ok(Outcome::ok(vec![Section::of(rows)]))
}

pub fn hyperelliptic(ctx: &Ctx, g: Option<usize>, g_max: usize) -> Result<Outcome> {
    let engine = ctx.engine(PsiMode::AveragedUnordered, Reduction::SymmetryReduced, ConeRule::Cusp);
    let (rows, ratios) = match g {
        Some(g) => (vec![hyperelliptic_volume_with(&engine, g)?], Vec::new()),
        None => {
            let t = hyperelliptic_table_with(&engine, g_max)?;
            (t.rows, t.ratios)
        }
    };
    let rows = rows
        .iter()
        .map(|r| {
            Record::new()
                .put("g", r.g)
                .put("n", r.n)
                .put("v_norm", r.v_norm.clone())
                .put_vol(&r.vol, ctx.decimal)
        })
        .collect();
    let ratios = ratios
        .iter()
        .map(|r| {
            Record::new()
                .put("g", r.g)
                .put("ratio_coeff", r.coeff.clone())
                .put("ratio_pi_exp", r.pi_exp)
        })
        .collect();
    Ok(Outcome::ok(vec![Section::of(rows), Section::of(ratios)]))
}

pub fn ode_check(order: usize, source: H1Source, lam: Option<Rational>, expect_zero: bool) -> Result<Outcome> {
    let lam = lambda_of(lam);
    let r = ode_residual_h1(order, source, &lam)?;
    let kmz = kmz_residual(order)?;
    let rows = r
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| match lam {
            Lambda::Symbolic => Record::new().put("k", k).put("residual", c.clone()),
            Lambda::Value(_) => Record::new().put("k", k).put("residual", c.constant_term()),
        })
        .collect();
    let source_name = match source {
        H1Source::Printed => "printed",
        H1Source::Reference => "reference",
        H1Source::Unconstrained => "unconstrained",
    };
    let summary = Record::new()
        .put("order", order)
        .put("source", source_name)
        .put("lambda", lambda_label(&lam))
        .put("residual_zero", r.is_zero())
        .put("first_nonzero", r.first_nonzero())
        .put("kmz_zero", kmz.is_zero());
    Ok(Outcome {
        sections: vec![Section::of(rows), Section::of(vec![summary])],
        passed: kmz.is_zero() && (!expect_zero || r.is_zero()),
    })
}

fn engine_profiles(max_n: usize, random: usize, seed: u64) -> Vec<MarkingProfile> {
    let mut profiles = conical_grid(max_n);
    profiles.extend(boundary_grid(max_n));
    profiles.extend(cusp_grid(max_n.max(9)));
    profiles.extend(random_profiles(random, max_n.max(3), seed));
    profiles
}

fn check_record(name: &str, c: &Comparison) -> Record {
    Record::new()
        .put("check", name)
        .put("status", if c.agree() { "pass" } else { "fail" })
        .put("checked", c.checked)
        .put("disagreements", c.disagreements.len())
}

fn disagreement_records(name: &str, c: &Comparison, show: usize) -> Vec<Record> {
    c.disagreements
        .iter()
        .take(show)
        .map(|d| {
            let values: Vec<String> = d
                .values
                .iter()
                .map(|v| format!("{}={}", v.engine, wpvol::scalars::format_rational(&v.value)))
                .collect();
            Record::new()
                .put("check", name)
                .put("profile", d.profile.clone())
                .put("values", values.join(";"))
        })
        .collect()
}

pub fn compare_engines(max_n: usize, seed: u64, random: usize, show: usize, rule: ConeRule) -> Result<Outcome> {
    let profiles = engine_profiles(max_n, random, seed);
    let reductions = compare_reductions(&profiles, PsiMode::AveragedUnordered)?;
    let modes = compare_psi_modes_with(&profiles, rule)?;
    let passed = reductions.agree() && modes.agree();
    let mut details = disagreement_records("reductions", &reductions, show);
    details.extend(disagreement_records("psi-modes", &modes, show));
    let summary = Record::new()
        .put("profiles", profiles.len())
        .put("seed", seed as usize)
        .put(
            "result",
            if passed { "all modes agree" } else { "engines disagree" },
        );
    Ok(Outcome {
        sections: vec![
            Section::of(vec![check_record("reductions", &reductions), check_record("psi-modes", &modes)]),
            Section::of(details),
            Section::of(vec![summary]),
        ],
        passed,
    })
}

pub fn selftest(max_n: usize, seed: u64) -> Result<Outcome> {
    let profiles = engine_profiles(max_n, 50, seed);
    let mut rows = Vec::new();
    let mut passed = true;
    let mut check = |name: &str, ok: bool, checked: usize, detail: String| {
        passed &= ok;
        rows.push(
            Record::new()
                .put("check", name)
                .put("status", if ok { "pass" } else { "fail" })
                .put("checked", checked)
                .put("detail", detail),
        );
    };

    let red = compare_reductions(&profiles, PsiMode::AveragedUnordered)?;
    check("reductions", red.agree(), red.checked, format!("{} disagreements", red.disagreements.len()));
    let modes = compare_psi_modes_with(&profiles, ConeRule::Cusp)?;
    check("psi-modes", modes.agree(), modes.checked, format!("{} disagreements", modes.disagreements.len()));

    let e = Engine::default();
    let mut bad = 0;
    for n in 3..=12 {
        let c = e.v_conical(&MarkingProfile::cusps(Family::Conical, n)?)?;
        let b = e.v_boundary(&MarkingProfile::cusps(Family::Boundary, n)?)?;
        let z = v_cusp(n)?;
        if c != z || b != z {
            bad += 1;
        }
    }
    check("cusp-limits", bad == 0, 10, format!("{bad} mismatches for 3 <= n <= 12"));

    let zero = ode_residual_h1(20, H1Source::Printed, &Lambda::Value(int(0)))?;
    let kmz = kmz_residual(20)?;
    let ok = zero.is_zero() && kmz.is_zero();
    check("ode-lambda-zero", ok, 21, format!("first nonzero: {:?}", zero.first_nonzero().or(kmz.first_nonzero())));

    let p4 = e.v_boundary_symbolic(4)?;
    let vars = PolyQ::lambda_vars(4);
    let expect = (0..4).fold(PolyQ::constant(int(1)), |acc, j| acc.add(&PolyQ::variable(&vars, j)));
    check("boundary-n4", p4 == expect, 1, p4.to_string());

    let warm = Engine::default();
    let grid = conical_grid(max_n.min(6));
    let first: Vec<Rational> = grid.iter().map(|p| warm.volume(p)).collect::<Result<_>>()?;
    let again: Vec<Rational> = grid.iter().map(|p| warm.volume(p)).collect::<Result<_>>()?;
    let cold: Vec<Rational> = grid.iter().map(|p| Engine::default().volume(p)).collect::<Result<_>>()?;
    check("memo", first == again && first == cold, grid.len(), "warm vs cold".into());

    Ok(Outcome {
        sections: vec![Section::of(rows)],
        passed,
    })
}

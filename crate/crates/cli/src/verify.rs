use anyhow::Result;
use clap::{Args, Subcommand};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use torsionlab::counting::{self, CensusSeries};
use torsionlab::perm::{
    self, direct_product_action, is_perm_isomorphic, nilpotent_decomposition, EnumerationMode,
    PermError, TransitiveTable,
};
use torsionlab::quadforms;

use crate::output::{Mode, parse_count, Outcome, Output};

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// deg(H)/ind(H) <= deg(G)/ind(G) over allowable subgroups of G^k.
    DegInd {
        #[arg(long = "max-degree", default_value_t = 6)]
        max_degree: usize,
        /// A single power k; by default every k with |G|^k <= max-size.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "max-size", default_value_t = 2048)]
        max_size: u64,
        #[arg(long, value_enum, default_value = "symmetry")]
        mode: Mode,
    },
    /// Product of the Sylow factors is permutation isomorphic to G.
    Nilpotent {
        #[arg(long = "max-degree", default_value_t = 12)]
        max_degree: usize,
    },
    /// rk_2 Cl(D) = omega(|D|) - 1 and the cyclic rank bounds.
    Genus {
        #[arg(long, value_parser = parse_count, default_value = "20000")]
        limit: u64,
    },
    /// a-full count against g(1/a) X^(1/a).
    Afull(AfullArgs),
    /// Chebyshev and dyadic-telescoping identities on random census series.
    Moments {
        #[arg(long, default_value_t = 10_000)]
        series: usize,
    },
}

#[derive(Args, Debug)]
pub struct AfullArgs {
    #[arg(long)]
    a: u32,
    #[arg(long = "X", value_parser = parse_count)]
    x: u64,
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
}

#[derive(Serialize)]
struct SuiteReport<T: Serialize> {
    suite: &'static str,
    checked: usize,
    violations: usize,
    skipped: usize,
    cases: Vec<T>,
}

fn summary<T: Serialize>(out: &mut Output, r: &SuiteReport<T>, what: &str) -> Result<Outcome> {
    out.row("suite", r.suite);
    out.row("result", format!("checked {} {what}, {} violations", r.checked, r.violations));
    if r.skipped > 0 {
        out.row("skipped", r.skipped);
    }
    out.json(r)?;
    Ok(Outcome::from_ok(r.violations == 0))
}

pub fn run(cmd: &VerifyCmd, out: &mut Output) -> Result<Outcome> {
    match *cmd {
        VerifyCmd::DegInd { max_degree, k, max_size, mode } => deg_ind(out, max_degree, k, max_size, mode),
        VerifyCmd::Nilpotent { max_degree } => nilpotent(out, max_degree),
        VerifyCmd::Genus { limit } => genus(out, limit),
        VerifyCmd::Afull(ref a) => afull(out, a),
        VerifyCmd::Moments { series } => moments(out, series),
    }
}

#[derive(Serialize)]
struct DegIndCase {
    label: String,
    k: usize,
    allowable: usize,
    checked: usize,
    max_ratio: (u64, u64),
    group_ratio: (u64, u64),
    violations: usize,
}

fn deg_ind(out: &mut Output, max_degree: usize, k: Option<usize>, max_size: u64, mode: Mode) -> Result<Outcome> {
    let table = TransitiveTable::load()?;
    let mode = EnumerationMode::from(mode);
    let mut cases = Vec::new();
    let mut skipped = 0;
    for e in table.entries().iter().filter(|e| e.degree <= max_degree) {
        let g = e.group()?;
        let Ok(order) = g.order() else {
            skipped += 1;
            continue;
        };
        let powers: Vec<usize> = match k {
            Some(k) => vec![k],
            None => (1..).take_while(|&k| order.checked_pow(k as u32).is_some_and(|s| s <= max_size)).collect(),
        };
        for k in powers {
            match perm::check_deg_ind(&g, k, mode) {
                Ok(r) => cases.push(DegIndCase {
                    label: e.label.clone(),
                    k,
                    allowable: r.allowable,
                    checked: r.checked,
                    max_ratio: r.max_ratio,
                    group_ratio: r.group_ratio,
                    violations: r.violations.len() + usize::from(!r.full_product_equality),
                }),
                Err(PermError::LatticeCap { .. } | PermError::LatticeBudget { .. } | PermError::OrderCap { .. }) => {
                    skipped += 1
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    out.csv(
        &["label", "k", "allowable", "checked", "max_ratio", "group_ratio", "violations"],
        cases.iter().map(|c| {
            vec![
                c.label.clone(),
                c.k.to_string(),
                c.allowable.to_string(),
                c.checked.to_string(),
                format!("{}/{}", c.max_ratio.0, c.max_ratio.1),
                format!("{}/{}", c.group_ratio.0, c.group_ratio.1),
                c.violations.to_string(),
            ]
        }),
    );
    for c in cases.iter().filter(|c| c.violations > 0).take(10) {
        out.row("violation", format!("{} k={}", c.label, c.k));
    }
    let report = SuiteReport {
        suite: "deg-ind",
        checked: cases.iter().map(|c| c.allowable).sum(),
        violations: cases.iter().map(|c| c.violations).sum(),
        skipped,
        cases,
    };
    out.row("(G, k) cases", report.cases.len());
    summary(out, &report, "allowable subgroups")
}

#[derive(Serialize)]
struct NilCase {
    label: String,
    factors: Vec<(u64, usize)>,
    isomorphic: bool,
}

fn nilpotent(out: &mut Output, max_degree: usize) -> Result<Outcome> {
    let table = TransitiveTable::load()?;
    let mut cases = Vec::new();
    let mut skipped = 0;
    for e in table.entries().iter().filter(|e| e.degree <= max_degree) {
        let g = e.group()?;
        match g.is_nilpotent() {
            Ok(true) => {}
            Ok(false) => continue,
            Err(_) => {
                skipped += 1;
                continue;
            }
        }
        let parts = nilpotent_decomposition(&g)?;
        let factors = parts.iter().map(|(p, h)| (*p, h.degree())).collect();
        let groups: Vec<_> = parts.into_iter().map(|(_, h)| h).collect();
        let isomorphic = is_perm_isomorphic(&direct_product_action(&groups)?, &g)?;
        cases.push(NilCase {
            label: e.label.clone(),
            factors,
            isomorphic,
        });
    }
    out.csv(
        &["label", "factor_degrees", "isomorphic"],
        cases.iter().map(|c| {
            let degs: Vec<String> = c.factors.iter().map(|f| f.1.to_string()).collect();
            vec![c.label.clone(), degs.join("x"), c.isomorphic.to_string()]
        }),
    );
    for c in cases.iter().filter(|c| !c.isomorphic) {
        out.row("violation", &c.label);
    }
    let report = SuiteReport {
        suite: "nilpotent",
        checked: cases.len(),
        violations: cases.iter().filter(|c| !c.isomorphic).count(),
        skipped,
        cases,
    };
    summary(out, &report, "nilpotent groups")
}

fn genus(out: &mut Output, limit: u64) -> Result<Outcome> {
    let groups = quadforms::class_groups_up_to(i64::try_from(limit)?)?;
    let reports: Vec<_> = groups.iter().map(quadforms::genus_report).collect();
    let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    for r in bad.iter().take(10) {
        out.row("violation", format!("D = {} two_rank {} omega {}", r.disc, r.two_rank, r.omega));
    }
    out.csv(
        &["D", "h", "two_rank", "omega", "genus_ok"],
        reports.iter().map(|r| {
            vec![
                r.disc.to_string(),
                r.h.to_string(),
                r.two_rank.to_string(),
                r.omega.to_string(),
                r.genus_ok.to_string(),
            ]
        }),
    );
    let report = SuiteReport::<()> {
        suite: "genus",
        checked: reports.len(),
        violations: bad.len(),
        skipped: 0,
        cases: Vec::new(),
    };
    out.row("limit", limit);
    summary(out, &report, "fundamental discriminants")
}

fn afull(out: &mut Output, args: &AfullArgs) -> Result<Outcome> {
    let r = counting::verify_afull_asymptotic(args.a, args.x)?;
    let ok = r.deviation <= args.tol;
    out.row("a", r.a);
    out.row("X", r.x);
    out.row("count", r.count);
    out.row("g(1/a)", format!("{:.12}", r.constant));
    out.row("deviation", format!("{:.6}", r.deviation));
    out.row("tolerance", args.tol);
    out.row("result", if ok { "pass" } else { "fail" });
    out.csv(
        &["a", "X", "count", "constant", "deviation"],
        [vec![r.a.to_string(), r.x.to_string(), r.count.to_string(), r.constant.to_string(), r.deviation.to_string()]],
    );
    out.json(&r)?;
    Ok(Outcome::from_ok(ok))
}

#[derive(Serialize)]
struct MomentFailure {
    index: usize,
    k: u32,
    x: u64,
    what: &'static str,
}

fn moments(out: &mut Output, count: usize) -> Result<Outcome> {
    let seed = out.global().seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut with_exceedances = 0;
    for index in 0..count {
        let len = rng.gen_range(0..120);
        let mut discs: Vec<u64> = (0..len).map(|_| rng.gen_range(1..100_000)).collect();
        discs.sort_unstable();
        discs.dedup();
        let heavy = rng.gen_bool(0.3);
        let pairs: Vec<(u64, u64)> = discs
            .into_iter()
            .map(|d| (d, if heavy { rng.gen_range(0..5000) } else { rng.gen_range(0..20) }))
            .collect();
        let series = CensusSeries::from_pairs(pairs)?;
        let k = rng.gen_range(1..=4u32);
        let eps = rng.gen_range(0.01..1.0);
        let x = rng.gen_range(1..60_000u64);
        let r = counting::chebyshev_exceed_check(&series, k, eps, x)?;
        with_exceedances += usize::from(r.exceedances > 0);
        if !r.holds {
            failures.push(MomentFailure { index, k, x, what: "chebyshev" });
        }
        let mut total = BigUint::from(series.get(1)).pow(k);
        for j in 0..17 {
            total += counting::dyadic_moment(&series, k, 1 << j);
        }
        if total != series.moment_sum(k, 1 << 17) {
            failures.push(MomentFailure { index, k, x, what: "telescoping" });
        }
    }
    out.row("seed", seed);
    out.row("series with exceedances", with_exceedances);
    for f in failures.iter().take(10) {
        out.row("violation", format!("series {} ({}, k={}, X={})", f.index, f.what, f.k, f.x));
    }
    out.csv(
        &["index", "check", "k", "X"],
        failures.iter().map(|f| vec![f.index.to_string(), f.what.to_string(), f.k.to_string(), f.x.to_string()]),
    );
    let report = SuiteReport {
        suite: "moments",
        checked: count,
        violations: failures.len(),
        skipped: 0,
        cases: failures,
    };
    summary(out, &report, "random series")
}

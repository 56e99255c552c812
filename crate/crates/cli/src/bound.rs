use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;
use torsionlab::bounds::{
    self, BaseFieldData, BoundReport, BoundRequest, RamifiedPlaces, TowerRamification,
};

use crate::output::{join, Outcome, Output};

#[derive(Args, Debug)]
pub struct BoundCmd {
    #[command(subcommand)]
    formula: Formula,
}

#[derive(Args, Debug, Clone, Copy)]
struct Places {
    /// Ramified finite primes.
    #[arg(long, default_value_t = 0)]
    t: u64,
    /// Ramified infinite places.
    #[arg(long = "t-inf", default_value_t = 0)]
    t_inf: u64,
}

impl From<Places> for RamifiedPlaces {
    fn from(p: Places) -> Self {
        RamifiedPlaces::new(p.t, p.t_inf)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct Base {
    /// Degree of the base field.
    #[arg(long, default_value_t = 1)]
    d: u64,
    /// l-rank of the base class group.
    #[arg(long = "rkF", default_value_t = 0)]
    rk_f: u64,
    /// #Cl_F[l], checked against rkF when given.
    #[arg(long = "hF")]
    h_f: Option<u64>,
}

impl From<Base> for BaseFieldData {
    fn from(b: Base) -> Self {
        BaseFieldData {
            d: b.d,
            rk: b.rk_f,
            h_ell: b.h_f,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Formula {
    /// l (max(t,1) - 1 + rkF) for a cyclic degree-l extension.
    Cyclic {
        #[arg(long)]
        l: u64,
        #[command(flatten)]
        places: Places,
        #[arg(long = "rkF", default_value_t = 0)]
        rk_f: u64,
    },
    /// (l - 1)(max(t,1) - 1), valid when rkF = 0.
    Sharp {
        #[arg(long)]
        l: u64,
        #[command(flatten)]
        places: Places,
    },
    /// Tower bound from per-step values e_1,...,e_r.
    Tower {
        #[arg(long)]
        l: u64,
        #[arg(long, value_delimiter = ',')]
        e: Vec<u64>,
        #[arg(long = "rkF", default_value_t = 0)]
        rk_f: u64,
    },
    /// r n t + n rkF with n = l^r and t finite ramified primes.
    Simple {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long = "rkF", default_value_t = 0)]
        rk_f: u64,
    },
    /// d omega(n), bounding omega of an ideal of norm n.
    Omega {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
    /// C d log n / log log n.
    OmegaUpper {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
    /// Rank bound for an l-group extension of degree l^r.
    Torsion {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        disc: u64,
        #[command(flatten)]
        base: Base,
    },
    /// Bound for #Cl_E[l].
    Size {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        disc: u64,
        #[command(flatten)]
        base: Base,
    },
    /// Bound for #Cl_E[l^s].
    Power {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "D")]
        disc: u64,
        #[command(flatten)]
        base: Base,
    },
    /// omega(f0) + 3d + rkF for a ray class group.
    Ray {
        #[arg(long)]
        omega: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long = "rkF", default_value_t = 0)]
        rk_f: u64,
    },
    /// hF l^(omega + 3d + rkF) for cyclic degree-l extensions of one discriminant.
    Count {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        omega: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long = "hF", default_value_t = 1)]
        h_f: u64,
    },
    /// Most ideals of norm D in a degree-d field.
    Ideals {
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long = "D")]
        disc: u64,
    },
    /// [E:F][F:Q], bounding a tame discriminant valuation.
    Tame {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
    },
}

fn request(f: &Formula) -> Result<BoundRequest> {
    Ok(match *f {
        Formula::Cyclic { l, places, rk_f } => BoundRequest::CyclicRank {
            ell: l,
            places: places.into(),
            rk_f,
        },
        Formula::Sharp { l, places } => BoundRequest::CyclicRankSharp {
            ell: l,
            places: places.into(),
        },
        Formula::Tower { l, ref e, rk_f } => BoundRequest::TowerRank {
            tower: TowerRamification::new(l, e.clone())?,
            rk_f,
        },
        Formula::Simple { l, r, t, rk_f } => BoundRequest::SimpleRank {
            ell: l,
            r,
            places: RamifiedPlaces::finite_only(t),
            rk_f,
        },
        Formula::Omega { n, d } => BoundRequest::Omega { n, d },
        Formula::OmegaUpper { n, d } => BoundRequest::OmegaUpper { n, d },
        Formula::Torsion { l, r, disc, base } => BoundRequest::TorsionRank {
            ell: l,
            r,
            base: base.into(),
            disc,
        },
        Formula::Size { l, r, disc, base } => BoundRequest::TorsionSize {
            ell: l,
            r,
            base: base.into(),
            disc,
        },
        Formula::Power { s, l, r, disc, base } => BoundRequest::TorsionPower {
            s,
            ell: l,
            r,
            base: base.into(),
            disc,
        },
        Formula::Ray { omega, d, rk_f } => BoundRequest::RayClassRank {
            omega_f0: omega,
            d,
            rk_f,
        },
        Formula::Count { l, omega, d, h_f } => BoundRequest::CyclicCount {
            ell: l,
            omega_f0: omega,
            d,
            h_ell_f: h_f,
        },
        Formula::Ideals { d, disc } => BoundRequest::IdealCount { d, disc },
        Formula::Tame { n, d } => BoundRequest::TameValuation { n_e: n, d_f: d },
    })
}

fn show(report: &BoundReport, out: &mut Output) -> Result<()> {
    let tag = serde_json::to_value(report.formula)?;
    out.row("formula", tag.as_str().unwrap_or_default());
    out.row("value", report.value);
    for (k, v) in &report.inputs {
        out.row(k, v);
    }
    for n in &report.notes {
        out.row("note", n);
    }
    out.json(report)?;
    out.csv(
        &["formula", "value"],
        [vec![tag.as_str().unwrap_or_default().to_string(), report.value.to_string()]],
    );
    Ok(())
}

pub fn run(cmd: &BoundCmd, out: &mut Output) -> Result<Outcome> {
    let report = request(&cmd.formula)?.evaluate()?;
    show(&report, out)?;
    Ok(Outcome::Pass)
}

#[derive(Args, Debug)]
pub struct TowerCmd {
    #[arg(long)]
    l: u64,
    /// Raw ramified-prime counts t_1,...,t_r of the steps (floored at 1).
    #[arg(long, value_delimiter = ',', conflicts_with = "e")]
    counts: Option<Vec<u64>>,
    /// Per-step values e_1,...,e_r directly.
    #[arg(long, value_delimiter = ',')]
    e: Option<Vec<u64>>,
    /// Ramified primes of the base field, for the simple bound.
    #[arg(long)]
    t: Option<u64>,
    #[arg(long = "rkF", default_value_t = 0)]
    rk_f: u64,
}

#[derive(Serialize)]
struct TowerReport {
    ell: u64,
    r: usize,
    e: Vec<u64>,
    rk_f: u64,
    tower_bound: u64,
    simple_bound: Option<u64>,
    /// whether every e_i <= max(l^(i-1) t, 1), so the simple bound applies
    substitution_holds: Option<bool>,
}

pub fn run_tower(cmd: &TowerCmd, out: &mut Output) -> Result<Outcome> {
    let tower = match (&cmd.counts, &cmd.e) {
        (Some(t), _) => TowerRamification::from_counts(cmd.l, t)?,
        (None, Some(e)) => TowerRamification::new(cmd.l, e.clone())?,
        (None, None) => anyhow::bail!("give --counts or --e"),
    };
    let tower_bound = bounds::rank_bound_tower(&tower, cmd.rk_f)?;
    let (simple_bound, substitution_holds) = match cmd.t {
        Some(t) => {
            let s = bounds::rank_bound_simple(cmd.l, tower.r() as u64, RamifiedPlaces::finite_only(t), cmd.rk_f)?;
            let holds = tower.e.iter().enumerate().all(|(i, &e)| {
                cmd.l
                    .checked_pow(i as u32)
                    .and_then(|p| p.checked_mul(t))
                    .is_none_or(|cap| e <= cap.max(1))
            });
            (Some(s), Some(holds))
        }
        None => (None, None),
    };
    let report = TowerReport {
        ell: cmd.l,
        r: tower.r(),
        e: tower.e.clone(),
        rk_f: cmd.rk_f,
        tower_bound,
        simple_bound,
        substitution_holds,
    };
    out.row("l", report.ell);
    out.row("r", report.r);
    out.row("e", join(&report.e, ","));
    out.row("tower bound", report.tower_bound);
    let mut ok = true;
    if let (Some(s), Some(h)) = (simple_bound, substitution_holds) {
        out.row("simple bound", s);
        out.row("e_i <= max(l^(i-1) t, 1)", h);
        if h && s < tower_bound {
            out.row("violation", "simple bound below tower bound");
            ok = false;
        }
    }
    out.json(&report)?;
    out.csv(
        &["step", "e"],
        report.e.iter().enumerate().map(|(i, e)| vec![(i + 1).to_string(), e.to_string()]),
    );
    Ok(Outcome::from_ok(ok))
}

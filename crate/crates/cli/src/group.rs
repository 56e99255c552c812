use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use serde::Serialize;
use torsionlab::arith;
use torsionlab::perm::{
    self, all_subgroup_towers, direct_product_action, is_perm_isomorphic, nilpotent_decomposition,
    parse_label, subgroup_tower, EnumerationMode, PermGroup, Permutation, SubgroupChain,
    TransitiveTable,
};

use crate::output::{Mode, join, Outcome, Output};

#[derive(Args, Debug)]
pub struct GroupArg {
    /// `nTk` label or generators in cycle notation, e.g. "(1,2,3),(1,2)".
    #[arg(long)]
    group: String,
    /// Degree for generator input (defaults to the largest point).
    #[arg(long)]
    degree: Option<usize>,
}

impl GroupArg {
    fn load(&self) -> Result<PermGroup> {
        let spec = self.group.trim();
        if parse_label(spec).is_some() {
            let table = TransitiveTable::load()?;
            Ok(table.group(spec)?)
        } else {
            PermGroup::parse(spec, self.degree).with_context(|| format!("parsing group {spec:?}"))
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// ind(g) = degree minus number of cycles.
    Ind {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Order, transitivity and a(G).
    A(GroupArg),
    /// Sylow decomposition of a transitive nilpotent group.
    Decompose(GroupArg),
    /// Subgroup tower from an l-group down to a point stabilizer.
    Tower {
        #[command(flatten)]
        g: GroupArg,
        /// Enumerate every tower (up to this many) instead of the canonical one.
        #[arg(long)]
        all: Option<usize>,
    },
    /// Allowable subgroups of G^k and the deg/ind check.
    Allowable {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "symmetry")]
        mode: Mode,
    },
}

pub fn run(cmd: &GroupCmd, out: &mut Output) -> Result<Outcome> {
    match cmd {
        GroupCmd::Ind { perm, degree } => {
            let p = Permutation::parse(perm, *degree)?;
            #[derive(Serialize)]
            struct Ind {
                permutation: String,
                degree: usize,
                cycles: usize,
                ind: usize,
            }
            let r = Ind {
                permutation: p.to_string(),
                degree: p.degree(),
                cycles: p.cycle_count(),
                ind: p.ind(),
            };
            out.row("permutation", &r.permutation);
            out.row("degree", r.degree);
            out.row("cycles", r.cycles);
            out.row("ind", r.ind);
            out.csv(&["degree", "cycles", "ind"], [vec![r.degree.to_string(), r.cycles.to_string(), r.ind.to_string()]]);
            out.json(&r)?;
            Ok(Outcome::Pass)
        }
        GroupCmd::A(arg) => {
            let g = arg.load()?;
            #[derive(Serialize)]
            struct Summary {
                degree: usize,
                order: u64,
                transitive: bool,
                nilpotent: bool,
                a: usize,
                deg_over_ind: (u64, u64),
            }
            let a = g.min_index()?;
            let n = g.degree() as u64;
            let gcd = arith_gcd(n, a as u64);
            let s = Summary {
                degree: g.degree(),
                order: g.order()?,
                transitive: g.is_transitive(),
                nilpotent: g.is_nilpotent()?,
                a,
                deg_over_ind: (n / gcd, a as u64 / gcd),
            };
            out.row("degree", s.degree);
            out.row("order", s.order);
            out.row("transitive", s.transitive);
            out.row("nilpotent", s.nilpotent);
            out.row("a(G)", s.a);
            out.row("deg/ind", format!("{}/{}", s.deg_over_ind.0, s.deg_over_ind.1));
            out.csv(&["degree", "order", "a"], [vec![s.degree.to_string(), s.order.to_string(), s.a.to_string()]]);
            out.json(&s)?;
            Ok(Outcome::Pass)
        }
        GroupCmd::Decompose(arg) => {
            let g = arg.load()?;
            let parts = nilpotent_decomposition(&g)?;
            #[derive(Serialize)]
            struct Factor {
                prime: u64,
                degree: usize,
                order: u64,
                generators: Vec<String>,
            }
            let mut factors = Vec::new();
            for (p, h) in &parts {
                factors.push(Factor {
                    prime: *p,
                    degree: h.degree(),
                    order: h.order()?,
                    generators: h.generators().iter().map(|x| x.to_string()).collect(),
                });
            }
            let groups: Vec<PermGroup> = parts.into_iter().map(|(_, h)| h).collect();
            let isomorphic = is_perm_isomorphic(&direct_product_action(&groups)?, &g)?;
            for f in &factors {
                out.row(
                    &format!("Sylow {}", f.prime),
                    format!("degree {}, order {}, generators {}", f.degree, f.order, join(&f.generators, ", ")),
                );
            }
            out.row("product action isomorphic to G", isomorphic);
            out.csv(
                &["prime", "degree", "order"],
                factors.iter().map(|f| vec![f.prime.to_string(), f.degree.to_string(), f.order.to_string()]),
            );
            out.json(&serde_json::json!({ "factors": factors, "isomorphic": isomorphic }))?;
            Ok(Outcome::from_ok(isomorphic))
        }
        GroupCmd::Tower { g: arg, all } => {
            let g = arg.load()?;
            let Some((ell, _)) = arith::prime_power(g.order()?) else {
                bail!("order {} is not a prime power", g.order()?);
            };
            let h = g.stabilizer(0)?;
            let chains: Vec<SubgroupChain> = match all {
                Some(limit) => all_subgroup_towers(&g, &h, ell, *limit)?,
                None => vec![subgroup_tower(&g, &h, ell)?],
            };
            #[derive(Serialize)]
            struct Chain {
                orders: Vec<u64>,
                valid: bool,
                generators: Vec<Vec<String>>,
            }
            let mut listed = Vec::new();
            for c in &chains {
                listed.push(Chain {
                    orders: c.orders()?,
                    valid: c.is_valid()?,
                    generators: c
                        .groups
                        .iter()
                        .map(|x| x.generators().iter().map(|p| p.to_string()).collect())
                        .collect(),
                });
            }
            out.row("prime", ell);
            out.row("towers", listed.len());
            for (i, c) in listed.iter().enumerate() {
                out.row(&format!("tower {}", i + 1), join(&c.orders, " > "));
            }
            let ok = listed.iter().all(|c| c.valid);
            out.csv(
                &["tower", "step", "order"],
                listed.iter().enumerate().flat_map(|(i, c)| {
                    c.orders
                        .iter()
                        .enumerate()
                        .map(move |(j, o)| vec![(i + 1).to_string(), j.to_string(), o.to_string()])
                }),
            );
            out.json(&serde_json::json!({ "prime": ell, "towers": listed }))?;
            Ok(Outcome::from_ok(ok))
        }
        GroupCmd::Allowable { g: arg, k, mode } => {
            let g = arg.load()?;
            let mode = EnumerationMode::from(*mode);
            let report = perm::check_deg_ind(&g, *k, mode)?;
            out.row("degree", report.degree);
            out.row("k", report.k);
            out.row("a(G)", report.a);
            out.row("lattice members", report.lattice_members);
            out.row("allowable", report.allowable);
            out.row("orbit actions checked", report.checked);
            out.row("deg/ind of G", format!("{}/{}", report.group_ratio.0, report.group_ratio.1));
            out.row("max deg/ind", format!("{}/{}", report.max_ratio.0, report.max_ratio.1));
            out.row("maximizers", report.maximizers);
            out.row("G^k attains the bound", report.full_product_equality);
            out.row("violations", report.violations.len());
            for w in report.violations.iter().take(5) {
                out.row("witness", format!("deg {} ind {} gens {}", w.deg, w.ind, join(&w.generators, " ")));
            }
            if out.global().csv.is_some() {
                let subs = match mode {
                    EnumerationMode::Literal => perm::allowable_subgroups(&g, *k)?,
                    EnumerationMode::UpToSymmetry => perm::allowable_subgroups_up_to_symmetry(&g, *k)?,
                };
                out.csv(
                    &["subgroup_order", "deg", "ind"],
                    subs.iter()
                        .map(|s| vec![s.subgroup_order.to_string(), s.deg().to_string(), s.ind.to_string()]),
                );
            }
            out.json(&report)?;
            Ok(Outcome::from_ok(report.passed()))
        }
    }
}

fn arith_gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { arith_gcd(b, a % b) }
}

use num_rational::Ratio;
use serde::Serialize;

use super::lattice::{LatticeSubgroup, ProductLattice};
use super::{PermError, PermGroup, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    /// Every subgroup of `G^k`.
    Literal,
    /// One subgroup per class under `N_{S_n}(G) ≀ S_k`.
    UpToSymmetry,
}

/// The action of an allowable `U ≤ G^k` on one of its orbits in `Ω^k`.
#[derive(Debug, Clone)]
pub struct AllowablePermSubgroup {
    pub parent_k: usize,
    /// `U` acting on all `n^k` points.
    pub subgroup: PermGroup,
    /// Points of `Ω^k`, numbered `x_1 + n (x_2 + n (…))`, sorted.
    pub orbit: Vec<usize>,
    /// `U` restricted to `orbit`, relabeled `0..|O|` in sorted order.
    pub action: PermGroup,
    /// `ind` of the orbit action.
    pub ind: usize,
    /// `|U|`, known without enumerating `subgroup`.
    pub subgroup_order: u64,
}

impl AllowablePermSubgroup {
    pub fn deg(&self) -> usize {
        self.orbit.len()
    }

    /// `deg(H) / ind(H)`.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.deg() as u64, self.ind as u64)
    }
}

/// Images of every point of `Ω^k` under every code of `G^k`.
struct PointAction {
    n: usize,
    points: usize,
    table: Vec<u16>,
}

impl PointAction {
    fn new(g: &PermGroup, lat: &ProductLattice) -> Result<Self, PermError> {
        let n = g.degree();
        let k = lat.power();
        let points = n.pow(k as u32);
        let elems = g.elements()?.as_slice();
        let mut table = vec![0u16; lat.size() * points];
        for c in 0..lat.size() {
            let row = &mut table[c * points..(c + 1) * points];
            for (x, slot) in row.iter_mut().enumerate() {
                let mut rest = x;
                let mut stride = 1;
                let mut y = 0;
                for i in 0..k {
                    let digit = rest % n;
                    rest /= n;
                    y += elems[lat.digit(c as u16, i)].image(digit) * stride;
                    stride *= n;
                }
                *slot = y as u16;
            }
        }
        Ok(Self { n, points, table })
    }

    #[inline]
    fn image(&self, code: u16, x: usize) -> usize {
        self.table[code as usize * self.points + x] as usize
    }

    fn permutation(&self, code: u16) -> Permutation {
        let row = &self.table[code as usize * self.points..(code as usize + 1) * self.points];
        Permutation::from_images_unchecked(row.iter().map(|&v| v as u32).collect())
    }
}

/// Orbits of `sub` and the `ind` of its action on each.
struct OrbitData {
    orbits: Vec<Vec<usize>>,
    ind: Vec<usize>,
}

fn analyse(lat: &ProductLattice, act: &PointAction, sub: &LatticeSubgroup) -> OrbitData {
    let mut orbit_of = vec![usize::MAX; act.points];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..act.points {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            i += 1;
            for &g in &sub.gens {
                let y = act.image(g, x);
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let mut ind = vec![usize::MAX; orbits.len()];
    let elems = sub.elements();
    let mut done = vec![false; lat.size()];
    let mut visited = vec![false; act.points];
    let mut cycles = vec![0usize; orbits.len()];
    let mut moved = vec![false; orbits.len()];
    for &u in elems.iter().skip(1) {
        if done[u as usize] {
            continue;
        }
        // all generators of <u> act with the same cycle structure
        let mut powers = vec![0u16, u];
        while *powers.last().expect("non-empty") != 0 {
            let next = lat.mul(*powers.last().expect("non-empty"), u);
            powers.push(next);
        }
        powers.pop();
        let ord = powers.len();
        for (j, &w) in powers.iter().enumerate() {
            if gcd(j, ord) == 1 {
                done[w as usize] = true;
            }
        }
        visited.iter_mut().for_each(|v| *v = false);
        cycles.iter_mut().for_each(|c| *c = 0);
        moved.iter_mut().for_each(|m| *m = false);
        for x in 0..act.points {
            if visited[x] {
                continue;
            }
            let o = orbit_of[x];
            cycles[o] += 1;
            let mut y = x;
            while !visited[y] {
                visited[y] = true;
                y = act.image(u, y);
            }
            if act.image(u, x) != x {
                moved[o] = true;
            }
        }
        for o in 0..orbits.len() {
            if moved[o] {
                ind[o] = ind[o].min(orbits[o].len() - cycles[o]);
            }
        }
    }
    OrbitData { orbits, ind }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn orbit_generators(act: &PointAction, sub: &LatticeSubgroup, orbit: &[usize]) -> Vec<Permutation> {
    let mut relabel = vec![u32::MAX; act.points];
    for (i, &x) in orbit.iter().enumerate() {
        relabel[x] = i as u32;
    }
    sub.gens
        .iter()
        .map(|&c| {
            Permutation::from_images_unchecked(
                orbit.iter().map(|&x| relabel[act.image(c, x)]).collect(),
            )
        })
        .collect()
}

fn materialize(
    g: &PermGroup,
    k: usize,
    act: &PointAction,
    sub: &LatticeSubgroup,
    data: OrbitData,
) -> Result<Vec<AllowablePermSubgroup>, PermError> {
    let caps = g.caps();
    let gens: Vec<Permutation> = sub.gens.iter().map(|&c| act.permutation(c)).collect();
    let whole = PermGroup::with_caps(act.points, gens, caps)?;
    let mut out = Vec::with_capacity(data.orbits.len());
    for (orbit, ind) in data.orbits.into_iter().zip(data.ind) {
        let action = PermGroup::with_caps(orbit.len(), orbit_generators(act, sub, &orbit), caps)?;
        debug_assert!(orbit.len() % act.n == 0);
        out.push(AllowablePermSubgroup {
            parent_k: k,
            subgroup: whole.clone(),
            orbit,
            action,
            ind,
            subgroup_order: sub.order as u64,
        });
    }
    Ok(out)
}

fn require_transitive(g: &PermGroup) -> Result<(), PermError> {
    if !g.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    if g.is_trivial() {
        return Err(PermError::TrivialGroup);
    }
    Ok(())
}

fn whole_group_entry(g: &PermGroup) -> Result<AllowablePermSubgroup, PermError> {
    let order = g.order()?;
    let cap = g.caps().max_lattice_order;
    if order > cap as u64 {
        return Err(PermError::LatticeCap { order, cap });
    }
    // surjectivity onto the single coordinate forces U = G
    Ok(AllowablePermSubgroup {
        parent_k: 1,
        subgroup: g.clone(),
        orbit: (0..g.degree()).collect(),
        action: g.clone(),
        ind: g.min_index()?,
        subgroup_order: order,
    })
}

/// Lattice, point action and the allowable members of the lattice, `k ≥ 2`.
struct Run {
    lat: ProductLattice,
    act: PointAction,
    lattice_members: usize,
    allowable: Vec<LatticeSubgroup>,
}

fn run(g: &PermGroup, k: usize, mode: EnumerationMode) -> Result<Run, PermError> {
    let lat = match mode {
        EnumerationMode::Literal => ProductLattice::new(g, k)?,
        EnumerationMode::UpToSymmetry => ProductLattice::with_symmetry(g, k)?,
    };
    let (subs, stats) = lat.enumerate(
        mode == EnumerationMode::UpToSymmetry,
        g.caps().max_lattice_members,
    )?;
    let act = PointAction::new(g, &lat)?;
    let allowable = subs.into_iter().filter(|s| lat.is_surjective(s)).collect();
    Ok(Run {
        lat,
        act,
        lattice_members: stats.total(),
        allowable,
    })
}

fn enumerate(
    g: &PermGroup,
    k: usize,
    mode: EnumerationMode,
) -> Result<Vec<AllowablePermSubgroup>, PermError> {
    require_transitive(g)?;
    match k {
        0 => Err(PermError::InvalidPermutation("k must be positive".into())),
        1 => Ok(vec![whole_group_entry(g)?]),
        _ => {
            let r = run(g, k, mode)?;
            let mut entries = Vec::new();
            for sub in &r.allowable {
                let data = analyse(&r.lat, &r.act, sub);
                entries.extend(materialize(g, k, &r.act, sub, data)?);
            }
            Ok(entries)
        }
    }
}

/// Every allowable permutation subgroup of `G^k`: one entry per orbit of
/// every `U ≤ G^k` whose coordinate projections are all onto `G`.
pub fn allowable_subgroups(g: &PermGroup, k: usize) -> Result<Vec<AllowablePermSubgroup>, PermError> {
    enumerate(g, k, EnumerationMode::Literal)
}

/// As [`allowable_subgroups`], keeping one `U` per class under
/// `N_{S_n}(G) ≀ S_k`. That group permutes `Ω^k`, so orbit actions of
/// conjugate subgroups are permutation isomorphic.
pub fn allowable_subgroups_up_to_symmetry(
    g: &PermGroup,
    k: usize,
) -> Result<Vec<AllowablePermSubgroup>, PermError> {
    enumerate(g, k, EnumerationMode::UpToSymmetry)
}

#[derive(Debug, Clone, Serialize)]
pub struct DegIndWitness {
    pub deg: usize,
    pub ind: usize,
    /// Generators of the orbit action, 1-based cycle notation.
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegIndReport {
    pub degree: usize,
    pub order: u64,
    pub k: usize,
    pub a: usize,
    pub mode: EnumerationMode,
    /// Subgroups (or classes) of `G^k` enumerated.
    pub lattice_members: usize,
    /// Allowable subgroups (or classes) among them.
    pub allowable: usize,
    /// Orbit actions checked.
    pub checked: usize,
    pub violations: Vec<DegIndWitness>,
    /// `(deg/ind)(G) = n / a(G)` as `(numerator, denominator)`.
    pub group_ratio: (u64, u64),
    pub max_ratio: (u64, u64),
    pub maximizers: usize,
    /// A few maximizers, smallest degree first.
    pub sample_maximizers: Vec<DegIndWitness>,
    /// `G^k` on all `n^k` points attains `n / a(G)`.
    pub full_product_equality: bool,
}

impl DegIndReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.full_product_equality
    }
}

fn pair(r: Ratio<u64>) -> (u64, u64) {
    (*r.numer(), *r.denom())
}

const SAMPLE: usize = 5;

/// Checks `deg(H)/ind(H) ≤ n/a(G)` exactly for every allowable permutation
/// subgroup `H` from `G^k`, and equality for `G^k` on all points. Orbit
/// actions are examined one subgroup at a time; only witnesses are kept.
pub fn check_deg_ind(
    g: &PermGroup,
    k: usize,
    mode: EnumerationMode,
) -> Result<DegIndReport, PermError> {
    require_transitive(g)?;
    let n = g.degree();
    let a = g.min_index()?;
    let order = g.order()?;
    let bound = Ratio::new(n as u64, a as u64);
    let mut report = DegIndReport {
        degree: n,
        order,
        k,
        a,
        mode,
        lattice_members: 0,
        allowable: 0,
        checked: 0,
        violations: Vec::new(),
        group_ratio: pair(bound),
        max_ratio: (0, 1),
        maximizers: 0,
        sample_maximizers: Vec::new(),
        full_product_equality: false,
    };
    let mut max_ratio = Ratio::new(0u64, 1);
    let mut record = |report: &mut DegIndReport,
                      deg: usize,
                      ind: usize,
                      full: bool,
                      gens: &dyn Fn() -> Vec<String>| {
        report.checked += 1;
        // deg(H) * a(G) <= n * ind(H), in integers
        if (deg as u64) * (a as u64) > (n as u64) * (ind as u64) {
            report.violations.push(DegIndWitness {
                deg,
                ind,
                generators: gens(),
            });
        }
        let r = Ratio::new(deg as u64, ind as u64);
        if r > max_ratio {
            max_ratio = r;
            report.maximizers = 0;
            report.sample_maximizers.clear();
        }
        if r == max_ratio {
            report.maximizers += 1;
            let samples = &mut report.sample_maximizers;
            if samples.len() < SAMPLE || samples.iter().any(|w| w.deg > deg) {
                samples.push(DegIndWitness {
                    deg,
                    ind,
                    generators: gens(),
                });
                samples.sort_by_key(|w| w.deg);
                samples.truncate(SAMPLE);
            }
        }
        if full {
            report.full_product_equality = ind == deg / n * a && r == bound;
        }
    };
    match k {
        0 => return Err(PermError::InvalidPermutation("k must be positive".into())),
        1 => {
            let h = whole_group_entry(g)?;
            report.allowable = 1;
            let strings = || h.action.generators().iter().map(ToString::to_string).collect();
            record(&mut report, h.deg(), h.ind, true, &strings);
        }
        _ => {
            let r = run(g, k, mode)?;
            report.lattice_members = r.lattice_members;
            report.allowable = r.allowable.len();
            let total_points = r.act.points;
            let full_order = r.lat.size();
            for sub in &r.allowable {
                let data = analyse(&r.lat, &r.act, sub);
                for (orbit, &ind) in data.orbits.iter().zip(&data.ind) {
                    let full = orbit.len() == total_points && sub.order == full_order;
                    let strings = || {
                        orbit_generators(&r.act, sub, orbit)
                            .iter()
                            .map(ToString::to_string)
                            .collect()
                    };
                    record(&mut report, orbit.len(), ind, full, &strings);
                }
            }
        }
    }
    report.max_ratio = pair(max_ratio);
    Ok(report)
}

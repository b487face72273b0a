//! Brute-force oracles, empirical Price-of-Anarchy reports and the table
//! of closed-form bounds they are audited against.
//!
//! Enumeration is exact and deterministic: two-color games stream the
//! `C(n, o)` minority placements in lexicographic order (partitioned by
//! combination rank across worker threads), games with more colors stream
//! multiset permutations sequentially. Reported witnesses are always the
//! lexicographically first attaining profile, independent of the number of
//! workers.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{ColoringStream, Locality};
use crate::equilibrium::is_equilibrium;
use crate::error::{Error, Result};
use crate::game::{social_welfare, Coloring, TypeVector};
use crate::graph::{make_cycle, make_grid, make_path, Graph, GridKind, GridMeta};
use crate::rational::Rational;

/// Empirical PoA value; `Infinity` means the worst equilibrium has welfare
/// zero, `NoEquilibrium` that the instance admits no equilibrium at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoaValue {
    Finite(Rational),
    Infinity,
    NoEquilibrium,
}

impl PoaValue {
    pub fn as_finite(&self) -> Option<Rational> {
        match self {
            PoaValue::Finite(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for PoaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoaValue::Finite(r) => write!(f, "{r}"),
            PoaValue::Infinity => write!(f, "inf"),
            PoaValue::NoEquilibrium => write!(f, "no-equilibrium"),
        }
    }
}

impl Serialize for PoaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PoaValue::Finite(r) => s.serialize_str(&format!("{}/{}", r.numerator(), r.denominator())),
            PoaValue::Infinity => s.serialize_str("inf"),
            PoaValue::NoEquilibrium => s.serialize_str("no-equilibrium"),
        }
    }
}

impl<'de> Deserialize<'de> for PoaValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<PoaValue, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "inf" => Ok(PoaValue::Infinity),
            "no-equilibrium" => Ok(PoaValue::NoEquilibrium),
            other => other
                .parse::<Rational>()
                .map(PoaValue::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Enumeration knobs. The budget counts utility evaluations: a welfare
/// scan charges `n` per coloring, an equilibrium scan `n^2`.
#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub jobs: usize,
    pub budget_evals: u128,
    /// Additionally count equilibria up to the grid's automorphisms
    /// (spatial symmetries only; counts, never extrema, depend on this).
    pub count_up_to_symmetry: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { jobs: 1, budget_evals: 100_000_000, count_up_to_symmetry: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoAReport {
    pub locality: Locality,
    pub n: usize,
    pub type_counts: Vec<usize>,
    pub opt_welfare: Rational,
    pub opt_witness: Coloring,
    pub worst_eq_welfare: Option<Rational>,
    pub worst_eq_witness: Option<Coloring>,
    pub best_eq_welfare: Option<Rational>,
    pub equilibrium_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equilibrium_count_up_to_symmetry: Option<u64>,
    pub poa: PoaValue,
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic combination of the given rank.
fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut x = 0;
    let mut remaining = k;
    while remaining > 0 {
        let with_x = binom(n - x - 1, remaining - 1);
        if rank < with_x {
            out.push(x);
            remaining -= 1;
        } else {
            rank -= with_x;
        }
        x += 1;
    }
    out
}

/// Advances sorted indices to the next combination; false after the last.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Spatial automorphisms of the grid as vertex permutations: the identity,
/// the two axis flips and the half turn, plus the four transpositions on
/// square grids.
pub fn grid_automorphisms(meta: &GridMeta) -> Vec<Vec<usize>> {
    type CellMap = Box<dyn Fn(usize, usize) -> (usize, usize)>;
    let (rows, cols) = (meta.rows, meta.cols);
    let mut maps: Vec<CellMap> = vec![
        Box::new(|r, c| (r, c)),
        Box::new(move |r, c| (rows - 1 - r, c)),
        Box::new(move |r, c| (r, cols - 1 - c)),
        Box::new(move |r, c| (rows - 1 - r, cols - 1 - c)),
    ];
    if rows == cols {
        maps.push(Box::new(|r, c| (c, r)));
        maps.push(Box::new(move |r, c| (cols - 1 - c, r)));
        maps.push(Box::new(move |r, c| (c, rows - 1 - r)));
        maps.push(Box::new(move |r, c| (cols - 1 - c, rows - 1 - r)));
    }
    maps.iter()
        .map(|f| {
            (0..rows * cols)
                .map(|v| {
                    let (r, c) = (v / cols, v % cols);
                    let (rr, cc) = f(r, c);
                    rr * cols + cc
                })
                .collect()
        })
        .collect()
}

fn canonical_under(colors: &[u8], autos: &[Vec<usize>]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for perm in autos {
        let image: Vec<u8> = (0..colors.len()).map(|v| colors[perm[v]]).collect();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap()
}

struct ScanAggregate {
    // (welfare, rank, coloring) triples; min rank breaks ties
    opt: Option<(Rational, u128, Coloring)>,
    worst_eq: Option<(Rational, u128, Coloring)>,
    best_eq: Option<(Rational, u128, Coloring)>,
    eq_count: u64,
    canonicals: HashSet<Vec<u8>>,
}

impl ScanAggregate {
    fn new() -> Self {
        ScanAggregate {
            opt: None,
            worst_eq: None,
            best_eq: None,
            eq_count: 0,
            canonicals: HashSet::new(),
        }
    }

    fn see(
        &mut self,
        g: &Graph,
        coloring: &Coloring,
        rank: u128,
        locality: Locality,
        autos: Option<&[Vec<usize>]>,
    ) {
        let welfare = social_welfare(g, coloring);
        take_max(&mut self.opt, welfare, rank, coloring);
        if is_equilibrium(g, coloring, locality).is_equilibrium {
            self.eq_count += 1;
            take_min(&mut self.worst_eq, welfare, rank, coloring);
            take_max(&mut self.best_eq, welfare, rank, coloring);
            if let Some(autos) = autos {
                self.canonicals.insert(canonical_under(coloring.as_slice(), autos));
            }
        }
    }

    fn merge(mut self, other: ScanAggregate) -> ScanAggregate {
        merge_max(&mut self.opt, other.opt);
        merge_min(&mut self.worst_eq, other.worst_eq);
        merge_max(&mut self.best_eq, other.best_eq);
        self.eq_count += other.eq_count;
        self.canonicals.extend(other.canonicals);
        self
    }
}

fn take_max(slot: &mut Option<(Rational, u128, Coloring)>, w: Rational, rank: u128, c: &Coloring) {
    let better = match slot {
        None => true,
        Some((bw, br, _)) => w > *bw || (w == *bw && rank < *br),
    };
    if better {
        *slot = Some((w, rank, c.clone()));
    }
}

fn take_min(slot: &mut Option<(Rational, u128, Coloring)>, w: Rational, rank: u128, c: &Coloring) {
    let better = match slot {
        None => true,
        Some((bw, br, _)) => w < *bw || (w == *bw && rank < *br),
    };
    if better {
        *slot = Some((w, rank, c.clone()));
    }
}

fn merge_max(into: &mut Option<(Rational, u128, Coloring)>, from: Option<(Rational, u128, Coloring)>) {
    if let Some((w, r, c)) = from {
        take_max(into, w, r, &c);
    }
}

fn merge_min(into: &mut Option<(Rational, u128, Coloring)>, from: Option<(Rational, u128, Coloring)>) {
    if let Some((w, r, c)) = from {
        take_min(into, w, r, &c);
    }
}

/// Runs `aggregate.see` over every coloring with the given type counts.
/// Two-color games are rank-partitioned across `opts.jobs` threads.
fn scan_colorings(
    g: &Graph,
    t: &TypeVector,
    locality: Locality,
    opts: &ScanOptions,
    cost_per_coloring: u128,
) -> Result<ScanAggregate> {
    let n = g.n();
    if t.total() != n {
        return Err(Error::TypeMismatch);
    }
    let autos = if opts.count_up_to_symmetry {
        g.grid_meta().map(grid_automorphisms)
    } else {
        None
    };

    if t.k() == 2 {
        let o = t.counts()[0];
        let total = binom(n, o);
        if total.saturating_mul(cost_per_coloring) > opts.budget_evals {
            return Err(Error::BudgetExceeded(format!(
                "{total} colorings x {cost_per_coloring} evaluations"
            )));
        }
        let jobs = opts.jobs.max(1).min(usize::try_from(total).unwrap_or(usize::MAX).max(1));
        let chunk = total / jobs as u128;
        let autos_ref = autos.as_deref();
        let results: Vec<ScanAggregate> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for j in 0..jobs as u128 {
                let start = j * chunk;
                let end = if j + 1 == jobs as u128 { total } else { (j + 1) * chunk };
                handles.push(scope.spawn(move || {
                    let mut agg = ScanAggregate::new();
                    if start >= end {
                        return agg;
                    }
                    let mut idx = unrank_combination(n, o, start);
                    let mut rank = start;
                    loop {
                        let coloring = Coloring::from_color0_positions(n, &idx);
                        agg.see(g, &coloring, rank, locality, autos_ref);
                        rank += 1;
                        if rank >= end || !next_combination(&mut idx, n) {
                            break;
                        }
                    }
                    agg
                }));
            }
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        });
        let mut merged = ScanAggregate::new();
        for r in results {
            merged = merged.merge(r);
        }
        Ok(merged)
    } else {
        let mut count: u128 = 1;
        let mut rest = n;
        for &c in t.counts() {
            count = count.saturating_mul(binom(rest, c));
            rest -= c;
        }
        if count.saturating_mul(cost_per_coloring) > opts.budget_evals {
            return Err(Error::BudgetExceeded(format!(
                "{count} colorings x {cost_per_coloring} evaluations"
            )));
        }
        let mut agg = ScanAggregate::new();
        let mut stream = ColoringStream::new(t);
        let mut rank: u128 = 0;
        while let Some(coloring) = stream.next_coloring() {
            agg.see(g, &coloring, rank, locality, autos.as_deref());
            rank += 1;
        }
        Ok(agg)
    }
}

/// Exact maximum social welfare and one maximizer (deterministic: the
/// lexicographically first one).
pub fn brute_force_optimum(g: &Graph, t: &TypeVector, opts: &ScanOptions) -> Result<(Rational, Coloring)> {
    // welfare-only pass, kept separate from the equilibrium scan so the
    // two can cross-check each other
    let n = g.n() as u128;
    let mut scan_opts = *opts;
    scan_opts.count_up_to_symmetry = false;
    let agg = scan_welfare_only(g, t, &scan_opts, n)?;
    let (w, _, c) = agg.expect("at least one coloring exists");
    Ok((w, c))
}

fn scan_welfare_only(
    g: &Graph,
    t: &TypeVector,
    opts: &ScanOptions,
    cost_per_coloring: u128,
) -> Result<Option<(Rational, u128, Coloring)>> {
    let n = g.n();
    if t.total() != n {
        return Err(Error::TypeMismatch);
    }
    if t.k() == 2 {
        let o = t.counts()[0];
        let total = binom(n, o);
        if total.saturating_mul(cost_per_coloring) > opts.budget_evals {
            return Err(Error::BudgetExceeded(format!(
                "{total} colorings x {cost_per_coloring} evaluations"
            )));
        }
        let jobs = opts.jobs.max(1).min(usize::try_from(total).unwrap_or(usize::MAX).max(1));
        let chunk = total / jobs as u128;
        let results: Vec<Option<(Rational, u128, Coloring)>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for j in 0..jobs as u128 {
                let start = j * chunk;
                let end = if j + 1 == jobs as u128 { total } else { (j + 1) * chunk };
                handles.push(scope.spawn(move || {
                    let mut best: Option<(Rational, u128, Coloring)> = None;
                    if start >= end {
                        return best;
                    }
                    let mut idx = unrank_combination(n, o, start);
                    let mut rank = start;
                    loop {
                        let coloring = Coloring::from_color0_positions(n, &idx);
                        let w = social_welfare(g, &coloring);
                        take_max(&mut best, w, rank, &coloring);
                        rank += 1;
                        if rank >= end || !next_combination(&mut idx, n) {
                            break;
                        }
                    }
                    best
                }));
            }
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        });
        let mut merged = None;
        for r in results {
            merge_max(&mut merged, r);
        }
        Ok(merged)
    } else {
        let mut stream = ColoringStream::new(t);
        let mut best = None;
        let mut rank: u128 = 0;
        while let Some(coloring) = stream.next_coloring() {
            let w = social_welfare(g, &coloring);
            take_max(&mut best, w, rank, &coloring);
            rank += 1;
        }
        Ok(best)
    }
}

/// Visits every coloring, classifies it with the equilibrium predicate and
/// aggregates the optimum, the equilibrium extremes and the count.
pub fn enumerate_equilibria(
    g: &Graph,
    t: &TypeVector,
    locality: Locality,
    opts: &ScanOptions,
) -> Result<PoAReport> {
    let cost = (g.n() as u128).pow(2);
    let agg = scan_colorings(g, t, locality, opts, cost)?;
    let (opt_welfare, _, opt_witness) = agg.opt.clone().expect("at least one coloring");
    let poa = match &agg.worst_eq {
        None => PoaValue::NoEquilibrium,
        Some((w, _, _)) if w.is_zero() => PoaValue::Infinity,
        Some((w, _, _)) => PoaValue::Finite(opt_welfare / *w),
    };
    Ok(PoAReport {
        locality,
        n: g.n(),
        type_counts: t.counts().to_vec(),
        opt_welfare,
        opt_witness,
        worst_eq_welfare: agg.worst_eq.as_ref().map(|(w, _, _)| *w),
        worst_eq_witness: agg.worst_eq.map(|(_, _, c)| c),
        best_eq_welfare: agg.best_eq.as_ref().map(|(w, _, _)| *w),
        equilibrium_count: agg.eq_count,
        equilibrium_count_up_to_symmetry: if opts.count_up_to_symmetry {
            Some(agg.canonicals.len() as u64)
        } else {
            None
        },
        poa,
    })
}

/// Full empirical report: equilibrium enumeration cross-checked against the
/// independent welfare-only optimum scan.
pub fn empirical_poa(
    g: &Graph,
    t: &TypeVector,
    locality: Locality,
    opts: &ScanOptions,
) -> Result<PoAReport> {
    let report = enumerate_equilibria(g, t, locality, opts)?;
    let (opt, _) = brute_force_optimum(g, t, opts)?;
    assert_eq!(
        report.opt_welfare, opt,
        "optimum from the equilibrium scan disagrees with the welfare-only scan"
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Closed-form bound table
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
    Interval,
}

/// One closed-form bound instantiated with concrete parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundSpec {
    pub family: String,
    pub kind: BoundKind,
    /// Lower end (set for `Exact`, `Lower`, `Interval`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub low: Option<PoaValue>,
    /// Upper end (set for `Exact`, `Upper`, `Interval`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high: Option<PoaValue>,
    pub locality: Locality,
    /// What the bound states, in words.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundSpec {
    fn exact(family: &str, v: PoaValue, locality: Locality, source: &str) -> BoundSpec {
        BoundSpec {
            family: family.into(),
            kind: BoundKind::Exact,
            low: Some(v),
            high: Some(v),
            locality,
            source: source.into(),
            note: None,
        }
    }

    fn upper(family: &str, v: PoaValue, locality: Locality, source: &str) -> BoundSpec {
        BoundSpec {
            family: family.into(),
            kind: BoundKind::Upper,
            low: None,
            high: Some(v),
            locality,
            source: source.into(),
            note: None,
        }
    }

    fn interval(family: &str, lo: PoaValue, hi: PoaValue, locality: Locality, source: &str) -> BoundSpec {
        BoundSpec {
            family: family.into(),
            kind: BoundKind::Interval,
            low: Some(lo),
            high: Some(hi),
            locality,
            source: source.into(),
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> BoundSpec {
        self.note = Some(note.into());
        self
    }

    /// Does an empirical PoA respect this bound? `Exact` demands equality,
    /// `Upper`/`Lower` dominance, `Interval` containment of the class value
    /// (checked one-sidedly per end when the other end is absent).
    pub fn admits(&self, poa: &PoaValue) -> bool {
        let leq = |a: &PoaValue, b: &PoaValue| match (a, b) {
            (PoaValue::Finite(x), PoaValue::Finite(y)) => x <= y,
            (_, PoaValue::Infinity) => true,
            (PoaValue::Infinity, PoaValue::Finite(_)) => false,
            _ => false,
        };
        if matches!(poa, PoaValue::NoEquilibrium) {
            return false;
        }
        match self.kind {
            BoundKind::Exact => {
                self.low.as_ref() == Some(poa) && self.high.as_ref() == Some(poa)
            }
            BoundKind::Upper => self.high.as_ref().map(|h| leq(poa, h)).unwrap_or(false),
            BoundKind::Lower => self.low.as_ref().map(|l| leq(l, poa)).unwrap_or(false),
            BoundKind::Interval => {
                self.low.as_ref().map(|l| leq(l, poa)).unwrap_or(true)
                    && self.high.as_ref().map(|h| leq(poa, h)).unwrap_or(true)
            }
        }
    }
}

/// Bound families the table knows, named by graph class and swap locality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundFamily {
    CycleGlobal,
    CycleLocal,
    PathGlobal,
    PathLocal,
    GeneralGlobal,
    BalancedGlobal,
    BalancedLocal,
    MinMaxDegreeLocal,
    BoundedMaxDegreeLocal,
    RegularLocal,
    Grid4SingleGlobal,
    Grid4Global,
    Grid4TwoRowsLocal,
    Grid4ThreeRowsLocal,
    Grid4LargeLocal,
    Grid8SingleGlobal,
    Grid8Global,
    Grid8LargeLocal,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 18] = [
        BoundFamily::CycleGlobal,
        BoundFamily::CycleLocal,
        BoundFamily::PathGlobal,
        BoundFamily::PathLocal,
        BoundFamily::GeneralGlobal,
        BoundFamily::BalancedGlobal,
        BoundFamily::BalancedLocal,
        BoundFamily::MinMaxDegreeLocal,
        BoundFamily::BoundedMaxDegreeLocal,
        BoundFamily::RegularLocal,
        BoundFamily::Grid4SingleGlobal,
        BoundFamily::Grid4Global,
        BoundFamily::Grid4TwoRowsLocal,
        BoundFamily::Grid4ThreeRowsLocal,
        BoundFamily::Grid4LargeLocal,
        BoundFamily::Grid8SingleGlobal,
        BoundFamily::Grid8Global,
        BoundFamily::Grid8LargeLocal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::CycleGlobal => "cycle-global",
            BoundFamily::CycleLocal => "cycle-local",
            BoundFamily::PathGlobal => "path-global",
            BoundFamily::PathLocal => "path-local",
            BoundFamily::GeneralGlobal => "general-global",
            BoundFamily::BalancedGlobal => "balanced-global",
            BoundFamily::BalancedLocal => "balanced-local",
            BoundFamily::MinMaxDegreeLocal => "min-max-degree-local",
            BoundFamily::BoundedMaxDegreeLocal => "bounded-degree-local",
            BoundFamily::RegularLocal => "regular-local",
            BoundFamily::Grid4SingleGlobal => "grid4-single",
            BoundFamily::Grid4Global => "grid4-global",
            BoundFamily::Grid4TwoRowsLocal => "grid4-2xh-local",
            BoundFamily::Grid4ThreeRowsLocal => "grid4-3xh-local",
            BoundFamily::Grid4LargeLocal => "grid4-lxh-local",
            BoundFamily::Grid8SingleGlobal => "grid8-single",
            BoundFamily::Grid8Global => "grid8-global",
            BoundFamily::Grid8LargeLocal => "grid8-local",
        }
    }
}

impl FromStr for BoundFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<BoundFamily> {
        BoundFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.into()))
    }
}

/// Parameters for [`theoretical_bound`]; each family reads the subset it
/// needs and rejects requests with the relevant ones missing.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundParams {
    pub n: Option<usize>,
    pub o: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub max_degree: Option<usize>,
    pub min_degree: Option<usize>,
    pub epsilon: Option<Rational>,
}

fn need<T: Copy>(v: Option<T>, what: &'static str) -> Result<T> {
    v.ok_or(Error::MissingParam(what))
}

fn fin(n: i64, d: i64) -> PoaValue {
    PoaValue::Finite(Rational::new(n, d))
}

/// Instantiates a closed-form bound for concrete parameters. Conventions:
/// `o` is the minority count, `alpha/beta` split `o = 2a + b` for global
/// path/cycle forms and `n = 3a + b` for their local forms, and degree
/// parameters name the instance's extreme degrees.
pub fn theoretical_bound(family: BoundFamily, params: &BoundParams) -> Result<BoundSpec> {
    use BoundFamily::*;
    let spec = match family {
        CycleGlobal => {
            let n = need(params.n, "n")? as i64;
            let o = need(params.o, "o")? as i64;
            if o < 1 || 2 * o > n {
                return Err(Error::InvalidParameter("cycle bound needs 1 <= o <= n/2".into()));
            }
            let v = if o == 1 {
                fin(1, 1)
            } else {
                let beta = o % 2;
                fin(n - 2, n - o + beta)
            };
            BoundSpec::exact("cycle-global", v, Locality::Global, "tight PoA formula for cycles under global swaps")
        }
        CycleLocal => {
            let n = need(params.n, "n")? as i64;
            let o = need(params.o, "o")? as i64;
            if o < 1 || 2 * o > n {
                return Err(Error::InvalidParameter("cycle bound needs 1 <= o <= n/2".into()));
            }
            let b = n - o;
            if o == 1 {
                BoundSpec::exact("cycle-local", fin(1, 1), Locality::Local, "tight local PoA for cycles with a singleton minority")
            } else if b >= 2 * o {
                BoundSpec::exact("cycle-local", fin(n - 2, b - o), Locality::Local, "tight local PoA for cycles with a dominant majority")
            } else {
                let alpha = n / 3;
                let beta = n % 3;
                BoundSpec::upper("cycle-local", fin(n - 2, alpha + beta), Locality::Local, "local PoA upper bound for cycles (tightness open in this regime)")
            }
        }
        PathGlobal => {
            let n = need(params.n, "n")? as i64;
            let o = need(params.o, "o")? as i64;
            if o < 1 || 2 * o > n {
                return Err(Error::InvalidParameter("path bound needs 1 <= o <= n/2".into()));
            }
            if n == 3 {
                return Ok(BoundSpec::exact("path-global", PoaValue::Infinity, Locality::Global, "three-vertex path: the minority can be stranded at welfare zero"));
            }
            if o == 1 {
                return Ok(BoundSpec::exact(
                    "path-global",
                    fin(2 * n - 3, 2 * n - 5),
                    Locality::Global,
                    "tight PoA for paths with a singleton minority",
                )
                .with_note("corrected numerator: the optimum with a singleton minority is n - 3/2 (the single agent at a path end still forfeits 3/2), so the ratio is (2n-3)/(2n-5), not the commonly printed (2n-2)/(2n-5)"));
            }
            let alpha = o / 2;
            let beta = o % 2;
            let b = n - o;
            let v = if b <= 2 * alpha + 1 {
                fin(n - 1, b + 1 + beta)
            } else {
                fin(n - 1, b + beta)
            };
            BoundSpec::exact("path-global", v, Locality::Global, "tight PoA formula for paths under global swaps")
        }
        PathLocal => {
            let n = need(params.n, "n")? as i64;
            let o = need(params.o, "o")? as i64;
            if o < 1 || 2 * o > n {
                return Err(Error::InvalidParameter("path bound needs 1 <= o <= n/2".into()));
            }
            if n == 3 {
                return Ok(BoundSpec::exact("path-local", PoaValue::Infinity, Locality::Local, "three-vertex path: the minority can be stranded at welfare zero"));
            }
            if o == 1 {
                return Ok(BoundSpec::exact(
                    "path-local",
                    fin(2 * n - 3, 2 * n - 5),
                    Locality::Local,
                    "tight local PoA for paths with a singleton minority",
                )
                .with_note("corrected numerator, as in the global case: the optimum is n - 3/2"));
            }
            let b = n - o;
            if b >= 2 * o {
                BoundSpec::exact("path-local", fin(n - 1, b - o - 1), Locality::Local, "tight local PoA for paths with a dominant majority")
            } else {
                let alpha = n / 3;
                BoundSpec::upper("path-local", fin(n - 1, alpha), Locality::Local, "local PoA upper bound for paths (tightness open in this regime)")
            }
        }
        GeneralGlobal => {
            let n = need(params.n, "n")? as i64;
            let o = need(params.o, "o")? as i64;
            if o < 2 || 2 * o > n {
                return Err(Error::InvalidParameter("general bound needs 2 <= o <= n/2".into()));
            }
            let b = n - o;
            BoundSpec::upper(
                "general-global",
                fin(n * o * b - n, o * (o - 1) * b),
                Locality::Global,
                "global PoA upper bound for any connected graph with at least two minority agents",
            )
        }
        BalancedGlobal => {
            let n = need(params.n, "n")? as i64;
            if n < 2 || n % 2 != 0 {
                return Err(Error::InvalidParameter("balanced bound needs even n >= 2".into()));
            }
            let v = Rational::from_int(3).min(Rational::new(2 * (n + 2), n));
            BoundSpec::upper("balanced-global", PoaValue::Finite(v), Locality::Global, "global PoA upper bound for balanced games: min of 3 and 2(n+2)/n")
        }
        BalancedLocal => {
            let n = need(params.n, "n")? as i64;
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidParameter("balanced local bound needs even n >= 4".into()));
            }
            BoundSpec::interval(
                "balanced-local",
                fin(2 * n * n - 8 * n + 8, n),
                fin(2 * n * n - 8, n),
                Locality::Local,
                "local PoA window for balanced games: between 2n + 8/n - 8 and 2n - 8/n",
            )
        }
        MinMaxDegreeLocal => {
            let dmax = need(params.max_degree, "max_degree")? as i64;
            let dmin = need(params.min_degree, "min_degree")? as i64;
            if dmin < 2 {
                return Err(Error::InvalidParameter("degree-window bound needs minimum degree >= 2".into()));
            }
            BoundSpec::upper(
                "min-max-degree-local",
                fin(2 * (dmin + dmax), dmin - 1),
                Locality::Local,
                "local PoA upper bound 2(dmin+dmax)/(dmin-1) for minimum degree at least two",
            )
            .with_note("equals 2(1 + (dmax+1)/(dmin-1)); a circulating variant printing (dmax-1) in place of (dmax+1) understates the proved bound")
        }
        BoundedMaxDegreeLocal => {
            let d = need(params.max_degree, "max_degree")? as i64;
            let eps = need(params.epsilon, "epsilon")?;
            if d < 2 {
                return Err(Error::InvalidParameter("bounded-degree bound needs max degree >= 2".into()));
            }
            let low = Rational::new(d * (d - 1), 2) - eps;
            BoundSpec::interval(
                "bounded-degree-local",
                PoaValue::Finite(low),
                fin(4 * (d * d - d + 1), 1),
                Locality::Local,
                "local PoA window for max degree at most n-2: between d(d-1)/2 - eps and 4(d^2-d+1)",
            )
        }
        RegularLocal => {
            let d = need(params.max_degree, "max_degree")? as i64;
            if d < 2 {
                return Err(Error::InvalidParameter("regular bound needs degree >= 2".into()));
            }
            let alpha = d / 2;
            BoundSpec::exact(
                "regular-local",
                fin(2 * alpha + 1, alpha),
                Locality::Local,
                "tight local PoA 2 + 1/alpha for regular graphs of degree 2*alpha + beta",
            )
        }
        Grid4SingleGlobal => {
            let rows = need(params.rows, "rows")?;
            let cols = need(params.cols, "cols")?;
            if rows.min(cols) < 2 {
                return Err(Error::InvalidParameter("grid bound needs both sides >= 2".into()));
            }
            let v = fin(25, 22);
            if (rows.min(cols), rows.max(cols)) == (2, 3) {
                BoundSpec::exact("grid4-single", v, Locality::Global, "tight PoA for 4-grids with a singleton minority; the 2x3 grid attains it")
            } else {
                BoundSpec::upper("grid4-single", v, Locality::Global, "PoA upper bound for 4-grids with a singleton minority; attained only on the 2x3 grid")
            }
        }
        Grid4Global => {
            let o = need(params.o, "o")?;
            if o < 2 {
                return Err(Error::InvalidParameter("this bound needs at least two agents per type".into()));
            }
            BoundSpec::upper("grid4-global", fin(2, 1), Locality::Global, "global PoA on 4-grids is at most 2 when both types have at least two agents")
        }
        Grid4TwoRowsLocal => {
            let h = need(params.cols, "cols")?;
            if h < 3 {
                return Err(Error::InvalidParameter("two-row grid bound needs h >= 3".into()));
            }
            BoundSpec::upper("grid4-2xh-local", fin(3, 1), Locality::Local, "local PoA on 2 x h 4-grids is 3 for the class; a finite h realizes at least 3 - 5/(h+1)")
        }
        Grid4ThreeRowsLocal => {
            let h = need(params.cols, "cols")?;
            if h < 3 {
                return Err(Error::InvalidParameter("three-row grid bound needs h >= 3".into()));
            }
            BoundSpec::upper("grid4-3xh-local", fin(36, 13), Locality::Local, "local PoA on 3 x h 4-grids is 36/13 for the class")
        }
        Grid4LargeLocal => {
            let eps = need(params.epsilon, "epsilon")?;
            let half5 = Rational::new(5, 2);
            BoundSpec::interval(
                "grid4-lxh-local",
                PoaValue::Finite(half5 - eps),
                PoaValue::Finite(half5 + eps),
                Locality::Local,
                "local PoA on l x h 4-grids with both sides at least 8 + 20/eps lies in (5/2 - eps, 5/2 + eps]",
            )
        }
        Grid8SingleGlobal => {
            let rows = need(params.rows, "rows")?;
            let cols = need(params.cols, "cols")?;
            if rows.min(cols) < 2 {
                return Err(Error::InvalidParameter("grid bound needs both sides >= 2".into()));
            }
            let v = fin(897, 704);
            if (rows, cols) == (3, 3) {
                BoundSpec::exact("grid8-single", v, Locality::Global, "tight PoA for 8-grids with a singleton minority; the 3x3 grid attains it")
            } else {
                BoundSpec::upper("grid8-single", v, Locality::Global, "PoA upper bound for 8-grids with a singleton minority; attained only on the 3x3 grid")
            }
        }
        Grid8Global => {
            let o = need(params.o, "o")?;
            if o < 2 {
                return Err(Error::InvalidParameter("this bound needs at least two agents per type".into()));
            }
            BoundSpec::upper("grid8-global", fin(8, 1), Locality::Global, "global PoA on 8-grids is at most 8 when both types have at least two agents")
        }
        Grid8LargeLocal => {
            let eps = need(params.epsilon, "epsilon")?;
            let v = Rational::new(9, 4) + eps;
            BoundSpec::upper(
                "grid8-local",
                PoaValue::Finite(v),
                Locality::Local,
                "local PoA on l x h 8-grids with both sides at least 8 + 18/eps is at most 9/4 + eps",
            )
        }
    };
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Bound audits
// ---------------------------------------------------------------------------

/// Instance families the audit can construct and enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditInstance {
    Cycle { n: usize, o: usize },
    Path { n: usize, o: usize },
    Grid4 { rows: usize, cols: usize, o: usize },
    Grid8 { rows: usize, cols: usize, o: usize },
}

impl AuditInstance {
    pub fn describe(&self) -> String {
        match self {
            AuditInstance::Cycle { n, o } => format!("cycle n={n} o={o}"),
            AuditInstance::Path { n, o } => format!("path n={n} o={o}"),
            AuditInstance::Grid4 { rows, cols, o } => format!("grid4 {rows}x{cols} o={o}"),
            AuditInstance::Grid8 { rows, cols, o } => format!("grid8 {rows}x{cols} o={o}"),
        }
    }

    pub fn build(&self) -> Result<(Graph, TypeVector)> {
        match *self {
            AuditInstance::Cycle { n, o } => Ok((make_cycle(n)?, TypeVector::two(o, n - o)?)),
            AuditInstance::Path { n, o } => Ok((make_path(n)?, TypeVector::two(o, n - o)?)),
            AuditInstance::Grid4 { rows, cols, o } => Ok((
                make_grid(rows, cols, GridKind::Four)?,
                TypeVector::two(o, rows * cols - o)?,
            )),
            AuditInstance::Grid8 { rows, cols, o } => Ok((
                make_grid(rows, cols, GridKind::Eight)?,
                TypeVector::two(o, rows * cols - o)?,
            )),
        }
    }

    /// Every closed-form bound that applies to this instance under the
    /// given locality.
    pub fn applicable_bounds(&self, locality: Locality) -> Result<Vec<BoundSpec>> {
        let mut bounds = Vec::new();
        let (n, o) = match *self {
            AuditInstance::Cycle { n, o } | AuditInstance::Path { n, o } => (n, o),
            AuditInstance::Grid4 { rows, cols, o } | AuditInstance::Grid8 { rows, cols, o } => {
                (rows * cols, o)
            }
        };
        let p = BoundParams { n: Some(n), o: Some(o), ..Default::default() };
        match (*self, locality) {
            (AuditInstance::Cycle { .. }, Locality::Global) => {
                bounds.push(theoretical_bound(BoundFamily::CycleGlobal, &p)?);
                // cycles are regular; the local tight value upper-bounds the
                // global one as well but is audited in the local pass
            }
            (AuditInstance::Cycle { .. }, Locality::Local) => {
                bounds.push(theoretical_bound(BoundFamily::CycleLocal, &p)?);
                // the regular-graph value 2 + 1/alpha is tight for the
                // class, not per instance; audit it as a cap
                let mut reg = theoretical_bound(
                    BoundFamily::RegularLocal,
                    &BoundParams { max_degree: Some(2), ..Default::default() },
                )?;
                reg.kind = BoundKind::Upper;
                reg.low = None;
                bounds.push(reg);
            }
            (AuditInstance::Path { .. }, Locality::Global) => {
                bounds.push(theoretical_bound(BoundFamily::PathGlobal, &p)?);
            }
            (AuditInstance::Path { .. }, Locality::Local) => {
                bounds.push(theoretical_bound(BoundFamily::PathLocal, &p)?);
            }
            (AuditInstance::Grid4 { rows, cols, o }, Locality::Global) => {
                let gp = BoundParams {
                    rows: Some(rows),
                    cols: Some(cols),
                    o: Some(o),
                    ..Default::default()
                };
                if rows.min(cols) >= 2 {
                    if o == 1 {
                        bounds.push(theoretical_bound(BoundFamily::Grid4SingleGlobal, &gp)?);
                    } else {
                        bounds.push(theoretical_bound(BoundFamily::Grid4Global, &gp)?);
                    }
                }
            }
            (AuditInstance::Grid8 { rows, cols, o }, Locality::Global) => {
                let gp = BoundParams {
                    rows: Some(rows),
                    cols: Some(cols),
                    o: Some(o),
                    ..Default::default()
                };
                if rows.min(cols) >= 2 {
                    if o == 1 {
                        bounds.push(theoretical_bound(BoundFamily::Grid8SingleGlobal, &gp)?);
                    } else {
                        bounds.push(theoretical_bound(BoundFamily::Grid8Global, &gp)?);
                    }
                }
            }
            _ => {}
        }
        // generic global bounds
        if locality == Locality::Global && o >= 2 {
            bounds.push(theoretical_bound(BoundFamily::GeneralGlobal, &p)?);
            if 2 * o == n {
                bounds.push(theoretical_bound(BoundFamily::BalancedGlobal, &p)?);
            }
        }
        Ok(bounds)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditRow {
    pub instance: String,
    pub locality: Locality,
    pub poa: PoaValue,
    pub bounds: Vec<(BoundSpec, bool)>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditTable {
    pub rows: Vec<AuditRow>,
    pub all_pass: bool,
}

/// Audits each instance's empirical PoA against every applicable bound.
/// Budget errors are recorded per row and the grid continues.
pub fn bound_audit(cases: &[AuditInstance], locality: Locality, opts: &ScanOptions) -> AuditTable {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for case in cases {
        let row = match audit_one(case, locality, opts) {
            Ok(row) => row,
            Err(e) => AuditRow {
                instance: case.describe(),
                locality,
                poa: PoaValue::NoEquilibrium,
                bounds: Vec::new(),
                pass: false,
                error: Some(e.to_string()),
            },
        };
        all_pass &= row.pass;
        rows.push(row);
    }
    AuditTable { rows, all_pass }
}

fn audit_one(case: &AuditInstance, locality: Locality, opts: &ScanOptions) -> Result<AuditRow> {
    let (g, t) = case.build()?;
    let report = empirical_poa(&g, &t, locality, opts)?;
    let bounds = case.applicable_bounds(locality)?;
    let checks: Vec<(BoundSpec, bool)> = bounds
        .into_iter()
        .map(|b| {
            let ok = b.admits(&report.poa);
            (b, ok)
        })
        .collect();
    let pass = checks.iter().all(|(_, ok)| *ok);
    Ok(AuditRow {
        instance: case.describe(),
        locality,
        poa: report.poa,
        bounds: checks,
        pass,
        error: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_grid;

    #[test]
    fn combinations_unrank_and_step_agree() {
        let n = 7;
        let k = 3;
        let total = binom(n, k);
        let mut idx = unrank_combination(n, k, 0);
        for rank in 0..total {
            assert_eq!(idx, unrank_combination(n, k, rank), "rank {rank}");
            next_combination(&mut idx, n);
        }
        assert_eq!(binom(14, 7), 3432);
    }

    #[test]
    fn optimum_on_tiny_grid() {
        // 2x2 4-grid with two of each color: the optimum pairs the colors
        // on opposite sides, welfare 2
        let g = make_grid(2, 2, GridKind::Four).unwrap();
        let t = TypeVector::two(2, 2).unwrap();
        let (w, _) = brute_force_optimum(&g, &t, &ScanOptions::default()).unwrap();
        assert_eq!(w, Rational::from_int(2));
    }

    #[test]
    fn optimum_on_cycles_and_paths() {
        for n in [6usize, 8, 10] {
            let g = make_cycle(n).unwrap();
            for o in 2..=n / 2 {
                let t = TypeVector::two(o, n - o).unwrap();
                let (w, _) = brute_force_optimum(&g, &t, &ScanOptions::default()).unwrap();
                assert_eq!(w, Rational::from_int(n as i64 - 2), "cycle n={n} o={o}");
            }
        }
        for n in [4usize, 6, 9] {
            let g = make_path(n).unwrap();
            for o in 2..=n / 2 {
                let t = TypeVector::two(o, n - o).unwrap();
                let (w, _) = brute_force_optimum(&g, &t, &ScanOptions::default()).unwrap();
                assert_eq!(w, Rational::from_int(n as i64 - 1), "path n={n} o={o}");
            }
        }
    }

    #[test]
    fn grid4_o1_poa_is_25_over_22() {
        let g = make_grid(2, 3, GridKind::Four).unwrap();
        let t = TypeVector::two(1, 5).unwrap();
        let report = empirical_poa(&g, &t, Locality::Global, &ScanOptions::default()).unwrap();
        assert_eq!(report.poa, PoaValue::Finite(Rational::new(25, 22)));
        assert_eq!(report.opt_welfare, Rational::new(25, 6));
        assert_eq!(report.equilibrium_count, 6); // every placement is stable
    }

    #[test]
    fn grid8_o1_poa_is_897_over_704() {
        let g = make_grid(3, 3, GridKind::Eight).unwrap();
        let t = TypeVector::two(1, 8).unwrap();
        let report = empirical_poa(&g, &t, Locality::Global, &ScanOptions::default()).unwrap();
        assert_eq!(report.poa, PoaValue::Finite(Rational::new(897, 704)));
    }

    #[test]
    fn two_by_two_grid_local_poa_is_one() {
        // the balanced 2x2 grid has a single local equilibrium up to
        // symmetry (the side-by-side split) and its welfare is optimal
        let g = make_grid(2, 2, GridKind::Four).unwrap();
        let t = TypeVector::two(2, 2).unwrap();
        let opts = ScanOptions { count_up_to_symmetry: true, ..Default::default() };
        for locality in [Locality::Local, Locality::Global] {
            let rep = enumerate_equilibria(&g, &t, locality, &opts).unwrap();
            assert_eq!(rep.poa, PoaValue::Finite(Rational::ONE));
            assert_eq!(rep.equilibrium_count_up_to_symmetry, Some(1));
        }
    }

    #[test]
    fn star_with_singleton_minority_has_only_equilibria() {
        // a lone minority agent can never strictly gain, so every profile
        // is an equilibrium
        let edges = [(0usize, 1usize), (0, 2), (0, 3), (0, 4)];
        let g = Graph::from_edges(5, &edges, None).unwrap();
        let t = TypeVector::two(1, 4).unwrap();
        let report = enumerate_equilibria(&g, &t, Locality::Global, &ScanOptions::default()).unwrap();
        assert_eq!(report.equilibrium_count, 5);
        // minority on the center leaves everyone at zero
        assert_eq!(report.worst_eq_welfare, Some(Rational::ZERO));
        assert_eq!(report.poa, PoaValue::Infinity);
    }

    #[test]
    fn path3_poa_is_infinite() {
        let g = make_path(3).unwrap();
        let t = TypeVector::two(1, 2).unwrap();
        let report = empirical_poa(&g, &t, Locality::Global, &ScanOptions::default()).unwrap();
        assert_eq!(report.poa, PoaValue::Infinity);
        assert_eq!(report.worst_eq_welfare, Some(Rational::ZERO));
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let g = make_grid(3, 4, GridKind::Four).unwrap();
        let t = TypeVector::two(5, 7).unwrap();
        let seq = enumerate_equilibria(&g, &t, Locality::Global, &ScanOptions::default()).unwrap();
        let par = enumerate_equilibria(
            &g,
            &t,
            Locality::Global,
            &ScanOptions { jobs: 5, ..Default::default() },
        )
        .unwrap();
        assert_eq!(seq.opt_welfare, par.opt_welfare);
        assert_eq!(seq.opt_witness, par.opt_witness);
        assert_eq!(seq.worst_eq_welfare, par.worst_eq_welfare);
        assert_eq!(seq.worst_eq_witness, par.worst_eq_witness);
        assert_eq!(seq.equilibrium_count, par.equilibrium_count);
    }

    #[test]
    fn budget_is_enforced() {
        let g = make_cycle(12).unwrap();
        let t = TypeVector::two(6, 6).unwrap();
        let opts = ScanOptions { budget_evals: 10, ..Default::default() };
        assert!(matches!(
            enumerate_equilibria(&g, &t, Locality::Global, &opts),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn bound_table_examples() {
        let b = theoretical_bound(
            BoundFamily::CycleGlobal,
            &BoundParams { n: Some(12), o: Some(4), ..Default::default() },
        )
        .unwrap();
        assert_eq!(b.low, Some(PoaValue::Finite(Rational::new(10, 8))));
        assert_eq!(b.kind, BoundKind::Exact);

        let b = theoretical_bound(
            BoundFamily::RegularLocal,
            &BoundParams { max_degree: Some(3), ..Default::default() },
        )
        .unwrap();
        assert_eq!(b.low, Some(PoaValue::Finite(Rational::from_int(3))));

        let b = theoretical_bound(
            BoundFamily::PathGlobal,
            &BoundParams { n: Some(10), o: Some(1), ..Default::default() },
        )
        .unwrap();
        // corrected singleton-minority value; the note records the printed form
        assert_eq!(b.low, Some(PoaValue::Finite(Rational::new(17, 15))));
        assert!(b.note.is_some());

        assert!(matches!(
            theoretical_bound(BoundFamily::CycleGlobal, &BoundParams::default()),
            Err(Error::MissingParam("n"))
        ));
        assert!(matches!("nonsense".parse::<BoundFamily>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn audit_small_grid_passes() {
        let cases = vec![
            AuditInstance::Grid4 { rows: 2, cols: 3, o: 1 },
            AuditInstance::Grid4 { rows: 2, cols: 3, o: 2 },
            AuditInstance::Cycle { n: 8, o: 3 },
        ];
        let table = bound_audit(&cases, Locality::Global, &ScanOptions::default());
        assert!(table.all_pass, "{:#?}", table.rows);
    }

    #[test]
    fn symmetry_count_on_2x3_grid() {
        let g = make_grid(2, 3, GridKind::Four).unwrap();
        let t = TypeVector::two(3, 3).unwrap();
        let opts = ScanOptions { count_up_to_symmetry: true, ..Default::default() };
        let report = enumerate_equilibria(&g, &t, Locality::Global, &opts).unwrap();
        // six labeled equilibria in two spatial orbits: the row split at
        // welfare 10/3 and the diagonal split at welfare 11/3
        assert_eq!(report.equilibrium_count, 6);
        assert_eq!(report.equilibrium_count_up_to_symmetry, Some(2));
        assert_eq!(report.worst_eq_welfare, Some(Rational::new(10, 3)));
        assert_eq!(report.best_eq_welfare, Some(Rational::new(11, 3)));
    }
}

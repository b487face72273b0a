//! Profitable-swap enumeration, improving-swap dynamics and cycle search.
//!
//! A swap is profitable when it strictly increases both participants'
//! utilities; it is local when the participants occupy adjacent vertices.
//! Dynamics repeatedly execute profitable swaps under a deterministic
//! scheduler and stop on convergence, on a repeated coloring, or when the
//! step budget runs out. The improving-response graph over colorings can
//! also be searched directly for directed cycles.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    apply_swap, phi, psi, same_color_neighbors, swap_gain, utility, Coloring, PsiValue, TypeVector,
};
use crate::graph::{Graph, GridKind, Vertex};
use crate::rational::Rational;
use crate::rng::SplitMix64;

/// Which pairs may swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Global,
    Local,
}

/// One candidate exchange between differently colored vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapCandidate {
    pub u: Vertex,
    pub v: Vertex,
    pub is_local: bool,
}

/// Exact effect of one swap: both gains, the change of the monochromatic
/// edge count and the change of the refined potential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapClassification {
    pub profitable: bool,
    pub gain_u: Rational,
    pub gain_v: Rational,
    pub delta_phi: i64,
    pub delta_psi: (i64, i64),
}

/// Classifies the swap of the agents on `s.u` and `s.v`.
pub fn classify_swap(g: &Graph, c: &Coloring, s: &SwapCandidate) -> Result<SwapClassification> {
    let (gain_u, gain_v) = swap_gain(g, c, s.u, s.v)?;
    let delta_phi = delta_phi_for(g, c, s.u, s.v);
    let delta_nonzero = delta_nonzero_for(g, c, s.u, s.v);
    Ok(SwapClassification {
        profitable: gain_u.is_positive() && gain_v.is_positive(),
        gain_u,
        gain_v,
        delta_phi,
        delta_psi: (delta_phi, delta_nonzero),
    })
}

/// Change in the monochromatic edge count, from the edges incident to the
/// two endpoints only. The edge `{u, v}` itself is bichromatic before and
/// after, so excluding it on both sides keeps the count consistent.
fn delta_phi_for(g: &Graph, c: &Coloring, u: Vertex, v: Vertex) -> i64 {
    let cu = c.color(u);
    let cv = c.color(v);
    let mono_u = g.neighbors(u).iter().filter(|&&w| c.color(w) == cu).count() as i64;
    let mono_v = g.neighbors(v).iter().filter(|&&w| c.color(w) == cv).count() as i64;
    let mono_u_after = g
        .neighbors(u)
        .iter()
        .filter(|&&w| w != v && c.color(w) == cv)
        .count() as i64;
    let mono_v_after = g
        .neighbors(v)
        .iter()
        .filter(|&&w| w != u && c.color(w) == cu)
        .count() as i64;
    mono_u_after + mono_v_after - mono_u - mono_v
}

/// Change in the number of agents with positive utility; only vertices in
/// the closed neighborhoods of the endpoints can flip.
fn delta_nonzero_for(g: &Graph, c: &Coloring, u: Vertex, v: Vertex) -> i64 {
    let mut affected: Vec<Vertex> = vec![u, v];
    affected.extend_from_slice(g.neighbors(u));
    affected.extend_from_slice(g.neighbors(v));
    affected.sort_unstable();
    affected.dedup();

    let after = apply_swap(c, u, v).expect("colors checked by caller");
    let mut delta = 0i64;
    for &w in &affected {
        let before_pos = same_color_neighbors(g, c, w) > 0;
        let after_pos = same_color_neighbors(g, &after, w) > 0;
        delta += after_pos as i64 - before_pos as i64;
    }
    delta
}

/// All profitable swaps in deterministic lexicographic `(u, v)` order.
/// `Global` examines every bichromatic pair, `Local` only adjacent ones.
pub fn enumerate_profitable(
    g: &Graph,
    c: &Coloring,
    locality: Locality,
) -> Vec<(SwapCandidate, SwapClassification)> {
    let mut out = Vec::new();
    let mut push = |g: &Graph, c: &Coloring, u: Vertex, v: Vertex| {
        if c.color(u) == c.color(v) {
            return;
        }
        let cand = SwapCandidate { u, v, is_local: g.has_edge(u, v) };
        let class = classify_swap(g, c, &cand).expect("bichromatic pair");
        if class.profitable {
            out.push((cand, class));
        }
    };
    match locality {
        Locality::Global => {
            for u in 0..g.n() {
                for v in (u + 1)..g.n() {
                    push(g, c, u, v);
                }
            }
        }
        Locality::Local => {
            for u in 0..g.n() {
                for &v in g.neighbors(u) {
                    if u < v {
                        push(g, c, u, v);
                    }
                }
            }
        }
    }
    out
}

/// Swap selection rule. `First` takes the lexicographically smallest pair,
/// `BestGain` maximizes the joint gain with `(u, v)` tie-break, `Random`
/// draws uniformly from the profitable swaps using its own seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheduler {
    First,
    BestGain,
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub u: Vertex,
    pub v: Vertex,
    pub local: bool,
    pub gain_u: Rational,
    pub gain_v: Rational,
    pub phi: usize,
    pub psi: PsiValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    Converged { steps: usize },
    CycleDetected { first_repeat_index: usize, period: usize },
    BudgetExhausted { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub initial: Coloring,
    pub final_coloring: Coloring,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

/// Runs improving-swap dynamics from `init` until no profitable swap
/// remains, a coloring repeats, or `budget` swaps were executed.
pub fn run_dynamics(
    g: &Graph,
    t: &TypeVector,
    init: &Coloring,
    locality: Locality,
    scheduler: Scheduler,
    budget: usize,
) -> Result<DynamicsTrace> {
    if !init.matches(t) {
        return Err(Error::TypeMismatch);
    }
    let mut rng = match scheduler {
        Scheduler::Random { seed } => Some(SplitMix64::new(seed)),
        _ => None,
    };
    let mut seen: HashMap<Coloring, usize> = HashMap::new();
    seen.insert(init.clone(), 0);
    let mut current = init.clone();
    let mut steps = Vec::new();

    loop {
        let profitable = enumerate_profitable(g, &current, locality);
        if profitable.is_empty() {
            return Ok(DynamicsTrace {
                initial: init.clone(),
                final_coloring: current,
                outcome: Outcome::Converged { steps: steps.len() },
                steps,
            });
        }
        if steps.len() >= budget {
            return Ok(DynamicsTrace {
                initial: init.clone(),
                final_coloring: current,
                outcome: Outcome::BudgetExhausted { budget },
                steps,
            });
        }
        let (cand, class) = match scheduler {
            Scheduler::First => profitable[0].clone(),
            Scheduler::BestGain => profitable
                .iter()
                .max_by(|(ca, a), (cb, b)| {
                    (a.gain_u + a.gain_v)
                        .cmp(&(b.gain_u + b.gain_v))
                        // ties broken toward the smaller pair
                        .then_with(|| (cb.u, cb.v).cmp(&(ca.u, ca.v)))
                })
                .cloned()
                .unwrap(),
            Scheduler::Random { .. } => {
                let idx = rng.as_mut().unwrap().next_usize(profitable.len());
                profitable[idx].clone()
            }
        };
        current = apply_swap(&current, cand.u, cand.v)?;
        steps.push(TraceStep {
            u: cand.u,
            v: cand.v,
            local: cand.is_local,
            gain_u: class.gain_u,
            gain_v: class.gain_v,
            phi: phi(g, &current),
            psi: psi(g, &current),
        });
        if let Some(&first) = seen.get(&current) {
            return Ok(DynamicsTrace {
                initial: init.clone(),
                final_coloring: current,
                outcome: Outcome::CycleDetected {
                    first_repeat_index: first,
                    period: steps.len() - first,
                },
                steps,
            });
        }
        seen.insert(current.clone(), steps.len());
    }
}

/// Replays a scripted swap sequence from `init`: every listed swap must be
/// profitable (and local, under `Locality::Local`) when executed. Stops
/// with `CycleDetected` as soon as a coloring repeats; a script that runs
/// out ends `Converged` if no profitable swap remains and
/// `BudgetExhausted` otherwise.
pub fn replay_swaps(
    g: &Graph,
    t: &TypeVector,
    init: &Coloring,
    swaps: &[(Vertex, Vertex)],
    locality: Locality,
) -> Result<DynamicsTrace> {
    if !init.matches(t) {
        return Err(Error::TypeMismatch);
    }
    let mut seen: HashMap<Coloring, usize> = HashMap::new();
    seen.insert(init.clone(), 0);
    let mut current = init.clone();
    let mut steps = Vec::new();
    for &(u, v) in swaps {
        if u >= g.n() || v >= g.n() || u == v {
            return Err(Error::InvalidParameter(format!("bad scripted swap ({u}, {v})")));
        }
        let is_local = g.has_edge(u, v);
        if locality == Locality::Local && !is_local {
            return Err(Error::InvalidParameter(format!(
                "scripted swap ({u}, {v}) is not local"
            )));
        }
        let (gain_u, gain_v) = swap_gain(g, &current, u, v)?;
        if !(gain_u.is_positive() && gain_v.is_positive()) {
            return Err(Error::InvalidParameter(format!(
                "scripted swap ({u}, {v}) is not profitable at step {}",
                steps.len()
            )));
        }
        current = apply_swap(&current, u, v)?;
        steps.push(TraceStep {
            u,
            v,
            local: is_local,
            gain_u,
            gain_v,
            phi: phi(g, &current),
            psi: psi(g, &current),
        });
        if let Some(&first) = seen.get(&current) {
            return Ok(DynamicsTrace {
                initial: init.clone(),
                final_coloring: current,
                outcome: Outcome::CycleDetected {
                    first_repeat_index: first,
                    period: steps.len() - first,
                },
                steps,
            });
        }
        seen.insert(current.clone(), steps.len());
    }
    let outcome = if enumerate_profitable(g, &current, locality).is_empty() {
        Outcome::Converged { steps: steps.len() }
    } else {
        Outcome::BudgetExhausted { budget: swaps.len() }
    };
    Ok(DynamicsTrace { initial: init.clone(), final_coloring: current, steps, outcome })
}

/// A directed cycle in the improving-response graph: `colorings` has one
/// more entry than `swaps` and ends where it starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrcCycle {
    pub colorings: Vec<Coloring>,
    pub swaps: Vec<SwapCandidate>,
}

impl IrcCycle {
    /// Replays the cycle step by step: every recorded swap must be strictly
    /// profitable when executed and the sequence must return to its start.
    pub fn verify(&self, g: &Graph) -> bool {
        if self.colorings.len() != self.swaps.len() + 1 || self.swaps.is_empty() {
            return false;
        }
        if self.colorings.first() != self.colorings.last() {
            return false;
        }
        for (i, swap) in self.swaps.iter().enumerate() {
            let here = &self.colorings[i];
            let Ok((gu, gv)) = swap_gain(g, here, swap.u, swap.v) else {
                return false;
            };
            if !(gu.is_positive() && gv.is_positive()) {
                return false;
            }
            match apply_swap(here, swap.u, swap.v) {
                Ok(next) if next == self.colorings[i + 1] => {}
                _ => return false,
            }
        }
        true
    }
}

/// Result of an improving-response-cycle search. `space_exhausted` means
/// every reachable coloring was explored, so "no cycle" is definitive for
/// the explored region; otherwise absence is merely "none found in budget".
#[derive(Clone, Debug)]
pub struct IrcSearch {
    pub cycle: Option<IrcCycle>,
    pub states_explored: usize,
    pub space_exhausted: bool,
}

/// Searches the improving-response graph for a directed cycle by iterative
/// depth-first traversal with an explicit on-stack marking; an edge into a
/// gray state closes a cycle. States are interned exactly (no probabilistic
/// hashing), capped at `max_states`. Roots come from the exhaustive
/// lexicographic stream when the whole space fits the cap and from a
/// seeded random stream otherwise.
pub fn find_irc(g: &Graph, t: &TypeVector, locality: Locality, max_states: usize) -> IrcSearch {
    let n = g.n();
    debug_assert_eq!(t.total(), n);
    let mut space: u128 = 1;
    {
        let mut rest = n as u128;
        for &cnt in t.counts() {
            let mut pick: u128 = 1;
            for i in 0..cnt as u128 {
                pick = pick.saturating_mul(rest - i);
            }
            for i in 1..=cnt as u128 {
                pick /= i;
            }
            space = space.saturating_mul(pick);
            rest -= cnt as u128;
        }
    }
    let exhaustive = space <= max_states as u128;
    let mut seed_rng = SplitMix64::new(0xF1ED);

    let mut index: HashMap<Coloring, usize> = HashMap::new();
    let mut states: Vec<Coloring> = Vec::new();
    // 0 = white, 1 = gray (on stack), 2 = black
    let mut color_mark: Vec<u8> = Vec::new();
    let mut truncated = false;

    let intern = |c: Coloring,
                      index: &mut HashMap<Coloring, usize>,
                      states: &mut Vec<Coloring>,
                      marks: &mut Vec<u8>|
     -> Option<usize> {
        if let Some(&id) = index.get(&c) {
            return Some(id);
        }
        if states.len() >= max_states {
            return None;
        }
        let id = states.len();
        index.insert(c.clone(), id);
        states.push(c);
        marks.push(0);
        Some(id)
    };

    let mut roots = ColoringStream::new(t);
    let mut next_root = |rng: &mut SplitMix64| -> Option<Coloring> {
        if exhaustive {
            roots.next_coloring()
        } else {
            let mut colors = Vec::with_capacity(n);
            for (color, &cnt) in t.counts().iter().enumerate() {
                colors.extend(std::iter::repeat_n(color as u8, cnt));
            }
            rng.shuffle(&mut colors);
            Some(Coloring::new(colors))
        }
    };
    while let Some(root) = next_root(&mut seed_rng) {
        if states.len() >= max_states {
            truncated = true;
            break;
        }
        let Some(root_id) = intern(root, &mut index, &mut states, &mut color_mark) else {
            truncated = true;
            break;
        };
        if color_mark[root_id] != 0 {
            continue;
        }
        // stack entries: (state id, profitable swaps, next swap index)
        let mut stack: Vec<(usize, Vec<SwapCandidate>, usize)> = Vec::new();
        let swaps: Vec<SwapCandidate> = enumerate_profitable(g, &states[root_id], locality)
            .into_iter()
            .map(|(cand, _)| cand)
            .collect();
        color_mark[root_id] = 1;
        stack.push((root_id, swaps, 0));

        while let Some((state_id, swaps, next)) = stack.last_mut() {
            if *next >= swaps.len() {
                color_mark[*state_id] = 2;
                stack.pop();
                continue;
            }
            let swap = swaps[*next];
            *next += 1;
            let here = states[*state_id].clone();
            let succ = apply_swap(&here, swap.u, swap.v).expect("profitable swaps are bichromatic");
            let Some(succ_id) = intern(succ, &mut index, &mut states, &mut color_mark) else {
                truncated = true;
                continue;
            };
            match color_mark[succ_id] {
                0 => {
                    let succ_swaps: Vec<SwapCandidate> =
                        enumerate_profitable(g, &states[succ_id], locality)
                            .into_iter()
                            .map(|(cand, _)| cand)
                            .collect();
                    color_mark[succ_id] = 1;
                    stack.push((succ_id, succ_swaps, 0));
                }
                1 => {
                    // gray successor: the stack suffix from succ_id, plus
                    // this edge, is a directed cycle
                    let start = stack
                        .iter()
                        .position(|(id, _, _)| *id == succ_id)
                        .expect("gray state is on the stack");
                    let mut colorings: Vec<Coloring> = stack[start..]
                        .iter()
                        .map(|(id, _, _)| states[*id].clone())
                        .collect();
                    let mut cycle_swaps: Vec<SwapCandidate> = Vec::new();
                    for window in stack[start..].windows(2) {
                        let (from_id, from_swaps, from_next) = &window[0];
                        // the edge taken out of `from` is the last one tried
                        let taken = from_swaps[*from_next - 1];
                        debug_assert_eq!(
                            apply_swap(&states[*from_id], taken.u, taken.v).unwrap(),
                            states[window[1].0]
                        );
                        cycle_swaps.push(taken);
                    }
                    cycle_swaps.push(swap);
                    colorings.push(states[succ_id].clone());
                    let cycle = IrcCycle { colorings, swaps: cycle_swaps };
                    debug_assert!(cycle.verify(g));
                    return IrcSearch {
                        cycle: Some(cycle),
                        states_explored: states.len(),
                        space_exhausted: false,
                    };
                }
                _ => {}
            }
        }
    }

    IrcSearch {
        cycle: None,
        states_explored: states.len(),
        space_exhausted: !truncated,
    }
}

/// Streams every coloring with the given type counts in lexicographic
/// order, for exhaustive root seeding.
pub(crate) struct ColoringStream {
    current: Option<Vec<u8>>,
}

impl ColoringStream {
    pub(crate) fn new(t: &TypeVector) -> ColoringStream {
        let mut first = Vec::with_capacity(t.total());
        for (color, &cnt) in t.counts().iter().enumerate() {
            first.extend(std::iter::repeat_n(color as u8, cnt));
        }
        ColoringStream { current: Some(first) }
    }

    pub(crate) fn next_coloring(&mut self) -> Option<Coloring> {
        let out = self.current.clone()?;
        self.current = next_multiset_permutation(out.clone());
        Some(Coloring::new(out))
    }
}

/// Standard next-permutation on a multiset vector, `None` after the last.
pub(crate) fn next_multiset_permutation(mut v: Vec<u8>) -> Option<Vec<u8>> {
    let n = v.len();
    if n < 2 {
        return None;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return None;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    Some(v)
}

/// One violation of the swap-classification predicates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditViolation {
    pub coloring: Coloring,
    pub u: Vertex,
    pub v: Vertex,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub colorings_sampled: usize,
    pub swaps_checked: usize,
    pub violations: Vec<AuditViolation>,
    /// Profitable swaps seen per degree gap 0, 1, 2.
    pub gap_counts: [u64; 3],
    /// Local 8-grid swaps seen across degree pairs (3, 8) and (5, 8).
    pub pair38: u64,
    pub pair58: u64,
}

/// Samples random two-color colorings and checks, for every profitable
/// swap found, the degree-gap predicates on its potential change:
///
/// - gap <= 1: the swap strictly increases `phi`;
/// - gap = 2: `phi` does not decrease, and a preserved `phi` forces the
///   higher-degree agent's prior utility into the open interval (1/2, 1);
/// - on 8-grids, a local swap across degree pairs (3, 8) or (5, 8)
///   decreases `phi` by exactly 1 when the low-degree agent has utility 0
///   and the high-degree agent has utility 5/8 resp. 6/8, and strictly
///   increases `phi` otherwise.
///
/// Every classification is also cross-checked against a full recount of
/// `phi` after the swap.
pub fn audit_lemma2(g: &Graph, samples: usize, seed: u64) -> AuditReport {
    let mut rng = SplitMix64::new(seed);
    let n = g.n();
    let mut report = AuditReport {
        colorings_sampled: 0,
        swaps_checked: 0,
        violations: Vec::new(),
        gap_counts: [0; 3],
        pair38: 0,
        pair58: 0,
    };

    for _ in 0..samples {
        let o = 1 + rng.next_usize(n - 1);
        let mut colors = vec![1u8; n];
        let mut perm: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut perm);
        for &v in perm.iter().take(o) {
            colors[v] = 0;
        }
        let c = Coloring::new(colors);
        report.colorings_sampled += 1;
        audit_coloring(g, &c, &mut report);
    }
    report
}

/// Checks every profitable swap of one coloring; shared between the random
/// audit and exhaustive sweeps.
pub fn audit_coloring(g: &Graph, c: &Coloring, report: &mut AuditReport) {
    let is_8grid = matches!(g.grid_meta(), Some(m) if m.kind == GridKind::Eight);
    for (cand, class) in enumerate_profitable(g, c, Locality::Global) {
        report.swaps_checked += 1;
        let mut faults: Vec<String> = Vec::new();

        // classification vs. independent recount
        let after = apply_swap(c, cand.u, cand.v).unwrap();
        let recount = phi(g, &after) as i64 - phi(g, c) as i64;
        if recount != class.delta_phi {
            faults.push(format!("delta_phi {} disagrees with recount {recount}", class.delta_phi));
        }

        let (du, dv) = (g.degree(cand.u), g.degree(cand.v));
        let (lo_v, hi_v) = if du <= dv { (cand.u, cand.v) } else { (cand.v, cand.u) };
        let gap = g.degree(hi_v) - g.degree(lo_v);
        let u_hi = utility(g, c, hi_v);
        let u_lo = utility(g, c, lo_v);
        if gap < 3 {
            report.gap_counts[gap] += 1;
        }

        if gap <= 1 && class.delta_phi < 1 {
            faults.push(format!("degree gap {gap} but delta_phi = {}", class.delta_phi));
        }
        if gap == 2 {
            if class.delta_phi < 0 {
                faults.push(format!("degree gap 2 but delta_phi = {}", class.delta_phi));
            } else if class.delta_phi == 0
                && !(u_hi > Rational::new(1, 2) && u_hi < Rational::ONE)
            {
                faults.push(format!(
                    "phi-preserving swap with high-degree utility {u_hi} outside (1/2, 1)"
                ));
            }
        }
        if is_8grid && cand.is_local {
            let pair = (g.degree(lo_v), g.degree(hi_v));
            if pair == (3, 8) || pair == (5, 8) {
                if pair == (3, 8) {
                    report.pair38 += 1;
                } else {
                    report.pair58 += 1;
                }
                let trigger_hi = if pair == (3, 8) {
                    Rational::new(5, 8)
                } else {
                    Rational::new(6, 8)
                };
                let trigger = u_lo.is_zero() && u_hi == trigger_hi;
                if trigger && class.delta_phi != -1 {
                    faults.push(format!(
                        "pair {pair:?} trigger held but delta_phi = {}",
                        class.delta_phi
                    ));
                }
                if !trigger && class.delta_phi < 1 {
                    faults.push(format!(
                        "pair {pair:?} without trigger but delta_phi = {}",
                        class.delta_phi
                    ));
                }
            }
        }
        for detail in faults {
            report.violations.push(AuditViolation {
                coloring: c.clone(),
                u: cand.u,
                v: cand.v,
                detail,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle, make_grid, make_path, GridKind};

    fn coloring(spec: &str) -> Coloring {
        Coloring::new(spec.chars().map(|ch| if ch == 'O' { 0 } else { 1 }).collect())
    }

    #[test]
    fn no_profitable_swaps_in_single_color_instance() {
        let g = make_cycle(5).unwrap();
        let c = Coloring::new(vec![0; 5]);
        assert!(enumerate_profitable(&g, &c, Locality::Global).is_empty());
    }

    #[test]
    fn path3_obb_admits_no_profitable_swap() {
        // brute force over both bichromatic swaps: the orange end gains 0
        let g = make_path(3).unwrap();
        let c = coloring("OBB");
        assert!(enumerate_profitable(&g, &c, Locality::Global).is_empty());
    }

    #[test]
    fn lone_orange_on_star_center_is_stuck() {
        let edges = [(0usize, 1usize), (0, 2), (0, 3), (0, 4)];
        let g = Graph::from_edges(5, &edges, None).unwrap();
        let c = coloring("OBBBB");
        assert!(enumerate_profitable(&g, &c, Locality::Global).is_empty());
    }

    #[test]
    fn classification_matches_recount_on_grid() {
        let g = make_grid(3, 4, GridKind::Eight).unwrap();
        let c = coloring("OOBBOBOBBOOB");
        for u in 0..g.n() {
            for v in (u + 1)..g.n() {
                if c.color(u) == c.color(v) {
                    continue;
                }
                let cand = SwapCandidate { u, v, is_local: g.has_edge(u, v) };
                let class = classify_swap(&g, &c, &cand).unwrap();
                let after = apply_swap(&c, u, v).unwrap();
                assert_eq!(class.delta_phi, phi(&g, &after) as i64 - phi(&g, &c) as i64);
                let psi_before = psi(&g, &c);
                let psi_after = psi(&g, &after);
                assert_eq!(
                    class.delta_psi,
                    (
                        psi_after.phi as i64 - psi_before.phi as i64,
                        psi_after.nonzero as i64 - psi_before.nonzero as i64
                    )
                );
            }
        }
    }

    #[test]
    fn dynamics_on_regular_graph_converges_within_m_steps() {
        let g = make_cycle(8).unwrap();
        let t = TypeVector::two(4, 4).unwrap();
        for seed in 0..20u64 {
            let mut rng = SplitMix64::new(seed);
            let mut colors = vec![0u8; 4];
            colors.extend(vec![1u8; 4]);
            rng.shuffle(&mut colors);
            let init = Coloring::new(colors);
            for scheduler in [Scheduler::First, Scheduler::BestGain, Scheduler::Random { seed }] {
                let trace =
                    run_dynamics(&g, &t, &init, Locality::Global, scheduler, 1000).unwrap();
                match trace.outcome {
                    Outcome::Converged { steps } => assert!(steps <= g.m()),
                    other => panic!("expected convergence, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn dynamics_single_color_converges_immediately() {
        let g = make_path(4).unwrap();
        let t = TypeVector::new(vec![4]).unwrap();
        let init = Coloring::new(vec![0; 4]);
        let trace =
            run_dynamics(&g, &t, &init, Locality::Global, Scheduler::First, 10).unwrap();
        assert_eq!(trace.outcome, Outcome::Converged { steps: 0 });
    }

    #[test]
    fn dynamics_budget_zero_reports_exhaustion() {
        let g = make_path(4).unwrap();
        let t = TypeVector::two(2, 2).unwrap();
        // unstable start: both colors split so a profitable swap exists
        let init = coloring("OBOB");
        let trace = run_dynamics(&g, &t, &init, Locality::Global, Scheduler::First, 0).unwrap();
        assert_eq!(trace.outcome, Outcome::BudgetExhausted { budget: 0 });
    }

    #[test]
    fn dynamics_rejects_mismatched_init() {
        let g = make_path(4).unwrap();
        let t = TypeVector::two(1, 3).unwrap();
        let init = coloring("OOBB");
        assert!(matches!(
            run_dynamics(&g, &t, &init, Locality::Global, Scheduler::First, 10),
            Err(Error::TypeMismatch)
        ));
    }

    #[test]
    fn multiset_permutation_stream_covers_all() {
        let t = TypeVector::two(2, 2).unwrap();
        let mut stream = ColoringStream::new(&t);
        let mut seen = Vec::new();
        while let Some(c) = stream.next_coloring() {
            seen.push(c);
        }
        assert_eq!(seen.len(), 6); // C(4,2)
        let mut dedup = seen.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn replay_detects_the_found_cycle() {
        let g = make_grid(3, 3, GridKind::Eight).unwrap();
        let t = TypeVector::two(4, 5).unwrap();
        let search = find_irc(&g, &t, Locality::Global, 100_000);
        let cycle = search.cycle.expect("a global cycle exists at this size");
        let swaps: Vec<_> = cycle.swaps.iter().map(|s| (s.u, s.v)).collect();
        let trace =
            replay_swaps(&g, &t, &cycle.colorings[0], &swaps, Locality::Global).unwrap();
        assert!(matches!(trace.outcome, Outcome::CycleDetected { first_repeat_index: 0, .. }));

        // an unprofitable scripted swap is rejected
        let bad = replay_swaps(&g, &t, &cycle.colorings[0], &[(0, 1), (0, 1)], Locality::Global);
        assert!(bad.is_err());
    }

    #[test]
    fn irc_absent_on_regular_graph() {
        let g = make_cycle(6).unwrap();
        let t = TypeVector::two(3, 3).unwrap();
        let search = find_irc(&g, &t, Locality::Global, 100_000);
        assert!(search.cycle.is_none());
        assert!(search.space_exhausted);
    }

    #[test]
    fn irc_search_terminates_when_truncated() {
        // state space C(20,10) far exceeds the cap; the search falls back
        // to seeded random roots and stops at the cap
        let g = make_grid(4, 5, GridKind::Eight).unwrap();
        let t = TypeVector::two(10, 10).unwrap();
        let search = find_irc(&g, &t, Locality::Local, 500);
        assert!(search.states_explored <= 500);
        assert!(!search.space_exhausted);
    }

    #[test]
    fn irc_absent_under_local_swaps_on_8grid() {
        let g = make_grid(3, 3, GridKind::Eight).unwrap();
        for o in 1..=4usize {
            let t = TypeVector::two(o, 9 - o).unwrap();
            let search = find_irc(&g, &t, Locality::Local, 200_000);
            assert!(search.cycle.is_none(), "o = {o}");
            assert!(search.space_exhausted);
        }
    }

    #[test]
    fn phi_decreasing_triggers_on_8grid() {
        // 3x4 8-grid, row-major ids. Degree pair (3, 8): the corner agent
        // at 0 has utility 0 and the adjacent middle agent at 5 has 5/8,
        // so their (profitable) swap decreases phi by exactly one.
        let g = make_grid(3, 4, GridKind::Eight).unwrap();
        let c = Coloring::new(vec![0, 1, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1]);
        assert_eq!(utility(&g, &c, 0), Rational::ZERO);
        assert_eq!(utility(&g, &c, 5), Rational::new(5, 8));
        let cand = SwapCandidate { u: 0, v: 5, is_local: true };
        let class = classify_swap(&g, &c, &cand).unwrap();
        assert!(class.profitable);
        assert_eq!(class.delta_phi, -1);

        // degree pair (5, 8): border agent at 1 has utility 0, middle
        // agent at 5 has 6/8; again phi drops by one.
        let c = Coloring::new(vec![1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1]);
        assert_eq!(utility(&g, &c, 1), Rational::ZERO);
        assert_eq!(utility(&g, &c, 5), Rational::new(6, 8));
        let cand = SwapCandidate { u: 1, v: 5, is_local: true };
        let class = classify_swap(&g, &c, &cand).unwrap();
        assert!(class.profitable);
        assert_eq!(class.delta_phi, -1);
    }

    #[test]
    fn lemma_audit_on_small_graphs_is_clean() {
        for g in [
            make_path(6).unwrap(),
            make_cycle(7).unwrap(),
            make_grid(3, 3, GridKind::Four).unwrap(),
            make_grid(3, 3, GridKind::Eight).unwrap(),
        ] {
            let report = audit_lemma2(&g, 300, 17);
            assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
            assert!(report.colorings_sampled == 300);
        }
    }
}

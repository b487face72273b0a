//! Browser demo: swap Schelling games on grids, driven from a static page.
//!
//! Three entry points, all taking plain parameters and returning JSON
//! strings so the page needs no glue beyond `JSON.parse`:
//!
//! - [`simulate_grid`]: improving-swap dynamics on a grid from a seeded
//!   random start, returning the full trace for animation;
//! - [`construct_equilibrium`]: the constructive equilibrium profiles
//!   (8-grid fills/staircases, 4-grid frames) with their verdicts;
//! - [`grid_poa`]: exact Price-of-Anarchy enumeration on small grids with
//!   the matching closed-form bound.
//!
//! Build with `wasm-pack build --target web` (see the workspace README).

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use swap_schelling::analysis::{
    empirical_poa, theoretical_bound, BoundFamily, BoundParams, ScanOptions,
};
use swap_schelling::dynamics::{run_dynamics, Locality, Scheduler};
use swap_schelling::equilibrium::{build_4grid_frame, build_8grid_eq, is_equilibrium};
use swap_schelling::game::{phi, psi, social_welfare, TypeVector};
use swap_schelling::graph::{make_grid, GridKind};
use swap_schelling::rng::SplitMix64;
use swap_schelling::suites::random_coloring;

fn err(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn parse_kind(kind: &str) -> Option<GridKind> {
    match kind {
        "4" => Some(GridKind::Four),
        "8" => Some(GridKind::Eight),
        _ => None,
    }
}

fn parse_locality(locality: &str) -> Option<Locality> {
    match locality {
        "global" => Some(Locality::Global),
        "local" => Some(Locality::Local),
        _ => None,
    }
}

/// Seeded improving-swap dynamics on a `rows x cols` grid with `o`
/// minority agents. Returns the initial coloring, every executed swap with
/// its gains and potentials, and the outcome.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)] // flat signature keeps the JS call site simple
pub fn simulate_grid(
    rows: usize,
    cols: usize,
    kind: &str,
    o: usize,
    locality: &str,
    scheduler: &str,
    seed: u64,
    budget: usize,
) -> String {
    let Some(kind) = parse_kind(kind) else {
        return err("kind must be \"4\" or \"8\"");
    };
    let Some(locality) = parse_locality(locality) else {
        return err("locality must be \"global\" or \"local\"");
    };
    if rows * cols > 900 {
        return err("grid too large for the demo (at most 900 cells)");
    }
    let n = rows * cols;
    if o < 1 || o >= n {
        return err("need 1 <= o < rows*cols");
    }
    let g = match make_grid(rows, cols, kind) {
        Ok(g) => g,
        Err(e) => return err(e),
    };
    let t = match TypeVector::two(o, n - o) {
        Ok(t) => t,
        Err(e) => return err(e),
    };
    let mut rng = SplitMix64::new(seed);
    let init_seed = rng.next_u64();
    let sched_seed = rng.next_u64();
    let init = random_coloring(&t, &mut SplitMix64::new(init_seed));
    let scheduler = match scheduler {
        "first" => Scheduler::First,
        "best-gain" => Scheduler::BestGain,
        "random" => Scheduler::Random { seed: sched_seed },
        _ => return err("scheduler must be \"first\", \"best-gain\" or \"random\""),
    };
    let budget = if budget == 0 { 4 * n * g.m() + 8 } else { budget };
    match run_dynamics(&g, &t, &init, locality, scheduler, budget) {
        Ok(trace) => json!({
            "rows": rows,
            "cols": cols,
            "kind": match kind { GridKind::Four => 4, GridKind::Eight => 8 },
            "initial_phi": phi(&g, &trace.initial),
            "initial_welfare": social_welfare(&g, &trace.initial).to_f64(),
            "final_welfare": social_welfare(&g, &trace.final_coloring).to_f64(),
            "trace": trace,
        })
        .to_string(),
        Err(e) => err(e),
    }
}

/// Constructive equilibria: `which` is `"grid8"` (consecutive fill /
/// staircase / pattern search, verified globally stable) or `"frame"`
/// (balanced frame profile on the n x n 4-grid, pass `rows` = n).
#[wasm_bindgen]
pub fn construct_equilibrium(which: &str, rows: usize, cols: usize, o: usize) -> String {
    let result = match which {
        "grid8" => build_8grid_eq(rows, cols, o).map(|c| {
            let g = make_grid(rows, cols, GridKind::Eight).unwrap();
            (g, c, 8)
        }),
        "frame" => build_4grid_frame(rows).map(|c| {
            let g = make_grid(rows, rows, GridKind::Four).unwrap();
            (g, c, 4)
        }),
        _ => return err("which must be \"grid8\" or \"frame\""),
    };
    match result {
        Ok((g, c, kind)) => {
            let verdict = is_equilibrium(&g, &c, Locality::Global);
            let meta = g.grid_meta().unwrap();
            json!({
                "rows": meta.rows,
                "cols": meta.cols,
                "kind": kind,
                "coloring": c,
                "welfare": social_welfare(&g, &c).to_string(),
                "welfare_float": social_welfare(&g, &c).to_f64(),
                "phi": phi(&g, &c),
                "psi": psi(&g, &c),
                "is_equilibrium": verdict.is_equilibrium,
            })
            .to_string()
        }
        Err(e) => err(e),
    }
}

/// Exact PoA on a small grid: enumerates every placement of `o` minority
/// agents, classifies equilibria and reports the ratio next to the closed
/// form. Kept small so the browser stays responsive.
#[wasm_bindgen]
pub fn grid_poa(rows: usize, cols: usize, kind: &str, o: usize, locality: &str) -> String {
    let Some(kind) = parse_kind(kind) else {
        return err("kind must be \"4\" or \"8\"");
    };
    let Some(locality) = parse_locality(locality) else {
        return err("locality must be \"global\" or \"local\"");
    };
    let n = rows * cols;
    if o < 1 || 2 * o > n {
        return err("need 1 <= o <= rows*cols/2");
    }
    let g = match make_grid(rows, cols, kind) {
        Ok(g) => g,
        Err(e) => return err(e),
    };
    let t = TypeVector::two(o, n - o).unwrap();
    let opts = ScanOptions { jobs: 1, budget_evals: 20_000_000, count_up_to_symmetry: true };
    let report = match empirical_poa(&g, &t, locality, &opts) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    let family = match (kind, locality, o) {
        (GridKind::Four, Locality::Global, 1) => Some(BoundFamily::Grid4SingleGlobal),
        (GridKind::Four, Locality::Global, _) => Some(BoundFamily::Grid4Global),
        (GridKind::Eight, Locality::Global, 1) => Some(BoundFamily::Grid8SingleGlobal),
        (GridKind::Eight, Locality::Global, _) => Some(BoundFamily::Grid8Global),
        _ => None,
    };
    let bound = family.and_then(|f| {
        theoretical_bound(
            f,
            &BoundParams {
                n: Some(n),
                o: Some(o),
                rows: Some(rows),
                cols: Some(cols),
                ..Default::default()
            },
        )
        .ok()
    });
    json!({
        "rows": rows,
        "cols": cols,
        "report": report,
        "poa_float": report.poa.as_finite().map(|r| r.to_f64()),
        "bound": bound,
        "bound_respected": bound.as_ref().map(|b| b.admits(&report.poa)),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulate_returns_trace_json() {
        let out = simulate_grid(3, 4, "8", 5, "local", "random", 7, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_none(), "{out}");
        assert_eq!(v["rows"], 3);
        assert_eq!(v["trace"]["outcome"]["kind"], "Converged");
    }

    #[test]
    fn construct_returns_verified_profiles() {
        let out = construct_equilibrium("grid8", 3, 4, 5);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["is_equilibrium"], true);

        let out = construct_equilibrium("frame", 6, 6, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["is_equilibrium"], true);
    }

    #[test]
    fn poa_matches_known_value() {
        let out = grid_poa(2, 3, "4", 1, "global");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["poa"], "25/22");
        assert_eq!(v["bound_respected"], true);
    }

    #[test]
    fn bad_inputs_return_errors() {
        let out = simulate_grid(3, 3, "5", 2, "global", "first", 0, 0);
        assert!(out.contains("error"));
        let out = grid_poa(2, 3, "4", 5, "global");
        assert!(out.contains("error"));
    }
}

//! Strategy profiles as colorings, exact utilities, welfare and potentials.
//!
//! A profile is represented by the coloring it induces: utilities depend
//! only on which color sits on which vertex, so the per-color permutations
//! of agents are quotiented away. All values are exact rationals.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::rational::Rational;

pub type Color = u8;

/// Number of agents per color; for two colors the minority is color 0 by
/// convention, enforced by [`TypeVector::two`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeVector {
    counts: Vec<usize>,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Result<TypeVector> {
        if counts.is_empty() || counts.contains(&0) {
            return Err(Error::InvalidParameter("type counts must be positive".into()));
        }
        Ok(TypeVector { counts })
    }

    /// Two-color vector normalized so that `counts[0] <= counts[1]`.
    pub fn two(o: usize, b: usize) -> Result<TypeVector> {
        TypeVector::new(vec![o.min(b), o.max(b)])
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Minority count in a two-color game.
    pub fn minority(&self) -> usize {
        *self.counts.iter().min().unwrap()
    }
}

/// A coloring of the vertices, i.e. a strategy profile up to within-color
/// agent permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Coloring {
        Coloring { colors }
    }

    /// Color 0 on the listed vertices, color 1 elsewhere.
    pub fn from_color0_positions(n: usize, positions: &[Vertex]) -> Coloring {
        let mut colors = vec![1; n];
        for &v in positions {
            colors[v] = 0;
        }
        Coloring { colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.colors[v] = c;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_counts(&self) -> Vec<usize> {
        let k = self.colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut counts = vec![0; k];
        for &c in &self.colors {
            counts[c as usize] += 1;
        }
        counts
    }

    pub fn matches(&self, t: &TypeVector) -> bool {
        if self.n() != t.total() {
            return false;
        }
        let mut counts = vec![0usize; t.k()];
        for &c in &self.colors {
            let Some(slot) = counts.get_mut(c as usize) else {
                return false;
            };
            *slot += 1;
        }
        counts == t.counts()
    }

    /// Single line of space-separated color indices.
    pub fn serialize(&self) -> String {
        let toks: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        format!("{}\n", toks.join(" "))
    }

    pub fn parse(text: &str) -> Result<Coloring> {
        let mut colors = Vec::new();
        for tok in text.split_whitespace() {
            let c: Color = tok
                .parse()
                .map_err(|_| Error::Parse { line: 1, msg: format!("bad color token `{tok}`") })?;
            colors.push(c);
        }
        if colors.is_empty() {
            return Err(Error::Parse { line: 1, msg: "empty coloring".into() });
        }
        Ok(Coloring { colors })
    }
}

/// Fraction of `v`'s neighbors sharing `v`'s color.
pub fn utility(g: &Graph, c: &Coloring, v: Vertex) -> Rational {
    let deg = g.degree(v);
    if deg == 0 {
        return Rational::ZERO;
    }
    let same = same_color_neighbors(g, c, v);
    Rational::new(same as i64, deg as i64)
}

pub(crate) fn same_color_neighbors(g: &Graph, c: &Coloring, v: Vertex) -> usize {
    let cv = c.color(v);
    g.neighbors(v).iter().filter(|&&w| c.color(w) == cv).count()
}

/// Sum of all agents' utilities.
pub fn social_welfare(g: &Graph, c: &Coloring) -> Rational {
    (0..g.n()).map(|v| utility(g, c, v)).sum()
}

/// Number of monochromatic edges.
pub fn phi(g: &Graph, c: &Coloring) -> usize {
    let mut count = 0;
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if u < v && c.color(u) == c.color(v) {
                count += 1;
            }
        }
    }
    count
}

/// The refined potential `(phi, n - z)` where `z` counts zero-utility
/// agents; ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PsiValue {
    pub phi: usize,
    pub nonzero: usize,
}

pub fn psi(g: &Graph, c: &Coloring) -> PsiValue {
    let zero = (0..g.n()).filter(|&v| same_color_neighbors(g, c, v) == 0).count();
    PsiValue { phi: phi(g, c), nonzero: g.n() - zero }
}

pub fn compare_psi(a: PsiValue, b: PsiValue) -> Ordering {
    a.cmp(&b)
}

/// Exchanges the colors of `u` and `v`; rejects same-color exchanges, which
/// are identities on colorings and never profitable.
pub fn apply_swap(c: &Coloring, u: Vertex, v: Vertex) -> Result<Coloring> {
    if c.color(u) == c.color(v) {
        return Err(Error::SameColorSwap);
    }
    let mut out = c.clone();
    let cu = out.color(u);
    let cv = out.color(v);
    out.set(u, cv);
    out.set(v, cu);
    Ok(out)
}

/// Exact utility gains `(gain of the agent on u, gain of the agent on v)`
/// if the two agents exchanged positions. For adjacent vertices the swap
/// partner no longer counts as a same-color neighbor, which is the
/// adjacency correction baked into the counts below.
pub fn swap_gain(g: &Graph, c: &Coloring, u: Vertex, v: Vertex) -> Result<(Rational, Rational)> {
    let cu = c.color(u);
    let cv = c.color(v);
    if cu == cv {
        return Err(Error::SameColorSwap);
    }
    let before_u = Rational::new(same_color_neighbors(g, c, u) as i64, g.degree(u) as i64);
    let before_v = Rational::new(same_color_neighbors(g, c, v) as i64, g.degree(v) as i64);
    // agent from u lands on v: its same-color neighbors there, u excluded
    let after_u_count = g
        .neighbors(v)
        .iter()
        .filter(|&&w| w != u && c.color(w) == cu)
        .count();
    let after_v_count = g
        .neighbors(u)
        .iter()
        .filter(|&&w| w != v && c.color(w) == cv)
        .count();
    let after_u = Rational::new(after_u_count as i64, g.degree(v) as i64);
    let after_v = Rational::new(after_v_count as i64, g.degree(u) as i64);
    Ok((after_u - before_u, after_v - before_v))
}

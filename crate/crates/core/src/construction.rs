//! The 4-graph on `{0, ..., 2^D - 1}` defined by a pair coloring.
//!
//! A 4-tuple `v1 < v2 < v3 < v4` with profile `(d1, d2, d3)` is an edge iff
//! one of the following holds:
//!
//! * **I**: the profile is monotone and `phi(d1,d2) = phi(d2,d3) != phi(d1,d3)`;
//! * **II**: `d1 > d2 < d3`, `d1 > d3` and `phi(d1,d2) != phi(d2,d3)`;
//! * **III**: `d1 > d2 < d3`, `d1 < d3` and all three pair colors agree.
//!
//! Peaks `d1 < d2 > d3` are never edges.

use std::fmt;
use std::str::FromStr;

use crate::coloring::PairColoring;
use crate::delta::{delta_unchecked, DeltaValue};
use crate::error::{Error, Result};

/// Default vertex cap for [`HypergraphView::materialize`].
pub const MATERIALIZE_CAP: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    I,
    II,
    III,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::I => "I",
            Rule::II => "II",
            Rule::III => "III",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Rule::I),
            "II" => Ok(Rule::II),
            "III" => Ok(Rule::III),
            other => Err(Error::Parse(format!("unknown rule tag {other:?}"))),
        }
    }
}

/// Which rule, if any, makes a profile an edge.
#[inline]
pub fn rule_for_profile(
    phi: &PairColoring,
    d1: DeltaValue,
    d2: DeltaValue,
    d3: DeltaValue,
) -> Option<Rule> {
    let c12 = phi.bit(d1, d2);
    let c23 = phi.bit(d2, d3);
    let increasing = d1 < d2 && d2 < d3;
    let decreasing = d1 > d2 && d2 > d3;
    if increasing || decreasing {
        (c12 == c23 && c12 != phi.bit(d1, d3)).then_some(Rule::I)
    } else if d1 > d2 && d2 < d3 {
        if d1 > d3 {
            (c12 != c23).then_some(Rule::II)
        } else {
            (c12 == c23 && c12 == phi.bit(d1, d3)).then_some(Rule::III)
        }
    } else {
        None
    }
}

/// An edge together with the rule that fired on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge4 {
    pub quad: [u64; 4],
    pub rule: Rule,
}

impl fmt::Display for Edge4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.quad;
        write!(f, "{a} {b} {c} {d}\t{}", self.rule)
    }
}

impl FromStr for Edge4 {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let (verts, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("missing tab in edge line {line:?}")))?;
        let parsed: Vec<u64> = verts
            .split(' ')
            .map(|t| {
                t.parse()
                    .map_err(|e| Error::Parse(format!("bad vertex {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        let quad: [u64; 4] = parsed.try_into().map_err(|v: Vec<u64>| Error::WrongArity {
            expected: 4,
            got: v.len(),
        })?;
        if quad.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotSorted);
        }
        Ok(Edge4 {
            quad,
            rule: tag.parse()?,
        })
    }
}

/// One edge per line, sorted lexicographically.
pub fn write_edge_list(edges: &[Edge4]) -> String {
    let mut out = String::with_capacity(edges.len() * 16);
    for e in edges {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Vec<Edge4>> {
    let edges: Vec<Edge4> = text.lines().map(str::parse).collect::<Result<_>>()?;
    if edges.windows(2).any(|w| w[0].quad >= w[1].quad) {
        return Err(Error::Parse("edge list is not strictly sorted".into()));
    }
    Ok(edges)
}

/// The implicit 4-graph determined by a vertex width and a pair coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphView {
    width: u32,
    phi: PairColoring,
}

impl HypergraphView {
    /// `phi` must color every delta value below `width`.
    pub fn new(width: u32, phi: PairColoring) -> Result<Self> {
        if width == 0 || width > 63 {
            return Err(Error::WidthMismatch(format!(
                "width must be in 1..=63, got {width}"
            )));
        }
        if phi.universe() < width as usize {
            return Err(Error::WidthMismatch(format!(
                "coloring universe {} is smaller than width {width}",
                phi.universe()
            )));
        }
        Ok(Self { width, phi })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn phi(&self) -> &PairColoring {
        &self.phi
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.width
    }

    pub(crate) fn check_vertices(&self, vertices: &[u64]) -> Result<()> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotSorted);
        }
        if let Some(&v) = vertices.last() {
            if v >= self.vertex_count() {
                return Err(Error::WidthMismatch(format!(
                    "vertex {v} does not fit in {} bits",
                    self.width
                )));
            }
        }
        Ok(())
    }

    /// The rule that makes `quad` an edge, or `None` for a non-edge.
    pub fn edge_predicate(&self, quad: &[u64]) -> Result<Option<Rule>> {
        if quad.len() != 4 {
            return Err(Error::WrongArity {
                expected: 4,
                got: quad.len(),
            });
        }
        self.check_vertices(quad)?;
        Ok(self.rule_unchecked(quad[0], quad[1], quad[2], quad[3]))
    }

    /// Edge rule of an increasing in-range quad.
    #[inline]
    pub(crate) fn rule_unchecked(&self, a: u64, b: u64, c: u64, d: u64) -> Option<Rule> {
        rule_for_profile(
            &self.phi,
            delta_unchecked(a, b),
            delta_unchecked(b, c),
            delta_unchecked(c, d),
        )
    }

    /// Every edge, streamed in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge4> + '_ {
        let n = self.vertex_count();
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                (b + 1..n).flat_map(move |c| {
                    (c + 1..n).filter_map(move |d| {
                        self.rule_unchecked(a, b, c, d).map(|rule| Edge4 {
                            quad: [a, b, c, d],
                            rule,
                        })
                    })
                })
            })
        })
    }

    fn check_cap(&self, cap: u64) -> Result<()> {
        if self.vertex_count() > cap {
            return Err(Error::TooLarge {
                size: self.vertex_count(),
                cap,
            });
        }
        Ok(())
    }

    /// All edges, in lexicographic order, refusing graphs above `cap` vertices.
    pub fn materialize(&self, cap: u64) -> Result<Vec<Edge4>> {
        self.check_cap(cap)?;
        Ok(self.edges().collect())
    }

    /// Edge tallies `(I, II, III)`.
    pub fn edge_counts_by_rule(&self, cap: u64) -> Result<[u64; 3]> {
        self.check_cap(cap)?;
        let mut counts = [0u64; 3];
        for e in self.edges() {
            counts[e.rule as usize] += 1;
        }
        Ok(counts)
    }
}

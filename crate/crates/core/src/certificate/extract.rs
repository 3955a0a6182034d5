//! Edge extraction: given a vertex set `Q` whose profile supports five
//! layers, walk the case analysis that rules out `Q` being independent and
//! return the edge it lands on.
//!
//! Each color relation the argument relies on is checked against `phi`.
//! When a relation fails, the quad attached to it is an edge; it is
//! verified with the edge predicate and returned. Relations that follow
//! from earlier ones are checked too, and a violation is reported as
//! [`Error::InternalInconsistency`].

use std::fmt;
use std::str::FromStr;

use super::{build_layers, monotone_witness, LayerOutcome, LayerParams, LayerStack};
use crate::construction::{Edge4, HypergraphView, Rule};
use crate::delta::OrderedTuple;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceCase {
    A1LessA2,
    A1GreaterA2,
    MonotoneRunCase,
}

impl TraceCase {
    fn label(self) -> &'static str {
        match self {
            TraceCase::A1LessA2 => "A1LessA2",
            TraceCase::A1GreaterA2 => "A1GreaterA2",
            TraceCase::MonotoneRunCase => "MonotoneRunCase",
        }
    }
}

/// Which color coincidence the pigeonhole step picked when `p[a1] < p[a2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `phi(a1, a2) = phi(b1, a2)`; the chain runs from `b1`.
    A1B1,
    /// `phi(a1, a2) = phi(b2, a2)`.
    A1B2,
    /// `phi(b1, a2) = phi(b2, a2)`; `b1` plays the role of `a1`.
    B1B2,
}

impl Branch {
    fn label(self) -> &'static str {
        match self {
            Branch::A1B1 => "a1a2=b1a2",
            Branch::A1B2 => "a1a2=b2a2",
            Branch::B1B2 => "b1a2=b2a2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Relation text, no spaces, profile positions 1-based.
    pub relation: String,
    pub held: bool,
    /// Quad that is an edge because the relation failed.
    pub quad: Option<[u64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub case: TraceCase,
    pub branch: Option<Branch>,
    pub steps: Vec<TraceStep>,
    pub edge: Edge4,
}

fn quad_text(q: &[u64; 4]) -> String {
    format!("{} {} {} {}", q[0], q[1], q[2], q[3])
}

impl fmt::Display for ExtractionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case {}", self.case.label())?;
        writeln!(f, "branch {}", self.branch.map_or("none", Branch::label))?;
        for s in &self.steps {
            match (s.held, &s.quad) {
                (true, _) => writeln!(f, "{} HELD", s.relation)?,
                (false, None) => writeln!(f, "{} FAILED", s.relation)?,
                (false, Some(q)) => writeln!(f, "{} FAILED quad={}", s.relation, quad_text(q))?,
            }
        }
        writeln!(
            f,
            "EDGE {} rule={}",
            quad_text(&self.edge.quad),
            self.edge.rule
        )
    }
}

fn parse_quad(text: &str) -> Result<[u64; 4]> {
    let v: Vec<u64> = text
        .split(' ')
        .map(|t| {
            t.parse()
                .map_err(|e| Error::Parse(format!("bad vertex {t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    v.try_into().map_err(|v: Vec<u64>| Error::WrongArity {
        expected: 4,
        got: v.len(),
    })
}

impl FromStr for ExtractionTrace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("trace: {what}"));
        let mut lines = s.lines();
        let case = match lines.next().and_then(|l| l.strip_prefix("case ")) {
            Some("A1LessA2") => TraceCase::A1LessA2,
            Some("A1GreaterA2") => TraceCase::A1GreaterA2,
            Some("MonotoneRunCase") => TraceCase::MonotoneRunCase,
            _ => return Err(bad("missing or unknown case line")),
        };
        let branch = match lines.next().and_then(|l| l.strip_prefix("branch ")) {
            Some("none") => None,
            Some("a1a2=b1a2") => Some(Branch::A1B1),
            Some("a1a2=b2a2") => Some(Branch::A1B2),
            Some("b1a2=b2a2") => Some(Branch::B1B2),
            _ => return Err(bad("missing or unknown branch line")),
        };
        let mut steps = Vec::new();
        for line in lines.by_ref() {
            if let Some(rest) = line.strip_prefix("EDGE ") {
                let (quad, rule) = rest
                    .split_once(" rule=")
                    .ok_or_else(|| bad("bad EDGE line"))?;
                if lines.any(|l| !l.is_empty()) {
                    return Err(bad("content after EDGE line"));
                }
                return Ok(ExtractionTrace {
                    case,
                    branch,
                    steps,
                    edge: Edge4 {
                        quad: parse_quad(quad)?,
                        rule: rule.parse()?,
                    },
                });
            }
            let step = if let Some(rel) = line.strip_suffix(" HELD") {
                TraceStep {
                    relation: rel.into(),
                    held: true,
                    quad: None,
                }
            } else if let Some((rel, quad)) = line.split_once(" FAILED quad=") {
                TraceStep {
                    relation: rel.into(),
                    held: false,
                    quad: Some(parse_quad(quad)?),
                }
            } else if let Some(rel) = line.strip_suffix(" FAILED") {
                TraceStep {
                    relation: rel.into(),
                    held: false,
                    quad: None,
                }
            } else {
                return Err(bad(&format!("unrecognised line {line:?}")));
            };
            steps.push(step);
        }
        Err(bad("missing EDGE line"))
    }
}

/// Extraction with five layers and the given run length and factor.
pub fn extract_edge(
    h: &HypergraphView,
    q: &OrderedTuple,
    n: usize,
    factor: usize,
) -> Result<ExtractionTrace> {
    extract_edge_with(h, q, &LayerParams::new(n, factor, 5))
}

pub fn extract_edge_with(
    h: &HypergraphView,
    q: &OrderedTuple,
    params: &LayerParams,
) -> Result<ExtractionTrace> {
    if params.depth != 5 {
        return Err(Error::BadParameters(format!(
            "extraction uses exactly five layers, got depth {}",
            params.depth
        )));
    }
    h.check_vertices(q.as_slice())?;
    let stack = match build_layers(q, params) {
        Ok(LayerOutcome::Layers(stack)) => stack,
        Ok(LayerOutcome::Run(run)) => {
            let witness = monotone_witness(h, q, &run)?.ok_or(Error::InsufficientSize)?;
            let [j1, j2, j3] = witness.positions;
            return Ok(ExtractionTrace {
                case: TraceCase::MonotoneRunCase,
                branch: None,
                steps: vec![TraceStep {
                    relation: format!(
                        "good(d{},d{},d{})@layer{}",
                        j1 + 1,
                        j2 + 1,
                        j3 + 1,
                        run.level
                    ),
                    held: true,
                    quad: None,
                }],
                edge: witness.edge,
            });
        }
        Err(Error::InsufficientMaxima(_)) | Err(Error::TooShort { .. }) => {
            return Err(Error::InsufficientSize)
        }
        Err(e) => return Err(e),
    };
    if stack.layer(5).len() < 2 {
        return Err(Error::InsufficientSize);
    }
    Walker::new(h, &stack).run()
}

/// Found an edge: stop walking.
type Flow = std::result::Result<(), Stop>;

enum Stop {
    Edge(Edge4),
    Failed(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

struct Walker<'a> {
    h: &'a HypergraphView,
    stack: &'a LayerStack,
    steps: Vec<TraceStep>,
    branch: Option<Branch>,
}

impl<'a> Walker<'a> {
    fn new(h: &'a HypergraphView, stack: &'a LayerStack) -> Self {
        Self {
            h,
            stack,
            steps: Vec::new(),
            branch: None,
        }
    }

    /// Color bit of the pair of profile values at raw indices `i`, `j`.
    fn col(&self, i: usize, j: usize) -> Result<bool> {
        let p = self.stack.profile();
        if p[i] == p[j] {
            return Err(Error::InternalInconsistency(format!(
                "color queried on equal values at d{} and d{}",
                i + 1,
                j + 1
            )));
        }
        Ok(self.h.phi().bit(p[i], p[j]))
    }

    fn next(&self, level: usize, j: usize) -> Result<usize> {
        self.stack.adjacent(level, j, true).map_err(inconsistent)
    }

    fn prev(&self, level: usize, j: usize) -> Result<usize> {
        self.stack.adjacent(level, j, false).map_err(inconsistent)
    }

    /// Records a relation that needs no quad.
    fn note(&mut self, relation: String, held: bool) {
        self.steps.push(TraceStep {
            relation,
            held,
            quad: None,
        });
    }

    /// Records `relation`; if it failed, the quad on vertex positions `at`
    /// must be an edge by `rule`, and the walk stops there.
    fn check(&mut self, relation: String, held: bool, at: [usize; 4], rule: Rule) -> Flow {
        if held {
            self.note(relation, true);
            return Ok(());
        }
        let q = self.stack.q();
        let quad = at.map(|i| q[i]);
        self.steps.push(TraceStep {
            relation: relation.clone(),
            held: false,
            quad: Some(quad),
        });
        match self.h.edge_predicate(&quad) {
            Ok(Some(r)) if r == rule => Err(Stop::Edge(Edge4 { quad, rule })),
            other => Err(Stop::Failed(Error::InternalInconsistency(format!(
                "{relation} failed but quad {quad:?} gave {other:?}, expected rule {rule}"
            )))),
        }
    }

    /// A relation the argument derives from earlier steps; it must hold.
    fn expect(&mut self, relation: String, held: bool) -> Flow {
        self.note(relation.clone(), held);
        if held {
            Ok(())
        } else {
            Err(Stop::Failed(Error::InternalInconsistency(format!(
                "derived relation {relation} does not hold"
            ))))
        }
    }

    /// A relation the argument proves false; its quad is then an edge.
    fn terminal(&mut self, relation: String, held: bool, at: [usize; 4], rule: Rule) -> Flow {
        if held {
            self.note(relation.clone(), true);
            return Err(Stop::Failed(Error::InternalInconsistency(format!(
                "chain completed but {relation} still holds"
            ))));
        }
        self.check(relation, false, at, rule)
    }

    fn run(mut self) -> Result<ExtractionTrace> {
        let (a1, a2) = (self.stack.layer(5)[0], self.stack.layer(5)[1]);
        let p = self.stack.profile();
        let (case, outcome) = if p[a1] < p[a2] {
            (TraceCase::A1LessA2, self.rising(a1, a2))
        } else {
            (TraceCase::A1GreaterA2, self.falling(a1, a2))
        };
        match outcome {
            Ok(()) => Err(Error::InternalInconsistency(
                "case analysis ended without an edge".into(),
            )),
            Err(Stop::Failed(e)) => Err(e),
            Err(Stop::Edge(edge)) => Ok(ExtractionTrace {
                case,
                branch: self.branch,
                steps: self.steps,
                edge,
            }),
        }
    }

    /// `p[a1] < p[a2]`.
    fn rising(&mut self, a1: usize, a2: usize) -> Flow {
        let b1 = self.next(4, a1)?;
        let b2 = self.next(3, b1)?;
        let eq =
            |w: &Self, x: usize, y: usize| -> Result<bool> { Ok(w.col(x, a2)? == w.col(y, a2)?) };
        let choices = [
            (Branch::A1B1, a1, b1),
            (Branch::A1B2, a1, b2),
            (Branch::B1B2, b1, b2),
        ];
        let mut pick = None;
        for (br, x, y) in choices {
            let held = eq(self, x, y)?;
            self.note(format!("pigeonhole:{}", br.label()), held);
            if held {
                pick = Some(br);
                break;
            }
        }
        let (left, pivot) = match pick {
            Some(Branch::A1B1) => (a1, b1),
            Some(Branch::A1B2) => (a1, b2),
            Some(Branch::B1B2) => (b1, b2),
            None => {
                return Err(Stop::Failed(Error::InternalInconsistency(
                    "no pigeonhole coincidence among two colors".into(),
                )))
            }
        };
        self.branch = pick;
        let right = a2;

        let c = self.prev(2, pivot)?;
        let d = self.next(1, c)?;
        let e = d - 1;

        self.rising_claim(left, pivot, right, c..pivot)?;
        let held = self.col(c, pivot)? == self.col(d, pivot)?;
        self.expect(
            format!("phi({},{})=phi({},{})", dl(c), dl(pivot), dl(d), dl(pivot)),
            held,
        )?;
        self.rising_claim(c, d, pivot, e..d)?;

        let held = self.col(e, pivot)? == self.col(d, pivot)?;
        self.expect(
            format!("phi({},{})=phi({},{})", dl(e), dl(pivot), dl(d), dl(pivot)),
            held,
        )?;
        let held = self.col(left, e)? == self.col(e, d)?;
        self.check(
            format!("phi({},{})=phi({},{})", dl(left), dl(e), dl(e), dl(d)),
            held,
            [left, e, e + 1, d + 1],
            Rule::II,
        )?;
        let held = self.col(left, e)? == self.col(e, pivot)?;
        self.terminal(
            format!("phi({},{})=phi({},{})", dl(left), dl(e), dl(e), dl(pivot)),
            held,
            [left, e, e + 1, pivot + 1],
            Rule::II,
        )
    }

    /// For `x` in `range`: `phi(x, pivot) != phi(pivot, right)`, where
    /// `p[pivot] < p[left] < p[right]` and `phi(left, right) = phi(pivot, right)`.
    fn rising_claim(
        &mut self,
        left: usize,
        pivot: usize,
        right: usize,
        range: std::ops::Range<usize>,
    ) -> Flow {
        for x in range {
            let held = self.col(x, pivot)? != self.col(pivot, right)?;
            self.note(
                format!(
                    "phi({},{})!=phi({},{})",
                    dl(x),
                    dl(pivot),
                    dl(pivot),
                    dl(right)
                ),
                held,
            );
            if held {
                continue;
            }
            let held = self.col(x, right)? == self.col(pivot, right)?;
            self.check(
                format!(
                    "phi({},{})=phi({},{})",
                    dl(x),
                    dl(right),
                    dl(pivot),
                    dl(right)
                ),
                held,
                [x, x + 1, pivot + 1, right + 1],
                Rule::I,
            )?;
            let held = self.col(left, x)? == self.col(x, pivot)?;
            self.check(
                format!("phi({},{})=phi({},{})", dl(left), dl(x), dl(x), dl(pivot)),
                held,
                [left, x, x + 1, pivot + 1],
                Rule::II,
            )?;
            let held = !(self.col(left, x)? == self.col(left, right)?
                && self.col(left, right)? == self.col(x, right)?);
            self.terminal(
                format!(
                    "not(phi({},{})=phi({},{})=phi({},{}))",
                    dl(left),
                    dl(x),
                    dl(left),
                    dl(right),
                    dl(x),
                    dl(right)
                ),
                held,
                [left, x, x + 1, right + 1],
                Rule::III,
            )?;
        }
        Ok(())
    }

    /// `p[a1] > p[a2]`.
    fn falling(&mut self, a1: usize, a2: usize) -> Flow {
        let b = self.prev(4, a2)?;
        let c = self.next(3, b)?;
        let d = self.prev(2, c)?;
        let e = self.next(1, d)?;
        let f = e - 1;

        self.falling_claim(a1, b, a2, b + 1..c + 1)?;
        self.falling_claim(b, d, c, d + 1..e + 1)?;

        let held = self.col(b, d)? == self.col(b, f)?;
        self.expect(
            format!("phi({},{})=phi({},{})", dl(b), dl(d), dl(b), dl(f)),
            held,
        )?;
        let held = self.col(d, f)? == self.col(f, e)?;
        self.check(
            format!("phi({},{})=phi({},{})", dl(d), dl(f), dl(f), dl(e)),
            held,
            [d, f, f + 1, e + 1],
            Rule::II,
        )?;
        let held = self.col(b, f)? == self.col(f, e)?;
        self.terminal(
            format!("phi({},{})=phi({},{})", dl(b), dl(f), dl(f), dl(e)),
            held,
            [b, f, f + 1, e + 1],
            Rule::II,
        )
    }

    /// For `x` in `range`: `phi(pivot, x) != phi(left, pivot)`, where
    /// `p[pivot] < p[right] < p[left]`.
    fn falling_claim(
        &mut self,
        left: usize,
        pivot: usize,
        right: usize,
        range: std::ops::Range<usize>,
    ) -> Flow {
        for x in range {
            let held = self.col(pivot, x)? != self.col(left, pivot)?;
            self.note(
                format!(
                    "phi({},{})!=phi({},{})",
                    dl(pivot),
                    dl(x),
                    dl(left),
                    dl(pivot)
                ),
                held,
            );
            if held {
                continue;
            }
            let held = self.col(left, x)? == self.col(left, pivot)?;
            self.check(
                format!(
                    "phi({},{})=phi({},{})",
                    dl(left),
                    dl(x),
                    dl(left),
                    dl(pivot)
                ),
                held,
                [left, pivot, x, x + 1],
                Rule::I,
            )?;
            let held = self.col(left, pivot)? == self.col(pivot, right)?;
            self.check(
                format!(
                    "phi({},{})=phi({},{})",
                    dl(left),
                    dl(pivot),
                    dl(pivot),
                    dl(right)
                ),
                held,
                [left, pivot, pivot + 1, right + 1],
                Rule::II,
            )?;
            let held = self.col(left, x)? == self.col(x, right)?;
            self.check(
                format!("phi({},{})=phi({},{})", dl(left), dl(x), dl(x), dl(right)),
                held,
                [left, x, x + 1, right + 1],
                Rule::II,
            )?;
            let held = !(self.col(pivot, x)? == self.col(pivot, right)?
                && self.col(pivot, right)? == self.col(x, right)?);
            self.terminal(
                format!(
                    "not(phi({},{})=phi({},{})=phi({},{}))",
                    dl(pivot),
                    dl(x),
                    dl(pivot),
                    dl(right),
                    dl(x),
                    dl(right)
                ),
                held,
                [pivot, x, x + 1, right + 1],
                Rule::III,
            )?;
        }
        Ok(())
    }
}

/// 1-based label of a profile index.
fn dl(i: usize) -> String {
    format!("d{}", i + 1)
}

fn inconsistent(e: Error) -> Error {
    Error::InternalInconsistency(format!("layer structure: {e}"))
}

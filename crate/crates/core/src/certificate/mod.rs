//! Layered local-maxima sequences over the profile of a vertex set, and
//! the edge extractor built on them.
//!
//! Starting from all profile indices, each layer keeps the first `beta_t`
//! indices that are strict local maxima with respect to the previous layer.
//! Every layer then satisfies
//!
//! > (*) for consecutive members `a < b`, every profile value strictly
//! > between them is below `max(p[a], p[b])`, and `p[a] != p[b]`.
//!
//! Layers hold profile indices (0-based; index `j` is the delta between
//! `Q[j]` and `Q[j + 1]`). Reports print them 1-based.

mod extract;

pub use extract::{extract_edge, extract_edge_with, Branch, ExtractionTrace, TraceCase, TraceStep};

use crate::construction::{Edge4, HypergraphView, Rule};
use crate::delta::{monotonicity, profile_of, DeltaValue, Monotonicity, OrderedTuple};
use crate::error::{Error, Result};

/// Layer construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerParams {
    /// Monotone runs of this length inside a layer stop the construction.
    pub n: usize,
    /// `beta_t = beta_{t-1} / factor`.
    pub factor: usize,
    pub depth: usize,
    /// Require `factor = 2n` and exact divisibility at every level.
    pub strict: bool,
}

impl LayerParams {
    pub fn new(n: usize, factor: usize, depth: usize) -> Self {
        Self {
            n,
            factor,
            depth,
            strict: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::BadParameters(format!(
                "n must be at least 3, got {}",
                self.n
            )));
        }
        if self.factor < 2 {
            return Err(Error::BadParameters(format!(
                "factor must be at least 2, got {}",
                self.factor
            )));
        }
        if self.depth < 1 {
            return Err(Error::BadParameters("depth must be at least 1".into()));
        }
        if self.strict && self.factor != 2 * self.n {
            return Err(Error::BadParameters(format!(
                "strict mode needs factor = 2n = {}, got {}",
                2 * self.n,
                self.factor
            )));
        }
        Ok(())
    }
}

/// Requested layer sizes `beta_0, ..., beta_depth`.
pub fn beta_schedule(beta0: u64, factor: u64, depth: usize, strict: bool) -> Result<Vec<u64>> {
    if factor < 2 {
        return Err(Error::BadParameters("factor must be at least 2".into()));
    }
    let mut betas = vec![beta0];
    for t in 1..=depth {
        let prev = betas[t - 1];
        if strict && prev % factor != 0 {
            return Err(Error::BadParameters(format!(
                "beta_{} = {prev} is not divisible by {factor}",
                t - 1
            )));
        }
        betas.push(prev / factor);
    }
    Ok(betas)
}

/// Layer sizes for a set of `64 n^5 + 1` vertices split by `2n` five times.
pub fn standard_betas(n: u64) -> Result<Vec<u64>> {
    let beta0 = n
        .checked_pow(5)
        .and_then(|p| p.checked_mul(64))
        .ok_or_else(|| Error::BadParameters(format!("64 n^5 overflows for n={n}")))?;
    beta_schedule(beta0, 2 * n, 5, true)
}

/// `n` or more consecutive members of one layer with strictly monotone
/// profile values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneRun {
    /// Layer the run was found in.
    pub level: usize,
    pub indices: Vec<usize>,
    pub direction: Monotonicity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStack {
    q: Vec<u64>,
    profile: Vec<DeltaValue>,
    factor: usize,
    layers: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerOutcome {
    Layers(LayerStack),
    Run(MonotoneRun),
}

/// First window of `n` consecutive layer members with monotone values.
fn find_run(layer: &[usize], profile: &[DeltaValue], n: usize) -> Option<(usize, Monotonicity)> {
    let (mut up, mut down) = (1usize, 1usize);
    for k in 1..layer.len() {
        let (prev, cur) = (profile[layer[k - 1]], profile[layer[k]]);
        up = if prev < cur { up + 1 } else { 1 };
        down = if prev > cur { down + 1 } else { 1 };
        if up >= n {
            return Some((k + 1 - n, Monotonicity::Increasing));
        }
        if down >= n {
            return Some((k + 1 - n, Monotonicity::Decreasing));
        }
    }
    None
}

/// Builds the layer stack of `q`, or returns the first monotone run of
/// length `params.n` met in a layer before it is refined.
pub fn build_layers(q: &OrderedTuple, params: &LayerParams) -> Result<LayerOutcome> {
    params.validate()?;
    if q.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: q.len(),
        });
    }
    let profile = profile_of(q.as_slice());
    let betas = beta_schedule(
        profile.len() as u64,
        params.factor as u64,
        params.depth,
        params.strict,
    )?;
    let mut layers: Vec<Vec<usize>> = vec![(0..profile.len()).collect()];
    for t in 1..=params.depth {
        let prev = &layers[t - 1];
        if let Some((start, direction)) = find_run(prev, &profile, params.n) {
            return Ok(LayerOutcome::Run(MonotoneRun {
                level: t - 1,
                indices: prev[start..start + params.n].to_vec(),
                direction,
            }));
        }
        let need = betas[t] as usize;
        if need == 0 {
            return Err(Error::InsufficientMaxima(t));
        }
        let next: Vec<usize> = prev
            .windows(3)
            .filter(|w| profile[w[0]] < profile[w[1]] && profile[w[1]] > profile[w[2]])
            .map(|w| w[1])
            .take(need)
            .collect();
        if next.len() < need {
            return Err(Error::InsufficientMaxima(t));
        }
        layers.push(next);
    }
    let stack = LayerStack {
        q: q.as_slice().to_vec(),
        profile,
        factor: params.factor,
        layers,
    };
    if !(stack.check_star() && stack.check_nesting()) {
        return Err(Error::InternalInconsistency(
            "constructed layers violate (*)".into(),
        ));
    }
    Ok(LayerOutcome::Layers(stack))
}

impl LayerStack {
    /// Assembles a stack without any checks; the `check_*` methods tell
    /// whether the result is well formed.
    pub fn from_raw_parts(q: Vec<u64>, factor: usize, layers: Vec<Vec<usize>>) -> Self {
        let profile = profile_of(&q);
        Self {
            q,
            profile,
            factor,
            layers,
        }
    }

    pub fn q(&self) -> &[u64] {
        &self.q
    }

    pub fn profile(&self) -> &[DeltaValue] {
        &self.profile
    }

    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer(&self, t: usize) -> &[usize] {
        &self.layers[t]
    }

    /// Property (*) at every level, re-checked by scanning every gap.
    pub fn check_star(&self) -> bool {
        self.layers.iter().all(|layer| {
            layer.windows(2).all(|w| {
                let (a, b) = (w[0], w[1]);
                let top = self.profile[a].max(self.profile[b]);
                self.profile[a] != self.profile[b] && (a + 1..b).all(|x| self.profile[x] < top)
            })
        })
    }

    /// Each layer is a subsequence of the previous one and consists of
    /// strict local maxima with respect to it.
    pub fn check_nesting(&self) -> bool {
        self.layers.windows(2).all(|pair| {
            let (parent, child) = (&pair[0], &pair[1]);
            child.iter().all(|&j| match parent.binary_search(&j) {
                Ok(pos) if pos > 0 && pos + 1 < parent.len() => {
                    self.profile[parent[pos - 1]] < self.profile[j]
                        && self.profile[parent[pos + 1]] < self.profile[j]
                }
                _ => false,
            }) && child.windows(2).all(|w| w[0] < w[1])
        })
    }

    /// Member of layer `level` adjacent to `j` (`j` must belong to it).
    pub(crate) fn adjacent(&self, level: usize, j: usize, forward: bool) -> Result<usize> {
        let layer = &self.layers[level];
        let pos = layer
            .binary_search(&j)
            .map_err(|_| Error::NotInLayer { index: j, level })?;
        let other = if forward {
            pos.checked_add(1)
        } else {
            pos.checked_sub(1)
        };
        other
            .and_then(|p| layer.get(p).copied())
            .ok_or(Error::BoundaryElement(j))
    }

    /// Closest members of layer `t - 1` on either side of `j`, where `j`
    /// belongs to layer `t`.
    pub fn neighbor_indices(&self, t: usize, j: usize) -> Result<(usize, usize)> {
        if t == 0 || t > self.depth() {
            return Err(Error::BadParameters(format!(
                "level must be in 1..={}, got {t}",
                self.depth()
            )));
        }
        if self.layers[t].binary_search(&j).is_err() {
            return Err(Error::NotInLayer { index: j, level: t });
        }
        Ok((
            self.adjacent(t - 1, j, false)?,
            self.adjacent(t - 1, j, true)?,
        ))
    }

    /// Every profile value in `[j-, j+]` other than `j` itself is below `p[j]`.
    pub fn check_observation(&self, t: usize, j: usize) -> Result<bool> {
        let (lo, hi) = self.neighbor_indices(t, j)?;
        Ok((lo..=hi).all(|x| x == j || self.profile[x] < self.profile[j]))
    }
}

/// Good triple found inside a monotone run and the edge it yields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunWitness {
    /// Profile indices of the triple.
    pub positions: [usize; 3],
    /// Their profile values.
    pub values: [DeltaValue; 3],
    pub edge: Edge4,
}

/// Turns a good triple inside a monotone layer run into a rule-I edge.
///
/// For an increasing run and triple positions `j1 < j2 < j3` the quad is
/// `(Q[j1], Q[j1+1], Q[j2+1], Q[j3+1])`; for a decreasing run it is
/// `(Q[j1], Q[j2], Q[j3], Q[j3+1])`. Either way its profile is the triple
/// itself, provided the run comes from a layer with property (*).
pub fn monotone_witness(
    h: &HypergraphView,
    q: &OrderedTuple,
    run: &MonotoneRun,
) -> Result<Option<RunWitness>> {
    h.check_vertices(q.as_slice())?;
    let profile = profile_of(q.as_slice());
    let idx = &run.indices;
    if idx.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: idx.len(),
        });
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) || idx.last().is_some_and(|&j| j >= profile.len()) {
        return Err(Error::BadParameters(
            "run indices out of order or range".into(),
        ));
    }
    let values: Vec<DeltaValue> = idx.iter().map(|&j| profile[j]).collect();
    let direction = monotonicity(&values)?;
    if direction == Monotonicity::No {
        return Err(Error::NotMonotone);
    }
    let phi = h.phi();
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            for k in j + 1..idx.len() {
                if !phi.good(values[i], values[j], values[k]) {
                    continue;
                }
                let (j1, j2, j3) = (idx[i], idx[j], idx[k]);
                let quad = match direction {
                    Monotonicity::Increasing => [q[j1], q[j1 + 1], q[j2 + 1], q[j3 + 1]],
                    _ => [q[j1], q[j2], q[j3], q[j3 + 1]],
                };
                return match h.edge_predicate(&quad)? {
                    Some(Rule::I) => Ok(Some(RunWitness {
                        positions: [j1, j2, j3],
                        values: [values[i], values[j], values[k]],
                        edge: Edge4 {
                            quad,
                            rule: Rule::I,
                        },
                    })),
                    other => Err(Error::InternalInconsistency(format!(
                        "run witness {quad:?} fired {other:?} instead of rule I"
                    ))),
                };
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{Color, PairColoring};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tuple(v: &[u64]) -> OrderedTuple {
        OrderedTuple::new(v.to_vec()).unwrap()
    }

    fn layers_of(outcome: LayerOutcome) -> LayerStack {
        match outcome {
            LayerOutcome::Layers(s) => s,
            LayerOutcome::Run(r) => panic!("unexpected run {r:?}"),
        }
    }

    #[test]
    fn single_layer_example() {
        // profile (1, 0, 3, 2): 1-based position 3 is the only interior maximum
        let q = tuple(&[0, 2, 3, 11, 15]);
        let stack = layers_of(build_layers(&q, &LayerParams::new(10, 4, 1)).unwrap());
        assert_eq!(stack.profile(), &[1, 0, 3, 2]);
        assert_eq!(stack.layer(0), &[0, 1, 2, 3]);
        assert_eq!(stack.layer(1), &[2]);
        assert_eq!(stack.neighbor_indices(1, 2), Ok((1, 3)));
        assert_eq!(stack.check_observation(1, 2), Ok(true));
        assert_eq!(
            stack.neighbor_indices(1, 1),
            Err(Error::NotInLayer { index: 1, level: 1 })
        );
    }

    #[test]
    fn boundary_element() {
        // layers (0..4) and (2); ask for a level-0 boundary by building a stack
        // whose level-1 member sits at the edge of level 0
        let stack =
            LayerStack::from_raw_parts(vec![0, 2, 3, 11, 15], 4, vec![vec![0, 1, 2, 3], vec![3]]);
        assert_eq!(stack.neighbor_indices(1, 3), Err(Error::BoundaryElement(3)));
        assert!(!stack.check_nesting());
    }

    #[test]
    fn run_example() {
        let q = tuple(&[0, 1, 3, 7]);
        match build_layers(&q, &LayerParams::new(3, 2, 1)).unwrap() {
            LayerOutcome::Run(run) => {
                assert_eq!(run.indices, vec![0, 1, 2]);
                assert_eq!(run.direction, Monotonicity::Increasing);
                assert_eq!(run.level, 0);
            }
            other => panic!("expected run, got {other:?}"),
        }
    }

    #[test]
    fn two_vertices_have_no_maxima() {
        let q = tuple(&[0, 5]);
        assert_eq!(
            build_layers(&q, &LayerParams::new(3, 2, 1)),
            Err(Error::InsufficientMaxima(1))
        );
        assert!(matches!(
            build_layers(&q, &LayerParams::new(3, 1, 1)),
            Err(Error::BadParameters(_))
        ));
    }

    #[test]
    fn corrupted_stack_fails_checks() {
        // profile (1, 0, 3, 2); claim index 1 (value 0) is a maximum
        let stack =
            LayerStack::from_raw_parts(vec![0, 2, 3, 11, 15], 4, vec![vec![0, 1, 2, 3], vec![1]]);
        assert_eq!(stack.check_observation(1, 1), Ok(false));
        assert!(!stack.check_nesting());
        let bad_star = LayerStack::from_raw_parts(
            vec![0, 2, 3, 11, 15],
            4,
            vec![vec![0, 1, 2, 3], vec![0, 3]],
        );
        // between 0 (value 1) and 3 (value 2) sits value 3
        assert!(!bad_star.check_star());
    }

    #[test]
    fn standard_betas_end_at_two() {
        for n in 2..=100 {
            let betas = standard_betas(n).unwrap();
            assert_eq!(betas[5], 2, "n={n}");
            assert_eq!(betas[0], 64 * n.pow(5));
        }
        assert!(beta_schedule(10, 4, 1, true).is_err());
        assert_eq!(beta_schedule(10, 4, 2, false), Ok(vec![10, 2, 0]));
    }

    fn random_q(rng: &mut ChaCha8Rng, size: usize, width: u32) -> OrderedTuple {
        let mut set = std::collections::BTreeSet::new();
        while set.len() < size {
            set.insert(rng.random_range(0..1u64 << width));
        }
        OrderedTuple::new(set.into_iter().collect()).unwrap()
    }

    #[test]
    fn random_stacks_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut built = 0;
        for _ in 0..300 {
            let size = rng.random_range(20..400);
            let q = random_q(&mut rng, size, 16);
            let params = LayerParams::new(1000, rng.random_range(2..5), rng.random_range(1..5));
            let Ok(LayerOutcome::Layers(stack)) = build_layers(&q, &params) else {
                continue;
            };
            built += 1;
            assert!(stack.check_star() && stack.check_nesting());
            for t in 1..=stack.depth() {
                for &j in stack.layer(t) {
                    assert_eq!(stack.check_observation(t, j), Ok(true));
                    let (lo, hi) = stack.neighbor_indices(t, j).unwrap();
                    assert!(stack.profile()[lo] < stack.profile()[j]);
                    assert!(stack.profile()[hi] < stack.profile()[j]);
                }
            }
        }
        assert!(built > 50, "only {built} stacks built");
    }

    #[test]
    fn witness_examples() {
        let phi = PairColoring::from_code(3, 0b010);
        let h = HypergraphView::new(3, phi).unwrap();
        let q = tuple(&[0, 1, 3, 7]);
        let run = MonotoneRun {
            level: 0,
            indices: vec![0, 1, 2],
            direction: Monotonicity::Increasing,
        };
        let w = monotone_witness(&h, &q, &run).unwrap().unwrap();
        assert_eq!(w.edge.quad, [0, 1, 3, 7]);
        assert_eq!(w.edge.rule, Rule::I);

        let mono = HypergraphView::new(3, PairColoring::uniform(3, Color::Red)).unwrap();
        assert_eq!(monotone_witness(&mono, &q, &run), Ok(None));

        let peak = tuple(&[0, 1, 5, 7]);
        assert_eq!(
            monotone_witness(&mono, &peak, &run),
            Err(Error::NotMonotone)
        );
    }

    #[test]
    fn decreasing_run_witness() {
        // profile (2, 1, 0): decreasing
        let q = tuple(&[0, 4, 6, 7]);
        let phi = PairColoring::from_code(3, 0b010);
        let h = HypergraphView::new(3, phi).unwrap();
        let run = MonotoneRun {
            level: 0,
            indices: vec![0, 1, 2],
            direction: Monotonicity::Decreasing,
        };
        let w = monotone_witness(&h, &q, &run).unwrap().unwrap();
        assert_eq!(w.edge.quad, [0, 4, 6, 7]);
        assert_eq!(w.values, [2, 1, 0]);
    }
}

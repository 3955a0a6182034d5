//! Exhaustive checks on small instances: `K_5^(4)` search, exact
//! independence numbers and a randomized greedy lower bound.
//!
//! Graphs with at most 64 vertices are indexed by an [`EdgeIndex`]: for each
//! triple `{a, b, c}` a 64-bit mask of the vertices `w` such that
//! `{a, b, c, w}` is an edge. Both searches then run on bit operations.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::coloring::trial_rng;
use crate::construction::HypergraphView;
use crate::delta::OrderedTuple;
use crate::error::{Error, Result};

/// Default vertex cap for [`find_k5`] and [`independence_number`].
pub const EXACT_CAP: u64 = 64;

/// Vertices sampled by [`greedy_independent_lower_bound`] on large graphs.
pub const GREEDY_SAMPLE: u64 = 1024;

/// Per-triple completion masks of a graph on at most 64 vertices.
pub struct EdgeIndex {
    n: usize,
    masks: Vec<u64>,
}

impl EdgeIndex {
    pub fn build(h: &HypergraphView, cap: u64) -> Result<Self> {
        let cap = cap.min(EXACT_CAP);
        if h.vertex_count() > cap {
            return Err(Error::TooLarge {
                size: h.vertex_count(),
                cap,
            });
        }
        let n = h.vertex_count() as usize;
        let mut masks = vec![0u64; n * n * n];
        let key = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if h.rule_unchecked(a as u64, b as u64, c as u64, d as u64)
                            .is_some()
                        {
                            masks[key(a, b, c)] |= 1 << d;
                            masks[key(a, b, d)] |= 1 << c;
                            masks[key(a, c, d)] |= 1 << b;
                            masks[key(b, c, d)] |= 1 << a;
                        }
                    }
                }
            }
        }
        Ok(Self { n, masks })
    }

    /// Same graph with vertex `order[i]` renamed to `i`.
    fn relabeled(&self, order: &[usize]) -> Self {
        let n = self.n;
        let mut inv = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            inv[v] = i;
        }
        let mut masks = vec![0u64; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut old = self.completions_any(order[a], order[b], order[c]);
                    let mut m = 0u64;
                    while old != 0 {
                        m |= 1 << inv[old.trailing_zeros() as usize];
                        old &= old - 1;
                    }
                    masks[(a * n + b) * n + c] = m;
                }
            }
        }
        Self { n, masks }
    }

    /// Number of edges through each vertex.
    fn degrees(&self) -> Vec<u64> {
        let n = self.n;
        let mut deg = vec![0u64; n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut m = self.completions(a, b, c) & above(c);
                    let k = m.count_ones() as u64;
                    deg[a] += k;
                    deg[b] += k;
                    deg[c] += k;
                    while m != 0 {
                        deg[m.trailing_zeros() as usize] += 1;
                        m &= m - 1;
                    }
                }
            }
        }
        deg
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Vertices completing `{a, b, c}` (given in increasing order) to an edge.
    #[inline(always)]
    pub fn completions(&self, a: usize, b: usize, c: usize) -> u64 {
        debug_assert!(a < b && b < c);
        self.masks[(a * self.n + b) * self.n + c]
    }

    fn completions_any(&self, x: usize, y: usize, z: usize) -> u64 {
        let mut t = [x, y, z];
        t.sort_unstable();
        self.completions(t[0], t[1], t[2])
    }

    /// Lexicographically first 5-set starting at `a` whose 4-subsets are
    /// all edges.
    fn k5_from(&self, a: usize) -> Option<[u64; 5]> {
        let n = self.n;
        for b in a + 1..n {
            for c in b + 1..n {
                let abc = self.completions(a, b, c) & above(c);
                let mut ds = abc;
                while ds != 0 {
                    let d = ds.trailing_zeros() as usize;
                    ds &= ds - 1;
                    let es = abc
                        & above(d)
                        & self.completions(a, b, d)
                        & self.completions(a, c, d)
                        & self.completions(b, c, d);
                    if es != 0 {
                        let e = es.trailing_zeros() as u64;
                        return Some([a as u64, b as u64, c as u64, d as u64, e]);
                    }
                }
            }
        }
        None
    }

    pub fn find_k5(&self) -> Option<[u64; 5]> {
        (0..self.n)
            .into_par_iter()
            .find_map_first(|a| self.k5_from(a))
    }

    /// Maximum independent set by Russian-doll search over vertices sorted
    /// by decreasing degree: for `i` from the last position down, `doll[i]`
    /// is the independence number of positions `i..n`, and it bounds every
    /// branch drawing only from them.
    pub fn independence_number(&self) -> AlphaResult {
        let deg = self.degrees();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
        let mut r = self.relabeled(&order).doll_search();
        r.witness = r
            .witness
            .iter()
            .map(|&i| order[i as usize] as u64)
            .collect();
        r.witness.sort_unstable();
        r
    }

    fn doll_search(&self) -> AlphaResult {
        let n = self.n;
        let mut search = AlphaSearch {
            index: self,
            doll: vec![0; n],
            conflicts: vec![[0; 64]; n + 1],
            current: Vec::with_capacity(n),
            best: Vec::new(),
            found: false,
        };
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for i in (0..n).rev() {
            search.found = false;
            search.current.push(i);
            if search.best.is_empty() {
                search.best.push(i);
            }
            search.branch(above(i) & all);
            search.current.pop();
            search.doll[i] = search.best.len();
        }
        AlphaResult {
            alpha: search.best.len(),
            witness: search.best.iter().map(|&v| v as u64).collect(),
        }
    }

    /// Whether the vertex set `mask` contains no edge.
    pub fn is_independent_mask(&self, mask: u64) -> bool {
        let vs = bits(mask);
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                for &c in &vs[j + 1..] {
                    if self.completions(a, b, c) & mask & above(c) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[inline(always)]
fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !0u64 << (v + 1)
    }
}

fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

struct AlphaSearch<'a> {
    index: &'a EdgeIndex,
    doll: Vec<usize>,
    /// `conflicts[d][x]`: vertices `y` such that `x`, `y` and two of the
    /// first `d` chosen vertices form an edge.
    conflicts: Vec<[u64; 64]>,
    current: Vec<usize>,
    best: Vec<usize>,
    found: bool,
}

impl AlphaSearch<'_> {
    /// Upper bound on an independent subset of `candidates`: the smaller of
    /// the doll bound (candidates before `k` plus `doll[k]`, minimised over
    /// `k`) and a greedy clique partition of the conflict graph.
    fn bound(&self, candidates: u64, limit: usize) -> usize {
        let mut best = candidates.count_ones() as usize;
        let mut rest = candidates;
        let mut before = 0;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            best = best.min(before + self.doll[k]);
            before += 1;
            rest &= rest - 1;
        }
        if best <= limit || self.current.len() < 2 {
            return best;
        }
        let adj = &self.conflicts[self.current.len()];
        let mut rest = candidates;
        let mut cliques = 0;
        while rest != 0 && cliques < best {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut pool = rest & adj[x];
            while pool != 0 {
                let y = pool.trailing_zeros() as usize;
                rest &= !(1 << y);
                pool &= adj[y] & !(1 << y);
            }
            cliques += 1;
        }
        best.min(cliques)
    }

    /// `candidates` holds the vertices that can join `current` without
    /// closing an edge. Stops once `best` grows, since a suffix gains at
    /// most one over the next one.
    fn branch(&mut self, mut candidates: u64) {
        if self.current.len() > self.best.len() {
            self.best.clone_from(&self.current);
            self.found = true;
            return;
        }
        let depth = self.current.len();
        while candidates != 0 {
            let room = self.best.len() - depth;
            if self.bound(candidates, room) <= room {
                return;
            }
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let next = candidates & !self.conflicts[depth][v];
            let (lower, upper) = self.conflicts.split_at_mut(depth + 1);
            let (old, new) = (&lower[depth], &mut upper[0]);
            let mut rest = next;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut m = old[x];
                for &s in &self.current {
                    m |= self.index.completions_any(s, v, x);
                }
                new[x] = m;
            }
            self.current.push(v);
            self.branch(next);
            self.current.pop();
            if self.found {
                return;
            }
        }
    }
}

/// A maximum independent set and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    pub alpha: usize,
    pub witness: Vec<u64>,
}

/// True iff no 4-subset of `set` is an edge.
pub fn is_independent(h: &HypergraphView, set: &OrderedTuple) -> Result<bool> {
    let s = set.as_slice();
    h.check_vertices(s)?;
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            for c in b + 1..s.len() {
                for d in c + 1..s.len() {
                    if h.rule_unchecked(s[a], s[b], s[c], s[d]).is_some() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// First 5-set (lexicographically) all of whose 4-subsets are edges.
pub fn find_k5(h: &HypergraphView, cap: u64) -> Result<Option<[u64; 5]>> {
    Ok(EdgeIndex::build(h, cap)?.find_k5())
}

pub fn independence_number(h: &HypergraphView, vertex_cap: u64) -> Result<AlphaResult> {
    Ok(EdgeIndex::build(h, vertex_cap)?.independence_number())
}

/// Random-order greedy independent set.
///
/// Graphs with more than [`GREEDY_SAMPLE`] vertices are sampled: only
/// `GREEDY_SAMPLE` distinct random vertices are offered to the greedy pass.
pub fn greedy_independent_lower_bound(h: &HypergraphView, seed: u64) -> OrderedTuple {
    let mut rng = trial_rng(seed, 0);
    let n = h.vertex_count();
    let mut order: Vec<u64> = if n <= GREEDY_SAMPLE {
        (0..n).collect()
    } else {
        let mut picked = std::collections::BTreeSet::new();
        while (picked.len() as u64) < GREEDY_SAMPLE {
            picked.insert(rng.random_range(0..n));
        }
        picked.into_iter().collect()
    };
    order.shuffle(&mut rng);

    let mut chosen: Vec<u64> = Vec::new();
    'next: for v in order {
        for (i, &x) in chosen.iter().enumerate() {
            for (j, &y) in chosen.iter().enumerate().skip(i + 1) {
                for &z in &chosen[j + 1..] {
                    let mut q = [x, y, z, v];
                    q.sort_unstable();
                    if h.rule_unchecked(q[0], q[1], q[2], q[3]).is_some() {
                        continue 'next;
                    }
                }
            }
        }
        chosen.push(v);
    }
    chosen.sort_unstable();
    OrderedTuple::new(chosen).expect("distinct vertices")
}

/// `<hex coloring> k5free=<bool> alpha=<int>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepLine {
    pub code: Vec<u64>,
    pub hex: String,
    pub k5free: bool,
    pub alpha: usize,
}

impl std::fmt::Display for SweepLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} k5free={} alpha={}",
            self.hex, self.k5free, self.alpha
        )
    }
}

/// K5 and alpha for one graph, sequentially. Used inside parallel sweeps.
pub fn sweep_line(h: &HypergraphView, cap: u64) -> Result<SweepLine> {
    let index = EdgeIndex::build(h, cap)?;
    let k5free = (0..index.vertex_count()).all(|a| index.k5_from(a).is_none());
    Ok(SweepLine {
        code: h.phi().words().to_vec(),
        hex: h.phi().to_hex(),
        k5free,
        alpha: index.independence_number().alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{Color, PairColoring};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn view(width: u32, phi: PairColoring) -> HypergraphView {
        HypergraphView::new(width, phi).unwrap()
    }

    fn tuple(v: &[u64]) -> OrderedTuple {
        OrderedTuple::new(v.to_vec()).unwrap()
    }

    /// Largest independent subset found by trying every subset.
    fn brute_alpha(h: &HypergraphView) -> usize {
        let n = h.vertex_count();
        let mut best = 0;
        for mask in 0u64..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let set: Vec<u64> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            if is_independent(h, &tuple(&set)).unwrap() {
                best = size;
            }
        }
        best
    }

    #[test]
    fn independence_examples() {
        let h = view(4, PairColoring::uniform(4, Color::Red));
        assert!(is_independent(&h, &tuple(&[0, 4, 5])).unwrap());
        assert!(!is_independent(&h, &tuple(&[0, 4, 5, 13])).unwrap());
        let h3 = view(3, PairColoring::from_code(3, 0b101));
        assert!(is_independent(&h3, &tuple(&[0, 1, 5, 7])).unwrap());
        assert!(is_independent(&h3, &tuple(&[0, 1, 5, 9])).is_err());
    }

    #[test]
    fn alpha_small_cases() {
        let h = view(2, PairColoring::uniform(2, Color::Red));
        let r = independence_number(&h, EXACT_CAP).unwrap();
        assert_eq!(r.alpha, 4);
        assert_eq!(r.witness, vec![0, 1, 2, 3]);

        let h = view(3, PairColoring::uniform(3, Color::Red));
        let r = independence_number(&h, EXACT_CAP).unwrap();
        assert_eq!(r.alpha, brute_alpha(&h));
        assert_eq!(r.alpha, 7);
        assert!(is_independent(&h, &tuple(&r.witness)).unwrap());

        let h = view(7, PairColoring::uniform(7, Color::Red));
        assert!(matches!(
            independence_number(&h, EXACT_CAP),
            Err(Error::TooLarge { size: 128, cap: 64 })
        ));
    }

    #[test]
    fn alpha_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let width = rng.random_range(2..=4);
            let universe = rng.random_range(width as usize..=6);
            let h = view(width, PairColoring::random(universe, &mut rng));
            let r = independence_number(&h, EXACT_CAP).unwrap();
            assert_eq!(r.alpha, brute_alpha(&h));
            assert!(r.alpha >= 3);
            assert!(is_independent(&h, &tuple(&r.witness)).unwrap());
        }
    }

    #[test]
    fn k5_absent_for_d3_and_d4() {
        for code in 0..8 {
            let h = view(3, PairColoring::from_code(3, code));
            assert_eq!(find_k5(&h, EXACT_CAP), Ok(None));
        }
        for code in 0..64 {
            let h = view(4, PairColoring::from_code(4, code));
            assert_eq!(find_k5(&h, EXACT_CAP), Ok(None));
        }
    }

    /// A hand-built graph where every 4-set is an edge must report a K5.
    #[test]
    fn k5_search_finds_planted_clique() {
        let n = 7;
        let mut masks = vec![0u64; n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    masks[(a * n + b) * n + c] = ((1u64 << n) - 1) & !(1 << a | 1 << b | 1 << c);
                }
            }
        }
        let index = EdgeIndex { n, masks };
        assert_eq!(index.find_k5(), Some([0, 1, 2, 3, 4]));
        assert_eq!(index.independence_number().alpha, 3);
    }

    #[test]
    fn greedy_is_independent_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for width in [3u32, 5, 8, 12] {
            let h = view(width, PairColoring::random(width as usize, &mut rng));
            let s = greedy_independent_lower_bound(&h, 3);
            assert!(s.len() >= 3);
            assert!(is_independent(&h, &s).unwrap());
            assert_eq!(s, greedy_independent_lower_bound(&h, 3));
        }
    }

    #[test]
    fn index_independence_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = view(4, PairColoring::random(4, &mut rng));
        let index = EdgeIndex::build(&h, EXACT_CAP).unwrap();
        for _ in 0..500 {
            let mask: u64 = rng.random::<u64>() & 0xffff;
            let set: Vec<u64> = (0..16).filter(|v| mask >> v & 1 == 1).collect();
            assert_eq!(
                index.is_independent_mask(mask),
                is_independent(&h, &tuple(&set)).unwrap()
            );
        }
    }
}

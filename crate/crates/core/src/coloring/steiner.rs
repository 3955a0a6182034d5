//! Greedy partial Steiner `(n, 3, 2)`-systems: families of triples on `n`
//! points in which every pair lies in at most one triple.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerSystem {
    pub n: usize,
    pub triples: Vec<[usize; 3]>,
}

impl SteinerSystem {
    pub fn count(&self) -> usize {
        self.triples.len()
    }

    fn used_pairs(&self) -> Vec<Vec<bool>> {
        let mut used = vec![vec![false; self.n]; self.n];
        for &[a, b, c] in &self.triples {
            for (x, y) in [(a, b), (a, c), (b, c)] {
                used[x][y] = true;
            }
        }
        used
    }

    /// No pair is covered by two triples.
    pub fn is_pair_disjoint(&self) -> bool {
        let mut seen = vec![vec![false; self.n]; self.n];
        for &[a, b, c] in &self.triples {
            for (x, y) in [(a, b), (a, c), (b, c)] {
                if seen[x][y] {
                    return false;
                }
                seen[x][y] = true;
            }
        }
        true
    }

    /// Every triple outside the system shares a pair with one inside it.
    pub fn is_maximal(&self) -> bool {
        let used = self.used_pairs();
        lex_triples(self.n).all(|[a, b, c]| used[a][b] || used[a][c] || used[b][c])
    }
}

fn lex_triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
}

/// Scans triples in lexicographic order, keeping each one whose three
/// pairs are all still unused.
pub fn greedy_partial_steiner(n: usize) -> Result<SteinerSystem> {
    if n < 3 {
        return Err(Error::BadArity { n, d: n });
    }
    let mut used = vec![vec![false; n]; n];
    let mut triples = Vec::new();
    for [a, b, c] in lex_triples(n) {
        if used[a][b] || used[a][c] || used[b][c] {
            continue;
        }
        used[a][b] = true;
        used[a][c] = true;
        used[b][c] = true;
        triples.push([a, b, c]);
    }
    Ok(SteinerSystem { n, triples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(greedy_partial_steiner(3).unwrap().triples, vec![[0, 1, 2]]);
        assert_eq!(greedy_partial_steiner(4).unwrap().count(), 1);
        let fano = greedy_partial_steiner(7).unwrap();
        assert_eq!(fano.count(), 7);
        assert!(fano.is_pair_disjoint() && fano.is_maximal());
        assert!(matches!(
            greedy_partial_steiner(2),
            Err(Error::BadArity { .. })
        ));
    }

    #[test]
    fn disjoint_maximal_and_dense() {
        for n in 3..=60 {
            let s = greedy_partial_steiner(n).unwrap();
            assert!(s.is_pair_disjoint(), "n={n}");
            assert!(s.is_maximal(), "n={n}");
            if n >= 6 {
                assert!(18 * s.count() >= n * (n - 1), "n={n}");
            }
        }
    }

    #[test]
    fn broken_system_detected() {
        let s = SteinerSystem {
            n: 5,
            triples: vec![[0, 1, 2], [0, 1, 3]],
        };
        assert!(!s.is_pair_disjoint());
        let s = SteinerSystem {
            n: 5,
            triples: vec![[0, 1, 2]],
        };
        assert!(!s.is_maximal());
    }
}

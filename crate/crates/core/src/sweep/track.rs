use crate::scalar::{c_dot, lit, Real};
use crate::spectra::SpectralDecomposition;

/// Largest `n` solved by exact assignment; greedy matching beyond.
const EXACT_ASSIGNMENT_MAX: usize = 12;
const MIN_OVERLAP: f64 = 0.2;
const DOMINANCE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Tracking<T> {
    /// Current state `perm[k]` continues previous state `k`.
    pub permutation: Vec<usize>,
    /// `|Σ_m Φ_prev,k,m Φ_cur,perm[k],m|` for every `k`.
    pub overlaps: Vec<T>,
    pub discontinuity: bool,
}

/// Matches the states of `cur` to those of `prev` by maximal total c-product
/// overlap.
///
/// The step is marked discontinuous when a matched overlap is below 0.2 or
/// fails to dominate the best unmatched overlap in its row by a factor of 2.
pub fn track_states<T: Real>(
    prev: &SpectralDecomposition<T>,
    cur: &SpectralDecomposition<T>,
) -> Tracking<T> {
    assert_eq!(prev.n(), cur.n(), "tracking needs equal sizes");
    let n = prev.n();
    let w: Vec<Vec<T>> = prev
        .states
        .iter()
        .map(|p| cur.states.iter().map(|c| c_dot(&p.vector, &c.vector).norm()).collect())
        .collect();
    let permutation = if n <= EXACT_ASSIGNMENT_MAX { exact_assignment(&w) } else { greedy_assignment(&w) };

    let overlaps: Vec<T> = (0..n).map(|k| w[k][permutation[k]]).collect();
    let discontinuity = (0..n).any(|k| {
        let matched = overlaps[k];
        let rival = (0..n)
            .filter(|&l| l != permutation[k])
            .fold(T::zero(), |m, l| m.max(w[k][l]));
        matched < lit(MIN_OVERLAP) || matched < rival * lit(DOMINANCE)
    });
    Tracking { permutation, overlaps, discontinuity }
}

/// Maximum-weight perfect matching by dynamic programming over subsets.
fn exact_assignment<T: Real>(w: &[Vec<T>]) -> Vec<usize> {
    let n = w.len();
    let full = 1usize << n;
    let mut best = vec![T::neg_infinity(); full];
    let mut choice = vec![usize::MAX; full];
    best[0] = T::zero();
    for mask in 0..full {
        if best[mask] == T::neg_infinity() {
            continue;
        }
        let k = mask.count_ones() as usize;
        if k == n {
            continue;
        }
        for (l, &weight) in w[k].iter().enumerate() {
            if mask & (1 << l) != 0 {
                continue;
            }
            let next = mask | (1 << l);
            let value = best[mask] + weight;
            if value > best[next] {
                best[next] = value;
                choice[next] = l;
            }
        }
    }
    let mut perm = vec![0; n];
    let mut mask = full - 1;
    for k in (0..n).rev() {
        let l = choice[mask];
        perm[k] = l;
        mask &= !(1 << l);
    }
    perm
}

fn greedy_assignment<T: Real>(w: &[Vec<T>]) -> Vec<usize> {
    let n = w.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).collect();
    pairs.sort_by(|&(a, b), &(c, d)| w[c][d].partial_cmp(&w[a][b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (k, l) in pairs {
        if perm[k] == usize::MAX && !used[l] {
            perm[k] = l;
            used[l] = true;
        }
    }
    perm
}

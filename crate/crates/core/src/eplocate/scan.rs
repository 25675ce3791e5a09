use crate::scalar::{lit, Real};
use crate::sweep::SweepResult;

/// A grid neighbourhood that may hold an exceptional point.
#[derive(Clone, Debug, PartialEq)]
pub struct EpCandidate<T> {
    /// Neighbouring grid points around the minimum.
    pub bracket: (T, T),
    /// Grid point with the smallest gap inside the bracket.
    pub a_guess: T,
    /// Tracked indices of the closest pair at `a_guess`.
    pub pair: (usize, usize),
    pub gap: T,
    pub min_r: T,
}

const GAP_FRACTION: f64 = 0.1;
const RIGIDITY_LIMIT: f64 = 0.5;

/// Local minima of the pair gap (below a tenth of the median gap) and of the
/// smallest phase rigidity (below 0.5). Candidates closer than one base grid
/// step are merged; refinement can otherwise split one minimum in two.
pub fn scan_minima<T: Real>(result: &SweepResult<T>) -> Vec<EpCandidate<T>> {
    let rows: Vec<_> = result.rows.iter().filter(|r| !r.flags.failed).collect();
    if rows.len() < 3 {
        return Vec::new();
    }
    let gaps: Vec<T> = rows.iter().map(|r| r.gap).collect();
    let rs: Vec<T> = rows.iter().map(|r| r.min_r()).collect();
    let gap_limit = median(&gaps) * lit(GAP_FRACTION);
    let r_limit = lit::<T>(RIGIDITY_LIMIT);

    let is_min = |v: &[T], i: usize| v[i] <= v[i - 1] && v[i] < v[i + 1];
    let mut found: Vec<EpCandidate<T>> = Vec::new();
    for i in 1..rows.len() - 1 {
        let by_gap = is_min(&gaps, i) && gaps[i] < gap_limit;
        let by_r = is_min(&rs, i) && rs[i] < r_limit;
        if by_gap || by_r {
            found.push(EpCandidate {
                bracket: (rows[i - 1].a, rows[i + 1].a),
                a_guess: rows[i].a,
                pair: rows[i].gap_pair,
                gap: gaps[i],
                min_r: rs[i],
            });
        }
    }

    let axis = &result.config.axis;
    let step = (axis.max - axis.min) / lit((axis.points.max(2) - 1) as f64);
    let mut merged: Vec<EpCandidate<T>> = Vec::new();
    for c in found {
        match merged.last_mut() {
            Some(last) if c.bracket.0 <= last.bracket.1 + step => {
                last.bracket.1 = last.bracket.1.max(c.bracket.1);
                last.min_r = last.min_r.min(c.min_r);
                if c.gap < last.gap {
                    last.a_guess = c.a_guess;
                    last.pair = c.pair;
                    last.gap = c.gap;
                }
            }
            _ => merged.push(c),
        }
    }
    merged
}

pub(crate) fn median<T: Real>(values: &[T]) -> T {
    let mut v: Vec<T> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return T::zero();
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) * lit(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median::<f64>(&[]), 0.0);
        assert_eq!(median(&[f64::INFINITY, 1.0]), 1.0);
    }
}

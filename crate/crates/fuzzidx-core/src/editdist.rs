//! Levenshtein edit distance over Unicode scalar values.
//!
//! Two routes: [`edit_distance`] runs the full two-row dynamic program, and
//! [`within_distance`] answers the bounded question `ED(a, b) <= d` with a
//! banded program that only touches cells within `d` of the diagonal. Fuzzy
//! expansion scans whole dictionaries, so the banded route is the hot path.

/// Minimum number of single-character insertions, deletions, or substitutions
/// transforming `a` into `b`. Symmetric; unit costs; no transpositions.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur: Vec<usize> = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            let delete = prev[j + 1] + 1;
            let insert = cur[j] + 1;
            cur[j + 1] = substitute.min(delete).min(insert);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `true` iff `edit_distance(a, b) <= d`.
///
/// Prunes on the length gap before touching any DP cell, then runs a banded
/// program restricted to `|i - j| <= d`. Cell values are capped at `d + 1`,
/// and a row whose entire band hits the cap ends the computation early.
pub fn within_distance(a: &str, b: &str, d: usize) -> bool {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.len().abs_diff(b.len()) > d {
        return false;
    }
    if d == 0 {
        return a == b;
    }

    // Cells outside the band read as `cap`; the cleared range extends one
    // cell past the band on each side so neighbour reads never see values
    // left over from two rows earlier.
    let cap = d + 1;
    let mut prev: Vec<usize> = vec![cap; b.len() + 1];
    let mut cur: Vec<usize> = vec![cap; b.len() + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(d.min(b.len()) + 1) {
        *cell = j;
    }

    for (i, &ca) in a.iter().enumerate() {
        let row = i + 1;
        let lo = row.saturating_sub(d);
        let hi = (row + d).min(b.len());
        cur[lo.saturating_sub(1)..=(hi + 1).min(b.len())].fill(cap);
        let mut row_min = cap;
        if lo == 0 {
            cur[0] = row;
            row_min = row;
        }
        for j in lo.max(1)..=hi {
            let substitute = prev[j - 1] + usize::from(ca != b[j - 1]);
            let delete = prev[j] + 1;
            let insert = cur[j - 1] + 1;
            cur[j] = substitute.min(delete).min(insert).min(cap);
            row_min = row_min.min(cur[j]);
        }
        if row_min >= cap {
            return false;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()] <= d
}

use crate::error::{Error, Result};

use super::NcMatrix;

/// An `r × s` block of identically zero entries with `r + s > N`.
/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HollowBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl HollowBlock {
    /// Checks the block against the matrix: every listed entry is zero and
    /// the sizes exceed the matrix order.
    pub fn verify(&self, p: &NcMatrix) -> bool {
        self.rows.len() + self.cols.len() > p.nrows()
            && self
                .rows
                .iter()
                .all(|&i| self.cols.iter().all(|&j| p.get(i, j).is_zero()))
    }
}

/// Finds a hollow zero block through the bipartite graph of nonzero entries.
///
/// A square matrix has no such block exactly when the graph has a perfect
/// matching; otherwise the complement of a minimum vertex cover (König) is
/// the block.
pub fn hollow_check(p: &NcMatrix) -> Result<Option<HollowBlock>> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    let n = p.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !p.get(i, j).is_zero()).collect())
        .collect();
    Ok(hollow_from_pattern(&adj, n))
}

pub(crate) fn hollow_from_pattern(adj: &[Vec<usize>], n: usize) -> Option<HollowBlock> {
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    for r in 0..n {
        let mut seen = vec![false; n];
        augment(r, adj, &mut seen, &mut match_col);
    }
    let mut match_row: Vec<Option<usize>> = vec![None; n];
    for (c, m) in match_col.iter().enumerate() {
        if let Some(r) = m {
            match_row[*r] = Some(c);
        }
    }
    let size = match_row.iter().filter(|m| m.is_some()).count();
    if size == n {
        return None;
    }

    // Alternating reachability from unmatched rows.
    let mut row_seen = vec![false; n];
    let mut col_seen = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&r| match_row[r].is_none()).collect();
    for &r in &stack {
        row_seen[r] = true;
    }
    while let Some(r) = stack.pop() {
        for &c in &adj[r] {
            if col_seen[c] {
                continue;
            }
            col_seen[c] = true;
            if let Some(r2) = match_col[c] {
                if !row_seen[r2] {
                    row_seen[r2] = true;
                    stack.push(r2);
                }
            }
        }
    }
    // Cover = unreached rows + reached columns; the block is its complement.
    let rows: Vec<usize> = (0..n).filter(|&r| row_seen[r]).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| !col_seen[c]).collect();
    debug_assert_eq!(2 * n - size, rows.len() + cols.len());
    Some(HollowBlock { rows, cols })
}

fn augment(r: usize, adj: &[Vec<usize>], seen: &mut [bool], match_col: &mut [Option<usize>]) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if match_col[c].is_none_or(|r2| augment(r2, adj, seen, match_col)) {
            match_col[c] = Some(r);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::NcPoly;

    fn pattern_matrix(pattern: &[&[u8]]) -> NcMatrix {
        let n = pattern.len();
        NcMatrix::from_fn(n, n, 1, |i, j| {
            if pattern[i][j] != 0 {
                NcPoly::var(1, 1).unwrap()
            } else {
                NcPoly::zero(1)
            }
        })
        .unwrap()
    }

    /// Brute force over all row and column subsets.
    fn has_hollow_block(pattern: &[&[u8]]) -> bool {
        let n = pattern.len();
        for rmask in 0u32..(1 << n) {
            for cmask in 0u32..(1 << n) {
                if (rmask.count_ones() + cmask.count_ones()) as usize <= n {
                    continue;
                }
                let zero = (0..n).all(|i| {
                    rmask & (1 << i) == 0
                        || (0..n).all(|j| cmask & (1 << j) == 0 || pattern[i][j] == 0)
                });
                if zero {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn reads_block_from_pattern() {
        let m = NcMatrix::from_rows(vec![
            vec![NcPoly::var(2, 1).unwrap(), NcPoly::zero(2)],
            vec![NcPoly::var(2, 2).unwrap(), NcPoly::zero(2)],
        ])
        .unwrap();
        let b = hollow_check(&m).unwrap().unwrap();
        assert_eq!(b, HollowBlock { rows: vec![0, 1], cols: vec![1] });
    }

    #[test]
    fn no_zero_entry_no_block() {
        assert!(hollow_check(&pattern_matrix(&[&[1, 1], &[1, 1]])).unwrap().is_none());
    }

    #[test]
    fn top_right_block() {
        let b = hollow_check(&pattern_matrix(&[&[1, 0, 0], &[1, 0, 0], &[1, 1, 1]]))
            .unwrap()
            .unwrap();
        assert_eq!(b, HollowBlock { rows: vec![0, 1], cols: vec![1, 2] });
    }

    #[test]
    fn agrees_with_brute_force_on_all_3x3_patterns() {
        for mask in 0u32..(1 << 9) {
            let rows: Vec<Vec<u8>> = (0..3)
                .map(|i| (0..3).map(|j| ((mask >> (3 * i + j)) & 1) as u8).collect())
                .collect();
            let refs: Vec<&[u8]> = rows.iter().map(Vec::as_slice).collect();
            let m = pattern_matrix(&refs);
            let found = hollow_check(&m).unwrap();
            assert_eq!(found.is_some(), has_hollow_block(&refs), "mask {mask:09b}");
            if let Some(b) = found {
                assert!(b.verify(&m));
            }
        }
    }

    #[test]
    fn rejects_rectangular() {
        assert!(hollow_check(&NcMatrix::zeros(2, 3, 1)).is_err());
    }
}

use crate::error::Result;
use crate::ncpoly::{NcMatrix, NcPoly, Word};

/// Replaces every entry of degree ≥ 2 by linear ones, one letter at a time.
///
/// An entry `P_ij = P' + a·w·x` (with `x` the last letter of a longest
/// word) becomes `P'`, and the matrix grows by
///
/// ```text
///   [ P'   a·w ]
///   [ -x    1  ]      (new row and column; -x sits in column j)
/// ```
///
/// whose Schur complement with respect to the unit corner restores `P_ij`.
/// The inner rank grows by exactly one per step. Returns the linear matrix
/// and the number of added rows.
pub fn linearize(p: &NcMatrix) -> Result<(NcMatrix, usize)> {
    let n_vars = p.n_vars();
    let mut rows: Vec<Vec<NcPoly>> = (0..p.nrows())
        .map(|i| (0..p.ncols()).map(|j| p.get(i, j).clone()).collect())
        .collect();
    let mut cols = p.ncols();
    let mut added = 0;
    loop {
        let found = rows.iter().enumerate().find_map(|(i, row)| {
            row.iter().position(|e| e.degree() >= 2).map(|j| (i, j))
        });
        let Some((i, j)) = found else { break };
        let entry = rows[i][j].clone();
        let (word, coeff) = entry
            .terms()
            .rev()
            .next()
            .map(|(w, c)| (w.clone(), c.clone()))
            .expect("degree >= 2 entry has terms");
        let letters = word.letters();
        let (head, last) = letters.split_at(letters.len() - 1);
        let last = NcPoly::letter(n_vars, last[0])?;
        let head = NcPoly::from_terms(n_vars, [(Word(head.to_vec()), coeff.clone())])?;
        let removed = NcPoly::from_terms(n_vars, [(word.clone(), coeff)])?;
        rows[i][j] = entry.checked_sub(&removed)?;

        for (r, row) in rows.iter_mut().enumerate() {
            row.push(if r == i { head.clone() } else { NcPoly::zero(n_vars) });
        }
        let mut new_row = vec![NcPoly::zero(n_vars); cols + 1];
        new_row[j] = last.neg();
        new_row[cols] = NcPoly::one(n_vars);
        rows.push(new_row);
        cols += 1;
        added += 1;
    }
    Ok((NcMatrix::from_rows(rows)?, added))
}

//! Hermite normal form over F_p[T].

use super::form::Vec3;
use crate::error::{precondition, Result};


/// Basis (as rows) of the R-module spanned by full-rank generators.
/// Rows come out upper triangular with monic pivots and entries above each
/// pivot reduced modulo it.
pub fn hnf(generators: &[Vec3]) -> Result<[Vec3; 3]> {
    if generators.is_empty() {
        return precondition("no generators");
    }
    let mut rows: Vec<Vec3> = generators.to_vec();
    let mut top = 0;
    for col in 0..3 {
        loop {
            // smallest-degree nonzero entry in this column among rows >= top
            let piv = (top..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by_key(|&r| rows[r][col].degree());
            let Some(piv) = piv else { return precondition("generators do not span a full-rank lattice") };
            rows.swap(top, piv);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].divmod(&rows[top][col])?.0;
                for k in 0..3 {
                    let t = &q * &rows[top][k];
                    rows[r][k] = &rows[r][k] - &t;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        let u = crate::field::fp::inv(rows[top][col].lead(), rows[top][col].p());
        for k in 0..3 {
            rows[top][k] = rows[top][k].scale(u);
        }
        top += 1;
    }
    // reduce above the pivots
    for c in 0..3 {
        for r in 0..c {
            let q = rows[r][c].divmod(&rows[c][c])?.0;
            if q.is_zero() {
                continue;
            }
            for k in 0..3 {
                let t = &q * &rows[c][k];
                rows[r][k] = &rows[r][k] - &t;
            }
        }
    }
    Ok([rows[0].clone(), rows[1].clone(), rows[2].clone()])
}

//! Smith normal form over `Z` with overflow-checked 64-bit arithmetic.

use serde::Serialize;

use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub rank: usize,
    /// Positive elementary divisors `d_1 | d_2 | ... | d_rank`.
    pub divisors: Vec<i64>,
}

fn abs(x: i64) -> Result<i64> {
    x.checked_abs().ok_or(Error::Overflow("Smith normal form"))
}

/// Position of the nonzero entry of least absolute value in the block `[t.., t..]`.
fn least_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), i64)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a[(i, j)].unsigned_abs() as i128;
            if v != 0 && best.is_none_or(|(_, b)| v < b as i128) {
                best = Some(((i, j), v as i64));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn smith_normal_form(matrix: &IntMatrix) -> Result<SmithForm> {
    let mut a = matrix.clone();
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < a.rows().min(a.cols()) {
        let Some((pi, pj)) = least_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let pivot = a[(t, t)];
            let mut clean = true;
            for i in t + 1..a.rows() {
                if a[(i, t)] != 0 {
                    a.sub_row(i, t, a[(i, t)] / pivot)?;
                    clean &= a[(i, t)] == 0;
                }
            }
            for j in t + 1..a.cols() {
                if a[(t, j)] != 0 {
                    a.sub_col(j, t, a[(t, j)] / pivot)?;
                    clean &= a[(t, j)] == 0;
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; promote it
                let mut best = (t, t, abs(pivot)?);
                for i in t + 1..a.rows() {
                    let v = abs(a[(i, t)])?;
                    if v != 0 && v < best.2 {
                        best = (i, t, v);
                    }
                }
                for j in t + 1..a.cols() {
                    let v = abs(a[(t, j)])?;
                    if v != 0 && v < best.2 {
                        best = (t, j, v);
                    }
                }
                a.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                continue;
            }
            let bad_row =
                (t + 1..a.rows()).find(|&i| (t + 1..a.cols()).any(|j| a[(i, j)] % pivot != 0));
            match bad_row {
                Some(i) => a.sub_row(t, i, -1)?,
                None => break,
            }
        }
        divisors.push(abs(a[(t, t)])?);
        t += 1;
    }
    Ok(SmithForm {
        rank: divisors.len(),
        divisors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> SmithForm {
        let cols = rows.first().map_or(0, Vec::len);
        smith_normal_form(&IntMatrix::from_rows(rows, cols).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let z = snf(&[vec![0, 0], vec![0, 0], vec![0, 0]]);
        assert_eq!((z.rank, z.divisors), (0, vec![]));
        let id = smith_normal_form(&IntMatrix::identity(3)).unwrap();
        assert_eq!((id.rank, id.divisors), (3, vec![1, 1, 1]));
        let m = snf(&[vec![2, 4], vec![6, 8]]);
        assert_eq!((m.rank, m.divisors), (2, vec![2, 4]));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) is equivalent to diag(1, 6)
        let m = snf(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(m.divisors, vec![1, 6]);
        let m = snf(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]);
        assert_eq!(m.divisors, vec![2, 2, 60]);
        let m = snf(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(m.divisors, vec![1, 3]);
    }

    #[test]
    fn empty_shapes() {
        let m = smith_normal_form(&IntMatrix::zeros(0, 4)).unwrap();
        assert_eq!(m.rank, 0);
        let m = smith_normal_form(&IntMatrix::zeros(3, 0)).unwrap();
        assert_eq!(m.rank, 0);
    }

    #[test]
    fn overflow_is_reported() {
        let rows = vec![vec![i64::MIN, 1], vec![1, i64::MAX]];
        let m = IntMatrix::from_rows(&rows, 2).unwrap();
        assert!(matches!(smith_normal_form(&m), Err(Error::Overflow(_))));
    }
}

use super::Rational;
use crate::error::{Error, Result};

/// Solves `system · x = rhs` exactly by Gaussian elimination.
///
/// Returns the unique solution, [`Error::Inconsistent`] when no solution
/// exists, or [`Error::Underdetermined`] when the solution is not unique.
pub fn solve_linear(system: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    if system.len() != rhs.len() {
        return Err(Error::SizeMismatch(format!(
            "{} rows but {} right-hand sides",
            system.len(),
            rhs.len()
        )));
    }
    let columns = system.first().map_or(0, Vec::len);
    if system.iter().any(|row| row.len() != columns) {
        return Err(Error::SizeMismatch("ragged coefficient matrix".into()));
    }
    let mut rows: Vec<Vec<Rational>> = system
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..columns {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip()?;
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v -= &factor * pv;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    if rows[rank..].iter().any(|row| !row[columns].is_zero()) {
        return Err(Error::Inconsistent);
    }
    if rank < columns {
        return Err(Error::Underdetermined { rank, columns });
    }
    Ok(rows.into_iter().take(columns).map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn identity_and_small_system() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(solve_linear(&id, &v(&[4, -2, 7])).unwrap(), v(&[4, -2, 7]));
        assert_eq!(solve_linear(&m(&[&[1, 1], &[1, -1]]), &v(&[2, 0])).unwrap(), v(&[1, 1]));
    }

    #[test]
    fn overdetermined_consistent() {
        // x = 2, y = -1 plus the redundant row x + 3y = -1
        let a = m(&[&[1, 1], &[2, -1], &[1, 3]]);
        let b = v(&[1, 5, -1]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, v(&[2, -1]));
        let residual: Rational = &a[2][0] * &x[0] + &a[2][1] * &x[1] - &b[2];
        assert!(residual.is_zero());
    }

    #[test]
    fn failure_outcomes() {
        assert_eq!(
            solve_linear(&m(&[&[1, 1], &[2, 2]]), &v(&[1, 2])),
            Err(Error::Underdetermined { rank: 1, columns: 2 })
        );
        assert_eq!(solve_linear(&m(&[&[1, 1], &[2, 2]]), &v(&[1, 3])), Err(Error::Inconsistent));
        assert_eq!(solve_linear(&m(&[&[1, 0], &[0, 1], &[1, 1]]), &v(&[1, 1, 3])), Err(Error::Inconsistent));
    }
}

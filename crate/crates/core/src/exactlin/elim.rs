//! Fraction-free Gauss-Jordan elimination.
//!
//! Rows are kept primitive after every update, so entries stay small on the
//! 0/±1 matrices that dominate this crate and the `i64` path rarely escalates.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::int::{make_primitive, normalize_sign, Checked, Scalar};

/// Reduced row echelon form up to row scaling: row `i` has its pivot in
/// column `pivots[i]` and every other row is zero in that column.
#[derive(Debug, Clone)]
pub(crate) struct Reduced<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

/// Eliminates on the first `pivot_cols` columns of `rows`.
pub(crate) fn gauss_jordan<T: Scalar>(mut rows: Vec<Vec<T>>, pivot_cols: usize) -> Checked<Reduced<T>> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..pivot_cols {
        if next == rows.len() {
            break;
        }
        // smallest nonzero entry as pivot keeps the multipliers small
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate().skip(next) {
            if !row[c].is_zero() && best.map_or(true, |b| row[c].abs_lt(&rows[b][c])) {
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        rows.swap(next, p);
        make_primitive(&mut rows[next])?;
        let pivot_row = rows[next].clone();
        let b = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[c].is_zero() {
                continue;
            }
            let a = row[c].clone();
            let g = a.gcd(&b)?;
            let fa = a.div_exact(&g)?;
            let fb = b.div_exact(&g)?;
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                *x = x.mul(&fb)?.sub(&y.mul(&fa)?)?;
            }
            make_primitive(row)?;
        }
        pivots.push(c);
        next += 1;
    }
    rows.truncate(next);
    Ok(Reduced { rows, pivots })
}

/// Kernel basis of the first `ncols` columns, one primitive vector per free column,
/// each with positive first nonzero entry.
pub(crate) fn nullspace<T: Scalar>(red: &Reduced<T>, ncols: usize) -> Checked<Vec<Vec<T>>> {
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    for f in (0..ncols).filter(|&f| !is_pivot[f]) {
        // scale so every pivot coordinate is integral
        let mut scale = T::one();
        for (row, &pc) in red.rows.iter().zip(&red.pivots) {
            let a = &row[f];
            if a.is_zero() {
                continue;
            }
            let p = &row[pc];
            let need = p.div_exact(&p.gcd(a)?)?.abs()?;
            let g = scale.gcd(&need)?;
            scale = scale.mul(&need.div_exact(&g)?)?;
        }
        let mut x = vec![T::zero(); ncols];
        x[f] = scale.clone();
        for (row, &pc) in red.rows.iter().zip(&red.pivots) {
            let a = &row[f];
            if a.is_zero() {
                continue;
            }
            let p = &row[pc];
            let g = p.gcd(a)?;
            let num = a.div_exact(&g)?;
            let den = p.div_exact(&g)?;
            x[pc] = num.mul(&scale.div_exact(&den)?)?.neg()?;
        }
        make_primitive(&mut x)?;
        normalize_sign(&mut x)?;
        basis.push(x);
    }
    Ok(basis)
}

/// Solves `A x = b` where `rows` is `[A | b]` with `ncols` columns in `A`.
/// Free variables are set to zero. `Ok(None)` means the system is inconsistent.
pub(crate) fn solve<T: Scalar>(rows: Vec<Vec<T>>, ncols: usize) -> Checked<Option<Vec<BigRational>>> {
    let red = gauss_jordan(rows, ncols + 1)?;
    if red.pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let mut x = vec![BigRational::from_integer(BigInt::from(0)); ncols];
    for (row, &pc) in red.rows.iter().zip(&red.pivots) {
        x[pc] = BigRational::new(row[ncols].to_big(), row[pc].to_big());
    }
    Ok(Some(x))
}

pub(crate) fn rank<T: Scalar>(rows: Vec<Vec<T>>, ncols: usize) -> Checked<usize> {
    Ok(gauss_jordan(rows, ncols)?.pivots.len())
}

/// Rows `[c_1 .. c_k | t]` for the system `Σ x_j c_j = t`.
pub(crate) fn column_system<T: Scalar + Copy>(columns: &[&[T]], target: &[T]) -> Vec<Vec<T>> {
    (0..target.len()).map(|i| columns.iter().map(|c| c[i]).chain(std::iter::once(target[i])).collect()).collect()
}

pub(crate) fn to_big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_jordan_rank_two() {
        let rows = vec![vec![1i64, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        let red = gauss_jordan(rows, 3).unwrap();
        assert_eq!(red.pivots, vec![0, 1]);
        let ns = nullspace(&red, 3).unwrap();
        assert_eq!(ns, vec![vec![1, 1, -1]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        // x = 1, x = 2
        let rows = vec![vec![1i64, 1], vec![1, 2]];
        assert_eq!(solve(rows, 1).unwrap(), None);
        let rows = vec![vec![2i64, 1], vec![4, 2]];
        let x = solve(rows, 1).unwrap().unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 2.into()));
    }
}

use super::int::{Checked, Scalar};

/// Diagonalizes `a` by unimodular row and column operations and returns the
/// nonzero diagonal entries (not yet normalized into a divisibility chain).
pub(crate) fn diagonalize<T: Scalar>(mut a: Vec<Vec<T>>, cols: usize) -> Checked<Vec<T>> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs_lt(&a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut smaller: Option<(usize, usize)> = None;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t])?;
                let (upper, lower) = a.split_at_mut(i);
                for (x, p) in lower[0][t..].iter_mut().zip(&upper[t][t..]) {
                    *x = x.sub(&q.mul(p)?)?;
                }
                if !a[i][t].is_zero() {
                    smaller = Some((i, t));
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t])?;
                for row in a.iter_mut().skip(t) {
                    let v = row[j].sub(&q.mul(&row[t])?)?;
                    row[j] = v;
                }
                if !a[t][j].is_zero() {
                    smaller = Some((t, j));
                }
            }
            match smaller {
                None => break,
                Some((i, j)) => {
                    // a remainder is strictly smaller than the pivot: promote it
                    a.swap(t, i);
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
        }
        diag.push(a[t][t].abs()?);
    }
    Ok(diag)
}

/// Turns a list of positive diagonal entries into the equivalent
/// divisibility chain via `(x, y) -> (gcd, lcm)`.
pub(crate) fn divisibility_chain<T: Scalar>(mut d: Vec<T>) -> Checked<Vec<T>> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j])?;
            let l = d[i].div_exact(&g)?.mul(&d[j])?;
            d[i] = g;
            d[j] = l;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_two_and_three() {
        let d = divisibility_chain(diagonalize(vec![vec![2i64, 0], vec![0, 3]], 2).unwrap()).unwrap();
        assert_eq!(d, vec![1, 6]);
    }

    #[test]
    fn chain_reorders() {
        assert_eq!(divisibility_chain(vec![4i64, 6, 1]).unwrap(), vec![1, 2, 12]);
    }
}

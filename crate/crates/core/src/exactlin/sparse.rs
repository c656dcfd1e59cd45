use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

type SparseRow = Vec<(usize, BigInt)>;

/// Incremental sparse row reduction over the integers, used for the large
/// but very sparse homogeneous systems of global weight spaces.
#[derive(Debug, Clone)]
pub struct SparseKernel {
    ncols: usize,
    // leading column -> primitive row starting there
    pivots: BTreeMap<usize, SparseRow>,
}

fn primitive(row: &mut SparseRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `fr * row - fp * other`, merged by column, zeros dropped.
fn combine(row: &SparseRow, fr: &BigInt, other: &SparseRow, fp: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = other.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, fr * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(fp * &other[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, fr * &row[i - 1].1 - fp * &other[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

fn eliminate(row: &SparseRow, col: usize, pivot: &SparseRow) -> SparseRow {
    let a = &row.iter().find(|e| e.0 == col).expect("column present").1;
    let p = &pivot[0].1;
    let g = a.gcd(p);
    let mut out = combine(row, &(p / &g), pivot, &(a / &g));
    primitive(&mut out);
    out
}

impl SparseKernel {
    pub fn new(ncols: usize) -> Self {
        SparseKernel { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds the equation `Σ coeff · x_col = 0`. Returns whether the rank grew.
    pub fn add_row(&mut self, entries: impl IntoIterator<Item = (usize, BigInt)>) -> bool {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            *acc.entry(c).or_insert_with(BigInt::zero) += v;
        }
        let mut row: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        primitive(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match self.pivots.get(&lead) {
                Some(p) => row = eliminate(&row, lead, p),
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
        false
    }

    /// Kernel basis: one primitive vector per free column, positive leading entry.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        // back-substitute so each pivot row mentions only its lead and free columns
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            loop {
                let next = r.iter().skip(1).map(|e| e.0).find(|c| reduced.contains_key(c));
                match next {
                    Some(c) => r = eliminate(&r, c, &reduced[&c]),
                    None => break,
                }
            }
            if r[0].1.is_negative() {
                for (_, x) in r.iter_mut() {
                    *x = -&*x;
                }
            }
            reduced.insert(lead, r);
        }
        let mut by_free: BTreeMap<usize, Vec<(usize, &BigInt, &BigInt)>> = BTreeMap::new();
        for (&lead, row) in &reduced {
            let p = &row[0].1;
            for (c, a) in row.iter().skip(1) {
                by_free.entry(*c).or_default().push((lead, p, a));
            }
        }
        let mut basis = Vec::new();
        for f in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let entries = by_free.get(&f).map(Vec::as_slice).unwrap_or(&[]);
            let mut scale = BigInt::one();
            for (_, p, a) in entries {
                let need = *p / p.gcd(a);
                scale = scale.lcm(&need);
            }
            let mut x = vec![BigInt::zero(); self.ncols];
            x[f] = scale.clone();
            for (lead, p, a) in entries {
                let g = p.gcd(a);
                x[*lead] = -(*a / &g) * (&scale / (*p / &g));
            }
            let g = x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if !g.is_one() {
                for v in x.iter_mut() {
                    *v = &*v / &g;
                }
            }
            if x.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
                for v in x.iter_mut() {
                    *v = -&*v;
                }
            }
            basis.push(x);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn chain_of_equalities_leaves_all_ones() {
        let mut k = SparseKernel::new(4);
        for i in 0..3 {
            assert!(k.add_row([(i, b(1)), (i + 1, b(-1))]));
        }
        assert!(!k.add_row([(0, b(1)), (3, b(-1))]));
        assert_eq!(k.nullspace(), vec![vec![b(1), b(1), b(1), b(1)]]);
    }

    #[test]
    fn kernel_vectors_satisfy_rows() {
        let rows = vec![vec![(0, b(2)), (2, b(3)), (3, b(-1))], vec![(1, b(5)), (2, b(1))]];
        let mut k = SparseKernel::new(4);
        for r in &rows {
            k.add_row(r.clone());
        }
        let ns = k.nullspace();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in &rows {
                let s: BigInt = r.iter().map(|(c, v)| v * &x[*c]).sum();
                assert!(s.is_zero());
            }
        }
    }
}

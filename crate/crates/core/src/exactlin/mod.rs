//! Exact integer and rational linear algebra.
//!
//! Kernels run in checked `i64` and redo the work in `BigInt` on overflow, so
//! results are always exact.

mod elim;
mod int;
mod matrix;
mod snf;
mod sparse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use int::with_escalation;

pub use matrix::{IntMatrix, RatVector};
pub use sparse::SparseKernel;

/// Elementary divisors of the column lattice of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Positive, each dividing the next.
    pub elementary_divisors: Vec<BigInt>,
    pub rank: usize,
}

impl SnfResult {
    pub fn product(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }
}

pub fn snf(a: &IntMatrix) -> SnfResult {
    let cols = a.cols();
    let divisors = with_escalation(
        || {
            let d = snf::diagonalize(a.to_scalar_rows::<i64>()?, cols)?;
            Ok(snf::divisibility_chain(d)?.into_iter().map(BigInt::from).collect::<Vec<_>>())
        },
        || snf::divisibility_chain(snf::diagonalize(a.to_scalar_rows::<BigInt>()?, cols)?),
    );
    SnfResult { rank: divisors.len(), elementary_divisors: divisors }
}

/// Gcd of the maximal (cols × cols) minors, i.e. the torsion size of
/// `Z^rows / A Z^cols`; zero when the columns are dependent.
pub fn d_of(a: &IntMatrix) -> Result<BigInt> {
    if a.cols() > a.rows() {
        return Err(Error::Dimension(format!("d_of needs cols <= rows, got {}x{}", a.rows(), a.cols())));
    }
    let s = snf(a);
    if s.rank < a.cols() {
        return Ok(BigInt::zero());
    }
    Ok(s.product())
}

pub fn rank_q(a: &IntMatrix) -> usize {
    let cols = a.cols();
    with_escalation(|| elim::rank(a.to_scalar_rows::<i64>()?, cols), || elim::rank(a.to_scalar_rows::<BigInt>()?, cols))
}

/// Basis of the rational kernel, each vector primitive integral with positive
/// first nonzero entry.
pub fn nullspace_q(a: &IntMatrix) -> Vec<RatVector> {
    let cols = a.cols();
    let basis = with_escalation(
        || {
            let red = elim::gauss_jordan(a.to_scalar_rows::<i64>()?, cols)?;
            Ok(elim::nullspace(&red, cols)?
                .into_iter()
                .map(|v| v.into_iter().map(BigInt::from).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        },
        || {
            let red = elim::gauss_jordan(a.to_scalar_rows::<BigInt>()?, cols)?;
            elim::nullspace(&red, cols)
        },
    );
    basis.into_iter().map(RatVector::from).collect()
}

pub fn in_span_q(v: &RatVector, basis: &[RatVector]) -> bool {
    express_in_span(v, basis).is_some()
}

/// Some coefficients `c` with `Σ c_j basis_j = v` (free directions set to
/// zero), or `None` if `v` is not in the span.
pub fn express_in_span(v: &RatVector, basis: &[RatVector]) -> Option<Vec<BigRational>> {
    assert!(basis.iter().all(|b| b.len() == v.len()), "vector lengths differ");
    let (t, lt) = clear_denominators(v);
    let scaled: Vec<(Vec<BigInt>, BigInt)> = basis.iter().map(clear_denominators).collect();
    let rows: Vec<Vec<BigInt>> = (0..v.len())
        .map(|i| scaled.iter().map(|(b, _)| b[i].clone()).chain(std::iter::once(t[i].clone())).collect())
        .collect();
    let k = basis.len();
    let x = with_escalation(
        || {
            let small: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| r.iter().map(<i64 as int::Scalar>::from_big).collect::<int::Checked<Vec<_>>>())
                .collect::<int::Checked<_>>()?;
            elim::solve(small, k)
        },
        || elim::solve(rows.clone(), k),
    )?;
    // Σ x_j (l_j b_j) = l_t v
    Some(x.into_iter().zip(&scaled).map(|(c, (_, l))| c * BigRational::new(l.clone(), lt.clone())).collect())
}

fn clear_denominators(v: &RatVector) -> (Vec<BigInt>, BigInt) {
    let l = v.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = v.entries().iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    (ints, l)
}

/// Coefficients expressing `target` in the span of `columns`, free directions
/// zero; `None` if not in the span.
pub(crate) fn span_coefficients(columns: &[&[i64]], target: &[i64]) -> Option<Vec<BigRational>> {
    assert!(columns.iter().all(|c| c.len() == target.len()), "vector lengths differ");
    let rows = elim::column_system(columns, target);
    let k = columns.len();
    with_escalation(|| elim::solve(rows.clone(), k), || elim::solve(elim::to_big_rows(&rows), k))
}

/// Kernel of the matrix with the given `i64` rows, as primitive integer vectors.
pub(crate) fn nullspace_rows(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    with_escalation(
        || {
            let red = elim::gauss_jordan(rows.to_vec(), ncols)?;
            Ok(elim::nullspace(&red, ncols)?.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
        },
        || {
            let red = elim::gauss_jordan(elim::to_big_rows(rows), ncols)?;
            elim::nullspace(&red, ncols)
        },
    )
}

/// Kernel of the matrix with the given integer rows.
pub(crate) fn nullspace_big(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    with_escalation(
        || {
            let small = rows
                .iter()
                .map(|r| r.iter().map(<i64 as int::Scalar>::from_big).collect())
                .collect::<int::Checked<Vec<Vec<i64>>>>()?;
            let red = elim::gauss_jordan(small, ncols)?;
            Ok(elim::nullspace(&red, ncols)?.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()).collect())
        },
        || {
            let red = elim::gauss_jordan(rows.to_vec(), ncols)?;
            elim::nullspace(&red, ncols)
        },
    )
}

/// Canonical basis of the row space: reduced echelon rows, each primitive
/// with positive pivot.
pub(crate) fn row_space_basis(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let red = elim::gauss_jordan(rows.to_vec(), ncols).expect("BigInt arithmetic cannot overflow");
    red.rows
        .into_iter()
        .map(|mut r| {
            int::normalize_sign(&mut r).expect("BigInt arithmetic cannot overflow");
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    // Laplace expansion; only used as an oracle on tiny matrices.
    fn det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn minor_gcd(a: &IntMatrix) -> BigInt {
        let (r, c) = (a.rows(), a.cols());
        let mut g = BigInt::zero();
        for mask in 0u32..(1 << r) {
            if mask.count_ones() as usize != c {
                continue;
            }
            let sub: Vec<Vec<BigInt>> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| a.row(i).to_vec()).collect();
            g = g.gcd(&det(&sub));
        }
        g
    }

    fn tilde_v4(side: &[usize]) -> Vec<i64> {
        let mut v = Vec::new();
        for i in 1..=4 {
            for j in i + 1..=4 {
                v.push((side.contains(&i) != side.contains(&j)) as i64);
            }
        }
        v
    }

    #[test]
    fn snf_examples() {
        let s = snf(&IntMatrix::identity(3));
        assert_eq!(s.elementary_divisors, big(&[1, 1, 1]));
        assert_eq!(s.rank, 3);
        let s = snf(&IntMatrix::zeros(2, 2));
        assert!(s.elementary_divisors.is_empty());
        assert_eq!(s.rank, 0);
        assert_eq!(snf(&m(&[vec![2, 0], vec![0, 3]])).elementary_divisors, big(&[1, 6]));
    }

    #[test]
    fn d_of_examples() {
        assert_eq!(d_of(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(d_of(&m(&[vec![2, 0], vec![0, 3], vec![0, 0]])).unwrap(), BigInt::from(6));
        // block [[2, x], [0, 3], [0, 5]]
        assert_eq!(d_of(&m(&[vec![2, 7], vec![0, 3], vec![0, 5]])).unwrap(), BigInt::from(2));
        assert!(matches!(d_of(&m(&[vec![1, 2]])), Err(Error::Dimension(_))));
        assert_eq!(d_of(&m(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_q(&IntMatrix::identity(2)), 2);
        assert_eq!(rank_q(&m(&[vec![3, 1], vec![3, 1]])), 1);
        let mut cols: Vec<Vec<i64>> = vec![tilde_v4(&[1, 2]), tilde_v4(&[1, 3]), tilde_v4(&[1, 4])];
        for i in 1..=4 {
            cols.push(tilde_v4(&[i]));
        }
        assert_eq!(rank_q(&IntMatrix::from_columns(6, &cols)), 6);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_q(&IntMatrix::identity(3)).is_empty());
        assert_eq!(nullspace_q(&m(&[vec![1, -1]])), vec![RatVector::from_integers(&[1, 1])]);
        let mut cols: Vec<Vec<i64>> = vec![tilde_v4(&[1, 2]), tilde_v4(&[1, 3]), tilde_v4(&[1, 4])];
        for i in 1..=4 {
            cols.push(tilde_v4(&[i]).iter().map(|x| -x).collect());
        }
        assert_eq!(
            nullspace_q(&IntMatrix::from_columns(6, &cols)),
            vec![RatVector::from_integers(&[1, 1, 1, 1, 1, 1, 1])]
        );
    }

    #[test]
    fn span_examples() {
        assert!(in_span_q(&RatVector::zeros(2), &[RatVector::from_integers(&[0, 1])]));
        assert!(!in_span_q(&RatVector::from_integers(&[1, 0]), &[RatVector::from_integers(&[0, 1])]));
        let sum: Vec<i64> =
            (0..6).map(|k| tilde_v4(&[1, 2])[k] + tilde_v4(&[1, 3])[k] + tilde_v4(&[1, 4])[k]).collect();
        let ds: Vec<RatVector> = (1..=4).map(|i| RatVector::from_integers(&tilde_v4(&[i]))).collect();
        assert!(in_span_q(&RatVector::from_integers(&sum), &ds));
    }

    #[test]
    fn express_handles_rational_inputs() {
        let half = BigRational::new(1.into(), 2.into());
        let v = RatVector::new(vec![half.clone(), BigRational::zero()]);
        let basis = [RatVector::from_integers(&[3, 0]), RatVector::from_integers(&[0, 1])];
        let c = express_in_span(&v, &basis).unwrap();
        assert_eq!(c[0], BigRational::new(1.into(), 6.into()));
        assert!(c[1].is_zero());
    }

    #[test]
    fn huge_entries_escalate() {
        let x = i64::MAX / 2;
        let a = m(&[vec![x, 1], vec![1, x]]);
        let expected: BigInt = BigInt::from(x) * BigInt::from(x) - 1;
        assert_eq!(d_of(&a).unwrap(), expected.abs());
        assert_eq!(rank_q(&a), 2);
    }

    fn matrix_strategy(max_r: usize, max_c: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, c), r).prop_map(|rows| m(&rows))
        })
    }

    // small unimodular matrix as a product of elementary operations
    fn unimodular(size: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut u = IntMatrix::identity(size);
        for &(i, j, k) in ops {
            let (i, j) = (i % size, j % size);
            if i == j {
                continue;
            }
            let e = {
                let mut e = IntMatrix::identity(size);
                e.set(i, j, k);
                e
            };
            u = e.mul(&u);
        }
        u
    }

    proptest! {
        #[test]
        fn d_of_matches_minor_oracle(a in matrix_strategy(6, 5)) {
            prop_assume!(a.cols() <= a.rows());
            prop_assert_eq!(d_of(&a).unwrap(), minor_gcd(&a));
        }

        #[test]
        fn snf_is_a_divisibility_chain(a in matrix_strategy(6, 6)) {
            let s = snf(&a);
            prop_assert_eq!(s.rank, rank_q(&a));
            for w in s.elementary_divisors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(s.elementary_divisors.iter().all(|e| e.is_positive()));
            if s.rank == a.cols() && a.cols() <= a.rows() {
                prop_assert_eq!(d_of(&a).unwrap(), s.product());
            }
        }

        #[test]
        fn snf_unimodular_invariance(
            a in matrix_strategy(5, 5),
            lops in proptest::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..6),
            rops in proptest::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..6),
        ) {
            let b = unimodular(a.rows(), &lops).mul(&a).mul(&unimodular(a.cols(), &rops));
            prop_assert_eq!(snf(&a), snf(&b));
        }

        #[test]
        fn block_identity(
            k in 1usize..=3,
            extra in 1usize..=3,
            cols2 in 1usize..=2,
            seed in proptest::collection::vec(-5i64..=5, 64),
        ) {
            let rows = k + extra.max(cols2);
            let cols = k + cols2;
            let mut it = seed.iter().cycle();
            let mut b = IntMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if r >= k && c < k {
                        continue;
                    }
                    b.set(r, c, *it.next().unwrap());
                }
            }
            let b1 = m(&(0..k).map(|r| (0..k).map(|c| i64::try_from(b.get(r, c)).unwrap()).collect()).collect::<Vec<_>>());
            let b2 = m(&(k..rows).map(|r| (k..cols).map(|c| i64::try_from(b.get(r, c)).unwrap()).collect()).collect::<Vec<_>>());
            let rows1: Vec<Vec<BigInt>> = (0..k).map(|r| b1.row(r).to_vec()).collect();
            prop_assert_eq!(d_of(&b).unwrap(), det(&rows1).abs() * d_of(&b2).unwrap());
        }

        #[test]
        fn nullspace_is_kernel(a in matrix_strategy(5, 6)) {
            let ns = nullspace_q(&a);
            prop_assert_eq!(ns.len(), a.cols() - rank_q(&a));
            for x in &ns {
                prop_assert!(a.apply(x).is_zero());
            }
        }
    }
}

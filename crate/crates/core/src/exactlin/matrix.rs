use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::int::Checked;

/// A dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from equally long rows.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: rows.len(), cols, entries }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(height: usize, columns: &[Vec<T>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == height), "ragged columns");
        let mut m = Self::zeros(height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        self.entries[r * self.cols + c] = v.into();
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Matrix-vector product over the rationals.
    pub fn apply(&self, x: &RatVector) -> RatVector {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        let entries = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x.entries())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigRational::from(a.clone()))
            })
            .collect();
        RatVector::new(entries)
    }

    pub(crate) fn to_scalar_rows<T: super::int::Scalar>(&self) -> Checked<Vec<Vec<T>>> {
        (0..self.rows).map(|r| self.row(r).iter().map(T::from_big).collect()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// An exact rational vector; entries are kept in lowest terms by `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVector {
    entries: Vec<BigRational>,
}

impl RatVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RatVector { entries }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(v: &[T]) -> Self {
        RatVector { entries: v.iter().cloned().map(|x| BigRational::from_integer(x.into())).collect() }
    }

    pub fn zeros(len: usize) -> Self {
        RatVector { entries: vec![BigRational::zero(); len] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// The entries as integers, if every denominator is one.
    pub fn as_integers(&self) -> Option<Vec<BigInt>> {
        self.entries.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// The positive multiple of `self` that is a primitive integer vector.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut ints: Vec<BigInt> =
            self.entries.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in ints.iter_mut() {
                *x = &*x / &g;
            }
        }
        ints
    }

    /// Primitive integer multiple with positive first nonzero entry.
    pub fn normalized(&self) -> RatVector {
        let mut ints = self.primitive_integers();
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in ints.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        RatVector::from_integers(&ints)
    }
}

impl From<Vec<BigInt>> for RatVector {
    fn from(v: Vec<BigInt>) -> Self {
        RatVector::from_integers(&v)
    }
}

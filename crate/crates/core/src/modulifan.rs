//! M_{0,n} as a simplicial fan in `R^{C(n,2)}` modulo the lineality space
//! spanned by `d_i = ṽ({i})`: cycles, balancing, Psi-classes and Weil
//! divisors of piecewise linear functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::collections::{BTreeMap, HashMap};

use crate::combtypes::{enumerate_types, full_mask, CombType, Split};
use crate::error::{Error, Result};
use crate::exactlin::span_coefficients;

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Position of the pair `(i, j)`, `1 <= i < j <= n`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    assert!(1 <= i && i < j && j <= n, "bad pair ({i}, {j}) for n = {n}");
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// Pairs `(i, j)` in coordinate order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// An integer vector in `Z^{C(n,2)}` with lexicographic pair coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    n: usize,
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector { n, coords: vec![0; pair_count(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.coords[pair_index(self.n, a, b)]
    }

    pub fn add_scaled(&mut self, other: &LatticeVector, k: i64) {
        assert_eq!(self.n, other.n, "vectors for different n");
        for (x, y) in self.coords.iter_mut().zip(&other.coords) {
            *x = x.checked_add(y.checked_mul(k).expect("coordinate overflow")).expect("coordinate overflow");
        }
    }
}

/// `ṽ` of an arbitrary label set: 1 on pairs separated by it.
pub(crate) fn side_vector(n: usize, mask: u64) -> Vec<i64> {
    let mut v = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            v.push(((mask >> i ^ mask >> j) & 1) as i64);
        }
    }
    v
}

pub fn tilde_v(s: &Split) -> LatticeVector {
    LatticeVector { n: s.n(), coords: side_vector(s.n(), s.mask()) }
}

/// The lineality generator `d_i = ṽ({i})`.
pub fn lineality_vector(n: usize, i: usize) -> LatticeVector {
    assert!(1 <= i && i <= n, "label {i} out of range");
    LatticeVector { n, coords: side_vector(n, 1 << (i - 1)) }
}

/// Distances between the ends when every bounded edge has length one.
pub fn distance_vector(t: &CombType) -> LatticeVector {
    let mut v = LatticeVector::zero(t.n());
    for s in t.splits() {
        v.add_scaled(&tilde_v(s), 1);
    }
    v
}

/// A pure-dimensional weighted collection of cones of M_{0,n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    n: usize,
    dim: usize,
    weights: BTreeMap<CombType, i64>,
}

impl Cycle {
    pub fn zero(n: usize, dim: usize) -> Cycle {
        Cycle { n, dim, weights: BTreeMap::new() }
    }

    /// Sums repeated cones and drops zero weights.
    pub fn new(n: usize, dim: usize, cones: impl IntoIterator<Item = (CombType, i64)>) -> Result<Cycle> {
        let mut c = Cycle::zero(n, dim);
        for (t, w) in cones {
            if t.n() != n || t.dim() != dim {
                return Err(Error::Dimension(format!(
                    "cone {t} of dimension {} for n = {} in a {dim}-cycle for n = {n}",
                    t.dim(),
                    t.n()
                )));
            }
            c.add_weight(t, w);
        }
        Ok(c)
    }

    /// All the given cones with weight one.
    pub fn unit(n: usize, dim: usize, cones: impl IntoIterator<Item = CombType>) -> Result<Cycle> {
        Cycle::new(n, dim, cones.into_iter().map(|t| (t, 1)))
    }

    fn add_weight(&mut self, t: CombType, w: i64) {
        let total = self.weight(&t).checked_add(w).expect("weight overflow");
        if total == 0 {
            self.weights.remove(&t);
        } else {
            self.weights.insert(t, total);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, t: &CombType) -> i64 {
        self.weights.get(t).copied().unwrap_or(0)
    }

    pub fn cones(&self) -> impl Iterator<Item = (&CombType, i64)> {
        self.weights.iter().map(|(t, w)| (t, *w))
    }

    pub fn support(&self) -> Vec<CombType> {
        self.weights.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Whether all weights are positive, as required of a tropical fan.
    pub fn is_fan(&self) -> bool {
        self.weights.values().all(|&w| w > 0)
    }

    pub fn add(&self, other: &Cycle) -> Result<Cycle> {
        if self.n != other.n || self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot add a {}-cycle for n = {} to a {}-cycle for n = {}",
                other.dim, other.n, self.dim, self.n
            )));
        }
        let mut out = self.clone();
        for (t, w) in other.cones() {
            out.add_weight(t.clone(), w);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Cycle {
        let weights = self
            .weights
            .iter()
            .filter(|_| k != 0)
            .map(|(t, w)| (t.clone(), w.checked_mul(k).expect("weight overflow")))
            .collect();
        Cycle { n: self.n, dim: self.dim, weights }
    }

    pub fn sub(&self, other: &Cycle) -> Result<Cycle> {
        self.add(&other.scale(-1))
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Cone {
            splits: Vec<Vec<usize>>,
            weight: i64,
        }
        let cones: Vec<Cone> = self
            .cones()
            .map(|(t, w)| Cone { splits: t.splits().iter().map(Split::members).collect(), weight: w })
            .collect();
        let mut st = serializer.serialize_struct("Cycle", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("cones", &cones)?;
        st.end()
    }
}

/// A function on M_{0,n} that is linear on every cone, given by its values on rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    n: usize,
    values: BTreeMap<Split, BigRational>,
}

impl RationalFunction {
    pub fn zero(n: usize) -> Self {
        RationalFunction { n, values: BTreeMap::new() }
    }

    /// The function that is 1 on `ṽ(s)` and 0 on every other ray.
    pub fn indicator(s: Split) -> Self {
        let mut f = RationalFunction::zero(s.n());
        f.set(s, BigRational::from_integer(1.into()));
        f
    }

    pub fn set(&mut self, s: Split, value: BigRational) {
        assert_eq!(s.n(), self.n, "split for a different n");
        if value.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, value);
        }
    }

    pub fn value(&self, s: &Split) -> BigRational {
        self.values.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Balancing data at one codimension-one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCheck {
    pub face: CombType,
    /// Adjacent cones of the cycle with their weights and extra split.
    pub adjacent: Vec<(Split, i64)>,
    /// `Σ w(σ) ṽ(extra split of σ)`.
    pub sum: LatticeVector,
    pub balanced: bool,
    /// Coefficients of `sum` on the rays of the face, when balanced.
    pub ray_coefficients: Option<Vec<BigRational>>,
    /// Coefficients of `sum` on `d_1 .. d_n`, when balanced.
    pub lineality_coefficients: Option<Vec<BigRational>>,
}

/// Balancing verdicts for every codimension-one face, violations first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancingCertificate {
    pub faces: Vec<FaceCheck>,
}

impl BalancingCertificate {
    pub fn is_balanced(&self) -> bool {
        self.faces.iter().all(|f| f.balanced)
    }

    pub fn violations(&self) -> impl Iterator<Item = &FaceCheck> {
        self.faces.iter().filter(|f| !f.balanced)
    }

    pub fn first_violation(&self) -> Option<&FaceCheck> {
        self.violations().next()
    }
}

fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Serialize for FaceCheck {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings =
            |v: &Option<Vec<BigRational>>| v.as_ref().map(|c| c.iter().map(rational_string).collect::<Vec<_>>());
        let mut st = serializer.serialize_struct("FaceCheck", 5)?;
        st.serialize_field("face", &self.face.splits().iter().map(Split::members).collect::<Vec<_>>())?;
        st.serialize_field("balanced", &self.balanced)?;
        st.serialize_field("sum", self.sum.coords())?;
        st.serialize_field("ray_coefficients", &strings(&self.ray_coefficients))?;
        st.serialize_field("lineality_coefficients", &strings(&self.lineality_coefficients))?;
        st.end()
    }
}

/// Codimension-one faces of the cones of `x`, each with its adjacent cones
/// (extra split, weight), in face order.
pub(crate) fn faces_of(x: &Cycle) -> Vec<(CombType, Vec<(Split, i64)>)> {
    let mut map: HashMap<CombType, Vec<(Split, i64)>> = HashMap::new();
    for (sigma, w) in x.cones() {
        for (i, s) in sigma.splits().iter().enumerate() {
            map.entry(sigma.without(i)).or_default().push((*s, w));
        }
    }
    let mut faces: Vec<_> = map.into_iter().collect();
    faces.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, adj) in faces.iter_mut() {
        adj.sort();
    }
    faces
}

/// Expresses `v` over the rays of `tau` followed by `d_1 .. d_n`.
pub(crate) fn expand_mod_lineality(tau: &CombType, v: &[i64]) -> Option<Vec<BigRational>> {
    let n = tau.n();
    let mut columns: Vec<Vec<i64>> = tau.splits().iter().map(|s| side_vector(n, s.mask())).collect();
    columns.extend((0..n).map(|i| side_vector(n, 1 << i)));
    let refs: Vec<&[i64]> = columns.iter().map(Vec::as_slice).collect();
    span_coefficients(&refs, v)
}

fn check_face(face: CombType, adjacent: Vec<(Split, i64)>) -> FaceCheck {
    let n = face.n();
    let mut sum = LatticeVector::zero(n);
    for (s, w) in &adjacent {
        sum.add_scaled(&tilde_v(s), *w);
    }
    let coeffs = expand_mod_lineality(&face, sum.coords());
    let k = face.dim();
    let (ray_coefficients, lineality_coefficients) = match coeffs {
        Some(mut c) => {
            let lin = c.split_off(k);
            (Some(c), Some(lin))
        }
        None => (None, None),
    };
    FaceCheck { face, adjacent, sum, balanced: ray_coefficients.is_some(), ray_coefficients, lineality_coefficients }
}

/// Checks the balancing condition at every codimension-one face of `x`.
pub fn is_balanced(x: &Cycle) -> BalancingCertificate {
    if x.dim() == 0 {
        return BalancingCertificate { faces: Vec::new() };
    }
    let faces: Vec<FaceCheck> = faces_of(x).into_par_iter().map(|(t, adj)| check_face(t, adj)).collect();
    let (mut bad, good): (Vec<_>, Vec<_>) = faces.into_iter().partition(|f| !f.balanced);
    bad.extend(good);
    BalancingCertificate { faces: bad }
}

/// All cones of dimension `n - 3 - codim` with weight one.
pub fn skeleton(n: usize, codim: usize) -> Result<Cycle> {
    if n < 3 || codim + 3 > n {
        return Err(Error::InvalidArgument(format!("codim {codim} out of range for n = {n}")));
    }
    let dim = n - 3 - codim;
    Cycle::unit(n, dim, enumerate_types(n, dim)?)
}

/// The Psi-class `ψ_i`: cones where marking `i` sits at a vertex of valence at least 4.
pub fn psi(i: usize, n: usize) -> Result<Cycle> {
    psi_skeleton(i, n, 0)
}

/// The codimension-`codim` skeleton of `ψ_i`.
pub fn psi_skeleton(i: usize, n: usize, codim: usize) -> Result<Cycle> {
    if n < 4 || i == 0 || i > n {
        return Err(Error::InvalidArgument(format!("ψ_{i} needs 1 <= i <= n and n >= 4, got n = {n}")));
    }
    if codim + 4 > n {
        return Err(Error::InvalidArgument(format!("codim {codim} exceeds n - 4 = {}", n - 4)));
    }
    let dim = n - 4 - codim;
    let cones = enumerate_types(n, dim)?.into_iter().filter(|t| t.tree().label_on_high_valence(i));
    Cycle::unit(n, dim, cones)
}

/// The codimension-one skeleton minus `ψ_i`.
pub fn psi_natural(i: usize, n: usize) -> Result<Cycle> {
    skeleton(n, 1)?.sub(&psi(i, n)?)
}

/// The Weil divisor of `f` on the balanced cycle `x`.
pub fn weil_divisor(f: &RationalFunction, x: &Cycle) -> Result<Cycle> {
    if f.n() != x.n() {
        return Err(Error::Dimension(format!("function for n = {} on a cycle for n = {}", f.n(), x.n())));
    }
    if x.dim() == 0 {
        return Err(Error::InvalidArgument("Weil divisor of a 0-dimensional cycle".into()));
    }
    let cert = is_balanced(x);
    if let Some(bad) = cert.first_violation() {
        return Err(Error::Unbalanced { face: bad.face.to_string() });
    }
    let mut cones = Vec::new();
    for fc in &cert.faces {
        let mut w = BigRational::zero();
        for (s, weight) in &fc.adjacent {
            w += f.value(s) * BigRational::from_integer(BigInt::from(*weight));
        }
        let coeffs = fc.ray_coefficients.as_ref().expect("balanced face has coefficients");
        for (c, s) in coeffs.iter().zip(fc.face.splits()) {
            w -= c * f.value(s);
        }
        if !w.is_integer() {
            return Err(Error::NonIntegral { face: fc.face.to_string(), weight: rational_string(&w) });
        }
        let w = w.to_integer().to_i64().expect("weight fits in i64");
        cones.push((fc.face.clone(), w));
    }
    Cycle::new(x.n(), x.dim() - 1, cones)
}

fn canonical_mask(n: usize, mask: u64) -> u64 {
    if mask >> (n - 1) & 1 == 1 {
        full_mask(n) & !mask
    } else {
        mask
    }
}

/// Closed form for the weight of the vital divisor `D^S` on a codimension-one type.
pub fn vital_weight(t: &CombType, s: &Split) -> Result<i64> {
    let n = t.n();
    if s.n() != n {
        return Err(Error::Dimension(format!("split {s} is not for n = {n}")));
    }
    if n < 4 || t.codim() != 1 {
        return Err(Error::InvalidArgument(format!("{t} is not of codimension one")));
    }
    let tree = t.tree();
    let v = (0..tree.vertex_count()).find(|&v| tree.valence(v) == 4).expect("codim-one type has a 4-valent vertex");
    let sides = tree.sides_at(v);
    let target = s.mask();
    if sides.iter().any(|&a| canonical_mask(n, a) == target) {
        return Ok(-1);
    }
    for (i, &a) in sides.iter().enumerate() {
        for &b in &sides[i + 1..] {
            if canonical_mask(n, a | b) == target {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// The vital divisor `D^S`, the Weil divisor of the indicator of `ṽ(S)` on M_{0,n}.
pub fn vital(s: &Split) -> Result<Cycle> {
    weil_divisor(&RationalFunction::indicator(*s), &skeleton(s.n(), 0)?)
}

/// Labelled rendering of a lattice vector, e.g. `(1,2)=25 (1,3)=25 ...`.
pub fn format_pairs(v: &LatticeVector) -> String {
    pairs(v.n()).iter().zip(v.coords()).map(|((i, j), x)| format!("({i},{j})={x}")).collect::<Vec<_>>().join(" ")
}

//! Local and global irreducibility of cycles in M_{0,n}, connectivity in
//! codimension one, and circuits of small vector configurations.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

use crate::combtypes::{CombType, Split};
use crate::error::{Error, Result};
use crate::exactlin::{nullspace_big, nullspace_rows, row_space_basis, SparseKernel};
use crate::modulifan::{faces_of, side_vector, Cycle};

/// Admissible weights around one codimension-one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSolution {
    pub face: CombType,
    /// Support cones containing the face, in support order.
    pub cones: Vec<CombType>,
    /// Basis of the weight vectors on `cones` that balance at the face.
    pub basis: Vec<Vec<BigInt>>,
    /// Kernel of `[normals | -rays of face | -d_1 .. -d_n]`.
    pub full_kernel: Vec<Vec<BigInt>>,
}

impl LocalSolution {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn negated(v: Vec<i64>) -> Vec<i64> {
    v.into_iter().map(|x| -x).collect()
}

fn local_from_extras(face: &CombType, extras: &[Split]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = face.n();
    let mut columns: Vec<Vec<i64>> = extras.iter().map(|s| side_vector(n, s.mask())).collect();
    columns.extend(face.splits().iter().map(|s| negated(side_vector(n, s.mask()))));
    columns.extend((0..n).map(|i| negated(side_vector(n, 1 << i))));
    let height = columns[0].len();
    let rows: Vec<Vec<i64>> = (0..height).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let kernel = nullspace_rows(&rows, columns.len());
    let k = extras.len();
    let projected: Vec<Vec<BigInt>> = kernel.iter().map(|v| v[..k].to_vec()).collect();
    (row_space_basis(&projected, k), kernel)
}

/// Weightings of the support cones around `face` that satisfy balancing there.
pub fn local_solution_space(support: &[CombType], face: &CombType) -> Result<LocalSolution> {
    let (cones, extras): (Vec<CombType>, Vec<Split>) = support
        .iter()
        .filter(|s| s.n() == face.n() && s.dim() == face.dim() + 1 && face.is_face_of(s))
        .map(|s| {
            let extra = *s.splits().iter().find(|x| !face.contains(x)).expect("one extra split");
            (s.clone(), extra)
        })
        .unzip();
    if cones.is_empty() {
        return Err(Error::InvalidArgument(format!("{face} is not a facet of any support cone")));
    }
    let (basis, full_kernel) = local_from_extras(face, &extras);
    Ok(LocalSolution { face: face.clone(), cones, basis, full_kernel })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    pub irreducible: bool,
    /// Local solution dimension at every codimension-one face.
    #[serde(skip)]
    pub dims: Vec<(CombType, usize)>,
}

/// A face with the support indices and extra splits of the cones around it.
type FaceStar = (CombType, Vec<(usize, Split)>);

/// Support cones of `x` with each face's adjacent cones as support indices.
fn face_incidence(x: &Cycle) -> (Vec<CombType>, Vec<FaceStar>) {
    let support = x.support();
    let index: HashMap<&CombType, usize> = support.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let unit = Cycle::unit(x.n(), x.dim(), support.iter().cloned()).expect("support of a cycle");
    let faces = faces_of(&unit)
        .into_iter()
        .map(|(face, adj)| {
            let cones = adj.into_iter().map(|(s, _)| (index[&face.with_split(s)], s)).collect();
            (face, cones)
        })
        .collect();
    (support, faces)
}

pub fn is_locally_irreducible(x: &Cycle) -> LocalReport {
    let (_, faces) = face_incidence(x);
    let dims: Vec<(CombType, usize)> = faces
        .into_par_iter()
        .map(|(face, adj)| {
            let extras: Vec<Split> = adj.iter().map(|(_, s)| *s).collect();
            let dim = local_from_extras(&face, &extras).0.len();
            (face, dim)
        })
        .collect();
    LocalReport { irreducible: dims.iter().all(|(_, d)| *d == 1), dims }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Cones grouped by component, ordered by their smallest cone.
    pub parts: Vec<Vec<CombType>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.parts.len()
    }
}

/// Components of the graph on the cones of `x` joined along shared facets.
pub fn connectivity_components(x: &Cycle) -> Components {
    let (support, faces) = face_incidence(x);
    let mut uf = UnionFind::new(support.len());
    for (_, adj) in &faces {
        for w in adj.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut groups: Vec<Vec<CombType>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, t) in support.iter().enumerate() {
        let r = uf.find(i);
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(t.clone());
    }
    Components { parts: groups }
}

/// All weightings of a support that are balanced everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpace {
    pub support: Vec<CombType>,
    /// Primitive integer weight vectors indexed like `support`.
    pub basis: Vec<Vec<BigInt>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, weights: &[BigInt]) -> bool {
        let k = self.support.len();
        let mut rows: Vec<Vec<BigInt>> = self.basis.clone();
        rows.push(weights.to_vec());
        // weights lie in the span iff appending them keeps the rank
        row_space_basis(&rows, k).len() == self.basis.len()
    }
}

/// The space of rational weight functions on `support` balanced at every face.
pub fn weight_space(support: &[CombType]) -> Result<WeightSpace> {
    let mut support: Vec<CombType> = support.to_vec();
    support.sort();
    support.dedup();
    let Some(first) = support.first() else {
        return Ok(WeightSpace { support, basis: Vec::new() });
    };
    let (n, dim) = (first.n(), first.dim());
    let x = Cycle::unit(n, dim, support.iter().cloned())?;
    let (support, faces) = face_incidence(&x);
    let mut kernel = SparseKernel::new(support.len());
    if dim > 0 {
        let constraints: Vec<Vec<Vec<(usize, BigInt)>>> = faces
            .into_par_iter()
            .map(|(face, adj)| {
                let extras: Vec<Split> = adj.iter().map(|(_, s)| *s).collect();
                let (basis, _) = local_from_extras(&face, &extras);
                let k = extras.len();
                if basis.len() == k {
                    return Vec::new();
                }
                // rows orthogonal to the local solutions
                let normals = if basis.is_empty() {
                    (0..k).map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
                } else {
                    nullspace_big(&basis, k)
                };
                normals
                    .into_iter()
                    .map(|row| {
                        row.into_iter().zip(&adj).filter(|(c, _)| !c.is_zero()).map(|(c, (idx, _))| (*idx, c)).collect()
                    })
                    .collect()
            })
            .collect();
        for rows in constraints {
            for row in rows {
                kernel.add_row(row);
            }
        }
    }
    Ok(WeightSpace { support, basis: kernel.nullspace() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub local: bool,
    pub connected: bool,
    pub components: usize,
    pub weight_space_dim: usize,
    pub global: bool,
    /// Whether the cycle's own weights are balanced weights on its support.
    pub own_weights_in_space: bool,
    #[serde(serialize_with = "serialize_support")]
    pub support: Vec<CombType>,
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<Vec<BigInt>>,
    #[serde(skip)]
    pub local_dims: Vec<(CombType, usize)>,
}

fn serialize_support<S: serde::Serializer>(v: &[CombType], s: S) -> std::result::Result<S::Ok, S::Error> {
    let lists: Vec<Vec<Vec<usize>>> = v.iter().map(|t| t.splits().iter().map(Split::members).collect()).collect();
    lists.serialize(s)
}

fn serialize_basis<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    // weights are small; plain JSON integers keep the report easy to consume
    let rows: Vec<Vec<serde_json::Value>> = v
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| match i64::try_from(x) {
                    Ok(i) => serde_json::Value::from(i),
                    Err(_) => serde_json::Value::from(x.to_string()),
                })
                .collect()
        })
        .collect();
    rows.serialize(s)
}

pub fn is_globally_irreducible(x: &Cycle) -> Result<IrreducibilityReport> {
    let local = is_locally_irreducible(x);
    let components = connectivity_components(x).count();
    let space = weight_space(&x.support())?;
    let own: Vec<BigInt> = space.support.iter().map(|t| BigInt::from(x.weight(t))).collect();
    let report = IrreducibilityReport {
        local: local.irreducible,
        connected: components == 1,
        components,
        weight_space_dim: space.dim(),
        global: space.dim() == 1,
        own_weights_in_space: space.contains(&own),
        support: space.support,
        basis: space.basis,
        local_dims: local.dims,
    };
    debug_assert!(!(report.local && report.connected) || report.global);
    Ok(report)
}

/// A minimal dependent subset of a vector configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub indices: Vec<usize>,
    /// Primitive dependency coefficients, positive first entry, all nonzero.
    #[serde(serialize_with = "serialize_row")]
    pub coefficients: Vec<BigInt>,
}

fn serialize_row<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let row: Vec<String> = v.iter().map(ToString::to_string).collect();
    row.serialize(s)
}

/// All circuits of `vectors`. With `lineality = Some(n)`, dependencies are
/// taken modulo `d_1 .. d_n` in `Z^{C(n,2)}`.
pub fn circuits(vectors: &[Vec<i64>], lineality: Option<usize>) -> Vec<Circuit> {
    let Some(len) = vectors.first().map(Vec::len) else { return Vec::new() };
    assert!(vectors.iter().all(|v| v.len() == len), "vector lengths differ");
    assert!(vectors.len() <= 20, "circuit enumeration is exhaustive; too many vectors");
    let extra: Vec<Vec<i64>> = match lineality {
        Some(n) => {
            assert_eq!(len, n * (n - 1) / 2, "vectors do not live in Z^C(n,2)");
            (0..n).map(|i| side_vector(n, 1 << i)).collect()
        }
        None => Vec::new(),
    };
    let mut out = Vec::new();
    let total = vectors.len();
    for mask in 1u32..(1 << total) {
        let idx: Vec<usize> = (0..total).filter(|i| mask >> i & 1 == 1).collect();
        let cols: Vec<&Vec<i64>> = idx.iter().map(|&i| &vectors[i]).chain(extra.iter()).collect();
        let rows: Vec<Vec<i64>> = (0..len).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let kernel = nullspace_rows(&rows, cols.len());
        let k = idx.len();
        let projected: Vec<Vec<BigInt>> = kernel.iter().map(|v| v[..k].to_vec()).collect();
        let basis = row_space_basis(&projected, k);
        if basis.len() == 1 && basis[0].iter().all(|c| !c.is_zero()) {
            out.push(Circuit { indices: idx, coefficients: basis[0].clone() });
        }
    }
    out.sort_by(|a, b| (a.indices.len(), &a.indices).cmp(&(b.indices.len(), &b.indices)));
    out
}

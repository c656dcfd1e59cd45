//! Pushforwards of codimension-one cycles along the evaluation map
//! `M_{0,n}^lab(R^2, Δ) -> R^{2n}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::curve::{Item, ParamType};
use super::degree::Degree;
use super::orbits::{codim_one_orbits, label_blocks};
use crate::error::{Error, Result};
use crate::exactlin::{d_of, express_in_span, row_space_basis, span_coefficients, IntMatrix, RatVector};
use crate::modulifan::{psi, Cycle};

/// A cone of the image fan in `R^{2n} / R^2` (coordinates of markings
/// `2..=n` after translating marking 1 to the origin) with its weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ImageCell {
    /// Primitive generators, sorted.
    pub rays: Vec<Vec<i64>>,
    pub weight: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Version {
    /// Two contracted markings at a 4-valent vertex: the sum of the ψ-classes.
    V1,
    /// Any 4-valent vertex: the codimension-one skeleton.
    V2,
}

impl FromStr for Version {
    type Err = Error;

    fn from_str(s: &str) -> Result<Version> {
        match s {
            "v1" => Ok(Version::V1),
            "v2" => Ok(Version::V2),
            _ => Err(Error::Parse(format!("unknown version {s:?}, expected v1 or v2"))),
        }
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Version::V1 => "v1",
            Version::V2 => "v2",
        })
    }
}

type Rays = Vec<Vec<i64>>;

/// Images of the edge-length generators in `Z^{2n}`, one per bounded edge.
fn edge_images(p: &ParamType) -> Rays {
    let ev = p.ev_matrix();
    (2..ev.matrix.cols())
        .map(|c| ev.matrix.column(c).iter().map(|x| x.to_i64().expect("evaluation entries are small")).collect())
        .collect()
}

/// Moves coordinate block `j` to block `perm[j]`, translates block 0 to the
/// origin, drops it, and makes every ray primitive.
fn canonical_rays(full: &Rays, perm: &[usize]) -> Rays {
    let n = perm.len();
    let mut rays: Rays = full
        .iter()
        .map(|r| {
            let mut moved = vec![0i64; 2 * n];
            for (j, &pj) in perm.iter().enumerate() {
                moved[2 * pj] = r[2 * j];
                moved[2 * pj + 1] = r[2 * j + 1];
            }
            let mut out: Vec<i64> =
                (1..n).flat_map(|i| [moved[2 * i] - moved[0], moved[2 * i + 1] - moved[1]]).collect();
            let g = out.iter().fold(0i64, |g, x| g.gcd(x));
            if g > 1 {
                out.iter_mut().for_each(|x| *x /= g);
            }
            out
        })
        .collect();
    rays.sort();
    rays
}

fn check_shape(degree: &Degree, z: &Cycle) -> Result<usize> {
    let n = degree.m() - 1;
    let total = n + degree.m();
    if z.n() != total {
        return Err(Error::Dimension(format!("cycle lives in M_0,{}, expected M_0,{total}", z.n())));
    }
    if z.dim() + 4 != total {
        return Err(Error::InvalidArgument(format!("cycle has dimension {}, expected codimension one", z.dim())));
    }
    Ok(n)
}

/// `ev_*(Z)` for a codimension-one cycle `Z` with `n = m - 1`.
pub fn pushforward_codim1(degree: &Degree, z: &Cycle) -> Result<Vec<ImageCell>> {
    let n = check_shape(degree, z)?;
    let identity: Vec<usize> = (0..n).collect();
    let cones: Vec<_> = z.cones().map(|(t, w)| (t.clone(), w)).collect();
    let parts = cones
        .par_iter()
        .map(|(t, w)| {
            let p = ParamType::new(n, degree.clone(), t.clone())?;
            let mult = p.mult_direct()?;
            if mult.is_zero() {
                return Ok(None);
            }
            let mult = mult.to_i64().expect("multiplicity fits in i64");
            Ok(Some((canonical_rays(&edge_images(&p), &identity), w * mult)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<Rays, i64> = BTreeMap::new();
    for (rays, w) in parts.into_iter().flatten() {
        *merged.entry(rays).or_default() += w;
    }
    finish(merged)
}

fn finish(merged: BTreeMap<Rays, i64>) -> Result<Vec<ImageCell>> {
    let cells = collect_cells(merged);
    detect_refinement(&cells)?;
    Ok(cells)
}

fn collect_cells(merged: BTreeMap<Rays, i64>) -> Vec<ImageCell> {
    merged.into_iter().filter(|(_, w)| *w != 0).map(|(rays, weight)| ImageCell { rays, weight }).collect()
}

fn span_key(rays: &Rays, dim: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    row_space_basis(&rows, dim)
}

/// Whether the sum of `a`'s rays lies in the relative interior of `b`
/// (whose rays are linearly independent).
fn barycenter_inside(a: &Rays, b: &Rays) -> bool {
    let dim = a[0].len();
    let bary: Vec<i64> = (0..dim).map(|i| a.iter().map(|r| r[i]).sum()).collect();
    let cols: Vec<&[i64]> = b.iter().map(Vec::as_slice).collect();
    span_coefficients(&cols, &bary).is_some_and(|c| c.iter().all(|x| x.is_positive()))
}

/// Errors if two distinct cells of the same span overlap, i.e. the cells
/// would need a common refinement before they could be merged.
fn detect_refinement(cells: &[ImageCell]) -> Result<()> {
    match overlapping_cells(cells) {
        Some((i, j)) => {
            Err(Error::RefinementRequired(format!("image cells {:?} and {:?} overlap", cells[i].rays, cells[j].rays)))
        }
        None => Ok(()),
    }
}

/// Indices of two distinct cells of the same span whose relative interiors
/// meet, if any are detected. Two cells sharing a facet with their remaining
/// rays on the same side of it always overlap; other pairs are tested by
/// whether the barycenter of one lies inside the other.
pub fn overlapping_cells(cells: &[ImageCell]) -> Option<(usize, usize)> {
    let first = cells.iter().find(|c| !c.rays.is_empty())?;
    let dim = first.rays[0].len();
    let mut groups: BTreeMap<Vec<Vec<BigInt>>, Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        groups.entry(span_key(&c.rays, dim)).or_default().push(i);
    }
    let groups: Vec<(Vec<usize>, Vec<usize>)> = groups.into_iter().map(|(key, idx)| (pivots(&key), idx)).collect();
    if let Some(hit) = groups.par_iter().find_map_first(|(piv, idx)| facet_clash(cells, piv, idx)) {
        return Some(hit);
    }
    groups.par_iter().find_map_first(|(_, idx)| {
        for (k, &i) in idx.iter().enumerate() {
            for &j in &idx[k + 1..] {
                let (a, b) = (&cells[i].rays, &cells[j].rays);
                if barycenter_inside(a, b) || barycenter_inside(b, a) {
                    return Some((i, j));
                }
            }
        }
        None
    })
}

/// Pivot columns of a reduced echelon basis; projecting onto them is
/// injective on the span.
fn pivots(basis: &[Vec<BigInt>]) -> Vec<usize> {
    basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect()
}

fn facet_clash(cells: &[ImageCell], piv: &[usize], idx: &[usize]) -> Option<(usize, usize)> {
    let mut facets: BTreeMap<Rays, Vec<(usize, i32)>> = BTreeMap::new();
    for &i in idx {
        let rays = &cells[i].rays;
        if rays.len() != piv.len() {
            // not full-dimensional in its span: the rays are dependent
            continue;
        }
        for k in 0..rays.len() {
            let mut facet = rays.clone();
            let r = facet.remove(k);
            let m: Vec<Vec<i64>> =
                facet.iter().chain(std::iter::once(&r)).map(|v| piv.iter().map(|&p| v[p]).collect()).collect();
            let side = det_sign(&m);
            let seen = facets.entry(facet).or_default();
            if let Some(&(j, _)) = seen.iter().find(|(_, s)| *s == side) {
                return Some((j, i));
            }
            seen.push((i, side));
        }
    }
    None
}

/// Sign of the determinant of a square matrix (fraction-free elimination,
/// falling back to big integers on overflow).
fn det_sign(m: &[Vec<i64>]) -> i32 {
    let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let n = m.len();
    let small: Option<i32> = (|| {
        let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1;
        let mut prev: i128 = 1;
        for k in 0..n {
            let p = (k..n).find(|&r| a[r][k] != 0)?;
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                    a[i][j] = v / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        Some(sign * prev.signum() as i32)
    })();
    small.unwrap_or_else(|| {
        let mut a = big;
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return 0;
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * if prev.is_positive() { 1 } else { -1 }
    })
}

/// Weight of a codimension-one type in the requested cycle.
fn cycle_weight(p: &ParamType, version: Version) -> i64 {
    match version {
        Version::V2 => 1,
        Version::V1 => {
            let v = (0..p.vertex_count()).find(|&v| p.valence(v) == 4).expect("codim-one type");
            p.incidence(v).iter().filter(|it| matches!(it, Item::End(l) if p.is_contracted(*l))).count() as i64
        }
    }
}

/// `ψ_1 + ... + ψ_n` on `M_{0,n+m}` for the contracted markings.
pub fn contracted_psi_sum(degree: &Degree) -> Result<Cycle> {
    let n = degree.m() - 1;
    let mut z = psi(1, n + degree.m())?;
    for i in 2..=n {
        z = z.add(&psi(i, n + degree.m())?)?;
    }
    Ok(z)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The cycle whose support is the set of point configurations in special
/// position: `ev_*(ψ_1 + ... + ψ_n)` for `V1`, `ev_*` of the codimension-one
/// skeleton for `V2`, with `n = m - 1`.
///
/// Types are enumerated up to permuting contracted markings and equal ends;
/// each orbit contributes its representative's image under all marking
/// permutations.
pub fn special_position(degree: &Degree, version: Version) -> Result<Vec<ImageCell>> {
    let cells = special_position_cells(degree, version)?;
    detect_refinement(&cells)?;
    Ok(cells)
}

/// The merged image cells of [`special_position`] before the overlap check.
/// Overlapping cells are kept apart, so this describes the support but is
/// not a fan when [`overlapping_cells`] finds a pair.
pub fn special_position_cells(degree: &Degree, version: Version) -> Result<Vec<ImageCell>> {
    let n = degree.m() - 1;
    if n < 2 {
        return Err(Error::InvalidDegree("special position needs at least two contracted markings".into()));
    }
    let ends_group: i64 = label_blocks(degree)[1..].iter().map(|b| (1..=b.len() as i64).product::<i64>()).product();
    let orbits = codim_one_orbits(degree)?;
    let parts = orbits
        .par_iter()
        .map(|o| {
            let w = cycle_weight(&o.param, version);
            if w == 0 {
                return Ok(BTreeMap::new());
            }
            let mult = o.param.mult_direct()?;
            if mult.is_zero() {
                return Ok(BTreeMap::new());
            }
            let factor = ends_group * w * mult.to_i64().expect("multiplicity fits in i64");
            let full = edge_images(&o.param);
            let mut local: BTreeMap<Rays, i64> = BTreeMap::new();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                *local.entry(canonical_rays(&full, &perm)).or_default() += factor;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let aut = o.automorphisms as i64;
            for w in local.values_mut() {
                debug_assert_eq!(*w % aut, 0);
                *w /= aut;
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<Rays, i64> = BTreeMap::new();
    for part in parts {
        for (rays, w) in part {
            *merged.entry(rays).or_default() += w;
        }
    }
    Ok(collect_cells(merged))
}

/// Result of checking the balancing condition on an image fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageBalance {
    pub faces: usize,
    /// Faces (as ray lists) around which the weighted normals do not close up.
    pub violations: Vec<Vec<Vec<i64>>>,
}

impl ImageBalance {
    pub fn is_balanced(&self) -> bool {
        self.violations.is_empty()
    }
}

fn lattice_index(height: usize, cols: &[&Vec<i64>]) -> BigInt {
    if cols.is_empty() {
        return BigInt::one();
    }
    let columns: Vec<Vec<i64>> = cols.iter().map(|c| (*c).clone()).collect();
    d_of(&IntMatrix::from_columns(height, &columns)).expect("at most as many columns as rows")
}

/// Checks balancing of simplicial image cells around every common facet.
pub fn check_image_balancing(cells: &[ImageCell]) -> ImageBalance {
    let mut faces: BTreeMap<Rays, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for k in 0..c.rays.len() {
            let mut face = c.rays.clone();
            face.remove(k);
            faces.entry(face).or_default().push((i, k));
        }
    }
    let violations: Vec<Rays> = faces
        .par_iter()
        .filter(|(face, adjacent)| {
            let height = cells[adjacent[0].0].rays[0].len();
            let tau: Vec<&Vec<i64>> = face.iter().collect();
            let base = lattice_index(height, &tau);
            let mut sum = vec![BigRational::zero(); height];
            for &(i, k) in adjacent.iter() {
                let r = &cells[i].rays[k];
                let mut cols = tau.clone();
                cols.push(r);
                let c = BigRational::new(lattice_index(height, &cols), base.clone());
                let scale = BigRational::from_integer(BigInt::from(cells[i].weight)) / c;
                for (s, x) in sum.iter_mut().zip(r) {
                    *s += &scale * BigRational::from_integer(BigInt::from(*x));
                }
            }
            let target = RatVector::new(sum);
            if face.is_empty() {
                return !target.is_zero();
            }
            let basis: Vec<RatVector> = face.iter().map(|r| RatVector::from_integers(r)).collect();
            express_in_span(&target, &basis).is_none()
        })
        .map(|(face, _)| face.clone())
        .collect();
    ImageBalance { faces: faces.len(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulifan::skeleton;

    fn deg1() -> Degree {
        Degree::standard(1).unwrap()
    }

    #[test]
    fn zero_cycle_pushes_forward_to_nothing() {
        let z = Cycle::zero(5, 1);
        assert!(pushforward_codim1(&deg1(), &z).unwrap().is_empty());
    }

    #[test]
    fn degree_one_six_cells() {
        let cells = pushforward_codim1(&deg1(), &skeleton(5, 1).unwrap()).unwrap();
        let rays: Vec<Rays> = cells.iter().map(|c| c.rays.clone()).collect();
        let mut expected: Vec<Rays> =
            [[1, 1], [-1, -1], [1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|r| vec![r.to_vec()]).collect();
        expected.sort();
        assert_eq!(rays, expected);
        assert!(cells.iter().all(|c| c.weight == 1));
        let psi = pushforward_codim1(&deg1(), &contracted_psi_sum(&deg1()).unwrap()).unwrap();
        assert_eq!(psi, cells);
        assert!(check_image_balancing(&cells).is_balanced());
    }

    #[test]
    fn orbit_path_matches_direct_path() {
        let direct = pushforward_codim1(&deg1(), &skeleton(5, 1).unwrap()).unwrap();
        assert_eq!(special_position(&deg1(), Version::V2).unwrap(), direct);
        assert_eq!(special_position(&deg1(), Version::V1).unwrap(), direct);
    }

    #[test]
    fn unbalanced_cells_are_reported() {
        let cells =
            vec![ImageCell { rays: vec![vec![1, 0]], weight: 1 }, ImageCell { rays: vec![vec![0, 1]], weight: 1 }];
        let b = check_image_balancing(&cells);
        assert_eq!(b.faces, 1);
        assert!(!b.is_balanced());
    }

    #[test]
    fn overlapping_cells_need_refinement() {
        let cells = vec![
            ImageCell { rays: vec![vec![1, 0, 0], vec![0, 1, 0]], weight: 1 },
            ImageCell { rays: vec![vec![1, 1, 0], vec![0, 1, 0]], weight: 1 },
        ];
        assert!(matches!(detect_refinement(&cells), Err(Error::RefinementRequired(_))));
    }

    #[test]
    fn facet_sides() {
        assert_eq!(det_sign(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(det_sign(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_sign(&[vec![2, 4], vec![1, 2]]), 0);
        assert_eq!(det_sign(&[vec![i64::MAX, 1], vec![1, i64::MAX]]), 1);
        // same facet {e2}, both cells on the positive side of it
        let cells = vec![
            ImageCell { rays: vec![vec![0, 1], vec![1, 0]], weight: 1 },
            ImageCell { rays: vec![vec![0, 1], vec![1, 1]], weight: 1 },
        ];
        assert_eq!(overlapping_cells(&cells), Some((0, 1)));
        let cells = vec![
            ImageCell { rays: vec![vec![0, 1], vec![1, 0]], weight: 1 },
            ImageCell { rays: vec![vec![-1, 0], vec![0, 1]], weight: 1 },
        ];
        assert_eq!(overlapping_cells(&cells), None);
    }

    #[test]
    fn permutations_are_complete() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}

//! Regions (components of the curve minus its contracted markings), free and
//! fixed edges, the codimension-one type classification and the closed-form
//! multiplicities.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use std::fmt;

use super::curve::{vertex_mult, Item, ParamType};
use super::degree::Vec2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    A,
    B,
    C,
    /// Evaluation is not injective on the cone.
    NonInjective,
    /// A top-dimensional cone.
    Interior,
    /// Codimension two or more.
    HigherCodim,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::A => "A",
            Classification::B => "B",
            Classification::C => "C",
            Classification::NonInjective => "non-injective",
            Classification::Interior => "interior",
            Classification::HigherCodim => "higher-codimension",
        };
        f.write_str(s)
    }
}

/// A connected component of the curve graph minus the contracted markings
/// and their vertices. Pieces are bounded edges and non-contracted ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub edges: Vec<usize>,
    /// Labels of the non-contracted ends in the region.
    pub ends: Vec<usize>,
}

impl Region {
    pub fn is_bounded(&self) -> bool {
        self.ends.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionDecomposition {
    pub regions: Vec<Region>,
    /// Region of each bounded edge.
    pub edge_region: Vec<usize>,
    /// Per vertex, the free flag of each incident item (in incidence order).
    pub free: Vec<Vec<bool>>,
    /// The 4-valent vertex of a codimension-one type.
    pub special_vertex: Option<usize>,
    /// Shape read off from the regions alone, before degenerate factors are checked.
    pub structure: Classification,
    /// `structure`, downgraded to non-injective when a closed-form factor vanishes.
    pub classification: Classification,
}

impl RegionDecomposition {
    /// Whether some region has at least two ends.
    pub fn has_string(&self) -> bool {
        self.regions.iter().any(|r| r.ends.len() >= 2)
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
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

fn other_end(p: &ParamType, e: usize, v: usize) -> usize {
    let (a, b) = p.edge_endpoints(e);
    if a == v {
        b
    } else {
        a
    }
}

/// Pieces reachable from `start` (an item at `v`) without passing through
/// `v` or a marked vertex: bounded edges and non-contracted end labels.
fn behind(p: &ParamType, v: usize, start: Item) -> (Vec<usize>, Vec<usize>) {
    let mut edges = Vec::new();
    let mut ends = Vec::new();
    match start {
        Item::End(l) => {
            if !p.is_contracted(l) {
                ends.push(l);
            }
        }
        Item::Edge(e) => {
            edges.push(e);
            let mut stack = vec![(other_end(p, e, v), e)];
            while let Some((w, from)) = stack.pop() {
                if p.is_marked(w) {
                    continue;
                }
                for it in p.incidence(w) {
                    match *it {
                        Item::End(l) if !p.is_contracted(l) => ends.push(l),
                        Item::Edge(f) if f != from => {
                            edges.push(f);
                            stack.push((other_end(p, f, w), f));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    (edges, ends)
}

pub fn analyze_regions(p: &ParamType) -> RegionDecomposition {
    let ne = p.edge_count();
    let m = p.degree().m();
    let n = p.n();
    // pieces: edges 0..ne, then ends n+1..=n+m at ne..ne+m
    let end_piece = |l: usize| ne + (l - n - 1);
    let mut dsu = Dsu((0..ne + m).collect());
    for v in 0..p.vertex_count() {
        if p.is_marked(v) {
            continue;
        }
        let pieces: Vec<usize> = p
            .incidence(v)
            .iter()
            .map(|it| match *it {
                Item::Edge(e) => e,
                Item::End(l) => end_piece(l),
            })
            .collect();
        for w in pieces.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    let mut regions: Vec<Region> = Vec::new();
    let mut slot = vec![usize::MAX; ne + m];
    for piece in 0..ne + m {
        let r = dsu.find(piece);
        if slot[r] == usize::MAX {
            slot[r] = regions.len();
            regions.push(Region { edges: Vec::new(), ends: Vec::new() });
        }
        let idx = slot[r];
        if piece < ne {
            regions[idx].edges.push(piece);
        } else {
            regions[idx].ends.push(piece - ne + n + 1);
        }
    }
    let edge_region: Vec<usize> = (0..ne).map(|e| slot[dsu.find(e)]).collect();
    let free: Vec<Vec<bool>> = (0..p.vertex_count())
        .map(|v| p.incidence(v).iter().map(|it| !behind(p, v, *it).1.is_empty()).collect())
        .collect();

    let special_vertex = if p.codim() == 1 { (0..p.vertex_count()).find(|&v| p.valence(v) == 4) } else { None };
    let structure = match p.codim() {
        0 => Classification::Interior,
        1 => structure_of(
            p,
            &regions,
            &edge_region,
            &free,
            special_vertex.expect("codim-one type has a 4-valent vertex"),
        ),
        _ => Classification::HigherCodim,
    };
    let mut dec =
        RegionDecomposition { regions, edge_region, free, special_vertex, structure, classification: structure };
    if matches!(structure, Classification::A | Classification::B | Classification::C)
        && closed_form(p, &dec).map_or(true, |x| x == 0)
    {
        dec.classification = Classification::NonInjective;
    }
    dec
}

fn structure_of(
    p: &ParamType,
    regions: &[Region],
    edge_region: &[usize],
    free: &[Vec<bool>],
    v: usize,
) -> Classification {
    let bounded = regions.iter().filter(|r| r.is_bounded()).count();
    if p.is_marked(v) {
        let others_single = regions.iter().all(|r| r.is_bounded() || r.ends.len() == 1);
        return if bounded == 1 && others_single { Classification::A } else { Classification::NonInjective };
    }
    if regions.iter().all(|r| r.ends.len() == 1) {
        return Classification::B;
    }
    let rv = region_at(p, edge_region, regions, v);
    let two_free = free[v].iter().filter(|f| **f).count() == 2;
    let rest_ok = regions.iter().enumerate().filter(|(i, _)| *i != rv).all(|(_, r)| r.ends.len() <= 1);
    if regions[rv].ends.len() == 2 && bounded == 1 && rest_ok && two_free {
        Classification::C
    } else {
        Classification::NonInjective
    }
}

/// Region containing the unmarked vertex `v`.
fn region_at(p: &ParamType, edge_region: &[usize], regions: &[Region], v: usize) -> usize {
    for it in p.incidence(v) {
        match *it {
            Item::Edge(e) => return edge_region[e],
            Item::End(l) => {
                if let Some(i) = regions.iter().position(|r| r.ends.contains(&l)) {
                    return i;
                }
            }
        }
    }
    unreachable!("vertex without pieces")
}

fn weight(v: Vec2) -> u64 {
    (v[0].unsigned_abs()).gcd(&v[1].unsigned_abs())
}

/// Product of `|det|` over all 3-valent vertices without a contracted marking.
fn vertex_product(p: &ParamType) -> u128 {
    let mut prod: u128 = 1;
    for v in 0..p.vertex_count() {
        if p.valence(v) != 3 || p.is_marked(v) {
            continue;
        }
        let inc = p.incidence(v);
        let m = vertex_mult(p.direction_at(v, inc[0]), p.direction_at(v, inc[1]));
        prod = prod.checked_mul(m as u128).expect("multiplicity overflow");
    }
    prod
}

/// Gcd of `w(E)` over the edges of a region that touch a marked vertex.
fn marked_edge_gcd(p: &ParamType, region: &Region) -> u64 {
    region
        .edges
        .iter()
        .filter(|&&e| {
            let (a, b) = p.edge_endpoints(e);
            p.is_marked(a) || p.is_marked(b)
        })
        .fold(0u64, |g, &e| g.gcd(&weight(p.edge_direction(e))))
}

fn closed_form(p: &ParamType, dec: &RegionDecomposition) -> Option<u128> {
    let v = dec.special_vertex?;
    let prod = vertex_product(p);
    let value = match dec.structure {
        Classification::A => {
            let cb = dec.regions.iter().find(|r| r.is_bounded())?;
            marked_edge_gcd(p, cb) as u128 * prod
        }
        Classification::C => {
            let rv = region_at(p, &dec.edge_region, &dec.regions, v);
            let cb = dec.regions.iter().enumerate().find(|(i, r)| *i != rv && r.is_bounded())?.1;
            let fixed: Vec<Vec2> = p
                .incidence(v)
                .iter()
                .zip(&dec.free[v])
                .filter(|(_, f)| !**f)
                .map(|(it, _)| p.direction_at(v, *it))
                .collect();
            if fixed.len() != 2 {
                return None;
            }
            marked_edge_gcd(p, cb) as u128 * vertex_mult(fixed[0], fixed[1]) as u128 * prod
        }
        Classification::B => {
            let fixed: Vec<(Item, Vec2)> = p
                .incidence(v)
                .iter()
                .zip(&dec.free[v])
                .filter(|(_, f)| !**f)
                .map(|(it, _)| (*it, p.direction_at(v, *it)))
                .collect();
            if fixed.len() != 3 {
                return None;
            }
            let mut g: u128 = 0;
            for (k, (item, _)) in fixed.iter().enumerate() {
                let others: Vec<Vec2> = fixed.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, f)| f.1).collect();
                let det = vertex_mult(others[0], others[1]) as u128;
                for e in behind(p, v, *item).0 {
                    let (a, b) = p.edge_endpoints(e);
                    if p.is_marked(a) || p.is_marked(b) {
                        g = g.gcd(&(weight(p.edge_direction(e)) as u128 * det));
                    }
                }
            }
            g * prod
        }
        _ => return None,
    };
    Some(value)
}

/// Multiplicity from the closed formulas for types (A), (B) and (C).
pub fn mult_closed(p: &ParamType) -> Result<BigInt> {
    p.require_codim_one()?;
    let dec = analyze_regions(p);
    match dec.structure {
        Classification::A | Classification::B | Classification::C => {
            Ok(BigInt::from(closed_form(p, &dec).unwrap_or(0)))
        }
        other => Err(Error::NoClosedForm(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paramcurves::Degree;

    fn deg1() -> Degree {
        Degree::standard(1).unwrap()
    }

    #[test]
    fn degree_one_classes() {
        for s in ["1,3", "1,4", "1,5", "2,3", "2,4", "2,5"] {
            let p = ParamType::parse(deg1(), s).unwrap();
            let dec = analyze_regions(&p);
            assert_eq!(dec.classification, Classification::A, "{s}");
            assert_eq!(mult_closed(&p).unwrap(), p.mult_direct().unwrap());
        }
        for s in ["1,2", "3,4", "3,5", "4,5"] {
            let p = ParamType::parse(deg1(), s).unwrap();
            assert_eq!(analyze_regions(&p).classification, Classification::NonInjective, "{s}");
        }
    }

    #[test]
    fn interior_without_string() {
        // a trivalent degree-one curve through two points: every region has one end
        let p = ParamType::parse(deg1(), "1,3;1,3,4").unwrap();
        let dec = analyze_regions(&p);
        assert_eq!(dec.structure, Classification::Interior);
        let counts: usize = dec.regions.iter().map(|r| r.ends.len()).sum();
        assert_eq!(counts, 3);
        if dec.regions.iter().all(|r| r.ends.len() == 1) {
            assert!(!dec.has_string());
        }
    }

    #[test]
    fn region_ends_sum_to_m() {
        let d2 = Degree::standard(2).unwrap();
        let p = ParamType::parse(d2, "1,2;1,2,3;6,7;6,7,8;1,2,3,4;1,2,3,4,5;10,11").unwrap();
        let dec = analyze_regions(&p);
        assert_eq!(dec.regions.iter().map(|r| r.ends.len()).sum::<usize>(), 6);
    }
}

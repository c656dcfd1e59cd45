use num_bigint::BigInt;
use std::collections::VecDeque;

use super::degree::{Degree, Vec2};
use crate::combtypes::{full_mask, CombType, MarkedTree};
use crate::error::{Error, Result};
use crate::exactlin::{d_of, IntMatrix};

/// Something attached to a vertex of the curve graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    /// End with the given label (contracted if `label <= n`).
    End(usize),
    /// Bounded edge with the given index.
    Edge(usize),
}

/// A combinatorial type of labeled parametrized plane curves: a type of
/// M_{0,n+m} where labels `1..=n` are contracted and label `n+i` has the
/// `i`-th direction of the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamType {
    n: usize,
    degree: Degree,
    ctype: CombType,
    tree: MarkedTree,
    incidence: Vec<Vec<Item>>,
    /// Endpoints of each bounded edge as `(parent, child)` of the marked tree.
    ends: Vec<(usize, usize)>,
    root: usize,
    /// Labels beyond each edge seen from the root.
    far: Vec<u64>,
    /// Direction of each edge, oriented away from the root.
    dirs: Vec<Vec2>,
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

impl ParamType {
    pub fn new(n: usize, degree: Degree, ctype: CombType) -> Result<ParamType> {
        let total = n + degree.m();
        if n == 0 {
            return Err(Error::InvalidArgument("at least one contracted marking is needed".into()));
        }
        if ctype.n() != total {
            return Err(Error::Dimension(format!("type has {} markings, expected n + m = {total}", ctype.n())));
        }
        let tree = ctype.tree();
        let mut incidence = vec![Vec::new(); tree.vertex_count()];
        for label in 1..=total {
            incidence[tree.leaf_vertex(label)].push(Item::End(label));
        }
        let mut ends = Vec::new();
        for (i, e) in tree.edges().iter().enumerate() {
            incidence[e.parent].push(Item::Edge(i));
            incidence[e.child].push(Item::Edge(i));
            ends.push((e.parent, e.child));
        }
        let root = tree.leaf_vertex(1);
        let mut p = ParamType { n, degree, ctype, tree, incidence, ends, root, far: Vec::new(), dirs: Vec::new() };
        p.far = p.far_sides(root);
        p.dirs = p.far.iter().map(|&mask| p.end_sum(mask)).collect();
        p.check_balancing()?;
        Ok(p)
    }

    /// Parses a type given as `"1,3;..."` for `n = m - 1` contracted markings.
    pub fn parse(degree: Degree, text: &str) -> Result<ParamType> {
        let n = degree.m() - 1;
        let ctype = CombType::parse(n + degree.m(), text)?;
        ParamType::new(n, degree, ctype)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn comb_type(&self) -> &CombType {
        &self.ctype
    }

    pub fn tree(&self) -> &MarkedTree {
        &self.tree
    }

    pub fn vertex_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn incidence(&self, v: usize) -> &[Item] {
        &self.incidence[v]
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn is_contracted(&self, label: usize) -> bool {
        label <= self.n
    }

    /// Whether a contracted marking is attached to `v`.
    pub fn is_marked(&self, v: usize) -> bool {
        self.incidence[v].iter().any(|it| matches!(it, Item::End(l) if *l <= self.n))
    }

    /// Direction of bounded edge `e`, pointing away from the root vertex.
    pub fn edge_direction(&self, e: usize) -> Vec2 {
        self.dirs[e]
    }

    /// Directions of all bounded edges, pointing away from the root vertex.
    pub fn directions(&self) -> &[Vec2] {
        &self.dirs
    }

    /// Direction of an item as seen leaving `v`.
    pub fn direction_at(&self, v: usize, item: Item) -> Vec2 {
        match item {
            Item::End(l) if l <= self.n => [0, 0],
            Item::End(l) => self.degree.direction_of(self.n, l),
            Item::Edge(e) => {
                let d = self.dirs[e];
                if self.near_end(e) == v {
                    d
                } else {
                    [-d[0], -d[1]]
                }
            }
        }
    }

    /// The endpoint of `e` on the root side.
    fn near_end(&self, e: usize) -> usize {
        let (p, c) = self.ends[e];
        // the child side of the marked tree carries the split labels
        if self.far[e] == self.ctype.splits()[e].mask() {
            p
        } else {
            c
        }
    }

    fn end_sum(&self, mask: u64) -> Vec2 {
        (self.n + 1..=self.n + self.degree.m())
            .filter(|l| mask >> (l - 1) & 1 == 1)
            .fold([0, 0], |acc, l| add(acc, self.degree.direction_of(self.n, l)))
    }

    /// For every edge, the labels on the side away from `root`.
    fn far_sides(&self, root: usize) -> Vec<u64> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for it in &self.incidence[v] {
                if let Item::Edge(e) = *it {
                    let (a, b) = self.ends[e];
                    let w = if a == v { b } else { a };
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        let full = full_mask(self.ctype.n());
        self.ends
            .iter()
            .enumerate()
            .map(|(e, &(p, c))| {
                let mask = self.ctype.splits()[e].mask();
                if dist[c] > dist[p] {
                    mask
                } else {
                    full & !mask
                }
            })
            .collect()
    }

    fn check_balancing(&self) -> Result<()> {
        for v in 0..self.vertex_count() {
            let s = self.incidence[v].iter().fold([0, 0], |acc, it| add(acc, self.direction_at(v, *it)));
            if s != [0, 0] {
                return Err(Error::InvalidDegree(format!("balancing fails at vertex {v}")));
            }
        }
        Ok(())
    }

    /// Codimension of the cone in the moduli space (number of missing bounded edges).
    pub fn codim(&self) -> usize {
        self.ctype.codim()
    }

    /// The evaluation matrix with the root at the vertex of marking 1.
    pub fn ev_matrix(&self) -> EvaluationMatrix {
        self.ev_matrix_rooted(self.root)
    }

    /// The evaluation matrix in coordinates (position of `root`, edge lengths).
    pub fn ev_matrix_rooted(&self, root: usize) -> EvaluationMatrix {
        assert!(root < self.vertex_count(), "no vertex {root}");
        let far = if root == self.root { self.far.clone() } else { self.far_sides(root) };
        let dirs: Vec<Vec2> = far.iter().map(|&m| self.end_sum(m)).collect();
        let mut m = IntMatrix::zeros(2 * self.n, 2 + self.edge_count());
        for i in 0..self.n {
            m.set(2 * i, 0, 1);
            m.set(2 * i + 1, 1, 1);
            for (e, mask) in far.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    m.set(2 * i, 2 + e, dirs[e][0]);
                    m.set(2 * i + 1, 2 + e, dirs[e][1]);
                }
            }
        }
        EvaluationMatrix { matrix: m, edges: (0..self.edge_count()).collect() }
    }

    fn check_codim_one(&self) -> Result<()> {
        if self.n + 1 != self.degree.m() {
            return Err(Error::InvalidArgument(format!(
                "multiplicities need n = m - 1, got n = {} and m = {}",
                self.n,
                self.degree.m()
            )));
        }
        if self.codim() != 1 {
            return Err(Error::InvalidArgument(format!("type {} is not of codimension one", self.ctype)));
        }
        Ok(())
    }

    /// Lattice index of the image of the cone under evaluation; zero iff
    /// evaluation is not injective on the cone.
    pub fn mult_direct(&self) -> Result<BigInt> {
        self.check_codim_one()?;
        d_of(&self.ev_matrix().matrix)
    }

    pub(crate) fn require_codim_one(&self) -> Result<()> {
        self.check_codim_one()
    }
}

/// The evaluation map on a cone: rows are marking coordinates
/// `(x_1, y_1, x_2, ...)`, columns are the root position and edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationMatrix {
    pub matrix: IntMatrix,
    /// Bounded edge of each length column (column `2 + k` is edge `edges[k]`).
    pub edges: Vec<usize>,
}

pub fn vertex_mult(w1: Vec2, w2: Vec2) -> u64 {
    (w1[0] as i128 * w2[1] as i128 - w1[1] as i128 * w2[0] as i128).unsigned_abs() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rank_q;

    fn deg1() -> Degree {
        Degree::standard(1).unwrap()
    }

    #[test]
    fn directions_in_degree_one() {
        let p = ParamType::parse(deg1(), "1,3").unwrap();
        // root at marking 1, so the edge points to {2,4,5}
        assert_eq!(p.edge_direction(0), [-1, -1]);
        let p = ParamType::parse(deg1(), "1,2").unwrap();
        assert_eq!(p.edge_direction(0), [0, 0]);
    }

    #[test]
    fn rerooting_flips_directions() {
        let p = ParamType::parse(deg1(), "1,3").unwrap();
        let other = (0..p.vertex_count()).find(|&v| v != p.root()).unwrap();
        let a = p.ev_matrix();
        let b = p.ev_matrix_rooted(other);
        assert_eq!(a.matrix.get(2, 2), &BigInt::from(-1));
        // marking 1 now lies beyond the edge, seen in the opposite direction
        assert_eq!(b.matrix.get(0, 2), &BigInt::from(1));
        assert_eq!(b.matrix.get(2, 2), &BigInt::from(0));
    }

    #[test]
    fn ev_shape() {
        let p = ParamType::parse(deg1(), "1,3").unwrap();
        let ev = p.ev_matrix();
        assert_eq!((ev.matrix.rows(), ev.matrix.cols()), (4, 3));
        let d2 = Degree::standard(2).unwrap();
        let p = ParamType::parse(d2, "1,2;1,2,3;6,7;6,7,8;1,2,3,4;1,2,3,4,5;10,11").unwrap();
        let ev = p.ev_matrix();
        assert_eq!((ev.matrix.rows(), ev.matrix.cols()), (10, 9));
        assert!(rank_q(&ev.matrix) <= 9);
    }

    #[test]
    fn degree_one_multiplicities() {
        for s in ["1,2", "3,4", "3,5", "4,5"] {
            assert_eq!(ParamType::parse(deg1(), s).unwrap().mult_direct().unwrap(), BigInt::from(0), "{s}");
        }
        for s in ["1,3", "1,4", "1,5", "2,3", "2,4", "2,5"] {
            assert_eq!(ParamType::parse(deg1(), s).unwrap().mult_direct().unwrap(), BigInt::from(1), "{s}");
        }
        assert!(ParamType::parse(deg1(), "").unwrap().mult_direct().is_err());
    }

    #[test]
    fn vertex_multiplicities() {
        assert_eq!(vertex_mult([1, 0], [0, 1]), 1);
        assert_eq!(vertex_mult([2, 1], [1, 2]), 3);
        assert_eq!(vertex_mult([2, 4], [1, 2]), 0);
    }
}

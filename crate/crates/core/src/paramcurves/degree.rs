use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Vec2 = [i64; 2];

/// The directions of the non-contracted ends of a plane curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Degree {
    dirs: Vec<Vec2>,
}

impl Degree {
    /// Rejects zero directions and tuples that do not sum to zero (no
    /// balanced curve could have such ends).
    pub fn new(dirs: Vec<Vec2>) -> Result<Degree> {
        if dirs.len() < 2 {
            return Err(Error::InvalidDegree("a degree needs at least two directions".into()));
        }
        if let Some(i) = dirs.iter().position(|v| *v == [0, 0]) {
            return Err(Error::InvalidDegree(format!("direction {} is zero", i + 1)));
        }
        let sum =
            dirs.iter().try_fold([0i64, 0i64], |acc, v| Some([acc[0].checked_add(v[0])?, acc[1].checked_add(v[1])?]));
        match sum {
            Some([0, 0]) => Ok(Degree { dirs }),
            Some(s) => Err(Error::InvalidDegree(format!("directions sum to ({}, {}), not zero", s[0], s[1]))),
            None => Err(Error::InvalidDegree("direction sum overflows".into())),
        }
    }

    /// `d` copies each of `(1,1)`, `(-1,0)`, `(0,-1)`, grouped in that order.
    pub fn standard(d: usize) -> Result<Degree> {
        if d == 0 {
            return Err(Error::InvalidDegree("d must be positive".into()));
        }
        let mut dirs = Vec::with_capacity(3 * d);
        for v in [[1, 1], [-1, 0], [0, -1]] {
            dirs.extend(std::iter::repeat(v).take(d));
        }
        Degree::new(dirs)
    }

    pub fn m(&self) -> usize {
        self.dirs.len()
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.dirs
    }

    /// Direction of the end with overall label `label` (`n < label <= n + m`).
    pub fn direction_of(&self, n: usize, label: usize) -> Vec2 {
        self.dirs[label - n - 1]
    }

    /// Indices of directions grouped into classes of equal vectors, in order
    /// of first appearance.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<(Vec2, Vec<usize>)> = Vec::new();
        for (i, v) in self.dirs.iter().enumerate() {
            match classes.iter_mut().find(|(w, _)| w == v) {
                Some((_, members)) => members.push(i),
                None => classes.push((*v, vec![i])),
            }
        }
        classes.into_iter().map(|(_, m)| m).collect()
    }
}

impl FromStr for Degree {
    type Err = Error;

    /// `d:<k>` or explicit pairs `a,b;c,d;...`.
    fn from_str(s: &str) -> Result<Degree> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("d:") {
            let d = k.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad degree shorthand {s:?}")))?;
            return Degree::standard(d);
        }
        let dirs = s
            .split(';')
            .map(|pair| {
                let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
                match parts.as_slice() {
                    [a, b] => Ok([
                        a.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {a:?}")))?,
                        b.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {b:?}")))?,
                    ]),
                    _ => Err(Error::Parse(format!("expected a pair a,b, got {pair:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Degree::new(dirs)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dirs.iter().map(|v| format!("{},{}", v[0], v[1])).collect();
        write!(f, "{}", parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let d: Degree = "d:1".parse().unwrap();
        assert_eq!(d.directions(), &[[1, 1], [-1, 0], [0, -1]]);
        let d: Degree = "1,1; -1,0; 0,-1".parse().unwrap();
        assert_eq!(d.m(), 3);
        assert_eq!("d:2".parse::<Degree>().unwrap().classes(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert!(matches!("1,0;0,1".parse::<Degree>(), Err(Error::InvalidDegree(_))));
        assert!(matches!("1,0;0,0;-1,0".parse::<Degree>(), Err(Error::InvalidDegree(_))));
        assert!(matches!("1,0;x".parse::<Degree>(), Err(Error::Parse(_))));
        assert!("d:0".parse::<Degree>().is_err());
    }
}

//! Textual descriptions of cycles on M_{0,n}.
//!
//! A spec is a signed sum of terms `[k*]atom`, where an atom is one of
//! `psi:I`, `psi-natural:I`, `vital:1,2,3`, `skeleton:K` or
//! `psi-skeleton:I,codim:K`. Example: `psi:1+psi:2-2*vital:1,2`.

use crate::combtypes::Split;
use crate::error::{Error, Result};
use crate::modulifan::{psi, psi_natural, psi_skeleton, skeleton, vital, Cycle};

fn number(s: &str, what: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

fn atom(n: usize, text: &str) -> Result<Cycle> {
    let (name, arg) =
        text.split_once(':').ok_or_else(|| Error::Parse(format!("expected name:argument, got {text:?}")))?;
    match name.trim() {
        "psi" => psi(number(arg, "label")?, n),
        "psi-natural" => psi_natural(number(arg, "label")?, n),
        "skeleton" => skeleton(n, number(arg, "codimension")?),
        "vital" => {
            let labels = arg.split(',').map(|l| number(l, "label")).collect::<Result<Vec<_>>>()?;
            vital(&Split::new(n, &labels)?)
        }
        "psi-skeleton" => {
            let (i, rest) = arg
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected psi-skeleton:I,codim:K, got {text:?}")))?;
            let k = rest
                .trim()
                .strip_prefix("codim:")
                .ok_or_else(|| Error::Parse(format!("expected codim:K after the label in {text:?}")))?;
            psi_skeleton(number(i, "label")?, n, number(k, "codimension")?)
        }
        other => Err(Error::Parse(format!("unknown cycle {other:?}"))),
    }
}

/// Splits at `+` and at `-` signs that are not part of a name.
fn terms(spec: &str) -> Vec<(i64, &str)> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut start = 0;
    let bytes = spec.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        let in_name = b == b'-' && i > 0 && bytes[i - 1].is_ascii_alphabetic();
        if (b == b'+' || b == b'-') && !in_name {
            out.push((sign, &spec[start..i]));
            sign = if b == b'-' { -1 } else { 1 };
            start = i + 1;
        }
    }
    out.push((sign, &spec[start..]));
    out
}

pub fn parse_cycle(n: usize, spec: &str) -> Result<Cycle> {
    let mut total: Option<Cycle> = None;
    for (idx, (sign, term)) in terms(spec).into_iter().enumerate() {
        let term = term.trim();
        if term.is_empty() {
            // a leading sign leaves an empty first term
            if idx == 0 {
                continue;
            }
            return Err(Error::Parse(format!("empty term in {spec:?}")));
        }
        let (k, body) = match term.split_once('*') {
            Some((k, body)) => {
                (k.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {k:?}")))?, body)
            }
            None => (1, term),
        };
        let c = atom(n, body)?.scale(sign * k);
        total = Some(match total {
            None => c,
            Some(t) => t.add(&c)?,
        });
    }
    total.ok_or_else(|| Error::Parse("empty cycle spec".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combtypes::CombType;

    fn ray(n: usize, labels: &[usize]) -> CombType {
        CombType::new(n, vec![Split::new(n, labels).unwrap()]).unwrap()
    }

    #[test]
    fn sums_and_names() {
        let z = parse_cycle(5, "psi:1+psi:2").unwrap();
        assert_eq!(z.weight(&ray(5, &[1, 3])), 1);
        assert_eq!(z.weight(&ray(5, &[3, 4])), 2);
        assert_eq!(z.weight(&ray(5, &[1, 2])), 0);
        let nat = parse_cycle(5, "psi-natural:1").unwrap();
        assert_eq!(nat, parse_cycle(5, "skeleton:1-psi:1").unwrap());
        assert_eq!(nat.len(), 4);
        assert_eq!(parse_cycle(5, "2*vital:1,2").unwrap(), vital(&Split::new(5, &[1, 2]).unwrap()).unwrap().scale(2));
        assert_eq!(parse_cycle(6, "psi-skeleton:1,codim:1").unwrap(), psi_skeleton(1, 6, 1).unwrap());
        assert_eq!(parse_cycle(5, "-psi:1").unwrap(), psi(1, 5).unwrap().scale(-1));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_cycle(5, ""), Err(Error::Parse(_))));
        assert!(matches!(parse_cycle(5, "phi:1"), Err(Error::Parse(_))));
        assert!(matches!(parse_cycle(5, "psi:x"), Err(Error::Parse(_))));
        assert!(matches!(parse_cycle(5, "psi:1++psi:2"), Err(Error::Parse(_))));
        assert!(parse_cycle(5, "psi:9").is_err());
        // dimensions differ
        assert!(parse_cycle(6, "psi:1+skeleton:0").is_err());
    }
}

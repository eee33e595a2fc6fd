//! Text formats for elements and maps.
//!
//! Element file:
//! ```text
//! ring: zmod:5
//! 1 2 3        # coefficient 3 at e(1,2)
//! ```
//! Map file, one line per basis element with a nonzero image:
//! ```text
//! ring: rat
//! 1 2 : 1 2 1/2 ; 2 2 -1
//! ```
//! Writers emit canonical form, so reading and rewriting is byte-identical.

use std::sync::Arc;

use crate::algebra::FiElement;
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::poset::Poset;
use crate::ring::{Ring, RingSpec};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
}

/// Reads the `ring:` header, which must be the first non-comment line.
pub fn read_ring_header(text: &str) -> Result<RingSpec> {
    let (line_no, line) = content_lines(text)
        .next()
        .ok_or_else(|| Error::parse(0, "missing `ring:` header"))?;
    let lit = line
        .strip_prefix("ring:")
        .ok_or_else(|| Error::parse(line_no, "first line must be `ring: <literal>`"))?;
    lit.trim().parse()
}

fn body<'a, R: Ring>(text: &'a str, ring: &R) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let spec = read_ring_header(text)?;
    if spec != ring.spec() {
        return Err(Error::RingMismatch(spec, ring.spec()));
    }
    Ok(content_lines(text).skip(1))
}

fn pair_at(poset: &Poset, line_no: usize, x: &str, y: &str) -> Result<usize> {
    let (ix, iy) = (poset.index_of(x)?, poset.index_of(y)?);
    poset
        .pair_index(ix, iy)
        .ok_or_else(|| Error::parse(line_no, format!("{x} is not below {y}")))
}

fn scalar<R: Ring>(ring: &R, line_no: usize, lit: &str) -> Result<R::Elem> {
    ring.parse_elem(lit).map_err(|e| Error::parse(line_no, e.to_string()))
}

fn pair_name(poset: &Poset, p: usize) -> (&str, &str) {
    let (x, y) = poset.pair(p);
    (poset.name(x), poset.name(y))
}

pub fn parse_element<R: Ring>(text: &str, poset: &Arc<Poset>, ring: &R) -> Result<FiElement<R>> {
    let mut coeffs = vec![None; poset.basis_len()];
    for (line_no, line) in body(text, ring)? {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y, c] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected `x y coeff`, got `{line}`")));
        };
        let p = pair_at(poset, line_no, x, y)?;
        if coeffs[p].replace(scalar(ring, line_no, c)?).is_some() {
            return Err(Error::parse(line_no, format!("duplicate coefficient for ({x},{y})")));
        }
    }
    let coeffs = coeffs.into_iter().map(|c| c.unwrap_or_else(|| ring.zero())).collect();
    FiElement::from_coeffs(poset, ring, coeffs)
}

pub fn write_element<R: Ring>(alpha: &FiElement<R>) -> String {
    let ring = alpha.ring();
    let mut out = format!("ring: {}\n", ring.spec());
    for (p, c) in alpha.coeffs().iter().enumerate() {
        if !ring.is_zero(c) {
            let (x, y) = pair_name(alpha.poset(), p);
            out.push_str(&format!("{x} {y} {}\n", ring.format_elem(c)));
        }
    }
    out
}

pub fn parse_map<R: Ring>(text: &str, poset: &Arc<Poset>, ring: &R) -> Result<LinMap<R>> {
    let b = poset.basis_len();
    let mut map = LinMap::zero(poset, ring);
    let mut seen = vec![false; b];
    for (line_no, line) in body(text, ring)? {
        let (src, image) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, format!("expected `x y : terms`, got `{line}`")))?;
        let src: Vec<&str> = src.split_whitespace().collect();
        let [x, y] = src[..] else {
            return Err(Error::parse(line_no, "expected two element names before `:`"));
        };
        let col = pair_at(poset, line_no, x, y)?;
        if std::mem::replace(&mut seen[col], true) {
            return Err(Error::parse(line_no, format!("duplicate line for e({x},{y})")));
        }
        let mut targets = vec![false; b];
        for term in image.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let fields: Vec<&str> = term.split_whitespace().collect();
            let [u, v, c] = fields[..] else {
                return Err(Error::parse(line_no, format!("expected `u v coeff`, got `{term}`")));
            };
            let row = pair_at(poset, line_no, u, v)?;
            if std::mem::replace(&mut targets[row], true) {
                return Err(Error::parse(line_no, format!("duplicate term e({u},{v})")));
            }
            map.set_entry(row, col, scalar(ring, line_no, c)?);
        }
    }
    Ok(map)
}

pub fn write_map<R: Ring>(map: &LinMap<R>) -> String {
    let ring = map.ring();
    let poset = map.poset();
    let mut out = format!("ring: {}\n", ring.spec());
    for col in 0..map.dim() {
        let terms: Vec<String> = (0..map.dim())
            .filter(|&row| !ring.is_zero(map.entry(row, col)))
            .map(|row| {
                let (u, v) = pair_name(poset, row);
                format!("{u} {v} {}", ring.format_elem(map.entry(row, col)))
            })
            .collect();
        if !terms.is_empty() {
            let (x, y) = pair_name(poset, col);
            out.push_str(&format!("{x} {y} : {}\n", terms.join(" ; ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rationals, ZMod};

    fn chain2() -> Arc<Poset> {
        Arc::new(Poset::chain(2))
    }

    #[test]
    fn element_canonicalized_on_load() {
        let p = chain2();
        let r = ZMod::new(5).unwrap();
        let a = parse_element("# comment\nring: zmod:5\n2 2 7\n1 2 -1\n1 1 0\n", &p, &r).unwrap();
        assert_eq!(a.coeffs(), &[0, 4, 2]);
        assert_eq!(write_element(&a), "ring: zmod:5\n1 2 4\n2 2 2\n");
    }

    #[test]
    fn element_errors() {
        let p = chain2();
        let r = ZMod::new(5).unwrap();
        assert!(matches!(parse_element("1 2 3\n", &p, &r), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_element("ring: zmod:7\n", &p, &r), Err(Error::RingMismatch(..))));
        assert!(matches!(parse_element("ring: zmod:5\n2 1 1\n", &p, &r), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_element("ring: zmod:5\n1 3 1\n", &p, &r), Err(Error::UnknownElement(_))));
        assert!(parse_element("ring: zmod:5\n1 2 1\n1 2 2\n", &p, &r).is_err());
        assert!(parse_element("ring: zmod:5\n1 2 1/2\n", &p, &r).is_err());
        assert!(parse_element("ring: zmod:5\n1 2\n", &p, &r).is_err());
    }

    #[test]
    fn map_round_trip_and_omitted_lines() {
        let p = chain2();
        let r = Rationals::default();
        let text = "ring: rat\n2 2 : 1 2 2/4 ; 1 1 -3\n1 2 :\n";
        let m = parse_map(text, &p, &r).unwrap();
        assert!(m.image_of_basis(0).is_zero());
        assert!(m.image_of_basis(1).is_zero());
        let out = write_map(&m);
        assert_eq!(out, "ring: rat\n2 2 : 1 1 -3 ; 1 2 1/2\n");
        assert_eq!(parse_map(&out, &p, &r).unwrap(), m);
        assert_eq!(write_map(&LinMap::zero(&p, &r)), "ring: rat\n");
    }

    #[test]
    fn map_errors() {
        let p = chain2();
        let r = ZMod::new(2).unwrap();
        assert!(parse_map("ring: zmod:2\n1 1 : 1 1 1\n1 1 : 2 2 1\n", &p, &r).is_err());
        assert!(parse_map("ring: zmod:2\n1 1 : 1 1 1 ; 1 1 0\n", &p, &r).is_err());
        assert!(parse_map("ring: zmod:2\n1 1 1 1 1\n", &p, &r).is_err());
        assert!(parse_map("ring: zmod:2\n1 1 : 2 1 1\n", &p, &r).is_err());
    }
}

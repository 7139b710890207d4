//! Permutations on `0..degree`, used for generator input and for
//! automorphism groups. A permutation is stored as its image vector.

use crate::error::{Error, Result};

/// Compose permutations acting on the left: `(a * b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn identity(degree: usize) -> Vec<usize> {
    (0..degree).collect()
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Parse cycle notation like `"(0 1 2)(3 4)"`. Cycles compose left to
/// right as maps, i.e. the rightmost cycle is applied first; for the
/// usual disjoint cycles the order is irrelevant. `"()"` is the identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<usize>> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::Usage(format!(
                "expected '(' in cycle notation, found {rest:?}"
            )));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Usage(format!("unclosed cycle in {text:?}")))?;
        let inner = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in inner.split([' ', ',']).filter(|t| !t.is_empty()) {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Usage(format!("bad cycle entry {tok:?} in {text:?}")))?;
            if v >= degree {
                return Err(Error::Usage(format!(
                    "cycle entry {v} out of range for degree {degree}"
                )));
            }
            if cycle.contains(&v) {
                return Err(Error::Usage(format!(
                    "repeated entry {v} in cycle {text:?}"
                )));
            }
            cycle.push(v);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    let mut perm = identity(degree);
    for cycle in cycles.iter().rev() {
        let mut step = identity(degree);
        for w in 0..cycle.len() {
            step[cycle[w]] = cycle[(w + 1) % cycle.len()];
        }
        perm = compose(&step, &perm);
    }
    Ok(perm)
}

/// Render a permutation in cycle notation; the identity prints as `"()"`.
pub fn format_cycles(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&x.to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let p = parse_cycles("(0 1 2)(3 4)", 5).unwrap();
        assert_eq!(p, vec![1, 2, 0, 4, 3]);
        assert_eq!(format_cycles(&p), "(0 1 2)(3 4)");
        assert_eq!(parse_cycles("()", 3).unwrap(), vec![0, 1, 2]);
        assert_eq!(format_cycles(&[0, 1, 2]), "()");
    }

    #[test]
    fn compose_applies_right_first() {
        // (0 1) then (1 2): 0 -> 1 -> 2
        let a = parse_cycles("(1 2)", 3).unwrap();
        let b = parse_cycles("(0 1)", 3).unwrap();
        let c = compose(&a, &b);
        assert_eq!(c[0], 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_cycles("(0 5)", 3).is_err());
        assert!(parse_cycles("(0 0)", 3).is_err());
        assert!(parse_cycles("(0 1", 3).is_err());
    }
}

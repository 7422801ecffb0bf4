//! Text format for vectors over Q(√5)(i).
//!
//! One vector per line, entries separated by commas, `#` starts a comment
//! line. An entry is a sum of terms `p/q`, `p/q*w5`, `p/q*im` or
//! `p/q*im*w5`; the integer forms `p` and bare `w5`, `im` are accepted too.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactScalar, ExactVector};
use crate::{Error, Result};

/// Parses one entry such as `1/2+1/2*w5-3*im`.
pub fn parse_scalar(s: &str) -> std::result::Result<ExactScalar, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty entry".into());
    }
    let bytes = s.as_bytes();
    let mut starts = vec![0];
    for k in 1..bytes.len() {
        if matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'*' | b'/') {
            starts.push(k);
        }
    }
    starts.push(bytes.len());
    let mut parts = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for w in starts.windows(2) {
        let (slot, coef) = parse_term(&s[w[0]..w[1]])?;
        parts[slot] += coef;
    }
    let [a, b, c, d] = parts;
    Ok(ExactScalar::new(a, b, c, d))
}

fn parse_term(term: &str) -> std::result::Result<(usize, BigRational), String> {
    let mut factors = term.split('*');
    let head = factors.next().unwrap_or_default();
    let (mut coef, mut surd, mut imag) = (BigRational::one(), false, false);
    let (sign, body) = match head.as_bytes().first() {
        Some(b'-') => (-1, &head[1..]),
        Some(b'+') => (1, &head[1..]),
        _ => (1, head),
    };
    if !take_unit(body, &mut surd, &mut imag) {
        coef = parse_rational(body).ok_or_else(|| format!("invalid number {body:?} in term {term:?}"))?;
    }
    for f in factors {
        if !take_unit(f, &mut surd, &mut imag) {
            return Err(format!("invalid factor {f:?} in term {term:?}"));
        }
    }
    if sign < 0 {
        coef = -coef;
    }
    let slot = usize::from(surd) + 2 * usize::from(imag);
    Ok((slot, coef))
}

fn take_unit(f: &str, surd: &mut bool, imag: &mut bool) -> bool {
    match f {
        "w5" if !*surd => *surd = true,
        "im" if !*imag => *imag = true,
        _ => return false,
    }
    true
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).ok()?;
    let d = BigInt::from_str(d).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Parses a comma-separated vector.
pub fn parse_vector(line: &str) -> std::result::Result<ExactVector, String> {
    line.split(',').map(parse_scalar).collect()
}

/// Parses a whole file; returns each vector with its 1-based line number.
///
/// When `dimension` is given every vector must have that many entries,
/// otherwise all vectors must agree with the first one.
pub fn parse_vectors(text: &str, dimension: Option<usize>) -> Result<Vec<(usize, ExactVector)>> {
    let mut out = Vec::new();
    let mut dim = dimension;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = parse_vector(line).map_err(|message| Error::Parse { line: k + 1, message })?;
        match dim {
            Some(d) if d != v.len() => return Err(Error::DimensionMismatch { expected: d, found: v.len() }),
            None => dim = Some(v.len()),
            _ => {}
        }
        out.push((k + 1, v));
    }
    Ok(out)
}

/// Inverse of [`parse_vector`].
pub fn format_vector(v: &[ExactScalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

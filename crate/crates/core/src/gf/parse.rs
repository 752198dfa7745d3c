//! Parsing of field elements from user input.
//!
//! Accepted forms:
//! - hex bitmasks, `0x1f` or bare `1f` (packed `c0 | c1 << m` for GF(q^2));
//! - sums of powers of `w`, e.g. `w^3+w+1`;
//! - for GF(q^2), terms may carry a δ factor spelled `δ`, `d` or `e`, joined
//!   by `*`, `·` or juxtaposition: `w^5 + w^6*d`, `1+δ`, `w^3 e`.

use super::base::{BaseElem, BaseField};
use super::ext::{ExtElem, ExtField};
use crate::error::{Error, Result};

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_hex(input: &str) -> Result<u32> {
    let digits = input
        .strip_prefix("0x")
        .or_else(|| input.strip_prefix("0X"))
        .unwrap_or(input);
    u32::from_str_radix(digits, 16).map_err(|e| parse_err(input, e.to_string()))
}

fn is_symbolic(s: &str) -> bool {
    s.contains(['w', 'd', 'e', 'δ']) && !s.starts_with("0x") && !s.starts_with("0X")
}

/// One `w`-power term: `0`, `1`, `w`, or `w^i`.
fn parse_power(field: &BaseField, term: &str, whole: &str) -> Result<BaseElem> {
    match term {
        "0" => Ok(BaseElem::ZERO),
        "1" | "" => Ok(BaseElem::ONE),
        "w" => Ok(field.generator()),
        _ => {
            let exp = term
                .strip_prefix("w^")
                .ok_or_else(|| parse_err(whole, format!("unrecognised term {term:?}")))?;
            let exp = exp
                .trim_matches(|c| c == '{' || c == '}')
                .parse::<i64>()
                .map_err(|e| parse_err(whole, e.to_string()))?;
            Ok(field.w_pow(exp))
        }
    }
}

pub fn parse_base(field: &BaseField, input: &str) -> Result<BaseElem> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(input, "empty"));
    }
    if !s.contains('w') {
        return field.elem(parse_hex(&s)?);
    }
    s.split('+')
        .try_fold(BaseElem::ZERO, |acc, term| Ok(acc + parse_power(field, term, input)?))
}

pub fn parse_ext(field: &ExtField, input: &str) -> Result<ExtElem> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(parse_err(input, "empty"));
    }
    if !is_symbolic(&s) {
        let bits = parse_hex(&s)?;
        let m = field.base().degree();
        if bits >> (2 * m) != 0 {
            return Err(Error::ElementOutOfRange { bits, m: 2 * m });
        }
        return Ok(field.from_index(bits as usize));
    }
    let mut acc = ExtElem::ZERO;
    for term in s.split('+') {
        let (coeff, is_delta) = match term
            .strip_suffix('δ')
            .or_else(|| term.strip_suffix('d'))
            .or_else(|| term.strip_suffix('e'))
        {
            Some(rest) => (rest.trim_end_matches(['*', '·']), true),
            None => (term, false),
        };
        let c = parse_power(field.base(), coeff, input)?;
        if is_delta {
            acc.c1 += c;
        } else {
            acc.c0 += c;
        }
    }
    Ok(acc)
}

//! Intrinsic width of glued stacked surfaces and the stacked gluing lengths.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, to_f64, Rat};

/// History of binary gluings starting from 2-input surfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GluingExpr {
    /// A surface with two inputs and zero width.
    Strip,
    /// `inner` glued into input `slot` (1-based) of `host` along a segment
    /// of length `length`.
    Glue {
        host: Box<GluingExpr>,
        slot: usize,
        inner: Box<GluingExpr>,
        length: Rat,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WidthError {
    #[error("slot {slot} does not exist on a surface with {inputs} inputs")]
    BadSlot { slot: usize, inputs: usize },
    #[error("gluing length {0} is negative")]
    NegativeLength(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("ρ = {0} lies outside (-1, 0)")]
    RhoOutOfRange(f64),
    #[error("got {children} child widths for {inputs} inputs")]
    Mismatch { children: usize, inputs: usize },
    #[error("input {index} would get negative length {value}")]
    NegativeResult { index: usize, value: String },
}

/// Per-input widths `w_1, …, w_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthProfile {
    pub widths: Vec<Rat>,
}

impl fmt::Display for WidthProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.widths.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl GluingExpr {
    pub fn glue(host: GluingExpr, slot: usize, inner: GluingExpr, length: Rat) -> GluingExpr {
        GluingExpr::Glue {
            host: Box::new(host),
            slot,
            inner: Box::new(inner),
            length,
        }
    }

    pub fn inputs(&self) -> usize {
        match self {
            GluingExpr::Strip => 2,
            GluingExpr::Glue { host, inner, .. } => host.inputs() + inner.inputs() - 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GluingExpr::Strip => 0,
            GluingExpr::Glue { host, inner, .. } => 1 + host.depth().max(inner.depth()),
        }
    }

    /// Parses `strip` or `(glue <slot> <length> <host> <inner>)`.
    pub fn parse(text: &str) -> Result<Self, WidthError> {
        let mut p = ExprParser { s: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for GluingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingExpr::Strip => f.write_str("strip"),
            GluingExpr::Glue { host, slot, inner, length } => {
                write!(f, "(glue {slot} {} {host} {inner})", format_rational(length))
            }
        }
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, message: &str) -> WidthError {
        WidthError::Parse {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn token(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && !self.s[self.pos].is_ascii_whitespace()
            && self.s[self.pos] != b'('
            && self.s[self.pos] != b')'
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<GluingExpr, WidthError> {
        self.ws();
        if self.s.get(self.pos) != Some(&b'(') {
            let at = self.pos;
            return match self.token().as_str() {
                "strip" => Ok(GluingExpr::Strip),
                _ => {
                    self.pos = at;
                    Err(self.err("expected `strip` or `(glue …)`"))
                }
            };
        }
        self.pos += 1;
        if self.token() != "glue" {
            return Err(self.err("expected `glue`"));
        }
        self.ws();
        let slot_at = self.pos;
        let slot: usize = self.token().parse().map_err(|_| {
            self.pos = slot_at;
            self.err("expected a slot number")
        })?;
        self.ws();
        let len_at = self.pos;
        let length = parse_rational(&self.token()).map_err(|_| {
            self.pos = len_at;
            self.err("expected a length")
        })?;
        let host = self.expr()?;
        let inner = self.expr()?;
        self.ws();
        if self.s.get(self.pos) != Some(&b')') {
            return Err(self.err("expected `)`"));
        }
        self.pos += 1;
        Ok(GluingExpr::glue(host, slot, inner, length))
    }
}

/// Widths by structural recursion: gluing `B` (with `l` inputs) into input
/// `n` of `A` with length `ρ` gives `w_i = w^A_i` for `i < n`,
/// `w^B_{i-n+1} + ρ` for `n ≤ i < n + l`, and `w^A_{i-l+1}` afterwards.
pub fn intrinsic_width(expr: &GluingExpr) -> Result<WidthProfile, WidthError> {
    match expr {
        GluingExpr::Strip => Ok(WidthProfile {
            widths: vec![Rat::zero(), Rat::zero()],
        }),
        GluingExpr::Glue { host, slot, inner, length } => {
            if length.is_negative() {
                return Err(WidthError::NegativeLength(format_rational(length)));
            }
            let a = intrinsic_width(host)?.widths;
            let b = intrinsic_width(inner)?.widths;
            let n = *slot;
            if n == 0 || n > a.len() {
                return Err(WidthError::BadSlot { slot: n, inputs: a.len() });
            }
            let l = b.len();
            let total = a.len() + l - 1;
            let widths = (1..=total)
                .map(|i| {
                    if i < n {
                        a[i - 1].clone()
                    } else if i < n + l {
                        &b[i - n] + length
                    } else {
                        a[i - l].clone()
                    }
                })
                .collect();
            Ok(WidthProfile { widths })
        }
    }
}

/// `l_i = total - w_{v_i} - w_i`, exactly. `total` plays the role of
/// `e^{-1/ρ}`.
pub fn stacked_gluing_lengths_at(
    total: &Rat,
    child_widths: &[Rat],
    root_widths: &WidthProfile,
) -> Result<Vec<Rat>, WidthError> {
    if child_widths.len() != root_widths.widths.len() {
        return Err(WidthError::Mismatch {
            children: child_widths.len(),
            inputs: root_widths.widths.len(),
        });
    }
    child_widths
        .iter()
        .zip(&root_widths.widths)
        .enumerate()
        .map(|(k, (wv, wi))| {
            let l = total - wv - wi;
            if l.is_negative() {
                Err(WidthError::NegativeResult {
                    index: k + 1,
                    value: format_rational(&l),
                })
            } else {
                Ok(l)
            }
        })
        .collect()
}

/// `e^{-1/ρ}` for `ρ ∈ (-1, 0)`; always larger than `e`.
pub fn stacked_total_length(rho: f64) -> Result<f64, WidthError> {
    if !(rho > -1.0 && rho < 0.0) {
        return Err(WidthError::RhoOutOfRange(rho));
    }
    Ok((-1.0 / rho).exp())
}

/// `l_i = e^{-1/ρ} - w_{v_i} - w_i(S_r)` in floating point.
pub fn stacked_gluing_lengths(
    rho: f64,
    child_widths: &[Rat],
    root_widths: &WidthProfile,
) -> Result<Vec<f64>, WidthError> {
    let total = stacked_total_length(rho)?;
    if child_widths.len() != root_widths.widths.len() {
        return Err(WidthError::Mismatch {
            children: child_widths.len(),
            inputs: root_widths.widths.len(),
        });
    }
    child_widths
        .iter()
        .zip(&root_widths.widths)
        .enumerate()
        .map(|(k, (wv, wi))| {
            let l = total - to_f64(wv) - to_f64(wi);
            if l < 0.0 {
                Err(WidthError::NegativeResult {
                    index: k + 1,
                    value: format!("{l:.12e}"),
                })
            } else {
                Ok(l)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn strip_has_zero_width() {
        assert_eq!(
            intrinsic_width(&GluingExpr::Strip).unwrap().widths,
            vec![Rat::zero(), Rat::zero()]
        );
    }

    #[test]
    fn single_and_double_gluing() {
        let once = GluingExpr::glue(GluingExpr::Strip, 1, GluingExpr::Strip, rat(3, 10));
        assert_eq!(intrinsic_width(&once).unwrap().to_string(), "(3/10,3/10,0)");
        let twice = GluingExpr::glue(once, 3, GluingExpr::Strip, rat(1, 2));
        assert_eq!(
            intrinsic_width(&twice).unwrap().to_string(),
            "(3/10,3/10,1/2,1/2)"
        );
    }

    #[test]
    fn parse_round_trip() {
        let text = "(glue 3 1/2 (glue 1 3/10 strip strip) strip)";
        let e = GluingExpr::parse(text).unwrap();
        assert_eq!(e.to_string(), text);
        assert_eq!(e.inputs(), 4);
        assert!(GluingExpr::parse("(glue 0 1 strip strip)")
            .map(|e| intrinsic_width(&e))
            .unwrap()
            .is_err());
        assert!(GluingExpr::parse("(glue x 1 strip strip)").is_err());
        assert!(GluingExpr::parse("strap").is_err());
    }

    #[test]
    fn stacked_lengths_exact() {
        let root = WidthProfile { widths: vec![rat(1, 10), rat(1, 5)] };
        let l = stacked_gluing_lengths_at(&rat(1, 2), &[Rat::zero(), Rat::zero()], &root).unwrap();
        assert_eq!(l, vec![rat(2, 5), rat(3, 10)]);
        assert!(stacked_gluing_lengths_at(&rat(1, 20), &[Rat::zero(), Rat::zero()], &root).is_err());
    }

    #[test]
    fn stacked_lengths_from_rho() {
        let rho = -1.0 / 4f64.ln();
        let root = WidthProfile { widths: vec![rat(1, 10), rat(1, 5), Rat::zero()] };
        let wv = [rat(1, 2), Rat::zero(), rat(1, 3)];
        let l = stacked_gluing_lengths(rho, &wv, &root).unwrap();
        for (k, li) in l.iter().enumerate() {
            let sum = li + to_f64(&wv[k]) + to_f64(&root.widths[k]);
            assert!((sum - 4.0).abs() < 1e-9);
        }
        assert!(stacked_gluing_lengths(-1.0, &wv, &root).is_err());
        assert!(stacked_gluing_lengths(0.0, &wv, &root).is_err());
    }
}

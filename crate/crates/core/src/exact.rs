//! Exact rational helpers: parsing, printing and small dense linear algebra.
//!
//! Everything here works over `BigRational`. The linear-algebra routines are
//! meant for desk-scale systems (a dozen variables), where exhaustive
//! support enumeration is cheap and keeps the code obviously correct.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.35`.
pub fn parse_rational(text: &str) -> Result<Rat, RationalParseError> {
    let s = text.trim();
    let err = || RationalParseError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let whole_val: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let frac_val: BigInt = frac.parse().map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Rat::new(whole_val * &scale + frac_val, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float (dyadic).
pub fn from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Wrapper so rationals print canonically with `{}`.
pub struct Display<'a>(pub &'a Rat);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

/// Dense row-major matrix over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row");
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in 0..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let factor = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let v = &self[(i, j)] - &factor * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b`. Returns `Err(row)` with the index of an inconsistent
/// equation (in the reduced system) when there is no solution; otherwise a
/// particular solution with all free variables set to zero.
pub fn solve(a: &Matrix, b: &[Rat]) -> Result<Vec<Rat>, usize> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = aug.rref();
    if let Some(pos) = pivots.iter().position(|&c| c == n) {
        return Err(pos);
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(row, n)].clone();
    }
    Ok(x)
}

/// Outcome of deciding `{x : A x = b, x >= 0}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A basic feasible solution (a vertex of the polyhedron).
    Vertex(Vec<Rat>),
    /// The equality system alone is inconsistent.
    InconsistentEquations,
    /// The equalities are consistent but force some coordinate negative.
    NoNonNegativeSolution,
}

/// Decides non-negative feasibility by enumerating basic solutions.
///
/// Supports are visited from smallest to largest, so when `b = 0` the
/// returned vertex is the origin. Exponential in the number of variables.
pub fn nonnegative_vertex(a: &Matrix, b: &[Rat]) -> Feasibility {
    let n = a.cols();
    assert!(n <= 20, "support enumeration is limited to 20 variables");
    if solve(a, b).is_err() {
        return Feasibility::InconsistentEquations;
    }
    let mut supports: Vec<u32> = (0..(1u32 << n)).collect();
    supports.sort_by_key(|s| (s.count_ones(), *s));
    for support in supports {
        let cols: Vec<usize> = (0..n).filter(|j| support & (1 << j) != 0).collect();
        let sub = restrict_columns(a, &cols);
        if sub.rank() != cols.len() {
            continue;
        }
        let Ok(xs) = solve(&sub, b) else { continue };
        if xs.iter().any(|v| v.is_negative()) {
            continue;
        }
        let mut x = vec![Rat::zero(); n];
        for (k, &j) in cols.iter().enumerate() {
            x[j] = xs[k].clone();
        }
        return Feasibility::Vertex(x);
    }
    Feasibility::NoNonNegativeSolution
}

/// Extreme rays of the pointed cone `{x >= 0 : A x = 0}`, each scaled to
/// have integer-free minimal form (first nonzero entry 1). Sorted.
pub fn extreme_rays(a: &Matrix) -> Vec<Vec<Rat>> {
    let n = a.cols();
    assert!(n <= 20, "support enumeration is limited to 20 variables");
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    for support in 1u32..(1u32 << n) {
        let cols: Vec<usize> = (0..n).filter(|j| support & (1 << j) != 0).collect();
        let sub = restrict_columns(a, &cols);
        let kernel = sub.nullspace();
        if kernel.len() != 1 {
            continue;
        }
        let v = &kernel[0];
        // minimal support: every coordinate nonzero, all of one sign
        if v.iter().any(|x| x.is_zero()) {
            continue;
        }
        let positive = v.iter().all(|x| x.is_positive());
        let negative = v.iter().all(|x| x.is_negative());
        if !positive && !negative {
            continue;
        }
        let mut ray = vec![Rat::zero(); n];
        for (k, &j) in cols.iter().enumerate() {
            ray[j] = v[k].abs();
        }
        let lead = ray.iter().find(|x| !x.is_zero()).cloned().unwrap();
        for x in ray.iter_mut() {
            *x = &*x / &lead;
        }
        rays.push(ray);
    }
    rays.sort();
    rays.dedup();
    rays
}

fn restrict_columns(a: &Matrix, cols: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(a.rows(), cols.len());
    for i in 0..a.rows() {
        for (k, &j) in cols.iter().enumerate() {
            m[(i, k)] = a[(i, j)].clone();
        }
    }
    m
}

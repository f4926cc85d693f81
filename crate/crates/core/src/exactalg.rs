//! Exact rational scalars and dense matrices over them.
//!
//! Rank and kernel computations run fraction-free: each row is first scaled
//! to a primitive integer row, then reduced by Bareiss elimination, so every
//! intermediate entry is an integer minor of the input. Pivoting always takes
//! the first nonzero entry scanning the current column top-to-bottom, which
//! makes the echelon form (and therefore the returned kernel basis) a
//! deterministic function of the input.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Usage(format!("not a rational number: {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Usage(format!("not a rational number: {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Usage(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Serializes a rational as its `"p/q"` (or `"p"`) string.
pub fn serialize_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// Returns the integer value if `q` is integral.
pub fn as_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(QMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn scale_row(&mut self, r: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * factor;
            self.set(r, c, v);
        }
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free row echelon form: integer rows plus the pivot columns.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_rows(m: &QMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect()
}

#[allow(clippy::needless_range_loop)]
fn bareiss(m: &QMatrix) -> Echelon {
    let mut a = integer_rows(m);
    let nrows = m.rows;
    let ncols = m.cols;
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in (r + 1)..nrows {
            let factor = a[i][c].clone();
            for j in c..ncols {
                let num = &pivot * &a[i][j] - &factor * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            for j in 0..c {
                a[i][j] = BigInt::zero();
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Rank over the rationals.
pub fn rank(m: &QMatrix) -> usize {
    bareiss(m).pivots.len()
}

/// Basis of the right null space. Each vector is scaled to a primitive
/// integer vector whose last nonzero (free) coordinate is positive.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let ech = bareiss(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rational::zero(); m.cols];
        x[f] = Rational::one();
        for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
            let s = ((pc + 1)..m.cols)
                .filter(|&j| !row[j].is_zero())
                .fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(row[j].clone()) * &x[j]
                });
            x[pc] = -s / Rational::from_integer(row[pc].clone());
        }
        basis.push(primitive(x));
    }
    basis
}

fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v;
    }
    let sign = match ints.iter().rev().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd * &sign))
        .collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = QMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = out.get(i, j) + aik * b.get(k, j);
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

pub fn mat_add(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot add {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(QMatrix {
        rows: a.rows,
        cols: a.cols,
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect(),
    })
}

/// `a - c·I`.
pub fn mat_scalar_shift(a: &QMatrix, c: &Rational) -> Result<QMatrix> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch(format!(
            "diagonal shift of non-square {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let mut out = a.clone();
    for i in 0..a.rows {
        let v = out.get(i, i) - c;
        out.set(i, i, v);
    }
    Ok(out)
}

/// Unique solution of `a·x = b`, or `None` when `a` has a nontrivial kernel
/// or the system is inconsistent.
#[allow(clippy::needless_range_loop)]
pub fn solve_unique(a: &QMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows
        )));
    }
    if rank(a) < a.cols {
        return Ok(None);
    }
    let mut aug = QMatrix::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols, b[r].clone());
    }
    let ker = kernel_basis(&aug);
    match ker.as_slice() {
        [v] if !v[a.cols].is_zero() => {
            let scale = -v[a.cols].clone();
            Ok(Some(v[..a.cols].iter().map(|x| x / &scale).collect()))
        }
        _ => Ok(None),
    }
}

//! Scalars: exact rationals, integer polynomials and complex floats with a
//! configurable mantissa.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};
use serde::Serialize;

pub const DEFAULT_PREC: u32 = 256;
pub const DEFAULT_TOL: f64 = 1e-30;
pub const FAST_PREC: u32 = 53;
pub const FAST_TOL: f64 = 1e-9;

const GUARD_BITS: u32 = 32;

/// Working precision and the relative tolerance that goes with it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Precision {
    pub bits: u32,
    pub tol: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: DEFAULT_PREC, tol: DEFAULT_TOL }
    }
}

impl Precision {
    pub fn fast() -> Self {
        Precision { bits: FAST_PREC, tol: FAST_TOL }
    }

    /// Picks the tolerance matching `bits` when none is given.
    pub fn with_bits(bits: u32) -> Self {
        if bits >= DEFAULT_PREC {
            Precision { bits, tol: DEFAULT_TOL }
        } else if bits <= FAST_PREC {
            Precision { bits, tol: FAST_TOL }
        } else {
            // roughly a quarter of the digits held back as headroom
            let digits = (bits as f64) * std::f64::consts::LOG10_2;
            Precision { bits, tol: 10f64.powf(-(digits * 0.75).floor()) }
        }
    }
}

pub fn rat_pow(q: &Rational, k: usize) -> Rational {
    let mut r = Rational::from(1);
    for _ in 0..k {
        r *= q;
    }
    r
}

pub fn float_of(q: &Rational, prec: u32) -> Float {
    Float::with_val(prec, q)
}

/// Variable carried by an [`IntPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Var {
    Delta,
    Q,
}

impl Var {
    fn symbol(self) -> &'static str {
        match self {
            Var::Delta => "δ",
            Var::Q => "q",
        }
    }
}

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    var: Var,
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn zero(var: Var) -> Self {
        IntPoly { var, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: impl Into<Integer>) -> Self {
        Self::from_coeffs(var, vec![c.into()])
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, 1)
    }

    /// `c * var^deg`
    pub fn monomial(var: Var, c: impl Into<Integer>, deg: usize) -> Self {
        let mut coeffs = vec![Integer::new(); deg + 1];
        coeffs[deg] = c.into();
        Self::from_coeffs(var, coeffs)
    }

    pub fn from_coeffs(var: Var, mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPoly { var, coeffs }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        poly_eval(self, x)
    }

    fn check_var(&self, other: &IntPoly) {
        assert_eq!(self.var, other.var, "mixing polynomials in different variables");
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        self.check_var(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        IntPoly::from_coeffs(self.var, coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { var: self.var, coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect() }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        self.check_var(rhs);
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero(self.var);
        }
        let mut coeffs = vec![Integer::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += Integer::from(a * b);
            }
        }
        IntPoly::from_coeffs(self.var, coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{x}")?,
                (1, false) => write!(f, "{mag}{x}")?,
                (_, true) => write!(f, "{x}^{i}")?,
                (_, false) => write!(f, "{mag}{x}^{i}")?,
            }
        }
        Ok(())
    }
}

/// Horner evaluation.
pub fn poly_eval(p: &IntPoly, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in p.coeffs.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

/// Complex number as a pair of floats of one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct AppComplex {
    pub re: Float,
    pub im: Float,
}

impl AppComplex {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert!(!re.is_nan() && !im.is_nan());
        AppComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        AppComplex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        AppComplex { re: Float::with_val(prec, x), im: Float::new(prec) }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        AppComplex { re: Float::with_val(prec, q), im: Float::new(prec) }
    }

    pub fn from_parts(re: &Rational, im: &Rational, prec: u32) -> Self {
        AppComplex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn real(x: Float) -> Self {
        let prec = x.prec();
        AppComplex { re: x, im: Float::new(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn conj(&self) -> Self {
        AppComplex { re: self.re.clone(), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        AppComplex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        AppComplex { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    /// Decimal strings for both parts with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (self.re.to_string_radix(10, Some(digits)), self.im.to_string_radix(10, Some(digits)))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn sqrt(&self) -> Self {
        principal_sqrt(self)
    }
}

impl fmt::Display for AppComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im == 0.0 {
            write!(f, "{re:e}")
        } else {
            write!(f, "{re:e}{:+e}i", im)
        }
    }
}

impl Add for &AppComplex {
    type Output = AppComplex;
    fn add(self, rhs: &AppComplex) -> AppComplex {
        let p = self.prec();
        AppComplex { re: Float::with_val(p, &self.re + &rhs.re), im: Float::with_val(p, &self.im + &rhs.im) }
    }
}

impl Sub for &AppComplex {
    type Output = AppComplex;
    fn sub(self, rhs: &AppComplex) -> AppComplex {
        let p = self.prec();
        AppComplex { re: Float::with_val(p, &self.re - &rhs.re), im: Float::with_val(p, &self.im - &rhs.im) }
    }
}

impl Mul for &AppComplex {
    type Output = AppComplex;
    fn mul(self, rhs: &AppComplex) -> AppComplex {
        let p = self.prec();
        if self.im.is_zero() && rhs.im.is_zero() {
            return AppComplex::real(Float::with_val(p, &self.re * &rhs.re));
        }
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        AppComplex { re: ac - bd, im: ad + bc }
    }
}

impl Div for &AppComplex {
    type Output = AppComplex;
    fn div(self, rhs: &AppComplex) -> AppComplex {
        let p = self.prec();
        if rhs.im.is_zero() {
            return AppComplex {
                re: Float::with_val(p, &self.re / &rhs.re),
                im: Float::with_val(p, &self.im / &rhs.re),
            };
        }
        let den = Float::with_val(p, rhs.re.square_ref()) + Float::with_val(p, rhs.im.square_ref());
        let num = self * &rhs.conj();
        AppComplex { re: num.re / &den, im: num.im / &den }
    }
}

impl Neg for &AppComplex {
    type Output = AppComplex;
    fn neg(self) -> AppComplex {
        let p = self.prec();
        AppComplex { re: Float::with_val(p, -&self.re), im: Float::with_val(p, -&self.im) }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for AppComplex {
            type Output = AppComplex;
            fn $m(self, rhs: AppComplex) -> AppComplex { (&self).$m(&rhs) }
        }
        impl $tr<&AppComplex> for AppComplex {
            type Output = AppComplex;
            fn $m(self, rhs: &AppComplex) -> AppComplex { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

/// Principal square root: nonnegative real part, and nonnegative imaginary
/// part on the branch cut.
pub fn principal_sqrt(z: &AppComplex) -> AppComplex {
    let p = z.prec();
    let w = p + GUARD_BITS;
    if z.is_zero() {
        return AppComplex::zero(p);
    }
    let x = Float::with_val(w, &z.re);
    let y = Float::with_val(w, &z.im);
    let r = Float::with_val(w, x.hypot_ref(&y));
    let (re, im) = if x >= 0 {
        let s = (Float::with_val(w, &r + &x) / 2u32).sqrt();
        let im = Float::with_val(w, &y / &s) / 2u32;
        (s, im)
    } else {
        let t = (Float::with_val(w, &r - &x) / 2u32).sqrt();
        let re = Float::with_val(w, y.abs_ref()) / Float::with_val(w, &t * 2u32);
        let im = if y < 0 { -t } else { t };
        (re, im)
    };
    AppComplex { re: Float::with_val(p, &re), im: Float::with_val(p, &im) }
}

/// `|a - b| <= tol * max(1, |a|, |b|)`
pub fn approx_eq(a: &AppComplex, b: &AppComplex, tol: f64) -> bool {
    let p = a.prec().max(b.prec());
    let diff = (a - b).abs();
    let mut scale = Float::with_val(p, 1);
    for m in [a.abs(), b.abs()] {
        if m > scale {
            scale = m;
        }
    }
    diff <= scale * tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn sqrt_examples() {
        let two = principal_sqrt(&AppComplex::from_f64(4.0, 256));
        assert_eq!(two, AppComplex::from_f64(2.0, 256));
        let i = principal_sqrt(&AppComplex::from_f64(-1.0, 256));
        assert!(i.re.is_zero());
        assert_eq!(i.im, 1);
        // alpha = 0, beta = 4 at delta = 1, N = 8
        let r = principal_sqrt(&AppComplex::from_rational(&q(4, 4), 256));
        assert_eq!(r, AppComplex::one(256));
    }

    #[test]
    fn sqrt_branch_on_negative_axis_with_negative_zero() {
        let z = AppComplex::new(Float::with_val(64, -4), Float::with_val(64, -0.0));
        let r = principal_sqrt(&z);
        assert_eq!(r.im, 2);
    }

    #[test]
    fn approx_eq_examples() {
        let one = AppComplex::one(256);
        let near = &one + &AppComplex::from_rational(&Rational::from((1, Integer::from(10).pow(40u32))), 256);
        assert!(approx_eq(&one, &near, 1e-30));
        assert!(!approx_eq(&one, &AppComplex::from_rational(&q(11, 10), 256), 1e-30));
        let tiny = AppComplex::from_rational(&Rational::from((1, Integer::from(10).pow(31u32))), 256);
        assert!(approx_eq(&AppComplex::zero(256), &tiny, 1e-30));
    }

    #[test]
    fn poly_eval_examples() {
        let q2 = IntPoly::monomial(Var::Q, 1, 2);
        assert_eq!(poly_eval(&q2, &q(1, 1)), 1);
        assert_eq!(poly_eval(&IntPoly::zero(Var::Q), &q(7, 3)), 0);
        let p = IntPoly::from_coeffs(Var::Q, vec![1.into(), 1.into()]);
        assert_eq!(poly_eval(&p, &q(1, 1)), 2);
    }

    #[test]
    fn poly_display() {
        let p = IntPoly::from_coeffs(Var::Delta, vec![(-1).into(), 0.into(), 3.into(), 1.into()]);
        assert_eq!(p.to_string(), "-1 + 3δ^2 + δ^3");
        assert_eq!(IntPoly::monomial(Var::Q, 1, 1).to_string(), "q");
    }

    #[test]
    fn division_round_trip() {
        let a = AppComplex::from_parts(&q(3, 7), &q(-2, 5), 256);
        let b = AppComplex::from_parts(&q(1, 3), &q(5, 11), 256);
        let c = &(&a / &b) * &b;
        assert!(approx_eq(&a, &c, 1e-70));
    }
}

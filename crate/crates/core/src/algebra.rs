//! `Br_d(δ)` as sparse combinations of diagrams.
//!
//! The product follows the stacking rule `a · b = δ^k (b ∘ a)`: the right
//! factor is placed on top of the left one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde_json::{json, Value};

use crate::diagram::{compose_unchecked, enumerate_diagrams, generator, BrauerDiagram, Gen};
use crate::linalg::QSparse;
use crate::numeric::{rat_pow, IntPoly, Var};
use crate::report::Check;
use crate::Error;

/// How the loop parameter is treated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Specialized(Rational),
    Generic,
}

/// A coefficient: rational in specialized mode, polynomial in `δ` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Q(Rational),
    P(IntPoly),
}

impl Scalar {
    pub fn from_int(mode: &ScalarMode, c: i64) -> Scalar {
        match mode {
            ScalarMode::Specialized(_) => Scalar::Q(Rational::from(c)),
            ScalarMode::Generic => Scalar::P(IntPoly::constant(Var::Delta, c)),
        }
    }

    pub fn delta_pow(mode: &ScalarMode, k: usize) -> Scalar {
        match mode {
            ScalarMode::Specialized(delta) => Scalar::Q(rat_pow(delta, k)),
            ScalarMode::Generic => Scalar::P(IntPoly::monomial(Var::Delta, 1, k)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => *q == 0,
            Scalar::P(p) => p.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::P(_) => None,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Rational::from(a + b)),
            (Scalar::P(a), Scalar::P(b)) => Scalar::P(a + b),
            _ => panic!("mixed scalar modes"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Rational::from(a * b)),
            (Scalar::P(a), Scalar::P(b)) => Scalar::P(a * b),
            _ => panic!("mixed scalar modes"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(Rational::from(-a)),
            Scalar::P(a) => Scalar::P(-a),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::P(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    d: usize,
    mode: ScalarMode,
    terms: BTreeMap<BrauerDiagram, Scalar>,
}

impl AlgebraElement {
    pub fn zero(d: usize, mode: &ScalarMode) -> Self {
        AlgebraElement { d, mode: mode.clone(), terms: BTreeMap::new() }
    }

    pub fn one(d: usize, mode: &ScalarMode) -> Self {
        Self::basis(BrauerDiagram::identity(d), mode)
    }

    pub fn basis(b: BrauerDiagram, mode: &ScalarMode) -> Self {
        Self::term(b, Scalar::from_int(mode, 1), mode)
    }

    pub fn term(b: BrauerDiagram, c: Scalar, mode: &ScalarMode) -> Self {
        let mut e = Self::zero(b.d(), mode);
        e.add_term(b, c);
        e
    }

    pub fn generator(kind: Gen, i: usize, d: usize, mode: &ScalarMode) -> Result<Self, Error> {
        Ok(Self::basis(generator(kind, i, d)?, mode))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> &ScalarMode {
        &self.mode
    }

    pub fn terms(&self) -> &BTreeMap<BrauerDiagram, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &BrauerDiagram) -> Option<&Scalar> {
        self.terms.get(b)
    }

    fn add_term(&mut self, b: BrauerDiagram, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&b);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.d, &self.mode);
        for (b, x) in &self.terms {
            out.add_term(b.clone(), x * c);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if self.d != other.d {
            return Err(Error::SizeMismatch(self.d, other.d));
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    /// JSON list of `[pairing, coefficient]` pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(b, c)| json!([b.to_string(), c.to_string()])).collect())
    }
}

pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, Error> {
    a.check(b)?;
    let mut out = AlgebraElement::zero(a.d, &a.mode);
    let mut powers: Vec<Scalar> = Vec::new();
    for (da, ca) in &a.terms {
        for (db, cb) in &b.terms {
            let (prod, k) = compose_unchecked(db, da);
            while powers.len() <= k {
                powers.push(Scalar::delta_pow(&a.mode, powers.len()));
            }
            out.add_term(prod, &(ca * cb) * &powers[k]);
        }
    }
    Ok(out)
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        multiply(self, rhs).expect("incompatible algebra elements")
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("incompatible algebra elements")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&Scalar::from_int(&self.mode, -1))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})[{b}]")?;
        }
        Ok(())
    }
}

struct Gens {
    t: Vec<AlgebraElement>,
    g: Vec<AlgebraElement>,
}

impl Gens {
    fn new(d: usize, mode: &ScalarMode) -> Self {
        // index 0 is unused so that t[i] is t_i
        let mk = |kind| {
            let mut v = vec![AlgebraElement::zero(d, mode)];
            v.extend((1..d).map(|i| AlgebraElement::generator(kind, i, d, mode).unwrap()));
            v
        };
        Gens { t: mk(Gen::T), g: mk(Gen::G) }
    }
}

fn prod(xs: &[&AlgebraElement]) -> AlgebraElement {
    let mut it = xs.iter();
    let first = (*it.next().unwrap()).clone();
    it.fold(first, |acc, x| &acc * x)
}

/// Evaluates every defining relation at every valid index.
pub fn verify_defining_relations(d: usize, mode: &ScalarMode) -> Vec<Check> {
    let gens = Gens::new(d, mode);
    let (t, g) = (&gens.t, &gens.g);
    let one = AlgebraElement::one(d, mode);
    let delta = Scalar::delta_pow(mode, 1);
    let mut out: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
    let mut record = |name: &'static str, ok: bool| {
        let e = out.entry(name).or_insert((0, 0));
        e.0 += 1;
        if !ok {
            e.1 += 1;
        }
    };
    for i in 1..d {
        record("t_i^2 = 1", prod(&[&t[i], &t[i]]) == one);
        record("g_i^2 = delta g_i", prod(&[&g[i], &g[i]]) == g[i].scale(&delta));
        record("t_i g_i = g_i", prod(&[&t[i], &g[i]]) == g[i]);
        record("g_i t_i = g_i", prod(&[&g[i], &t[i]]) == g[i]);
        for j in 1..d {
            if i.abs_diff(j) > 1 {
                record("t_i t_j = t_j t_i", prod(&[&t[i], &t[j]]) == prod(&[&t[j], &t[i]]));
                record("g_i g_j = g_j g_i", prod(&[&g[i], &g[j]]) == prod(&[&g[j], &g[i]]));
                record("g_i t_j = t_j g_i", prod(&[&g[i], &t[j]]) == prod(&[&t[j], &g[i]]));
            }
            if i.abs_diff(j) == 1 {
                record("g_i t_j g_i = g_i", prod(&[&g[i], &t[j], &g[i]]) == g[i]);
                record("g_i g_j g_i = g_i", prod(&[&g[i], &g[j], &g[i]]) == g[i]);
            }
        }
        if i + 1 < d {
            let j = i + 1;
            record("t_i t_i+1 t_i = t_i+1 t_i t_i+1", prod(&[&t[i], &t[j], &t[i]]) == prod(&[&t[j], &t[i], &t[j]]));
            record("g_i g_i+1 g_i = g_i", prod(&[&g[i], &g[j], &g[i]]) == g[i]);
            record("g_i+1 g_i g_i+1 = g_i+1", prod(&[&g[j], &g[i], &g[j]]) == g[j]);
            record("t_i g_i+1 g_i = t_i+1 g_i", prod(&[&t[i], &g[j], &g[i]]) == prod(&[&t[j], &g[i]]));
            record("t_i+1 g_i g_i+1 = t_i g_i+1", prod(&[&t[j], &g[i], &g[j]]) == prod(&[&t[i], &g[j]]));
        }
    }
    out.into_iter()
        .map(|(name, (total, failed))| {
            Check::exact(name, "brauer-relations", failed == 0)
                .with_detail(format!("{total} instances, {failed} failed"))
        })
        .collect()
}

/// `ξ_1 = 0`, `ξ_{k+1} = t_k ξ_k t_k + t_k - g_k`.
pub fn jucys_murphy(k: usize, d: usize, mode: &ScalarMode) -> Result<AlgebraElement, Error> {
    if k < 1 || k > d {
        return Err(Error::IndexOutOfRange { index: k, lo: 1, hi: d });
    }
    Ok(jucys_murphy_all(d, mode).swap_remove(k - 1))
}

/// `[ξ_1, .., ξ_d]`
pub fn jucys_murphy_all(d: usize, mode: &ScalarMode) -> Vec<AlgebraElement> {
    let gens = Gens::new(d, mode);
    let mut xi = vec![AlgebraElement::zero(d, mode)];
    for k in 1..d {
        let tk = &gens.t[k];
        let next = &(&prod(&[tk, &xi[k - 1], tk]) + tk) - &gens.g[k];
        xi.push(next);
    }
    xi
}

pub const REGULAR_REP_MAX_D: usize = 6;

/// Left regular representation of the generators on the diagram basis.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub basis: Vec<BrauerDiagram>,
    pub index: BTreeMap<BrauerDiagram, usize>,
    pub t: Vec<QSparse>,
    pub g: Vec<QSparse>,
}

impl RegularRep {
    /// Matrix of left multiplication by an arbitrary element.
    pub fn matrix_of(&self, x: &AlgebraElement, delta: &Rational) -> QSparse {
        left_mult_matrix(x, &self.basis, &self.index, delta)
    }
}

fn left_mult_matrix(
    x: &AlgebraElement,
    basis: &[BrauerDiagram],
    index: &BTreeMap<BrauerDiagram, usize>,
    delta: &Rational,
) -> QSparse {
    let n = basis.len();
    let mut m = QSparse::zero(n, n);
    for (j, b) in basis.iter().enumerate() {
        for (dx, cx) in x.terms() {
            let (c, k) = compose_unchecked(b, dx);
            let coeff = match cx {
                Scalar::Q(q) => Rational::from(q * &rat_pow(delta, k)),
                Scalar::P(p) => p.eval(delta) * rat_pow(delta, k),
            };
            m.add_entry(index[&c], j, &coeff);
        }
    }
    m
}

pub fn regular_representation(d: usize, delta: &Rational) -> Result<RegularRep, Error> {
    if d > REGULAR_REP_MAX_D {
        return Err(Error::SizeGuard(format!("regular representation needs d <= {REGULAR_REP_MAX_D}, got {d}")));
    }
    let basis = enumerate_diagrams(d);
    let index: BTreeMap<_, _> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let mode = ScalarMode::Specialized(delta.clone());
    let mk = |kind| {
        (1..d)
            .map(|i| {
                let x = AlgebraElement::generator(kind, i, d, &mode).unwrap();
                left_mult_matrix(&x, &basis, &index, delta)
            })
            .collect::<Vec<_>>()
    };
    let t = mk(Gen::T);
    let g = mk(Gen::G);
    Ok(RegularRep { basis, index, t, g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> ScalarMode {
        ScalarMode::Specialized(Rational::from(n))
    }

    #[test]
    fn product_examples() {
        let m = ScalarMode::Generic;
        let g1 = AlgebraElement::generator(Gen::G, 1, 2, &m).unwrap();
        let gg = &g1 * &g1;
        assert_eq!(gg, g1.scale(&Scalar::delta_pow(&m, 1)));
        assert_eq!(gg.to_json().to_string(), r#"[["1,0,3,2","δ"]]"#);

        let one = AlgebraElement::one(3, &m);
        let t1 = AlgebraElement::generator(Gen::T, 1, 3, &m).unwrap();
        assert_eq!(&one * &t1, t1);

        let t2 = AlgebraElement::generator(Gen::T, 2, 3, &m).unwrap();
        let g1 = AlgebraElement::generator(Gen::G, 1, 3, &m).unwrap();
        let g2 = AlgebraElement::generator(Gen::G, 2, 3, &m).unwrap();
        assert_eq!(prod(&[&t1, &g2, &g1]), prod(&[&t2, &g1]));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = AlgebraElement::one(2, &ScalarMode::Generic);
        let b = AlgebraElement::one(3, &ScalarMode::Generic);
        assert_eq!(multiply(&a, &b), Err(Error::SizeMismatch(2, 3)));
        let c = AlgebraElement::one(2, &q(1));
        assert_eq!(multiply(&a, &c), Err(Error::ModeMismatch));
    }

    #[test]
    fn relations_hold() {
        for (d, mode) in [(2, ScalarMode::Generic), (4, q(0)), (3, q(-2))] {
            for c in verify_defining_relations(d, &mode) {
                assert!(c.passed(), "{d} {c:?}");
            }
        }
    }

    #[test]
    fn jm_examples() {
        let m = ScalarMode::Generic;
        assert!(jucys_murphy(1, 3, &m).unwrap().is_zero());
        let t1 = AlgebraElement::generator(Gen::T, 1, 3, &m).unwrap();
        let g1 = AlgebraElement::generator(Gen::G, 1, 3, &m).unwrap();
        assert_eq!(jucys_murphy(2, 3, &m).unwrap(), &t1 - &g1);
        let xi = jucys_murphy_all(3, &m);
        assert_eq!(&xi[1] * &xi[2], &xi[2] * &xi[1]);
        assert!(jucys_murphy(4, 3, &m).is_err());
    }

    #[test]
    fn regular_rep_small() {
        let r = regular_representation(1, &Rational::from(1)).unwrap();
        assert!(r.t.is_empty() && r.basis.len() == 1);
        let r = regular_representation(2, &Rational::from(1)).unwrap();
        let t = &r.t[0];
        assert_eq!(t.mul(t), QSparse::identity(3));
        assert!(regular_representation(7, &Rational::from(1)).is_err());
    }
}

//! Partitions, double Young diagrams and up-down bitableaux.
//!
//! A double Young diagram lives in a strip of `n` columns. Row `r` of the
//! lower partition hangs below the line in strip column `r`; row `r` of the
//! upper partition stands above the line in strip column `n - r + 1`.

use std::fmt;

use rug::Rational;
use serde_json::{json, Value};

use crate::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, Error> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidInput(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Length of row `r` (1-based), zero past the end.
    pub fn row(&self, r: usize) -> usize {
        self.0.get(r.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn transpose(&self) -> Partition {
        let w = self.row(1);
        Partition((1..=w).map(|c| self.0.iter().filter(|&&p| p >= c).count()).collect())
    }

    /// Rows (1-based) that can take one more box.
    pub fn addable_rows(&self) -> Vec<usize> {
        (1..=self.len() + 1).filter(|&r| r == 1 || self.row(r - 1) > self.row(r)).collect()
    }

    /// Rows (1-based) whose last box can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&r| self.row(r) > self.row(r + 1)).collect()
    }

    pub fn with_added(&self, r: usize) -> Option<Partition> {
        if !self.addable_rows().contains(&r) {
            return None;
        }
        let mut p = self.0.clone();
        if r > p.len() {
            p.push(1);
        } else {
            p[r - 1] += 1;
        }
        Some(Partition(p))
    }

    pub fn with_removed(&self, r: usize) -> Option<Partition> {
        if !self.removable_rows().contains(&r) {
            return None;
        }
        let mut p = self.0.clone();
        p[r - 1] -= 1;
        if p[r - 1] == 0 {
            p.pop();
        }
        Some(Partition(p))
    }

    /// All partitions of `m`, in reverse lexicographic order.
    pub fn all(m: usize) -> Vec<Partition> {
        fn rec(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(cap)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, m, &mut Vec::new(), &mut out);
        out
    }

    pub fn dominates(&self, other: &Partition) -> bool {
        let (mut a, mut b) = (0, 0);
        for r in 1..=self.len().max(other.len()) {
            a += self.row(r);
            b += other.row(r);
            if a < b {
                return false;
            }
        }
        self.size() >= other.size()
    }

    /// Number of standard tableaux, by the hook length formula.
    pub fn standard_count(&self) -> u64 {
        let t = self.transpose();
        let mut hooks: u128 = 1;
        for (r, &len) in self.0.iter().enumerate() {
            for c in 1..=len {
                hooks *= (len - c + t.row(c) - (r + 1) + 1) as u128;
            }
        }
        let fact: u128 = (1..=self.size() as u128).product();
        (fact / hooks) as u64
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() || t == "∅" || t == "0" {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad partition {s:?}: {e}")))?;
        Partition::new(parts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Half {
    Lower,
    Upper,
}

impl Half {
    pub fn name(self) -> &'static str {
        match self {
            Half::Lower => "lower",
            Half::Upper => "upper",
        }
    }
}

/// Row and column inside one component, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoxPos {
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    pub lower: Partition,
    pub upper: Partition,
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lower, self.upper)
    }
}

/// Plain content: `r - c` below the line, `c - r` above.
pub fn content(pos: BoxPos, half: Half) -> i64 {
    let (r, c) = (pos.row as i64, pos.col as i64);
    match half {
        Half::Lower => r - c,
        Half::Upper => c - r,
    }
}

pub fn content_delta(pos: BoxPos, half: Half, params: &CycloParams) -> Rational {
    let shift = match half {
        Half::Lower => &params.alpha,
        Half::Upper => &params.beta,
    };
    Rational::from(content(pos, half)) + shift
}

/// Signed column heights; negative entries are boxes below the line.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleYoungDiagram {
    b: Vec<i64>,
}

impl DoubleYoungDiagram {
    pub fn empty(n: usize) -> Self {
        DoubleYoungDiagram { b: vec![0; n] }
    }

    pub fn from_bipartition(bp: &Bipartition, n: usize) -> Result<Self, Error> {
        let (l, u) = (&bp.lower, &bp.upper);
        if l.len() + u.len() > n {
            return Err(Error::InvalidInput(format!("{bp} does not fit in {n} columns")));
        }
        let mut b = vec![0i64; n];
        for (r, &p) in l.parts().iter().enumerate() {
            b[r] = -(p as i64);
        }
        for (r, &p) in u.parts().iter().enumerate() {
            b[n - 1 - r] = p as i64;
        }
        Ok(DoubleYoungDiagram { b })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn lower(&self) -> Partition {
        Partition(self.b.iter().take_while(|&&x| x < 0).map(|&x| (-x) as usize).collect())
    }

    pub fn upper(&self) -> Partition {
        Partition(self.b.iter().rev().take_while(|&&x| x > 0).map(|&x| x as usize).collect())
    }

    pub fn bipartition(&self) -> Bipartition {
        Bipartition { lower: self.lower(), upper: self.upper() }
    }

    pub fn boxes(&self) -> usize {
        self.b.iter().map(|x| x.unsigned_abs() as usize).sum()
    }

    /// Legal one-box moves from this diagram, lower half first, then by
    /// strip column, adding before removing.
    pub fn moves(&self) -> Vec<Step> {
        let n = self.n();
        let (l, u) = (self.lower(), self.upper());
        let mut out = Vec::new();
        for col in 1..=n {
            let r = col;
            if self.b[col - 1] <= 0 {
                if l.addable_rows().contains(&r) {
                    out.push(Step::new(1, Half::Lower, BoxPos { row: r, col: l.row(r) + 1 }, col));
                }
                if l.removable_rows().contains(&r) {
                    out.push(Step::new(-1, Half::Lower, BoxPos { row: r, col: l.row(r) }, col));
                }
            }
        }
        for col in 1..=n {
            let r = n - col + 1;
            if self.b[col - 1] >= 0 {
                if u.addable_rows().contains(&r) {
                    out.push(Step::new(1, Half::Upper, BoxPos { row: r, col: u.row(r) + 1 }, col));
                }
                if u.removable_rows().contains(&r) {
                    out.push(Step::new(-1, Half::Upper, BoxPos { row: r, col: u.row(r) }, col));
                }
            }
        }
        out
    }

    pub fn apply(&self, step: &Step) -> DoubleYoungDiagram {
        let mut b = self.b.clone();
        let sign = match step.half {
            Half::Lower => -1,
            Half::Upper => 1,
        };
        b[step.column - 1] += sign * step.eta as i64;
        DoubleYoungDiagram { b }
    }
}

impl fmt::Display for DoubleYoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bipartition())
    }
}

impl fmt::Debug for DoubleYoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `wt(Y) = sum b_i e_i`.
pub fn weight(y: &DoubleYoungDiagram) -> Vec<i64> {
    y.b.clone()
}

/// One box added (`eta = 1`) or removed (`eta = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub eta: i8,
    pub half: Half,
    pub pos: BoxPos,
    /// Strip column touched, 1-based.
    pub column: usize,
}

impl Step {
    fn new(eta: i8, half: Half, pos: BoxPos, column: usize) -> Self {
        Step { eta, half, pos, column }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpDownBitableau {
    /// `shapes[0]` is empty; `shapes[k]` is reached after step `k`.
    shapes: Vec<DoubleYoungDiagram>,
    steps: Vec<Step>,
}

impl UpDownBitableau {
    /// Builds a path from its moves, checking each one is legal.
    pub fn from_steps(n: usize, steps: Vec<Step>) -> Result<Self, Error> {
        let mut shapes = vec![DoubleYoungDiagram::empty(n)];
        for s in &steps {
            let cur = shapes.last().unwrap();
            if !cur.moves().contains(s) {
                return Err(Error::InvalidInput(format!("illegal step {s:?} from {cur}")));
            }
            shapes.push(cur.apply(s));
        }
        Ok(UpDownBitableau { shapes, steps })
    }

    pub fn d(&self) -> usize {
        self.steps.len()
    }

    pub fn n(&self) -> usize {
        self.shapes[0].n()
    }

    pub fn shapes(&self) -> &[DoubleYoungDiagram] {
        &self.shapes
    }

    pub fn shape(&self, k: usize) -> &DoubleYoungDiagram {
        &self.shapes[k]
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn last(&self) -> &DoubleYoungDiagram {
        self.shapes.last().unwrap()
    }

    /// `[[eta, [row, col], half], ...]`
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.steps.iter().map(|s| json!([s.eta, [s.pos.row, s.pos.col], s.half.name()])).collect(),
        )
    }

    pub fn from_json(n: usize, v: &Value) -> Result<Self, Error> {
        let bad = || Error::InvalidInput(format!("bad path JSON {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let mut steps = Vec::with_capacity(arr.len());
        let mut cur = DoubleYoungDiagram::empty(n);
        for item in arr {
            let eta = item.get(0).and_then(Value::as_i64).ok_or_else(bad)?;
            let row = item.get(1).and_then(|p| p.get(0)).and_then(Value::as_u64).ok_or_else(bad)?;
            let col = item.get(1).and_then(|p| p.get(1)).and_then(Value::as_u64).ok_or_else(bad)?;
            let half = match item.get(2).and_then(Value::as_str) {
                Some("lower") => Half::Lower,
                Some("upper") => Half::Upper,
                _ => return Err(bad()),
            };
            let pos = BoxPos { row: row as usize, col: col as usize };
            let step = cur
                .moves()
                .into_iter()
                .find(|s| s.eta as i64 == eta && s.half == half && s.pos == pos)
                .ok_or_else(bad)?;
            cur = cur.apply(&step);
            steps.push(step);
        }
        Self::from_steps(n, steps)
    }
}

impl fmt::Display for UpDownBitableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.shapes.iter().map(|y| y.to_string()).collect();
        write!(f, "{}", s.join(" -> "))
    }
}

impl fmt::Debug for UpDownBitableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All up-down bitableaux of length `d` in a strip of width `n`,
/// depth first in the order of [`DoubleYoungDiagram::moves`].
pub fn enumerate_updown(d: usize, n: usize) -> Result<Vec<UpDownBitableau>, Error> {
    if n < 2 * d {
        return Err(Error::InvalidInput(format!("strip width {n} is below 2d = {}", 2 * d)));
    }
    fn rec(
        d: usize,
        shapes: &mut Vec<DoubleYoungDiagram>,
        steps: &mut Vec<Step>,
        out: &mut Vec<UpDownBitableau>,
    ) {
        if steps.len() == d {
            out.push(UpDownBitableau { shapes: shapes.clone(), steps: steps.clone() });
            return;
        }
        let cur = shapes.last().unwrap().clone();
        for m in cur.moves() {
            shapes.push(cur.apply(&m));
            steps.push(m);
            rec(d, shapes, steps, out);
            shapes.pop();
            steps.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, &mut vec![DoubleYoungDiagram::empty(n)], &mut Vec::new(), &mut out);
    Ok(out)
}

/// `i_k = eta_k c_delta(B_k)`.
pub fn eigenvalue_sequence(y: &UpDownBitableau, params: &CycloParams) -> Vec<Rational> {
    y.steps
        .iter()
        .map(|s| {
            let c = content_delta(s.pos, s.half, params);
            if s.eta < 0 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Every step touches the lower half.
pub fn is_small(y: &UpDownBitableau) -> bool {
    y.steps.iter().all(|s| s.half == Half::Lower)
}

/// `Y(lambda)` from `(lambda, ∅)` and `wt(lambda) = (delta/2)(1,...,1) + wt(Y(lambda))`.
pub fn partition_embedding(
    lambda: &Partition,
    n: usize,
    delta: &Rational,
) -> Result<(DoubleYoungDiagram, Vec<Rational>), Error> {
    let y = DoubleYoungDiagram::from_bipartition(&Bipartition { lower: lambda.clone(), upper: Partition::empty() }, n)?;
    let half = Rational::from(delta / 2u32);
    let wt = weight(&y).into_iter().map(|b| Rational::from(b) + &half).collect();
    Ok((y, wt))
}

/// Level-2 cyclotomic parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloParams {
    pub d: usize,
    pub n: usize,
    pub delta: Rational,
    pub alpha: Rational,
    pub beta: Rational,
}

impl CycloParams {
    pub fn new(d: usize, n: usize, delta: Rational) -> Result<Self, Error> {
        if n < 2 * d {
            return Err(Error::InvalidInput(format!("n = {n} must be at least 2d = {}", 2 * d)));
        }
        let big_n = Rational::from(2 * n);
        let alpha = (1 - delta.clone()) / 2u32;
        let beta = (Rational::from(&delta + &big_n) - 1u32) / 2u32;
        Ok(CycloParams { d, n, delta, alpha, beta })
    }

    /// `N = 2n`.
    pub fn big_n(&self) -> usize {
        2 * self.n
    }

    /// `omega_0 ..= omega_upto`.
    pub fn omegas(&self, upto: usize) -> Vec<Rational> {
        let big_n = Rational::from(self.big_n());
        let mut w = vec![big_n.clone(), (&big_n * Rational::from(&big_n - 1u32)) / 2u32];
        let sum = Rational::from(&self.alpha + &self.beta);
        let prod = Rational::from(&self.alpha * &self.beta);
        while w.len() <= upto {
            let k = w.len();
            let next = Rational::from(&sum * &w[k - 1]) - Rational::from(&prod * &w[k - 2]);
            w.push(next);
        }
        w.truncate(upto + 1);
        w
    }

    pub fn omega(&self, a: usize) -> Rational {
        self.omegas(a).pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(3), vec![p("(3)"), p("(2,1)"), p("(1,1,1)")]);
        assert_eq!(p("(3,1)").transpose(), p("(2,1,1)"));
        assert_eq!(p("(3,2)").standard_count(), 5);
        assert_eq!(Partition::empty().to_string(), "∅");
        assert!(p("(2,1)").dominates(&p("(1,1,1)")));
        assert!(!p("(1,1,1)").dominates(&p("(2,1)")));
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn contents() {
        assert_eq!(content(BoxPos { row: 1, col: 1 }, Half::Lower), 0);
        assert_eq!(content(BoxPos { row: 1, col: 3 }, Half::Lower), -2);
        assert_eq!(content(BoxPos { row: 2, col: 1 }, Half::Upper), -1);
        let pr = CycloParams::new(2, 4, q("1")).unwrap();
        assert_eq!(content_delta(BoxPos { row: 1, col: 1 }, Half::Lower, &pr), pr.alpha);
        assert_eq!(content_delta(BoxPos { row: 1, col: 1 }, Half::Upper, &pr), pr.beta);
        assert_eq!(content_delta(BoxPos { row: 3, col: 1 }, Half::Lower, &pr), q("2"));
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&DoubleYoungDiagram::empty(4)), vec![0; 4]);
        let bp = Bipartition { lower: p("(1)"), upper: Partition::empty() };
        assert_eq!(weight(&DoubleYoungDiagram::from_bipartition(&bp, 4).unwrap()), vec![-1, 0, 0, 0]);
        let bp = Bipartition { lower: p("(3,2,1,1)"), upper: p("(2,2,1)") };
        assert_eq!(
            weight(&DoubleYoungDiagram::from_bipartition(&bp, 10).unwrap()),
            vec![-3, -2, -1, -1, 0, 0, 0, 1, 2, 2]
        );
        let (_, wt) = partition_embedding(&p("(1)"), 4, &q("2")).unwrap();
        assert_eq!(wt, vec![q("0"), q("1"), q("1"), q("1")]);
        let (_, wt) = partition_embedding(&p("(1,1)"), 4, &q("2")).unwrap();
        assert_eq!(wt, vec![q("0"), q("0"), q("1"), q("1")]);
    }

    #[test]
    fn params() {
        let pr = CycloParams::new(2, 4, q("1")).unwrap();
        assert_eq!((pr.alpha.clone(), pr.beta.clone()), (q("0"), q("4")));
        assert_eq!(pr.omegas(2), vec![q("8"), q("28"), q("112")]);
        let pr = CycloParams::new(2, 4, q("0")).unwrap();
        assert_eq!((pr.alpha, pr.beta), (q("1/2"), q("7/2")));
        assert!(CycloParams::new(3, 5, q("0")).is_err());
    }

    #[test]
    fn enumeration_d2_matches_listing() {
        let paths = enumerate_updown(2, 4).unwrap();
        let ends: Vec<String> = paths.iter().map(|y| y.last().to_string()).collect();
        // v1, v3, v2, v5, v6, v7, v8, v4
        assert_eq!(
            ends,
            ["((2),∅)", "(∅,∅)", "((1,1),∅)", "((1),(1))", "((1),(1))", "(∅,(1,1))", "(∅,(2))", "(∅,∅)"]
        );
        let pr = CycloParams::new(2, 4, q("1")).unwrap();
        let (a, b) = (pr.alpha.clone(), pr.beta.clone());
        let one = Rational::from(1);
        let eig: Vec<Vec<Rational>> = paths.iter().map(|y| eigenvalue_sequence(y, &pr)).collect();
        assert_eq!(eig[0], vec![a.clone(), Rational::from(&a - &one)]);
        assert_eq!(eig[1], vec![a.clone(), Rational::from(-&a)]);
        assert_eq!(eig[7], vec![b.clone(), Rational::from(-&b)]);
        let small: Vec<bool> = paths.iter().map(is_small).collect();
        assert_eq!(small, [true, true, true, false, false, false, false, false]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_updown(1, 2).unwrap().len(), 2);
        assert_eq!(enumerate_updown(3, 6).unwrap().len(), 32);
        assert!(enumerate_updown(3, 5).is_err());
        // level-2 cyclotomic dimension 2^d (2d-1)!!
        for d in 1..=4 {
            let mut ends = std::collections::BTreeMap::new();
            for y in enumerate_updown(d, 2 * d).unwrap() {
                *ends.entry(y.last().clone()).or_insert(0u64) += 1;
            }
            let sq: u64 = ends.values().map(|c| c * c).sum();
            assert_eq!(sq, (1 << d) * crate::diagram::double_factorial(2 * d as u64 - 1));
        }
    }

    #[test]
    fn path_json_round_trip() {
        for y in enumerate_updown(3, 6).unwrap() {
            assert_eq!(UpDownBitableau::from_json(6, &y.to_json()).unwrap(), y);
        }
    }
}

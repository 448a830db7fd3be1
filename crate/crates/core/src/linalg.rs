//! Linear algebra over `ℚ` (exact) and over complex floats.

use std::collections::BTreeMap;
use std::ops::{Index, IndexMut};

use rug::{Float, Rational};

use crate::numeric::AppComplex;

/// Sparse rational matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSparse {
    rows: usize,
    cols: Vec<BTreeMap<usize, Rational>>,
}

impl QSparse {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QSparse { rows, cols: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.cols[i].insert(i, Rational::from(1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: &Rational) {
        if *v == 0 {
            return;
        }
        let col = &mut self.cols[j];
        let e = col.entry(i).or_default();
        *e += v;
        if *e == 0 {
            col.remove(&i);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, Rational> {
        &self.cols[j]
    }

    pub fn mul(&self, other: &QSparse) -> QSparse {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let mut out = QSparse::zero(self.rows, other.cols());
        for (j, col) in other.cols.iter().enumerate() {
            for (k, b) in col {
                for (i, a) in &self.cols[*k] {
                    out.add_entry(*i, j, &Rational::from(a * b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QSparse) -> QSparse {
        let mut out = self.clone();
        for (j, col) in other.cols.iter().enumerate() {
            for (i, v) in col {
                out.add_entry(*i, j, v);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QSparse {
        let mut out = QSparse::zero(self.rows, self.cols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                out.add_entry(*i, j, &Rational::from(v * c));
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.cols().min(self.rows)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> QMat {
        let mut m = QMat::zeros(self.rows, self.cols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    /// `self * v`
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::new(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += Rational::from(a * x);
            }
        }
        out
    }
}

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Index<(usize, usize)> for QMat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rational::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if *a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if *b != 0 {
                        out[(i, j)] += Rational::from(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| Rational::from(a + b)).collect();
        QMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| Rational::from(a - b)).collect();
        QMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rational) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| Rational::from(a * c)).collect() }
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::new();
                for (a, x) in self.row(i).iter().zip(v) {
                    if *a != 0 && *x != 0 {
                        s += Rational::from(a * x);
                    }
                }
                s
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m[(i, c)] != 0) else { continue };
            m.swap_rows(r, p);
            let inv = Rational::from(m[(r, c)].recip_ref());
            for j in c..m.cols {
                let v = Rational::from(&m[(r, j)] * &inv);
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && m[(i, c)] != 0 {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if m[(r, j)] != 0 {
                            let v = Rational::from(&f * &m[(r, j)]);
                            m[(i, j)] -= v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::new(); self.cols];
                v[f] = Rational::from(1);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = Rational::from(-&r[(row, f)]);
                }
                v
            })
            .collect()
    }

    /// Some solution of `self x = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::new(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::from(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

/// A subspace of `ℚ^n` kept as an RREF basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(n: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut s = Self::zero(n);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Residue of `v` modulo the subspace, zero at every pivot.
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] != 0 {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if *r != 0 {
                        *x -= Rational::from(&f * r);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| *x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| *x != 0) else { return false };
        let inv = Rational::from(v[p].recip_ref());
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p] != 0 {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if *r != 0 {
                        *x -= Rational::from(&f * r);
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` (which must lie in the subspace) in the RREF basis.
    pub fn coords(&self, v: &[Rational]) -> Vec<Rational> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }
}

/// Action of a family of operators on a subquotient `upper / lower`.
///
/// `lower` must be contained in `upper` and both must be stable under every
/// operator. Returns one dense matrix per operator.
pub fn subquotient_action(ops: &[QMat], upper: &Subspace, lower: &Subspace) -> Vec<QMat> {
    // complement of lower inside upper, reduced against lower
    let mut comp = Subspace::zero(upper.ambient());
    for v in upper.basis() {
        let r = lower.reduce(v.clone());
        comp.insert(r);
    }
    let k = comp.dim();
    ops.iter()
        .map(|op| {
            let mut m = QMat::zeros(k, k);
            for (j, b) in comp.basis().iter().enumerate() {
                let img = lower.reduce(op.apply(b));
                let c = comp.coords(&img);
                for (i, x) in c.into_iter().enumerate() {
                    m[(i, j)] = x;
                }
            }
            m
        })
        .collect()
}

/// Complex matrix stored as sparse rows; exact zeros are never kept.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<BTreeMap<usize, AppComplex>>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        CMat { rows, cols, prec, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.set(i, i, AppComplex::one(prec));
        }
        m
    }

    pub fn diag_rational(d: &[Rational], prec: u32) -> Self {
        let mut m = Self::zeros(d.len(), d.len(), prec);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, AppComplex::from_rational(x, prec));
        }
        m
    }

    pub fn from_qmat(q: &QMat, prec: u32) -> Self {
        let mut m = Self::zeros(q.rows(), q.cols(), prec);
        for i in 0..q.rows() {
            for j in 0..q.cols() {
                m.set(i, j, AppComplex::from_rational(&q[(i, j)], prec));
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

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> CMat {
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, x)| (*j, x.with_prec(prec))).collect())
            .collect();
        CMat { rows: self.rows, cols: self.cols, prec, data }
    }

    pub fn get(&self, i: usize, j: usize) -> AppComplex {
        self.data[i].get(&j).cloned().unwrap_or_else(|| AppComplex::zero(self.prec))
    }

    pub fn set(&mut self, i: usize, j: usize, v: AppComplex) {
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, AppComplex> {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = CMat::zeros(self.rows, other.cols, self.prec);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, AppComplex> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let p = a * b;
                    match acc.get_mut(j) {
                        Some(x) => *x = &*x + &p,
                        None => {
                            acc.insert(*j, p);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        self.zip(other, false)
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.zip(other, true)
    }

    fn zip(&self, other: &CMat, negate: bool) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let mut out = self.clone();
        for (i, row) in other.data.iter().enumerate() {
            for (j, b) in row {
                let cur = out.get(i, *j);
                out.set(i, *j, if negate { &cur - b } else { &cur + b });
            }
        }
        out
    }

    pub fn scale(&self, c: &AppComplex) -> CMat {
        let mut out = CMat::zeros(self.rows, self.cols, self.prec);
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in row {
                out.set(i, *j, a * c);
            }
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> CMat {
        self.scale(&AppComplex::from_rational(c, self.prec))
    }

    pub fn transpose(&self) -> CMat {
        let mut t = CMat::zeros(self.cols, self.rows, self.prec);
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in row {
                t.data[*j].insert(i, a.clone());
            }
        }
        t
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMat {
        let mut m = CMat::zeros(rows.len(), cols.len(), self.prec);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if let Some(v) = self.data[i].get(&j) {
                    m.data[a].insert(b, v.clone());
                }
            }
        }
        m
    }

    pub fn max_abs(&self) -> Float {
        let mut m = Float::new(self.prec);
        for row in &self.data {
            for x in row.values() {
                let a = x.abs();
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(i, row)| row.keys().all(|&j| j == i))
    }

    /// Entries in row-major order, zeros included.
    pub fn flatten(&self) -> Vec<AppComplex> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                v.push(self.get(i, j));
            }
        }
        v
    }
}

/// `max |a - b| / max(1, max |a|, max |b|)`
pub fn rel_residual(a: &CMat, b: &CMat) -> f64 {
    let diff = a.sub(b).max_abs();
    let mut scale = Float::with_val(a.prec(), 1);
    for m in [a.max_abs(), b.max_abs()] {
        if m > scale {
            scale = m;
        }
    }
    (diff / scale).to_f64()
}

/// Singular values of the matrix whose columns are `cols`, largest first.
///
/// One-sided Jacobi: columns are rotated pairwise until mutually orthogonal,
/// then the singular values are the column norms.
pub fn singular_values(cols: &[Vec<AppComplex>], prec: u32) -> Vec<Float> {
    let mut a: Vec<Vec<AppComplex>> = cols.to_vec();
    let n = a.len();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    let norm2 = |v: &[AppComplex]| -> Float {
        let mut s = Float::new(prec);
        for x in v {
            s += Float::with_val(prec, x.re.square_ref());
            s += Float::with_val(prec, x.im.square_ref());
        }
        s
    };
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm2(&a[p]);
                let beta = norm2(&a[q]);
                if alpha.is_zero() || beta.is_zero() {
                    continue;
                }
                let mut gamma = AppComplex::zero(prec);
                for (x, y) in a[p].iter().zip(&a[q]) {
                    gamma = &gamma + &(&x.conj() * y);
                }
                let g = gamma.abs();
                let thresh = Float::with_val(prec, &alpha * &beta).sqrt() * &eps;
                if g <= thresh {
                    continue;
                }
                rotated = true;
                let phase = AppComplex::new(
                    Float::with_val(prec, &gamma.re / &g),
                    Float::with_val(prec, &gamma.im / &g),
                );
                let zeta = Float::with_val(prec, &beta - &alpha) / (Float::with_val(prec, &g * 2u32));
                let root = (Float::with_val(prec, zeta.square_ref()) + 1u32).sqrt();
                let t = if zeta >= 0 {
                    Float::with_val(prec, 1) / (Float::with_val(prec, &zeta + &root))
                } else {
                    Float::with_val(prec, -1) / (Float::with_val(prec, &root - &zeta))
                };
                let c = Float::with_val(prec, 1) / (Float::with_val(prec, t.square_ref()) + 1u32).sqrt();
                let s = Float::with_val(prec, &c * &t);
                let ph_conj = phase.conj();
                for i in 0..a[p].len() {
                    let ap = a[p][i].clone();
                    let aq = &a[q][i] * &ph_conj;
                    a[p][i] = &ap.scale(&c) - &aq.scale(&s);
                    a[q][i] = &ap.scale(&s) + &aq.scale(&c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<Float> = a.iter().map(|v| norm2(v).sqrt()).collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}
